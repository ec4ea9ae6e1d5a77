//! Bounded cochain complexes of graded free modules and chain maps between
//! them.
//!
//! Free resolutions live in nonpositive cohomological degrees: a resolution
//! `... -> F_1 -> F_0` is stored with `F_p` at index `-p`.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ideal::MonomialIdeal;
use crate::linalg::{homology, DenseMatrix, Subquotient};
use crate::module::{FreeModule, TermMatrix};
use crate::ring::{Monomial, Multidegree};

/// `X^lo -> X^{lo+1} -> ... -> X^hi`, zero outside `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex<F> {
    nvars: usize,
    lo: i32,
    terms: Vec<FreeModule>,
    diffs: Vec<TermMatrix<F>>,
}

impl<F: Field> FreeComplex<F> {
    /// `diffs[k]` maps `terms[k]` to `terms[k+1]`; checks `d∘d = 0`.
    pub fn new(nvars: usize, lo: i32, terms: Vec<FreeModule>, diffs: Vec<TermMatrix<F>>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidInput("a complex needs at least one term".into()));
        }
        if diffs.len() + 1 != terms.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len() - 1,
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.source() != &terms[k] || d.target() != &terms[k + 1] {
                return Err(Error::DimensionMismatch(format!(
                    "differential at index {} does not match its terms",
                    lo + k as i32
                )));
            }
        }
        for k in 1..diffs.len() {
            if !diffs[k].coeffs().mul(diffs[k - 1].coeffs()).is_zero() {
                return Err(Error::CompositionNonzero {
                    context: format!("free complex at index {}", lo + k as i32),
                });
            }
        }
        Ok(FreeComplex {
            nvars,
            lo,
            terms,
            diffs,
        })
    }

    /// A single free module placed at index `at`.
    pub fn concentrated(m: FreeModule, at: i32) -> Self {
        FreeComplex {
            nvars: m.nvars(),
            lo: at,
            terms: vec![m],
            diffs: Vec::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.lo + self.terms.len() as i32 - 1
    }

    pub fn term(&self, i: i32) -> FreeModule {
        if i < self.lo || i > self.hi() {
            return FreeModule::zero(self.nvars);
        }
        self.terms[(i - self.lo) as usize].clone()
    }

    pub fn term_ref(&self, i: i32) -> Option<&FreeModule> {
        if i < self.lo || i > self.hi() {
            return None;
        }
        Some(&self.terms[(i - self.lo) as usize])
    }

    pub fn rank(&self, i: i32) -> usize {
        self.term_ref(i).map_or(0, FreeModule::rank)
    }

    /// Ranks from `lo` to `hi`.
    pub fn ranks(&self) -> Vec<usize> {
        self.terms.iter().map(FreeModule::rank).collect()
    }

    /// The differential `X^i -> X^{i+1}`.
    pub fn diff(&self, i: i32) -> TermMatrix<F> {
        if i >= self.lo && i < self.hi() {
            return self.diffs[(i - self.lo) as usize].clone();
        }
        TermMatrix::zero(self.term(i), self.term(i + 1))
    }

    pub fn diff_ref(&self, i: i32) -> Option<&TermMatrix<F>> {
        if i >= self.lo && i < self.hi() {
            Some(&self.diffs[(i - self.lo) as usize])
        } else {
            None
        }
    }

    /// The degree-`a` strand of the differential at `i`.
    pub fn diff_strand(&self, i: i32, a: &Multidegree) -> DenseMatrix<F> {
        match self.diff_ref(i) {
            Some(d) => d.strand(a),
            None => DenseMatrix::zeros(
                self.term_ref(i + 1).map_or(0, |t| t.active(a).len()),
                self.term_ref(i).map_or(0, |t| t.active(a).len()),
            ),
        }
    }

    /// `H^i` of the degree-`a` strand.
    pub fn cohomology_strand(&self, i: i32, a: &Multidegree) -> Subquotient<F> {
        homology(&self.diff_strand(i - 1, a), &self.diff_strand(i, a)).expect("d∘d = 0 checked on construction")
    }

    /// `X[s]`: `X[s]^i = X^{i+s}` with differentials multiplied by `(-1)^s`.
    pub fn shift(&self, s: i32) -> Self {
        let sign = if s.rem_euclid(2) == 1 { -F::one() } else { F::one() };
        FreeComplex {
            nvars: self.nvars,
            lo: self.lo - s,
            terms: self.terms.clone(),
            diffs: self.diffs.iter().map(|d| d.scale(sign)).collect(),
        }
    }

    /// `σ_{>=c}`: keeps the terms at indices `>= c`.
    pub fn brutal_truncate_above(&self, c: i32) -> Result<Self> {
        if c < self.lo || c > self.hi() {
            return Err(Error::InvalidInput(format!(
                "truncation index {c} outside [{}, {}]",
                self.lo,
                self.hi()
            )));
        }
        let k = (c - self.lo) as usize;
        Ok(FreeComplex {
            nvars: self.nvars,
            lo: c,
            terms: self.terms[k..].to_vec(),
            diffs: self.diffs[k..].to_vec(),
        })
    }

    /// Every generator degree of every term.
    pub fn all_degrees(&self) -> impl Iterator<Item = &Multidegree> {
        self.terms.iter().flat_map(|t| t.degrees().iter())
    }
}

/// A degree-preserving chain map between free complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap<F> {
    pub source: FreeComplex<F>,
    pub target: FreeComplex<F>,
    components: Vec<TermMatrix<F>>,
    lo: i32,
}

impl<F: Field> ChainMap<F> {
    /// `components[k]` is the map at index `lo + k`; indices outside the
    /// supplied range are zero. Commutation with the differentials is checked.
    pub fn new(source: FreeComplex<F>, target: FreeComplex<F>, lo: i32, components: Vec<TermMatrix<F>>) -> Result<Self> {
        for (k, c) in components.iter().enumerate() {
            let i = lo + k as i32;
            if c.source() != &source.term(i) || c.target() != &target.term(i) {
                return Err(Error::DimensionMismatch(format!("chain map component {i} has wrong modules")));
            }
        }
        let map = ChainMap {
            source,
            target,
            components,
            lo,
        };
        let from = map.source.lo().min(map.target.lo()) - 1;
        let to = map.source.hi().max(map.target.hi());
        for i in from..=to {
            let left = map.target.diff(i).coeffs().mul(map.component(i).coeffs());
            let right = map.component(i + 1).coeffs().mul(map.source.diff(i).coeffs());
            if left != right {
                return Err(Error::NotChainCompatible {
                    context: format!("chain map fails to commute at index {i}"),
                });
            }
        }
        Ok(map)
    }

    pub fn component(&self, i: i32) -> TermMatrix<F> {
        let k = i - self.lo;
        if k >= 0 && (k as usize) < self.components.len() {
            return self.components[k as usize].clone();
        }
        TermMatrix::zero(self.source.term(i), self.target.term(i))
    }

    pub fn compose(&self, first: &ChainMap<F>) -> Result<ChainMap<F>> {
        if first.target != self.source {
            return Err(Error::DimensionMismatch("composing chain maps through different complexes".into()));
        }
        let lo = first.source.lo();
        let comps = (lo..=first.source.hi())
            .map(|i| self.component(i).compose(&first.component(i)))
            .collect::<Result<Vec<_>>>()?;
        ChainMap::new(first.source.clone(), self.target.clone(), lo, comps)
    }
}

/// A bounded double complex `X^{i,j}` with commuting horizontal (`i`) and
/// vertical (`j`) differentials. The total complex uses
/// `d = d_h + (-1)^i d_v`.
#[derive(Clone, Debug)]
pub struct DoubleComplex<F> {
    nvars: usize,
    cols: (i32, i32),
    rows: (i32, i32),
    // terms[i][j]
    terms: Vec<Vec<FreeModule>>,
    // horizontal[i][j]: X^{i,j} -> X^{i+1,j}
    horizontal: Vec<Vec<TermMatrix<F>>>,
    // vertical[i][j]: X^{i,j} -> X^{i,j+1}
    vertical: Vec<Vec<TermMatrix<F>>>,
}

impl<F: Field> DoubleComplex<F> {
    /// The double complex `A^i ⊗ B^j`.
    pub fn tensor(a: &FreeComplex<F>, b: &FreeComplex<F>) -> Self {
        let nvars = a.nvars();
        let mut terms = Vec::new();
        let mut horizontal = Vec::new();
        let mut vertical = Vec::new();
        for i in a.lo()..=a.hi() {
            let mut tcol = Vec::new();
            let mut hcol = Vec::new();
            let mut vcol = Vec::new();
            for j in b.lo()..=b.hi() {
                tcol.push(tensor_free(&a.term(i), &b.term(j)));
                hcol.push(tensor_maps(&a.diff(i), &TermMatrix::identity(&b.term(j))));
                vcol.push(tensor_maps(&TermMatrix::identity(&a.term(i)), &b.diff(j)));
            }
            terms.push(tcol);
            horizontal.push(hcol);
            vertical.push(vcol);
        }
        DoubleComplex {
            nvars,
            cols: (a.lo(), a.hi()),
            rows: (b.lo(), b.hi()),
            terms,
            horizontal,
            vertical,
        }
    }

    /// A single row (vertical extent one) built from a complex.
    pub fn row(a: &FreeComplex<F>) -> Self {
        Self::tensor(a, &FreeComplex::concentrated(FreeModule::ring(a.nvars()), 0))
    }

    /// A single column built from a complex.
    pub fn column(b: &FreeComplex<F>) -> Self {
        Self::tensor(&FreeComplex::concentrated(FreeModule::ring(b.nvars()), 0), b)
    }

    fn term(&self, i: i32, j: i32) -> Option<&FreeModule> {
        if i < self.cols.0 || i > self.cols.1 || j < self.rows.0 || j > self.rows.1 {
            return None;
        }
        Some(&self.terms[(i - self.cols.0) as usize][(j - self.rows.0) as usize])
    }

    /// Positions `(i, j)` with `i + j = n`, with the offset of each block.
    fn layout(&self, n: i32) -> (FreeModule, Vec<(i32, i32, usize)>) {
        let mut m = FreeModule::zero(self.nvars);
        let mut blocks = Vec::new();
        for i in self.cols.0..=self.cols.1 {
            let j = n - i;
            if let Some(t) = self.term(i, j) {
                blocks.push((i, j, m.rank()));
                m = m.direct_sum(t);
            }
        }
        (m, blocks)
    }

    pub fn total(&self) -> FreeComplex<F> {
        let lo = self.cols.0 + self.rows.0;
        let hi = self.cols.1 + self.rows.1;
        let layouts: Vec<_> = (lo..=hi).map(|n| self.layout(n)).collect();
        let mut diffs = Vec::new();
        for n in lo..hi {
            let (src, sb) = &layouts[(n - lo) as usize];
            let (dst, db) = &layouts[(n + 1 - lo) as usize];
            let mut c = DenseMatrix::zeros(dst.rank(), src.rank());
            for &(i, j, off) in sb {
                let sign = if i.rem_euclid(2) == 1 { -F::one() } else { F::one() };
                for &(i2, j2, off2) in db {
                    if i2 == i + 1 && j2 == j {
                        let h = &self.horizontal[(i - self.cols.0) as usize][(j - self.rows.0) as usize];
                        c.add_block(off2, off, h.coeffs(), F::one());
                    }
                    if i2 == i && j2 == j + 1 {
                        let v = &self.vertical[(i - self.cols.0) as usize][(j - self.rows.0) as usize];
                        c.add_block(off2, off, v.coeffs(), sign);
                    }
                }
            }
            diffs.push(TermMatrix::from_parts_unchecked(src.clone(), dst.clone(), c));
        }
        let terms = layouts.into_iter().map(|(m, _)| m).collect();
        FreeComplex::new(self.nvars, lo, terms, diffs).expect("total complex of a double complex squares to zero")
    }
}

/// `A ⊗ B` for free modules, generators ordered with `A` major.
pub fn tensor_free(a: &FreeModule, b: &FreeModule) -> FreeModule {
    let mut degs = Vec::with_capacity(a.rank() * b.rank());
    for da in a.degrees() {
        for db in b.degrees() {
            degs.push(da + db);
        }
    }
    FreeModule::new(a.nvars(), degs).expect("consistent lengths")
}

/// Kronecker product of term matrices.
pub fn tensor_maps<F: Field>(f: &TermMatrix<F>, g: &TermMatrix<F>) -> TermMatrix<F> {
    let (fr, fc) = f.coeffs().shape();
    let (gr, gc) = g.coeffs().shape();
    let mut c = DenseMatrix::zeros(fr * gr, fc * gc);
    for i in 0..fr {
        for j in 0..fc {
            let x = f.coeffs()[(i, j)];
            if x.is_zero() {
                continue;
            }
            c.add_block(i * gr, j * gc, g.coeffs(), x);
        }
    }
    TermMatrix::from_parts_unchecked(
        tensor_free(f.source(), g.source()),
        tensor_free(f.target(), g.target()),
        c,
    )
}

/// Tensor product of free complexes (the total complex of `A ⊗ B`).
pub fn tensor_complexes<F: Field>(a: &FreeComplex<F>, b: &FreeComplex<F>) -> FreeComplex<F> {
    DoubleComplex::tensor(a, b).total()
}

/// `f ⊗ g` as a map of total complexes; both must preserve indices.
pub fn tensor_chain_maps<F: Field>(f: &ChainMap<F>, g: &ChainMap<F>) -> Result<ChainMap<F>> {
    let src = tensor_complexes(&f.source, &g.source);
    let dst = tensor_complexes(&f.target, &g.target);
    let mut comps = Vec::new();
    for n in src.lo()..=src.hi() {
        let s = src.term(n);
        let t = dst.term(n);
        let mut c = DenseMatrix::zeros(t.rank(), s.rank());
        // Block offsets in source and target layouts.
        let mut soff = 0;
        for i in f.source.lo()..=f.source.hi() {
            let j = n - i;
            let sa = f.source.rank(i);
            let sb = g.source.rank(j);
            if sa * sb == 0 {
                continue;
            }
            let mut toff = 0;
            for i2 in f.target.lo()..=f.target.hi() {
                let j2 = n - i2;
                let ta = f.target.rank(i2);
                let tb = g.target.rank(j2);
                if ta * tb == 0 {
                    continue;
                }
                if i2 == i {
                    let block = tensor_maps(&f.component(i), &g.component(j));
                    c.set_block(toff, soff, block.coeffs());
                }
                toff += ta * tb;
            }
            soff += sa * sb;
        }
        comps.push(TermMatrix::new(s, t, c)?);
    }
    ChainMap::new(src.clone(), dst, src.lo(), comps)
}

/// Subsets of `0..r` of size `p` in lexicographic order.
pub(crate) fn subsets(r: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, r: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for k in start..r {
            cur.push(k);
            rec(k + 1, r, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, r, p, &mut Vec::new(), &mut out);
    out
}

fn product(ms: &[Monomial], idx: &[usize], nvars: usize) -> Monomial {
    idx.iter().fold(Monomial::one(nvars), |acc, &k| acc.mul(&ms[k]))
}

fn lcm_of(ms: &[Monomial], idx: &[usize], nvars: usize) -> Monomial {
    idx.iter().fold(Monomial::one(nvars), |acc, &k| acc.lcm(&ms[k]))
}

/// The Koszul complex on `x_1^t, ..., x_r^t` as a complex in degrees
/// `-r..0`: the term at `-p` has one generator `e_S` of degree
/// `t * deg(prod_{k in S} x_k)` per `p`-subset `S`, and
/// `d(e_S) = sum_k (-1)^pos(k) x_k^t e_{S \ k}`. Its cohomology at `0` is
/// `R/(x^t)`.
pub fn koszul_homological<F: Field>(nvars: usize, xs: &[Monomial], t: u32) -> Result<FreeComplex<F>> {
    if xs.is_empty() {
        return Err(Error::InvalidInput("Koszul complex needs at least one element".into()));
    }
    let r = xs.len();
    let powers: Vec<Monomial> = xs.iter().map(|x| x.pow(t)).collect();
    let sets: Vec<Vec<Vec<usize>>> = (0..=r).map(|p| subsets(r, p)).collect();
    let module = |p: usize| {
        FreeModule::new(nvars, sets[p].iter().map(|s| product(&powers, s, nvars).degree()).collect())
            .expect("consistent lengths")
    };
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for p in (0..=r).rev() {
        terms.push(module(p));
    }
    for p in (1..=r).rev() {
        let src = module(p);
        let dst = module(p - 1);
        let mut c = DenseMatrix::zeros(dst.rank(), src.rank());
        for (j, s) in sets[p].iter().enumerate() {
            for (pos, &k) in s.iter().enumerate() {
                let rest: Vec<usize> = s.iter().copied().filter(|&q| q != k).collect();
                let i = sets[p - 1].iter().position(|x| *x == rest).expect("subset present");
                c[(i, j)] = if pos % 2 == 0 { F::one() } else { -F::one() };
            }
        }
        diffs.push(TermMatrix::new(src, dst, c)?);
    }
    FreeComplex::new(nvars, -(r as i32), terms, diffs)
}

/// The Koszul complex placed in cohomological degrees `0..r`, so that its
/// top cohomology is `R/(x^t)` generated in degree zero.
pub fn koszul<F: Field>(nvars: usize, xs: &[Monomial], t: u32) -> Result<FreeComplex<F>> {
    let mut k = koszul_homological(nvars, xs, t)?;
    k.lo = 0;
    Ok(k)
}

/// The standard comparison map `K(x^{t+1}) -> K(x^t)`, `e_S -> (prod_{k in S} x_k) e_S`.
pub fn koszul_comparison<F: Field>(nvars: usize, xs: &[Monomial], t: u32) -> Result<ChainMap<F>> {
    let src = koszul_homological::<F>(nvars, xs, t + 1)?;
    let dst = koszul_homological::<F>(nvars, xs, t)?;
    let comps = (src.lo()..=src.hi())
        .map(|i| TermMatrix::new(src.term(i), dst.term(i), DenseMatrix::identity(src.rank(i))))
        .collect::<Result<Vec<_>>>()?;
    ChainMap::new(src.clone(), dst, src.lo(), comps)
}

/// The Taylor resolution of `R/I` in degrees `-r..0`.
pub fn taylor_resolution<F: Field>(ideal: &MonomialIdeal) -> Result<FreeComplex<F>> {
    let nvars = ideal.nvars();
    let gens = ideal.gens();
    let r = gens.len();
    if r == 0 {
        return Ok(FreeComplex::concentrated(FreeModule::ring(nvars), 0));
    }
    let sets: Vec<Vec<Vec<usize>>> = (0..=r).map(|p| subsets(r, p)).collect();
    let module = |p: usize| {
        FreeModule::new(nvars, sets[p].iter().map(|s| lcm_of(gens, s, nvars).degree()).collect())
            .expect("consistent lengths")
    };
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    for p in (0..=r).rev() {
        terms.push(module(p));
    }
    for p in (1..=r).rev() {
        let src = module(p);
        let dst = module(p - 1);
        let mut c = DenseMatrix::zeros(dst.rank(), src.rank());
        for (j, s) in sets[p].iter().enumerate() {
            for (pos, &k) in s.iter().enumerate() {
                let rest: Vec<usize> = s.iter().copied().filter(|&q| q != k).collect();
                let i = sets[p - 1].iter().position(|x| *x == rest).expect("subset present");
                c[(i, j)] = if pos % 2 == 0 { F::one() } else { -F::one() };
            }
        }
        diffs.push(TermMatrix::new(src, dst, c)?);
    }
    FreeComplex::new(nvars, -(r as i32), terms, diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::ring::RingSpec;

    type F = Fp<32003>;

    fn md(v: &[i64]) -> Multidegree {
        Multidegree(v.to_vec())
    }

    #[test]
    fn koszul_on_one_variable() {
        let x = vec![Monomial::var(1, 0)];
        let k = koszul::<F>(1, &x, 1).unwrap();
        assert_eq!((k.lo(), k.hi()), (0, 1));
        assert_eq!(k.cohomology_strand(0, &md(&[0])).dim(), 0);
        assert_eq!(k.cohomology_strand(1, &md(&[0])).dim(), 1);
        assert_eq!(k.cohomology_strand(1, &md(&[1])).dim(), 0);

        let k2 = koszul::<F>(1, &x, 2).unwrap();
        for (a, d) in [(-1, 0), (0, 1), (1, 1), (2, 0), (3, 0)] {
            assert_eq!(k2.cohomology_strand(1, &md(&[a])).dim(), d, "degree {a}");
        }
    }

    #[test]
    fn koszul_on_two_variables() {
        let xs = vec![Monomial::var(2, 0), Monomial::var(2, 1)];
        let k = koszul::<F>(2, &xs, 1).unwrap();
        assert_eq!(k.ranks(), vec![1, 2, 1]);
        for a in crate::window::Window::cube(2, -1, 3).points() {
            assert_eq!(k.cohomology_strand(0, &a).dim(), 0);
            assert_eq!(k.cohomology_strand(1, &a).dim(), 0);
            let expect = usize::from(a == md(&[0, 0]));
            assert_eq!(k.cohomology_strand(2, &a).dim(), expect);
        }
    }

    #[test]
    fn taylor_ranks() {
        let ring = RingSpec::new(&["x", "y", "z", "w"], 32003).unwrap();
        let r2 = RingSpec::new(&["x", "y"], 32003).unwrap();
        let m = MonomialIdeal::parse(&r2, &["x", "y"]).unwrap();
        let t = taylor_resolution::<F>(&m).unwrap();
        assert_eq!(t.ranks(), vec![1, 2, 1]);
        let kz = koszul_homological::<F>(2, &[Monomial::var(2, 0), Monomial::var(2, 1)], 1).unwrap();
        assert_eq!(t, kz);
        let sq = MonomialIdeal::parse(&r2, &["x^2", "x*y", "y^2"]).unwrap();
        assert_eq!(taylor_resolution::<F>(&sq).unwrap().ranks(), vec![1, 3, 3, 1]);
        let i = MonomialIdeal::parse(&ring, &["x*z", "x*w", "y*z", "y*w"]).unwrap();
        assert_eq!(taylor_resolution::<F>(&i).unwrap().ranks(), vec![1, 4, 6, 4, 1]);
    }

    #[test]
    fn taylor_is_a_resolution() {
        let r2 = RingSpec::new(&["x", "y"], 32003).unwrap();
        let sq = MonomialIdeal::parse(&r2, &["x^2", "x*y", "y^2"]).unwrap();
        let t = taylor_resolution::<F>(&sq).unwrap();
        let quotient = crate::module::ModulePresentation::<F>::cyclic(&sq);
        for a in crate::window::Window::cube(2, -1, 4).points() {
            for i in -3..0 {
                assert_eq!(t.cohomology_strand(i, &a).dim(), 0);
            }
            assert_eq!(t.cohomology_strand(0, &a).dim(), quotient.strand_dim(&a));
        }
    }

    #[test]
    fn total_complex_shapes() {
        let x = koszul_homological::<F>(2, &[Monomial::var(2, 0)], 1).unwrap();
        let y = koszul_homological::<F>(2, &[Monomial::var(2, 1)], 1).unwrap();
        let tot = tensor_complexes(&x, &y);
        assert_eq!(tot.ranks(), vec![1, 2, 1]);
        let xy = koszul_homological::<F>(2, &[Monomial::var(2, 0), Monomial::var(2, 1)], 1).unwrap();
        for a in crate::window::Window::cube(2, -1, 2).points() {
            for i in -2..=0 {
                assert_eq!(tot.cohomology_strand(i, &a).dim(), xy.cohomology_strand(i, &a).dim());
            }
        }
        assert_eq!(DoubleComplex::row(&x).total().ranks(), x.ranks());
        assert_eq!(DoubleComplex::column(&y).total().ranks(), y.ranks());
    }

    #[test]
    fn shift_and_truncation() {
        let xs = vec![Monomial::var(2, 0), Monomial::var(2, 1)];
        let k = koszul::<F>(2, &xs, 1).unwrap();
        assert_eq!(k.shift(0), k);
        assert_eq!(k.brutal_truncate_above(k.lo()).unwrap(), k);
        let s = k.shift(-2);
        for a in crate::window::Window::cube(2, -1, 1).points() {
            for i in -1..5 {
                assert_eq!(s.cohomology_strand(i, &a).dim(), k.cohomology_strand(i - 2, &a).dim());
            }
        }
        let tr = k.brutal_truncate_above(1).unwrap();
        assert_eq!(tr.ranks(), vec![2, 1]);
    }

    #[test]
    fn koszul_comparison_commutes() {
        let xs = vec![Monomial::var(2, 0), Monomial::var(2, 1)];
        let f = koszul_comparison::<F>(2, &xs, 2).unwrap();
        let h = f.source.cohomology_strand(0, &md(&[2, 0]));
        let g = f.target.cohomology_strand(0, &md(&[2, 0]));
        assert_eq!((h.dim(), g.dim()), (1, 0));
    }
}
