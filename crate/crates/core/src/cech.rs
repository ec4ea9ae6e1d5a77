//! Localizations at monomials, the Čech complex `Č_x ⊗ M`, and `I`-torsion.
//!
//! The strand of a presented module at `b` depends only on how each
//! coordinate of `b` compares to the generator and relation degrees. Once
//! the coordinates in the support of a monomial `u` lie above every such
//! value, multiplication by `u` is the identity on strands, so
//! `(M_u)_a = M_{a + T deg u}` for the first `T` with that property.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::complex::subsets;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{cohomology_table, direct_sum, GradedComplex, Memo};
use crate::ideal::MonomialIdeal;
use crate::linalg::{induced_map, kernel_basis, DenseMatrix, Span, Subquotient};
use crate::module::{inclusion, FreeModule, ModulePresentation, TermMatrix};
use crate::resolution::kernel_generators;
use crate::ring::{Monomial, Multidegree};
use crate::window::{HilbertTable, Window};

/// Default bound on the localization shift.
pub const DEFAULT_MAX_SHIFT: u32 = 1 << 12;

/// Largest generator or relation degree in each coordinate (0 if none).
fn top_cuts<F: Field>(m: &ModulePresentation<F>) -> Vec<i64> {
    m.cut_values()
        .iter()
        .map(|c| c.last().copied().unwrap_or(0))
        .collect()
}

/// The degree-`a` piece of `M_u`, `u` the product of `s`, as a strand of `M`
/// at `a + T deg u`. Returns that degree together with the strand.
///
/// `T` is the first shift past which no coordinate in the support of `u`
/// can cross a generator or relation degree; the strand at `T` is then
/// checked against `T + 1` through the multiplication map.
pub fn localize_piece<F: Field>(
    m: &ModulePresentation<F>,
    s: &[Monomial],
    a: &Multidegree,
    max_shift: u32,
) -> Result<(Multidegree, Subquotient<F>)> {
    let n = m.nvars();
    let u = s.iter().fold(Monomial::one(n), |acc, x| acc.mul(x));
    let du = u.degree();
    let tops = top_cuts(m);
    let mut t: i64 = 0;
    for i in u.support() {
        let e = du.0[i];
        let need = tops[i] - a.0[i];
        if need > 0 {
            t = t.max((need + e - 1) / e);
        }
    }
    if t > max_shift as i64 {
        return Err(Error::StabilizationFailure {
            bound: max_shift,
            degree: a.to_string(),
        });
    }
    let shift = |t: i64| Multidegree(a.0.iter().zip(&du.0).map(|(x, d)| x + t * d).collect());
    let b = shift(t);
    let b1 = shift(t + 1);
    let here = m.strand(&b);
    let next = m.strand(&b1);
    let gens = m.generators();
    let f = inclusion::<F>(&gens.active(&b), &gens.active(&b1));
    let map = induced_map(&f, &here, &next)?;
    let r = crate::linalg::rank(&map);
    if r != here.dim() || r != next.dim() {
        return Err(Error::StabilizationFailure {
            bound: max_shift,
            degree: a.to_string(),
        });
    }
    Ok((b, here))
}

/// `Č_x ⊗ M` for the minimal generators `x` of a monomial ideal. The piece
/// at index `q` is the sum over `q`-subsets `S` of `(M_{x_S})_a`.
pub struct CechComplex<F: Field> {
    module: ModulePresentation<F>,
    gens: Vec<Monomial>,
    tops: Vec<i64>,
    subsets: Vec<Vec<Vec<usize>>>,
    positions: Vec<HashMap<Vec<usize>, usize>>,
    supports: Vec<Vec<Vec<usize>>>,
    strands: Memo<Arc<Subquotient<F>>>,
    pieces: Memo<Arc<Subquotient<F>>>,
}

impl<F: Field> CechComplex<F> {
    pub fn new(ideal: &MonomialIdeal, module: &ModulePresentation<F>) -> Result<Self> {
        if ideal.nvars() != module.nvars() {
            return Err(Error::DimensionMismatch("ideal and module live over different rings".into()));
        }
        if ideal.is_zero() {
            return Err(Error::InvalidInput("the Čech complex needs a nonzero ideal".into()));
        }
        let gens = ideal.gens().to_vec();
        let r = gens.len();
        let subsets: Vec<Vec<Vec<usize>>> = (0..=r).map(|p| subsets(r, p)).collect();
        let positions = subsets
            .iter()
            .map(|ss| ss.iter().enumerate().map(|(k, s)| (s.clone(), k)).collect())
            .collect();
        let supports = subsets
            .iter()
            .map(|ss| {
                ss.iter()
                    .map(|s| {
                        let set: BTreeSet<usize> = s.iter().flat_map(|&k| gens[k].support()).collect();
                        set.into_iter().collect()
                    })
                    .collect()
            })
            .collect();
        Ok(CechComplex {
            tops: top_cuts(module),
            module: module.clone(),
            gens,
            subsets,
            positions,
            supports,
            strands: Memo::new(),
            pieces: Memo::new(),
        })
    }

    pub fn module(&self) -> &ModulePresentation<F> {
        &self.module
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    /// The degree of `M` representing `(M_{x_S})_a`.
    fn raise(&self, q: usize, k: usize, a: &Multidegree) -> Multidegree {
        let mut b = a.clone();
        for &i in &self.supports[q][k] {
            b.0[i] = b.0[i].max(self.tops[i]);
        }
        b
    }

    fn strand(&self, b: &Multidegree) -> Result<Arc<Subquotient<F>>> {
        self.strands.get_or_try(0, b, || Ok(Arc::new(self.module.strand(b))))
    }

    fn generators_module(&self) -> &FreeModule {
        self.module.generators()
    }

    fn r(&self) -> usize {
        self.gens.len()
    }
}

impl<F: Field> GradedComplex<F> for CechComplex<F> {
    fn nvars(&self) -> usize {
        self.module.nvars()
    }

    fn range(&self) -> (i32, i32) {
        (0, self.r() as i32)
    }

    fn piece(&self, q: i32, a: &Multidegree) -> Result<Arc<Subquotient<F>>> {
        if q < 0 || q > self.r() as i32 {
            return Ok(Arc::new(Subquotient::zero(0)));
        }
        self.pieces.get_or_try(q, a, || {
            let qu = q as usize;
            let parts = (0..self.subsets[qu].len())
                .map(|k| self.strand(&self.raise(qu, k, a)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Arc::new(direct_sum(&parts)))
        })
    }

    fn diff(&self, q: i32, a: &Multidegree) -> Result<DenseMatrix<F>> {
        let rows = self.ambient(q + 1, a)?;
        let cols = self.ambient(q, a)?;
        let mut out = DenseMatrix::zeros(rows, cols);
        if rows == 0 || cols == 0 {
            return Ok(out);
        }
        let qu = q as usize;
        let gm = self.generators_module();
        let src_act: Vec<Vec<usize>> = (0..self.subsets[qu].len())
            .map(|k| gm.active(&self.raise(qu, k, a)))
            .collect();
        let dst_act: Vec<Vec<usize>> = (0..self.subsets[qu + 1].len())
            .map(|k| gm.active(&self.raise(qu + 1, k, a)))
            .collect();
        let offsets = |acts: &Vec<Vec<usize>>| {
            let mut o = Vec::with_capacity(acts.len());
            let mut acc = 0;
            for x in acts {
                o.push(acc);
                acc += x.len();
            }
            o
        };
        let so = offsets(&src_act);
        let to = offsets(&dst_act);
        for (k, s) in self.subsets[qu].iter().enumerate() {
            for j in 0..self.r() {
                if s.contains(&j) {
                    continue;
                }
                let before = s.iter().filter(|&&x| x < j).count();
                let mut t = s.clone();
                t.insert(before, j);
                let tk = self.positions[qu + 1][&t];
                let sign = if before % 2 == 1 { -F::one() } else { F::one() };
                let block = inclusion::<F>(&src_act[k], &dst_act[tk]);
                out.add_block(to[tk], so[k], &block, sign);
            }
        }
        Ok(out)
    }

    fn mul(&self, q: i32, a: &Multidegree, mono: &Monomial) -> Result<DenseMatrix<F>> {
        if q < 0 || q > self.r() as i32 {
            return Ok(DenseMatrix::zeros(0, 0));
        }
        let qu = q as usize;
        let to = a + &mono.degree();
        let gm = self.generators_module();
        let blocks: Vec<DenseMatrix<F>> = (0..self.subsets[qu].len())
            .map(|k| inclusion::<F>(&gm.active(&self.raise(qu, k, a)), &gm.active(&self.raise(qu, k, &to))))
            .collect();
        let rows: usize = blocks.iter().map(|b| b.rows()).sum();
        let cols: usize = blocks.iter().map(|b| b.cols()).sum();
        let mut out = DenseMatrix::zeros(rows, cols);
        let (mut r, mut c) = (0, 0);
        for b in &blocks {
            out.set_block(r, c, b);
            r += b.rows();
            c += b.cols();
        }
        Ok(out)
    }
}

/// `H^i_I(M)` over a window, from the Čech complex.
pub fn local_cohomology<F: Field>(
    ideal: &MonomialIdeal,
    module: &ModulePresentation<F>,
    i: i32,
    w: &Window,
) -> Result<HilbertTable> {
    let c = CechComplex::new(ideal, module)?;
    cohomology_window(&c, i, w)
}

/// Dimensions of `H^i` of any graded complex over a window.
pub fn cohomology_window<F: Field>(c: &dyn GradedComplex<F>, i: i32, w: &Window) -> Result<HilbertTable> {
    cohomology_table(c, i, w)
}

/// `Γ_I(M)_a` as a subspace of the ambient of `M_a` containing the relation
/// strand: the elements killed by a large power of every generator of `I`.
fn torsion_strand<F: Field>(ideal: &MonomialIdeal, m: &ModulePresentation<F>, a: &Multidegree) -> DenseMatrix<F> {
    let gens = m.generators();
    let act = gens.active(a);
    let here = m.strand(a);
    let tops = top_cuts(m);
    // stack the maps M_a -> M_{a + s deg u} for every generator u, s large
    let mut blocks: Vec<DenseMatrix<F>> = Vec::new();
    for u in ideal.gens() {
        let mut b = a.clone();
        for i in u.support() {
            b.0[i] = b.0[i].max(tops[i]);
        }
        let there = m.strand(&b);
        let inc = inclusion::<F>(&act, &gens.active(&b));
        // coordinates modulo the relations at b
        let rel = there.boundaries();
        let q = quotient_map(rel);
        blocks.push(q.mul(&inc));
    }
    let stacked = blocks
        .into_iter()
        .reduce(|x, y| x.vstack(&y))
        .unwrap_or_else(|| DenseMatrix::zeros(0, act.len()));
    let k = if stacked.rows() == 0 {
        DenseMatrix::identity(act.len())
    } else {
        kernel_basis(&stacked)
    };
    k.hstack(here.boundaries())
}

/// A matrix whose kernel is exactly the span of the columns of `rel`.
fn quotient_map<F: Field>(rel: &DenseMatrix<F>) -> DenseMatrix<F> {
    let n = rel.rows();
    if rel.cols() == 0 {
        return DenseMatrix::identity(n);
    }
    let k = kernel_basis(&rel.transpose());
    k.transpose()
}

/// A presentation of the `I`-torsion submodule `Γ_I(M)`, generated by
/// elements of the generator module of `M`.
///
/// Torsion strands only change where a coordinate crosses a generator or
/// relation degree, so generators are searched on that grid in increasing
/// total degree.
pub fn torsion_submodule<F: Field>(ideal: &MonomialIdeal, m: &ModulePresentation<F>) -> Result<ModulePresentation<F>> {
    let n = m.nvars();
    let f0 = m.generators().clone();
    let cuts = m.cut_values();
    let mut grid: Vec<Multidegree> = if cuts.iter().any(BTreeSet::is_empty) {
        Vec::new()
    } else {
        let mut pts = vec![Vec::new()];
        for c in &cuts {
            let mut next = Vec::new();
            for p in &pts {
                for &v in c {
                    let mut q: Vec<i64> = p.clone();
                    q.push(v);
                    next.push(q);
                }
            }
            pts = next;
        }
        pts.into_iter().map(Multidegree).collect()
    };
    grid.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
    let mut gens: Vec<(Multidegree, Vec<F>)> = Vec::new();
    for b in &grid {
        let act = f0.active(b);
        let mut span = Span::of_columns(&m.relations().strand(b));
        for (d, v) in &gens {
            if d.le(b) {
                let restricted: Vec<F> = act.iter().map(|&j| v[j]).collect();
                span.insert(&restricted);
            }
        }
        let t = torsion_strand(ideal, m, b);
        for c in 0..t.cols() {
            let col = t.column(c);
            if span.insert(&col) {
                let mut full = vec![F::zero(); f0.rank()];
                for (k, &j) in act.iter().enumerate() {
                    full[j] = col[k];
                }
                gens.push((b.clone(), full));
            }
        }
    }
    let g = FreeModule::new(n, gens.iter().map(|(d, _)| d.clone()).collect())?;
    let cols: Vec<Vec<F>> = gens.into_iter().map(|(_, v)| v).collect();
    let into = TermMatrix::new(g.clone(), f0.clone(), DenseMatrix::from_columns(f0.rank(), &cols))?;
    // relations: the G-part of the syzygies of [into | relations]
    let both = into.hstack(m.relations())?;
    let syz = kernel_generators(&both);
    let rows: Vec<usize> = (0..g.rank()).collect();
    let rel = TermMatrix::new(syz.source().clone(), g, syz.coeffs().select_rows(&rows))?;
    Ok(ModulePresentation::new(rel))
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
    fn localizations() {
        let r1 = RingSpec::new(&["x"], 32003).unwrap();
        let x1 = r1.parse_monomial("x").unwrap();
        let (_, p) = localize_piece(&ModulePresentation::<F>::ring(1), &[x1], &md(&[-3]), 64).unwrap();
        assert_eq!(p.dim(), 1);
        let r = RingSpec::new(&["x", "y"], 32003).unwrap();
        let x = r.parse_monomial("x").unwrap();
        let ring = ModulePresentation::<F>::ring(2);
        assert_eq!(localize_piece(&ring, std::slice::from_ref(&x), &md(&[-1, 2]), 64).unwrap().1.dim(), 1);
        assert_eq!(localize_piece(&ring, std::slice::from_ref(&x), &md(&[-1, -1]), 64).unwrap().1.dim(), 0);
        let xy = MonomialIdeal::parse(&r, &["x*y"]).unwrap();
        let m = ModulePresentation::<F>::cyclic(&xy);
        assert_eq!(localize_piece(&m, std::slice::from_ref(&x), &md(&[2, 1]), 64).unwrap().1.dim(), 0);
        assert_eq!(localize_piece(&m, &[], &md(&[2, 0]), 64).unwrap().1, m.strand(&md(&[2, 0])));
        let far = localize_piece(&m, &[x], &md(&[-100, 0]), 8);
        assert!(matches!(far, Err(Error::StabilizationFailure { .. })));
    }

    #[test]
    fn top_local_cohomology_of_the_plane() {
        let r = RingSpec::new(&["x", "y"], 32003).unwrap();
        let m = MonomialIdeal::parse(&r, &["x", "y"]).unwrap();
        let ring = ModulePresentation::<F>::ring(2);
        let w = Window::cube(2, -3, 2);
        for i in 0..=3 {
            let t = local_cohomology(&m, &ring, i, &w).unwrap();
            if i == 2 {
                assert_eq!(t.get(&md(&[-1, -1])), Some(1));
                assert_eq!(t.get(&md(&[0, 0])), Some(0));
                assert_eq!(t.get(&md(&[-3, -2])), Some(1));
                assert_eq!(t.get(&md(&[-1, 0])), Some(0));
            } else {
                assert!(t.is_zero(), "H^{i} should vanish");
            }
        }
    }

    #[test]
    fn torsion_module_is_its_own_local_cohomology() {
        let r = RingSpec::new(&["x"], 32003).unwrap();
        let x = MonomialIdeal::parse(&r, &["x"]).unwrap();
        let m = ModulePresentation::<F>::cyclic(&x.power(2));
        let t = local_cohomology(&x, &m, 0, &Window::cube(1, -2, 3)).unwrap();
        assert_eq!(t.support(), vec![(md(&[0]), 1), (md(&[1]), 1)]);
        assert!(local_cohomology(&x, &m, 1, &Window::cube(1, -2, 3)).unwrap().is_zero());
    }

    #[test]
    fn non_cohomologically_complete_intersection_witness() {
        let r = RingSpec::new(&["x", "y", "z", "w"], 32003).unwrap();
        let i = MonomialIdeal::parse(&r, &["x*z", "x*w", "y*z", "y*w"]).unwrap();
        let ring = ModulePresentation::<F>::ring(4);
        let c = CechComplex::new(&i, &ring).unwrap();
        assert_eq!(c.cohomology(3, &md(&[-1, -1, -1, -1])).unwrap().dim(), 1);
        assert_eq!(c.cohomology(2, &md(&[-1, -1, 0, 0])).unwrap().dim(), 1);
        assert_eq!(c.cohomology(4, &md(&[-1, -1, -1, -1])).unwrap().dim(), 0);
    }

    #[test]
    fn torsion_submodules() {
        let r = RingSpec::new(&["x", "y"], 32003).unwrap();
        let x = MonomialIdeal::parse(&r, &["x"]).unwrap();
        let w = Window::cube(2, -1, 4);
        // torsion module: everything
        let m = ModulePresentation::<F>::cyclic(&MonomialIdeal::parse(&r, &["x^2"]).unwrap());
        assert_eq!(torsion_submodule(&x, &m).unwrap().hilbert_table(&w), m.hilbert_table(&w));
        // domain: nothing
        let ring = ModulePresentation::<F>::ring(2);
        assert!(torsion_submodule(&x, &ring).unwrap().hilbert_table(&w).is_zero());
        // R/(x^2 y): the torsion is y R/(x^2 y), nonzero exactly where a_x <= 1 and a_y >= 1
        let m = ModulePresentation::<F>::cyclic(&MonomialIdeal::parse(&r, &["x^2*y"]).unwrap());
        let t = torsion_submodule(&x, &m).unwrap().hilbert_table(&w);
        for (a, d) in &t.dims {
            let expect = usize::from(a.0[0] >= 0 && a.0[0] <= 1 && a.0[1] >= 1);
            assert_eq!(*d, expect, "at {a}");
        }
        // agrees with H^0 from the Čech complex
        assert_eq!(local_cohomology(&x, &m, 0, &w).unwrap(), t);
    }
}
