//! Minimal graded free resolutions of term-matrix presentations and
//! comparison maps between them.
//!
//! Over the finely graded ring the degree-`b` strand of a submodule of a free
//! module generated in degrees `d_j` only depends on which `d_j <= b`. Hence
//! minimal generators of images and kernels can be found by scanning the
//! lattice of joins of the relevant generator degrees in increasing total
//! degree and completing, at each lattice point, the span of the images of
//! the generators found so far.

use std::collections::BTreeSet;

use crate::complex::{ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{column_space_basis, kernel_basis, solve, DenseMatrix, Span};
use crate::module::{FreeModule, ModuleMap, ModulePresentation, TermMatrix};
use crate::ring::Multidegree;

/// All joins of nonempty subsets of `degs`, sorted by total degree then lexicographically.
pub fn join_closure(degs: &[Multidegree]) -> Vec<Multidegree> {
    let mut closure: BTreeSet<Multidegree> = BTreeSet::new();
    for d in degs {
        if closure.contains(d) {
            continue;
        }
        let new: Vec<Multidegree> = closure.iter().map(|x| x.join(d)).collect();
        closure.insert(d.clone());
        closure.extend(new);
    }
    let mut out: Vec<Multidegree> = closure.into_iter().collect();
    out.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp(b)));
    out
}

/// Minimal homogeneous generators of the submodule of the free module
/// `ambient` whose degree-`b` strand is spanned by the columns of `sub_at(b)`
/// (in the coordinates of `ambient.active(b)`). The submodule must be
/// generated in degrees from `lattice`.
fn minimal_generators<F: Field>(
    ambient: &FreeModule,
    lattice: &[Multidegree],
    sub_at: impl Fn(&Multidegree) -> DenseMatrix<F>,
) -> TermMatrix<F> {
    let mut gens: Vec<(Multidegree, Vec<F>)> = Vec::new();
    for b in lattice {
        let sub = sub_at(b);
        if sub.cols() == 0 {
            continue;
        }
        let act = ambient.active(b);
        let mut span = Span::new(act.len());
        for (d, v) in &gens {
            if d.le(b) {
                let restricted: Vec<F> = act.iter().map(|&j| v[j]).collect();
                span.insert(&restricted);
            }
        }
        if span.dim() == sub.cols() {
            continue;
        }
        let basis = column_space_basis(&sub);
        for c in 0..basis.cols() {
            let col = basis.column(c);
            if span.insert(&col) {
                let mut full = vec![F::zero(); ambient.rank()];
                for (k, &j) in act.iter().enumerate() {
                    full[j] = col[k];
                }
                gens.push((b.clone(), full));
            }
        }
    }
    let src = FreeModule::new(ambient.nvars(), gens.iter().map(|(d, _)| d.clone()).collect())
        .expect("consistent lengths");
    let cols: Vec<Vec<F>> = gens.into_iter().map(|(_, v)| v).collect();
    let coeffs = DenseMatrix::from_columns(ambient.rank(), &cols);
    TermMatrix::new(src, ambient.clone(), coeffs).expect("generators are homogeneous")
}

/// Minimal generators of the image of `phi`, as a map into its target.
pub fn image_generators<F: Field>(phi: &TermMatrix<F>) -> TermMatrix<F> {
    let lattice = join_closure(phi.source().degrees());
    minimal_generators(phi.target(), &lattice, |b| phi.strand(b))
}

/// Minimal generators of the kernel of `phi`, as a map into its source.
pub fn kernel_generators<F: Field>(phi: &TermMatrix<F>) -> TermMatrix<F> {
    let lattice = join_closure(phi.source().degrees());
    minimal_generators(phi.source(), &lattice, |b| {
        let s = phi.strand(b);
        if s.rows() == 0 {
            DenseMatrix::identity(s.cols())
        } else {
            kernel_basis(&s)
        }
    })
}

/// A minimal free resolution `F_L -> ... -> F_0` of a presented module,
/// stored in cohomological degrees `-L..0`, together with the change of
/// generators between the presentation and `F_0`.
#[derive(Clone, Debug)]
pub struct Resolution<F> {
    module: ModulePresentation<F>,
    complex: FreeComplex<F>,
    to_min: TermMatrix<F>,
    from_min: TermMatrix<F>,
}

impl<F: Field> Resolution<F> {
    pub fn new(module: &ModulePresentation<F>) -> Result<Self> {
        let n = module.nvars();
        let f0 = module.generators().clone();
        let mut mods = vec![f0.clone()];
        let mut ds: Vec<TermMatrix<F>> = Vec::new();
        let d1 = image_generators(module.relations());
        let mut cur = d1;
        loop {
            if cur.source().rank() == 0 {
                break;
            }
            if ds.len() > n + 1 {
                return Err(Error::InvalidInput("resolution longer than the number of variables".into()));
            }
            mods.push(cur.source().clone());
            ds.push(cur.clone());
            cur = kernel_generators(&cur);
        }
        let mut res = Resolution {
            module: module.clone(),
            complex: FreeComplex::concentrated(f0.clone(), 0),
            to_min: TermMatrix::identity(&f0),
            from_min: TermMatrix::identity(&f0),
        };
        res.prune(&mut mods, &mut ds);
        // drop trailing zero terms created by pruning
        while mods.len() > 1 && mods.last().is_some_and(|m| m.rank() == 0) {
            mods.pop();
            ds.pop();
        }
        let len = mods.len() - 1;
        let terms: Vec<FreeModule> = mods.iter().rev().cloned().collect();
        let diffs: Vec<TermMatrix<F>> = ds.iter().rev().cloned().collect();
        res.complex = FreeComplex::new(n, -(len as i32), terms, diffs)?;
        Ok(res)
    }

    /// Cancels unit entries: a unit at `(i, j)` of `d_p` splits off the
    /// trivial complex `R e_j -> R d(e_j)`.
    fn prune(&mut self, mods: &mut [FreeModule], ds: &mut [TermMatrix<F>]) {
        // `ds[p-1]` is `d_p : F_p -> F_{p-1}`.
        loop {
            let Some((p, (i, j))) = ds.iter().enumerate().find_map(|(k, d)| d.unit_entry().map(|u| (k + 1, u))) else {
                return;
            };
            let d = ds[p - 1].coeffs().clone();
            let pivot_inv = d[(i, j)].inv().expect("unit entry");
            let rows: Vec<usize> = (0..d.rows()).filter(|&m| m != i).collect();
            let cols: Vec<usize> = (0..d.cols()).filter(|&l| l != j).collect();
            let mut nd = DenseMatrix::zeros(rows.len(), cols.len());
            for (mm, &m) in rows.iter().enumerate() {
                for (ll, &l) in cols.iter().enumerate() {
                    nd[(mm, ll)] = d[(m, l)] - d[(m, j)] * d[(i, l)] * pivot_inv;
                }
            }
            let new_src = mods[p].select(&cols);
            let new_tgt = mods[p - 1].select(&rows);
            if p == 1 {
                // F_0 loses generator i: e_i = -(1/d_ij) sum_{m != i} d_mj e_m modulo relations.
                let mut proj = DenseMatrix::zeros(rows.len(), d.rows());
                for (mm, &m) in rows.iter().enumerate() {
                    proj[(mm, m)] = F::one();
                    proj[(mm, i)] = -(d[(m, j)] * pivot_inv);
                }
                let proj = TermMatrix::new(mods[0].clone(), new_tgt.clone(), proj).expect("homogeneous projection");
                self.to_min = proj.compose(&self.to_min).expect("matching modules");
                let fm = self.from_min.coeffs().select_columns(&rows);
                self.from_min =
                    TermMatrix::new(new_tgt.clone(), self.from_min.target().clone(), fm).expect("inclusion");
            }
            if p >= 2 {
                let prev = ds[p - 2].coeffs().select_columns(&rows);
                ds[p - 2] = TermMatrix::new(new_tgt.clone(), mods[p - 2].clone(), prev).expect("column deletion");
            }
            if p < ds.len() {
                let next = ds[p].coeffs().select_rows(&cols);
                ds[p] = TermMatrix::new(mods[p + 1].clone(), new_src.clone(), next).expect("row deletion");
            }
            ds[p - 1] = TermMatrix::new(new_src.clone(), new_tgt.clone(), nd).expect("pruned differential");
            mods[p] = new_src;
            mods[p - 1] = new_tgt;
        }
    }

    pub fn module(&self) -> &ModulePresentation<F> {
        &self.module
    }

    pub fn complex(&self) -> &FreeComplex<F> {
        &self.complex
    }

    /// Betti numbers `rank F_0, rank F_1, ...`.
    pub fn betti(&self) -> Vec<usize> {
        let c = &self.complex;
        (c.lo()..=0).rev().map(|i| c.rank(i)).collect()
    }

    /// Map from the presentation's generators onto `F_0`.
    pub fn to_min(&self) -> &TermMatrix<F> {
        &self.to_min
    }

    /// Map from `F_0` to the presentation's generators.
    pub fn from_min(&self) -> &TermMatrix<F> {
        &self.from_min
    }

    /// Lifts a module map `A -> B` to a chain map between resolutions of `A`
    /// and `B`.
    pub fn lift(map: &ModuleMap<F>, src: &Resolution<F>, dst: &Resolution<F>) -> Result<ChainMap<F>> {
        let f0 = dst.to_min.compose(&map.matrix)?.compose(&src.from_min)?;
        lift_chain_map(&f0, &src.complex, &dst.complex)
    }
}

/// Extends `f0 : A^0 -> B^0` to a chain map `A -> B` of resolutions (both
/// in degrees `<= 0`), solving for each generator degree by degree.
pub fn lift_chain_map<F: Field>(f0: &TermMatrix<F>, a: &FreeComplex<F>, b: &FreeComplex<F>) -> Result<ChainMap<F>> {
    let mut comps = vec![f0.clone()];
    for p in 1..=(-a.lo()) {
        let i = -p;
        let src = a.term(i);
        let tgt = b.term(i);
        let prev = comps.last().expect("nonempty");
        let da = a.diff(i);
        let db = b.diff(i);
        // images f_{p-1}(d e) in B_{p-1}
        let images = prev.coeffs().mul(da.coeffs());
        let mut c = DenseMatrix::zeros(tgt.rank(), src.rank());
        for e in 0..src.rank() {
            let d = src.degree(e);
            let rows = b.term(i + 1).active(d);
            let cols = tgt.active(d);
            let w: Vec<F> = rows.iter().map(|&r| images[(r, e)]).collect();
            if w.iter().all(|x| x.is_zero()) {
                continue;
            }
            let strand = db.coeffs().submatrix(&rows, &cols);
            let x = solve(&strand, &w).ok_or_else(|| Error::NotChainCompatible {
                context: format!("cannot lift generator {e} at homological degree {p}"),
            })?;
            for (k, &col) in cols.iter().enumerate() {
                c[(col, e)] = x[k];
            }
        }
        comps.push(TermMatrix::new(src, tgt, c)?);
    }
    comps.reverse();
    ChainMap::new(a.clone(), b.clone(), a.lo(), comps)
}

/// The minimal free resolution truncated after homological degree `length`.
pub fn syzygy_resolution<F: Field>(module: &ModulePresentation<F>, length: usize) -> Result<FreeComplex<F>> {
    let full = Resolution::new(module)?;
    let c = full.complex();
    let lo = (-(length as i32)).max(c.lo());
    c.brutal_truncate_above(lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::ideal::MonomialIdeal;
    use crate::ring::RingSpec;
    use crate::window::Window;

    type F = Fp<32003>;

    fn ring2() -> RingSpec {
        RingSpec::new(&["x", "y"], 32003).unwrap()
    }

    #[test]
    fn betti_numbers() {
        let r = ring2();
        let m = MonomialIdeal::parse(&r, &["x", "y"]).unwrap();
        let res = Resolution::<F>::new(&ModulePresentation::cyclic(&m)).unwrap();
        assert_eq!(res.betti(), vec![1, 2, 1]);
        let sq = m.power(2);
        let res = Resolution::<F>::new(&ModulePresentation::cyclic(&sq)).unwrap();
        assert_eq!(res.betti(), vec![1, 3, 2]);
        let free = Resolution::<F>::new(&ModulePresentation::ring(2)).unwrap();
        assert_eq!(free.betti(), vec![1]);
        assert_eq!(syzygy_resolution(&ModulePresentation::<F>::ring(2), 3).unwrap().lo(), 0);
    }

    #[test]
    fn redundant_generators_are_pruned() {
        // R^2 / (e1 - e2 in degree 0): isomorphic to R.
        let f0 = FreeModule::new(2, vec![Multidegree::zero(2), Multidegree::zero(2)]).unwrap();
        let rel = TermMatrix::<F>::new(
            FreeModule::ring(2),
            f0,
            DenseMatrix::from_i64_rows(&[&[1], &[-1]]),
        )
        .unwrap();
        let res = Resolution::new(&ModulePresentation::new(rel)).unwrap();
        assert_eq!(res.betti(), vec![1]);
    }

    #[test]
    fn resolution_is_exact_and_matches_taylor() {
        let r = RingSpec::new(&["x", "y", "z"], 32003).unwrap();
        let i = MonomialIdeal::parse(&r, &["x*y", "y*z", "x^2"]).unwrap();
        let module = ModulePresentation::<F>::cyclic(&i);
        let res = Resolution::new(&module).unwrap();
        let tay = crate::complex::taylor_resolution::<F>(&i).unwrap();
        for a in Window::cube(3, -1, 3).points() {
            for k in -3..=0 {
                assert_eq!(
                    res.complex().cohomology_strand(k, &a).dim(),
                    tay.cohomology_strand(k, &a).dim()
                );
            }
            assert_eq!(res.complex().cohomology_strand(0, &a).dim(), module.strand_dim(&a));
        }
    }

    #[test]
    fn comparison_maps_lift_surjections() {
        let r = ring2();
        let m = MonomialIdeal::parse(&r, &["x", "y"]).unwrap();
        let big = ModulePresentation::<F>::cyclic(&m.power(3));
        let small = ModulePresentation::<F>::cyclic(&m.power(2));
        let map = ModuleMap::new(big.clone(), small.clone(), TermMatrix::identity(big.generators())).unwrap();
        let rb = Resolution::new(&big).unwrap();
        let rs = Resolution::new(&small).unwrap();
        let f = Resolution::lift(&map, &rb, &rs).unwrap();
        assert_eq!(f.source.lo(), -2);
    }
}
