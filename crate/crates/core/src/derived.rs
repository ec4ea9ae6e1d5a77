//! Ext, Tor, grade, graded duality and the generalized local (co)homology
//! functors, all evaluated degree by degree.
//!
//! Conventions: a free resolution `F` of `N` sits in indices `-L..0`, so
//! `Ext^i(N, X) = H^i(Hom(F, X))` and `Tor_i(N, X) = H^{-i}(F ⊗ X)`.
//! `Hom(R(-g), X)_a = X_{a+g}` and `(R(-g) ⊗ X)_a = X_{a-g}`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::{koszul_comparison, koszul_homological, tensor_chain_maps, tensor_complexes, ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{cohomology_table, Dual, FreeBiComplex, Graded, GradedComplex, GradedMap, MapOnFree, Presented};
use crate::ideal::MonomialIdeal;
use crate::limits::{Direction, Lim1Report, LimitSystem, Staged};
use crate::module::{critical_grid, ModuleMap, ModulePresentation, TermMatrix};
use crate::resolution::Resolution;
use crate::ring::Multidegree;
use crate::window::{HilbertTable, Window};

/// Default number of stages for limits over `s` and `t`.
pub const DEFAULT_STAGES: usize = 8;

/// The stage complexes of a tower together with the staged system they form.
pub type StageComplexes<F> = (Vec<Arc<FreeBiComplex<F>>>, Staged<F>);

/// The complexes `C_t` and the comparison maps `C_{t+1} -> C_t`.
pub type KoszulTower<F> = (Vec<Arc<FreeComplex<F>>>, Vec<Arc<ChainMap<F>>>);

pub fn resolve<F: Field>(n: &ModulePresentation<F>) -> Result<Arc<FreeComplex<F>>> {
    Ok(Arc::new(Resolution::new(n)?.complex().clone()))
}

/// `Ext^i(N, X)` over a window for any graded `X`.
pub fn ext_graded<F: Field>(n: &ModulePresentation<F>, x: Graded<F>, i: i32, w: &Window) -> Result<HilbertTable> {
    let hom = FreeBiComplex::hom(resolve(n)?, x);
    cohomology_table(&hom, i, w)
}

/// `Tor_i(N, X)` over a window for any graded `X`.
pub fn tor_graded<F: Field>(n: &ModulePresentation<F>, x: Graded<F>, i: i32, w: &Window) -> Result<HilbertTable> {
    let t = FreeBiComplex::tensor(resolve(n)?, x);
    cohomology_table(&t, -i, w)
}

pub fn ext<F: Field>(n: &ModulePresentation<F>, m: &ModulePresentation<F>, i: i32, w: &Window) -> Result<HilbertTable> {
    ext_graded(n, Presented::shared(m.clone()), i, w)
}

pub fn tor<F: Field>(n: &ModulePresentation<F>, m: &ModulePresentation<F>, i: i32, w: &Window) -> Result<HilbertTable> {
    tor_graded(n, Presented::shared(m.clone()), i, w)
}

/// The graded dual `D(M)`: `D(M)_a = (M_{-a})^*`.
pub fn matlis_dual<F: Field>(m: &ModulePresentation<F>) -> Graded<F> {
    Dual::shared(Presented::shared(m.clone()))
}

/// Representative degrees covering every region on which the cohomology of
/// `Hom(F, M)` (or `F ⊗ M`) is constant.
fn free_module_grid<F: Field>(free: &FreeComplex<F>, m: &ModulePresentation<F>, hom: bool) -> Vec<Multidegree> {
    let n = m.nvars();
    let mcuts = m.cut_values();
    let fdegs: Vec<&Multidegree> = free.all_degrees().collect();
    let cuts: Vec<BTreeSet<i64>> = (0..n)
        .map(|i| {
            let mut s = BTreeSet::new();
            for &v in &mcuts[i] {
                for g in &fdegs {
                    s.insert(if hom { v - g.0[i] } else { v + g.0[i] });
                }
            }
            s
        })
        .collect();
    if cuts.iter().any(BTreeSet::is_empty) {
        return Vec::new();
    }
    critical_grid(&cuts)
}

/// A degree where `H^q` of `Hom(F, M)` (or `F ⊗ M`) is nonzero, if any.
/// Exact: every region of constancy is probed.
pub fn nonvanishing_witness<F: Field>(
    free: &Arc<FreeComplex<F>>,
    m: &ModulePresentation<F>,
    q: i32,
    hom: bool,
) -> Result<Option<Multidegree>> {
    let x = Presented::shared(m.clone());
    let c = if hom {
        FreeBiComplex::hom(free.clone(), x)
    } else {
        FreeBiComplex::tensor(free.clone(), x)
    };
    for a in free_module_grid(free, m, hom) {
        if c.cohomology(q, &a)?.dim() > 0 {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// Whether a presented module is zero, decided on its critical grid.
pub fn is_zero_module<F: Field>(m: &ModulePresentation<F>) -> bool {
    let cuts = m.cut_values();
    if cuts.iter().any(BTreeSet::is_empty) {
        return true;
    }
    critical_grid(&cuts).iter().all(|b| m.strand_dim(b) == 0)
}

/// `grade(I, M) = min { j : Ext^j(R/I, M) != 0 }`; requires `IM != M`.
pub fn grade<F: Field>(ideal: &MonomialIdeal, m: &ModulePresentation<F>) -> Result<usize> {
    if is_zero_module(&m.quotient_by_ideal(ideal, 1)) {
        return Err(Error::GradeUndefined);
    }
    let res = resolve(&ModulePresentation::<F>::cyclic(ideal))?;
    for j in 0..=m.nvars() {
        if nonvanishing_witness(&res, m, j as i32, true)?.is_some() {
            return Ok(j);
        }
    }
    Err(Error::GradeUndefined)
}

/// Whether the minimal generators of `I` form an `M`-regular sequence:
/// `M/IM != 0` and the Koszul homology `H_1(x; M)` vanishes.
pub fn is_regular_sequence<F: Field>(ideal: &MonomialIdeal, m: &ModulePresentation<F>) -> Result<bool> {
    if is_zero_module(&m.quotient_by_ideal(ideal, 1)) {
        return Ok(false);
    }
    let k = Arc::new(koszul_homological::<F>(ideal.nvars(), ideal.gens(), 1)?);
    Ok(nonvanishing_witness(&k, m, -1, false)?.is_none())
}

/// The modules `N/I^sN`, their resolutions, and lifts of the surjections
/// `N/I^{s+1}N -> N/I^sN`, for `s = 1..=s_max`.
pub struct QuotientTower<F: Field> {
    pub module: ModulePresentation<F>,
    pub ideal: MonomialIdeal,
    pub quotients: Vec<ModulePresentation<F>>,
    pub resolutions: Vec<Arc<FreeComplex<F>>>,
    /// `comparisons[k]` lifts `N/I^{k+2}N -> N/I^{k+1}N`.
    pub comparisons: Vec<Arc<ChainMap<F>>>,
}

impl<F: Field> QuotientTower<F> {
    pub fn new(n: &ModulePresentation<F>, ideal: &MonomialIdeal, s_max: usize) -> Result<Self> {
        if s_max < 2 {
            return Err(Error::InvalidInput("limits need s_max >= 2".into()));
        }
        let quotients: Vec<_> = (1..=s_max).map(|s| n.quotient_by_ideal(ideal, s as u32)).collect();
        let res: Vec<Resolution<F>> = quotients.iter().map(Resolution::new).collect::<Result<_>>()?;
        let mut comparisons = Vec::new();
        for s in 0..s_max - 1 {
            let id = TermMatrix::identity(quotients[s + 1].generators());
            let map = ModuleMap::new(quotients[s + 1].clone(), quotients[s].clone(), id)?;
            comparisons.push(Arc::new(Resolution::lift(&map, &res[s + 1], &res[s])?));
        }
        Ok(QuotientTower {
            module: n.clone(),
            ideal: ideal.clone(),
            quotients,
            resolutions: res.iter().map(|r| Arc::new(r.complex().clone())).collect(),
            comparisons,
        })
    }

    pub fn s_max(&self) -> usize {
        self.quotients.len()
    }

    /// `Hom(F_s, X)` with the direct-system transitions.
    pub fn hom_stages(&self, x: &Graded<F>) -> Result<StageComplexes<F>> {
        let cs: Vec<Arc<FreeBiComplex<F>>> = self
            .resolutions
            .iter()
            .map(|f| Arc::new(FreeBiComplex::hom(f.clone(), x.clone())))
            .collect();
        let mut transitions: Vec<Arc<dyn GradedMap<F>>> = Vec::new();
        for (k, alpha) in self.comparisons.iter().enumerate() {
            transitions.push(Arc::new(MapOnFree::new(cs[k].clone(), cs[k + 1].clone(), alpha.clone())?));
        }
        let staged = Staged {
            direction: Direction::Forward,
            stages: cs.iter().map(|c| c.clone() as Graded<F>).collect(),
            transitions,
        };
        Ok((cs, staged))
    }

    /// `F_s ⊗ X` with the inverse-system transitions.
    pub fn tensor_stages(&self, x: &Graded<F>) -> Result<StageComplexes<F>> {
        let cs: Vec<Arc<FreeBiComplex<F>>> = self
            .resolutions
            .iter()
            .map(|f| Arc::new(FreeBiComplex::tensor(f.clone(), x.clone())))
            .collect();
        let mut transitions: Vec<Arc<dyn GradedMap<F>>> = Vec::new();
        for (k, alpha) in self.comparisons.iter().enumerate() {
            transitions.push(Arc::new(MapOnFree::new(cs[k + 1].clone(), cs[k].clone(), alpha.clone())?));
        }
        let staged = Staged {
            direction: Direction::Inverse,
            stages: cs.iter().map(|c| c.clone() as Graded<F>).collect(),
            transitions,
        };
        Ok((cs, staged))
    }
}

/// `H^i_I(N, X) = lim_s Ext^i(N/I^sN, X)`.
pub fn gen_local_cohomology<F: Field>(
    tower: &QuotientTower<F>,
    x: &Graded<F>,
    i: i32,
    w: &Window,
) -> Result<(HilbertTable, LimitSystem<F>)> {
    let (_, staged) = tower.hom_stages(x)?;
    let sys = LimitSystem::compute(&format!("H^{i}_I(N, -)"), &staged, i, w)?;
    Ok((sys.limit()?, sys))
}

/// `U^I_i(N, X) = lim_s Tor_i(N/I^sN, X)`.
pub fn gen_local_homology<F: Field>(
    tower: &QuotientTower<F>,
    x: &Graded<F>,
    i: i32,
    w: &Window,
) -> Result<(HilbertTable, LimitSystem<F>)> {
    let (_, staged) = tower.tensor_stages(x)?;
    let sys = LimitSystem::compute(&format!("U_{i}(N, -)"), &staged, -i, w)?;
    Ok((sys.limit()?, sys))
}

/// `L_iΛ^I(N, X)` via `0 -> lim^1 Tor_{i+1} -> L_i -> U_i -> 0`.
#[derive(Clone, Debug)]
pub struct CompletionHomology<F> {
    pub table: HilbertTable,
    pub system: LimitSystem<F>,
    /// Degreewise `lim^1` of the `Tor_{i+1}` system.
    pub lim1: Lim1Report,
}

pub fn completion_homology<F: Field>(
    tower: &QuotientTower<F>,
    x: &Graded<F>,
    i: i32,
    w: &Window,
) -> Result<CompletionHomology<F>> {
    let (_, staged) = tower.tensor_stages(x)?;
    let sys = LimitSystem::compute(&format!("L_{i}(N, -)"), &staged, -i, w)?;
    let next = LimitSystem::compute(&format!("Tor_{}(N/I^s N, -)", i + 1), &staged, -(i + 1), w)?;
    let lim1 = next.lim1()?;
    let u = sys.limit()?;
    let table = HilbertTable::from_fn(w, |a| u.get(a).unwrap_or(0) + lim1.table.get(a).unwrap_or(0));
    Ok(CompletionHomology {
        table,
        system: sys,
        lim1,
    })
}

/// The complexes `C_t = Tot(K(x^t) ⊗ F(N))` for `t = 1..=t_max` with the
/// comparison maps `C_{t+1} -> C_t`.
pub fn koszul_tower<F: Field>(
    n: &ModulePresentation<F>,
    ideal: &MonomialIdeal,
    t_max: usize,
) -> Result<KoszulTower<F>> {
    if t_max < 2 {
        return Err(Error::InvalidInput("limits need t_max >= 2".into()));
    }
    let nv = ideal.nvars();
    let f = resolve(n)?;
    let id_comps = (f.lo()..=f.hi())
        .map(|i| TermMatrix::identity(&f.term(i)))
        .collect::<Vec<_>>();
    let id = ChainMap::new((*f).clone(), (*f).clone(), f.lo(), id_comps)?;
    let mut cs = Vec::new();
    for t in 1..=t_max {
        let k = koszul_homological::<F>(nv, ideal.gens(), t as u32)?;
        cs.push(Arc::new(tensor_complexes(&k, &f)));
    }
    let mut maps = Vec::new();
    for t in 1..t_max {
        let kc = koszul_comparison::<F>(nv, ideal.gens(), t as u32)?;
        maps.push(Arc::new(tensor_chain_maps(&kc, &id)?));
    }
    Ok((cs, maps))
}

/// `lim_t H^{-i}(C_t ⊗ X)`, the Koszul description of `L_iΛ^I(N, X)`.
pub fn completion_homology_koszul<F: Field>(
    n: &ModulePresentation<F>,
    ideal: &MonomialIdeal,
    x: &Graded<F>,
    i: i32,
    w: &Window,
    t_max: usize,
) -> Result<(HilbertTable, LimitSystem<F>)> {
    let (cs, maps) = koszul_tower(n, ideal, t_max)?;
    let stages: Vec<Arc<FreeBiComplex<F>>> = cs
        .iter()
        .map(|c| Arc::new(FreeBiComplex::tensor(c.clone(), x.clone())))
        .collect();
    let mut transitions: Vec<Arc<dyn GradedMap<F>>> = Vec::new();
    for (k, m) in maps.iter().enumerate() {
        transitions.push(Arc::new(MapOnFree::new(stages[k + 1].clone(), stages[k].clone(), m.clone())?));
    }
    let staged = Staged {
        direction: Direction::Inverse,
        stages: stages.iter().map(|c| c.clone() as Graded<F>).collect(),
        transitions,
    };
    let sys = LimitSystem::compute(&format!("lim_t H^-{i}(C_t ⊗ -)"), &staged, -i, w)?;
    Ok((sys.limit()?, sys))
}

/// Both characterizations of the cograde of an Artinian `X` with respect
/// to `N/IN`, over a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CogradeReport {
    /// `inf { i : U_i(N, X) != 0 }` on the window, `None` if all vanish up to `n`.
    pub via_homology: Option<usize>,
    /// `inf { i : H^i_I(N, D(X)) != 0 }` on the mirrored window.
    pub via_dual_cohomology: Option<usize>,
}

impl CogradeReport {
    pub fn agree(&self) -> bool {
        self.via_homology == self.via_dual_cohomology
    }
}

/// Cograde of `X` (finite length or the dual of a finitely generated module).
pub fn cograde<F: Field>(tower: &QuotientTower<F>, x: &Graded<F>, w: &Window) -> Result<CogradeReport> {
    let nv = x.nvars();
    let dual: Graded<F> = Dual::shared(x.clone());
    let mirror = w.mirror();
    let mut via_homology = None;
    let mut via_dual_cohomology = None;
    for i in 0..=nv {
        if via_homology.is_none() && !gen_local_homology(tower, x, i as i32, w)?.0.is_zero() {
            via_homology = Some(i);
        }
        if via_dual_cohomology.is_none() && !gen_local_cohomology(tower, &dual, i as i32, &mirror)?.0.is_zero() {
            via_dual_cohomology = Some(i);
        }
    }
    Ok(CogradeReport {
        via_homology,
        via_dual_cohomology,
    })
}

/// `H^i_I(N, M)` as the cohomology of `Hom(F(N), Č_x ⊗ M)`, an independent
/// path to the direct limit.
pub fn cech_hom<F: Field>(
    n: &ModulePresentation<F>,
    ideal: &MonomialIdeal,
    m: &ModulePresentation<F>,
    i: i32,
    w: &Window,
) -> Result<HilbertTable> {
    let cech: Graded<F> = Arc::new(crate::cech::CechComplex::new(ideal, m)?);
    ext_graded(n, cech, i, w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cech::local_cohomology;
    use crate::field::Fp;
    use crate::ring::RingSpec;

    type F = Fp<32003>;

    fn md(v: &[i64]) -> Multidegree {
        Multidegree(v.to_vec())
    }

    #[test]
    fn ext_and_tor_basics() {
        let r = RingSpec::new(&["x"], 32003).unwrap();
        let x = MonomialIdeal::parse(&r, &["x"]).unwrap();
        let rx = ModulePresentation::<F>::cyclic(&x);
        let ring = ModulePresentation::<F>::ring(1);
        let w = Window::cube(1, -3, 3);
        assert_eq!(ext(&rx, &rx, 0, &w).unwrap(), rx.hilbert_table(&w));
        assert_eq!(ext(&rx, &ring, 1, &w).unwrap().support(), vec![(md(&[-1]), 1)]);
        assert_eq!(tor(&rx, &rx, 1, &w).unwrap().support(), vec![(md(&[1]), 1)]);
        assert!(tor(&ring, &rx, 1, &w).unwrap().is_zero());
        assert_eq!(ext(&ring, &rx, 0, &w).unwrap(), rx.hilbert_table(&w));
    }

    #[test]
    fn grades() {
        let r = RingSpec::new(&["x", "y"], 32003).unwrap();
        let m = MonomialIdeal::parse(&r, &["x", "y"]).unwrap();
        let x = MonomialIdeal::parse(&r, &["x"]).unwrap();
        let ring = ModulePresentation::<F>::ring(2);
        assert_eq!(grade(&m, &ring).unwrap(), 2);
        assert_eq!(grade(&x, &ring).unwrap(), 1);
        assert_eq!(grade(&x, &ModulePresentation::<F>::cyclic(&x)).unwrap(), 0);
        assert_eq!(grade(&MonomialIdeal::unit(2), &ring), Err(Error::GradeUndefined));
        let r4 = RingSpec::new(&["x", "y", "z", "w"], 32003).unwrap();
        let i = MonomialIdeal::parse(&r4, &["x*z", "x*w", "y*z", "y*w"]).unwrap();
        assert_eq!(grade(&i, &ModulePresentation::<F>::ring(4)).unwrap(), 2);
        assert!(is_regular_sequence(&m, &ring).unwrap());
        assert!(!is_regular_sequence(&i, &ModulePresentation::<F>::ring(4)).unwrap());
    }

    #[test]
    fn generalized_local_cohomology_with_free_first_argument_is_local_cohomology() {
        let r = RingSpec::new(&["x", "y"], 32003).unwrap();
        let m = MonomialIdeal::parse(&r, &["x", "y"]).unwrap();
        let ring = ModulePresentation::<F>::ring(2);
        let tower = QuotientTower::new(&ring, &m, 5).unwrap();
        let w = Window::cube(2, -2, 1);
        let x = Presented::shared(ring.clone());
        for i in 0..=2 {
            let (t, sys) = gen_local_cohomology(&tower, &x, i, &w).unwrap();
            assert_eq!(t, local_cohomology(&m, &ring, i, &w).unwrap());
            assert!(sys.stabilized_at.is_some());
        }
    }

    #[test]
    fn completion_homology_of_finite_length_module() {
        // N = R, M = k[x]/(x^2), I = (x): L_0 = M, L_1 = 0
        let r = RingSpec::new(&["x"], 32003).unwrap();
        let x = MonomialIdeal::parse(&r, &["x"]).unwrap();
        let m = ModulePresentation::<F>::cyclic(&x.power(2));
        let ring = ModulePresentation::<F>::ring(1);
        let tower = QuotientTower::new(&ring, &x, 6).unwrap();
        let w = Window::cube(1, -3, 3);
        let xm = Presented::shared(m.clone());
        let l0 = completion_homology(&tower, &xm, 0, &w).unwrap();
        assert_eq!(l0.table, m.hilbert_table(&w));
        assert!(l0.lim1.is_zero() && l0.lim1.mittag_leffler);
        assert!(completion_homology(&tower, &xm, 1, &w).unwrap().table.is_zero());
        let (k0, _) = completion_homology_koszul(&ring, &x, &xm, 0, &w, 6).unwrap();
        assert_eq!(k0, m.hilbert_table(&w));
    }
}
