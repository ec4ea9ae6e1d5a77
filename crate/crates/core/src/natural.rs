//! The natural homomorphisms between generalized local (co)homology modules
//! induced by the truncation sequence `0 -> H^c_I(M)[-c] -> τ -> C -> 0`.
//!
//! `τ` is the smart truncation at `c = grade(I, M)` of the Čech complex
//! `Č_x ⊗ M`; since `H^i_I(M) = 0` for `i < c` it is quasi-isomorphic to
//! `Č_x ⊗ M`. Each map is realized stagewise as `Hom(F_s, ψ)` or `F_s ⊗ ψ`,
//! with `F_s` a free resolution of `N/I^sN`, and assembled through the
//! corresponding limit.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cech::CechComplex;
use crate::derived::{grade, QuotientTower};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{
    cohomology_table, AmbientIdentity, Bottom, BottomInclusion, Dual, DualMap, FreeBiComplex, FreeOnMap, Graded,
    GradedMap, SmartTruncation, TruncationTail,
};
use crate::ideal::MonomialIdeal;
use crate::limits::{limit_map, Direction, LimitSystem, MapEntry};
use crate::linalg::{induced_map, rank};
use crate::module::ModulePresentation;
use crate::ring::Multidegree;
use crate::window::Window;

/// The Čech model of `Γ_I` of an injective resolution of `M`, its smart
/// truncation at the grade, the bottom cohomology, and the truncation complex.
pub struct TruncationModel<F: Field> {
    pub ideal: MonomialIdeal,
    pub module: ModulePresentation<F>,
    pub c: usize,
    pub cech: Graded<F>,
    pub tau: Graded<F>,
    /// `H^c_I(M)` placed at index `c`.
    pub bottom: Graded<F>,
    pub inclusion: Arc<dyn GradedMap<F>>,
    /// The truncation complex `C^·_M(I)`.
    pub tail: Graded<F>,
    pub projection: Arc<dyn GradedMap<F>>,
    pub dual_tau: Graded<F>,
    pub dual_bottom: Graded<F>,
    /// `D(τ) -> D(H^c[-c])`.
    pub dual_inclusion: Arc<dyn GradedMap<F>>,
}

impl<F: Field> TruncationModel<F> {
    pub fn new(ideal: &MonomialIdeal, module: &ModulePresentation<F>) -> Result<Self> {
        let c = grade(ideal, module)?;
        let ci = c as i32;
        let cech: Graded<F> = Arc::new(CechComplex::new(ideal, module)?);
        let tau: Graded<F> = Arc::new(SmartTruncation::new(cech.clone(), ci));
        let bottom: Graded<F> = Arc::new(Bottom::new(cech.clone(), ci));
        let inclusion: Arc<dyn GradedMap<F>> = Arc::new(BottomInclusion::new(bottom.clone(), tau.clone(), ci));
        let tail: Graded<F> = Arc::new(TruncationTail::new(cech.clone(), ci));
        let projection: Arc<dyn GradedMap<F>> = Arc::new(AmbientIdentity::new(tau.clone(), tail.clone(), ci));
        let dual_tau = Dual::shared(tau.clone());
        let dual_bottom = Dual::shared(bottom.clone());
        let dual_inclusion: Arc<dyn GradedMap<F>> =
            Arc::new(DualMap::new(inclusion.clone(), dual_tau.clone(), dual_bottom.clone()));
        Ok(TruncationModel {
            ideal: ideal.clone(),
            module: module.clone(),
            c,
            cech,
            tau,
            bottom,
            inclusion,
            tail,
            projection,
            dual_tau,
            dual_bottom,
            dual_inclusion,
        })
    }

    pub fn nvars(&self) -> usize {
        self.module.nvars()
    }

    /// Checks on `w`: the Čech complex has no cohomology below `c`, the
    /// tail has none up to `c`, and above `c` the tail carries `H^i_I(M)`.
    pub fn check(&self, w: &Window) -> Result<bool> {
        let c = self.c as i32;
        for i in 0..c {
            if !cohomology_table(&*self.cech, i, w)?.is_zero() {
                return Ok(false);
            }
        }
        for i in 0..=c {
            if !cohomology_table(&*self.tail, i, w)?.is_zero() {
                return Ok(false);
            }
        }
        for i in c + 1..=self.nvars() as i32 {
            if cohomology_table(&*self.tail, i, w)? != cohomology_table(&*self.cech, i, w)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The natural maps constructed here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    /// `H^i_I(N, H^c_I(M)) -> H^{i+c}_I(N, M)`.
    CohomologyBottom,
    /// `U_{i+c}(N, H^c_I(M)) -> U_i(N, M)`.
    HomologyBottom,
    /// `H^i_I(N, D(M)) -> H^{i+c}_I(N, D(H^c_I(M)))`.
    CohomologyDual,
    /// `U_{i+c}(N, D(M)) -> U_i(N, D(H^c_I(M)))`.
    HomologyDual,
    /// `L_{i+c}Λ(N, D(M)) -> L_iΛ(N, D(H^c_I(M)))`.
    CompletionDual,
    /// `U_{i+c}(N, D(D(H^c_I(M)))) -> U_i(N, M)`.
    HomologyDoubleDual,
    /// `L_{i+c}Λ(N, D(D(H^c_I(M)))) -> L_iΛ(N, M)`.
    CompletionDoubleDual,
}

impl MapKind {
    pub fn describe(self) -> &'static str {
        match self {
            MapKind::CohomologyBottom => "H^i_I(N, H^c_I(M)) -> H^{i+c}_I(N, M)",
            MapKind::HomologyBottom => "U_{i+c}(N, H^c_I(M)) -> U_i(N, M)",
            MapKind::CohomologyDual => "H^i_I(N, D(M)) -> H^{i+c}_I(N, D(H^c_I(M)))",
            MapKind::HomologyDual => "U_{i+c}(N, D(M)) -> U_i(N, D(H^c_I(M)))",
            MapKind::CompletionDual => "L_{i+c}(N, D(M)) -> L_i(N, D(H^c_I(M)))",
            MapKind::HomologyDoubleDual => "U_{i+c}(N, DD(H^c_I(M))) -> U_i(N, M)",
            MapKind::CompletionDoubleDual => "L_{i+c}(N, DD(H^c_I(M))) -> L_i(N, M)",
        }
    }

    fn direction(self) -> Direction {
        match self {
            MapKind::CohomologyBottom | MapKind::CohomologyDual => Direction::Forward,
            _ => Direction::Inverse,
        }
    }

    fn completion(self) -> bool {
        matches!(self, MapKind::CompletionDual | MapKind::CompletionDoubleDual)
    }
}

/// The map at one value of `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapRow {
    pub i: i32,
    pub source_stabilized_at: Option<usize>,
    pub target_stabilized_at: Option<usize>,
    /// Degrees of the window where source or target is nonzero; every
    /// other degree carries the zero map between zero spaces.
    pub entries: Vec<MapEntry>,
    /// For completion maps: `lim^1` of the next Tor systems vanishes on both
    /// sides with Mittag-Leffler confirmed, so `L = U` naturally.
    pub lim1_zero: Option<bool>,
}

impl MapRow {
    pub fn is_iso(&self) -> bool {
        self.entries.iter().all(MapEntry::is_iso) && self.lim1_zero != Some(false)
    }

    pub fn first_failure(&self) -> Option<&MapEntry> {
        self.entries.iter().find(|e| !e.is_iso())
    }

    pub fn entry(&self, a: &Multidegree) -> Option<&MapEntry> {
        self.entries.iter().find(|e| &e.degree == a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaturalMapReport {
    pub map: MapKind,
    pub description: String,
    pub n_label: String,
    pub c: usize,
    pub window: Window,
    pub s_max: usize,
    pub rows: Vec<MapRow>,
}

impl NaturalMapReport {
    pub fn all_iso(&self) -> bool {
        self.rows.iter().all(MapRow::is_iso)
    }

    pub fn row(&self, i: i32) -> Option<&MapRow> {
        self.rows.iter().find(|r| r.i == i)
    }

    /// The first `(i, entry)` where the map is not an isomorphism.
    pub fn first_failure(&self) -> Option<(i32, &MapEntry)> {
        self.rows
            .iter()
            .find_map(|r| r.first_failure().map(|e| (r.i, e)))
    }
}

/// Builds a natural map report over the indices `is` for one module `N`.
pub fn natural_map<F: Field>(
    kind: MapKind,
    model: &TruncationModel<F>,
    tower: &QuotientTower<F>,
    n_label: &str,
    is: RangeInclusive<i32>,
    w: &Window,
) -> Result<NaturalMapReport> {
    let c = model.c as i32;
    let (src, tgt, psi): (Graded<F>, Graded<F>, Arc<dyn GradedMap<F>>) = match kind {
        MapKind::CohomologyBottom | MapKind::HomologyBottom => {
            (model.bottom.clone(), model.tau.clone(), model.inclusion.clone())
        }
        MapKind::CohomologyDual | MapKind::HomologyDual | MapKind::CompletionDual => {
            (model.dual_tau.clone(), model.dual_bottom.clone(), model.dual_inclusion.clone())
        }
        MapKind::HomologyDoubleDual | MapKind::CompletionDoubleDual => {
            let dd_bottom = Dual::shared(model.dual_bottom.clone());
            let dd_tau = Dual::shared(model.dual_tau.clone());
            let psi: Arc<dyn GradedMap<F>> =
                Arc::new(DualMap::new(model.dual_inclusion.clone(), dd_bottom.clone(), dd_tau.clone()));
            (dd_bottom, dd_tau, psi)
        }
    };
    // cohomological index on both sides as a function of i
    let index = |i: i32| match kind {
        MapKind::CohomologyBottom => i + c,
        MapKind::HomologyBottom | MapKind::HomologyDoubleDual | MapKind::CompletionDoubleDual => -i,
        MapKind::CohomologyDual => i,
        MapKind::HomologyDual | MapKind::CompletionDual => -(i + c),
    };
    let hom = kind.direction() == Direction::Forward;
    let (src_cs, src_staged) = if hom {
        tower.hom_stages(&src)?
    } else {
        tower.tensor_stages(&src)?
    };
    let (tgt_cs, tgt_staged) = if hom {
        tower.hom_stages(&tgt)?
    } else {
        tower.tensor_stages(&tgt)?
    };
    let maps: Vec<Arc<dyn GradedMap<F>>> = src_cs
        .iter()
        .zip(&tgt_cs)
        .map(|(a, b)| Ok(Arc::new(FreeOnMap::new(a.clone(), b.clone(), psi.clone())?) as Arc<dyn GradedMap<F>>))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for i in is {
        let q = index(i);
        let name = kind.describe();
        let s_sys = LimitSystem::compute(&format!("source of {name} at i = {i}"), &src_staged, q, w)?;
        let t_sys = LimitSystem::compute(&format!("target of {name} at i = {i}"), &tgt_staged, q, w)?;
        let entries: Vec<MapEntry> = limit_map(&s_sys, &t_sys, &maps, q)?
            .into_iter()
            .filter(|e| e.source_dim > 0 || e.target_dim > 0)
            .collect();
        let lim1_zero = if kind.completion() {
            let mut ok = true;
            for staged in [&src_staged, &tgt_staged] {
                let next = LimitSystem::compute("lim^1 system", staged, q - 1, w)?;
                let rep = next.lim1()?;
                ok &= rep.is_zero() && rep.mittag_leffler;
            }
            Some(ok)
        } else {
            None
        };
        rows.push(MapRow {
            i,
            source_stabilized_at: s_sys.stabilized_at,
            target_stabilized_at: t_sys.stabilized_at,
            entries,
            lim1_zero,
        });
    }
    Ok(NaturalMapReport {
        map: kind,
        description: kind.describe().to_string(),
        n_label: n_label.to_string(),
        c: model.c,
        window: w.clone(),
        s_max: tower.s_max(),
        rows,
    })
}

/// Default indices for a map family: `i` from `-c` to `n - c`.
pub fn default_indices<F: Field>(model: &TruncationModel<F>) -> RangeInclusive<i32> {
    let c = model.c as i32;
    -c..=model.nvars() as i32 - c
}

pub fn map_thm2_i<F: Field>(
    model: &TruncationModel<F>,
    tower: &QuotientTower<F>,
    n_label: &str,
    is: RangeInclusive<i32>,
    w: &Window,
) -> Result<NaturalMapReport> {
    natural_map(MapKind::CohomologyBottom, model, tower, n_label, is, w)
}

pub fn map_prop1<F: Field>(
    model: &TruncationModel<F>,
    tower: &QuotientTower<F>,
    n_label: &str,
    is: RangeInclusive<i32>,
    w: &Window,
) -> Result<NaturalMapReport> {
    natural_map(MapKind::HomologyBottom, model, tower, n_label, is, w)
}

pub fn map_thm2_ii<F: Field>(
    model: &TruncationModel<F>,
    tower: &QuotientTower<F>,
    n_label: &str,
    is: RangeInclusive<i32>,
    w: &Window,
) -> Result<NaturalMapReport> {
    natural_map(MapKind::CohomologyDual, model, tower, n_label, is, w)
}

/// Whether `dual` is, degree by degree, the transpose of `primal` at the
/// mirrored degree: source and target dimensions swap and ranks agree.
/// Both reports must cover the same indices on mirrored windows.
pub fn is_transpose_of(dual: &NaturalMapReport, primal: &NaturalMapReport) -> bool {
    if dual.window != primal.window.mirror() || dual.rows.len() != primal.rows.len() {
        return false;
    }
    for (d, p) in dual.rows.iter().zip(&primal.rows) {
        if d.i != p.i || d.entries.len() != p.entries.len() {
            return false;
        }
        let by_degree: BTreeMap<&Multidegree, &MapEntry> = p.entries.iter().map(|e| (&e.degree, e)).collect();
        for e in &d.entries {
            let Some(q) = by_degree.get(&-&e.degree) else {
                return false;
            };
            if e.source_dim != q.target_dim || e.target_dim != q.source_dim || e.rank != q.rank {
                return false;
            }
        }
    }
    true
}

/// Rank-exactness of `Ext^{i-c}(N/I^sN, H^c) -> Ext^i(N/I^sN, M) -> Ext^i(N/I^sN, C)`
/// at one stage `s` (one-based) and degree `a`.
pub fn truncation_sequence_exact<F: Field>(
    model: &TruncationModel<F>,
    tower: &QuotientTower<F>,
    s: usize,
    i: i32,
    a: &Multidegree,
) -> Result<bool> {
    let f = tower
        .resolutions
        .get(s.wrapping_sub(1))
        .ok_or_else(|| Error::InvalidInput(format!("stage {s} out of range")))?;
    let hb = Arc::new(FreeBiComplex::hom(f.clone(), model.bottom.clone()));
    let ht = Arc::new(FreeBiComplex::hom(f.clone(), model.tau.clone()));
    let hc = Arc::new(FreeBiComplex::hom(f.clone(), model.tail.clone()));
    let first = FreeOnMap::new(hb.clone(), ht.clone(), model.inclusion.clone())?;
    let second = FreeOnMap::new(ht.clone(), hc.clone(), model.projection.clone())?;
    use crate::graded::GradedComplex;
    let h1 = hb.cohomology(i, a)?;
    let h2 = ht.cohomology(i, a)?;
    let h3 = hc.cohomology(i, a)?;
    let m1 = induced_map(&first.component(i, a)?, &h1, &h2)?;
    let m2 = induced_map(&second.component(i, a)?, &h2, &h3)?;
    Ok(m2.mul(&m1).is_zero() && rank(&m1) + rank(&m2) == h2.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::ring::RingSpec;

    type F = Fp<32003>;

    #[test]
    fn model_invariants() {
        let r = RingSpec::new(&["x", "y", "z", "w"], 32003).unwrap();
        let i = MonomialIdeal::parse(&r, &["x*z", "x*w", "y*z", "y*w"]).unwrap();
        let model = TruncationModel::<F>::new(&i, &ModulePresentation::ring(4)).unwrap();
        assert_eq!(model.c, 2);
        let w = Window::cube(4, -1, 0);
        assert!(model.check(&w).unwrap());
        let h3 = cohomology_table(&*model.tail, 3, &w).unwrap();
        assert_eq!(h3.support(), vec![(Multidegree(vec![-1, -1, -1, -1]), 1)]);
    }

    #[test]
    fn regular_sequence_maps_are_isomorphisms() {
        let r = RingSpec::new(&["x", "y"], 32003).unwrap();
        let m = MonomialIdeal::parse(&r, &["x", "y"]).unwrap();
        let ring = ModulePresentation::<F>::ring(2);
        let model = TruncationModel::new(&m, &ring).unwrap();
        let tower = QuotientTower::new(&ring, &m, 6).unwrap();
        let w = Window::cube(2, -2, 1);
        let is = default_indices(&model);
        let a = map_thm2_i(&model, &tower, "R", is.clone(), &w).unwrap();
        assert!(a.all_iso(), "{:?}", a.first_failure());
        // H^0_I(R, H^2) = H^2_m(R) sits in negative degrees
        assert!(a.row(0).unwrap().entry(&Multidegree(vec![-1, -1])).is_some());
        let b = natural_map(MapKind::HomologyDual, &model, &tower, "R", is.clone(), &w.mirror()).unwrap();
        assert!(b.all_iso());
        assert!(is_transpose_of(&b, &a));
        let ii = map_thm2_ii(&model, &tower, "R", is.clone(), &w).unwrap();
        let p = map_prop1(&model, &tower, "R", is, &w.mirror()).unwrap();
        assert!(is_transpose_of(&ii, &p));
        assert!(truncation_sequence_exact(&model, &tower, 3, 2, &Multidegree(vec![-1, -2])).unwrap());
    }
}
