//! Direct and inverse systems of degreewise cohomology and their limits.
//!
//! A staged family is a sequence of graded complexes `X_1, X_2, ...` with
//! transition maps (`X_s -> X_{s+1}` for direct systems, `X_{s+1} -> X_s`
//! for inverse systems). Every stage is finite dimensional in each degree,
//! so a system whose transitions are isomorphisms from some stage on has its
//! limit equal to that stage, and inverse systems satisfy Mittag-Leffler.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{Graded, GradedMap};
use crate::linalg::{induced_map, rank, DenseMatrix, Subquotient};
use crate::ring::Multidegree;
use crate::window::{HilbertTable, Window};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Inverse,
}

/// Graded complexes indexed by `s = 1..=s_max` with transition maps.
#[derive(Clone)]
pub struct Staged<F: Field> {
    pub direction: Direction,
    pub stages: Vec<Graded<F>>,
    /// `transitions[k]` connects stages `k + 1` and `k + 2` (one-based) in
    /// the system's direction.
    pub transitions: Vec<Arc<dyn GradedMap<F>>>,
}

impl<F: Field> Staged<F> {
    pub fn s_max(&self) -> usize {
        self.stages.len()
    }
}

/// Degreewise data of one cohomology index of a staged family.
#[derive(Clone, Debug)]
pub struct LimitSystem<F> {
    pub what: String,
    pub direction: Direction,
    pub index: i32,
    pub window: Window,
    /// `stages[k]` is the table of stage `k + 1`.
    pub stages: Vec<HilbertTable>,
    /// Per transition, the matrices of the induced maps by degree.
    pub transitions: Vec<BTreeMap<Multidegree, DenseMatrix<F>>>,
    /// Smallest stage from which every later transition is an isomorphism
    /// on the whole window; requires at least one such transition.
    pub stabilized_at: Option<usize>,
}

impl<F: Field> LimitSystem<F> {
    /// Computes `H^index` of every stage over `w` and the induced transitions.
    pub fn compute(what: &str, staged: &Staged<F>, index: i32, w: &Window) -> Result<Self> {
        let s_max = staged.s_max();
        if s_max == 0 {
            return Err(Error::InvalidInput("a limit system needs at least one stage".into()));
        }
        let points = w.points();
        let per_degree: Vec<(Vec<usize>, Vec<DenseMatrix<F>>)> = points
            .par_iter()
            .map(|a| degree_data(staged, index, a))
            .collect::<Result<Vec<_>>>()?;
        let mut stages = vec![BTreeMap::new(); s_max];
        let mut transitions = vec![BTreeMap::new(); s_max - 1];
        for (a, (dims, maps)) in points.iter().zip(per_degree) {
            for (s, d) in dims.into_iter().enumerate() {
                stages[s].insert(a.clone(), d);
            }
            for (k, m) in maps.into_iter().enumerate() {
                transitions[k].insert(a.clone(), m);
            }
        }
        let stages: Vec<HilbertTable> = stages
            .into_iter()
            .map(|dims| HilbertTable {
                window: w.clone(),
                dims,
            })
            .collect();
        let mut sys = LimitSystem {
            what: what.to_string(),
            direction: staged.direction,
            index,
            window: w.clone(),
            stages,
            transitions,
            stabilized_at: None,
        };
        sys.stabilized_at = sys.find_stabilization();
        Ok(sys)
    }

    pub fn s_max(&self) -> usize {
        self.stages.len()
    }

    /// Whether transition `k` (between stages `k+1` and `k+2`) is an
    /// isomorphism at every degree.
    pub fn transition_is_iso(&self, k: usize) -> bool {
        let (src, dst) = match self.direction {
            Direction::Forward => (&self.stages[k], &self.stages[k + 1]),
            Direction::Inverse => (&self.stages[k + 1], &self.stages[k]),
        };
        self.transitions[k].iter().all(|(a, m)| {
            let r = rank(m);
            Some(r) == src.get(a) && Some(r) == dst.get(a)
        })
    }

    fn find_stabilization(&self) -> Option<usize> {
        let s_max = self.s_max();
        let mut start = None;
        for k in (0..s_max.saturating_sub(1)).rev() {
            if self.transition_is_iso(k) {
                start = Some(k + 1);
            } else {
                break;
            }
        }
        start
    }

    /// The limit table, equal to the last stage once stabilized.
    pub fn limit(&self) -> Result<HilbertTable> {
        match self.stabilized_at {
            Some(_) => Ok(self.stages[self.s_max() - 1].clone()),
            None => Err(self.unstabilized()),
        }
    }

    pub fn unstabilized(&self) -> Error {
        Error::UnstabilizedLimit {
            what: self.what.clone(),
            s_max: self.s_max(),
            partial: Box::new(self.stages[self.s_max() - 1].clone()),
        }
    }

    /// For an inverse system: reports the degreewise `lim^1` table, which
    /// is zero because every stage is finite dimensional in each degree.
    /// Mittag-Leffler is confirmed on the computed range when the system has
    /// stabilized (images of `X_t -> X_s` are then constant for large `t`)
    /// or when the images from the last two stages already agree.
    pub fn lim1(&self) -> Result<Lim1Report> {
        if self.direction != Direction::Inverse {
            return Err(Error::InvalidInput("lim^1 is defined for inverse systems".into()));
        }
        let s_max = self.s_max();
        let ml = self.stabilized_at.is_some()
            || self.window.points().into_iter().all(|a| {
                (0..s_max.saturating_sub(2))
                    .all(|s| self.composite_rank(a.clone(), s_max - 1, s) == self.composite_rank(a.clone(), s_max - 2, s))
            });
        Ok(Lim1Report {
            table: HilbertTable::zero(&self.window),
            mittag_leffler: ml,
            stages: s_max,
        })
    }

    /// Rank of the composite of transitions from stage `from` down to stage
    /// `to` (zero-based, `from >= to`) at degree `a`.
    fn composite_rank(&self, a: Multidegree, from: usize, to: usize) -> usize {
        let dim = self.stages[from].get(&a).unwrap_or(0);
        let mut m = DenseMatrix::<F>::identity(dim);
        for k in (to..from).rev() {
            m = self.transitions[k][&a].mul(&m);
        }
        rank(&m)
    }
}

fn degree_data<F: Field>(staged: &Staged<F>, q: i32, a: &Multidegree) -> Result<(Vec<usize>, Vec<DenseMatrix<F>>)> {
    let hs: Vec<Subquotient<F>> = staged
        .stages
        .iter()
        .map(|x| x.cohomology(q, a))
        .collect::<Result<_>>()?;
    let mut maps = Vec::with_capacity(hs.len().saturating_sub(1));
    for (k, t) in staged.transitions.iter().enumerate() {
        let (src, dst) = match staged.direction {
            Direction::Forward => (&hs[k], &hs[k + 1]),
            Direction::Inverse => (&hs[k + 1], &hs[k]),
        };
        maps.push(induced_map(&t.component(q, a)?, src, dst)?);
    }
    Ok((hs.iter().map(Subquotient::dim).collect(), maps))
}

/// Degreewise `lim^1` of an inverse system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lim1Report {
    pub table: HilbertTable,
    /// Whether images stabilized within the computed stages.
    pub mittag_leffler: bool,
    pub stages: usize,
}

impl Lim1Report {
    pub fn is_zero(&self) -> bool {
        self.table.is_zero()
    }
}

/// Per-degree data of a map between two limits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapEntry {
    pub degree: Multidegree,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl MapEntry {
    pub fn is_iso(&self) -> bool {
        self.rank == self.source_dim && self.rank == self.target_dim
    }

    pub fn is_injective(&self) -> bool {
        self.rank == self.source_dim
    }

    pub fn is_surjective(&self) -> bool {
        self.rank == self.target_dim
    }
}

/// The map between the limits of two systems of the same direction
/// induced by stagewise maps `X_s -> Y_s`. Both systems must have
/// stabilized; the limit map is then the map at the last stage.
pub fn limit_map<F: Field>(
    source: &LimitSystem<F>,
    target: &LimitSystem<F>,
    maps: &[Arc<dyn GradedMap<F>>],
    source_index: i32,
) -> Result<Vec<MapEntry>> {
    if source.stabilized_at.is_none() {
        return Err(source.unstabilized());
    }
    if target.stabilized_at.is_none() {
        return Err(target.unstabilized());
    }
    let last = maps
        .last()
        .ok_or_else(|| Error::InvalidInput("no stage maps".into()))?;
    let points = source.window.points();
    points
        .par_iter()
        .map(|a| {
            let src = last.source().cohomology(source_index, a)?;
            let dst = last.target().cohomology(source_index, a)?;
            let m = induced_map(&last.component(source_index, a)?, &src, &dst)?;
            Ok(MapEntry {
                degree: a.clone(),
                source_dim: src.dim(),
                target_dim: dst.dim(),
                rank: rank(&m),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{FreeBiComplex, MapOnFree, Presented};
    use crate::module::ModulePresentation;
    use crate::resolution::Resolution;
    use crate::ring::RingSpec;
    use crate::{field::Fp, ideal::MonomialIdeal, module::ModuleMap, module::TermMatrix};

    type F = Fp<32003>;

    /// Ext^1(k[x]/(x^s), k[x]) forms a direct system converging to H^1_(x)(k[x]).
    #[test]
    fn direct_limit_of_ext() {
        let r = RingSpec::new(&["x"], 32003).unwrap();
        let x = MonomialIdeal::parse(&r, &["x"]).unwrap();
        let ring: Graded<F> = Presented::shared(ModulePresentation::ring(1));
        let s_max = 5;
        let mods: Vec<_> = (1..=s_max)
            .map(|s| ModulePresentation::<F>::ring(1).quotient_by_ideal(&x, s as u32))
            .collect();
        let res: Vec<Resolution<F>> = mods.iter().map(|m| Resolution::new(m).unwrap()).collect();
        let homs: Vec<Arc<FreeBiComplex<F>>> = res
            .iter()
            .map(|rr| Arc::new(FreeBiComplex::hom(Arc::new(rr.complex().clone()), ring.clone())))
            .collect();
        let mut transitions: Vec<Arc<dyn GradedMap<F>>> = Vec::new();
        for s in 0..s_max - 1 {
            let map = ModuleMap::new(
                mods[s + 1].clone(),
                mods[s].clone(),
                TermMatrix::identity(mods[s + 1].generators()),
            )
            .unwrap();
            let alpha = Resolution::lift(&map, &res[s + 1], &res[s]).unwrap();
            transitions.push(Arc::new(
                MapOnFree::new(homs[s].clone(), homs[s + 1].clone(), Arc::new(alpha)).unwrap(),
            ));
        }
        let staged = Staged {
            direction: Direction::Forward,
            stages: homs.iter().map(|h| h.clone() as Graded<F>).collect(),
            transitions,
        };
        let w = Window::cube(1, -3, 1);
        let sys = LimitSystem::compute("ext", &staged, 1, &w).unwrap();
        // degree -3 first appears at s = 3
        assert_eq!(sys.stages[1].get(&Multidegree(vec![-3])), Some(0));
        assert_eq!(sys.stages[2].get(&Multidegree(vec![-3])), Some(1));
        assert_eq!(sys.stabilized_at, Some(3));
        let lim = sys.limit().unwrap();
        assert_eq!(lim.support().len(), 3);
        assert!(lim.get(&Multidegree(vec![0])) == Some(0));
    }
}
