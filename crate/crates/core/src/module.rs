//! Free modules, term matrices and finitely generated module presentations.
//!
//! Because every entry of a term matrix is a single term whose monomial is
//! forced by the degrees (`source_j - target_i`), a term matrix is stored as
//! a plain coefficient matrix annotated with source and target degrees. The
//! degree-`b` strand of a free module is spanned by the generators of degree
//! `<= b`, and multiplication by a monomial is the inclusion of these index
//! sets.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::ideal::MonomialIdeal;
use crate::linalg::{DenseMatrix, Span, Subquotient};
use crate::ring::{Monomial, Multidegree, RingSpec, Term};
use crate::window::{HilbertTable, Window};

/// A graded free module `⊕ R(-d_j)`, recorded by its generator degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FreeModule {
    nvars: usize,
    degrees: Vec<Multidegree>,
}

impl FreeModule {
    pub fn new(nvars: usize, degrees: Vec<Multidegree>) -> Result<Self> {
        if let Some(d) = degrees.iter().find(|d| d.len() != nvars) {
            return Err(Error::DimensionMismatch(format!(
                "generator degree {d} does not have {nvars} components"
            )));
        }
        Ok(FreeModule { nvars, degrees })
    }

    pub fn zero(nvars: usize) -> Self {
        FreeModule {
            nvars,
            degrees: Vec::new(),
        }
    }

    /// `R^1` generated in degree zero.
    pub fn ring(nvars: usize) -> Self {
        FreeModule {
            nvars,
            degrees: vec![Multidegree::zero(nvars)],
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[Multidegree] {
        &self.degrees
    }

    pub fn degree(&self, j: usize) -> &Multidegree {
        &self.degrees[j]
    }

    /// Indices of the generators of degree `<= b`, in order.
    pub fn active(&self, b: &Multidegree) -> Vec<usize> {
        (0..self.degrees.len()).filter(|&j| self.degrees[j].le(b)).collect()
    }

    pub fn direct_sum(&self, other: &FreeModule) -> FreeModule {
        let mut degrees = self.degrees.clone();
        degrees.extend(other.degrees.iter().cloned());
        FreeModule {
            nvars: self.nvars,
            degrees,
        }
    }

    /// Twist every generator degree by `+d`.
    pub fn shifted(&self, d: &Multidegree) -> FreeModule {
        FreeModule {
            nvars: self.nvars,
            degrees: self.degrees.iter().map(|g| g + d).collect(),
        }
    }

    pub fn select(&self, idx: &[usize]) -> FreeModule {
        FreeModule {
            nvars: self.nvars,
            degrees: idx.iter().map(|&j| self.degrees[j].clone()).collect(),
        }
    }
}

/// Inclusion of active index sets `from ⊆ to` as a 0/1 matrix.
pub(crate) fn inclusion<F: Field>(from: &[usize], to: &[usize]) -> DenseMatrix<F> {
    let mut m = DenseMatrix::zeros(to.len(), from.len());
    let mut k = 0;
    for (jj, &j) in from.iter().enumerate() {
        while to[k] != j {
            k += 1;
        }
        m[(k, jj)] = F::one();
    }
    m
}

/// A multidegree-homogeneous matrix of terms between free modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermMatrix<F> {
    source: FreeModule,
    target: FreeModule,
    coeffs: DenseMatrix<F>,
}

impl<F: Field> TermMatrix<F> {
    /// Builds a term matrix from its coefficients; nonzero entries must sit
    /// where `target_i <= source_j`.
    pub fn new(source: FreeModule, target: FreeModule, coeffs: DenseMatrix<F>) -> Result<Self> {
        if coeffs.shape() != (target.rank(), source.rank()) {
            return Err(Error::DimensionMismatch(format!(
                "coefficients {:?} for a map of ranks {} -> {}",
                coeffs.shape(),
                source.rank(),
                target.rank()
            )));
        }
        for i in 0..target.rank() {
            for j in 0..source.rank() {
                if !coeffs[(i, j)].is_zero() && !target.degree(i).le(source.degree(j)) {
                    return Err(Error::NonHomogeneous {
                        row: i,
                        col: j,
                        reason: format!(
                            "source degree {} is not above target degree {}",
                            source.degree(j),
                            target.degree(i)
                        ),
                    });
                }
            }
        }
        Ok(TermMatrix { source, target, coeffs })
    }

    /// Builds a term matrix from optional terms, checking
    /// `deg(mono) = source_j - target_i` for every present entry.
    pub fn from_terms(source: FreeModule, target: FreeModule, entries: &[Vec<Option<Term<F>>>]) -> Result<Self> {
        if entries.len() != target.rank() || entries.iter().any(|r| r.len() != source.rank()) {
            return Err(Error::DimensionMismatch("term grid shape does not match ranks".into()));
        }
        let mut coeffs = DenseMatrix::zeros(target.rank(), source.rank());
        for (i, row) in entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                if let Some(t) = e {
                    let want = source.degree(j) - target.degree(i);
                    if t.mono.degree() != want {
                        return Err(Error::NonHomogeneous {
                            row: i,
                            col: j,
                            reason: format!("monomial degree {} but source - target = {}", t.mono.degree(), want),
                        });
                    }
                    coeffs[(i, j)] = t.coeff;
                }
            }
        }
        Ok(TermMatrix { source, target, coeffs })
    }

    /// Like [`TermMatrix::from_terms`], inferring each source degree from the
    /// first entry present in its column. Empty columns get degree zero.
    pub fn infer_source(target: FreeModule, entries: &[Vec<Option<Term<F>>>]) -> Result<Self> {
        let cols = entries.first().map_or(0, Vec::len);
        let nvars = target.nvars();
        let mut degs = Vec::with_capacity(cols);
        for j in 0..cols {
            let d = (0..entries.len())
                .find_map(|i| entries[i][j].as_ref().map(|t| target.degree(i) + &t.mono.degree()))
                .unwrap_or_else(|| Multidegree::zero(nvars));
            degs.push(d);
        }
        Self::from_terms(FreeModule::new(nvars, degs)?, target, entries)
    }

    pub fn zero(source: FreeModule, target: FreeModule) -> Self {
        let coeffs = DenseMatrix::zeros(target.rank(), source.rank());
        TermMatrix { source, target, coeffs }
    }

    pub fn identity(m: &FreeModule) -> Self {
        TermMatrix {
            source: m.clone(),
            target: m.clone(),
            coeffs: DenseMatrix::identity(m.rank()),
        }
    }

    pub fn source(&self) -> &FreeModule {
        &self.source
    }

    pub fn target(&self) -> &FreeModule {
        &self.target
    }

    pub fn coeffs(&self) -> &DenseMatrix<F> {
        &self.coeffs
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<Term<F>> {
        let c = self.coeffs[(i, j)];
        if c.is_zero() {
            return None;
        }
        let mono = (self.source.degree(j) - self.target.degree(i))
            .to_monomial()
            .expect("validated on construction");
        Some(Term { coeff: c, mono })
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &TermMatrix<F>) -> Result<TermMatrix<F>> {
        if rhs.target != self.source {
            return Err(Error::DimensionMismatch("composing term matrices with mismatched modules".into()));
        }
        Ok(TermMatrix {
            source: rhs.source.clone(),
            target: self.target.clone(),
            coeffs: self.coeffs.mul(&rhs.coeffs),
        })
    }

    pub fn scale(&self, c: F) -> TermMatrix<F> {
        TermMatrix {
            source: self.source.clone(),
            target: self.target.clone(),
            coeffs: self.coeffs.scale(c),
        }
    }

    pub fn add(&self, rhs: &TermMatrix<F>) -> Result<TermMatrix<F>> {
        if self.source != rhs.source || self.target != rhs.target {
            return Err(Error::DimensionMismatch("adding term matrices between different modules".into()));
        }
        Ok(TermMatrix {
            source: self.source.clone(),
            target: self.target.clone(),
            coeffs: self.coeffs.add(&rhs.coeffs),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    /// The degree-`b` strand: rows are active target generators, columns
    /// active source generators.
    pub fn strand(&self, b: &Multidegree) -> DenseMatrix<F> {
        self.coeffs.submatrix(&self.target.active(b), &self.source.active(b))
    }

    /// Whether some entry is a unit (a nonzero coefficient between
    /// generators of equal degree).
    pub fn unit_entry(&self) -> Option<(usize, usize)> {
        for j in 0..self.source.rank() {
            for i in 0..self.target.rank() {
                if !self.coeffs[(i, j)].is_zero() && self.source.degree(j) == self.target.degree(i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Block matrix `[self | rhs]` with the same target.
    pub fn hstack(&self, rhs: &TermMatrix<F>) -> Result<TermMatrix<F>> {
        if self.target != rhs.target {
            return Err(Error::DimensionMismatch("hstack of term matrices with different targets".into()));
        }
        Ok(TermMatrix {
            source: self.source.direct_sum(&rhs.source),
            target: self.target.clone(),
            coeffs: self.coeffs.hstack(&rhs.coeffs),
        })
    }

    /// Block diagonal `self ⊕ rhs`.
    pub fn direct_sum(&self, rhs: &TermMatrix<F>) -> TermMatrix<F> {
        let mut c = DenseMatrix::zeros(self.target.rank() + rhs.target.rank(), self.source.rank() + rhs.source.rank());
        c.set_block(0, 0, &self.coeffs);
        c.set_block(self.target.rank(), self.source.rank(), &rhs.coeffs);
        TermMatrix {
            source: self.source.direct_sum(&rhs.source),
            target: self.target.direct_sum(&rhs.target),
            coeffs: c,
        }
    }

    pub(crate) fn from_parts_unchecked(source: FreeModule, target: FreeModule, coeffs: DenseMatrix<F>) -> Self {
        TermMatrix { source, target, coeffs }
    }

    pub fn display(&self, ring: &RingSpec) -> String {
        let mut rows = Vec::new();
        for i in 0..self.target.rank() {
            let mut row = Vec::new();
            for j in 0..self.source.rank() {
                row.push(match self.entry(i, j) {
                    None => "0".to_string(),
                    Some(t) => {
                        let m = t.mono.display(ring);
                        let c = t.coeff.to_signed();
                        match (c, m.as_str()) {
                            (_, "1") => c.to_string(),
                            (1, _) => m,
                            (-1, _) => format!("-{m}"),
                            _ => format!("{c}*{m}"),
                        }
                    }
                });
            }
            rows.push(format!("[{}]", row.join(", ")));
        }
        format!("[{}]", rows.join(", "))
    }
}

/// A finitely generated graded module `coker(relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation<F> {
    relations: TermMatrix<F>,
}

impl<F: Field> ModulePresentation<F> {
    pub fn new(relations: TermMatrix<F>) -> Self {
        ModulePresentation { relations }
    }

    /// The free module itself.
    pub fn free(gens: FreeModule) -> Self {
        let nv = gens.nvars();
        ModulePresentation {
            relations: TermMatrix::zero(FreeModule::zero(nv), gens),
        }
    }

    /// `R` generated in degree zero.
    pub fn ring(nvars: usize) -> Self {
        Self::free(FreeModule::ring(nvars))
    }

    /// `R/I` generated in degree zero.
    pub fn cyclic(ideal: &MonomialIdeal) -> Self {
        Self::ring(ideal.nvars()).quotient_by_ideal(ideal, 1)
    }

    /// The residue field `k = R/(x_1, ..., x_n)`.
    pub fn residue_field(nvars: usize) -> Self {
        Self::cyclic(&MonomialIdeal::variables(nvars, &(0..nvars).collect::<Vec<_>>()))
    }

    pub fn relations(&self) -> &TermMatrix<F> {
        &self.relations
    }

    pub fn generators(&self) -> &FreeModule {
        self.relations.target()
    }

    pub fn nvars(&self) -> usize {
        self.generators().nvars()
    }

    /// The module with every degree raised by `d` (generators move to `deg + d`).
    pub fn shifted(&self, d: &Multidegree) -> Self {
        let r = &self.relations;
        ModulePresentation {
            relations: TermMatrix::from_parts_unchecked(r.source().shifted(d), r.target().shifted(d), r.coeffs().clone()),
        }
    }

    /// Presentation of `N / I^s N`: the relations of `N` followed by the
    /// products of the generators of `I^s` with each generator of `N`.
    pub fn quotient_by_ideal(&self, ideal: &MonomialIdeal, s: u32) -> Self {
        let pw = ideal.power(s);
        let gens = self.generators();
        let mut degs = Vec::new();
        let mut cols: Vec<(usize, Multidegree)> = Vec::new();
        for j in 0..gens.rank() {
            for m in pw.gens() {
                let d = gens.degree(j) + &m.degree();
                cols.push((j, d.clone()));
                degs.push(d);
            }
        }
        let extra_src = FreeModule::new(gens.nvars(), degs).expect("consistent lengths");
        let mut c = DenseMatrix::zeros(gens.rank(), cols.len());
        for (k, (j, _)) in cols.iter().enumerate() {
            c[(*j, k)] = F::one();
        }
        let extra = TermMatrix::from_parts_unchecked(extra_src, gens.clone(), c);
        ModulePresentation {
            relations: self.relations.hstack(&extra).expect("same target"),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        ModulePresentation {
            relations: self.relations.direct_sum(&other.relations),
        }
    }

    /// The degree-`b` piece as a quotient of the span of active generators.
    pub fn strand(&self, b: &Multidegree) -> Subquotient<F> {
        let act = self.generators().active(b);
        let rel = self.relations.strand(b);
        Subquotient::quotient(act.len(), &rel)
    }

    pub fn strand_dim(&self, b: &Multidegree) -> usize {
        self.strand(b).dim()
    }

    pub fn hilbert_table(&self, w: &Window) -> HilbertTable {
        HilbertTable::from_fn(w, |a| self.strand_dim(a))
    }

    /// Coordinate values at which the Hilbert function can change, per variable.
    pub fn cut_values(&self) -> Vec<BTreeSet<i64>> {
        let n = self.nvars();
        let mut cuts = vec![BTreeSet::new(); n];
        for d in self.generators().degrees().iter().chain(self.relations.source().degrees()) {
            for (cut, v) in cuts.iter_mut().zip(&d.0) {
                cut.insert(*v);
            }
        }
        cuts
    }

    /// Componentwise maximum of all generator and relation degrees.
    pub fn max_degree(&self) -> Option<Multidegree> {
        let mut it = self.generators().degrees().iter().chain(self.relations.source().degrees());
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, d| acc.join(d)))
    }

    /// Whether the module has finite length. A region of the critical grid
    /// that is unbounded above in some coordinate must carry a zero strand.
    pub fn is_finite_length(&self) -> bool {
        let cuts = self.cut_values();
        let tops: Vec<Option<i64>> = cuts.iter().map(|c| c.last().copied()).collect();
        critical_grid(&cuts).iter().all(|b| {
            let unbounded = b.0.iter().zip(&tops).any(|(v, t)| Some(*v) == *t);
            !unbounded || self.strand_dim(b) == 0
        })
    }
}

/// Representative degrees of the regions on which a function depending only
/// on comparisons `v <= b_k` with `v` in `cuts[k]` is constant: every cut
/// value plus one point below all cuts, per coordinate.
pub fn critical_grid(cuts: &[BTreeSet<i64>]) -> Vec<Multidegree> {
    let axes: Vec<Vec<i64>> = cuts
        .iter()
        .map(|c| {
            let mut v: Vec<i64> = c.iter().copied().collect();
            let below = v.first().map_or(0, |m| m - 1);
            v.insert(0, below);
            v
        })
        .collect();
    let mut out = vec![Vec::new()];
    for axis in &axes {
        let mut next = Vec::with_capacity(out.len() * axis.len());
        for p in &out {
            for &v in axis {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        out = next;
    }
    out.into_iter().map(Multidegree).collect()
}

/// A homogeneous map of presented modules, given on generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap<F> {
    pub source: ModulePresentation<F>,
    pub target: ModulePresentation<F>,
    pub matrix: TermMatrix<F>,
}

impl<F: Field> ModuleMap<F> {
    /// Checks that relations of the source land in the relations of the target.
    pub fn new(source: ModulePresentation<F>, target: ModulePresentation<F>, matrix: TermMatrix<F>) -> Result<Self> {
        if matrix.source() != source.generators() || matrix.target() != target.generators() {
            return Err(Error::DimensionMismatch("module map does not match generator modules".into()));
        }
        let img = matrix.compose(source.relations())?;
        for j in 0..img.source().rank() {
            let d = img.source().degree(j).clone();
            let act = target.generators().active(&d);
            let col: Vec<F> = act.iter().map(|&i| img.coeffs()[(i, j)]).collect();
            let span = Span::of_columns(&target.relations().strand(&d));
            if !span.contains(&col) {
                return Err(Error::InvalidInput(format!(
                    "module map does not send relation {j} into the target relations"
                )));
            }
        }
        Ok(ModuleMap { source, target, matrix })
    }

    /// The map on degree-`b` strands (ambient coordinates).
    pub fn strand(&self, b: &Multidegree) -> DenseMatrix<F> {
        self.matrix.strand(b)
    }
}

/// Monomial multiplication between strands of a free module: inclusion of
/// the active sets at `b` and `b + deg(m)`.
pub fn free_mul<F: Field>(m: &FreeModule, b: &Multidegree, mono: &Monomial) -> DenseMatrix<F> {
    let to = &mono.degree() + b;
    inclusion(&m.active(b), &m.active(&to))
}
