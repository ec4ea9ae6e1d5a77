//! Dense exact linear algebra and subquotients of finite-dimensional spaces.
//!
//! All bases returned here are canonical: column spaces are reported through
//! the reduced row-echelon form of their transpose and kernels through the
//! free variables of the reduced row-echelon form, so equal inputs always give
//! bit-identical outputs.

use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DenseMatrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for DenseMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:?}", self[(i, j)])?;
            }
        }
        write!(f, "]({}x{})", self.rows, self.cols)
    }
}

impl<F> std::ops::Index<(usize, usize)> for DenseMatrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for DenseMatrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Field> DenseMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<F>) -> Self {
        assert_eq!(rows * cols, data.len(), "entries length must be rows*cols");
        DenseMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<F>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        DenseMatrix { rows: r, cols: c, data }
    }

    /// Convenience constructor from signed integers.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let v: Vec<Vec<F>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| F::from_i64(x)).collect())
            .collect();
        if v.is_empty() {
            return Self::zeros(0, 0);
        }
        Self::from_rows(&v)
    }

    /// Matrix whose columns are the given vectors, all of length `ambient`.
    pub fn from_columns(ambient: usize, cols: &[Vec<F>]) -> Self {
        let mut m = Self::zeros(ambient, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), ambient);
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    if !b.is_zero() {
                        *o += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (&a, &b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, c: F) -> Self {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * c).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape());
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn hstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.rows, rhs.rows, "hstack row mismatch");
        let mut out = Self::zeros(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..rhs.cols {
                out[(i, self.cols + j)] = rhs[(i, j)];
            }
        }
        out
    }

    pub fn vstack(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        DenseMatrix {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, idx.len());
        for i in 0..self.rows {
            for (jj, &j) in idx.iter().enumerate() {
                out[(i, jj)] = self[(i, j)];
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        DenseMatrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (ii, &i) in rows.iter().enumerate() {
            for (jj, &j) in cols.iter().enumerate() {
                out[(ii, jj)] = self[(i, j)];
            }
        }
        out
    }

    /// Places `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    /// Adds `c * block` with its top-left corner at `(r0, c0)`.
    pub fn add_block(&mut self, r0: usize, c0: usize, block: &Self, c: F) {
        if c.is_zero() {
            return;
        }
        for i in 0..block.rows {
            for j in 0..block.cols {
                let b = block[(i, j)];
                if !b.is_zero() {
                    self[(r0 + i, c0 + j)] += c * b;
                }
            }
        }
    }
}

/// Reduced row-echelon form together with the pivot columns.
pub fn rref<F: Field>(m: &DenseMatrix<F>) -> (DenseMatrix<F>, Vec<usize>) {
    let mut a = m.clone();
    let pivots = rref_in_place(&mut a);
    (a, pivots)
}

fn rref_in_place<F: Field>(a: &mut DenseMatrix<F>) -> Vec<usize> {
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = a[(r, c)].inv().expect("nonzero pivot");
        for j in c..cols {
            a[(r, j)] *= inv;
        }
        let pivot_row: Vec<F> = a.row(r)[c..].to_vec();
        for i in 0..rows {
            if i == r {
                continue;
            }
            let f = a[(i, c)];
            if f.is_zero() {
                continue;
            }
            let row = &mut a.data[i * cols + c..(i + 1) * cols];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(m: &DenseMatrix<F>) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    rref(m).1.len()
}

/// Columns form the canonical basis of `ker(m)`; there are `cols - rank` of them.
pub fn kernel_basis<F: Field>(m: &DenseMatrix<F>) -> DenseMatrix<F> {
    let n = m.cols();
    if m.rows() == 0 {
        return DenseMatrix::identity(n);
    }
    let (r, pivots) = rref(m);
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
    let mut k = DenseMatrix::zeros(n, free.len());
    for (col, &f) in free.iter().enumerate() {
        k[(f, col)] = F::one();
        for (row, &p) in pivots.iter().enumerate() {
            k[(p, col)] = -r[(row, f)];
        }
    }
    k
}

/// Canonical basis of the column space (the transposed nonzero rows of the
/// reduced row-echelon form of `m^T`).
pub fn column_space_basis<F: Field>(m: &DenseMatrix<F>) -> DenseMatrix<F> {
    if m.cols() == 0 || m.rows() == 0 {
        return DenseMatrix::zeros(m.rows(), 0);
    }
    let (r, pivots) = rref(&m.transpose());
    let k = pivots.len();
    let mut out = DenseMatrix::zeros(m.rows(), k);
    for i in 0..k {
        for j in 0..m.rows() {
            out[(j, i)] = r[(i, j)];
        }
    }
    out
}

/// Some solution of `a x = b` (free variables set to zero), if one exists.
pub fn solve<F: Field>(a: &DenseMatrix<F>, b: &[F]) -> Option<Vec<F>> {
    assert_eq!(a.rows(), b.len());
    let aug = a.hstack(&DenseMatrix::from_columns(b.len(), &[b.to_vec()]));
    let n = a.cols();
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![F::zero(); n];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r[(row, n)];
    }
    Some(x)
}

/// Solves `a X = b` column by column with a single elimination.
pub fn solve_many<F: Field>(a: &DenseMatrix<F>, b: &DenseMatrix<F>) -> Option<DenseMatrix<F>> {
    assert_eq!(a.rows(), b.rows());
    let n = a.cols();
    let aug = a.hstack(b);
    let (r, pivots) = rref(&aug);
    if pivots.iter().any(|&p| p >= n) {
        return None;
    }
    let mut x = DenseMatrix::zeros(n, b.cols());
    for (row, &p) in pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x[(p, j)] = r[(row, n + j)];
        }
    }
    Some(x)
}

/// Incrementally maintained reduced basis of a subspace, used for membership
/// tests and greedy complement selection.
#[derive(Clone, Debug)]
pub struct Span<F> {
    ambient: usize,
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> Span<F> {
    pub fn new(ambient: usize) -> Self {
        Span {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn of_columns(m: &DenseMatrix<F>) -> Self {
        let mut s = Span::new(m.rows());
        for j in 0..m.cols() {
            s.insert(&m.column(j));
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut w = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let f = w[p];
            if f.is_zero() {
                continue;
            }
            for (x, &y) in w.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= f * y;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns `false` when it was already in the span.
    pub fn insert(&mut self, v: &[F]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().unwrap();
        for x in w.iter_mut() {
            *x *= inv;
        }
        for row in self.rows.iter_mut() {
            let f = row[p];
            if f.is_zero() {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(&w) {
                if !y.is_zero() {
                    *x -= f * y;
                }
            }
        }
        self.rows.push(w);
        self.pivots.push(p);
        true
    }
}

/// A subquotient `Z / B` of `F^ambient`, with `B ⊆ Z`.
///
/// `cycles` and `boundaries` hold canonical bases (as columns). Coordinates
/// with respect to the chosen representatives are built lazily.
#[derive(Debug)]
pub struct Subquotient<F> {
    ambient: usize,
    cycles: DenseMatrix<F>,
    boundaries: DenseMatrix<F>,
    dim: usize,
    coords: OnceLock<Coordinates<F>>,
}

impl<F: Field> Clone for Subquotient<F> {
    fn clone(&self) -> Self {
        Subquotient {
            ambient: self.ambient,
            cycles: self.cycles.clone(),
            boundaries: self.boundaries.clone(),
            dim: self.dim,
            coords: OnceLock::new(),
        }
    }
}

impl<F: Field> PartialEq for Subquotient<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient
            && self.cycles == other.cycles
            && self.boundaries == other.boundaries
    }
}

#[derive(Debug)]
struct Coordinates<F> {
    reps: DenseMatrix<F>,
    /// Rows `0..dim` of a left inverse of `[reps | boundaries]`.
    proj: DenseMatrix<F>,
    cycle_span: Span<F>,
    boundary_span: Span<F>,
}

impl<F: Field> Subquotient<F> {
    /// Builds `span(cycles) / span(boundaries)`; fails if the boundaries are
    /// not contained in the cycles.
    pub fn new(ambient: usize, cycles: &DenseMatrix<F>, boundaries: &DenseMatrix<F>) -> Result<Self> {
        if cycles.rows() != ambient || boundaries.rows() != ambient {
            return Err(Error::DimensionMismatch(format!(
                "subquotient ambient {ambient} vs spanning sets with {} / {} rows",
                cycles.rows(),
                boundaries.rows()
            )));
        }
        let z = column_space_basis(cycles);
        let b = column_space_basis(boundaries);
        let zs = Span::of_columns(&z);
        for j in 0..b.cols() {
            if !zs.contains(&b.column(j)) {
                return Err(Error::NotChainCompatible {
                    context: "boundary span not contained in cycle span".into(),
                });
            }
        }
        Ok(Self::from_canonical(ambient, z, b))
    }

    /// Like [`Subquotient::new`] but trusts the containment.
    pub(crate) fn new_trusted(ambient: usize, cycles: &DenseMatrix<F>, boundaries: &DenseMatrix<F>) -> Self {
        let z = column_space_basis(cycles);
        let b = column_space_basis(boundaries);
        Self::from_canonical(ambient, z, b)
    }

    fn from_canonical(ambient: usize, z: DenseMatrix<F>, b: DenseMatrix<F>) -> Self {
        let dim = z.cols() - b.cols();
        Subquotient {
            ambient,
            cycles: z,
            boundaries: b,
            dim,
            coords: OnceLock::new(),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Self::from_canonical(ambient, DenseMatrix::zeros(ambient, 0), DenseMatrix::zeros(ambient, 0))
    }

    /// The whole ambient space.
    pub fn full(ambient: usize) -> Self {
        Self::from_canonical(ambient, DenseMatrix::identity(ambient), DenseMatrix::zeros(ambient, 0))
    }

    /// `F^ambient / span(relations)`.
    pub fn quotient(ambient: usize, relations: &DenseMatrix<F>) -> Self {
        let b = column_space_basis(relations);
        Self::from_canonical(ambient, DenseMatrix::identity(ambient), b)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cycles(&self) -> &DenseMatrix<F> {
        &self.cycles
    }

    pub fn boundaries(&self) -> &DenseMatrix<F> {
        &self.boundaries
    }

    fn coordinates(&self) -> &Coordinates<F> {
        self.coords.get_or_init(|| {
            let boundary_span = Span::of_columns(&self.boundaries);
            let mut all = boundary_span.clone();
            let mut reps = Vec::with_capacity(self.dim);
            for j in 0..self.cycles.cols() {
                let c = self.cycles.column(j);
                if all.insert(&c) {
                    reps.push(c);
                }
            }
            debug_assert_eq!(reps.len(), self.dim);
            let reps = DenseMatrix::from_columns(self.ambient, &reps);
            let basis = reps.hstack(&self.boundaries);
            let k = basis.cols();
            let proj = if k == 0 {
                DenseMatrix::zeros(0, self.ambient)
            } else {
                let (_, piv) = rref(&basis.transpose());
                let square = basis.select_rows(&piv);
                let inv = solve_many(&square, &DenseMatrix::identity(k)).expect("invertible pivot block");
                let mut left = DenseMatrix::zeros(self.dim, self.ambient);
                for i in 0..self.dim {
                    for (jj, &j) in piv.iter().enumerate() {
                        left[(i, j)] = inv[(i, jj)];
                    }
                }
                left
            };
            Coordinates {
                reps,
                proj,
                cycle_span: Span::of_columns(&self.cycles),
                boundary_span,
            }
        })
    }

    /// Representatives (columns) of a basis of the subquotient.
    pub fn representatives(&self) -> &DenseMatrix<F> {
        &self.coordinates().reps
    }

    pub fn contains_cycle(&self, v: &[F]) -> bool {
        self.coordinates().cycle_span.contains(v)
    }

    pub fn contains_boundary(&self, v: &[F]) -> bool {
        self.coordinates().boundary_span.contains(v)
    }

    /// Coordinates of the class of a cycle `v` in the representative basis.
    pub fn class_of(&self, v: &[F]) -> Option<Vec<F>> {
        let c = self.coordinates();
        if !c.cycle_span.contains(v) {
            return None;
        }
        Some(c.proj.mul_vec(v))
    }

    /// Graded vector-space dual: `(Z/B)^* = B^perp / Z^perp` in the dual ambient.
    pub fn dual(&self) -> Self {
        let bperp = kernel_basis(&self.boundaries.transpose());
        let zperp = kernel_basis(&self.cycles.transpose());
        Self::new_trusted(self.ambient, &bperp, &zperp)
    }

    /// Cohomology at the middle of `prev -> cur -> next`, a complex of
    /// subquotients with ambient differentials `d_in` and `d_out`.
    pub fn cohomology(
        prev: &Subquotient<F>,
        d_in: &DenseMatrix<F>,
        cur: &Subquotient<F>,
        d_out: &DenseMatrix<F>,
        next: &Subquotient<F>,
    ) -> Result<Self> {
        if d_in.shape() != (cur.ambient, prev.ambient) || d_out.shape() != (next.ambient, cur.ambient) {
            return Err(Error::DimensionMismatch(format!(
                "differentials {:?} / {:?} vs ambients {} -> {} -> {}",
                d_in.shape(),
                d_out.shape(),
                prev.ambient,
                cur.ambient,
                next.ambient
            )));
        }
        let image = d_in.mul(&prev.cycles);
        if !image.is_zero() {
            let composite = d_out.mul(&image);
            if !composite.is_zero() {
                let ns = Span::of_columns(&next.boundaries);
                if (0..composite.cols()).any(|j| !ns.contains(&composite.column(j))) {
                    return Err(Error::CompositionNonzero {
                        context: "subquotient complex".into(),
                    });
                }
            }
        }
        let zc = cur.cycles.cols();
        let z = if zc == 0 {
            DenseMatrix::zeros(cur.ambient, 0)
        } else if next.ambient == 0 {
            cur.cycles.clone()
        } else {
            let dz = d_out.mul(&cur.cycles);
            let stacked = dz.hstack(&next.boundaries);
            let k = kernel_basis(&stacked);
            let top: Vec<usize> = (0..zc).collect();
            cur.cycles.mul(&k.select_rows(&top))
        };
        let w = cur.boundaries.hstack(&image);
        Ok(Self::new_trusted(cur.ambient, &z, &w))
    }
}

/// `H = ker(d_out) / im(d_in)` for plain vector spaces.
pub fn homology<F: Field>(d_in: &DenseMatrix<F>, d_out: &DenseMatrix<F>) -> Result<Subquotient<F>> {
    if d_in.rows() != d_out.cols() {
        return Err(Error::DimensionMismatch(format!(
            "d_in is {:?}, d_out is {:?}",
            d_in.shape(),
            d_out.shape()
        )));
    }
    if !d_out.mul(d_in).is_zero() {
        return Err(Error::CompositionNonzero {
            context: "homology".into(),
        });
    }
    let n = d_in.rows();
    let z = if d_out.rows() == 0 {
        DenseMatrix::identity(n)
    } else {
        kernel_basis(d_out)
    };
    Ok(Subquotient::new_trusted(n, &z, d_in))
}

/// Matrix (target dim x source dim) of the map induced by the ambient map `f`.
pub fn induced_map<F: Field>(
    f: &DenseMatrix<F>,
    src: &Subquotient<F>,
    dst: &Subquotient<F>,
) -> Result<DenseMatrix<F>> {
    if f.shape() != (dst.ambient, src.ambient) {
        return Err(Error::DimensionMismatch(format!(
            "map {:?} between ambients {} -> {}",
            f.shape(),
            src.ambient,
            dst.ambient
        )));
    }
    let mut out = DenseMatrix::zeros(dst.dim, src.dim);
    if src.dim == 0 || dst.ambient == 0 {
        return Ok(out);
    }
    for j in 0..src.boundaries.cols() {
        let v = f.mul_vec(&src.boundaries.column(j));
        if !dst.contains_boundary(&v) {
            return Err(Error::NotChainCompatible {
                context: "boundary image leaves target boundaries".into(),
            });
        }
    }
    let reps = src.representatives();
    let images = f.mul(reps);
    for j in 0..src.dim {
        let v = images.column(j);
        let c = dst.class_of(&v).ok_or_else(|| Error::NotChainCompatible {
            context: "cycle image leaves target cycles".into(),
        })?;
        for (i, x) in c.into_iter().enumerate() {
            out[(i, j)] = x;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use num_traits::Zero;

    type F = Fp<32003>;
    type M = DenseMatrix<F>;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&M::identity(2)), 2);
        assert_eq!(rank(&M::from_i64_rows(&[&[1, 1], &[1, 1]])), 1);
        assert_eq!(rank(&M::zeros(0, 5)), 0);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&M::identity(3)).cols(), 0);
        let k = kernel_basis(&M::from_i64_rows(&[&[1, 1]]));
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![F::from_i64(-1), F::from_i64(1)]);
        assert_eq!(kernel_basis(&M::zeros(3, 3)).cols(), 3);
    }

    #[test]
    fn homology_examples() {
        let z2 = M::zeros(2, 2);
        assert_eq!(homology(&z2, &M::identity(2)).unwrap().dim(), 0);
        assert_eq!(homology(&M::identity(2), &z2).unwrap().dim(), 0);
        assert_eq!(homology(&M::zeros(2, 0), &M::zeros(0, 2)).unwrap().dim(), 2);
        let bad = homology(&M::identity(2), &M::identity(2));
        assert!(matches!(bad, Err(Error::CompositionNonzero { .. })));
    }

    #[test]
    fn induced_examples() {
        let h = homology(&M::zeros(2, 0), &M::zeros(0, 2)).unwrap();
        let id = induced_map(&M::identity(2), &h, &h).unwrap();
        assert_eq!(id, M::identity(2));
        let zero = induced_map(&M::zeros(2, 2), &h, &h).unwrap();
        assert!(zero.is_zero());
        // cycles of src map into boundaries of dst
        let dst = homology(&M::identity(2), &M::zeros(0, 2)).unwrap();
        assert_eq!(dst.dim(), 0);
        let m = induced_map(&M::identity(2), &h, &dst).unwrap();
        assert_eq!(m.shape(), (0, 2));
    }

    #[test]
    fn not_chain_compatible() {
        // src: everything; dst: only the first coordinate is a cycle.
        let src = Subquotient::<F>::full(2);
        let dst = Subquotient::new(2, &M::from_i64_rows(&[&[1], &[0]]), &M::zeros(2, 0)).unwrap();
        assert!(matches!(
            induced_map(&M::identity(2), &src, &dst),
            Err(Error::NotChainCompatible { .. })
        ));
    }

    #[test]
    fn solve_and_span() {
        let a = M::from_i64_rows(&[&[1, 2], &[3, 4]]);
        let x = solve(&a, &[F::from_i64(5), F::from_i64(11)]).unwrap();
        assert_eq!(x, vec![F::from_i64(1), F::from_i64(2)]);
        let sing = M::from_i64_rows(&[&[1, 1], &[1, 1]]);
        assert!(solve(&sing, &[F::from_i64(1), F::from_i64(2)]).is_none());
        let mut s = Span::<F>::new(3);
        assert!(s.insert(&[F::from_i64(1), F::from_i64(1), F::zero()]));
        assert!(!s.insert(&[F::from_i64(2), F::from_i64(2), F::zero()]));
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn dual_swaps_roles() {
        let q = Subquotient::<F>::quotient(3, &M::from_i64_rows(&[&[1], &[0], &[0]]));
        assert_eq!(q.dim(), 2);
        let d = q.dual();
        assert_eq!(d.dim(), 2);
        assert_eq!(d.dual(), q);
    }
}
