//! Degreewise models of graded complexes that need not be finitely
//! generated: every object is evaluated one multidegree at a time as a
//! complex of finite-dimensional subquotients.
//!
//! A piece `X^q_a` is a [`Subquotient`] `Z/B` of an ambient coordinate space.
//! Differentials and multiplication by monomials are given on ambients and
//! must carry `Z` into `Z` and `B` into `B`. A graded module is a complex
//! concentrated in index `0`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::complex::{ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{induced_map, DenseMatrix, Subquotient};
use crate::module::{free_mul, ModuleMap, ModulePresentation};
use crate::ring::{Monomial, Multidegree};
use crate::window::{HilbertTable, Window};

/// Shared handle to a graded complex.
pub type Graded<F> = Arc<dyn GradedComplex<F>>;

/// A complex of finely graded vector spaces evaluated lazily by degree.
pub trait GradedComplex<F: Field>: Send + Sync {
    fn nvars(&self) -> usize;

    /// Inclusive range of indices outside of which every piece vanishes.
    fn range(&self) -> (i32, i32);

    /// The piece at index `q` and degree `a`.
    fn piece(&self, q: i32, a: &Multidegree) -> Result<Arc<Subquotient<F>>>;

    /// Differential `X^q_a -> X^{q+1}_a` on ambients.
    fn diff(&self, q: i32, a: &Multidegree) -> Result<DenseMatrix<F>>;

    /// Multiplication by `mono`, `X^q_a -> X^q_{a + deg mono}`, on ambients.
    fn mul(&self, q: i32, a: &Multidegree, mono: &Monomial) -> Result<DenseMatrix<F>>;

    fn ambient(&self, q: i32, a: &Multidegree) -> Result<usize> {
        Ok(self.piece(q, a)?.ambient())
    }

    /// `H^q` at degree `a`, as a subquotient of the ambient of `X^q_a`.
    fn cohomology(&self, q: i32, a: &Multidegree) -> Result<Subquotient<F>> {
        let prev = self.piece(q - 1, a)?;
        let cur = self.piece(q, a)?;
        let next = self.piece(q + 1, a)?;
        let d_in = self.diff(q - 1, a)?;
        let d_out = self.diff(q, a)?;
        Subquotient::cohomology(&prev, &d_in, &cur, &d_out, &next)
    }
}

/// Dimensions of `H^q` over a window.
pub fn cohomology_table<F: Field>(x: &dyn GradedComplex<F>, q: i32, w: &Window) -> Result<HilbertTable> {
    HilbertTable::try_from_fn(w, |a| Ok(x.cohomology(q, a)?.dim()))
}

/// Dimensions of the pieces `X^q` over a window.
pub fn piece_table<F: Field>(x: &dyn GradedComplex<F>, q: i32, w: &Window) -> Result<HilbertTable> {
    HilbertTable::try_from_fn(w, |a| Ok(x.piece(q, a)?.dim()))
}

/// A degree- and index-preserving map of graded complexes, given on ambients.
pub trait GradedMap<F: Field>: Send + Sync {
    fn source(&self) -> Graded<F>;
    fn target(&self) -> Graded<F>;
    fn component(&self, q: i32, a: &Multidegree) -> Result<DenseMatrix<F>>;
}

/// The map induced on `H^q` at degree `a`, with the two cohomology spaces.
pub struct InducedMap<F> {
    pub source: Subquotient<F>,
    pub target: Subquotient<F>,
    pub matrix: DenseMatrix<F>,
}

impl<F: Field> InducedMap<F> {
    pub fn rank(&self) -> usize {
        crate::linalg::rank(&self.matrix)
    }

    pub fn is_iso(&self) -> bool {
        let r = self.rank();
        r == self.source.dim() && r == self.target.dim()
    }
}

pub fn induced_on_cohomology<F: Field>(map: &dyn GradedMap<F>, q: i32, a: &Multidegree) -> Result<InducedMap<F>> {
    let src = map.source().cohomology(q, a)?;
    let dst = map.target().cohomology(q, a)?;
    let f = map.component(q, a)?;
    let matrix = induced_map(&f, &src, &dst)?;
    Ok(InducedMap {
        source: src,
        target: dst,
        matrix,
    })
}

/// Memo table for per-(index, degree) values; concurrent readers, and the
/// first completed writer for a key wins.
pub(crate) struct Memo<V> {
    map: RwLock<HashMap<(i32, Multidegree), V>>,
}

impl<V: Clone> Memo<V> {
    pub(crate) fn new() -> Self {
        Memo {
            map: RwLock::new(HashMap::new()),
        }
    }

    pub(crate) fn get_or_try(&self, q: i32, a: &Multidegree, f: impl FnOnce() -> Result<V>) -> Result<V> {
        if let Some(v) = self.map.read().expect("memo lock").get(&(q, a.clone())) {
            return Ok(v.clone());
        }
        let v = f()?;
        let mut guard = self.map.write().expect("memo lock");
        Ok(guard.entry((q, a.clone())).or_insert(v).clone())
    }
}

fn in_range(r: (i32, i32), q: i32) -> bool {
    q >= r.0 && q <= r.1
}

fn zero_piece<F: Field>() -> Arc<Subquotient<F>> {
    Arc::new(Subquotient::zero(0))
}

/// Block-diagonal sum of subquotients.
pub fn direct_sum<F: Field>(parts: &[Arc<Subquotient<F>>]) -> Subquotient<F> {
    let n: usize = parts.iter().map(|p| p.ambient()).sum();
    let zc: usize = parts.iter().map(|p| p.cycles().cols()).sum();
    let bc: usize = parts.iter().map(|p| p.boundaries().cols()).sum();
    let mut z = DenseMatrix::zeros(n, zc);
    let mut b = DenseMatrix::zeros(n, bc);
    let (mut r, mut zo, mut bo) = (0, 0, 0);
    for p in parts {
        z.set_block(r, zo, p.cycles());
        b.set_block(r, bo, p.boundaries());
        r += p.ambient();
        zo += p.cycles().cols();
        bo += p.boundaries().cols();
    }
    Subquotient::new_trusted(n, &z, &b)
}

fn monomial_between(from: &Multidegree, to: &Multidegree) -> Result<Monomial> {
    (to - from)
        .to_monomial()
        .ok_or_else(|| Error::InvalidInput(format!("degree {to} is not above {from}")))
}

// ---------------------------------------------------------------------------
// Finitely generated objects

/// A presented module, concentrated in index 0. The ambient at `a` is spanned
/// by the generators of degree `<= a`.
pub struct Presented<F: Field> {
    module: ModulePresentation<F>,
    pieces: Memo<Arc<Subquotient<F>>>,
}

impl<F: Field> Presented<F> {
    pub fn new(module: ModulePresentation<F>) -> Self {
        Presented {
            module,
            pieces: Memo::new(),
        }
    }

    pub fn shared(module: ModulePresentation<F>) -> Graded<F> {
        Arc::new(Self::new(module))
    }

    pub fn module(&self) -> &ModulePresentation<F> {
        &self.module
    }
}

impl<F: Field> GradedComplex<F> for Presented<F> {
    fn nvars(&self) -> usize {
        self.module.nvars()
    }

    fn range(&self) -> (i32, i32) {
        (0, 0)
    }

    fn piece(&self, q: i32, a: &Multidegree) -> Result<Arc<Subquotient<F>>> {
        if q != 0 {
            return Ok(zero_piece());
        }
        self.pieces.get_or_try(0, a, || Ok(Arc::new(self.module.strand(a))))
    }

    fn diff(&self, q: i32, a: &Multidegree) -> Result<DenseMatrix<F>> {
        Ok(DenseMatrix::zeros(self.ambient(q + 1, a)?, self.ambient(q, a)?))
    }

    fn mul(&self, q: i32, a: &Multidegree, mono: &Monomial) -> Result<DenseMatrix<F>> {
        if q != 0 {
            return Ok(DenseMatrix::zeros(0, 0));
        }
        Ok(free_mul(self.module.generators(), a, mono))
    }
}

/// A module map viewed as a map of complexes concentrated in index 0.
pub struct PresentedMap<F: Field> {
    map: ModuleMap<F>,
    source: Graded<F>,
    target: Graded<F>,
}

impl<F: Field> PresentedMap<F> {
    pub fn new(map: ModuleMap<F>) -> Self {
        let source = Presented::shared(map.source.clone());
        let target = Presented::shared(map.target.clone());
        PresentedMap { map, source, target }
    }

    /// Uses existing graded views of the source and target.
    pub fn between(map: ModuleMap<F>, source: Graded<F>, target: Graded<F>) -> Self {
        PresentedMap { map, source, target }
    }
}

impl<F: Field> GradedMap<F> for PresentedMap<F> {
    fn source(&self) -> Graded<F> {
        self.source.clone()
    }

    fn target(&self) -> Graded<F> {
        self.target.clone()
    }

    fn component(&self, q: i32, a: &Multidegree) -> Result<DenseMatrix<F>> {
        if q != 0 {
            return Ok(DenseMatrix::zeros(0, 0));
        }
        Ok(self.map.strand(a))
    }
}

/// A complex of free modules with its strands as pieces.
pub struct FreeGraded<F: Field> {
    complex: Arc<FreeComplex<F>>,
}

impl<F: Field> FreeGraded<F> {
    pub fn new(complex: Arc<FreeComplex<F>>) -> Self {
        FreeGraded { complex }
    }
}

impl<F: Field> GradedComplex<F> for FreeGraded<F> {
    fn nvars(&self) -> usize {
        self.complex.nvars()
    }

    fn range(&self) -> (i32, i32) {
        (self.complex.lo(), self.complex.hi())
    }

    fn piece(&self, q: i32, a: &Multidegree) -> Result<Arc<Subquotient<F>>> {
        let n = self.complex.term_ref(q).map_or(0, |t| t.active(a).len());
        Ok(Arc::new(Subquotient::full(n)))
    }

    fn diff(&self, q: i32, a: &Multidegree) -> Result<DenseMatrix<F>> {
        Ok(self.complex.diff_strand(q, a))
    }

    fn mul(&self, q: i32, a: &Multidegree, mono: &Monomial) -> Result<DenseMatrix<F>> {
        match self.complex.term_ref(q) {
            Some(t) => Ok(free_mul(t, a, mono)),
            None => Ok(DenseMatrix::zeros(0, 0)),
        }
    }
}

// ---------------------------------------------------------------------------
// Duality and truncations

/// The graded dual `D(X)^q_a = (X^{-q}_{-a})^*`, with transposed
/// differentials and multiplications.
pub struct Dual<F: Field> {
    inner: Graded<F>,
    pieces: Memo<Arc<Subquotient<F>>>,
}

impl<F: Field> Dual<F> {
    pub fn new(inner: Graded<F>) -> Self {
        Dual {
            inner,
            pieces: Memo::new(),
        }
    }

    pub fn shared(inner: Graded<F>) -> Graded<F> {
        Arc::new(Self::new(inner))
    }
}

impl<F: Field> GradedComplex<F> for Dual<F> {
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    fn range(&self) -> (i32, i32) {
        let (lo, hi) = self.inner.range();
        (-hi, -lo)
    }

    fn piece(&self, q: i32, a: &Multidegree) -> Result<Arc<Subquotient<F>>> {
        self.pieces
            .get_or_try(q, a, || Ok(Arc::new(self.inner.piece(-q, &-a)?.dual())))
    }

    fn diff(&self, q: i32, a: &Multidegree) -> Result<DenseMatrix<F>> {
        Ok(self.inner.diff(-q - 1, &-a)?.transpose())
    }

    fn mul(&self, q: i32, a: &Multidegree, mono: &Monomial) -> Result<DenseMatrix<F>> {
        let from = &-a - &mono.degree();
        Ok(self.inner.mul(-q, &from, mono)?.transpose())
    }
}

/// `D(psi) : D(Y) -> D(X)` for `psi : X -> Y`.
pub struct DualMap<F: Field> {
    inner: Arc<dyn GradedMap<F>>,
    source: Graded<F>,
    target: Graded<F>,
}

impl<F: Field> DualMap<F> {
    /// `source` must be the dual of `inner.target()` and `target` the dual
    /// of `inner.source()`.
    pub fn new(inner: Arc<dyn GradedMap<F>>, source: Graded<F>, target: Graded<F>) -> Self {
        DualMap { inner, source, target }
    }
}

impl<F: Field> GradedMap<F> for DualMap<F> {
    fn source(&self) -> Graded<F> {
        self.source.clone()
    }

    fn target(&self) -> Graded<F> {
        self.target.clone()
    }

    fn component(&self, q: i32, a: &Multidegree) -> Result<DenseMatrix<F>> {
        Ok(self.inner.component(-q, &-a)?.transpose())
    }
}

/// The smart truncation `τ^{>=c}`: zero below `c`, `X^c / im d^{c-1}` at
/// `c`, and `X^q` above.
pub struct SmartTruncation<F: Field> {
    inner: Graded<F>,
    c: i32,
    pieces: Memo<Arc<Subquotient<F>>>,
}

impl<F: Field> SmartTruncation<F> {
    pub fn new(inner: Graded<F>, c: i32) -> Self {
        SmartTruncation {
            inner,
            c,
            pieces: Memo::new(),
        }
    }

    pub fn index(&self) -> i32 {
        self.c
    }
}

impl<F: Field> GradedComplex<F> for SmartTruncation<F> {
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    fn range(&self) -> (i32, i32) {
        (self.c, self.inner.range().1.max(self.c))
    }

    fn piece(&self, q: i32, a: &Multidegree) -> Result<Arc<Subquotient<F>>> {
        if q < self.c {
            return Ok(zero_piece());
        }
        if q > self.c {
            return self.inner.piece(q, a);
        }
        self.pieces.get_or_try(q, a, || {
            let cur = self.inner.piece(q, a)?;
            let prev = self.inner.piece(q - 1, a)?;
            let image = self.inner.diff(q - 1, a)?.mul(prev.cycles());
            let b = cur.boundaries().hstack(&image);
            Ok(Arc::new(Subquotient::new_trusted(cur.ambient(), cur.cycles(), &b)))
        })
    }

    fn diff(&self, q: i32, a: &Multidegree) -> Result<DenseMatrix<F>> {
        if q < self.c {
            return Ok(DenseMatrix::zeros(self.ambient(q + 1, a)?, 0));
        }
        self.inner.diff(q, a)
    }

    fn mul(&self, q: i32, a: &Multidegree, mono: &Monomial) -> Result<DenseMatrix<F>> {
        if q < self.c {
            return Ok(DenseMatrix::zeros(0, 0));
        }
        self.inner.mul(q, a, mono)
    }
}

/// The lowest cohomology `H^c(X)` placed at index `c`, realized inside the
/// ambient of `X^c`.
pub struct Bottom<F: Field> {
    inner: Graded<F>,
    c: i32,
    pieces: Memo<Arc<Subquotient<F>>>,
}

impl<F: Field> Bottom<F> {
    pub fn new(inner: Graded<F>, c: i32) -> Self {
        Bottom {
            inner,
            c,
            pieces: Memo::new(),
        }
    }
}

impl<F: Field> GradedComplex<F> for Bottom<F> {
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    fn range(&self) -> (i32, i32) {
        (self.c, self.c)
    }

    fn piece(&self, q: i32, a: &Multidegree) -> Result<Arc<Subquotient<F>>> {
        if q != self.c {
            return Ok(zero_piece());
        }
        self.pieces
            .get_or_try(q, a, || Ok(Arc::new(self.inner.cohomology(q, a)?)))
    }

    fn diff(&self, q: i32, a: &Multidegree) -> Result<DenseMatrix<F>> {
        Ok(DenseMatrix::zeros(self.ambient(q + 1, a)?, self.ambient(q, a)?))
    }

    fn mul(&self, q: i32, a: &Multidegree, mono: &Monomial) -> Result<DenseMatrix<F>> {
        if q != self.c {
            return Ok(DenseMatrix::zeros(0, 0));
        }
        self.inner.mul(q, a, mono)
    }
}

/// The inclusion `H^c[-c] -> τ^{>=c}`, the identity on the ambient at `c`.
pub struct BottomInclusion<F: Field> {
    source: Graded<F>,
    target: Graded<F>,
    c: i32,
}

impl<F: Field> BottomInclusion<F> {
    pub fn new(source: Graded<F>, target: Graded<F>, c: i32) -> Self {
        BottomInclusion { source, target, c }
    }
}

impl<F: Field> GradedMap<F> for BottomInclusion<F> {
    fn source(&self) -> Graded<F> {
        self.source.clone()
    }

    fn target(&self) -> Graded<F> {
        self.target.clone()
    }

    fn component(&self, q: i32, a: &Multidegree) -> Result<DenseMatrix<F>> {
        let n = self.target.ambient(q, a)?;
        if q == self.c {
            Ok(DenseMatrix::identity(n))
        } else {
            Ok(DenseMatrix::zeros(n, self.source.ambient(q, a)?))
        }
    }
}

/// The truncation complex `coker(H^c[-c] -> τ^{>=c})`: zero below `c`,
/// `X^c / Z^c` at `c`, and `X^q` above. Its cohomology vanishes up to `c`
/// and agrees with that of `X` above `c`.
pub struct TruncationTail<F: Field> {
    inner: Graded<F>,
    c: i32,
    pieces: Memo<Arc<Subquotient<F>>>,
}

impl<F: Field> TruncationTail<F> {
    pub fn new(inner: Graded<F>, c: i32) -> Self {
        TruncationTail {
            inner,
            c,
            pieces: Memo::new(),
        }
    }
}

impl<F: Field> GradedComplex<F> for TruncationTail<F> {
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    fn range(&self) -> (i32, i32) {
        (self.c, self.inner.range().1.max(self.c))
    }

    fn piece(&self, q: i32, a: &Multidegree) -> Result<Arc<Subquotient<F>>> {
        if q < self.c {
            return Ok(zero_piece());
        }
        if q > self.c {
            return self.inner.piece(q, a);
        }
        self.pieces.get_or_try(q, a, || {
            let cur = self.inner.piece(q, a)?;
            let h = self.inner.cohomology(q, a)?;
            Ok(Arc::new(Subquotient::new_trusted(cur.ambient(), cur.cycles(), h.cycles())))
        })
    }

    fn diff(&self, q: i32, a: &Multidegree) -> Result<DenseMatrix<F>> {
        if q < self.c {
            return Ok(DenseMatrix::zeros(self.ambient(q + 1, a)?, 0));
        }
        self.inner.diff(q, a)
    }

    fn mul(&self, q: i32, a: &Multidegree, mono: &Monomial) -> Result<DenseMatrix<F>> {
        if q < self.c {
            return Ok(DenseMatrix::zeros(0, 0));
        }
        self.inner.mul(q, a, mono)
    }
}

/// A map that is the identity on ambients from index `c` on, such as the
/// projection `τ^{>=c} -> C` onto the truncation complex.
pub struct AmbientIdentity<F: Field> {
    source: Graded<F>,
    target: Graded<F>,
    c: i32,
}

impl<F: Field> AmbientIdentity<F> {
    pub fn new(source: Graded<F>, target: Graded<F>, c: i32) -> Self {
        AmbientIdentity { source, target, c }
    }
}

impl<F: Field> GradedMap<F> for AmbientIdentity<F> {
    fn source(&self) -> Graded<F> {
        self.source.clone()
    }

    fn target(&self) -> Graded<F> {
        self.target.clone()
    }

    fn component(&self, q: i32, a: &Multidegree) -> Result<DenseMatrix<F>> {
        let n = self.target.ambient(q, a)?;
        if q >= self.c {
            Ok(DenseMatrix::identity(n))
        } else {
            Ok(DenseMatrix::zeros(n, self.source.ambient(q, a)?))
        }
    }
}

// ---------------------------------------------------------------------------
// Hom and tensor with a free complex

#[derive(Debug)]
struct Block {
    j: i32,
    k: usize,
    q: i32,
    deg: Multidegree,
    offset: usize,
    size: usize,
}

#[derive(Debug)]
struct Layout {
    blocks: Vec<Block>,
    index: HashMap<(i32, usize), usize>,
    total: usize,
}

impl Layout {
    fn block(&self, j: i32, k: usize) -> Option<&Block> {
        self.index.get(&(j, k)).map(|&b| &self.blocks[b])
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Kind {
    /// `Hom(F, X)^n = prod Hom(F^j, X^{n+j})`, block degree `a + deg g`.
    Hom,
    /// `(F ⊗ X)^n = sum F^j ⊗ X^{n-j}`, block degree `a - deg g`.
    Tensor,
}

/// Shared implementation of `Hom(F, X)` and `F ⊗ X` for a free complex `F`.
pub struct FreeBiComplex<F: Field> {
    kind: Kind,
    free: Arc<FreeComplex<F>>,
    inner: Graded<F>,
    layouts: Memo<Arc<Layout>>,
    pieces: Memo<Arc<Subquotient<F>>>,
}

/// `Hom(F, X)` with `D(φ) = d_X ∘ φ - (-1)^n φ ∘ d_F`.
pub type HomComplex<F> = FreeBiComplex<F>;
/// `F ⊗ X` with `d = d_F ⊗ 1 + (-1)^j 1 ⊗ d_X`.
pub type TensorComplex<F> = FreeBiComplex<F>;

impl<F: Field> FreeBiComplex<F> {
    pub fn hom(free: Arc<FreeComplex<F>>, inner: Graded<F>) -> Self {
        Self::build(Kind::Hom, free, inner)
    }

    pub fn tensor(free: Arc<FreeComplex<F>>, inner: Graded<F>) -> Self {
        Self::build(Kind::Tensor, free, inner)
    }

    fn build(kind: Kind, free: Arc<FreeComplex<F>>, inner: Graded<F>) -> Self {
        FreeBiComplex {
            kind,
            free,
            inner,
            layouts: Memo::new(),
            pieces: Memo::new(),
        }
    }

    pub fn free(&self) -> &Arc<FreeComplex<F>> {
        &self.free
    }

    pub fn inner(&self) -> &Graded<F> {
        &self.inner
    }

    pub fn is_hom(&self) -> bool {
        self.kind == Kind::Hom
    }

    fn inner_index(&self, n: i32, j: i32) -> i32 {
        match self.kind {
            Kind::Hom => n + j,
            Kind::Tensor => n - j,
        }
    }

    fn block_degree(&self, a: &Multidegree, g: &Multidegree) -> Multidegree {
        match self.kind {
            Kind::Hom => a + g,
            Kind::Tensor => a - g,
        }
    }

    fn layout(&self, n: i32, a: &Multidegree) -> Result<Arc<Layout>> {
        self.layouts.get_or_try(n, a, || {
            let mut blocks = Vec::new();
            let mut index = HashMap::new();
            let mut offset = 0;
            let r = self.inner.range();
            for j in self.free.lo()..=self.free.hi() {
                let q = self.inner_index(n, j);
                if !in_range(r, q) {
                    continue;
                }
                let term = self.free.term(j);
                for k in 0..term.rank() {
                    let deg = self.block_degree(a, term.degree(k));
                    let size = self.inner.ambient(q, &deg)?;
                    index.insert((j, k), blocks.len());
                    blocks.push(Block {
                        j,
                        k,
                        q,
                        deg,
                        offset,
                        size,
                    });
                    offset += size;
                }
            }
            Ok(Arc::new(Layout {
                blocks,
                index,
                total: offset,
            }))
        })
    }
}

impl<F: Field> GradedComplex<F> for FreeBiComplex<F> {
    fn nvars(&self) -> usize {
        self.inner.nvars()
    }

    fn range(&self) -> (i32, i32) {
        let (xl, xh) = self.inner.range();
        let (fl, fh) = (self.free.lo(), self.free.hi());
        match self.kind {
            Kind::Hom => (xl - fh, xh - fl),
            Kind::Tensor => (xl + fl, xh + fh),
        }
    }

    fn piece(&self, n: i32, a: &Multidegree) -> Result<Arc<Subquotient<F>>> {
        if !in_range(self.range(), n) {
            return Ok(zero_piece());
        }
        self.pieces.get_or_try(n, a, || {
            let layout = self.layout(n, a)?;
            let parts = layout
                .blocks
                .iter()
                .map(|b| self.inner.piece(b.q, &b.deg))
                .collect::<Result<Vec<_>>>()?;
            Ok(Arc::new(direct_sum(&parts)))
        })
    }

    fn ambient(&self, n: i32, a: &Multidegree) -> Result<usize> {
        if !in_range(self.range(), n) {
            return Ok(0);
        }
        Ok(self.layout(n, a)?.total)
    }

    fn diff(&self, n: i32, a: &Multidegree) -> Result<DenseMatrix<F>> {
        let rows = self.ambient(n + 1, a)?;
        let cols = self.ambient(n, a)?;
        let mut out = DenseMatrix::zeros(rows, cols);
        if rows == 0 || cols == 0 {
            return Ok(out);
        }
        let src = self.layout(n, a)?;
        let dst = self.layout(n + 1, a)?;
        let sign_n = if n.rem_euclid(2) == 1 { -F::one() } else { F::one() };
        for b in &src.blocks {
            if b.size == 0 {
                continue;
            }
            // internal differential on the same free generator
            if let Some(t) = dst.block(b.j, b.k) {
                let coeff = match self.kind {
                    Kind::Hom => F::one(),
                    Kind::Tensor => {
                        if b.j.rem_euclid(2) == 1 {
                            -F::one()
                        } else {
                            F::one()
                        }
                    }
                };
                if t.size > 0 {
                    let d = self.inner.diff(b.q, &b.deg)?;
                    out.add_block(t.offset, b.offset, &d, coeff);
                }
            }
            match self.kind {
                Kind::Hom => {
                    // φ ∘ d_F: the generator (j, k) of F^j feeds every l in F^{j-1}
                    let Some(dm) = self.free.diff_ref(b.j - 1) else { continue };
                    let g_k = self.free.term(b.j).degree(b.k).clone();
                    for l in 0..dm.source().rank() {
                        let c = dm.coeffs()[(b.k, l)];
                        if c.is_zero() {
                            continue;
                        }
                        let Some(t) = dst.block(b.j - 1, l) else { continue };
                        if t.size == 0 {
                            continue;
                        }
                        let mono = monomial_between(&g_k, dm.source().degree(l))?;
                        let m = self.inner.mul(b.q, &b.deg, &mono)?;
                        out.add_block(t.offset, b.offset, &m, -(sign_n * c));
                    }
                }
                Kind::Tensor => {
                    let Some(dm) = self.free.diff_ref(b.j) else { continue };
                    let g_k = self.free.term(b.j).degree(b.k).clone();
                    for l in 0..dm.target().rank() {
                        let c = dm.coeffs()[(l, b.k)];
                        if c.is_zero() {
                            continue;
                        }
                        let Some(t) = dst.block(b.j + 1, l) else { continue };
                        if t.size == 0 {
                            continue;
                        }
                        let mono = monomial_between(dm.target().degree(l), &g_k)?;
                        let m = self.inner.mul(b.q, &b.deg, &mono)?;
                        out.add_block(t.offset, b.offset, &m, c);
                    }
                }
            }
        }
        Ok(out)
    }

    fn mul(&self, n: i32, a: &Multidegree, mono: &Monomial) -> Result<DenseMatrix<F>> {
        let to = a + &mono.degree();
        let rows = self.ambient(n, &to)?;
        let cols = self.ambient(n, a)?;
        let mut out = DenseMatrix::zeros(rows, cols);
        if rows == 0 || cols == 0 {
            return Ok(out);
        }
        let src = self.layout(n, a)?;
        let dst = self.layout(n, &to)?;
        for (b, t) in src.blocks.iter().zip(&dst.blocks) {
            if b.size > 0 && t.size > 0 {
                out.set_block(t.offset, b.offset, &self.inner.mul(b.q, &b.deg, mono)?);
            }
        }
        Ok(out)
    }
}

fn same_free<F: Field>(a: &FreeBiComplex<F>, b: &FreeBiComplex<F>) -> Result<()> {
    if a.kind != b.kind || !(Arc::ptr_eq(&a.free, &b.free) || a.free == b.free) {
        return Err(Error::DimensionMismatch("complexes built from different free complexes".into()));
    }
    Ok(())
}

/// `Hom(F, ψ)` or `F ⊗ ψ` for a map `ψ : X -> Y`: block diagonal.
pub struct FreeOnMap<F: Field> {
    source: Arc<FreeBiComplex<F>>,
    target: Arc<FreeBiComplex<F>>,
    psi: Arc<dyn GradedMap<F>>,
}

impl<F: Field> FreeOnMap<F> {
    /// `source = Hom(F, X)` (or `F ⊗ X`) and `target = Hom(F, Y)` (or `F ⊗ Y`).
    pub fn new(source: Arc<FreeBiComplex<F>>, target: Arc<FreeBiComplex<F>>, psi: Arc<dyn GradedMap<F>>) -> Result<Self> {
        same_free(&source, &target)?;
        Ok(FreeOnMap { source, target, psi })
    }
}

impl<F: Field> GradedMap<F> for FreeOnMap<F> {
    fn source(&self) -> Graded<F> {
        self.source.clone()
    }

    fn target(&self) -> Graded<F> {
        self.target.clone()
    }

    fn component(&self, n: i32, a: &Multidegree) -> Result<DenseMatrix<F>> {
        let rows = self.target.ambient(n, a)?;
        let cols = self.source.ambient(n, a)?;
        let mut out = DenseMatrix::zeros(rows, cols);
        if rows == 0 || cols == 0 {
            return Ok(out);
        }
        let src = self.source.layout(n, a)?;
        let dst = self.target.layout(n, a)?;
        for b in &src.blocks {
            if let Some(t) = dst.block(b.j, b.k) {
                if b.size > 0 && t.size > 0 {
                    out.set_block(t.offset, b.offset, &self.psi.component(b.q, &b.deg)?);
                }
            }
        }
        Ok(out)
    }
}

/// The map induced by a chain map `α : F -> G` of free complexes:
/// `Hom(G, X) -> Hom(F, X)` or `F ⊗ X -> G ⊗ X`.
pub struct MapOnFree<F: Field> {
    source: Arc<FreeBiComplex<F>>,
    target: Arc<FreeBiComplex<F>>,
    alpha: Arc<ChainMap<F>>,
}

impl<F: Field> MapOnFree<F> {
    pub fn new(source: Arc<FreeBiComplex<F>>, target: Arc<FreeBiComplex<F>>, alpha: Arc<ChainMap<F>>) -> Result<Self> {
        if source.kind != target.kind || !Arc::ptr_eq(&source.inner, &target.inner) {
            return Err(Error::DimensionMismatch("induced map needs a common second argument".into()));
        }
        let (from, to) = match source.kind {
            Kind::Hom => (&target.free, &source.free),
            Kind::Tensor => (&source.free, &target.free),
        };
        if **from != alpha.source || **to != alpha.target {
            return Err(Error::DimensionMismatch("chain map does not match the free complexes".into()));
        }
        Ok(MapOnFree { source, target, alpha })
    }
}

impl<F: Field> GradedMap<F> for MapOnFree<F> {
    fn source(&self) -> Graded<F> {
        self.source.clone()
    }

    fn target(&self) -> Graded<F> {
        self.target.clone()
    }

    fn component(&self, n: i32, a: &Multidegree) -> Result<DenseMatrix<F>> {
        let rows = self.target.ambient(n, a)?;
        let cols = self.source.ambient(n, a)?;
        let mut out = DenseMatrix::zeros(rows, cols);
        if rows == 0 || cols == 0 {
            return Ok(out);
        }
        let src = self.source.layout(n, a)?;
        let dst = self.target.layout(n, a)?;
        let inner = &self.source.inner;
        let hom = self.source.kind == Kind::Hom;
        for b in &src.blocks {
            if b.size == 0 {
                continue;
            }
            let comp = self.alpha.component(b.j);
            if hom {
                // block (j, l) of Hom(G, X) feeds (j, k) of Hom(F, X) via α[l, k]
                for k in 0..comp.source().rank() {
                    let c = comp.coeffs()[(b.k, k)];
                    if c.is_zero() {
                        continue;
                    }
                    let Some(t) = dst.block(b.j, k) else { continue };
                    if t.size == 0 {
                        continue;
                    }
                    let mono = monomial_between(comp.target().degree(b.k), comp.source().degree(k))?;
                    out.add_block(t.offset, b.offset, &inner.mul(b.q, &b.deg, &mono)?, c);
                }
            } else {
                for l in 0..comp.target().rank() {
                    let c = comp.coeffs()[(l, b.k)];
                    if c.is_zero() {
                        continue;
                    }
                    let Some(t) = dst.block(b.j, l) else { continue };
                    if t.size == 0 {
                        continue;
                    }
                    let mono = monomial_between(comp.target().degree(l), comp.source().degree(b.k))?;
                    out.add_block(t.offset, b.offset, &inner.mul(b.q, &b.deg, &mono)?, c);
                }
            }
        }
        Ok(out)
    }
}

/// Checks `d ∘ d = 0` and that the differential respects the pieces on
/// every degree of `w`, for indices in the complex's range.
pub fn check_complex<F: Field>(x: &dyn GradedComplex<F>, w: &Window) -> Result<()> {
    let (lo, hi) = x.range();
    for a in w.points() {
        for q in lo - 1..=hi {
            x.cohomology(q, &a)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::koszul_homological;
    use crate::field::Fp;
    use crate::ideal::MonomialIdeal;
    use crate::resolution::Resolution;
    use crate::ring::RingSpec;

    type F = Fp<32003>;

    fn md(v: &[i64]) -> Multidegree {
        Multidegree(v.to_vec())
    }

    #[test]
    fn dual_of_truncated_polynomial_ring() {
        let r = RingSpec::new(&["x"], 32003).unwrap();
        let i = MonomialIdeal::parse(&r, &["x^3"]).unwrap();
        let d = Dual::new(Presented::shared(ModulePresentation::<F>::cyclic(&i)));
        let t = piece_table(&d, 0, &Window::cube(1, -4, 2)).unwrap();
        let support: Vec<i64> = t.support().into_iter().map(|(a, _)| a.0[0]).collect();
        assert_eq!(support, vec![-2, -1, 0]);
    }

    #[test]
    fn ext_from_hom_complex() {
        // Ext^1(R/(x), R) over k[x] is k in degree -1 with this grading.
        let r = RingSpec::new(&["x"], 32003).unwrap();
        let i = MonomialIdeal::parse(&r, &["x"]).unwrap();
        let res = Resolution::new(&ModulePresentation::<F>::cyclic(&i)).unwrap();
        let hom = HomComplex::hom(Arc::new(res.complex().clone()), Presented::shared(ModulePresentation::ring(1)));
        let w = Window::cube(1, -3, 3);
        assert!(cohomology_table(&hom, 0, &w).unwrap().is_zero());
        let t = cohomology_table(&hom, 1, &w).unwrap();
        assert_eq!(t.support(), vec![(md(&[-1]), 1)]);
    }

    #[test]
    fn tor_from_tensor_complex() {
        let r = RingSpec::new(&["x", "y"], 32003).unwrap();
        let xy = MonomialIdeal::parse(&r, &["x", "y"]).unwrap();
        let x = MonomialIdeal::parse(&r, &["x"]).unwrap();
        let k = Arc::new(koszul_homological::<F>(2, xy.gens(), 1).unwrap());
        let t = TensorComplex::tensor(k, Presented::shared(ModulePresentation::cyclic(&x)));
        let w = Window::cube(2, -1, 2);
        // Tor_1(k, R/(x)) = k(-1,0), Tor_2 = 0
        assert_eq!(cohomology_table(&t, -1, &w).unwrap().support(), vec![(md(&[1, 0]), 1)]);
        assert!(cohomology_table(&t, -2, &w).unwrap().is_zero());
        assert_eq!(cohomology_table(&t, 0, &w).unwrap().support(), vec![(md(&[0, 0]), 1)]);
    }

    #[test]
    fn truncation_and_bottom() {
        // X = Koszul(x) over k[x] as a free graded complex at -1..0:
        // H^{-1} = 0, H^0 = R/(x).
        let r = RingSpec::new(&["x"], 32003).unwrap();
        let x = MonomialIdeal::parse(&r, &["x"]).unwrap();
        let k: Graded<F> = Arc::new(FreeGraded::new(Arc::new(koszul_homological(1, x.gens(), 1).unwrap())));
        let tau: Graded<F> = Arc::new(SmartTruncation::new(k.clone(), 0));
        let bottom: Graded<F> = Arc::new(Bottom::new(k.clone(), 0));
        let w = Window::cube(1, -2, 2);
        assert_eq!(cohomology_table(&*tau, 0, &w).unwrap().support(), vec![(md(&[0]), 1)]);
        assert_eq!(piece_table(&*bottom, 0, &w).unwrap().support(), vec![(md(&[0]), 1)]);
        let inc = BottomInclusion::new(bottom, tau, 0);
        for a in w.points() {
            assert!(induced_on_cohomology(&inc, 0, &a).unwrap().is_iso());
        }
    }
}
