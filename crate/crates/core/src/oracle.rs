//! A brute-force reference for Ext, Tor and local cohomology, written
//! directly against dense linear algebra.
//!
//! Nothing here goes through the resolution, complex or Čech machinery of
//! the main engine. Modules are raw data: generator degrees plus relation
//! columns. Free resolutions are found by scanning every degree of a finite
//! box in order and splitting off new kernel generators, and localizations
//! use one fixed, large shift instead of a computed threshold.

use crate::field::Field;
use crate::linalg::{kernel_basis, rank, DenseMatrix};
use crate::module::ModulePresentation;
use crate::window::{HilbertTable, Window};

type Deg = Vec<i64>;

fn le(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn add(a: &[i64], b: &[i64]) -> Deg {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[i64], b: &[i64]) -> Deg {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// A finely graded module as generators and relation columns; the
/// monomial of each entry is forced by the degrees.
#[derive(Clone, Debug)]
pub struct RawModule<F> {
    pub nvars: usize,
    pub gens: Vec<Deg>,
    pub rels: Vec<(Deg, Vec<F>)>,
}

impl<F: Field> RawModule<F> {
    pub fn from_presentation(m: &ModulePresentation<F>) -> Self {
        let rel = m.relations();
        let gens: Vec<Deg> = m.generators().degrees().iter().map(|d| d.0.clone()).collect();
        let rels = (0..rel.source().rank())
            .map(|j| {
                let col = (0..gens.len()).map(|i| rel.coeffs()[(i, j)]).collect();
                (rel.source().degree(j).0.clone(), col)
            })
            .collect();
        RawModule {
            nvars: m.nvars(),
            gens,
            rels,
        }
    }

    fn relation_span(&self, a: &[i64]) -> DenseMatrix<F> {
        let cols: Vec<Vec<F>> = self
            .rels
            .iter()
            .filter(|(d, _)| le(d, a))
            .map(|(_, c)| c.clone())
            .collect();
        DenseMatrix::from_columns(self.gens.len(), &cols)
    }

    fn active(&self, a: &[i64]) -> Vec<F> {
        self.gens
            .iter()
            .map(|g| if le(g, a) { F::one() } else { F::zero() })
            .collect()
    }

    /// `M_a` as `span(active generators) / span(active relations)`, both
    /// inside `F^{#gens}`.
    fn strand(&self, a: &[i64]) -> Quot<F> {
        let act = self.active(a);
        let n = self.gens.len();
        let mut cols = Vec::new();
        for (i, v) in act.iter().enumerate() {
            if !v.is_zero() {
                let mut e = vec![F::zero(); n];
                e[i] = F::one();
                cols.push(e);
            }
        }
        Quot {
            space: DenseMatrix::from_columns(n, &cols),
            rels: self.relation_span(a),
        }
    }

    pub fn strand_dim(&self, a: &[i64]) -> usize {
        let q = self.strand(a);
        rank(&q.space.hstack(&q.rels)) - rank(&q.rels)
    }
}

/// A vector space `span(space) / span(rels)` inside a coordinate space.
struct Quot<F> {
    space: DenseMatrix<F>,
    rels: DenseMatrix<F>,
}

/// Dimension of the cohomology of `A -> B -> C` where each term is a
/// direct sum of quotient spaces and `d_in`, `d_out` act on coordinates.
fn middle_cohomology<F: Field>(
    a: &Quot<F>,
    d_in: &DenseMatrix<F>,
    b: &Quot<F>,
    d_out: &DenseMatrix<F>,
    c: &Quot<F>,
) -> usize {
    // cycles: v in span(b.space) with d_out v in span(c.rels)
    let bs = &b.space;
    let z = if bs.cols() == 0 {
        DenseMatrix::zeros(bs.rows(), 0)
    } else if c.space.rows() == 0 {
        bs.clone()
    } else {
        let stacked = d_out.mul(bs).hstack(&c.rels);
        let k = kernel_basis(&stacked);
        let top: Vec<usize> = (0..bs.cols()).collect();
        bs.mul(&k.select_rows(&top))
    };
    let bounds = b.rels.hstack(&d_in.mul(&a.space));
    rank(&z.hstack(&b.rels)) - rank(&bounds)
}

/// A free complex `F_L -> ... -> F_0` as generator degrees and coefficient
/// matrices `d[i] : F_{i+1} -> F_i`.
#[derive(Clone, Debug)]
pub struct RawResolution<F> {
    pub gens: Vec<Vec<Deg>>,
    pub d: Vec<DenseMatrix<F>>,
}

impl<F: Field> RawResolution<F> {
    pub fn betti(&self) -> Vec<usize> {
        self.gens.iter().map(Vec::len).collect()
    }
}

/// Every degree of the box `[lo, hi]`, by total degree then lexicographically.
fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Deg> {
    let mut pts = vec![Vec::new()];
    for (l, h) in lo.iter().zip(hi) {
        let mut next = Vec::new();
        for p in &pts {
            for v in *l..=*h {
                let mut q: Deg = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        pts = next;
    }
    pts.sort_by_key(|p| (p.iter().sum::<i64>(), p.clone()));
    pts
}

/// Minimal generators of a graded subspace family `K(b)`, scanning the box
/// in increasing order and keeping vectors outside what earlier
/// generators already span. Vectors live in full coordinates, so moving
/// up in degree is the identity on coordinates.
fn scan_generators<F: Field>(
    points: &[Deg],
    dim: usize,
    mut kernel_at: impl FnMut(&Deg) -> DenseMatrix<F>,
) -> Vec<(Deg, Vec<F>)> {
    let mut found: Vec<(Deg, Vec<F>)> = Vec::new();
    for b in points {
        let k = kernel_at(b);
        if k.cols() == 0 {
            continue;
        }
        let below: Vec<Vec<F>> = found.iter().filter(|(d, _)| le(d, b)).map(|(_, v)| v.clone()).collect();
        let mut span = DenseMatrix::from_columns(dim, &below);
        let mut r = rank(&span);
        for j in 0..k.cols() {
            let v = k.column(j);
            let trial = span.hstack(&DenseMatrix::from_columns(dim, std::slice::from_ref(&v)));
            let r2 = rank(&trial);
            if r2 > r {
                span = trial;
                r = r2;
                found.push((b.clone(), v));
            }
        }
    }
    found
}

/// Minimal free resolution of `N` by exhaustive degree scanning over the
/// box spanned by all generator and relation degrees.
pub fn resolve<F: Field>(n: &RawModule<F>) -> RawResolution<F> {
    let nv = n.nvars;
    let mut all: Vec<&Deg> = n.gens.iter().collect();
    all.extend(n.rels.iter().map(|(d, _)| d));
    if all.is_empty() {
        return RawResolution {
            gens: vec![Vec::new()],
            d: Vec::new(),
        };
    }
    let lo: Deg = (0..nv).map(|i| all.iter().map(|d| d[i]).min().unwrap()).collect();
    let hi: Deg = (0..nv).map(|i| all.iter().map(|d| d[i]).max().unwrap()).collect();
    let points = box_points(&lo, &hi);

    let mut gens = vec![n.gens.clone()];
    let mut d = Vec::new();
    // first syzygies: minimal generators of the relation module
    let first = scan_generators(&points, n.gens.len(), |b| n.relation_span(b));
    let mut level: Vec<(Deg, Vec<F>)> = first;
    for _ in 0..=nv + 1 {
        if level.is_empty() {
            break;
        }
        let prev_dim = gens.last().unwrap().len();
        let cols: Vec<Vec<F>> = level.iter().map(|(_, v)| v.clone()).collect();
        let mat = DenseMatrix::from_columns(prev_dim, &cols);
        let degs: Vec<Deg> = level.iter().map(|(b, _)| b.clone()).collect();
        let dim = degs.len();
        let next = scan_generators(&points, dim, |b| {
            let act: Vec<usize> = (0..dim).filter(|&j| le(&degs[j], b)).collect();
            if act.is_empty() {
                return DenseMatrix::zeros(dim, 0);
            }
            let k = kernel_basis(&mat.select_columns(&act));
            let mut full = DenseMatrix::zeros(dim, k.cols());
            for (r, &j) in act.iter().enumerate() {
                for c in 0..k.cols() {
                    full[(j, c)] = k[(r, c)];
                }
            }
            full
        });
        gens.push(degs);
        d.push(mat);
        level = next;
    }
    RawResolution { gens, d }
}

/// `Hom(F_i, M)_a = sum over generators g of F_i of M_{a+g}`.
fn hom_term<F: Field>(res: &RawResolution<F>, m: &RawModule<F>, i: usize, a: &[i64]) -> (Quot<F>, Vec<usize>) {
    let k = m.gens.len();
    let blocks: Vec<Quot<F>> = res
        .gens
        .get(i)
        .map(|gs| gs.iter().map(|g| m.strand(&add(a, g))).collect())
        .unwrap_or_default();
    stack(blocks, k)
}

/// `(F_i ⊗ M)_a = sum over generators g of F_i of M_{a-g}`.
fn tensor_term<F: Field>(res: &RawResolution<F>, m: &RawModule<F>, i: usize, a: &[i64]) -> (Quot<F>, Vec<usize>) {
    let k = m.gens.len();
    let blocks: Vec<Quot<F>> = res
        .gens
        .get(i)
        .map(|gs| gs.iter().map(|g| m.strand(&sub(a, g))).collect())
        .unwrap_or_default();
    stack(blocks, k)
}

/// Block-diagonal sum of quotient spaces, each in `F^k`; returns offsets.
fn stack<F: Field>(blocks: Vec<Quot<F>>, k: usize) -> (Quot<F>, Vec<usize>) {
    let total = blocks.len() * k;
    let offs: Vec<usize> = (0..blocks.len()).map(|b| b * k).collect();
    let mut space = Vec::new();
    let mut rels = Vec::new();
    for (b, q) in blocks.iter().enumerate() {
        for (m, out) in [(&q.space, &mut space), (&q.rels, &mut rels)] {
            for j in 0..m.cols() {
                let mut v = vec![F::zero(); total];
                for r in 0..k {
                    v[offs[b] + r] = m[(r, j)];
                }
                out.push(v);
            }
        }
    }
    (
        Quot {
            space: DenseMatrix::from_columns(total, &space),
            rels: DenseMatrix::from_columns(total, &rels),
        },
        offs,
    )
}

/// The coordinate map `Hom(F_i, M)_a -> Hom(F_{i+1}, M)_a`, `φ ↦ φ ∘ d`.
/// Multiplication by a monomial is the identity on generator coordinates.
fn hom_diff<F: Field>(res: &RawResolution<F>, k: usize, i: usize) -> DenseMatrix<F> {
    let src = res.gens.get(i).map_or(0, Vec::len);
    let dst = res.gens.get(i + 1).map_or(0, Vec::len);
    let mut out = DenseMatrix::zeros(dst * k, src * k);
    if let Some(d) = res.d.get(i) {
        for h in 0..dst {
            for g in 0..src {
                let c = d[(g, h)];
                if !c.is_zero() {
                    for r in 0..k {
                        out[(h * k + r, g * k + r)] = c;
                    }
                }
            }
        }
    }
    out
}

/// The coordinate map `(F_{i+1} ⊗ M)_a -> (F_i ⊗ M)_a`.
fn tensor_diff<F: Field>(res: &RawResolution<F>, k: usize, i: usize) -> DenseMatrix<F> {
    hom_diff(res, k, i).transpose()
}

/// `dim Ext^i(N, M)_a` over a window.
pub fn ext<F: Field>(n: &RawModule<F>, m: &RawModule<F>, i: usize, w: &Window) -> HilbertTable {
    let res = resolve(n);
    let k = m.gens.len();
    HilbertTable::from_fn(w, |a| {
        let a = &a.0;
        let (prev, _) = if i == 0 {
            (empty(0), vec![])
        } else {
            hom_term(&res, m, i - 1, a)
        };
        let (cur, _) = hom_term(&res, m, i, a);
        let (next, _) = hom_term(&res, m, i + 1, a);
        let d_in = if i == 0 {
            DenseMatrix::zeros(cur.space.rows(), 0)
        } else {
            hom_diff(&res, k, i - 1)
        };
        let d_out = hom_diff(&res, k, i);
        middle_cohomology(&prev, &d_in, &cur, &d_out, &next)
    })
}

/// `dim Tor_i(N, M)_a` over a window.
pub fn tor<F: Field>(n: &RawModule<F>, m: &RawModule<F>, i: usize, w: &Window) -> HilbertTable {
    let res = resolve(n);
    let k = m.gens.len();
    HilbertTable::from_fn(w, |a| {
        let a = &a.0;
        let (prev, _) = tensor_term(&res, m, i + 1, a);
        let (cur, _) = tensor_term(&res, m, i, a);
        let (next, _) = if i == 0 {
            (empty(0), vec![])
        } else {
            tensor_term(&res, m, i - 1, a)
        };
        let d_in = tensor_diff(&res, k, i);
        let d_out = if i == 0 {
            DenseMatrix::zeros(0, cur.space.rows())
        } else {
            tensor_diff(&res, k, i - 1)
        };
        middle_cohomology(&prev, &d_in, &cur, &d_out, &next)
    })
}

fn empty<F: Field>(rows: usize) -> Quot<F> {
    Quot {
        space: DenseMatrix::zeros(rows, 0),
        rels: DenseMatrix::zeros(rows, 0),
    }
}

/// Shift used for every localization.
pub const CECH_SHIFT: i64 = 24;

/// `dim H^i_I(M)_a` from the Čech complex on the monomial generators
/// `xs` (exponent vectors), with `(M_u)_a` taken as `M_{a + T deg u}` for
/// the fixed shift `T`.
pub fn local_cohomology<F: Field>(xs: &[Vec<u32>], m: &RawModule<F>, i: usize, w: &Window) -> HilbertTable {
    let r = xs.len();
    let k = m.gens.len();
    let deg = |mask: usize| -> Deg {
        let mut d = vec![0i64; m.nvars];
        for (j, x) in xs.iter().enumerate() {
            if mask >> j & 1 == 1 {
                for (t, e) in x.iter().enumerate() {
                    d[t] += CECH_SHIFT * *e as i64;
                }
            }
        }
        d
    };
    let subsets = |size: usize| -> Vec<usize> { (0..1usize << r).filter(|s| s.count_ones() as usize == size).collect() };
    HilbertTable::from_fn(w, |a| {
        let term = |q: usize| -> (Quot<F>, Vec<usize>) {
            if q > r {
                return (empty(0), vec![]);
            }
            let ss = subsets(q);
            let blocks = ss.iter().map(|&s| m.strand(&add(&a.0, &deg(s)))).collect();
            let (qt, _) = stack(blocks, k);
            (qt, ss)
        };
        // d: C^q -> C^{q+1}, multiplication by x_j^T is the identity on
        // generator coordinates, with sign (-1)^{#elements of S below j}
        let diff = |src: &[usize], dst: &[usize]| -> DenseMatrix<F> {
            let mut out = DenseMatrix::zeros(dst.len() * k, src.len() * k);
            for (si, &s) in src.iter().enumerate() {
                for j in 0..r {
                    if s >> j & 1 == 1 {
                        continue;
                    }
                    let t = s | 1 << j;
                    let Some(ti) = dst.iter().position(|&x| x == t) else { continue };
                    let below = (s & ((1 << j) - 1)).count_ones();
                    let sign = if below % 2 == 0 { F::one() } else { -F::one() };
                    for rr in 0..k {
                        out[(ti * k + rr, si * k + rr)] = sign;
                    }
                }
            }
            out
        };
        let (prev, ps) = if i == 0 { (empty(0), vec![]) } else { term(i - 1) };
        let (cur, cs) = term(i);
        let (next, ns) = term(i + 1);
        let d_in = if i == 0 {
            DenseMatrix::zeros(cur.space.rows(), 0)
        } else {
            diff(&ps, &cs)
        };
        let d_out = diff(&cs, &ns);
        middle_cohomology(&prev, &d_in, &cur, &d_out, &next)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::ideal::MonomialIdeal;
    use crate::ring::{Multidegree, RingSpec};

    type F = Fp<32003>;

    fn md(v: &[i64]) -> Multidegree {
        Multidegree(v.to_vec())
    }

    #[test]
    fn resolution_betti_numbers() {
        let r = RingSpec::new(&["x", "y", "z"], 32003).unwrap();
        let m = MonomialIdeal::parse(&r, &["x", "y", "z"]).unwrap();
        let k = RawModule::from_presentation(&ModulePresentation::<F>::cyclic(&m));
        assert_eq!(resolve(&k).betti(), vec![1, 3, 3, 1]);
        let i = MonomialIdeal::parse(&r, &["x*y", "y*z", "x^2"]).unwrap();
        let q = RawModule::from_presentation(&ModulePresentation::<F>::cyclic(&i));
        assert_eq!(resolve(&q).betti(), vec![1, 3, 2]);
    }

    #[test]
    fn ext_tor_and_local_cohomology() {
        let r = RingSpec::new(&["x"], 32003).unwrap();
        let x = MonomialIdeal::parse(&r, &["x"]).unwrap();
        let rx = RawModule::from_presentation(&ModulePresentation::<F>::cyclic(&x));
        let ring = RawModule::from_presentation(&ModulePresentation::<F>::ring(1));
        let w = Window::cube(1, -3, 3);
        assert_eq!(ext(&rx, &ring, 1, &w).support(), vec![(md(&[-1]), 1)]);
        assert_eq!(tor(&rx, &rx, 1, &w).support(), vec![(md(&[1]), 1)]);
        let h1 = local_cohomology(&[vec![1]], &ring, 1, &w);
        assert_eq!(h1.support().len(), 3);
        assert!(local_cohomology(&[vec![1]], &ring, 0, &w).is_zero());
    }
}
