//! Finite boxes of multidegrees and dimension tables over them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::Multidegree;

/// The box `lo <= a <= hi` in `Z^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub lo: Multidegree,
    pub hi: Multidegree,
}

impl Window {
    pub fn new(lo: Multidegree, hi: Multidegree) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimensionMismatch(format!(
                "window corners {lo} and {hi} have different lengths"
            )));
        }
        if !lo.le(&hi) {
            return Err(Error::InvalidInput(format!("window lower corner {lo} exceeds {hi}")));
        }
        Ok(Window { lo, hi })
    }

    /// The cube `[lo, hi]^n`.
    pub fn cube(n: usize, lo: i64, hi: i64) -> Self {
        Window::new(Multidegree(vec![lo; n]), Multidegree(vec![hi; n])).expect("lo <= hi")
    }

    /// Parses `lo:hi`, or a comma separated list of per-coordinate `lo:hi`
    /// ranges where a single range is broadcast to all `n` coordinates.
    pub fn parse(spec: &str, n: usize) -> Result<Self> {
        let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
        let parse_range = |p: &str| -> Result<(i64, i64)> {
            let (a, b) = p
                .split_once(':')
                .ok_or_else(|| Error::InvalidInput(format!("window range `{p}` must look like lo:hi")))?;
            let a: i64 = a.trim().parse().map_err(|_| Error::InvalidInput(format!("bad window bound `{a}`")))?;
            let b: i64 = b.trim().parse().map_err(|_| Error::InvalidInput(format!("bad window bound `{b}`")))?;
            Ok((a, b))
        };
        let ranges: Vec<(i64, i64)> = if parts.len() == 1 {
            vec![parse_range(parts[0])?; n]
        } else if parts.len() == n {
            parts.iter().map(|p| parse_range(p)).collect::<Result<_>>()?
        } else {
            return Err(Error::InvalidInput(format!(
                "window `{spec}` has {} ranges for {n} variables",
                parts.len()
            )));
        };
        Window::new(
            Multidegree(ranges.iter().map(|r| r.0).collect()),
            Multidegree(ranges.iter().map(|r| r.1).collect()),
        )
    }

    pub fn nvars(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, a: &Multidegree) -> bool {
        self.lo.le(a) && a.le(&self.hi)
    }

    pub fn size(&self) -> usize {
        self.lo
            .0
            .iter()
            .zip(&self.hi.0)
            .map(|(l, h)| (h - l + 1) as usize)
            .product()
    }

    /// All points in lexicographic order.
    pub fn points(&self) -> Vec<Multidegree> {
        let n = self.nvars();
        let mut out = Vec::with_capacity(self.size());
        let mut cur = self.lo.0.clone();
        loop {
            out.push(Multidegree(cur.clone()));
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < self.hi.0[i] {
                    cur[i] += 1;
                    cur[i + 1..].copy_from_slice(&self.lo.0[i + 1..]);
                    break;
                }
            }
        }
    }

    /// The window `{-a : a in self}`.
    pub fn mirror(&self) -> Window {
        Window {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} .. {}]", self.lo, self.hi)
    }
}

/// Degreewise dimensions over a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertTable {
    pub window: Window,
    pub dims: BTreeMap<Multidegree, usize>,
}

impl HilbertTable {
    pub fn from_fn(window: &Window, mut f: impl FnMut(&Multidegree) -> usize) -> Self {
        let dims = window.points().into_iter().map(|a| {
            let d = f(&a);
            (a, d)
        });
        HilbertTable {
            window: window.clone(),
            dims: dims.collect(),
        }
    }

    pub fn try_from_fn(window: &Window, mut f: impl FnMut(&Multidegree) -> Result<usize>) -> Result<Self> {
        let mut dims = BTreeMap::new();
        for a in window.points() {
            let d = f(&a)?;
            dims.insert(a, d);
        }
        Ok(HilbertTable {
            window: window.clone(),
            dims,
        })
    }

    pub fn zero(window: &Window) -> Self {
        Self::from_fn(window, |_| 0)
    }

    pub fn get(&self, a: &Multidegree) -> Option<usize> {
        self.dims.get(a).copied()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.values().all(|&d| d == 0)
    }

    /// Nonzero entries in lexicographic order.
    pub fn support(&self) -> Vec<(Multidegree, usize)> {
        self.dims
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(a, &d)| (a.clone(), d))
            .collect()
    }

    /// The table `a -> self[-a]` over the mirrored window.
    pub fn mirror(&self) -> HilbertTable {
        HilbertTable {
            window: self.window.mirror(),
            dims: self.dims.iter().map(|(a, &d)| (-a, d)).collect(),
        }
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_are_lexicographic() {
        let w = Window::cube(2, 0, 1);
        let pts: Vec<Vec<i64>> = w.points().into_iter().map(|p| p.0).collect();
        assert_eq!(pts, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(w.size(), 4);
    }

    #[test]
    fn parse_windows() {
        assert_eq!(Window::parse("-4:4", 3).unwrap(), Window::cube(3, -4, 4));
        let w = Window::parse("0:1, -2:0", 2).unwrap();
        assert_eq!(w.lo, Multidegree(vec![0, -2]));
        assert!(Window::parse("1:0", 1).is_err());
        assert!(Window::parse("0:1,0:1", 3).is_err());
    }

    #[test]
    fn mirror_involution() {
        let w = Window::parse("-1:2,0:3", 2).unwrap();
        let t = HilbertTable::from_fn(&w, |a| (a.0[0] + 2 * a.0[1]).unsigned_abs() as usize);
        assert_eq!(t.mirror().mirror(), t);
        assert_eq!(t.mirror().get(&Multidegree(vec![1, -3])), Some(5));
    }
}
