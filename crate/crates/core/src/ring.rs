//! The finely graded polynomial ring and its monomials.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;

/// A multidegree in `Z^n`. Ordered lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multidegree(pub Vec<i64>);

impl Multidegree {
    pub fn zero(n: usize) -> Self {
        Multidegree(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Multidegree(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn join(&self, other: &Self) -> Self {
        Multidegree(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn meet(&self, other: &Self) -> Self {
        Multidegree(self.0.iter().zip(&other.0).map(|(&a, &b)| a.min(b)).collect())
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    /// The exponent vector if all components are nonnegative.
    pub fn to_monomial(&self) -> Option<Monomial> {
        if !self.is_nonnegative() {
            return None;
        }
        Some(Monomial(self.0.iter().map(|&a| a as u32).collect()))
    }
}

impl fmt::Debug for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl Add for &Multidegree {
    type Output = Multidegree;
    fn add(self, rhs: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Multidegree {
    type Output = Multidegree;
    fn sub(self, rhs: &Multidegree) -> Multidegree {
        Multidegree(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Multidegree {
    type Output = Multidegree;
    fn neg(self) -> Multidegree {
        Multidegree(self.0.iter().map(|a| -a).collect())
    }
}

impl From<Vec<i64>> for Multidegree {
    fn from(v: Vec<i64>) -> Self {
        Multidegree(v)
    }
}

impl From<&[i64]> for Multidegree {
    fn from(v: &[i64]) -> Self {
        Multidegree(v.to_vec())
    }
}

/// A monomial `x^e`, stored as its exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Monomial(v)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> Multidegree {
        Multidegree(self.0.iter().map(|&e| e as i64).collect())
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    pub fn pow(&self, t: u32) -> Monomial {
        Monomial(self.0.iter().map(|&a| a * t).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    /// Indices of the variables occurring in the monomial.
    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }

    pub fn display(&self, ring: &RingSpec) -> String {
        if self.is_one() {
            return "1".into();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(ring.vars[i].clone()),
                _ => parts.push(format!("{}^{}", ring.vars[i], e)),
            }
        }
        parts.join("*")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{:?}", self.0)
    }
}

/// A nonzero scalar times a monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term<F> {
    pub coeff: F,
    pub mono: Monomial,
}

impl<F: Field> Term<F> {
    pub fn new(coeff: F, mono: Monomial) -> Result<Self> {
        if coeff.is_zero() {
            return Err(Error::InvalidInput("term coefficient must be nonzero".into()));
        }
        Ok(Term { coeff, mono })
    }
}

/// Variable names and characteristic of `k[x_1, ..., x_n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingSpec {
    pub vars: Vec<String>,
    pub characteristic: u64,
}

impl RingSpec {
    pub fn new<S: AsRef<str>>(vars: &[S], characteristic: u64) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::InvalidInput("ring needs at least one variable".into()));
        }
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::InvalidInput(format!("invalid variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidInput(format!("duplicate variable `{v}`")));
            }
        }
        Ok(RingSpec { vars, characteristic })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Parses a monomial such as `x^2*y` or `1`.
    pub fn parse_monomial(&self, s: &str) -> Result<Monomial> {
        let t: Term<crate::field::Fp<2>> = self.parse_term_inner(s, false)?;
        Ok(t.mono)
    }

    /// Parses a term such as `3*x^2*y`, `-y` or `5`.
    pub fn parse_term<F: Field>(&self, s: &str) -> Result<Term<F>> {
        self.parse_term_inner(s, true)
    }

    fn parse_term_inner<F: Field>(&self, s: &str, allow_coeff: bool) -> Result<Term<F>> {
        let err = |m: String| Error::InvalidInput(format!("term `{s}`: {m}"));
        let mut body = s.trim();
        let mut sign = 1i64;
        if let Some(rest) = body.strip_prefix('-') {
            if !allow_coeff {
                return Err(err("monomials cannot carry a sign".into()));
            }
            sign = -1;
            body = rest.trim();
        }
        if body.is_empty() {
            return Err(err("empty".into()));
        }
        let mut coeff = F::from_i64(sign);
        let mut exps = vec![0u32; self.nvars()];
        for factor in body.split('*') {
            let factor = factor.trim();
            if factor.is_empty() {
                return Err(err("empty factor".into()));
            }
            if factor.chars().all(|c| c.is_ascii_digit()) {
                let v: i64 = factor.parse().map_err(|_| err(format!("bad integer `{factor}`")))?;
                if !allow_coeff && v != 1 {
                    return Err(err("monomials cannot carry a coefficient".into()));
                }
                coeff *= F::from_i64(v);
                continue;
            }
            let (name, e) = match factor.split_once('^') {
                Some((n, e)) => {
                    let e: u32 = e.trim().parse().map_err(|_| err(format!("bad exponent in `{factor}`")))?;
                    (n.trim(), e)
                }
                None => (factor, 1),
            };
            let i = self
                .var_index(name)
                .ok_or_else(|| Error::UnknownName(name.to_string()))?;
            exps[i] += e;
        }
        if coeff.is_zero() {
            return Err(err("coefficient vanishes in this characteristic".into()));
        }
        Ok(Term {
            coeff,
            mono: Monomial(exps),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;

    #[test]
    fn parse_terms() {
        let r = RingSpec::new(&["x", "y"], 32003).unwrap();
        let t: Term<Fp<32003>> = r.parse_term("3*x^2*y").unwrap();
        assert_eq!(t.coeff, Fp::new(3));
        assert_eq!(t.mono, Monomial(vec![2, 1]));
        let t: Term<Fp<32003>> = r.parse_term("-y").unwrap();
        assert_eq!(t.coeff.to_signed(), -1);
        assert_eq!(r.parse_monomial("1").unwrap(), Monomial(vec![0, 0]));
        assert!(matches!(r.parse_monomial("z"), Err(Error::UnknownName(_))));
        assert!(r.parse_term::<Fp<3>>("3*x").is_err());
    }

    #[test]
    fn ring_names() {
        assert!(RingSpec::new(&["x", "x"], 2).is_err());
        assert!(RingSpec::new::<&str>(&[], 2).is_err());
    }

    #[test]
    fn monomial_arithmetic() {
        let a = Monomial(vec![2, 0, 1]);
        let b = Monomial(vec![1, 1, 0]);
        assert_eq!(a.lcm(&b), Monomial(vec![2, 1, 1]));
        assert!(!a.divides(&b));
        assert_eq!(a.mul(&b).div(&b), Some(a.clone()));
        assert_eq!(a.support(), vec![0, 2]);
    }
}
