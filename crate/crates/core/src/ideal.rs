//! Monomial ideals with minimal generating sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Monomial, RingSpec};

/// A monomial ideal, stored by its minimal generators in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialIdeal {
    nvars: usize,
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    /// Builds the ideal generated by `gens`, discarding redundant generators.
    pub fn new(nvars: usize, gens: Vec<Monomial>) -> Result<Self> {
        if let Some(g) = gens.iter().find(|g| g.nvars() != nvars) {
            return Err(Error::DimensionMismatch(format!(
                "monomial {g:?} has {} exponents, ring has {nvars} variables",
                g.nvars()
            )));
        }
        Ok(MonomialIdeal {
            nvars,
            gens: minimalize(gens),
        })
    }

    pub fn parse(ring: &RingSpec, gens: &[&str]) -> Result<Self> {
        let monos = gens.iter().map(|g| ring.parse_monomial(g)).collect::<Result<Vec<_>>>()?;
        Self::new(ring.nvars(), monos)
    }

    /// The ideal generated by the variables with the given indices.
    pub fn variables(nvars: usize, idx: &[usize]) -> Self {
        Self::new(nvars, idx.iter().map(|&i| Monomial::var(nvars, i)).collect()).expect("consistent lengths")
    }

    pub fn unit(nvars: usize) -> Self {
        Self::new(nvars, vec![Monomial::one(nvars)]).expect("consistent lengths")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(Monomial::is_one)
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                out.push(a.mul(b));
            }
        }
        MonomialIdeal {
            nvars: self.nvars,
            gens: minimalize(out),
        }
    }

    /// `I^s` for `s >= 1`; `I^0` is the unit ideal.
    pub fn power(&self, s: u32) -> Self {
        let mut acc = Self::unit(self.nvars);
        for _ in 0..s {
            acc = acc.product(self);
        }
        acc
    }

    /// Radical: generated by the supports of the generators.
    pub fn radical(&self) -> Self {
        let gens = self
            .gens
            .iter()
            .map(|g| Monomial(g.0.iter().map(|&e| e.min(1)).collect()))
            .collect();
        Self::new(self.nvars, gens).expect("consistent lengths")
    }

    pub fn display(&self, ring: &RingSpec) -> String {
        let parts: Vec<String> = self.gens.iter().map(|g| g.display(ring)).collect();
        format!("({})", parts.join(", "))
    }
}

/// `I^s`, minimally generated.
pub fn ideal_power(i: &MonomialIdeal, s: u32) -> MonomialIdeal {
    i.power(s)
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by(|a, b| a.total_degree().cmp(&b.total_degree()).then_with(|| a.cmp(b)));
    gens.dedup();
    let mut kept: Vec<Monomial> = Vec::new();
    for g in gens {
        if !kept.iter().any(|k| k.divides(&g)) {
            kept.push(g);
        }
    }
    kept.sort();
    kept.reverse();
    kept
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring4() -> RingSpec {
        RingSpec::new(&["x", "y", "z", "w"], 32003).unwrap()
    }

    #[test]
    fn powers() {
        let r = RingSpec::new(&["x", "y"], 32003).unwrap();
        let m = MonomialIdeal::parse(&r, &["x", "y"]).unwrap();
        let sq = ideal_power(&m, 2);
        let expect = MonomialIdeal::parse(&r, &["x^2", "x*y", "y^2"]).unwrap();
        assert_eq!(sq, expect);
        let x = MonomialIdeal::parse(&r, &["x"]).unwrap();
        assert_eq!(ideal_power(&x, 3), MonomialIdeal::parse(&r, &["x^3"]).unwrap());
        assert_eq!(ideal_power(&m, 1), m);
    }

    #[test]
    fn square_of_two_by_two_minors_ideal() {
        let r = ring4();
        let i = MonomialIdeal::parse(&r, &["x*z", "x*w", "y*z", "y*w"]).unwrap();
        let sq = ideal_power(&i, 2);
        let expect = MonomialIdeal::parse(
            &r,
            &[
                "x^2*z^2", "x^2*z*w", "x^2*w^2", "x*y*z^2", "x*y*z*w", "x*y*w^2", "y^2*z^2", "y^2*z*w", "y^2*w^2",
            ],
        )
        .unwrap();
        assert_eq!(sq.gens().len(), 9);
        assert_eq!(sq, expect);
    }

    #[test]
    fn redundant_generators_dropped() {
        let r = RingSpec::new(&["x", "y"], 2).unwrap();
        let i = MonomialIdeal::parse(&r, &["x", "x*y", "x^2", "y^3"]).unwrap();
        assert_eq!(i, MonomialIdeal::parse(&r, &["x", "y^3"]).unwrap());
        assert!(i.contains(&r.parse_monomial("x*y^5").unwrap()));
        assert!(!i.contains(&r.parse_monomial("y^2").unwrap()));
    }
}
