//! Truncated power series in x, y, z with exact rational coefficients.
//!
//! Terms of total degree above the truncation degree, or with an exponent
//! above its per-variable cap, are dropped after every operation. Products
//! only raise exponents, so every kept coefficient is exact.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::trop::Rat;

pub type Exponent = [u32; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub degree: u32,
    pub caps: [u32; 3],
}

impl Truncation {
    /// Keeps every term of total degree at most `degree`.
    pub fn total(degree: u32) -> Self {
        Truncation {
            degree,
            caps: [degree; 3],
        }
    }

    /// Additionally bounds each exponent separately.
    pub fn capped(degree: u32, caps: [u32; 3]) -> Self {
        Truncation { degree, caps }
    }

    fn keeps(&self, exp: &Exponent) -> bool {
        exp.iter().sum::<u32>() <= self.degree && exp.iter().zip(&self.caps).all(|(e, c)| e <= c)
    }

    fn meet(&self, other: &Truncation) -> Truncation {
        Truncation {
            degree: self.degree.min(other.degree),
            caps: [0, 1, 2].map(|k| self.caps[k].min(other.caps[k])),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    trunc: Truncation,
    terms: BTreeMap<Exponent, Rat>,
}

impl Series {
    pub fn zero(trunc: Truncation) -> Self {
        Series {
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(trunc: Truncation, c: Rat) -> Self {
        Self::monomial(trunc, [0, 0, 0], c)
    }

    pub fn monomial(trunc: Truncation, exp: Exponent, c: Rat) -> Self {
        let mut s = Self::zero(trunc);
        s.add_term(exp, c);
        s
    }

    pub fn x(trunc: Truncation) -> Self {
        Self::monomial(trunc, [1, 0, 0], Rat::one())
    }

    pub fn y(trunc: Truncation) -> Self {
        Self::monomial(trunc, [0, 1, 0], Rat::one())
    }

    pub fn z(trunc: Truncation) -> Self {
        Self::monomial(trunc, [0, 0, 1], Rat::one())
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    fn add_term(&mut self, exp: Exponent, c: Rat) {
        if !self.trunc.keeps(&exp) || c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: Exponent) -> Rat {
        self.terms.get(&exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> Series {
        let mut out = Series::zero(self.trunc);
        for (e, a) in &self.terms {
            out.add_term(*e, a * c);
        }
        out
    }

    fn has_zero_constant(&self) -> bool {
        self.coeff([0, 0, 0]).is_zero()
    }

    /// `Σ_{m>=0} coeff(m) f^m` for f without constant term.
    fn compose_power_series(&self, coeff: impl Fn(u32) -> Rat) -> Series {
        assert!(self.has_zero_constant(), "series must vanish at the origin");
        let mut out = Series::constant(self.trunc, coeff(0));
        let mut power = Series::constant(self.trunc, Rat::one());
        for m in 1..=self.trunc.degree {
            power = &power * self;
            if power.terms.is_empty() {
                break;
            }
            out = &out + &power.scale(&coeff(m));
        }
        out
    }

    /// `1 / (1 - f)` for f without constant term.
    pub fn geometric(&self) -> Series {
        self.compose_power_series(|_| Rat::one())
    }

    /// `exp(f)` for f without constant term.
    pub fn exp(&self) -> Series {
        self.compose_power_series(|m| {
            let fact: Rat = (1..=m).map(|k| Rat::from_integer(k.into())).product();
            Rat::one() / fact
        })
    }

    pub fn derivative_z(&self) -> Series {
        let mut out = Series::zero(self.trunc);
        for (e, a) in &self.terms {
            if e[2] > 0 {
                out.add_term([e[0], e[1], e[2] - 1], a * Rat::from_integer(e[2].into()));
            }
        }
        out
    }
}

impl Add for &Series {
    type Output = Series;

    fn add(self, rhs: &Series) -> Series {
        let mut out = self.clone();
        out.trunc = self.trunc.meet(&rhs.trunc);
        out.terms.retain(|e, _| out.trunc.keeps(e));
        for (e, a) in &rhs.terms {
            out.add_term(*e, a.clone());
        }
        out
    }
}

impl Neg for &Series {
    type Output = Series;

    fn neg(self) -> Series {
        self.scale(&-Rat::one())
    }
}

impl Sub for &Series {
    type Output = Series;

    fn sub(self, rhs: &Series) -> Series {
        self + &(-rhs)
    }
}

impl Mul for &Series {
    type Output = Series;

    fn mul(self, rhs: &Series) -> Series {
        let mut out = Series::zero(self.trunc.meet(&rhs.trunc));
        for (ea, a) in &self.terms {
            for (eb, b) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                if out.trunc.keeps(&e) {
                    out.add_term(e, a * b);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trop::{int, rat};

    #[test]
    fn geometric_series() {
        let g = Series::x(Truncation::total(5)).geometric();
        for k in 0..=5 {
            assert_eq!(g.coeff([k, 0, 0]), int(1));
        }
        assert_eq!(g.coeff([6, 0, 0]), int(0));
    }

    #[test]
    fn exponential_series() {
        let t = Truncation::total(4);
        let e = (&Series::x(t) + &Series::y(t)).exp();
        // exp(x + y) = Σ x^a y^b / (a! b!)
        assert_eq!(e.coeff([2, 1, 0]), rat(1, 2));
        assert_eq!(e.coeff([2, 2, 0]), rat(1, 4));
        assert_eq!(e.coeff([3, 2, 0]), int(0));
    }

    #[test]
    fn derivative() {
        let t = Truncation::total(4);
        let z = Series::z(t);
        let f = &(&z * &z) * &Series::x(t);
        assert_eq!(f.derivative_z().coeff([1, 0, 1]), int(2));
    }

    #[test]
    fn truncation_drops_high_terms() {
        let t = Truncation::total(2);
        let p = &Series::x(t) * &(&Series::y(t) * &Series::z(t));
        assert!(p.terms.is_empty());
        let capped = Truncation::capped(6, [1, 6, 6]);
        let q = &Series::x(capped) * &Series::x(capped);
        assert!(q.terms.is_empty());
    }
}
