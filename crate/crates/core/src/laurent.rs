//! One-variable Laurent polynomials with integer coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LPoly(BTreeMap<i64, i64>);

impl LPoly {
    pub fn zero() -> LPoly {
        LPoly::default()
    }

    pub fn one() -> LPoly {
        LPoly::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i64) -> LPoly {
        LPoly::from_terms([(exp, coeff)])
    }

    /// `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> LPoly {
        let mut p = LPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.0.entry(exp).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.0.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.0.get(&exp).copied().unwrap_or(0)
    }

    /// Nonzero terms by ascending exponent.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, i64)> + '_ {
        self.0.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.0.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.0.keys().next_back().copied()
    }

    /// Multiplies by `var^k`.
    pub fn shift(&self, k: i64) -> LPoly {
        LPoly(self.0.iter().map(|(&e, &c)| (e + k, c)).collect())
    }

    pub fn scale(&self, s: i64) -> LPoly {
        LPoly::from_terms(self.terms().map(|(e, c)| (e, c * s)))
    }

    /// Substitutes `var ↦ var^k` (for `k = −1`, the mirror substitution).
    pub fn substitute_power(&self, k: i64) -> LPoly {
        LPoly::from_terms(self.terms().map(|(e, c)| (e * k, c)))
    }

    pub fn pow(&self, n: u32) -> LPoly {
        let mut acc = LPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder or a coefficient does not divide.
    pub fn div_exact(&self, divisor: &LPoly) -> Option<LPoly> {
        let (d_hi, d_lo) = (divisor.max_degree()?, divisor.min_degree()?);
        let d_lead = divisor.coeff(d_hi);
        let mut rem = self.clone();
        let mut quot = LPoly::zero();
        while let (Some(hi), Some(lo)) = (rem.max_degree(), rem.min_degree()) {
            if hi - lo < d_hi - d_lo {
                return None;
            }
            let c = rem.coeff(hi);
            if c % d_lead != 0 {
                return None;
            }
            let term = LPoly::monomial(c / d_lead, hi - d_hi);
            rem = &rem - &(&term * divisor);
            quot = &quot + &term;
        }
        Some(quot)
    }
}

impl Add for &LPoly {
    type Output = LPoly;
    fn add(self, rhs: &LPoly) -> LPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, c);
        }
        out
    }
}

impl Sub for &LPoly {
    type Output = LPoly;
    fn sub(self, rhs: &LPoly) -> LPoly {
        let mut out = self.clone();
        for (e, c) in rhs.terms() {
            out.add_term(e, -c);
        }
        out
    }
}

impl Mul for &LPoly {
    type Output = LPoly;
    fn mul(self, rhs: &LPoly) -> LPoly {
        let mut out = LPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in rhs.terms() {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LPoly {
    type Output = LPoly;
    fn neg(self) -> LPoly {
        self.scale(-1)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for LPoly {
            type Output = LPoly;
            fn $m(self, rhs: LPoly) -> LPoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> LPoly {
        LPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn arithmetic() {
        let a = p(&[(-1, 1), (1, 1)]);
        assert_eq!(&a * &a, p(&[(-2, 1), (0, 2), (2, 1)]));
        assert_eq!(&a - &a, LPoly::zero());
        assert_eq!(a.shift(2), p(&[(1, 1), (3, 1)]));
        assert_eq!(a.pow(0), LPoly::one());
        assert_eq!(p(&[(1, 1), (3, 2)]).substitute_power(-1), p(&[(-1, 1), (-3, 2)]));
    }

    #[test]
    fn exact_division() {
        let unknot = p(&[(-1, 1), (1, 1)]);
        let trefoil = p(&[(1, 1), (3, 1), (5, 1), (9, -1)]);
        assert_eq!(trefoil.div_exact(&unknot), Some(p(&[(2, 1), (6, 1), (8, -1)])));
        assert_eq!(p(&[(0, 1)]).div_exact(&unknot), None);
        assert_eq!(p(&[(3, 1), (1, 1)]).div_exact(&p(&[(0, 2)])), None);
        assert_eq!(LPoly::zero().div_exact(&unknot), Some(LPoly::zero()));
        assert_eq!(unknot.div_exact(&LPoly::zero()), None);
    }
}
