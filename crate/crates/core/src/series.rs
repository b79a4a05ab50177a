//! Truncated power series in one variable with exact rational coefficients.

use std::ops::{Add, Mul};

use num_traits::{One, Zero};

use crate::Rational;

/// `Σ_{n ≤ N} c_n y^n`; everything of degree above `N` is discarded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<Rational>,
}

impl Series {
    pub fn zero(truncation: usize) -> Series {
        Series { coeffs: vec![Rational::zero(); truncation + 1] }
    }

    pub fn one(truncation: usize) -> Series {
        Series::constant(Rational::one(), truncation)
    }

    pub fn constant(c: Rational, truncation: usize) -> Series {
        let mut s = Series::zero(truncation);
        s.coeffs[0] = c;
        s
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>, truncation: usize) -> Series {
        coeffs.resize(truncation + 1, Rational::zero());
        Series { coeffs }
    }

    /// `e^{a·y} = Σ aⁿ yⁿ / n!`.
    pub fn exp_scaled(a: &Rational, truncation: usize) -> Series {
        let mut coeffs = Vec::with_capacity(truncation + 1);
        let mut term = Rational::one();
        for n in 0..=truncation {
            if n > 0 {
                term = term * a / Rational::from_integer(n.into());
            }
            coeffs.push(term.clone());
        }
        Series { coeffs }
    }

    pub fn exp_y(truncation: usize) -> Series {
        Series::exp_scaled(&Rational::one(), truncation)
    }

    pub fn exp_neg_y(truncation: usize) -> Series {
        Series::exp_scaled(&-Rational::one(), truncation)
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn scale(&self, c: &Rational) -> Series {
        Series { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, mut k: u64) -> Series {
        let mut base = self.clone();
        let mut acc = Series::one(self.truncation());
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `(e^y)^k` for any integer `k`, built from `e^{±y}` by powering.
    pub fn exp_y_pow(k: i64, truncation: usize) -> Series {
        let base = if k >= 0 { Series::exp_y(truncation) } else { Series::exp_neg_y(truncation) };
        base.pow(k.unsigned_abs())
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        assert_eq!(self.truncation(), rhs.truncation(), "truncation mismatch");
        Series { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        assert_eq!(self.truncation(), rhs.truncation(), "truncation mismatch");
        let n = self.truncation();
        let mut out = Series::zero(n);
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in rhs.coeffs[..=n - i].iter().enumerate() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn exp_coefficients() {
        let e = Series::exp_y(4);
        assert_eq!(e.coeffs(), &[r(1, 1), r(1, 1), r(1, 2), r(1, 6), r(1, 24)]);
        let e = Series::exp_scaled(&r(-3, 2), 2);
        assert_eq!(e.coeffs(), &[r(1, 1), r(-3, 2), r(9, 8)]);
    }

    #[test]
    fn exp_products() {
        let n = 6;
        assert_eq!(&Series::exp_y(n) * &Series::exp_neg_y(n), Series::one(n));
        for k in -9i64..=9 {
            let direct = Series::exp_scaled(&r(k, 1), n);
            assert_eq!(Series::exp_y_pow(k, n), direct, "k = {k}");
        }
        let half = Series::exp_scaled(&r(1, 2), n);
        assert_eq!(half.pow(2), Series::exp_y(n));
    }

    #[test]
    fn pow_zero_and_addition() {
        let s = Series::from_coeffs(vec![r(2, 1), r(1, 1)], 3);
        assert_eq!(s.pow(0), Series::one(3));
        assert_eq!((&s * &s).coeffs(), &[r(4, 1), r(4, 1), r(1, 1), r(0, 1)]);
        assert_eq!((&s + &s), s.scale(&r(2, 1)));
    }
}
