//! The polynomials `v_n(t, x)`: the coefficient of `yⁿ` in `Kh(t, x·e^y)`.
//!
//! Expanding `(x·e^y)^j = x^j Σ jⁿyⁿ/n!` gives the closed form
//!
//! ```text
//! v_{n,j}(t, x) = jⁿ/n! · Σ_i t^i rank H^{i,j} · x^j,     v_n = Σ_j v_{n,j}.
//! ```
//!
//! [`v_n`] uses the closed form; [`series_reconstruct`] substitutes and
//! multiplies out truncated series instead, so the two can check each other.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homology::BigradedRanks;
use crate::polynomials::{JonesPoly, KhPoly, NormalizedJones};
use crate::series::Series;
use crate::text::{self, TextError};
use crate::Rational;

/// Default number of orders computed, matching `v_0 … v_5`.
pub const DEFAULT_TRUNCATION: usize = 5;
/// Largest truncation accepted by the command-line front end.
pub const MAX_TRUNCATION: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("the polynomial is zero and has no extremal term")]
    EmptyPolynomial,
    #[error("invalid serialized term: {0}")]
    BadTerm(String),
}

/// A Laurent polynomial in `t` and `x` with rational coefficients, tagged with
/// the order `n` it was computed for.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VnPoly {
    order: usize,
    /// Keyed by `(x-exponent, t-exponent)`.
    terms: BTreeMap<(i64, i64), Rational>,
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// `jⁿ/n!`.
pub fn weight(j: i64, n: usize) -> Rational {
    Rational::new(BigInt::from(j).pow(n as u32), factorial(n))
}

impl VnPoly {
    pub fn zero(order: usize) -> VnPoly {
        VnPoly { order, terms: BTreeMap::new() }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `t^i x^j`.
    pub fn coeff(&self, i: i64, j: i64) -> Rational {
        self.terms.get(&(j, i)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, i: i64, j: i64, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((j, i)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(j, i));
        }
    }

    /// `((i, j), coefficient)` ascending by `(j, i)`.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = ((i64, i64), &Rational)> + '_ {
        self.terms.iter().map(|(&(j, i), c)| ((i, j), c))
    }

    /// Same terms, ignoring the order tag.
    pub fn same_terms(&self, other: &VnPoly) -> bool {
        self.terms == other.terms
    }

    fn ordered_terms(&self) -> Vec<(Vec<i64>, Rational)> {
        self.terms().rev().map(|((i, j), c)| (vec![i, j], c.clone())).collect()
    }

    /// Text form, terms descending by `(x, t)` exponents.
    pub fn to_text(&self) -> String {
        let terms = self.ordered_terms();
        text::format_terms(terms.iter().map(|(e, c)| (e.as_slice(), c)), &["t", "x"])
    }

    pub fn to_latex(&self) -> String {
        let terms = self.ordered_terms();
        text::latex_terms(terms.iter().map(|(e, c)| (e.as_slice(), c)), &["t", "x"])
    }

    pub fn parse(s: &str, order: usize) -> Result<VnPoly, TextError> {
        let map = text::parse_terms(s, &["t", "x"])?;
        Ok(VnPoly { order, terms: map.into_iter().map(|(e, c)| ((e[1], e[0]), c)).collect() })
    }

    /// Exact-fraction term list, ascending by `(x, t)`.
    pub fn to_json(&self) -> VnJson {
        VnJson {
            order: self.order,
            terms: self
                .terms()
                .map(|((t, x), c)| VnTerm { t, x, num: c.numer().to_string(), den: c.denom().to_string() })
                .collect(),
        }
    }

    pub fn from_json(json: &VnJson) -> Result<VnPoly, ExpansionError> {
        let mut p = VnPoly::zero(json.order);
        for term in &json.terms {
            let bad = || ExpansionError::BadTerm(format!("{}/{}", term.num, term.den));
            let num: BigInt = term.num.parse().map_err(|_| bad())?;
            let den: BigInt = term.den.parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            p.add_term(term.t, term.x, Rational::new(num, den));
        }
        Ok(p)
    }
}

impl fmt::Display for VnPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VnJson {
    pub order: usize,
    pub terms: Vec<VnTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VnTerm {
    pub t: i64,
    pub x: i64,
    pub num: String,
    pub den: String,
}

/// `v_{n,j}`: the part of `v_n` at `x`-degree `j`.
pub fn v_nj(r: &BigradedRanks, n: usize, j: i64) -> VnPoly {
    let w = weight(j, n);
    let mut p = VnPoly::zero(n);
    for ((i, jj), rank) in r.iter().filter(|&((_, jj), _)| jj == j) {
        p.add_term(i, jj, &w * Rational::from_integer(rank.into()));
    }
    p
}

pub fn v_n(r: &BigradedRanks, n: usize) -> VnPoly {
    let mut p = VnPoly::zero(n);
    for ((i, j), rank) in r.iter() {
        p.add_term(i, j, weight(j, n) * Rational::from_integer(rank.into()));
    }
    p
}

/// `P(−1, 1)`.
pub fn vassiliev_value(p: &VnPoly) -> Rational {
    p.terms().map(|((i, _), c)| if i % 2 == 0 { c.clone() } else { -c }).fold(Rational::zero(), |a, b| a + b)
}

/// Lowest `x`-degree of a [`VnPoly`] and its `t`-coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtremalTerm {
    pub j_min: i64,
    /// `t`-exponent → coefficient.
    pub coeff: BTreeMap<i64, Rational>,
}

impl fmt::Display for ExtremalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(Vec<i64>, &Rational)> = self.coeff.iter().rev().map(|(&i, c)| (vec![i], c)).collect();
        let t = text::format_terms(terms.iter().map(|(e, c)| (e.as_slice(), *c)), &["t"]);
        write!(f, "x^{}: {}", self.j_min, t)
    }
}

pub fn extremal_term(p: &VnPoly) -> Result<ExtremalTerm, ExpansionError> {
    let (&(j_min, _), _) = p.terms.first_key_value().ok_or(ExpansionError::EmptyPolynomial)?;
    let coeff = p.terms().take_while(|&((_, j), _)| j == j_min).map(|((i, _), c)| (i, c.clone())).collect();
    Ok(ExtremalTerm { j_min, coeff })
}

/// True when the lowest `q`-degree of `r` is `−4m − 1` and that column is
/// exactly one copy of `ℚ` in homological degree `−2m`.
pub fn has_extremal_witness(r: &BigradedRanks, m: i64) -> bool {
    let j = -4 * m - 1;
    let lowest = r.iter().map(|((_, jj), _)| jj).min();
    let column: Vec<_> = r.iter().filter(|&((_, jj), _)| jj == j).collect();
    lowest == Some(j) && column == [((-2 * m, j), 1)]
}

/// `v_0 … v_N` by substituting `q = x·e^y` into `P` and multiplying out
/// truncated series, without the closed form.
pub fn series_reconstruct(p: &KhPoly, truncation: usize) -> Vec<VnPoly> {
    let mut out: Vec<VnPoly> = (0..=truncation).map(VnPoly::zero).collect();
    let mut cache: BTreeMap<i64, Series> = BTreeMap::new();
    for ((i, j), rank) in p.terms() {
        let s = cache.entry(j).or_insert_with(|| Series::exp_y_pow(j, truncation));
        let rank = Rational::from_integer(rank.into());
        for (n, c) in s.coeffs().iter().enumerate() {
            out[n].add_term(i, j, c * &rank);
        }
    }
    out
}

/// Taylor coefficients of `J(e^y)` up to `y^N`.
pub fn jones_taylor(jp: &JonesPoly, truncation: usize) -> Vec<Rational> {
    let mut acc = Series::zero(truncation);
    for (e, c) in jp.terms() {
        acc = &acc + &Series::exp_y_pow(e, truncation).scale(&Rational::from_integer(c.into()));
    }
    acc.coeffs().to_vec()
}

/// `u_0 … u_N` with `V(e^x) = Σ u_i x^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BirmanLinSeries(Vec<Rational>);

impl BirmanLinSeries {
    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn u(&self, i: usize) -> &Rational {
        &self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for BirmanLinSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Substitutes `r = e^x` into the normalized Jones polynomial. Half-integer
/// powers become powers of the series `e^{±x/2}`.
pub fn birman_lin(v: &NormalizedJones, truncation: usize) -> BirmanLinSeries {
    let half = Rational::new(1.into(), 2.into());
    let up = Series::exp_scaled(&half, truncation);
    let down = Series::exp_scaled(&-half, truncation);
    let mut acc = Series::zero(truncation);
    for (k, c) in v.doubled_terms() {
        let base = if k >= 0 { &up } else { &down };
        acc = &acc + &base.pow(k.unsigned_abs()).scale(&Rational::from_integer(c.into()));
    }
    BirmanLinSeries(acc.coeffs().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn ranks(t: &[((i64, i64), u64)]) -> BigradedRanks {
        t.iter().copied().collect()
    }

    fn trefoil() -> BigradedRanks {
        ranks(&[((0, 1), 1), ((0, 3), 1), ((2, 5), 1), ((3, 9), 1)])
    }

    fn unknot() -> BigradedRanks {
        ranks(&[((0, 1), 1), ((0, -1), 1)])
    }

    #[test]
    fn v_nj_examples() {
        assert_eq!(v_nj(&trefoil(), 1, 9).to_text(), "9*t^3*x^9");
        assert_eq!(v_nj(&unknot(), 2, -1).to_text(), "1/2*x^-1");
        assert!(v_nj(&trefoil(), 3, 4).is_zero());
        assert_eq!(v_nj(&trefoil(), 0, 5).to_text(), "t^2*x^5");
    }

    #[test]
    fn v_n_examples() {
        assert_eq!(v_n(&trefoil(), 1).to_text(), "9*t^3*x^9 + 5*t^2*x^5 + 3*x^3 + x");
        assert_eq!(v_n(&trefoil(), 2).to_text(), "81/2*t^3*x^9 + 25/2*t^2*x^5 + 9/2*x^3 + 1/2*x");
        for n in 0..6 {
            let f = factorial(n);
            let sign = if n % 2 == 0 { 1 } else { -1 };
            let p = v_n(&unknot(), n);
            assert_eq!(p.coeff(0, 1), Rational::new(1.into(), f.clone()));
            assert_eq!(p.coeff(0, -1), Rational::new(sign.into(), f));
        }
    }

    #[test]
    fn vassiliev_values() {
        assert_eq!(vassiliev_value(&v_n(&trefoil(), 2)), r(-23, 1));
        assert_eq!(vassiliev_value(&v_n(&unknot(), 3)), r(0, 1));
    }

    #[test]
    fn extremal_terms() {
        let e = extremal_term(&v_n(&trefoil(), 5)).unwrap();
        assert_eq!(e.j_min, 1);
        assert_eq!(e.coeff, BTreeMap::from([(0, r(1, 120))]));
        let e = extremal_term(&v_n(&unknot(), 3)).unwrap();
        assert_eq!((e.j_min, e.coeff[&0].clone()), (-1, r(-1, 6)));
        assert_eq!(extremal_term(&VnPoly::zero(2)), Err(ExpansionError::EmptyPolynomial));
        assert_eq!(e.to_string(), "x^-1: -1/6");
    }

    #[test]
    fn extremal_witness() {
        let m = 2;
        let r = ranks(&[((-4, -9), 1), ((0, 1), 1), ((0, -1), 1)]);
        assert!(has_extremal_witness(&r, m));
        assert!(!has_extremal_witness(&r, 3));
        let r2 = ranks(&[((-4, -9), 2)]);
        assert!(!has_extremal_witness(&r2, m));
    }

    #[test]
    fn series_route_small_cases() {
        let kh = KhPoly::parse("q + q^-1").unwrap();
        let rows = series_reconstruct(&kh, 2);
        let texts: Vec<String> = rows.iter().map(|p| p.to_text()).collect();
        assert_eq!(texts, ["x + x^-1", "x - x^-1", "1/2*x + 1/2*x^-1"]);
        let p = KhPoly::parse("q^-5*t^-2 + q*t").unwrap();
        assert_eq!(series_reconstruct(&p, 0)[0].to_text(), "t*x + t^-2*x^-5");
    }

    #[test]
    fn text_order_and_parse() {
        let p =
            VnPoly::parse("1/6*x + 125/6*t^2*x^5 - 125/6*t^-2*x^-5 + 1/6*t*x - 1/6*x^-1 - 1/6*t^-1*x^-1", 3).unwrap();
        assert_eq!(p.to_text(), "125/6*t^2*x^5 + 1/6*t*x + 1/6*x - 1/6*x^-1 - 1/6*t^-1*x^-1 - 125/6*t^-2*x^-5");
        assert_eq!(VnPoly::parse(&p.to_text(), 3).unwrap(), p);
        assert_eq!(p.to_latex().split(" + ").next(), Some("\\frac{125}{6} t^{2} x^{5}"));
    }

    #[test]
    fn json_round_trip() {
        let p = v_n(&trefoil(), 4);
        let json = p.to_json();
        assert_eq!(json.terms.first().map(|t| t.x), Some(1));
        assert_eq!(VnPoly::from_json(&json).unwrap(), p);
        let bad = VnJson { order: 0, terms: vec![VnTerm { t: 0, x: 0, num: "1".into(), den: "0".into() }] };
        assert!(VnPoly::from_json(&bad).is_err());
    }

    #[test]
    fn birman_lin_examples() {
        let one = NormalizedJones::from_doubled_terms([(0, 1)]);
        assert_eq!(birman_lin(&one, 3).coeffs(), &[r(1, 1), r(0, 1), r(0, 1), r(0, 1)]);
        let trefoil = NormalizedJones::from_doubled_terms([(2, 1), (6, 1), (8, -1)]);
        let u = birman_lin(&trefoil, 2);
        assert_eq!(u.coeffs(), &[r(1, 1), r(0, 1), r(-3, 1)]);
        let fig8 = NormalizedJones::from_doubled_terms([(-4, 1), (-2, -1), (0, 1), (2, -1), (4, 1)]);
        assert_eq!(birman_lin(&fig8, 2).coeffs(), &[r(1, 1), r(0, 1), r(3, 1)]);
    }

    #[test]
    fn jones_taylor_matches_closed_form() {
        let j = JonesPoly::from_terms([(1, 1), (3, 1), (5, 1), (9, -1)]);
        let t = jones_taylor(&j, 2);
        assert_eq!(t, vec![r(2, 1), r(0, 1), r(-23, 1)]);
    }
}
