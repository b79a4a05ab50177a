//! The Khovanov polynomial, the Jones polynomial it specializes to, and the
//! Kauffman-bracket state sum used as an independent Jones oracle.
//!
//! Conventions: `⟨O⟩ = δ = −A² − A⁻²`, the framing factor is `(−A³)^{−w}`,
//! and `q = −A⁻²`. This gives the unnormalized Jones polynomial
//! `J(unknot) = q + q⁻¹`, which coincides with `Kh(−1, q)`. The normalized
//! `V(r)` satisfies `J(q) = (q + q⁻¹)·V(q²)` with `q = −r^{1/2}`; it is stored
//! with doubled exponents so that half-integer powers of `r` stay integral.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::Diagram;
use crate::homology::BigradedRanks;
use crate::laurent::LPoly;
use crate::statecube::{resolve, state_count, State};
use crate::text::{self, TextError};
use crate::Rational;

/// Crossing budget for the bracket state sum.
pub const MAX_BRACKET_CROSSINGS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JonesError {
    #[error("diagram has {crossings} crossings; at most {max} are supported")]
    TooLarge { crossings: usize, max: usize },
    #[error("inexact division while normalizing: {0}")]
    InexactDivision(String),
}

/// `Σ t^i q^j rank H^{i,j}`, keyed by `(i, j)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct KhPoly(BTreeMap<(i64, i64), u64>);

impl KhPoly {
    pub fn coeff(&self, i: i64, j: i64) -> u64 {
        self.0.get(&(i, j)).copied().unwrap_or(0)
    }

    /// `((i, j), coefficient)` ascending in `(i, j)`.
    pub fn terms(&self) -> impl Iterator<Item = ((i64, i64), u64)> + '_ {
        self.0.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_ranks(&self) -> BigradedRanks {
        self.terms().collect()
    }

    /// Canonical text: terms ascending by `(t, q)` exponents, written `q^j*t^i`.
    pub fn to_text(&self) -> String {
        let terms: Vec<(Vec<i64>, Rational)> =
            self.terms().map(|((i, j), c)| (vec![j, i], Rational::from_integer(c.into()))).collect();
        text::format_terms(terms.iter().map(|(e, c)| (e.as_slice(), c)), &["q", "t"])
    }

    pub fn to_latex(&self) -> String {
        let mut terms: Vec<(Vec<i64>, Rational)> =
            self.terms().map(|((i, j), c)| (vec![j, i], Rational::from_integer(c.into()))).collect();
        terms.reverse();
        text::latex_terms(terms.iter().map(|(e, c)| (e.as_slice(), c)), &["q", "t"])
    }

    /// Parses the canonical text (any term order). Coefficients must be
    /// nonnegative integers.
    pub fn parse(s: &str) -> Result<KhPoly, TextError> {
        let map = text::parse_terms(s, &["q", "t"])?;
        let mut out = BTreeMap::new();
        for (e, c) in map {
            let bad = || TextError { pos: 0, msg: format!("coefficient {c} is not a nonnegative integer") };
            if !c.is_integer() {
                return Err(bad());
            }
            let v: u64 = c.numer().try_into().map_err(|_| bad())?;
            out.insert((e[1], e[0]), v);
        }
        Ok(KhPoly(out))
    }

    pub fn to_json(&self) -> Vec<KhTerm> {
        self.terms().map(|((t, q), coeff)| KhTerm { t, q, coeff }).collect()
    }

    pub fn from_json(terms: &[KhTerm]) -> KhPoly {
        let mut out = BTreeMap::new();
        for term in terms.iter().filter(|x| x.coeff != 0) {
            *out.entry((term.t, term.q)).or_insert(0) += term.coeff;
        }
        KhPoly(out)
    }
}

impl fmt::Display for KhPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KhTerm {
    pub t: i64,
    pub q: i64,
    pub coeff: u64,
}

/// The generating function of a rank table.
pub fn khovanov_polynomial(r: &BigradedRanks) -> KhPoly {
    KhPoly(r.iter().collect())
}

/// Unnormalized Jones polynomial `J(q)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct JonesPoly(LPoly);

impl JonesPoly {
    pub fn new(p: LPoly) -> JonesPoly {
        JonesPoly(p)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> JonesPoly {
        JonesPoly(LPoly::from_terms(terms))
    }

    pub fn unknot() -> JonesPoly {
        JonesPoly::from_terms([(-1, 1), (1, 1)])
    }

    pub fn poly(&self) -> &LPoly {
        &self.0
    }

    pub fn coeff(&self, e: i64) -> i64 {
        self.0.coeff(e)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.0.terms()
    }

    /// `J` with `q ↦ q⁻¹`, the Jones polynomial of the mirror image.
    pub fn mirrored(&self) -> JonesPoly {
        JonesPoly(self.0.substitute_power(-1))
    }

    /// `V(r) = J(q)/(q + q⁻¹)` evaluated at `q = −r^{1/2}`.
    pub fn normalized(&self) -> Result<NormalizedJones, JonesError> {
        let w = self
            .0
            .div_exact(JonesPoly::unknot().poly())
            .ok_or_else(|| JonesError::InexactDivision(format!("{self} is not divisible by q + q^-1")))?;
        // c·q^k ↦ c·(−1)^k·r^{k/2}; doubled exponent k
        Ok(NormalizedJones(LPoly::from_terms(w.terms().map(|(k, c)| (k, if k % 2 == 0 { c } else { -c })))))
    }

    pub fn to_text(&self) -> String {
        let terms: Vec<(Vec<i64>, Rational)> =
            self.terms().map(|(e, c)| (vec![e], Rational::from_integer(c.into()))).collect();
        text::format_terms(terms.iter().map(|(e, c)| (e.as_slice(), c)), &["q"])
    }

    pub fn parse(s: &str) -> Result<JonesPoly, TextError> {
        let map = text::parse_terms(s, &["q"])?;
        let mut terms = Vec::new();
        for (e, c) in map {
            let v: i64 = if c.is_integer() { c.numer().try_into().ok() } else { None }
                .ok_or_else(|| TextError { pos: 0, msg: format!("coefficient {c} is not an integer") })?;
            terms.push((e[0], v));
        }
        Ok(JonesPoly::from_terms(terms))
    }
}

impl fmt::Display for JonesPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Normalized Jones polynomial `V(r)`; exponent `k` stands for `r^{k/2}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NormalizedJones(LPoly);

impl NormalizedJones {
    pub fn from_doubled_terms(terms: impl IntoIterator<Item = (i64, i64)>) -> NormalizedJones {
        NormalizedJones(LPoly::from_terms(terms))
    }

    pub fn poly(&self) -> &LPoly {
        &self.0
    }

    /// `(doubled exponent, coefficient)` ascending.
    pub fn doubled_terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.0.terms()
    }

    /// Back to `J(q) = (q + q⁻¹)·V` with `r^{1/2} = −q`.
    pub fn unnormalized(&self) -> JonesPoly {
        let w = LPoly::from_terms(self.0.terms().map(|(k, c)| (k, if k % 2 == 0 { c } else { -c })));
        JonesPoly(&w * JonesPoly::unknot().poly())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.0.terms() {
            let mono = match (k % 2 == 0, k / 2) {
                (true, 0) => String::new(),
                (true, 1) => "r".into(),
                (true, e) => format!("r^{e}"),
                (false, _) => format!("r^({k}/2)"),
            };
            let a = c.abs();
            let body = match (a == 1, mono.is_empty()) {
                (_, true) => a.to_string(),
                (true, false) => mono,
                (false, false) => format!("{a}*{mono}"),
            };
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for NormalizedJones {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Kauffman bracket `⟨D⟩ ∈ ℤ[A, A⁻¹]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BracketPoly(LPoly);

impl BracketPoly {
    pub fn poly(&self) -> &LPoly {
        &self.0
    }

    pub fn coeff(&self, e: i64) -> i64 {
        self.0.coeff(e)
    }
}

/// Substitutes `t = −1`: `J(q) = Σ (−1)^i q^j rank`.
pub fn jones_from_kh(p: &KhPoly) -> JonesPoly {
    JonesPoly::from_terms(p.terms().map(|((i, j), c)| (j, if i % 2 == 0 { c as i64 } else { -(c as i64) })))
}

fn delta() -> LPoly {
    LPoly::from_terms([(2, -1), (-2, -1)])
}

/// `Σ_s A^{σ(s)} δ^{#circles(s)}`.
pub fn kauffman_bracket(d: &Diagram) -> Result<BracketPoly, JonesError> {
    let n = d.n_crossings();
    if n > MAX_BRACKET_CROSSINGS {
        return Err(JonesError::TooLarge { crossings: n, max: MAX_BRACKET_CROSSINGS });
    }
    let counts = (0..state_count(d))
        .into_par_iter()
        .fold(BTreeMap::new, |mut acc: BTreeMap<(i64, usize), i64>, b| {
            let s = State::from_bits(b, n);
            *acc.entry((s.sigma(), resolve(d, s).count())).or_insert(0) += 1;
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    let delta = delta();
    let mut powers = vec![LPoly::one()];
    let mut total = LPoly::zero();
    for ((sigma, circles), count) in counts {
        while powers.len() <= circles {
            let next = powers.last().expect("nonempty") * &delta;
            powers.push(next);
        }
        total = &total + &powers[circles].shift(sigma).scale(count);
    }
    Ok(BracketPoly(total))
}

/// Framing-normalized bracket, rewritten in `q = −A⁻²`.
pub fn jones_from_bracket(d: &Diagram) -> Result<JonesPoly, JonesError> {
    let bracket = kauffman_bracket(d)?;
    let w = d.writhe();
    let framed = bracket.0.shift(-3 * w).scale(if w % 2 == 0 { 1 } else { -1 });
    let mut terms = Vec::new();
    for (m, c) in framed.terms() {
        if m % 2 != 0 {
            return Err(JonesError::InexactDivision(format!("odd A-exponent {m} after framing correction")));
        }
        // A^m = (A^-2)^{-m/2} = (−q)^{-m/2}
        let e = -m / 2;
        terms.push((e, if e % 2 == 0 { c } else { -c }));
    }
    Ok(JonesPoly::from_terms(terms))
}

/// `q⁻² J₊ − q² J₋ = (q⁻¹ − q) J₀`, tested exactly.
pub fn check_skein_triple(plus: &JonesPoly, minus: &JonesPoly, zero: &JonesPoly) -> bool {
    let lhs = &plus.0.shift(-2) - &minus.0.shift(2);
    let rhs = &LPoly::from_terms([(-1, 1), (1, -1)]) * &zero.0;
    lhs == rhs
}

/// `r⁻¹ V₊ − r V₋ = (r^{1/2} − r^{−1/2}) V₀` in doubled exponents.
pub fn check_skein_triple_normalized(plus: &NormalizedJones, minus: &NormalizedJones, zero: &NormalizedJones) -> bool {
    let lhs = &plus.0.shift(-2) - &minus.0.shift(2);
    let rhs = &LPoly::from_terms([(1, 1), (-1, -1)]) * &zero.0;
    lhs == rhs
}

impl From<&BigradedRanks> for KhPoly {
    fn from(r: &BigradedRanks) -> KhPoly {
        khovanov_polynomial(r)
    }
}

/// Evaluates `J` at `q = 1`, i.e. `2^{#components}` for links.
pub fn jones_at_one(j: &JonesPoly) -> i64 {
    j.terms().map(|(_, c)| c).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    const RIGHT_TREFOIL: &str = "X(4,2,5,1) X(6,4,1,3) X(2,6,3,5)";

    fn jq(terms: &[(i64, i64)]) -> JonesPoly {
        JonesPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn kh_text_is_canonical() {
        let p = KhPoly::parse("q^5*t^2 + q^-5*t^-2 + q*t + q^-1*t^-1 + q + q^-1").unwrap();
        assert_eq!(p.to_text(), "q^-5*t^-2 + q^-1*t^-1 + q^-1 + q + q*t + q^5*t^2");
        assert_eq!(KhPoly::parse(&p.to_text()).unwrap(), p);
        assert!(KhPoly::parse("-q").is_err());
        assert!(KhPoly::parse("1/2*q").is_err());
        assert_eq!(KhPoly::default().to_text(), "0");
    }

    #[test]
    fn khovanov_polynomial_of_ranks() {
        let r: BigradedRanks = [((0, 1), 1), ((0, -1), 1)].into_iter().collect();
        assert_eq!(khovanov_polynomial(&r).to_text(), "q^-1 + q");
        assert!(khovanov_polynomial(&BigradedRanks::new()).is_zero());
        let r3: BigradedRanks = [((0, 1), 1), ((0, 3), 1), ((2, 5), 1), ((3, 9), 1)].into_iter().collect();
        let p = khovanov_polynomial(&r3);
        assert_eq!(p.to_text(), "q + q^3 + q^5*t^2 + q^9*t^3");
        assert_eq!(p.to_ranks(), r3);
    }

    #[test]
    fn jones_from_kh_examples() {
        let unknot = KhPoly::parse("q + q^-1").unwrap();
        assert_eq!(jones_from_kh(&unknot), JonesPoly::unknot());
        let fig8 = KhPoly::parse("q^-5*t^-2 + q^-1*t^-1 + q^-1 + q + q*t + q^5*t^2").unwrap();
        assert_eq!(jones_from_kh(&fig8), jq(&[(-5, 1), (5, 1)]));
        let trefoil = KhPoly::parse("q + q^3 + q^5*t^2 + q^9*t^3").unwrap();
        assert_eq!(jones_from_kh(&trefoil), jq(&[(1, 1), (3, 1), (5, 1), (9, -1)]));
    }

    #[test]
    fn bracket_examples() {
        let unknot = kauffman_bracket(&Diagram::unknot()).unwrap();
        assert_eq!(unknot.poly(), &delta());
        let kink = kauffman_bracket(&parse_pd("X(1,1,2,2)").unwrap()).unwrap();
        assert_eq!(kink.poly(), &(&LPoly::monomial(-1, 3) * &delta()));
        // brute force over the 8 states of the trefoil
        let d = parse_pd(RIGHT_TREFOIL).unwrap();
        let b = kauffman_bracket(&d).unwrap();
        assert_eq!(b.poly(), &LPoly::from_terms([(7, 1), (3, 1), (-1, 1), (-9, -1)]));
    }

    #[test]
    fn jones_from_bracket_examples() {
        assert_eq!(jones_from_bracket(&Diagram::unknot()).unwrap(), JonesPoly::unknot());
        assert_eq!(JonesPoly::unknot().normalized().unwrap(), NormalizedJones::from_doubled_terms([(0, 1)]));
        for kink in ["X(1,1,2,2)", "X(1,2,2,1)"] {
            assert_eq!(jones_from_bracket(&parse_pd(kink).unwrap()).unwrap(), JonesPoly::unknot());
        }
        let j = jones_from_bracket(&parse_pd(RIGHT_TREFOIL).unwrap()).unwrap();
        assert_eq!(j, jq(&[(1, 1), (3, 1), (5, 1), (9, -1)]));
        let v = j.normalized().unwrap();
        assert_eq!(v.to_text(), "r + r^3 - r^4");
        assert_eq!(v.unnormalized(), j);
    }

    #[test]
    fn normalization_must_divide() {
        assert!(matches!(jq(&[(0, 1)]).normalized(), Err(JonesError::InexactDivision(_))));
    }

    #[test]
    fn hopf_link_normalized_has_half_powers() {
        let hopf = parse_pd("X(3,2,4,1) X(2,3,1,4)").unwrap();
        let j = jones_from_bracket(&hopf).unwrap();
        assert_eq!(j, jq(&[(0, 1), (2, 1), (4, 1), (6, 1)]));
        let v = j.normalized().unwrap();
        assert_eq!(v.to_text(), "-r^(1/2) - r^(5/2)");
    }

    #[test]
    fn skein_triples() {
        let trefoil = jq(&[(1, 1), (3, 1), (5, 1), (9, -1)]);
        let unknot = JonesPoly::unknot();
        let hopf = jq(&[(0, 1), (2, 1), (4, 1), (6, 1)]);
        assert!(check_skein_triple(&trefoil, &unknot, &hopf));
        assert!(!check_skein_triple(&unknot, &trefoil, &hopf));
        let unlink = JonesPoly::new(unknot.poly() * unknot.poly());
        assert!(check_skein_triple(&unknot, &unknot, &unlink));
        let (vt, vu, vh) = (trefoil.normalized().unwrap(), unknot.normalized().unwrap(), hopf.normalized().unwrap());
        assert!(check_skein_triple_normalized(&vt, &vu, &vh));
        assert!(!check_skein_triple_normalized(&vu, &vt, &vh));
    }

    #[test]
    fn mirror_substitution() {
        let d = parse_pd(RIGHT_TREFOIL).unwrap();
        let j = jones_from_bracket(&d).unwrap();
        assert_eq!(jones_from_bracket(&d.mirror()).unwrap(), j.mirrored());
        assert_eq!(jones_at_one(&j), 2);
    }

    #[test]
    fn json_terms_round_trip() {
        let p = KhPoly::parse("q^-5*t^-2 + 2*q^-1 + q*t").unwrap();
        assert_eq!(KhPoly::from_json(&p.to_json()), p);
    }
}
