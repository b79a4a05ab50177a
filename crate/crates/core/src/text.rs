//! Plain-text term lists shared by the polynomial types.
//!
//! A term list is a sum of monomials with exact rational coefficients:
//!
//! ```text
//! 81/2*t^3*x^9 + 25/2*t^2*x^5 - t^-2*x^-5 + 3
//! ```
//!
//! Unit coefficients are omitted, exponents may be negative, the zero
//! polynomial is written `0`. Term order is the caller's business; parsing
//! accepts any order and adds up repeated monomials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad polynomial text at byte {pos}: {msg}")]
pub struct TextError {
    pub pos: usize,
    pub msg: String,
}

fn monomial(exps: &[i64], vars: &[&str]) -> String {
    vars.iter()
        .zip(exps)
        .filter(|(_, &e)| e != 0)
        .map(|(v, &e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

/// Formats already-ordered terms.
pub fn format_terms<'a>(terms: impl IntoIterator<Item = (&'a [i64], &'a Rational)>, vars: &[&str]) -> String {
    let mut out = String::new();
    for (exps, c) in terms {
        if c.is_zero() {
            continue;
        }
        let mono = monomial(exps, vars);
        let a = c.abs();
        let coeff = if a.is_one() && !mono.is_empty() { String::new() } else { a.to_string() };
        let body = match (coeff.is_empty(), mono.is_empty()) {
            (true, _) => mono,
            (false, true) => coeff,
            (false, false) => format!("{coeff}*{mono}"),
        };
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// LaTeX rendering of already-ordered terms, e.g. `\frac{81}{2} t^{3} x^{9}`.
pub fn latex_terms<'a>(terms: impl IntoIterator<Item = (&'a [i64], &'a Rational)>, vars: &[&str]) -> String {
    let mut out = String::new();
    for (exps, c) in terms {
        if c.is_zero() {
            continue;
        }
        let mono: Vec<String> = vars
            .iter()
            .zip(exps)
            .filter(|(_, &e)| e != 0)
            .map(|(v, &e)| if e == 1 { v.to_string() } else { format!("{v}^{{{e}}}") })
            .collect();
        let a = c.abs();
        let coeff = if a.is_integer() {
            if a.is_one() && !mono.is_empty() {
                String::new()
            } else {
                a.numer().to_string()
            }
        } else {
            format!("\\frac{{{}}}{{{}}}", a.numer(), a.denom())
        };
        let body = std::iter::once(coeff).filter(|s| !s.is_empty()).chain(mono).collect::<Vec<_>>().join(" ");
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
    fn skip_ws(&mut self) {
        while self.s.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> TextError {
        TextError { pos: self.pos, msg: msg.into() }
    }

    fn digits(&mut self) -> Result<BigInt, TextError> {
        self.skip_ws();
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        Ok(text.parse().expect("digit string"))
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(u8::is_ascii_alphabetic) {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()
    }
}

/// Parses a term list over the given variables into a monomial → coefficient map.
pub fn parse_terms(text: &str, vars: &[&str]) -> Result<BTreeMap<Vec<i64>, Rational>, TextError> {
    let mut lx = Lexer { s: text.as_bytes(), pos: 0 };
    let mut out: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
    if lx.peek().is_none() {
        return Err(lx.err("empty polynomial"));
    }
    let mut first = true;
    loop {
        let negative = match lx.peek() {
            Some(b'+') if !first => {
                lx.pos += 1;
                false
            }
            Some(b'-') => {
                lx.pos += 1;
                true
            }
            _ if first => false,
            Some(c) => return Err(lx.err(format!("expected '+' or '-', found {:?}", c as char))),
            None => break,
        };
        first = false;

        let mut coeff: Option<Rational> = None;
        let mut exps = vec![0i64; vars.len()];
        loop {
            match lx.peek() {
                Some(c) if c.is_ascii_digit() => {
                    if coeff.is_some() {
                        return Err(lx.err("more than one numeric factor"));
                    }
                    let num = lx.digits()?;
                    let den = if lx.peek() == Some(b'/') {
                        lx.pos += 1;
                        lx.digits()?
                    } else {
                        BigInt::one()
                    };
                    if den.is_zero() {
                        return Err(lx.err("zero denominator"));
                    }
                    coeff = Some(Rational::new(num, den));
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let at = lx.pos;
                    let name = lx.ident();
                    let Some(k) = vars.iter().position(|v| *v == name) else {
                        return Err(TextError { pos: at, msg: format!("unknown variable {name:?}") });
                    };
                    let e = if lx.peek() == Some(b'^') {
                        lx.pos += 1;
                        let neg = lx.peek() == Some(b'-');
                        if neg {
                            lx.pos += 1;
                        }
                        let d = lx.digits()?;
                        let d: i64 = d.try_into().map_err(|_| lx.err("exponent out of range"))?;
                        if neg {
                            -d
                        } else {
                            d
                        }
                    } else {
                        1
                    };
                    exps[k] += e;
                }
                Some(c) => return Err(lx.err(format!("unexpected {:?}", c as char))),
                None => return Err(lx.err("unexpected end of input")),
            }
            if lx.peek() == Some(b'*') {
                lx.pos += 1;
            } else {
                break;
            }
        }
        let mut c = coeff.unwrap_or_else(Rational::one);
        if negative {
            c = -c;
        }
        let slot = out.entry(exps.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            out.remove(&exps);
        }
        if lx.peek().is_none() {
            break;
        }
    }
    Ok(out)
}
