//! Parser for series written as `x^(4/3)+x^2-3/2*x^(7/5)+O(x^(5))`.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! series := ["+"|"-"] item (("+"|"-") item)*
//! item   := coef | [coef "*"] "x" ["^" exp] | "O(" ("1" | "x" ["^" exp]) ")"
//! coef   := digits ["/" digits]
//! exp    := digits | "(" digits ["/" digits] ")"
//! ```
//!
//! The working denominator is the lcm of all exponent denominators.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{PuiseuxError, PuiseuxSeries};
use crate::num::parse_q;

fn fail(input: &str, reason: impl Into<String>) -> PuiseuxError {
    PuiseuxError::Parse { input: input.to_string(), reason: reason.into() }
}

fn parse_nonneg_q(s: &str) -> Option<BigRational> {
    if s.starts_with(['-', '+']) {
        return None;
    }
    parse_q(s).ok()
}

fn parse_exponent(s: &str) -> Option<BigRational> {
    match s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        Some(inner) => parse_nonneg_q(inner),
        None if !s.contains('/') => parse_nonneg_q(s),
        None => None,
    }
}

/// Parses `x`, `x^e` or an empty string (exponent zero).
fn parse_power(s: &str) -> Option<BigRational> {
    if s.is_empty() {
        return Some(BigRational::zero());
    }
    let rest = s.strip_prefix('x')?;
    if rest.is_empty() {
        return Some(BigRational::from_integer(1.into()));
    }
    parse_exponent(rest.strip_prefix('^')?)
}

enum Item {
    Term(BigRational, BigRational),
    Big(BigRational),
}

fn parse_item(s: &str) -> Option<Item> {
    if let Some(inner) = s.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
        if inner == "1" {
            return Some(Item::Big(BigRational::zero()));
        }
        return parse_power(inner).filter(|_| !inner.is_empty()).map(Item::Big);
    }
    if let Some(pos) = s.find('x') {
        let (coef, power) = s.split_at(pos);
        let c = match coef {
            "" => BigRational::from_integer(1.into()),
            _ => parse_nonneg_q(coef.strip_suffix('*')?)?,
        };
        return Some(Item::Term(c, parse_power(power)?));
    }
    Some(Item::Term(parse_nonneg_q(s)?, BigRational::zero()))
}

/// Splits at top-level `+`/`-`, keeping each sign with its item.
fn split_signed(s: &str) -> Option<Vec<(bool, &str)>> {
    let mut items = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut negative = false;
    for (pos, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return None;
                }
            }
            '+' | '-' if depth == 0 => {
                if pos > 0 {
                    items.push((negative, &s[start..pos]));
                } else if s.len() == 1 {
                    return None;
                }
                negative = ch == '-';
                start = pos + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return None;
    }
    items.push((negative, &s[start..]));
    Some(items)
}

impl FromStr for PuiseuxSeries {
    type Err = PuiseuxError;

    fn from_str(input: &str) -> Result<Self, PuiseuxError> {
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(fail(input, "empty input"));
        }
        if compact == "0" {
            return Ok(PuiseuxSeries::zero());
        }
        let items = split_signed(&compact).ok_or_else(|| fail(input, "unbalanced parentheses or dangling sign"))?;
        let mut terms: Vec<(BigRational, BigRational)> = Vec::new();
        let mut big_o: Option<BigRational> = None;
        for (negative, text) in items {
            if text.is_empty() {
                return Err(fail(input, "empty term"));
            }
            match parse_item(text).ok_or_else(|| fail(input, format!("cannot read term {text:?}")))? {
                Item::Term(c, e) => terms.push((if negative { -c } else { c }, e)),
                Item::Big(e) => {
                    if negative {
                        return Err(fail(input, "O-term cannot be negated"));
                    }
                    if big_o.replace(e).is_some() {
                        return Err(fail(input, "more than one O-term"));
                    }
                }
            }
        }
        let denom = terms
            .iter()
            .map(|(_, e)| e.denom())
            .chain(big_o.as_ref().map(|e| e.denom()))
            .fold(BigInt::from(1), |acc, d| acc.lcm(d));
        let too_big = || fail(input, "exponent out of range");
        let denom_u = denom.to_u64().ok_or_else(too_big)?;
        let numerator = |e: &BigRational| -> Result<u64, PuiseuxError> {
            (e * BigRational::from_integer(denom.clone())).to_integer().to_u64().ok_or_else(too_big)
        };
        let mut out = Vec::with_capacity(terms.len());
        for (c, e) in &terms {
            out.push((numerator(e)?, c.clone()));
        }
        let trunc = big_o.as_ref().map(numerator).transpose()?;
        PuiseuxSeries::new(denom_u, out, trunc)
    }
}
