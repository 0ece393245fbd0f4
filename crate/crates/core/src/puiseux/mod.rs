//! Truncated Puiseux series and sparse bivariate polynomials over ℚ.
//!
//! A [`PuiseuxSeries`] stores `Σ a_i x^{i/n}` for a working denominator `n`,
//! optionally known only for numerators `i < T` (the truncation bound).
//! A [`BivariatePoly`] stores `Σ a_{ij} x^i y^j`, optionally known only for
//! `i < T`. Every operation propagates these bounds so that a result is
//! never claimed beyond what the inputs determine.

mod minpoly;
mod parse;
mod poly;
pub mod unity;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::charclass::CharSequence;
use crate::num::fmt_q;

pub use poly::{BivariatePoly, ObservedDiagram};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PuiseuxError {
    #[error("the working denominator must be positive")]
    InvalidDenominator,
    #[error("series has index {index} but denominator {denom}; reduce it first")]
    IndexMismatch { index: u64, denom: u64 },
    #[error("the known terms do not determine the result; raise the truncation bound")]
    TruncationTooShort,
    #[error("series order {0} is below 1")]
    OrderBelowOne(String),
    #[error("series has index 1 and therefore defines a smooth branch")]
    NotSingular,
    #[error("cannot parse Puiseux series {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("derivative order {k} exceeds the y-degree {degree}")]
    OrderExceedsDegree { k: u64, degree: i64 },
    #[error("substituting x^{n_sub} into a series of denominator {denom} leaves fractional exponents")]
    NonIntegralSubstitution { n_sub: u64, denom: u64 },
    #[error("the polynomial is zero")]
    ZeroPolynomial,
    #[error("{0} is not a compact edge of the Newton polygon")]
    EdgeNotOnPolygon(String),
    #[error("polynomial coefficients must be finite rationals: {0}")]
    InvalidPolynomial(String),
}

/// Order of a series: a value, `+∞` for the true zero series, or a lower
/// bound when every known term vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Order {
    Finite(BigRational),
    Infinite,
    AtLeast(BigRational),
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(q) => write!(f, "{}", fmt_q(q)),
            Order::Infinite => write!(f, "inf"),
            Order::AtLeast(q) => write!(f, ">={}", fmt_q(q)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PuiseuxSeries {
    denom: u64,
    terms: BTreeMap<u64, BigRational>,
    trunc: Option<u64>,
}

fn min_bound(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl PuiseuxSeries {
    /// Series `Σ a_i x^{i/denom}`. Repeated numerators are summed, zero
    /// coefficients and terms at or beyond `trunc` are dropped.
    pub fn new<I>(denom: u64, terms: I, trunc: Option<u64>) -> Result<Self, PuiseuxError>
    where
        I: IntoIterator<Item = (u64, BigRational)>,
    {
        if denom == 0 {
            return Err(PuiseuxError::InvalidDenominator);
        }
        let mut map: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (i, a) in terms {
            if trunc.is_some_and(|t| i >= t) {
                continue;
            }
            *map.entry(i).or_insert_with(BigRational::zero) += a;
        }
        map.retain(|_, a| !a.is_zero());
        Ok(PuiseuxSeries { denom, terms: map, trunc })
    }

    /// Exact series from integer coefficients, for tests and witnesses.
    pub fn from_int_terms(denom: u64, terms: &[(u64, i64)]) -> Self {
        Self::new(denom, terms.iter().map(|&(i, a)| (i, BigRational::from_integer(a.into()))), None)
            .expect("positive denominator")
    }

    pub fn zero() -> Self {
        PuiseuxSeries { denom: 1, terms: BTreeMap::new(), trunc: None }
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    /// Nonzero terms `(i, a_i)` in increasing exponent order.
    pub fn terms(&self) -> &BTreeMap<u64, BigRational> {
        &self.terms
    }

    pub fn trunc(&self) -> Option<u64> {
        self.trunc
    }

    /// The exponent `T/n` from which the series is unknown.
    pub fn trunc_exponent(&self) -> Option<BigRational> {
        self.trunc.map(|t| BigRational::new(t.into(), self.denom.into()))
    }

    pub fn coeff(&self, i: u64) -> BigRational {
        self.terms.get(&i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    fn exponent(&self, i: u64) -> BigRational {
        BigRational::new(i.into(), self.denom.into())
    }

    pub fn ord(&self) -> Order {
        match (self.terms.keys().next(), self.trunc) {
            (Some(&i), _) => Order::Finite(self.exponent(i)),
            (None, None) => Order::Infinite,
            (None, Some(t)) => Order::AtLeast(self.exponent(t)),
        }
    }

    /// The same series over the denominator `new_denom`, a multiple of the
    /// current one.
    pub fn rescale(&self, new_denom: u64) -> Self {
        assert!(new_denom.is_multiple_of(self.denom), "{new_denom} is not a multiple of {}", self.denom);
        let f = new_denom / self.denom;
        PuiseuxSeries {
            denom: new_denom,
            terms: self.terms.iter().map(|(&i, a)| (i * f, a.clone())).collect(),
            trunc: self.trunc.map(|t| t * f),
        }
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        let d = self.denom.lcm(&other.denom);
        (self.rescale(d), other.rescale(d))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let trunc = min_bound(a.trunc, b.trunc);
        Self::new(a.denom, a.terms.into_iter().chain(b.terms), trunc).expect("positive denominator")
    }

    pub fn neg(&self) -> Self {
        PuiseuxSeries {
            denom: self.denom,
            terms: self.terms.iter().map(|(&i, a)| (i, -a)).collect(),
            trunc: self.trunc,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.denom, self.terms.iter().map(|(&i, a)| (i, a * c)), self.trunc).expect("positive denominator")
    }

    /// Product of two series with nonnegative exponents. The result is
    /// known below the smaller of `T_a + ord(b)` and `T_b + ord(a)`.
    pub fn mul(&self, other: &Self) -> Self {
        let (a, b) = self.common(other);
        let bound_from = |t: Option<u64>, other: &Self| {
            t.map(|t| t + other.terms.keys().next().copied().or(other.trunc).unwrap_or(0))
        };
        let trunc = match (a.is_zero_exact(), b.is_zero_exact()) {
            (true, _) | (_, true) => None,
            _ => min_bound(bound_from(a.trunc, &b), bound_from(b.trunc, &a)),
        };
        let mut out: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (&i, x) in &a.terms {
            for (&j, y) in &b.terms {
                if trunc.is_some_and(|t| i + j >= t) {
                    break;
                }
                *out.entry(i + j).or_insert_with(BigRational::zero) += x * y;
            }
        }
        Self::new(a.denom, out, trunc).expect("positive denominator")
    }

    fn is_zero_exact(&self) -> bool {
        self.terms.is_empty() && self.trunc.is_none()
    }

    /// `ord(a - b)`: the contact of the two series.
    pub fn contact(&self, other: &Self) -> Order {
        self.sub(other).ord()
    }

    /// Smallest `n'` such that every known exponent lies in `(1/n')ℤ`.
    pub fn index(&self) -> u64 {
        let g = self.terms.keys().fold(self.denom, |g, &i| g.gcd(&i));
        self.denom / g
    }

    /// The series over its index. A truncation bound that is not a multiple
    /// of the reduction factor is rounded up, which keeps exactly the same
    /// set of known numerators.
    pub fn reduce(&self) -> Self {
        let g = self.denom / self.index();
        PuiseuxSeries {
            denom: self.denom / g,
            terms: self.terms.iter().map(|(&i, a)| (i / g, a.clone())).collect(),
            trunc: self.trunc.map(|t| t.div_ceil(g)),
        }
    }

    /// Characteristic `(b₀,…,b_h)` of the branch with this Newton–Puiseux
    /// root: `b₀` is the index and `b_{k+1}` the first numerator not
    /// divisible by `e_k = gcd(b₀,…,b_k)`.
    pub fn characteristic_of(&self) -> Result<CharSequence, PuiseuxError> {
        let index = self.index();
        if index != self.denom {
            return Err(PuiseuxError::IndexMismatch { index, denom: self.denom });
        }
        if let Some(&i) = self.terms.keys().next() {
            if i < self.denom {
                return Err(PuiseuxError::OrderBelowOne(fmt_q(&self.exponent(i))));
            }
        }
        if self.denom == 1 {
            return Err(PuiseuxError::NotSingular);
        }
        let mut b = vec![BigInt::from(self.denom)];
        let mut e = self.denom;
        for &i in self.terms.keys() {
            let g = e.gcd(&i);
            if g < e {
                b.push(BigInt::from(i));
                e = g;
                if e == 1 {
                    break;
                }
            }
        }
        if e != 1 {
            // index == denom forces the chain to reach 1 on the known terms
            return Err(PuiseuxError::TruncationTooShort);
        }
        Ok(CharSequence::new(b).expect("gcd descent yields a valid characteristic"))
    }

    /// Terms of exponent strictly below `cutoff` (all terms when `None`).
    /// The result is exact when the cutoff does not exceed the truncation
    /// exponent.
    pub fn truncate_below(&self, cutoff: Option<&BigRational>) -> Self {
        let Some(c) = cutoff else { return self.clone() };
        let keep = |i: u64| &self.exponent(i) < c;
        let exact = self.trunc_exponent().is_none_or(|t| c <= &t);
        PuiseuxSeries {
            denom: self.denom,
            terms: self.terms.iter().filter(|(&i, _)| keep(i)).map(|(&i, a)| (i, a.clone())).collect(),
            trunc: if exact { None } else { self.trunc },
        }
    }

    /// Drops everything at numerators `≥ t` and records `t` as the bound.
    pub fn with_trunc(&self, t: u64) -> Self {
        let t = self.trunc.map_or(t, |old| old.min(t));
        Self::new(self.denom, self.terms.clone(), Some(t)).expect("positive denominator")
    }

    /// The conjugate `α_ε(x) = Σ a_i ε^i x^{i/n}` for `ε = ζ^j`,
    /// `ζ = exp(2πi/n)`, as a symbolic descriptor.
    pub fn conjugate(&self, j: u64) -> Conjugate<'_> {
        Conjugate { series: self, j: j % self.denom }
    }

    /// Number of distinct truncations `Σ_{i/n ≤ level} a_i ε^i x^{i/n}` over
    /// all `ε ∈ U_n`.
    pub fn distinct_conjugate_truncations(&self, level: &BigRational) -> usize {
        let mut seen = std::collections::HashSet::new();
        for j in 0..self.denom {
            let c = self.conjugate(j);
            let key: Vec<u64> =
                self.terms.keys().filter(|&&i| &self.exponent(i) <= level).map(|&i| c.phase(i)).collect();
            seen.insert(key);
        }
        seen.len()
    }

    /// `α(x^{n_sub})` as a dense polynomial in `x` with its truncation
    /// bound; fails if some exponent `i·n_sub/n` is fractional.
    pub(crate) fn compose_power(&self, n_sub: u64) -> Result<(Vec<BigRational>, Option<u64>), PuiseuxError> {
        let err = || PuiseuxError::NonIntegralSubstitution { n_sub, denom: self.denom };
        let mut dense: Vec<BigRational> = Vec::new();
        for (&i, a) in &self.terms {
            let num = u128::from(i) * u128::from(n_sub);
            if num % u128::from(self.denom) != 0 {
                return Err(err());
            }
            let e = usize::try_from(num / u128::from(self.denom)).map_err(|_| err())?;
            if dense.len() <= e {
                dense.resize(e + 1, BigRational::zero());
            }
            dense[e] = a.clone();
        }
        let trunc = self.trunc.map(|t| {
            let num = u128::from(t) * u128::from(n_sub);
            u64::try_from(num.div_ceil(u128::from(self.denom))).unwrap_or(u64::MAX)
        });
        Ok((dense, trunc))
    }

    /// Numerical value at `x = t^n` along the conjugate `ε = ζ^j`.
    pub fn eval_conjugate(&self, j: u64, t: Complex64) -> Complex64 {
        self.conjugate(j).eval(t)
    }
}

/// Symbolic conjugate of a series: coefficients are multiplied by
/// `ζ^{phase(i)}` with `phase(i) = i·j mod n`. Conjugates are never expanded
/// over the rationals except in the real cases `ε = ±1`.
#[derive(Debug, Clone, Copy)]
pub struct Conjugate<'a> {
    series: &'a PuiseuxSeries,
    j: u64,
}

impl Conjugate<'_> {
    pub fn phase(&self, i: u64) -> u64 {
        let n = u128::from(self.series.denom);
        ((u128::from(i) * u128::from(self.j)) % n) as u64
    }

    pub fn is_identity(&self) -> bool {
        self.series.terms.keys().all(|&i| self.phase(i) == 0)
    }

    /// The conjugate as a rational series, when every `ε^i` is `±1`.
    pub fn to_rational_series(&self) -> Option<PuiseuxSeries> {
        let n = self.series.denom;
        let mut terms = Vec::new();
        for (&i, a) in &self.series.terms {
            match self.phase(i) {
                0 => terms.push((i, a.clone())),
                p if 2 * p == n => terms.push((i, -a)),
                _ => return None,
            }
        }
        Some(PuiseuxSeries::new(n, terms, self.series.trunc).expect("positive denominator"))
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        let n = self.series.denom;
        self.series
            .terms
            .iter()
            .map(|(&i, a)| {
                let c = a.to_f64().unwrap_or(f64::NAN);
                unity::zeta(self.phase(i), n) * c * t.powu(i as u32)
            })
            .sum()
    }
}

impl fmt::Display for PuiseuxSeries {
    /// Writes e.g. `x^(4/3)+x^2-3/2*x^(31/12)+O(x^(5))`; the zero series is
    /// `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let exp = |i: u64| {
            let q = self.exponent(i);
            if q.is_zero() {
                String::new()
            } else if q.is_one() {
                "x".to_string()
            } else if q.is_integer() {
                format!("x^{}", q.numer())
            } else {
                format!("x^({})", fmt_q(&q))
            }
        };
        for (&i, a) in &self.terms {
            let e = exp(i);
            let mag = a.abs();
            let body = if e.is_empty() {
                fmt_q(&mag)
            } else if mag.is_one() {
                e
            } else {
                format!("{}*{}", fmt_q(&mag), e)
            };
            if a.is_negative() {
                out.push('-');
            } else if !out.is_empty() {
                out.push('+');
            }
            out.push_str(&body);
        }
        if let Some(t) = self.trunc {
            if !out.is_empty() {
                out.push('+');
            }
            let e = exp(t);
            out.push_str(&format!("O({})", if e.is_empty() { "1".to_string() } else { e }));
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn ps(s: &str) -> PuiseuxSeries {
        s.parse().unwrap()
    }

    #[test]
    fn orders() {
        assert_eq!(ps("x^(4/3)+x^2+x^(31/12)").ord(), Order::Finite(q(4, 3)));
        assert_eq!(PuiseuxSeries::zero().ord(), Order::Infinite);
        let empty = PuiseuxSeries::new(12, Vec::new(), Some(60)).unwrap();
        assert_eq!(empty.ord(), Order::AtLeast(q(5, 1)));
    }

    #[test]
    fn contacts() {
        assert_eq!(ps("x^(3/2)").contact(&ps("x^(3/2)+x^2")), Order::Finite(q(2, 1)));
        assert_eq!(ps("x^(4/3)+x^2").contact(&ps("x^(4/3)+2*x^2")), Order::Finite(q(2, 1)));
        let a = ps("x^(3/2)+x^2+O(x^3)");
        assert_eq!(a.contact(&a), Order::AtLeast(q(3, 1)));
        let b = ps("x^(3/2)+O(x^(5/2))");
        assert_eq!(a.contact(&b), Order::Finite(q(2, 1)));
    }

    #[test]
    fn characteristics() {
        let c = ps("x^(4/3)+x^2+x^(31/12)").characteristic_of().unwrap();
        assert_eq!(c, CharSequence::from_u64s(&[12, 16, 31]).unwrap());
        assert_eq!(ps("x^(3/2)").characteristic_of().unwrap(), CharSequence::from_u64s(&[2, 3]).unwrap());
        let c = ps("x^(7/5)+x^(3/2)").characteristic_of().unwrap();
        assert_eq!(c, CharSequence::from_u64s(&[10, 14, 15]).unwrap());
        // integer terms before the first characteristic exponent are allowed
        let c = ps("3*x+x^(3/2)").characteristic_of().unwrap();
        assert_eq!(c, CharSequence::from_u64s(&[2, 3]).unwrap());
    }

    #[test]
    fn characteristic_errors() {
        let wide = ps("x^(3/2)").rescale(4);
        assert_eq!(wide.characteristic_of(), Err(PuiseuxError::IndexMismatch { index: 2, denom: 4 }));
        assert_eq!(wide.reduce().characteristic_of().unwrap(), CharSequence::from_u64s(&[2, 3]).unwrap());
        assert!(matches!(ps("x^(1/2)").characteristic_of(), Err(PuiseuxError::OrderBelowOne(_))));
        assert_eq!(ps("x^2").characteristic_of(), Err(PuiseuxError::NotSingular));
    }

    #[test]
    fn truncation_below() {
        let a = ps("x^(4/3)+x^2+x^(31/12)");
        assert_eq!(a.truncate_below(Some(&q(31, 12))).reduce(), ps("x^(4/3)+x^2"));
        assert_eq!(a.truncate_below(Some(&q(4, 3))).terms().len(), 0);
        assert_eq!(a.truncate_below(None), a);
        let t = ps("x^(4/3)+x^2+O(x^(5/2))");
        assert!(t.truncate_below(Some(&q(7, 3))).is_exact());
        assert!(!t.truncate_below(Some(&q(3, 1))).is_exact());
    }

    #[test]
    fn conjugates() {
        let a = ps("x^(3/2)");
        assert!(a.conjugate(0).is_identity());
        assert_eq!(a.conjugate(1).to_rational_series().unwrap(), ps("-x^(3/2)"));
        let b = ps("x^(4/3)").rescale(12);
        assert_eq!(b.distinct_conjugate_truncations(&q(4, 3)), 3);
        let c = ps("x^(4/3)+x^2+x^(31/12)");
        assert_eq!(c.distinct_conjugate_truncations(&q(4, 3)), 3);
        assert_eq!(c.distinct_conjugate_truncations(&q(31, 12)), 12);
        assert!(c.conjugate(5).to_rational_series().is_none());
    }

    #[test]
    fn index_and_reduction() {
        let a = PuiseuxSeries::from_int_terms(12, &[(16, 1), (24, 1)]);
        assert_eq!(a.index(), 3);
        assert_eq!(a.reduce(), ps("x^(4/3)+x^2"));
        let t = PuiseuxSeries::new(12, vec![(16, q(1, 1))], Some(30)).unwrap().reduce();
        assert_eq!((t.denom(), t.trunc()), (3, Some(8)));
    }

    #[test]
    fn products() {
        let a = ps("x^(1/2)+x");
        assert_eq!(a.mul(&a), ps("x+2*x^(3/2)+x^2"));
        let t = ps("x+O(x^2)");
        assert_eq!(t.mul(&t), ps("x^2+O(x^3)"));
        assert_eq!(t.mul(&PuiseuxSeries::zero()), PuiseuxSeries::zero());
    }
}
