//! Equisingularity classes of plane branches, given by their characteristic
//! `(b₀, b₁, …, b_h)`.
//!
//! All derived data is computed once at construction:
//!
//! * `e_i = gcd(b₀,…,b_i)`, strictly decreasing down to `e_h = 1`;
//! * `n_i = e_{i-1}/e_i` and `m_i = b_i/e_i` for `1 ≤ i ≤ h`;
//! * `b̄_ℓ = b_ℓ + Σ_{i<ℓ} ((e_{i-1} - e_i)/e_{ℓ-1})·b_i`, the intersection
//!   multiplicity of the branch with its `ℓ`-th semiroot.
//!
//! Indices follow the usual numbering: `b(0)` is the multiplicity and
//! `n(i)`, `m(i)`, `bbar(i)` are defined for `1 ≤ i ≤ h`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::num::parse_int;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CharError {
    #[error("a characteristic needs at least two entries (b0, b1, ...)")]
    TooShort,
    #[error("multiplicity b0 = {0} must be greater than 1")]
    NotSingular(BigInt),
    #[error("entries must be positive and strictly increasing (violated at index {0})")]
    NotStrictlyIncreasing(usize),
    #[error("gcd(e_{prev}, b_{index}) = e_{prev}: b_{index} does not lower the gcd chain", prev = .index - 1)]
    GcdChainViolation { index: usize },
    #[error("the gcd chain ends at e_h = {0}, expected 1")]
    TrailingGcdNotOne(BigInt),
    #[error("index {index} out of range 1..={h}")]
    IndexOutOfRange { index: usize, h: usize },
    #[error("cannot parse characteristic {0:?}: expected comma-separated decimal integers")]
    Parse(String),
}

/// A validated characteristic sequence with all derived numerical data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CharSequence {
    b: Vec<BigInt>,
    e: Vec<BigInt>,
    n: Vec<BigInt>,
    m: Vec<BigInt>,
    bbar: Vec<BigInt>,
}

impl CharSequence {
    pub fn new(b: Vec<BigInt>) -> Result<Self, CharError> {
        if b.len() < 2 {
            return Err(CharError::TooShort);
        }
        if b[0] <= BigInt::one() {
            return Err(CharError::NotSingular(b[0].clone()));
        }
        for i in 1..b.len() {
            if b[i] <= b[i - 1] {
                return Err(CharError::NotStrictlyIncreasing(i));
            }
        }
        let mut e = vec![b[0].clone()];
        for (i, bi) in b.iter().enumerate().skip(1) {
            let prev = &e[i - 1];
            let g = prev.gcd(bi);
            if &g == prev {
                return Err(CharError::GcdChainViolation { index: i });
            }
            e.push(g);
        }
        let last = e.last().expect("nonempty");
        if !last.is_one() {
            return Err(CharError::TrailingGcdNotOne(last.clone()));
        }
        let h = b.len() - 1;
        let n: Vec<BigInt> = (1..=h).map(|i| &e[i - 1] / &e[i]).collect();
        let m: Vec<BigInt> = (1..=h).map(|i| &b[i] / &e[i]).collect();
        let mut bbar = Vec::with_capacity(h);
        for l in 1..=h {
            let mut acc = b[l].clone() * &e[l - 1];
            for i in 1..l {
                acc += (&e[i - 1] - &e[i]) * &b[i];
            }
            let (q, r) = acc.div_rem(&e[l - 1]);
            assert!(r.is_zero(), "b̄_{l} is not an integer for a valid characteristic");
            bbar.push(q);
        }
        let cs = CharSequence { b, e, n, m, bbar };
        debug_assert!(cs.check_invariants());
        Ok(cs)
    }

    pub fn from_u64s(b: &[u64]) -> Result<Self, CharError> {
        Self::new(b.iter().map(|&v| BigInt::from(v)).collect())
    }

    fn check_invariants(&self) -> bool {
        (1..=self.h()).all(|i| {
            let (n, m, e) = (self.n(i), self.m(i), self.e(i));
            &(n * e) == self.e(i - 1) && &(m * e) == self.b(i) && m.gcd(n).is_one() && m > n
        })
    }

    /// Number of characteristic exponents `h`.
    pub fn h(&self) -> usize {
        self.b.len() - 1
    }

    pub fn b(&self, i: usize) -> &BigInt {
        &self.b[i]
    }

    pub fn bs(&self) -> &[BigInt] {
        &self.b
    }

    pub fn e(&self, i: usize) -> &BigInt {
        &self.e[i]
    }

    pub fn es(&self) -> &[BigInt] {
        &self.e
    }

    /// The multiplicity `b₀`.
    pub fn multiplicity(&self) -> &BigInt {
        &self.b[0]
    }

    /// `n_i = e_{i-1}/e_i`, for `1 ≤ i ≤ h`.
    pub fn n(&self, i: usize) -> &BigInt {
        &self.n[i - 1]
    }

    /// `m_i = b_i/e_i`, for `1 ≤ i ≤ h`.
    pub fn m(&self, i: usize) -> &BigInt {
        &self.m[i - 1]
    }

    pub fn ns(&self) -> &[BigInt] {
        &self.n
    }

    pub fn ms(&self) -> &[BigInt] {
        &self.m
    }

    fn check_index(&self, l: usize) -> Result<(), CharError> {
        if l == 0 || l > self.h() {
            Err(CharError::IndexOutOfRange { index: l, h: self.h() })
        } else {
            Ok(())
        }
    }

    /// Intersection multiplicity of the branch with its `ℓ`-th semiroot.
    pub fn bbar(&self, l: usize) -> Result<&BigInt, CharError> {
        self.check_index(l)?;
        Ok(&self.bbar[l - 1])
    }

    /// Degree of the `ℓ`-th semiroot, `b₀/e_{ℓ-1} = n₁⋯n_{ℓ-1}`.
    pub fn semiroot_degree(&self, l: usize) -> Result<BigInt, CharError> {
        self.check_index(l)?;
        Ok(&self.b[0] / &self.e[l - 1])
    }

    /// The characteristic exponent `b_i/b₀`.
    pub fn exponent(&self, i: usize) -> BigRational {
        BigRational::new(self.b[i].clone(), self.b[0].clone())
    }

    /// All characteristic exponents `b₁/b₀ < … < b_h/b₀`.
    pub fn exponents(&self) -> Vec<BigRational> {
        (1..=self.h()).map(|i| self.exponent(i)).collect()
    }

    /// The entries as machine integers, when they all fit.
    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.b.iter().map(|v| v.to_u64()).collect()
    }
}

impl fmt::Display for CharSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.b.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for CharSequence {
    type Err = CharError;

    /// Parses `"b0,b1,...,bh"`; surrounding parentheses and whitespace are
    /// tolerated.
    fn from_str(s: &str) -> Result<Self, CharError> {
        let t = s.trim();
        let t = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(t);
        let vals: Option<Vec<BigInt>> = t.split(',').map(|p| parse_int(p.trim())).collect();
        match vals {
            Some(v) if !v.iter().any(|x| x.sign() == num_bigint::Sign::Minus) => Self::new(v),
            _ => Err(CharError::Parse(s.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(v: &[u64]) -> CharSequence {
        CharSequence::from_u64s(v).unwrap()
    }

    fn ints(v: &[u64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn derived_data_example_one() {
        let c = cs(&[12, 16, 31]);
        assert_eq!(c.es(), ints(&[12, 4, 1]).as_slice());
        assert_eq!(c.ns(), ints(&[3, 4]).as_slice());
        assert_eq!(c.ms(), ints(&[4, 31]).as_slice());
    }

    #[test]
    fn derived_data_example_two() {
        let c = cs(&[10, 14, 15]);
        assert_eq!(c.es(), ints(&[10, 2, 1]).as_slice());
        assert_eq!(c.ns(), ints(&[5, 2]).as_slice());
        assert_eq!(c.ms(), ints(&[7, 15]).as_slice());
    }

    #[test]
    fn rejects_invalid_sequences() {
        assert_eq!(CharSequence::from_u64s(&[12, 16, 30]), Err(CharError::TrailingGcdNotOne(2.into())));
        assert_eq!(CharSequence::from_u64s(&[12, 16, 20]), Err(CharError::GcdChainViolation { index: 2 }));
        assert_eq!(CharSequence::from_u64s(&[4, 6, 5]), Err(CharError::NotStrictlyIncreasing(2)));
        assert_eq!(CharSequence::from_u64s(&[1, 3]), Err(CharError::NotSingular(1.into())));
        assert_eq!(CharSequence::from_u64s(&[2]), Err(CharError::TooShort));
        assert_eq!(CharSequence::from_u64s(&[4, 8]), Err(CharError::GcdChainViolation { index: 1 }));
    }

    #[test]
    fn bbar_values() {
        let c = cs(&[12, 16, 31]);
        assert_eq!(c.bbar(1).unwrap(), &BigInt::from(16));
        assert_eq!(c.bbar(2).unwrap(), &BigInt::from(63));
        assert_eq!(cs(&[10, 14, 15]).bbar(2).unwrap(), &BigInt::from(71));
        assert_eq!(c.bbar(0), Err(CharError::IndexOutOfRange { index: 0, h: 2 }));
        assert_eq!(c.bbar(3), Err(CharError::IndexOutOfRange { index: 3, h: 2 }));
    }

    #[test]
    fn semiroot_degrees() {
        let c = cs(&[12, 16, 31]);
        assert_eq!(c.semiroot_degree(1).unwrap(), BigInt::from(1));
        assert_eq!(c.semiroot_degree(2).unwrap(), BigInt::from(3));
        assert_eq!(cs(&[10, 14, 15]).semiroot_degree(2).unwrap(), BigInt::from(5));
        assert!(c.semiroot_degree(3).is_err());
    }

    #[test]
    fn parses_cli_strings() {
        let c: CharSequence = "12,16,31".parse().unwrap();
        assert_eq!(c, cs(&[12, 16, 31]));
        let c: CharSequence = " (10, 14,15) ".parse().unwrap();
        assert_eq!(c.to_string(), "(10,14,15)");
        assert!(matches!("12,,31".parse::<CharSequence>(), Err(CharError::Parse(_))));
        assert!(matches!("-2,3".parse::<CharSequence>(), Err(CharError::Parse(_))));
        assert!(matches!("".parse::<CharSequence>(), Err(CharError::Parse(_))));
    }

    #[test]
    fn beyond_machine_words() {
        let big: BigInt = "100000000000000000000000000000".parse().unwrap();
        // (2, 2·big + 1): e = (2, 1)
        let c = CharSequence::new(vec![2.into(), &big * 2 + 1]).unwrap();
        assert_eq!(c.m(1), &(&big * 2 + 1));
        assert_eq!(c.bbar(1).unwrap(), &(&big * 2 + 1));
        assert!(c.to_u64s().is_none());
    }
}
