//! Continued-fraction expansions `m/n = [h₀; h₁, …, h_s]` of positive
//! rationals together with their convergents `p_i/q_i`.
//!
//! Convergents are indexed from `-1` with `p₋₁ = 1`, `q₋₁ = 0`, `p₀ = h₀`,
//! `q₀ = 1` and `p_{i+1} = h_{i+1} p_i + p_{i-1}` (likewise for `q`).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContFracError {
    #[error("expected 0 < n < m, got m = {m}, n = {n}")]
    InvalidRange { m: BigInt, n: BigInt },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuedFraction {
    h: Vec<BigInt>,
    // p[i + 1] = p_i, so that p[0] = p_{-1}.
    p: Vec<BigInt>,
    q: Vec<BigInt>,
}

impl ContinuedFraction {
    /// Classical (minimal length) expansion of `m/n` for `0 < n < m`.
    pub fn expand(m: &BigInt, n: &BigInt) -> Result<Self, ContFracError> {
        if !n.is_positive() || n >= m {
            return Err(ContFracError::InvalidRange { m: m.clone(), n: n.clone() });
        }
        Ok(Self::of_ratio(m, n))
    }

    /// Minimal-length expansion of any positive rational `m/n`. The leading
    /// quotient `h₀` is zero when `m < n`.
    ///
    /// Panics unless `m` and `n` are positive.
    pub fn of_ratio(m: &BigInt, n: &BigInt) -> Self {
        assert!(m.is_positive() && n.is_positive(), "of_ratio needs positive m and n");
        let mut h = Vec::new();
        let (mut a, mut b) = (m.clone(), n.clone());
        while !b.is_zero() {
            let (quot, rem) = a.div_rem(&b);
            h.push(quot);
            a = b;
            b = rem;
        }
        Self::from_partial_quotients(h)
    }

    /// Builds the convergent table for the given partial quotients. Every
    /// quotient after the first must be positive.
    pub fn from_partial_quotients(h: Vec<BigInt>) -> Self {
        assert!(!h.is_empty(), "a continued fraction needs at least one quotient");
        assert!(h.iter().skip(1).all(|v| v.is_positive()) && !h[0].is_negative());
        let mut p = vec![BigInt::one(), h[0].clone()];
        let mut q = vec![BigInt::zero(), BigInt::one()];
        for hi in &h[1..] {
            let len = p.len();
            p.push(hi * &p[len - 1] + &p[len - 2]);
            q.push(hi * &q[len - 1] + &q[len - 2]);
        }
        let cf = ContinuedFraction { h, p, q };
        debug_assert!(cf.check_identities());
        cf
    }

    fn check_identities(&self) -> bool {
        let s = self.s() as isize;
        let det_ok = (0..=s).all(|i| {
            let lhs = self.p(i) * self.q(i - 1) - self.p(i - 1) * self.q(i);
            let rhs = if i % 2 == 0 { -BigInt::one() } else { BigInt::one() };
            lhs == rhs
        });
        let coprime = (0..=s).all(|i| self.p(i).gcd(self.q(i)).is_one());
        let v = self.value();
        let even_ok = (0..=s).step_by(2).all(|i| self.convergent(i) <= v);
        let odd_ok = (1..=s).step_by(2).all(|i| self.convergent(i) >= v);
        det_ok && coprime && even_ok && odd_ok
    }

    /// The index `s` of the last partial quotient.
    pub fn s(&self) -> usize {
        self.h.len() - 1
    }

    pub fn partial_quotients(&self) -> &[BigInt] {
        &self.h
    }

    /// `p_i` for `-1 ≤ i ≤ s`.
    pub fn p(&self, i: isize) -> &BigInt {
        &self.p[(i + 1) as usize]
    }

    /// `q_i` for `-1 ≤ i ≤ s`.
    pub fn q(&self, i: isize) -> &BigInt {
        &self.q[(i + 1) as usize]
    }

    pub fn convergent(&self, i: isize) -> BigRational {
        BigRational::new(self.p(i).clone(), self.q(i).clone())
    }

    /// Convergents `p_i/q_i` for `0 ≤ i ≤ s`, unreduced pairs.
    pub fn convergents(&self) -> impl Iterator<Item = (&BigInt, &BigInt)> {
        self.p[1..].iter().zip(&self.q[1..])
    }

    pub fn value(&self) -> BigRational {
        self.convergent(self.s() as isize)
    }

    /// Rewrites `[…, h_s]` as `[…, h_s - 1, 1]` when `s` is odd, so that the
    /// result has even length index. Identity when `s` is already even.
    pub fn to_even_length(&self) -> Self {
        if self.s().is_multiple_of(2) {
            return self.clone();
        }
        let mut h = self.h.clone();
        let last = h.pop().expect("nonempty");
        if last.is_one() {
            // [..., h_{s-1}, 1] = [..., h_{s-1} + 1]
            let prev = h.pop().expect("s is odd so s >= 1");
            h.push(prev + 1);
        } else {
            h.push(last - 1);
            h.push(BigInt::one());
        }
        Self::from_partial_quotients(h)
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.h.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn hs(cf: &ContinuedFraction) -> Vec<i64> {
        cf.partial_quotients().iter().map(|v| i64::try_from(v).unwrap()).collect()
    }

    fn convs(cf: &ContinuedFraction) -> Vec<(i64, i64)> {
        cf.convergents().map(|(p, q)| (i64::try_from(p).unwrap(), i64::try_from(q).unwrap())).collect()
    }

    #[test]
    fn expansions() {
        let cf = ContinuedFraction::expand(&b(12), &b(5)).unwrap();
        assert_eq!(hs(&cf), [2, 2, 2]);
        assert_eq!(convs(&cf), [(2, 1), (5, 2), (12, 5)]);
        let cf = ContinuedFraction::expand(&b(31), &b(4)).unwrap();
        assert_eq!(hs(&cf), [7, 1, 3]);
        assert_eq!(convs(&cf), [(7, 1), (8, 1), (31, 4)]);
        let cf = ContinuedFraction::expand(&b(9), &b(1)).unwrap();
        assert_eq!(hs(&cf), [9]);
        assert_eq!(cf.s(), 0);
        assert_eq!((cf.p(-1), cf.q(-1)), (&b(1), &b(0)));
    }

    #[test]
    fn non_reduced_input_gives_lowest_terms() {
        let cf = ContinuedFraction::expand(&b(24), &b(10)).unwrap();
        assert_eq!(hs(&cf), [2, 2, 2]);
        assert_eq!(cf.value(), BigRational::new(b(12), b(5)));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(ContinuedFraction::expand(&b(3), &b(3)).is_err());
        assert!(ContinuedFraction::expand(&b(3), &b(0)).is_err());
        assert!(ContinuedFraction::expand(&b(2), &b(5)).is_err());
    }

    #[test]
    fn even_length_rewrite() {
        let cf = ContinuedFraction::expand(&b(31), &b(4)).unwrap().to_even_length();
        assert_eq!(hs(&cf), [7, 1, 3]);
        let cf = ContinuedFraction::expand(&b(7), &b(3)).unwrap().to_even_length();
        assert_eq!(hs(&cf), [2, 2, 1]);
        let cf = ContinuedFraction::expand(&b(12), &b(5)).unwrap().to_even_length();
        assert_eq!(hs(&cf), [2, 2, 2]);
        let orig = ContinuedFraction::expand(&b(15), &b(2)).unwrap();
        assert_eq!(hs(&orig), [7, 2]);
        let cf = orig.to_even_length();
        assert_eq!(hs(&cf), [7, 1, 1]);
        assert_eq!(cf.value(), BigRational::new(b(15), b(2)));
    }

    #[test]
    fn even_length_after_trailing_one() {
        // non-canonical input ending in 1 with odd s folds back
        let cf = ContinuedFraction::from_partial_quotients(vec![b(2), b(1)]);
        let even = cf.to_even_length();
        assert_eq!(hs(&even), [3]);
        assert_eq!(even.value(), cf.value());
    }

    #[test]
    fn ratio_below_one() {
        let cf = ContinuedFraction::of_ratio(&b(2), &b(3));
        assert_eq!(hs(&cf), [0, 1, 2]);
        assert_eq!(convs(&cf), [(0, 1), (1, 1), (2, 3)]);
    }

    #[test]
    fn interleaving_for_all_small_ratios() {
        for m in 2..60 {
            for n in 1..m {
                let cf = ContinuedFraction::expand(&b(m), &b(n)).unwrap();
                assert!(cf.check_identities(), "{m}/{n}");
                assert!(cf.to_even_length().check_identities());
                assert_eq!(cf.to_even_length().value(), cf.value());
                if cf.s() > 0 {
                    assert!(cf.partial_quotients()[cf.s()] > BigInt::one());
                }
            }
        }
    }
}
