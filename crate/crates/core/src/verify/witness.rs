//! Explicit branches in a given class, sampled with seeded random integer
//! coefficients or supplied by the caller.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::VerifyError;
use crate::charclass::CharSequence;
use crate::puiseux::{BivariatePoly, PuiseuxSeries};

/// A branch given by one Newton–Puiseux root together with its minimal
/// polynomial, known for x-exponents below `trunc` when that is set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessBranch {
    pub cs: CharSequence,
    pub root: PuiseuxSeries,
    pub f: BivariatePoly,
    pub seed: Option<u64>,
    pub trunc: Option<u64>,
}

/// Characteristic as machine integers; verification is desk-scale only.
pub(crate) fn small_char(cs: &CharSequence) -> Result<Vec<u64>, VerifyError> {
    cs.to_u64s().filter(|v| v[0] <= 1 << 12).ok_or(VerifyError::TooLarge(cs.to_string()))
}

/// x-truncation of the minimal polynomial that leaves every hat transform
/// enough room: each one needs its polygon to reach the x-axis at `b̄_ℓ`.
pub fn default_x_trunc(cs: &CharSequence) -> u64 {
    let top = cs.bbar(cs.h()).expect("h is a valid index").to_u64().unwrap_or(u64::MAX);
    let b0 = cs.multiplicity().to_u64().unwrap_or(u64::MAX);
    top.saturating_add(b0.saturating_mul(2))
}

/// Exponent numerators (over `b₀`) a root of the class may carry, up to
/// `b_h + extra_terms·e_h`, each flagged when it is characteristic.
pub fn allowed_exponents(cs: &[u64], extra_terms: u64) -> Vec<(u64, bool)> {
    let b0 = cs[0];
    let h = cs.len() - 1;
    let mut e = vec![b0];
    for &b in &cs[1..] {
        let last = *e.last().expect("nonempty");
        e.push(num_integer::gcd(last, b));
    }
    let top = cs[h] + extra_terms * e[h];
    (b0..=top)
        .filter_map(|i| {
            let j = cs[1..].iter().take_while(|&&b| b <= i).count();
            if j > 0 && cs[j] == i {
                Some((i, true))
            } else if i % e[j] == 0 {
                Some((i, false))
            } else {
                None
            }
        })
        .collect()
}

fn draw(rng: &mut ChaCha8Rng, nonzero: bool) -> i64 {
    if nonzero {
        let v = rng.random_range(1..=9);
        if rng.random_bool(0.5) {
            -v
        } else {
            v
        }
    } else {
        rng.random_range(-9..=9)
    }
}

impl WitnessBranch {
    /// Root with integer coefficients in `[-9,9]`, nonzero at the
    /// characteristic exponents, drawn from ChaCha8 seeded with `seed`.
    pub fn sample(cs: &CharSequence, seed: u64, extra_terms: u64, x_trunc: Option<u64>) -> Result<Self, VerifyError> {
        let small = small_char(cs)?;
        let support = allowed_exponents(&small, extra_terms);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let terms: Vec<(u64, i64)> = support.iter().map(|&(i, ch)| (i, draw(&mut rng, ch))).collect();
            let root = PuiseuxSeries::from_int_terms(small[0], &terms);
            // cannot fail with this support; redraw rather than trust that
            if root.characteristic_of().ok().as_ref() != Some(cs) {
                continue;
            }
            let trunc = x_trunc.unwrap_or_else(|| default_x_trunc(cs));
            let f = root.min_poly(Some(trunc))?;
            return Ok(WitnessBranch { cs: cs.clone(), root, trunc: f.trunc(), f, seed: Some(seed) });
        }
    }

    /// Witness from a caller-supplied root; its class is read off the root.
    /// The truncation is clamped to what a truncated root determines.
    pub fn from_root(root: PuiseuxSeries, x_trunc: Option<u64>) -> Result<Self, VerifyError> {
        let root = root.reduce();
        let cs = root.characteristic_of()?;
        small_char(&cs)?;
        if root.terms().keys().next() == Some(&0) {
            return Err(VerifyError::Witness(crate::puiseux::PuiseuxError::OrderBelowOne("0".into())));
        }
        let mut trunc = x_trunc.unwrap_or_else(|| default_x_trunc(&cs));
        if let Some(t) = root.trunc() {
            trunc = trunc.min(t.div_ceil(root.denom()));
        }
        let f = root.min_poly(Some(trunc))?;
        Ok(WitnessBranch { cs, trunc: f.trunc(), root, f, seed: None })
    }

    /// Coefficient of the root at `x^{b_i/b₀}`.
    pub fn char_coeff(&self, i: usize) -> BigRational {
        let b0 = self.cs.multiplicity();
        let scale = BigInt::from(self.root.denom()) * self.cs.b(i) / b0;
        scale.to_u64().map(|n| self.root.coeff(n)).unwrap_or_else(BigRational::zero)
    }
}
