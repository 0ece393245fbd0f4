//! Roots-of-unity identities used when expanding conjugate products,
//! checked in complex floating point:
//!
//! 1. `∏_{ε∈U_{e'}} (t - c·ε^b) = (t^{n'} - c^{n'})^{e}` where `e = gcd(e', b)`
//!    and `n' = e'/e`;
//! 2. `∏_{ε∈U_{e'}∖U_e} (1 - ε^b) = n'^{e}` for the same data;
//! 3. `Σ_{ε∈U_n} ε^i` is `n` when `n | i` and `0` otherwise.
//!
//! Phases are reduced exactly (`j·b mod e'`) before any trigonometry.

use num_complex::Complex64;
use num_integer::Integer;

/// `exp(2πi·k/n)`.
pub fn zeta(k: u64, n: u64) -> Complex64 {
    let k = k % n;
    Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)
}

fn poly_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Coefficients (lowest degree first) of `∏_{j<e'} (t - c·ζ_{e'}^{j·b})`.
pub fn orbit_product(e_prev: u64, b: u64, c: Complex64) -> Vec<Complex64> {
    (0..e_prev).fold(vec![Complex64::new(1.0, 0.0)], |acc, j| {
        let root = c * zeta((j * b) % e_prev, e_prev);
        poly_mul(&acc, &[-root, Complex64::new(1.0, 0.0)])
    })
}

/// Coefficients of `(t^{n'} - c^{n'})^{e}`.
pub fn orbit_product_closed_form(e_prev: u64, b: u64, c: Complex64) -> Vec<Complex64> {
    let e = e_prev.gcd(&b);
    let n = e_prev / e;
    let cn = c.powu(n as u32);
    let mut out = vec![Complex64::new(0.0, 0.0); e_prev as usize + 1];
    for r in 0..=e {
        // binom(e,r) t^{n r} (-c^n)^{e-r}
        out[(n * r) as usize] = (-cn).powu((e - r) as u32) * binomial(e, r);
    }
    out
}

/// Largest coefficientwise deviation in identity 1.
pub fn orbit_product_error(e_prev: u64, b: u64, c: Complex64) -> f64 {
    let lhs = orbit_product(e_prev, b, c);
    let rhs = orbit_product_closed_form(e_prev, b, c);
    lhs.iter().zip(&rhs).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `∏_{ε∈U_{e'}∖U_e} (1 - ε^b)` with `e = gcd(e', b)`.
pub fn excluded_product(e_prev: u64, b: u64) -> Complex64 {
    let e = e_prev.gcd(&b);
    (0..e_prev)
        .filter(|&j| !(j * e).is_multiple_of(e_prev))
        .map(|j| Complex64::new(1.0, 0.0) - zeta((j * b) % e_prev, e_prev))
        .product()
}

/// Deviation in identity 2 from `n'^e`.
pub fn excluded_product_error(e_prev: u64, b: u64) -> f64 {
    let e = e_prev.gcd(&b);
    let n = e_prev / e;
    (excluded_product(e_prev, b) - Complex64::new((n as f64).powi(e as i32), 0.0)).norm()
}

/// `Σ_{ε∈U_n} ε^i`.
pub fn power_sum(n: u64, i: u64) -> Complex64 {
    (0..n).map(|j| zeta((j * i) % n, n)).sum()
}

/// Deviation in identity 3.
pub fn power_sum_error(n: u64, i: u64) -> f64 {
    let expected = if i.is_multiple_of(n) { n as f64 } else { 0.0 };
    (power_sum(n, i) - Complex64::new(expected, 0.0)).norm()
}

/// Every admissible `(e', b)` with `e' ≤ max_e_prev`: `e = gcd(e', b) < e'`,
/// with `b` ranging over one period `e'+1 ..= 2e'` past the multiplicity so
/// that all residues appear.
pub fn admissible_pairs(max_e_prev: u64) -> impl Iterator<Item = (u64, u64)> {
    (2..=max_e_prev).flat_map(|ep| (ep + 1..=2 * ep).filter(move |b| ep.gcd(b) < ep).map(move |b| (ep, b)))
}
