//! Minimal polynomial `∏_{ε∈U_n}(y - α_ε(x))` of a Puiseux series.
//!
//! The conjugates are never formed. Their power sums are rational:
//! `Σ_ε α_ε^j = n·[α^j]_ℤ`, where `[·]_ℤ` keeps the terms with integer
//! exponent, because `Σ_{ε∈U_n} ε^i` is `n` when `n | i` and `0` otherwise.
//! The elementary symmetric functions then follow from Newton's identities
//! `j·e_j = Σ_{i=1}^{j} (-1)^{i-1} e_{j-i} p_i`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::BivariatePoly;
use super::{PuiseuxError, PuiseuxSeries};

fn mul_trunc(a: &[BigRational], b: &[BigRational], limit: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); limit.min(a.len() + b.len())];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().take(limit.saturating_sub(i)) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

impl PuiseuxSeries {
    /// Monic minimal polynomial in `y` over `ℚ[[x]]`, of degree the index
    /// `n` of the series, with `x`-coefficients kept below `x^{x_trunc}`.
    ///
    /// With `x_trunc = None` an exact series yields the exact polynomial,
    /// and a truncated one yields everything its known terms determine. The
    /// result carries no bound when it is provably complete (exact series
    /// and `x_trunc` beyond every possible degree).
    pub fn min_poly(&self, x_trunc: Option<u64>) -> Result<BivariatePoly, PuiseuxError> {
        let a = self.reduce();
        let n = a.denom;
        if let Some(&i) = a.terms.keys().next() {
            if i == 0 {
                // a constant term is fine algebraically, but then the branch
                // does not pass through the origin; keep the statement simple
                return Err(PuiseuxError::OrderBelowOne("0".to_string()));
            }
        }
        // exponents c with c·n < T are determined by the known terms
        let available = a.trunc.map(|t| t.div_ceil(n));
        let limit = match (x_trunc, available) {
            (Some(x), Some(av)) if x > av => return Err(PuiseuxError::TruncationTooShort),
            (Some(x), _) => Some(x),
            (None, av) => av,
        };
        // e_j has degree at most j·max(i)/n ≤ max(i)
        let degree_bound = a.terms.keys().last().copied().unwrap_or(0);
        let exact = a.trunc.is_none() && limit.is_none_or(|x| x > degree_bound);
        let cap = if exact { degree_bound + 1 } else { limit.expect("bounded when not exact") };
        let cap = usize::try_from(cap).map_err(|_| PuiseuxError::TruncationTooShort)?;
        let n_us = usize::try_from(n).expect("index fits in memory");
        let num_limit = cap.saturating_mul(n_us);

        // power sums p_1..p_n in ℚ[x]/(x^cap)
        let alpha: Vec<(usize, &BigRational)> =
            a.terms.iter().map(|(&i, c)| (i as usize, c)).filter(|(i, _)| *i < num_limit).collect();
        let n_q = BigRational::from_integer(n.into());
        let mut power: Vec<BigRational> = vec![BigRational::one()];
        let mut p: Vec<Vec<BigRational>> = Vec::with_capacity(n_us);
        for _ in 0..n_us {
            let mut next = vec![BigRational::zero(); num_limit.min(power.len() + alpha.last().map_or(0, |t| t.0))];
            for (i, x) in power.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
                for &(j, y) in &alpha {
                    if i + j >= next.len() {
                        break;
                    }
                    next[i + j] += x * y;
                }
            }
            p.push(next.iter().step_by(n_us).map(|c| c * &n_q).collect());
            power = next;
        }

        // Newton's identities
        let mut e: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]];
        for j in 1..=n_us {
            let mut acc = vec![BigRational::zero(); cap];
            for i in 1..=j {
                let prod = mul_trunc(&e[j - i], &p[i - 1], cap);
                for (slot, v) in acc.iter_mut().zip(prod) {
                    if i % 2 == 1 {
                        *slot += v;
                    } else {
                        *slot -= v;
                    }
                }
            }
            let inv = BigRational::new(1.into(), (j as i64).into());
            e.push(acc.into_iter().map(|c| c * &inv).collect());
        }

        let terms = e.into_iter().enumerate().flat_map(|(j, coeffs)| {
            let sign = if j % 2 == 0 { BigRational::one() } else { -BigRational::one() };
            let y_deg = (n_us - j) as u64;
            coeffs.into_iter().enumerate().map(move |(c, v)| ((c as u64, y_deg), &sign * v))
        });
        Ok(BivariatePoly::new(terms, if exact { None } else { Some(cap as u64) }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ps(s: &str) -> PuiseuxSeries {
        s.parse().unwrap()
    }

    fn q(a: i64) -> BigRational {
        BigRational::from_integer(a.into())
    }

    #[test]
    fn cusp_and_single_terms() {
        assert_eq!(ps("x^(3/2)").min_poly(None).unwrap(), BivariatePoly::from_int_terms(&[((0, 2), 1), ((3, 0), -1)]));
        assert_eq!(ps("x^(4/3)").min_poly(None).unwrap(), BivariatePoly::from_int_terms(&[((0, 3), 1), ((4, 0), -1)]));
        // the working denominator is irrelevant
        assert_eq!(ps("x^(4/3)").rescale(12).min_poly(None).unwrap(), ps("x^(4/3)").min_poly(None).unwrap());
        assert_eq!(ps("2*x").min_poly(None).unwrap(), BivariatePoly::from_int_terms(&[((0, 1), 1), ((1, 0), -2)]));
    }

    #[test]
    fn leading_coefficients_of_the_non_generic_example() {
        let g = ps("x^(4/3)+x^2+x^(31/12)").min_poly(None).unwrap();
        assert!(g.trunc().is_none());
        assert_eq!(g.deg_y(), Some(12));
        assert_eq!(g.y_coeff(12), [(0, q(1))].into_iter().collect());
        assert_eq!(g.y_coeff(11), [(2, q(-12))].into_iter().collect());
        assert_eq!(g.y_coeff(10), [(4, q(66))].into_iter().collect());
    }

    #[test]
    fn tenth_derivative_of_the_non_generic_example() {
        let g = ps("x^(4/3)+x^2+x^(31/12)").min_poly(None).unwrap();
        let d = g.derivative_y(10).unwrap();
        let c: BigInt = (1..=11).map(BigInt::from).product::<BigInt>() * 6;
        let square = BivariatePoly::from_int_terms(&[((0, 2), 1), ((2, 1), -2), ((4, 0), 1)]);
        assert_eq!(d, square.scale(&BigRational::from_integer(c)));
    }

    #[test]
    fn root_is_annihilated() {
        for s in ["x^(4/3)+x^2+x^(31/12)", "x^(7/5)-2*x^(3/2)+3*x^2", "3*x+x^(3/2)-x^(7/4)"] {
            let a = ps(s);
            let f = a.min_poly(None).unwrap();
            let v = f.eval_series(&a);
            assert!(v.terms().is_empty() && v.is_exact(), "{s}: {v}");
        }
    }

    #[test]
    fn truncated_computation_agrees_with_exact_below_the_bound() {
        let a = ps("x^(7/5)-2*x^(3/2)+3*x^2+x^(23/10)");
        let exact = a.min_poly(None).unwrap();
        for x in [3, 7, 12] {
            let t = a.min_poly(Some(x)).unwrap();
            assert_eq!(t.trunc(), Some(x));
            let cut = BivariatePoly::new(exact.terms().iter().map(|(&k, c)| (k, c.clone())), Some(x));
            assert_eq!(t, cut);
        }
    }

    #[test]
    fn truncated_series_limits_the_bound() {
        let a = ps("x^(3/2)+x^2+O(x^(5/2))");
        let f = a.min_poly(None).unwrap();
        assert_eq!(f.trunc(), Some(3));
        assert_eq!(a.min_poly(Some(4)), Err(PuiseuxError::TruncationTooShort));
        // x^(3/2)+x^2 has min poly (y - x^2)^2 - x^3
        let expected = BivariatePoly::new(vec![((0, 2), q(1)), ((2, 1), q(-2)), ((3, 0), q(-1))], Some(3));
        assert_eq!(f, expected);
    }

    #[test]
    fn conjugate_product_matches_numerically() {
        use num_complex::Complex64;
        let a = ps("x^(4/3)-x^2+2*x^(31/12)");
        let f = a.min_poly(None).unwrap();
        let t = Complex64::new(0.83, 0.21);
        let y = Complex64::new(0.4, -0.3);
        let x = t.powu(12);
        let direct: Complex64 = f
            .terms()
            .iter()
            .map(|(&(i, j), c)| {
                use num_traits::ToPrimitive;
                x.powu(i as u32) * y.powu(j as u32) * c.to_f64().unwrap()
            })
            .sum();
        let product: Complex64 = (0..12).map(|j| y - a.eval_conjugate(j, t)).product();
        assert!((direct - product).norm() < 1e-9, "{direct} vs {product}");
    }
}
