//! Symbolic derivatives `Δ^(k) = N((Δ - (0,k)) ∩ ℕ²)`.
//!
//! Two independent routes are provided. [`NewtonDiagram::symbolic_derivative`]
//! enumerates, row by row, the leftmost lattice point of the diagram at each
//! height `j ≥ k` and takes the hull; it is exact but linear in the height.
//! [`NewtonDiagram::derivative_closed_form`] applies the continued-fraction
//! formula for the first derivative of an elementary diagram one step at a
//! time, always to the steepest remaining part.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{CanonicalRep, DiagramError, LatticePoint, NewtonDiagram, Part};
use crate::contfrac::ContinuedFraction;

const MAX_LATTICE_ROWS: i128 = 1 << 24;
const COORD_LIMIT: i128 = 1 << 62;

fn ceil_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0 && a >= 0);
    (a + b - 1) / b
}

fn turn(a: (i128, i128), b: (i128, i128), c: (i128, i128)) -> i128 {
    (b.0 - a.0) * (c.1 - b.1) - (b.1 - a.1) * (c.0 - b.0)
}

impl NewtonDiagram {
    /// `N(Δ ∩ {y ≥ k})`, by lattice enumeration.
    pub fn trunc(&self, k: u64) -> Result<NewtonDiagram, DiagramError> {
        let hull = self.truncated_hull(k)?;
        Ok(NewtonDiagram { vertices: hull.into_iter().map(|(x, y)| LatticePoint::new(x, y)).collect() })
    }

    /// `Δ^(k)`, by lattice enumeration. Fails with
    /// [`DiagramError::LatticeTooLarge`] when the coordinates do not fit
    /// machine words or the enumeration would exceed 2²⁴ rows.
    pub fn symbolic_derivative(&self, k: u64) -> Result<NewtonDiagram, DiagramError> {
        let hull = self.truncated_hull(k)?;
        let k = i128::from(k);
        Ok(NewtonDiagram { vertices: hull.into_iter().map(|(x, y)| LatticePoint::new(x, y - k)).collect() })
    }

    fn truncated_hull(&self, k: u64) -> Result<Vec<(i128, i128)>, DiagramError> {
        let too_large = || DiagramError::LatticeTooLarge { rows: self.height() + 1 };
        let vs: Vec<(i128, i128)> = self
            .vertices
            .iter()
            .map(|v| Some((i128::try_from(&v.x).ok()?, i128::try_from(&v.y).ok()?)))
            .collect::<Option<_>>()
            .filter(|vs: &Vec<(i128, i128)>| vs.iter().all(|&(x, y)| x < COORD_LIMIT && y < COORD_LIMIT))
            .ok_or_else(too_large)?;
        let k = i128::from(k);
        let (x_top, y_top) = vs[0];
        let y_bot = vs[vs.len() - 1].1;
        let hi = k.max(y_top);
        let lo = k.max(y_bot);
        if hi - lo + 1 > MAX_LATTICE_ROWS {
            return Err(DiagramError::LatticeTooLarge { rows: BigInt::from(hi - lo + 1) });
        }
        // Leftmost lattice point per row, scanning downwards; x only grows.
        let mut stair: Vec<(i128, i128)> = Vec::new();
        let mut edge = 0;
        for j in (lo..=hi).rev() {
            let x = if j >= y_top {
                x_top
            } else {
                while vs[edge + 1].1 > j {
                    edge += 1;
                }
                let (a, b) = (vs[edge], vs[edge + 1]);
                a.0 + ceil_div((a.1 - j) * (b.0 - a.0), a.1 - b.1)
            };
            match stair.last_mut() {
                Some(last) if last.0 == x => *last = (x, j),
                _ => stair.push((x, j)),
            }
        }
        let mut hull: Vec<(i128, i128)> = Vec::with_capacity(stair.len());
        for p in stair {
            while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        Ok(hull)
    }

    /// `Δ^(k)` by iterating the closed form for the first derivative.
    ///
    /// The offset `(a,b)` is handled first: the `x`-shift commutes with
    /// differentiation and the first `b` orders only translate. Afterwards
    /// every step replaces one copy of the steepest long part `(M,N)` by
    /// `(M,N)^(1)`, whose parts are all steeper than what remains.
    pub fn derivative_closed_form(&self, k: u64) -> NewtonDiagram {
        let mut st = ClosedFormSteps::new(self);
        st.advance(BigInt::from(k));
        st.diagram()
    }

    /// `Δ^(1), Δ^(2), …` by the closed form, each obtained from the
    /// previous one by a single step.
    pub fn closed_form_derivatives(&self) -> impl Iterator<Item = NewtonDiagram> {
        let mut st = ClosedFormSteps::new(self);
        std::iter::from_fn(move || {
            st.advance(BigInt::one());
            Some(st.diagram())
        })
    }

    /// Splits the long canonical parts of a diagram touching the `x`-axis
    /// into the `s` steepest ones `R` and the rest `L`, and returns
    /// `(R^(k), L)` translated so that `Δ^(k) = R^(k) ⊕ L` whenever
    /// `k ≤` the vertical extent of `R`.
    pub fn split_derivative(&self, k: u64, s: usize) -> Result<(NewtonDiagram, NewtonDiagram), DiagramError> {
        let rep = self.canonical_rep(true);
        if !rep.offset().y.is_zero() {
            return Err(DiagramError::NotConvenient);
        }
        let total = rep.parts().len();
        if s > total {
            return Err(DiagramError::SplitIndexOutOfRange { s, parts: total });
        }
        let (right, left) = rep.parts().split_at(s);
        let right = CanonicalRep::from_parts(right.to_vec(), false);
        let extent = right.vertical_extent();
        if BigInt::from(k) > extent {
            return Err(DiagramError::SplitTooDeep { k, extent });
        }
        let left = CanonicalRep::from_unsorted(rep.offset().clone(), left.to_vec());
        Ok((right.to_diagram().symbolic_derivative(k)?, left.to_diagram()))
    }
}

/// Runs `(count, primitive part)` in decreasing inclination, above an
/// offset whose height is consumed first.
struct ClosedFormSteps {
    offset: LatticePoint,
    runs: VecDeque<(BigInt, Part)>,
}

impl ClosedFormSteps {
    fn new(d: &NewtonDiagram) -> Self {
        let rep = d.canonical_rep(false);
        let runs = rep
            .parts()
            .iter()
            .map(|p| {
                let g = p.m.gcd(&p.n);
                (g.clone(), Part { m: &p.m / &g, n: &p.n / &g })
            })
            .collect();
        ClosedFormSteps { offset: rep.offset().clone(), runs }
    }

    fn advance(&mut self, mut steps: BigInt) {
        let shift = (&self.offset.y).min(&steps).clone();
        self.offset.y -= &shift;
        steps -= shift;
        while steps.is_positive() {
            let Some((count, part)) = self.runs.pop_front() else { break };
            if count > BigInt::one() {
                self.runs.push_front((count - 1, part.clone()));
            }
            for run in primitive_first_derivative(&part).into_iter().rev() {
                self.runs.push_front(run);
            }
            steps -= 1;
        }
    }

    fn diagram(&self) -> NewtonDiagram {
        let parts = self.runs.iter().map(|(c, p)| Part { m: c * &p.m, n: c * &p.n }).collect();
        CanonicalRep::from_unsorted(self.offset.clone(), parts).to_diagram()
    }
}

/// First derivative of the elementary diagram of a primitive part `(m,n)`,
/// as runs `(count, part)` in decreasing inclination. With `m/n = [h₀;…,h_s]`
/// the result is `Σ_{i ≤ s/2} h_{2i}·(p_{2i-1}, q_{2i-1})`, plus
/// `(p_s - p_{s-1}, q_s - q_{s-1})` when `s` is odd. For `n = 1` it is empty
/// (the quadrant).
fn primitive_first_derivative(part: &Part) -> Vec<(BigInt, Part)> {
    let cf = ContinuedFraction::of_ratio(&part.m, &part.n);
    let s = cf.s() as isize;
    let h = cf.partial_quotients();
    let mut runs: Vec<(BigInt, Part)> = (1..=s / 2)
        .map(|i| (h[(2 * i) as usize].clone(), Part { m: cf.p(2 * i - 1).clone(), n: cf.q(2 * i - 1).clone() }))
        .collect();
    if s % 2 == 1 {
        runs.push((BigInt::one(), Part { m: cf.p(s) - cf.p(s - 1), n: cf.q(s) - cf.q(s - 1) }));
    }
    runs
}

/// Closed form of `(m,n)^(1)` in long canonical form, for coprime `m > n ≥ 1`.
pub fn elementary_derivative_closed_form(m: &BigInt, n: &BigInt) -> Result<CanonicalRep, DiagramError> {
    if !n.is_positive() || m <= n {
        return Err(DiagramError::InvalidRange { m: m.clone(), n: n.clone() });
    }
    if !m.gcd(n).is_one() {
        return Err(DiagramError::NotCoprime { m: m.clone(), n: n.clone() });
    }
    let mut parts = Vec::new();
    for (count, p) in primitive_first_derivative(&Part { m: m.clone(), n: n.clone() }) {
        let c = usize::try_from(&count).expect("partial quotient fits in memory");
        parts.extend(std::iter::repeat_n(p, c));
    }
    Ok(CanonicalRep::new(LatticePoint::origin(), parts, true).expect("closed form yields sorted primitive parts"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn verts(d: &NewtonDiagram) -> Vec<(i64, i64)> {
        d.vertices().iter().map(|v| (i64::try_from(&v.x).unwrap(), i64::try_from(&v.y).unwrap())).collect()
    }

    fn support(points: &[(i64, i64)]) -> NewtonDiagram {
        NewtonDiagram::from_support(points.iter().map(|&(x, y)| LatticePoint::new(x, y))).unwrap()
    }

    #[test]
    fn derivatives_of_twelve_five() {
        let d = NewtonDiagram::elementary(12, 5);
        assert_eq!(d.symbolic_derivative(1).unwrap(), NewtonDiagram::elementary(10, 4));
        assert_eq!(d.symbolic_derivative(1).unwrap().canonical_rep(true).to_string(), "2(5,2)");
        assert_eq!(verts(&d.trunc(2).unwrap()), [(0, 5), (5, 3), (8, 2)]);
        let d2 = d.symbolic_derivative(2).unwrap();
        assert_eq!(verts(&d2), [(0, 3), (5, 1), (8, 0)]);
        assert_eq!(d2.canonical_rep(false).to_string(), "(3,1)+(5,2)");
        assert_eq!(d.derivative_closed_form(2), d2);
    }

    #[test]
    fn closed_form_examples() {
        let show = |m: i64, n: i64| elementary_derivative_closed_form(&b(m), &b(n)).unwrap().to_string();
        assert_eq!(show(12, 5), "2(5,2)");
        assert_eq!(show(31, 4), "3(8,1)");
        assert_eq!(show(4, 3), "(3,2)");
        assert_eq!(show(7, 5), "2(3,2)");
        assert_eq!(show(15, 2), "(8,1)");
        assert_eq!(show(9, 1), "(0,0)");
        assert!(matches!(elementary_derivative_closed_form(&b(12), &b(4)), Err(DiagramError::NotCoprime { .. })));
        assert!(matches!(elementary_derivative_closed_form(&b(3), &b(5)), Err(DiagramError::InvalidRange { .. })));
        assert!(matches!(elementary_derivative_closed_form(&b(3), &b(0)), Err(DiagramError::InvalidRange { .. })));
    }

    #[test]
    fn closed_form_matches_lattice_for_small_coprime_pairs() {
        for m in 2..80i64 {
            for n in 1..m {
                if num_integer::gcd(m, n) != 1 {
                    continue;
                }
                let lattice = NewtonDiagram::elementary(m, n).symbolic_derivative(1).unwrap();
                let closed = elementary_derivative_closed_form(&b(m), &b(n)).unwrap();
                assert_eq!(closed.to_diagram(), lattice, "({m},{n})");
            }
        }
    }

    #[test]
    fn first_derivative_of_primitive_parts_below_the_diagonal() {
        for (m, n, want) in [(1, 2, vec![(1, 1)]), (1, 3, vec![(1, 2)]), (2, 3, vec![(1, 1), (1, 1)])] {
            let runs = primitive_first_derivative(&Part::new(m, n));
            let got: Vec<(i64, i64)> = runs
                .iter()
                .flat_map(|(c, p)| {
                    std::iter::repeat_n(
                        (i64::try_from(&p.m).unwrap(), i64::try_from(&p.n).unwrap()),
                        usize::try_from(c).unwrap(),
                    )
                })
                .collect();
            assert_eq!(got, want, "({m},{n})");
        }
    }

    #[test]
    fn derivative_past_the_height_is_a_quadrant() {
        let d = NewtonDiagram::elementary(7, 3);
        for k in 3..6 {
            assert_eq!(verts(&d.symbolic_derivative(k).unwrap()), [(0, 0)]);
            assert_eq!(verts(&d.derivative_closed_form(k)), [(0, 0)]);
        }
        assert_eq!(verts(&NewtonDiagram::elementary(5, 1).symbolic_derivative(1).unwrap()), [(0, 0)]);
    }

    #[test]
    fn iterated_closed_form_matches_lattice_on_composite_diagrams() {
        let cases: &[&[(i64, i64)]] = &[
            &[(0, 10), (8, 4), (18, 0)],
            &[(0, 7), (1, 3), (6, 1), (20, 0)],
            &[(2, 9), (3, 4), (9, 2)],
            &[(4, 6)],
            &[(0, 12), (31, 8), (43, 3), (50, 0)],
        ];
        for pts in cases {
            let d = support(pts);
            for k in 0..15 {
                assert_eq!(d.derivative_closed_form(k), d.symbolic_derivative(k).unwrap(), "{d} k={k}");
            }
        }
    }

    #[test]
    fn streamed_derivatives_agree_with_direct_ones() {
        let d = support(&[(3, 12), (31, 8), (43, 3), (50, 0)]);
        for (k, dk) in d.closed_form_derivatives().take(16).enumerate() {
            assert_eq!(dk, d.derivative_closed_form(k as u64 + 1), "k={}", k + 1);
        }
    }

    #[test]
    fn split_on_composite_diagram() {
        // (31,4) ⊕ (4,3): the steep part alone carries the first derivative.
        let d = NewtonDiagram::elementary(31, 4).minkowski_sum(&NewtonDiagram::elementary(4, 3));
        let (r, l) = d.split_derivative(1, 1).unwrap();
        assert_eq!(r.canonical_rep(true).to_string(), "3(8,1)");
        assert_eq!(l, NewtonDiagram::elementary(4, 3));
        assert_eq!(r.minkowski_sum(&l), d.symbolic_derivative(1).unwrap());
        assert!(matches!(d.split_derivative(5, 1), Err(DiagramError::SplitTooDeep { .. })));
        assert!(matches!(d.split_derivative(1, 3), Err(DiagramError::SplitIndexOutOfRange { .. })));
        let raised = d.translate(&LatticePoint::new(0, 1));
        assert_eq!(raised.split_derivative(1, 1), Err(DiagramError::NotConvenient));
    }

    #[test]
    fn oversized_lattices_are_refused() {
        let big: BigInt = "1000000000000000000000000".parse().unwrap();
        let d = NewtonDiagram::elementary(big.clone(), big + 1);
        assert!(matches!(d.symbolic_derivative(1), Err(DiagramError::LatticeTooLarge { .. })));
        let tall = NewtonDiagram::elementary(3, (1i64 << 40) + 1);
        assert!(matches!(tall.symbolic_derivative(1), Err(DiagramError::LatticeTooLarge { .. })));
    }

    #[test]
    fn closed_form_handles_huge_coordinates() {
        let m: BigInt = "100000000000000000000000000001".parse().unwrap();
        let d = NewtonDiagram::elementary(m.clone(), 2);
        // m/2 = [h; 2] with h = (m-1)/2, so (m,2)^(1) = (h+1, 1)
        let got = d.derivative_closed_form(1).canonical_rep(false);
        let half = (&m - 1) / 2;
        assert_eq!(got.parts(), &[Part { m: half + 1, n: b(1) }]);
    }
}
