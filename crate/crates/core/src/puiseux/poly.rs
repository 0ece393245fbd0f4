//! Sparse bivariate polynomials `Σ a_{ij} x^i y^j` over ℚ, known exactly for
//! `i < T` when a truncation bound `T` is present.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{min_bound, PuiseuxError, PuiseuxSeries};
use crate::diagram::{LatticePoint, NewtonDiagram};
use crate::num::{fmt_q, JsonRational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PolyJson", into = "PolyJson")]
pub struct BivariatePoly {
    terms: BTreeMap<(u64, u64), BigRational>,
    trunc: Option<u64>,
}

/// Newton diagram of a possibly truncated polynomial. `certified` is false
/// when terms beyond the truncation bound could still change the polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservedDiagram {
    pub diagram: NewtonDiagram,
    pub certified: bool,
}

type Rows = Vec<Vec<BigRational>>;

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

/// `a·b` keeping only exponents `< limit`.
fn mul_dense(a: &[BigRational], b: &[BigRational], limit: Option<usize>) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let len = a.len() + b.len() - 1;
    let len = limit.map_or(len, |l| len.min(l));
    let mut out = vec![BigRational::zero(); len];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate() {
            if i + j >= len {
                break;
            }
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

fn add_into(acc: &mut Vec<BigRational>, b: &[BigRational]) {
    if acc.len() < b.len() {
        acc.resize(b.len(), BigRational::zero());
    }
    for (a, x) in acc.iter_mut().zip(b) {
        *a += x;
    }
    trim(acc);
}

fn limit_usize(t: Option<u64>) -> Option<usize> {
    t.map(|t| usize::try_from(t).unwrap_or(usize::MAX))
}

impl BivariatePoly {
    /// Sums repeated monomials, drops zeros and anything at `i ≥ trunc`.
    pub fn new<I>(terms: I, trunc: Option<u64>) -> Self
    where
        I: IntoIterator<Item = ((u64, u64), BigRational)>,
    {
        let mut map: BTreeMap<(u64, u64), BigRational> = BTreeMap::new();
        for ((i, j), a) in terms {
            if trunc.is_some_and(|t| i >= t) {
                continue;
            }
            *map.entry((i, j)).or_insert_with(BigRational::zero) += a;
        }
        map.retain(|_, a| !a.is_zero());
        BivariatePoly { terms: map, trunc }
    }

    pub fn from_int_terms(terms: &[((u64, u64), i64)]) -> Self {
        Self::new(terms.iter().map(|&(ij, a)| (ij, BigRational::from_integer(a.into()))), None)
    }

    pub fn zero() -> Self {
        BivariatePoly { terms: BTreeMap::new(), trunc: None }
    }

    pub fn terms(&self) -> &BTreeMap<(u64, u64), BigRational> {
        &self.terms
    }

    pub fn trunc(&self) -> Option<u64> {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u64, j: u64) -> BigRational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Degree in `y`, or `None` for the zero polynomial.
    pub fn deg_y(&self) -> Option<u64> {
        self.terms.keys().map(|&(_, j)| j).max()
    }

    /// The coefficient of `y^j` as a map `i ↦ a_{ij}`.
    pub fn y_coeff(&self, j: u64) -> BTreeMap<u64, BigRational> {
        self.terms.iter().filter(|((_, jj), _)| *jj == j).map(|(&(i, _), a)| (i, a.clone())).collect()
    }

    pub(crate) fn to_rows(&self) -> Rows {
        let deg = self.deg_y().map_or(0, |d| d as usize + 1);
        let mut rows: Rows = vec![Vec::new(); deg];
        for (&(i, j), a) in &self.terms {
            let row = &mut rows[j as usize];
            let i = i as usize;
            if row.len() <= i {
                row.resize(i + 1, BigRational::zero());
            }
            row[i] = a.clone();
        }
        rows
    }

    pub(crate) fn from_rows(rows: Rows, trunc: Option<u64>) -> Self {
        let terms = rows
            .into_iter()
            .enumerate()
            .flat_map(|(j, row)| row.into_iter().enumerate().map(move |(i, a)| ((i as u64, j as u64), a)));
        Self::new(terms, trunc)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.terms.iter().map(|(&k, a)| (k, a * c)), self.trunc)
    }

    pub fn add(&self, other: &Self) -> Self {
        let trunc = min_bound(self.trunc, other.trunc);
        Self::new(self.terms.iter().chain(&other.terms).map(|(&k, a)| (k, a.clone())), trunc)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let trunc = match (self.is_zero() && self.trunc.is_none(), other.is_zero() && other.trunc.is_none()) {
            (true, _) | (_, true) => None,
            _ => min_bound(self.trunc, other.trunc),
        };
        let mut out: BTreeMap<(u64, u64), BigRational> = BTreeMap::new();
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &other.terms {
                if trunc.is_some_and(|t| i1 + i2 >= t) {
                    continue;
                }
                *out.entry((i1 + i2, j1 + j2)).or_insert_with(BigRational::zero) += a * b;
            }
        }
        Self::new(out, trunc)
    }

    /// `∂^k/∂y^k`.
    pub fn derivative_y(&self, k: u64) -> Result<Self, PuiseuxError> {
        if k == 0 {
            return Ok(self.clone());
        }
        let degree = self.deg_y().map_or(-1, |d| d as i64);
        if k as i64 > degree {
            return Err(PuiseuxError::OrderExceedsDegree { k, degree });
        }
        let terms = self.terms.iter().filter(|((_, j), _)| *j >= k).map(|(&(i, j), a)| {
            let falling: BigInt = (j - k + 1..=j).map(BigInt::from).product();
            ((i, j - k), a * BigRational::from_integer(falling))
        });
        Ok(Self::new(terms, self.trunc))
    }

    /// `f(x^{n_sub}, y + λ(x^{n_sub}))`. The result is known below
    /// `n_sub·T_f` and below the bound inherited from `λ`.
    pub fn hat_transform(&self, n_sub: u64, lambda: &PuiseuxSeries) -> Result<Self, PuiseuxError> {
        if n_sub == 0 {
            return Err(PuiseuxError::InvalidDenominator);
        }
        let (l, l_trunc) = lambda.compose_power(n_sub)?;
        let trunc = min_bound(self.trunc.map(|t| t.saturating_mul(n_sub)), l_trunc);
        let limit = limit_usize(trunc);
        let n = n_sub as usize;
        let rows: Rows = self
            .to_rows()
            .into_iter()
            .map(|row| {
                let mut out = Vec::new();
                for (i, a) in row.into_iter().enumerate() {
                    if a.is_zero() || limit.is_some_and(|l| i * n >= l) {
                        continue;
                    }
                    if out.len() <= i * n {
                        out.resize(i * n + 1, BigRational::zero());
                    }
                    out[i * n] = a;
                }
                out
            })
            .collect();
        // Horner in y: acc ← acc·(y + L) + row_j.
        let mut acc: Rows = Vec::new();
        for row in rows.into_iter().rev() {
            let mut next: Rows = vec![Vec::new(); acc.len() + 1];
            for (r, coeff) in acc.iter().enumerate() {
                add_into(&mut next[r + 1], coeff);
                let shifted = mul_dense(coeff, &l, limit);
                add_into(&mut next[r], &shifted);
            }
            add_into(&mut next[0], &row);
            acc = next;
        }
        Ok(Self::from_rows(acc, trunc))
    }

    /// Newton diagram of the known support.
    pub fn diagram_of(&self) -> Result<ObservedDiagram, PuiseuxError> {
        if self.terms.is_empty() {
            return Err(if self.trunc.is_some() {
                PuiseuxError::TruncationTooShort
            } else {
                PuiseuxError::ZeroPolynomial
            });
        }
        let diagram = NewtonDiagram::from_support(self.terms.keys().map(|&(i, j)| LatticePoint::new(i, j)))
            .expect("nonempty support in ℕ²");
        // Unknown terms have i ≥ T, beyond every stored point; they cannot
        // cut the polygon once it reaches the x-axis.
        let certified = self.trunc.is_none() || diagram.last_vertex().y.is_zero();
        Ok(ObservedDiagram { diagram, certified })
    }

    /// Coefficients, by power of `y`, of the terms lying on the segment
    /// `[a,b]`, with the lowest power of `y` on the segment factored out.
    pub fn edge_polynomial(&self, a: &LatticePoint, b: &LatticePoint) -> Vec<BigRational> {
        let (dx, dy) = (&b.x - &a.x, &b.y - &a.y);
        let mut out: Vec<BigRational> = Vec::new();
        let j_min = b.y.clone();
        for (&(i, j), c) in &self.terms {
            let (px, py) = (BigInt::from(i) - &a.x, BigInt::from(j) - &a.y);
            let on_line = (&dx * &py - &dy * &px).is_zero();
            let between = BigInt::from(i) >= a.x && BigInt::from(i) <= b.x;
            if on_line && between {
                let k = usize::try_from(BigInt::from(j) - &j_min).expect("on the segment");
                if out.len() <= k {
                    out.resize(k + 1, BigRational::zero());
                }
                out[k] = c.clone();
            }
        }
        out
    }

    /// Whether the edge polynomial `f_S(1,y)` has only simple nonzero
    /// roots. `[a,b]` must be a compact edge of the Newton polygon.
    pub fn edge_poly_squarefree(&self, a: &LatticePoint, b: &LatticePoint) -> Result<bool, PuiseuxError> {
        let observed = self.diagram_of()?;
        let is_edge = observed.diagram.compact_edges().any(|(p, q)| p == a && q == b);
        if !is_edge {
            return Err(PuiseuxError::EdgeNotOnPolygon(format!("[{a},{b}]")));
        }
        let p = self.edge_polynomial(a, b);
        Ok(upoly::gcd(&p, &upoly::derivative(&p)).len() <= 1)
    }

    /// The `(w_x, w_y)`-initial form and its weight. Fails when terms
    /// hidden by the truncation could reach the same weight.
    pub fn initial_form(&self, wx: u64, wy: u64) -> Result<(BigInt, Self), PuiseuxError> {
        let weight = |i: u64, j: u64| BigInt::from(wx) * i + BigInt::from(wy) * j;
        let min = self.terms.keys().map(|&(i, j)| weight(i, j)).min();
        let Some(min) = min else {
            return Err(if self.trunc.is_some() {
                PuiseuxError::TruncationTooShort
            } else {
                PuiseuxError::ZeroPolynomial
            });
        };
        if let Some(t) = self.trunc {
            if BigInt::from(wx) * t <= min {
                return Err(PuiseuxError::TruncationTooShort);
            }
        }
        let form: Vec<_> =
            self.terms.iter().filter(|(&(i, j), _)| weight(i, j) == min).map(|(&k, a)| (k, a.clone())).collect();
        Ok((min, Self::new(form, None)))
    }

    /// `f(x, α(x))` as a Puiseux series over the denominator of `α`.
    pub fn eval_series(&self, alpha: &PuiseuxSeries) -> PuiseuxSeries {
        let n = alpha.denom();
        let coeff_series = |row: &[BigRational]| {
            let terms = row.iter().enumerate().map(|(i, a)| (i as u64 * n, a.clone()));
            PuiseuxSeries::new(n, terms, self.trunc.map(|t| t * n)).expect("positive denominator")
        };
        let mut acc = PuiseuxSeries::new(n, Vec::new(), None).expect("positive denominator");
        for row in self.to_rows().iter().rev() {
            acc = acc.mul(alpha).add(&coeff_series(row));
        }
        acc
    }
}

impl fmt::Display for BivariatePoly {
    /// Terms ordered by decreasing `y`-degree, then increasing `x`-degree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&(u64, u64)> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let mut out = String::new();
        for &(i, j) in keys {
            let c = &self.terms[&(i, j)];
            let mut mono = Vec::new();
            if i > 0 {
                mono.push(if i == 1 { "x".to_string() } else { format!("x^{i}") });
            }
            if j > 0 {
                mono.push(if j == 1 { "y".to_string() } else { format!("y^{j}") });
            }
            let mag = c.abs();
            let body = match (mono.is_empty(), mag.is_one()) {
                (true, _) => fmt_q(&mag),
                (false, true) => mono.join("*"),
                (false, false) => format!("{}*{}", fmt_q(&mag), mono.join("*")),
            };
            if c.is_negative() {
                out.push_str(if out.is_empty() { "-" } else { " - " });
            } else if !out.is_empty() {
                out.push_str(" + ");
            }
            out.push_str(&body);
        }
        if let Some(t) = self.trunc {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            out.push_str(&format!("O(x^{t})"));
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyJson {
    trunc: Option<u64>,
    terms: Vec<(u64, u64, JsonRational)>,
}

impl TryFrom<PolyJson> for BivariatePoly {
    type Error = PuiseuxError;
    fn try_from(j: PolyJson) -> Result<Self, PuiseuxError> {
        let mut seen = std::collections::BTreeSet::new();
        for (i, jj, _) in &j.terms {
            if !seen.insert((*i, *jj)) {
                return Err(PuiseuxError::InvalidPolynomial(format!("monomial ({i},{jj}) listed twice")));
            }
        }
        Ok(BivariatePoly::new(j.terms.into_iter().map(|(i, jj, c)| ((i, jj), c.0)), j.trunc))
    }
}

impl From<BivariatePoly> for PolyJson {
    fn from(p: BivariatePoly) -> Self {
        PolyJson { trunc: p.trunc, terms: p.terms.into_iter().map(|((i, j), c)| (i, j, JsonRational(c))).collect() }
    }
}

/// Dense univariate polynomials over ℚ, lowest degree first.
pub(crate) mod upoly {
    use num_rational::BigRational;
    use num_traits::Zero;

    use super::trim;

    pub fn derivative(p: &[BigRational]) -> Vec<BigRational> {
        let mut out: Vec<BigRational> =
            p.iter().enumerate().skip(1).map(|(k, a)| a * BigRational::from_integer(k.into())).collect();
        trim(&mut out);
        out
    }

    fn rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let mut r = a.to_vec();
        trim(&mut r);
        let lead = b.last().expect("nonzero divisor");
        while r.len() >= b.len() && !r.is_empty() {
            let shift = r.len() - b.len();
            let factor = r.last().expect("nonempty") / lead;
            for (k, c) in b.iter().enumerate() {
                r[shift + k] -= &factor * c;
            }
            trim(&mut r);
        }
        r
    }

    /// Monic gcd; the empty vector is the zero polynomial.
    pub fn gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let (mut x, mut y) = (a.to_vec(), b.to_vec());
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y);
            x = y;
            y = r;
        }
        if let Some(lead) = x.last().cloned() {
            if !lead.is_zero() {
                for c in &mut x {
                    *c /= &lead;
                }
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64) -> BigRational {
        BigRational::from_integer(a.into())
    }

    fn cusp() -> BivariatePoly {
        BivariatePoly::from_int_terms(&[((0, 2), 1), ((3, 0), -1)])
    }

    fn pt(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    #[test]
    fn y_derivatives() {
        assert_eq!(cusp().derivative_y(1).unwrap(), BivariatePoly::from_int_terms(&[((0, 1), 2)]));
        assert_eq!(cusp().derivative_y(2).unwrap(), BivariatePoly::from_int_terms(&[((0, 0), 2)]));
        assert_eq!(cusp().derivative_y(3), Err(PuiseuxError::OrderExceedsDegree { k: 3, degree: 2 }));
        assert_eq!(cusp().derivative_y(0).unwrap(), cusp());
    }

    #[test]
    fn hat_transforms() {
        let zero: PuiseuxSeries = "0".parse().unwrap();
        let got = cusp().hat_transform(2, &zero).unwrap();
        assert_eq!(got, BivariatePoly::from_int_terms(&[((0, 2), 1), ((6, 0), -1)]));
        let lam: PuiseuxSeries = "x^(3/2)".parse().unwrap();
        let got = cusp().hat_transform(2, &lam).unwrap();
        assert_eq!(got, BivariatePoly::from_int_terms(&[((0, 2), 1), ((3, 1), 2)]));
        let bad: PuiseuxSeries = "x^(4/3)".parse().unwrap();
        assert!(matches!(cusp().hat_transform(2, &bad), Err(PuiseuxError::NonIntegralSubstitution { .. })));
    }

    #[test]
    fn hat_transform_tracks_truncation() {
        let f = BivariatePoly::new(vec![((0, 2), q(1)), ((3, 0), q(-1))], Some(5));
        let lam: PuiseuxSeries = "x^(3/2)+O(x^2)".parse().unwrap();
        let got = f.hat_transform(2, &lam).unwrap();
        assert_eq!(got.trunc(), Some(4));
        assert_eq!(got, BivariatePoly::new(vec![((0, 2), q(1)), ((3, 1), q(2))], Some(4)));
    }

    #[test]
    fn diagrams_and_certification() {
        let d = cusp().diagram_of().unwrap();
        assert_eq!(d.diagram, NewtonDiagram::elementary(3, 2));
        assert!(d.certified);
        let lin = BivariatePoly::from_int_terms(&[((0, 1), 2)]);
        let d = lin.diagram_of().unwrap();
        assert_eq!(d.diagram.vertices(), &[pt(0, 1)]);
        assert_eq!(d.diagram.compact_edges().count(), 0);
        let open = BivariatePoly::new(vec![((0, 2), q(1)), ((1, 1), q(1))], Some(3));
        assert!(!open.diagram_of().unwrap().certified);
        let closed = BivariatePoly::new(vec![((0, 2), q(1)), ((2, 0), q(1))], Some(3));
        assert!(closed.diagram_of().unwrap().certified);
        assert_eq!(BivariatePoly::zero().diagram_of(), Err(PuiseuxError::ZeroPolynomial));
    }

    #[test]
    fn edge_squarefreeness() {
        assert!(cusp().edge_poly_squarefree(&pt(0, 2), &pt(3, 0)).unwrap());
        let double = BivariatePoly::from_int_terms(&[((0, 2), 1), ((1, 1), -2), ((2, 0), 1)]);
        assert!(!double.edge_poly_squarefree(&pt(0, 2), &pt(2, 0)).unwrap());
        let sq = BivariatePoly::from_int_terms(&[((0, 4), 1), ((2, 2), -2), ((4, 0), 1)]);
        assert!(!sq.edge_poly_squarefree(&pt(0, 4), &pt(4, 0)).unwrap());
        let ok = BivariatePoly::from_int_terms(&[((0, 4), 1), ((2, 2), -3), ((4, 0), 1)]);
        assert!(ok.edge_poly_squarefree(&pt(0, 4), &pt(4, 0)).unwrap());
        assert!(matches!(cusp().edge_poly_squarefree(&pt(0, 2), &pt(2, 0)), Err(PuiseuxError::EdgeNotOnPolygon(_))));
    }

    #[test]
    fn nonzero_roots_only_matter() {
        // y^3 (y - x)·(y + x) = y^5 - x^2 y^3: edge from (0,5) to (2,3)
        let f = BivariatePoly::from_int_terms(&[((0, 5), 1), ((2, 3), -1)]);
        assert!(f.edge_poly_squarefree(&pt(0, 5), &pt(2, 3)).unwrap());
    }

    #[test]
    fn initial_forms() {
        let f = BivariatePoly::from_int_terms(&[((0, 2), 1), ((3, 0), -1), ((2, 2), 5)]);
        let (w, form) = f.initial_form(2, 3).unwrap();
        assert_eq!(w, BigInt::from(6));
        assert_eq!(form, cusp());
        let t = BivariatePoly::new(vec![((0, 2), q(1))], Some(3));
        assert_eq!(t.initial_form(2, 3), Err(PuiseuxError::TruncationTooShort));
    }

    #[test]
    fn evaluation_at_a_root_vanishes() {
        let a: PuiseuxSeries = "x^(3/2)".parse().unwrap();
        let v = cusp().eval_series(&a);
        assert!(v.terms().is_empty() && v.is_exact());
    }

    #[test]
    fn json_round_trip() {
        let f = BivariatePoly::new(vec![((0, 2), q(1)), ((3, 0), BigRational::new((-3).into(), 2.into()))], Some(9));
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"trunc":9,"terms":[[0,2,"1"],[3,0,"-3/2"]]}"#);
        assert_eq!(serde_json::from_str::<BivariatePoly>(&s).unwrap(), f);
        assert!(serde_json::from_str::<BivariatePoly>(r#"{"trunc":null,"terms":[[0,1,"1"],[0,1,"2"]]}"#).is_err());
        assert!(serde_json::from_str::<BivariatePoly>(r#"{"trunc":null,"terms":[[0,1,"1/0"]]}"#).is_err());
    }

    #[test]
    fn display() {
        let f = BivariatePoly::from_int_terms(&[((0, 12), 1), ((2, 11), -12), ((4, 10), 66), ((0, 0), 3)]);
        assert_eq!(f.to_string(), "y^12 - 12*x^2*y^11 + 66*x^4*y^10 + 3");
    }
}
