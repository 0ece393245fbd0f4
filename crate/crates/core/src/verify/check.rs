//! Diagram-level checks on one witness and one semiroot level `ℓ`.
//!
//! With `N = b₀/e_{ℓ-1}` and `λ_ℓ` the part of the root below `b_ℓ/b₀`,
//! the hat transform `f̂(x,y) = f(x^N, y + λ_ℓ(x^N))` has Newton diagram
//! `e_ℓ·(m_ℓ,n_ℓ) ⊕ L` with every part of `L` flatter than `m_ℓ/n_ℓ`. For
//! generic coefficients the diagram of `∂^k f̂/∂y^k` is the symbolic
//! derivative of that of `f̂`, and it is non-degenerate on every edge
//! steeper than `m_ℓ/n_ℓ`; each steep part `(M,N')` then accounts for a
//! factor of the polar with contact `M/(N·N')` with the semiroot.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::witness::WitnessBranch;
use super::VerifyError;
use crate::charclass::CharSequence;
use crate::diagram::{CanonicalRep, LatticePoint, NewtonDiagram, Part};
use crate::num::{JsonInt, JsonRational};
use crate::puiseux::{BivariatePoly, PuiseuxError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Unknown,
    Degenerate,
    Contradiction,
}

impl CheckStatus {
    /// The more serious of two outcomes.
    pub fn worst(self, other: Self) -> Self {
        self.max(other)
    }
}

/// A steep part of a hat diagram read as a polar factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteepFactor {
    pub part: Part,
    pub contact: BigRational,
    pub multiplicity: BigInt,
}

impl Serialize for SteepFactor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            part: [JsonInt; 2],
            contact: JsonRational,
            multiplicity: JsonInt,
        }
        Repr {
            part: [JsonInt(self.part.m.clone()), JsonInt(self.part.n.clone())],
            contact: JsonRational(self.contact.clone()),
            multiplicity: JsonInt(self.multiplicity.clone()),
        }
        .serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeCheck {
    pub from: LatticePoint,
    pub to: LatticePoint,
    pub squarefree: bool,
}

/// Outcome of comparing the hat diagram of `∂^k f̂/∂y^k` with the
/// symbolic derivative of the hat diagram of `f̂`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaNdResult {
    pub l: usize,
    pub status: CheckStatus,
    pub expected: Option<NewtonDiagram>,
    pub observed: Option<NewtonDiagram>,
    pub steep_edges: Vec<EdgeCheck>,
    pub steep_factors: Vec<SteepFactor>,
    /// Vertical length of the edge of inclination exactly `m_ℓ/n_ℓ`.
    pub aggregate_length: Option<JsonInt>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InitialFormResult {
    pub l: usize,
    pub status: CheckStatus,
    /// Expected `x`-exponent `b̄_ℓ - b_ℓ` of the monomial factor.
    pub b: JsonInt,
    pub a: JsonRational,
    pub notes: Vec<String>,
}

pub(super) struct Hat {
    pub n_sub: u64,
    pub fhat: BivariatePoly,
}

pub(super) fn hat(w: &WitnessBranch, l: usize) -> Result<Hat, VerifyError> {
    let cs = &w.cs;
    let n_sub = cs.semiroot_degree(l)?.to_u64().ok_or_else(|| VerifyError::TooLarge(cs.to_string()))?;
    let lambda = w.root.truncate_below(Some(&cs.exponent(l)));
    let fhat = w.f.hat_transform(n_sub, &lambda)?;
    Ok(Hat { n_sub, fhat })
}

fn inclination(a: &LatticePoint, b: &LatticePoint) -> BigRational {
    BigRational::new(&b.x - &a.x, &a.y - &b.y)
}

fn level_part(cs: &CharSequence, l: usize) -> (BigRational, Part) {
    let (m, n) = (cs.m(l).clone(), cs.n(l).clone());
    (BigRational::new(m.clone(), n.clone()), Part { m, n })
}

/// `R^(t₀) ⊕ (c-q-1)·R ⊕ L` with `R = (m_ℓ,n_ℓ)`, `k = q·n_ℓ + t₀`, where
/// `c` copies of `R` and the flatter parts `L` are read off the hat
/// diagram of `f̂`. Only `R^(t₀)` comes from the theory.
///
/// Returns the diagram and `c`.
pub fn expected_hat_diagram(
    cs: &CharSequence,
    l: usize,
    k: u64,
    fhat_diagram: &NewtonDiagram,
) -> Result<(NewtonDiagram, BigInt), VerifyError> {
    if l == 0 || l > cs.h() {
        return Err(VerifyError::Char(crate::charclass::CharError::IndexOutOfRange { index: l, h: cs.h() }));
    }
    let e_prev = cs.e(l - 1);
    if &BigInt::from(k) >= e_prev {
        return Err(VerifyError::OrderTooLarge { k, l, e_prev: e_prev.clone() });
    }
    let (slope, r) = level_part(cs, l);
    let rep = fhat_diagram.canonical_rep(true);
    let copies = BigInt::from(rep.parts().iter().filter(|p| **p == r).count());
    let flat: Vec<Part> = rep.parts().iter().filter(|p| p.inclination() < slope).cloned().collect();
    let (q, t0) = BigInt::from(k).div_rem(&r.n);
    let rest = &copies - &q - 1u32;
    if rest.is_negative() {
        return Err(VerifyError::OrderTooLarge { k, l, e_prev: e_prev.clone() });
    }
    let t0 = t0.to_u64().expect("t0 < n_l <= k");
    let steep = NewtonDiagram::elementary(r.m.clone(), r.n.clone()).derivative_closed_form(t0);
    let count = rest.to_usize().ok_or_else(|| VerifyError::TooLarge(cs.to_string()))?;
    let mut parts = vec![r; count];
    parts.extend(flat);
    let others = CanonicalRep::from_parts(parts, true).to_diagram().translate(rep.offset());
    Ok((steep.minkowski_sum(&others), copies))
}

fn unknown(l: usize, note: String) -> LemmaNdResult {
    LemmaNdResult {
        l,
        status: CheckStatus::Unknown,
        expected: None,
        observed: None,
        steep_edges: Vec::new(),
        steep_factors: Vec::new(),
        aggregate_length: None,
        notes: vec![note],
    }
}

/// Compares `N(∂^k f̂/∂y^k)` with the symbolic derivative and reads off the
/// steep factors.
pub fn check_lemma_nd(w: &WitnessBranch, l: usize, k: u64) -> Result<LemmaNdResult, VerifyError> {
    let h = hat(w, l)?;
    lemma_nd_on(w, l, k, &h)
}

pub(super) fn lemma_nd_on(w: &WitnessBranch, l: usize, k: u64, h: &Hat) -> Result<LemmaNdResult, VerifyError> {
    let cs = &w.cs;
    let fd = match h.fhat.diagram_of() {
        Ok(d) if d.certified => d.diagram,
        Ok(_) | Err(PuiseuxError::TruncationTooShort) => {
            return Ok(unknown(l, "hat diagram of f is not determined by the truncation".into()))
        }
        Err(e) => return Err(e.into()),
    };
    let (expected, copies) = expected_hat_diagram(cs, l, k, &fd)?;
    let mut notes = Vec::new();
    let mut status = CheckStatus::Pass;
    let (slope, _) = level_part(cs, l);
    if &copies != cs.e(l) {
        notes.push(format!("hat diagram of f has {copies} copies of (m_l,n_l), expected e_l = {}", cs.e(l)));
        status = CheckStatus::Contradiction;
    }
    if fd.canonical_rep(true).parts().iter().any(|p| p.inclination() > slope) {
        notes.push("hat diagram of f has a part steeper than m_l/n_l".into());
        status = CheckStatus::Contradiction;
    }

    let p = h.fhat.derivative_y(k)?;
    let observed = match p.diagram_of() {
        Ok(d) if d.certified => d.diagram,
        Ok(_) | Err(PuiseuxError::TruncationTooShort) => {
            let mut r = unknown(l, "hat diagram of the polar is not determined by the truncation".into());
            r.expected = Some(expected);
            return Ok(r);
        }
        Err(e) => return Err(e.into()),
    };

    if observed != expected {
        if observed.vertices().iter().all(|v| expected.contains(v)) {
            notes.push("observed diagram lies strictly inside the symbolic derivative".into());
            status = status.worst(CheckStatus::Degenerate);
        } else {
            notes.push("observed diagram is not contained in the symbolic derivative".into());
            status = CheckStatus::Contradiction;
        }
    }

    let mut steep_edges = Vec::new();
    let mut aggregate = BigInt::zero();
    for (a, b) in observed.compact_edges() {
        let inc = inclination(a, b);
        if inc > slope {
            let squarefree = p.edge_poly_squarefree(a, b)?;
            if !squarefree {
                notes.push(format!("edge [{a},{b}] has a repeated root"));
                status = status.worst(CheckStatus::Degenerate);
            }
            steep_edges.push(EdgeCheck { from: a.clone(), to: b.clone(), squarefree });
        } else if inc == slope {
            aggregate += &a.y - &b.y;
        }
    }
    let n_sub = BigInt::from(h.n_sub);
    let steep_factors = observed
        .canonical_rep(true)
        .parts()
        .iter()
        .filter(|part| part.inclination() > slope)
        .map(|part| SteepFactor {
            part: part.clone(),
            contact: BigRational::new(part.m.clone(), &part.n * &n_sub),
            multiplicity: &part.n * &n_sub,
        })
        .collect();
    Ok(LemmaNdResult {
        l,
        status,
        expected: Some(expected),
        observed: Some(observed),
        steep_edges,
        steep_factors,
        aggregate_length: Some(JsonInt(aggregate)),
        notes,
    })
}

/// `a·x^b·(y^{n_ℓ} - c^{n_ℓ}x^{m_ℓ})^{e_ℓ}` with `c` the root's coefficient
/// at `b_ℓ`, `a = ∏_{j<ℓ} n_j^{e_j}·a_{b_j}^{e_{j-1}-e_j}`, `b = b̄_ℓ - b_ℓ`.
pub fn expected_initial_form(w: &WitnessBranch, l: usize) -> Result<(BigRational, BigInt, BivariatePoly), VerifyError> {
    let cs = &w.cs;
    let pow = |q: &BigRational, e: &BigInt| -> Result<BigRational, VerifyError> {
        let e = e.to_i32().ok_or_else(|| VerifyError::TooLarge(cs.to_string()))?;
        Ok(num_traits::Pow::pow(q, e))
    };
    let mut a = BigRational::one();
    for j in 1..l {
        a *= pow(&BigRational::from_integer(cs.n(j).clone()), cs.e(j))?;
        a *= pow(&w.char_coeff(j), &(cs.e(j - 1) - cs.e(j)))?;
    }
    let b = cs.bbar(l)? - cs.b(l);
    let (m, n, e) = (cs.m(l), cs.n(l), cs.e(l));
    let small = |v: &BigInt| v.to_u64().ok_or_else(|| VerifyError::TooLarge(cs.to_string()));
    let (mu, nu, eu, bu) = (small(m)?, small(n)?, small(e)?, small(&b)?);
    let cn = -pow(&w.char_coeff(l), n)?;
    let mut terms = Vec::new();
    let mut binom = BigInt::one();
    for r in 0..=eu {
        // C(e,r)·y^{n r}·(-c^n x^m)^{e-r}
        let coeff = BigRational::from_integer(binom.clone()) * pow(&cn, &BigInt::from(eu - r))? * &a;
        terms.push(((bu + mu * (eu - r), nu * r), coeff));
        binom = binom * (eu - r) / (r + 1);
    }
    Ok((a, b, BivariatePoly::new(terms, None)))
}

/// Weighted initial form of `f̂` for weights `(n_ℓ, m_ℓ)` on `(x, y)`
/// against the closed form above, together with the position `(b̄_ℓ, 0)`
/// of the last vertex of the hat diagram.
pub fn check_initial_form(w: &WitnessBranch, l: usize) -> Result<InitialFormResult, VerifyError> {
    let h = hat(w, l)?;
    initial_form_on(w, l, &h)
}

pub(super) fn initial_form_on(w: &WitnessBranch, l: usize, h: &Hat) -> Result<InitialFormResult, VerifyError> {
    let cs = &w.cs;
    let (a, b, expected) = expected_initial_form(w, l)?;
    let mut res =
        InitialFormResult { l, status: CheckStatus::Pass, b: JsonInt(b), a: JsonRational(a), notes: Vec::new() };
    let (wx, wy) = (cs.n(l).to_u64(), cs.m(l).to_u64());
    let (Some(wx), Some(wy)) = (wx, wy) else {
        return Err(VerifyError::TooLarge(cs.to_string()));
    };
    match h.fhat.initial_form(wx, wy) {
        Ok((_, form)) => {
            if form != expected {
                res.status = CheckStatus::Contradiction;
                res.notes.push(format!("initial form {form} differs from {expected}"));
            }
        }
        Err(PuiseuxError::TruncationTooShort) => {
            res.status = CheckStatus::Unknown;
            res.notes.push("initial form is not determined by the truncation".into());
            return Ok(res);
        }
        Err(e) => return Err(e.into()),
    }
    match h.fhat.diagram_of() {
        Ok(d) if d.certified => {
            let bbar = cs.bbar(l)?;
            let want_last = LatticePoint { x: bbar.clone(), y: BigInt::zero() };
            let want_first = LatticePoint { x: BigInt::zero(), y: cs.multiplicity().clone() };
            if d.diagram.last_vertex() != &want_last || d.diagram.first_vertex() != &want_first {
                res.status = CheckStatus::Contradiction;
                res.notes.push(format!("hat diagram of f does not run from {want_first} to {want_last}"));
            }
        }
        _ => {
            res.status = res.status.worst(CheckStatus::Unknown);
            res.notes.push("hat diagram of f is not determined by the truncation".into());
        }
    }
    Ok(res)
}
