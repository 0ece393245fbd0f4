//! Factorization of the generic k-th polar `∂^k f/∂y^k` of a branch in a
//! given equisingularity class.
//!
//! For every `ℓ` with `e_{ℓ-1} > k` the polar has a factor `Γ^(ℓ)` whose
//! irreducible factors all have contact `b_ℓ/b₀` with `f`. With
//! `t ≡ k (mod n_ℓ)`, `0 < t ≤ n_ℓ`, and `Δ_ℓ = (m_ℓ, n_ℓ)`, each part
//! `(M_j, N_j)` of the long canonical form of `Δ_ℓ^(t)` gives a factor `z_j`
//! of degree `n₁⋯n_{ℓ-1}·N_j` with `cont(f_ℓ, z_j) = M_j/(n₁⋯n_{ℓ-1}N_j)`.
//! The remaining `min{e_ℓ, k} - ⌈k/n_ℓ⌉` factors `w_i` have degree `b₀/e_ℓ`,
//! contact `b_ℓ/b₀` with `f_ℓ` and the characteristic exponents of `f` up
//! to `b_ℓ/b₀`.

mod eggers;
mod report;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::charclass::CharSequence;
use crate::diagram::{CanonicalRep, NewtonDiagram, Part};
use crate::num::{JsonInt, JsonRational};

pub use eggers::{EggersWallTree, EwEdge, EwNode, EwNodeKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolarError {
    #[error("derivative order k = {k} must satisfy 1 <= k < b0 = {b0}")]
    OrderOutOfRange { k: u64, b0: BigInt },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FactorKind {
    Z,
    W,
}

impl fmt::Display for FactorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactorKind::Z => "z",
            FactorKind::W => "w",
        })
    }
}

/// One irreducible factor of the generic polar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarFactor {
    pub group: usize,
    pub kind: FactorKind,
    /// Position within its kind in the group, from 1.
    pub index: usize,
    pub part: Option<Part>,
    pub multiplicity: BigInt,
    pub contact_with_f: BigRational,
    pub contact_with_semiroot: BigRational,
    pub char_exponents: Vec<BigRational>,
}

impl PolarFactor {
    /// `z_j^(ℓ)` or `w_i^(ℓ)`.
    pub fn label(&self) -> String {
        format!("{}_{}^({})", self.kind, self.index, self.group)
    }

    pub fn is_smooth(&self) -> bool {
        self.char_exponents.is_empty()
    }
}

/// The factor `Γ^(ℓ)` together with the data it was derived from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarGroup {
    pub index: usize,
    pub m: BigInt,
    pub n: BigInt,
    pub t: u64,
    /// Long canonical form of `(m_ℓ, n_ℓ)^(t)`.
    pub derivative: CanonicalRep,
    pub w_count: BigInt,
    pub factors: Vec<PolarFactor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarPrediction {
    pub char: CharSequence,
    pub k: u64,
    pub groups: Vec<PolarGroup>,
}

/// Factorization of the generic `k`-th polar of the class.
pub fn predict(cs: &CharSequence, k: u64) -> Result<PolarPrediction, PolarError> {
    let b0 = cs.multiplicity();
    if k == 0 || &BigInt::from(k) >= b0 {
        return Err(PolarError::OrderOutOfRange { k, b0: b0.clone() });
    }
    let kb = BigInt::from(k);
    let groups = (1..=cs.h()).take_while(|&l| cs.e(l - 1) > &kb).map(|l| predict_group(cs, l, k)).collect();
    let p = PolarPrediction { char: cs.clone(), k, groups };
    debug_assert_eq!(p.total_multiplicity(), b0 - k);
    Ok(p)
}

fn predict_group(cs: &CharSequence, l: usize, k: u64) -> PolarGroup {
    let b0 = cs.multiplicity();
    let (m, n) = (cs.m(l).clone(), cs.n(l).clone());
    let kb = BigInt::from(k);
    let t = ((&kb - 1u32).mod_floor(&n) + 1u32).to_u64().expect("t <= k fits in u64");
    let derivative = NewtonDiagram::elementary(m.clone(), n.clone()).derivative_closed_form(t).canonical_rep(true);
    let lower = cs.semiroot_degree(l).expect("1 <= l <= h");
    let contact_with_f = cs.exponent(l);
    let inherited: Vec<BigRational> = (1..l).map(|i| cs.exponent(i)).collect();
    let below = if l == 1 { BigRational::zero() } else { cs.exponent(l - 1) };

    let mut factors = Vec::new();
    for (j, part) in derivative.parts().iter().enumerate() {
        let denom = &lower * &part.n;
        let contact = BigRational::new(part.m.clone(), denom.clone());
        assert!(contact > contact_with_f, "z-factor contact with the semiroot must exceed b_l/b0");
        let mut chars = inherited.clone();
        if part.n > BigInt::one() {
            assert!(contact > below, "appended characteristic exponent must exceed b_(l-1)/b0");
            chars.push(contact.clone());
        }
        factors.push(PolarFactor {
            group: l,
            kind: FactorKind::Z,
            index: j + 1,
            part: Some(part.clone()),
            multiplicity: denom,
            contact_with_f: contact_with_f.clone(),
            contact_with_semiroot: contact,
            char_exponents: chars,
        });
    }
    // Z-factors by descending contact with the semiroot; the long form is
    // ordered by inclination M/N, which is the same order.
    debug_assert!(factors.windows(2).all(|w| w[0].contact_with_semiroot >= w[1].contact_with_semiroot));

    let e_l = cs.e(l);
    let w_count = e_l.min(&kb).clone() - kb.div_ceil(&n);
    assert!(!w_count.is_negative(), "negative number of w-factors");
    let w_mult = b0 / e_l;
    let w_chars: Vec<BigRational> = (1..=l).map(|i| cs.exponent(i)).collect();
    let count = w_count.to_usize().expect("w-factor count bounded by k");
    for i in 0..count {
        factors.push(PolarFactor {
            group: l,
            kind: FactorKind::W,
            index: i + 1,
            part: None,
            multiplicity: w_mult.clone(),
            contact_with_f: contact_with_f.clone(),
            contact_with_semiroot: contact_with_f.clone(),
            char_exponents: w_chars.clone(),
        });
    }
    PolarGroup { index: l, m, n, t, derivative, w_count, factors }
}

impl PolarPrediction {
    /// `i_k = #{ℓ : e_{ℓ-1} > k}`.
    pub fn i_k(&self) -> usize {
        self.groups.len()
    }

    pub fn factors(&self) -> impl Iterator<Item = &PolarFactor> {
        self.groups.iter().flat_map(|g| g.factors.iter())
    }

    pub fn total_multiplicity(&self) -> BigInt {
        self.factors().map(|f| &f.multiplicity).sum()
    }

    pub fn group(&self, l: usize) -> Option<&PolarGroup> {
        self.groups.iter().find(|g| g.index == l)
    }

    /// Contact of two distinct factors: within a group the smaller contact
    /// with the semiroot, across groups the smaller contact with `f`.
    pub fn pairwise_contact(&self, a: &PolarFactor, b: &PolarFactor) -> BigRational {
        if a.group == b.group {
            a.contact_with_semiroot.clone().min(b.contact_with_semiroot.clone())
        } else {
            a.contact_with_f.clone().min(b.contact_with_f.clone())
        }
    }

    /// All unordered pairs of distinct factors with their contact, in the
    /// canonical factor order.
    pub fn contact_table(&self) -> Vec<(String, String, BigRational)> {
        let all: Vec<&PolarFactor> = self.factors().collect();
        let mut out = Vec::new();
        for (i, a) in all.iter().enumerate() {
            for b in &all[i + 1..] {
                out.push((a.label(), b.label(), self.pairwise_contact(a, b)));
            }
        }
        out
    }

    /// Vertical length, in the chart of the `ℓ`-th hat transform, carried
    /// by the factors whose roots there have order exactly `m_ℓ/n_ℓ`: the
    /// w-factors of group `ℓ` and every factor of a deeper group, each
    /// weighted by `e_{ℓ-1}/b₀`.
    pub fn aggregate_height(&self, l: usize) -> BigInt {
        let lower = self.char.semiroot_degree(l).expect("valid group index");
        self.factors()
            .filter(|f| f.group > l || (f.group == l && f.kind == FactorKind::W))
            .map(|f| &f.multiplicity / &lower)
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PredictionJson::from(self)).expect("prediction serializes")
    }

    pub fn text_report(&self) -> String {
        report::text(self)
    }

    pub fn eggers_wall(&self, include_branch: bool) -> EggersWallTree {
        EggersWallTree::build(self, include_branch)
    }
}

#[derive(Serialize)]
struct FactorJson {
    label: String,
    group: usize,
    kind: FactorKind,
    part: Option<[JsonInt; 2]>,
    multiplicity: JsonInt,
    contact_with_f: JsonRational,
    contact_with_semiroot: JsonRational,
    char_exponents: Vec<JsonRational>,
}

#[derive(Serialize)]
struct GroupJson {
    l: usize,
    m_l: JsonInt,
    n_l: JsonInt,
    t: u64,
    contact_with_f: JsonRational,
    derivative: String,
    derivative_parts: CanonicalRep,
    w_count: JsonInt,
    factors: Vec<FactorJson>,
}

#[derive(Serialize)]
struct ContactJson {
    a: String,
    b: String,
    contact: JsonRational,
}

#[derive(Serialize)]
struct PredictionJson {
    characteristic: Vec<JsonInt>,
    k: u64,
    i_k: usize,
    total_multiplicity: JsonInt,
    groups: Vec<GroupJson>,
    pairwise_contacts: Vec<ContactJson>,
}

impl From<&PolarPrediction> for PredictionJson {
    fn from(p: &PolarPrediction) -> Self {
        let factor = |f: &PolarFactor| FactorJson {
            label: f.label(),
            group: f.group,
            kind: f.kind,
            part: f.part.as_ref().map(|p| [JsonInt(p.m.clone()), JsonInt(p.n.clone())]),
            multiplicity: JsonInt(f.multiplicity.clone()),
            contact_with_f: JsonRational(f.contact_with_f.clone()),
            contact_with_semiroot: JsonRational(f.contact_with_semiroot.clone()),
            char_exponents: f.char_exponents.iter().cloned().map(JsonRational).collect(),
        };
        PredictionJson {
            characteristic: p.char.bs().iter().cloned().map(JsonInt).collect(),
            k: p.k,
            i_k: p.i_k(),
            total_multiplicity: JsonInt(p.total_multiplicity()),
            groups: p
                .groups
                .iter()
                .map(|g| GroupJson {
                    l: g.index,
                    m_l: JsonInt(g.m.clone()),
                    n_l: JsonInt(g.n.clone()),
                    t: g.t,
                    contact_with_f: JsonRational(p.char.exponent(g.index)),
                    derivative: g.derivative.to_string(),
                    derivative_parts: g.derivative.clone(),
                    w_count: JsonInt(g.w_count.clone()),
                    factors: g.factors.iter().map(factor).collect(),
                })
                .collect(),
            pairwise_contacts: p
                .contact_table()
                .into_iter()
                .map(|(a, b, c)| ContactJson { a, b, contact: JsonRational(c) })
                .collect(),
        }
    }
}
