//! Exact brute-force check of a polar prediction on explicit branches.
//!
//! A witness branch of the class is sampled from a seed, its minimal
//! polynomial is formed exactly, and for every level `ℓ` with `e_{ℓ-1} > k`
//! the hat diagram of `∂^k f̂/∂y^k` is compared with the symbolic
//! derivative and with the prediction: steep parts against the z-factors,
//! the edge at inclination `m_ℓ/n_ℓ` against the aggregate degree of the
//! remaining factors, and the weighted initial form of `f̂` against its
//! closed form. Coefficient choices that land in the non-generic locus
//! show up as degenerate and are resampled.

mod check;
mod witness;

use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::charclass::{CharError, CharSequence};
use crate::num::{fmt_q, JsonInt};
use crate::polar::{predict, FactorKind, PolarError, PolarPrediction};
use crate::puiseux::PuiseuxError;

pub use check::{
    check_initial_form, check_lemma_nd, expected_hat_diagram, expected_initial_form, CheckStatus, EdgeCheck,
    InitialFormResult, LemmaNdResult, SteepFactor,
};
pub use witness::{allowed_exponents, default_x_trunc, WitnessBranch};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Polar(#[from] PolarError),
    #[error(transparent)]
    Witness(#[from] PuiseuxError),
    #[error("derivative order {k} is not below e_{{l-1}} = {e_prev} for l = {l}")]
    OrderTooLarge { k: u64, l: usize, e_prev: BigInt },
    #[error("characteristic {0} is too large for explicit verification")]
    TooLarge(String),
    #[error("no seeds given")]
    NoSeeds,
    #[error("root has characteristic {found}, not {expected}")]
    CharMismatch { expected: String, found: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Terms of the sampled root past `b_h`, in steps of `e_h`; `None`
    /// means `b₀`.
    pub extra_terms: Option<u64>,
    /// x-truncation of the minimal polynomial; `None` picks one that
    /// suffices for every level.
    pub x_trunc: Option<u64>,
    /// Seeds tried in total before giving up on finding a generic witness.
    pub max_seeds: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { extra_terms: None, x_trunc: None, max_seeds: 8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    AllSeedsDegenerate,
    Unknown,
}

/// Prediction and observation side by side for one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupCheck {
    pub l: usize,
    pub status: CheckStatus,
    pub lemma_nd: LemmaNdResult,
    pub predicted_steep: Vec<SteepFactor>,
    pub steep_match: Option<bool>,
    pub predicted_aggregate: JsonInt,
    pub aggregate_match: Option<bool>,
    pub initial_form: InitialFormResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeedReport {
    pub seed: Option<u64>,
    pub root: String,
    pub x_trunc: Option<u64>,
    pub status: CheckStatus,
    pub groups: Vec<GroupCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub characteristic: Vec<JsonInt>,
    pub k: u64,
    pub verdict: Verdict,
    pub passing_seed: Option<u64>,
    pub degenerate_seeds: usize,
    pub seeds: Vec<SeedReport>,
}

fn predicted_steep(p: &PolarPrediction, l: usize) -> Vec<SteepFactor> {
    p.group(l)
        .map(|g| {
            g.factors
                .iter()
                .filter(|f| f.kind == FactorKind::Z)
                .map(|f| SteepFactor {
                    part: f.part.clone().expect("z-factors carry their part"),
                    contact: f.contact_with_semiroot.clone(),
                    multiplicity: f.multiplicity.clone(),
                })
                .collect()
        })
        .unwrap_or_default()
}

/// All checks for one witness against a prediction of the same class.
pub fn verify_witness(w: &WitnessBranch, prediction: &PolarPrediction) -> Result<SeedReport, VerifyError> {
    if w.cs != prediction.char {
        return Err(VerifyError::CharMismatch { expected: prediction.char.to_string(), found: w.cs.to_string() });
    }
    let k = prediction.k;
    let levels: Vec<usize> = prediction.groups.iter().map(|g| g.index).collect();
    let groups = levels
        .par_iter()
        .map(|&l| {
            let h = check::hat(w, l)?;
            let nd = check::lemma_nd_on(w, l, k, &h)?;
            let init = check::initial_form_on(w, l, &h)?;
            let predicted = predicted_steep(prediction, l);
            let aggregate = prediction.aggregate_height(l);
            let mut status = nd.status.worst(init.status);
            let mut steep_match = None;
            let mut aggregate_match = None;
            if nd.status == CheckStatus::Pass {
                let s = nd.steep_factors == predicted;
                let a = nd.aggregate_length.as_ref().is_some_and(|v| v.0 == aggregate);
                if !(s && a) {
                    status = CheckStatus::Contradiction;
                }
                steep_match = Some(s);
                aggregate_match = Some(a);
            }
            Ok(GroupCheck {
                l,
                status,
                lemma_nd: nd,
                predicted_steep: predicted,
                steep_match,
                predicted_aggregate: JsonInt(aggregate),
                aggregate_match,
                initial_form: init,
            })
        })
        .collect::<Result<Vec<_>, VerifyError>>()?;
    let status = groups.iter().map(|g| g.status).fold(CheckStatus::Pass, CheckStatus::worst);
    Ok(SeedReport { seed: w.seed, root: w.root.to_string(), x_trunc: w.trunc, status, groups })
}

fn verdict_of(seeds: &[SeedReport], explicit: bool) -> (Verdict, Option<u64>) {
    if seeds.iter().any(|s| s.status == CheckStatus::Contradiction) {
        return (Verdict::Fail, None);
    }
    if let Some(s) = seeds.iter().find(|s| s.status == CheckStatus::Pass) {
        return (Verdict::Pass, s.seed);
    }
    if seeds.iter().any(|s| s.status == CheckStatus::Degenerate) {
        // a caller-chosen branch that is degenerate is a failed check;
        // sampled ones only say that no generic witness was hit
        let all = seeds.iter().all(|s| s.status == CheckStatus::Degenerate);
        return match (explicit, all) {
            (true, _) => (Verdict::Fail, None),
            (false, true) => (Verdict::AllSeedsDegenerate, None),
            (false, false) => (Verdict::Unknown, None),
        };
    }
    (Verdict::Unknown, None)
}

fn report(p: &PolarPrediction, seeds: Vec<SeedReport>, explicit: bool) -> VerificationReport {
    let (verdict, passing_seed) = verdict_of(&seeds, explicit);
    VerificationReport {
        characteristic: p.char.bs().iter().cloned().map(JsonInt).collect(),
        k: p.k,
        verdict,
        passing_seed,
        degenerate_seeds: seeds.iter().filter(|s| s.status == CheckStatus::Degenerate).count(),
        seeds,
    }
}

/// Checks `predict(cs, k)` on witnesses sampled from `seeds`. When none of
/// them passes and none contradicts the prediction, further seeds after
/// the largest one given are drawn until `max_seeds` have been tried.
pub fn verify_prediction(
    cs: &CharSequence,
    k: u64,
    seeds: &[u64],
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    if seeds.is_empty() {
        return Err(VerifyError::NoSeeds);
    }
    let prediction = predict(cs, k)?;
    let small = witness::small_char(cs)?;
    let extra = opts.extra_terms.unwrap_or(small[0]);
    let run = |batch: &[u64]| -> Result<Vec<SeedReport>, VerifyError> {
        batch
            .par_iter()
            .map(|&s| verify_witness(&WitnessBranch::sample(cs, s, extra, opts.x_trunc)?, &prediction))
            .collect()
    };
    let mut done = run(seeds)?;
    let mut next = seeds.iter().max().expect("nonempty").saturating_add(1);
    while done.len() < opts.max_seeds {
        let (v, _) = verdict_of(&done, false);
        if matches!(v, Verdict::Pass | Verdict::Fail) {
            break;
        }
        let batch: Vec<u64> = (0..(opts.max_seeds - done.len()) as u64).map(|i| next + i).collect();
        next += batch.len() as u64;
        done.extend(run(&batch)?);
    }
    Ok(report(&prediction, done, false))
}

/// Checks the prediction for the class of `w` on that single branch. A
/// degenerate branch is reported as a failure.
pub fn verify_explicit(w: &WitnessBranch, k: u64) -> Result<VerificationReport, VerifyError> {
    let prediction = predict(&w.cs, k)?;
    let seed = verify_witness(w, &prediction)?;
    Ok(report(&prediction, vec![seed], true))
}

impl VerificationReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::AllSeedsDegenerate => "ALL SEEDS DEGENERATE",
            Verdict::Unknown => "UNKNOWN",
        };
        let chars: Vec<String> = self.characteristic.iter().map(|b| b.0.to_string()).collect();
        let _ = writeln!(s, "characteristic ({}), k = {}: {verdict}", chars.join(","), self.k);
        if let Some(seed) = self.passing_seed {
            let _ = writeln!(s, "passing seed: {seed}");
        }
        for r in &self.seeds {
            let who = r.seed.map_or("explicit root".to_string(), |v| format!("seed {v}"));
            let _ = writeln!(s, "\n{who}: {:?}", r.status);
            let _ = writeln!(s, "  root: {}", r.root);
            for g in &r.groups {
                let nd = &g.lemma_nd;
                let _ = writeln!(s, "  level {}: {:?}", g.l, g.status);
                let show = |d: &Option<crate::diagram::NewtonDiagram>| {
                    d.as_ref().map_or("undetermined".to_string(), |d| d.canonical_rep(false).to_string())
                };
                let _ = writeln!(s, "    expected hat diagram: {}", show(&nd.expected));
                let _ = writeln!(s, "    observed hat diagram: {}", show(&nd.observed));
                let steep: Vec<String> = nd
                    .steep_factors
                    .iter()
                    .map(|f| format!("{} (contact {}, degree {})", f.part, fmt_q(&f.contact), f.multiplicity))
                    .collect();
                let _ =
                    writeln!(s, "    steep parts: {}", if steep.is_empty() { "none".into() } else { steep.join(", ") });
                if let Some(m) = g.steep_match {
                    let _ = writeln!(s, "    steep parts match z-factors: {m}");
                }
                if let (Some(m), Some(len)) = (g.aggregate_match, &nd.aggregate_length) {
                    let _ = writeln!(
                        s,
                        "    aggregate at m_l/n_l: observed {}, predicted {} ({m})",
                        len.0, g.predicted_aggregate.0
                    );
                }
                let _ = writeln!(
                    s,
                    "    initial form (a = {}, b = {}): {:?}",
                    fmt_q(&g.initial_form.a.0),
                    g.initial_form.b.0,
                    g.initial_form.status
                );
                for note in nd.notes.iter().chain(&g.initial_form.notes) {
                    let _ = writeln!(s, "    note: {note}");
                }
            }
        }
        s
    }

    /// Process exit code: 0 pass, 2 fail, 3 undecided.
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 2,
            Verdict::AllSeedsDegenerate | Verdict::Unknown => 3,
        }
    }
}

/// Seeds `1..=n` as used by default.
pub fn default_seeds(n: u64) -> Vec<u64> {
    (1..=n).collect()
}

impl SeedReport {
    pub fn group(&self, l: usize) -> Option<&GroupCheck> {
        self.groups.iter().find(|g| g.l == l)
    }
}
