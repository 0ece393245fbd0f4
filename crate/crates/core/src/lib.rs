//! Higher order polars of generic plane branches.
//!
//! The crate is organised around the objects needed to describe the
//! generic k-th polar `∂^k f/∂y^k` of a branch in a fixed equisingularity
//! class, and to check that description against explicit branches:
//!
//! * [`charclass`]: characteristic sequences `(b₀,…,b_h)` and their derived data.
//! * [`contfrac`]: continued fractions with convergents.
//! * [`diagram`]: lattice Newton diagrams, Minkowski sums, canonical
//!   decompositions and symbolic derivatives.
//! * [`puiseux`]: truncated Puiseux series and sparse bivariate polynomials
//!   over exact rationals.
//! * [`polar`]: the factorization prediction and its Eggers-Wall tree.
//! * [`verify`]: a brute-force exact checker built from sampled branches.

pub mod charclass;
pub mod contfrac;
pub mod diagram;
pub mod num;
pub mod polar;
pub mod puiseux;
pub mod verify;

pub use charclass::{CharError, CharSequence};
pub use contfrac::{ContFracError, ContinuedFraction};
pub use diagram::{CanonicalRep, DiagramError, Face, LatticePoint, NewtonDiagram};
pub use polar::{predict, EggersWallTree, FactorKind, PolarError, PolarFactor, PolarGroup, PolarPrediction};
pub use puiseux::{BivariatePoly, Order, PuiseuxError, PuiseuxSeries};
pub use verify::{
    verify_explicit, verify_prediction, Verdict, VerificationReport, VerifyError, VerifyOptions, WitnessBranch,
};
