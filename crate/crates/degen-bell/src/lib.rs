//! Exact-arithmetic toolkit for degenerate Bell-type polynomial families.
//!
//! Everything here is computed over arbitrary-precision rationals, so every
//! identity between the families is decidable by structural equality. The
//! crate is organized in layers:
//!
//! - [`rational`]: the scalar type (arbitrary-precision rationals) plus
//!   canonical `p/q` parsing and formatting
//! - [`lambda_poly`]: dense univariate polynomials in the deformation
//!   parameter, used to keep Stirling numbers symbolic
//! - [`comb`]: binomials, factorials, and degenerate falling factorials
//! - [`series`]: truncated formal power series with validity-order tracking,
//!   the generating-function oracle
//! - [`stirling`]: degenerate (r-)Stirling triangles with an independent
//!   basis-conversion oracle
//! - [`bell`]: closed-form evaluation of the Bell/Fubini families in a
//!   normalized all-rational representation
//! - [`operators`]: the multiplication/differentiation operator calculus on
//!   series and its identity checks
//! - [`verify`]: the identity harness that sweeps randomized rational
//!   parameter samples and reports exact counterexamples
//! - [`table`]: triangle export/import (CSV and JSON) used by the CLI

pub mod bell;
pub mod comb;
pub mod error;
pub mod lambda_poly;
pub mod operators;
pub mod rational;
pub mod report;
pub mod series;
pub mod stirling;
pub mod table;
pub mod verify;

pub use bell::Evaluator;
pub use error::{Error, Result};
pub use lambda_poly::LambdaPoly;
pub use rational::{parse_rat, rat, Rat};
pub use report::{IdentityReport, ParamSample, Status};
pub use series::TruncSeries;
pub use stirling::{RecurrenceVariant, StirlingCache};
pub use verify::{run_suite, VerifyConfig};
