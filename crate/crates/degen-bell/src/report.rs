//! Outcome types for identity verification runs.
//!
//! The JSON schema is `identity_id`, `status`, `samples`, `counterexample`;
//! all rationals serialize as canonical `p/q` strings (JSON numbers never
//! hold exact values). Elapsed time is kept on the struct for display but
//! deliberately left out of the serialized form so that reports from equal
//! seeds are byte-identical.

use serde::{Deserialize, Serialize};
use std::time::Duration;

use crate::rational::{rat_string, Rat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One deterministic parameter draw.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamSample {
    #[serde(with = "rat_string")]
    pub lambda: Rat,
    #[serde(with = "rat_string")]
    pub x: Rat,
    #[serde(with = "rat_string")]
    pub y: Rat,
    pub n: u32,
    pub m: u32,
    pub r: u32,
    /// Seed of the suite run that produced this sample.
    pub seed: u64,
}

impl Default for ParamSample {
    fn default() -> Self {
        Self {
            lambda: Rat::from_integer(0.into()),
            x: Rat::from_integer(1.into()),
            y: Rat::from_integer(1.into()),
            n: 0,
            m: 0,
            r: 0,
            seed: 0,
        }
    }
}

/// Exact witness of a failed check: both side values plus the sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub sample: ParamSample,
    pub lhs: String,
    pub rhs: String,
    /// Where inside the identity the mismatch sits (coefficient index,
    /// monomial degree, ...).
    pub context: String,
}

/// Result of checking one identity over a batch of samples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub status: Status,
    #[serde(rename = "samples")]
    pub samples_run: usize,
    pub counterexample: Option<Counterexample>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl IdentityReport {
    pub fn pass(id: impl Into<String>, samples_run: usize) -> Self {
        Self {
            identity_id: id.into(),
            status: Status::Pass,
            samples_run,
            counterexample: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn fail(id: impl Into<String>, samples_run: usize, counterexample: Counterexample) -> Self {
        Self {
            identity_id: id.into(),
            status: Status::Fail,
            samples_run,
            counterexample: Some(counterexample),
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}
