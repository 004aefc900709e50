use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot parse `{0}` as a rational (expected `p` or `p/q`, q != 0)")]
    ParseRational(String),
    #[error("normalization pole: 1 + lambda*x = 0")]
    NormalizationPole,
    #[error("non-invertible series: zero constant term")]
    NonInvertibleSeries,
    #[error("composition requires a zero inner constant term")]
    NonzeroInnerConstant,
    #[error("insufficient truncation: coefficient {index} requested, only {valid} valid")]
    InsufficientTruncation { index: usize, valid: usize },
    #[error("domain guard violated: |lambda*x| = {magnitude} must be < 1")]
    DomainGuard { magnitude: String },
    #[error("malformed table: {0}")]
    Table(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
