use thiserror::Error;

/// Unified error type for the whole crate.
///
/// Variants distinguish precondition violations (bad parameters, malformed
/// inputs) from runtime failures (caps exceeded, certification failures), so
/// callers can map them onto usage vs. runtime exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter {name} = {value} out of range: requires {requirement}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("negative frequency value {0}")]
    NegativeValue(f64),

    #[error("frequency value {0} exceeds 1")]
    ValueExceedsOne(f64),

    #[error("total mass {0} exceeds 1 + fp_tol")]
    MassExceedsOne(f64),

    #[error("stick iteration cap {cap} exceeded (residual still {residual:e})")]
    StickCapExceeded { cap: usize, residual: f64 },

    #[error("sorted-draw rejection retries exhausted after {attempts} attempts")]
    RejectionCapExceeded { attempts: usize },

    #[error(
        "atom cutoff {cutoff:e} too coarse: expected untracked mass {expected:e} is not < 0.01"
    )]
    CutoffTooLarge { cutoff: f64, expected: f64 },

    #[error(
        "normalization defect {defect:e} exceeds tolerance {tol:e}; \
         increase the interval count or grid resolution"
    )]
    NormalizationFailure { defect: f64, tol: f64 },

    #[error("query point {point} lies below the solved region floor {floor}")]
    BelowSolvedRegion { point: f64, floor: f64 },

    #[error(
        "scan cap n_max = {n_max} cannot certify the minimizer \
         (best value {best} requires n_max >= {needed})"
    )]
    ScanNotBracketed { n_max: u64, best: f64, needed: u64 },

    #[error(
        "effective sample size {ess:.1} below the reliability floor {floor:.1} \
         for a positive tilt"
    )]
    EssTooLow { ess: f64, floor: f64 },

    #[error("no hits in {n_samples} samples: estimate unusable for slope fitting")]
    NoHits { n_samples: u64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("malformed table dump: {0}")]
    ParseFailure(String),

    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
