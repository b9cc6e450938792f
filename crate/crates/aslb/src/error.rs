use thiserror::Error;

/// Errors surfaced by the library. Variants mirror the contract failures of the
/// individual operations so the CLI can map them onto exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("resolution too coarse: grid step {step:e} exceeds r/4 = {limit:e}")]
    ResolutionTooCoarse { step: f64, limit: f64 },

    #[error("square is disjoint from the sampled graph")]
    Disjoint,

    #[error("empty interval: no grid point falls inside [{lo}, {hi}]")]
    EmptyInterval { lo: f64, hi: f64 },

    #[error("empty scale ladder")]
    EmptyLadder,

    #[error("function is not monotone (first violation near t = {at})")]
    NotMonotone { at: f64 },

    #[error("sample grids do not match: {0}")]
    GridMismatch(String),

    #[error("{0} is not a local maximum")]
    NotAMaximum(f64),

    #[error("no strict local maximum found in ({lo}, {hi}) at the available resolution")]
    NoMaximumFound { lo: f64, hi: f64 },

    #[error("fold depth {requested} exceeds the cap {cap} for {precision} precision")]
    DepthExceeded {
        requested: usize,
        cap: usize,
        precision: &'static str,
    },

    #[error("co-Hölder parameter violation: eta + epsilon = {sum} must be < 1 - alpha = {limit}")]
    ParameterViolation { sum: f64, limit: f64 },

    #[error("theta = {theta} out of range ({lo}, {hi}]")]
    ThetaOutOfRange { theta: f64, lo: f64, hi: f64 },

    #[error("packing infeasible at n = {n}: no even N(n) >= 2 satisfies the constraints")]
    Infeasible { n: u64 },

    #[error("packing audit failure: {violations} offending pair(s), closest = {min_distance:e}")]
    AuditFailure {
        violations: usize,
        min_distance: f64,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
