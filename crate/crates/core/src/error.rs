//! Error type shared by every algorithm in the crate.

use alloc::string::String;
use thiserror::Error;

/// Convenience alias.
pub type Result<T> = core::result::Result<T, GravityError>;

/// Failures raised by validation, regression, imputation and clustering.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GravityError {
    /// A coordinate lies outside its valid range.
    #[error("invalid {field}: {value} (expected {expected})")]
    InvalidCoordinate {
        /// `"lat"` or `"lon"`.
        field: &'static str,
        /// Offending value in degrees.
        value: f64,
        /// Human-readable range.
        expected: &'static str,
    },
    /// A country's GDP is not strictly positive.
    #[error("country {iso}: gdp must be > 0, got {gdp}")]
    NonPositiveGdp {
        /// ISO code of the country.
        iso: String,
        /// Offending value.
        gdp: f64,
    },
    /// Two records share an ISO code.
    #[error("duplicate iso code {0}")]
    DuplicateIso(String),
    /// A trade value is negative or not finite.
    #[error("invalid trade value {value} at ({row}, {col})")]
    InvalidTradeValue {
        /// Row index.
        row: usize,
        /// Column index.
        col: usize,
        /// Offending value.
        value: f64,
    },
    /// Matrix or vector sizes disagree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// Too few observations for the requested fit.
    #[error("need at least {needed} observations, got {got}")]
    TooFewObservations {
        /// Required count.
        needed: usize,
        /// Supplied count.
        got: usize,
    },
    /// An input value is NaN or infinite.
    #[error("non-finite input at index {0}")]
    NonFinite(usize),
    /// The normal matrix of a multiple regression is numerically singular.
    #[error("singular design matrix (pivot {pivot:e} below threshold {threshold:e})")]
    SingularDesign {
        /// Pivot magnitude that failed the test.
        pivot: f64,
        /// Scale-aware rejection threshold.
        threshold: f64,
    },
    /// A one-predictor fit was given a constant predictor.
    #[error("degenerate predictor: all x values are equal")]
    DegeneratePredictor,
    /// Every flow is zero so the flows cannot be normalized.
    #[error("all trade flows are zero")]
    AllFlowsZero,
    /// Two capitals coincide so the normalized distance would be zero.
    #[error("zero distance between countries {i} and {j}")]
    ZeroDistance {
        /// First country index.
        i: usize,
        /// Second country index.
        j: usize,
    },
    /// The predictor `gg^δ r^β` is not a finite positive number.
    #[error("predictor for pair ({i}, {j}) is not finite and positive: {value}")]
    PredictorOverflow {
        /// First country index.
        i: usize,
        /// Second country index.
        j: usize,
        /// Computed value.
        value: f64,
    },
    /// Not enough non-zero pairs to anchor the local regressions.
    #[error("need at least {needed} non-zero pairs as anchors, got {got}")]
    InsufficientAnchors {
        /// Required anchors.
        needed: usize,
        /// Available anchors.
        got: usize,
    },
    /// A configuration value is out of range.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    /// `β = 0` makes the bilateral distance undefined.
    #[error("bilateral distance undefined for beta = 0")]
    ZeroBeta,
    /// An internal invariant did not hold.
    #[error("invariant violated: {0}")]
    Invariant(String),
    /// More clusters were requested than there are points.
    #[error("requested {k} clusters for {points} points")]
    TooManyClusters {
        /// Requested cluster count.
        k: usize,
        /// Available points.
        points: usize,
    },
    /// Stratified splitting needs at least two members per class.
    #[error("class {label} has {count} member(s); stratified split needs at least 2")]
    Stratification {
        /// Class label.
        label: usize,
        /// Member count.
        count: usize,
    },
    /// A classifier was given no training data.
    #[error("empty training set")]
    EmptyTrainingSet,
}
