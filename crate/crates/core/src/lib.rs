//! Gravity-model estimation for bilateral trade.
//!
//! Fits `ln F = ln K + δ ln(G_i G_j) + β ln R` on the upper triangle of a
//! symmetric trade matrix. Zero flows are replaced by dummy values obtained
//! from a local linear regression over the nearest non-zero pairs in
//! predictor order, and the impute/regress cycle is iterated until the
//! exponents settle. Per-pair residual frictions are then expressed as
//! dielectric constants `κ_ij` and bilateral distances `T_ij`.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, reports and the
//! command line live in the `gravity-toolkit` crate.
#![no_std]
#![warn(missing_docs)]

extern crate alloc;

pub mod error;
pub mod estimate;
pub mod geo;
pub mod impute;
pub mod matrix;
pub mod mlvalidate;
pub mod regress;
mod sum;
pub mod trade;

pub use error::{GravityError, Result};
pub use estimate::{
    estimate, normalize_and_vectorize, post_adjust, EstimateConfig, Estimation, GravityParams,
    PairAdjustment, TraceEntry,
};
pub use geo::{distance_matrix, haversine_km, DistanceMatrix, GeoPoint, EARTH_RADIUS_KM};
pub use impute::{impute_zeros, predictor_values, ImputeConfig, PairVector};
pub use matrix::SquareMatrix;
pub use regress::{ols1, ols2, predict1, Ols1Fit, Ols2Fit};
pub use trade::{symmetrize, CountryRecord, CountryTable, DirectedTradeMatrix, TradeMatrix};
