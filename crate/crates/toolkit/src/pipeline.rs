//! Load → normalize → estimate → post-adjust, shared by the CLI and tests.

use gravity_core::{
    estimate, impute, normalize_and_vectorize, post_adjust, symmetrize, EstimateConfig, Estimation, PairAdjustment,
    PairVector,
};

use crate::error::Result;
use crate::ingest::{load_dataset, Dataset, InputFiles};

/// Everything produced by one estimation run.
#[derive(Debug, Clone)]
pub struct Run {
    pub data: Dataset,
    pub pairs: PairVector,
    pub estimation: Estimation,
    pub adjustment: PairAdjustment,
}

/// Pair vector for an already loaded dataset.
pub fn vectorize(data: &Dataset) -> Result<PairVector> {
    let f = symmetrize(&data.exports);
    let d = data.table.distance_matrix()?;
    Ok(normalize_and_vectorize(&f, &data.table, &d)?)
}

pub fn run_dataset(data: Dataset, cfg: &EstimateConfig) -> Result<Run> {
    let pairs = vectorize(&data)?;
    let estimation = estimate(&pairs, cfg)?;
    let d = data.table.distance_matrix()?;
    let adjustment = post_adjust(&pairs, &estimation.filled, &d, &estimation.params)?;
    Ok(Run { data, pairs, estimation, adjustment })
}

pub fn run_files(files: &InputFiles, year: i32, cfg: &EstimateConfig) -> Result<Run> {
    run_dataset(load_dataset(files, year)?, cfg)
}

/// Normalized flows before and after one imputation pass at fixed exponents.
pub fn inspect_imputation(
    data: &Dataset,
    delta: f64,
    beta: f64,
    cfg: &gravity_core::ImputeConfig,
) -> Result<(PairVector, Vec<f64>)> {
    let pv = vectorize(data)?;
    let x = impute::predictor_values(&pv, delta, beta)?;
    let after = impute::impute_zeros(&pv, &x, cfg)?;
    Ok((pv, after))
}
