//! Output files: `report.json`, `trace.csv`, `pairs.csv` and `impute_before_after.csv`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use gravity_core::{EstimateConfig, GravityParams, PairAdjustment, PairVector};
use serde::{Deserialize, Serialize};

use crate::error::{io_err, Result, ToolkitError};
use crate::ingest::{Dataset, LoadReport};

/// Input paths and settings echoed into the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub gdp: String,
    pub capitals: String,
    pub trade: String,
    pub year: i32,
    pub estimate: EstimateConfig,
}

/// One row of the per-pair table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    pub pair_index: usize,
    pub i_iso: String,
    pub j_iso: String,
    /// Total trade `F_ij` in USD.
    pub flow_usd: f64,
    pub distance_km: f64,
    pub gg: f64,
    pub r: f64,
    /// Observed normalized flow (0 where the pair did not trade).
    pub t: f64,
    /// Normalized flow used by the final regression.
    pub t_filled: f64,
    pub imputed: bool,
    pub kappa: f64,
    pub bilateral_distance_km: f64,
    pub potential: f64,
}

/// Everything `gravity estimate` learned about one year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub n_countries: usize,
    pub n_pairs: usize,
    pub zero_flows: usize,
    pub zero_share: f64,
    pub load: LoadReport,
    pub params: GravityParams,
    /// `exp(ln_k)`; any other positive constant only rescales every κ uniformly.
    pub k_prime: f64,
    pub pairs: Vec<PairRow>,
    /// Wall-clock milliseconds; omitted unless requested so reports stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl RunReport {
    pub fn build(
        config: ConfigEcho,
        data: &Dataset,
        pv: &PairVector,
        filled: &[f64],
        params: GravityParams,
        adj: &PairAdjustment,
    ) -> Self {
        let recs = data.table.records();
        let d = data.table.distance_matrix().ok();
        let pairs = (0..pv.len())
            .map(|k| {
                let (i, j) = pv.pair(k);
                PairRow {
                    pair_index: k,
                    i_iso: recs[i].iso.clone(),
                    j_iso: recs[j].iso.clone(),
                    flow_usd: data.exports.get(i, j) + data.exports.get(j, i),
                    distance_km: d.as_ref().map_or(f64::NAN, |d| d.get(i, j)),
                    gg: pv.gg()[k],
                    r: pv.r()[k],
                    t: pv.t()[k],
                    t_filled: filled[k],
                    imputed: pv.zero_mask()[k],
                    kappa: adj.kappa[k],
                    bilateral_distance_km: adj.bilateral_distance[k],
                    potential: adj.potential[k],
                }
            })
            .collect();
        let zero_flows = pv.zero_count();
        Self {
            config,
            n_countries: pv.n_countries(),
            n_pairs: pv.len(),
            zero_flows,
            zero_share: if pv.is_empty() { 0.0 } else { zero_flows as f64 / pv.len() as f64 },
            load: data.report.clone(),
            params,
            k_prime: adj.k_prime,
            pairs,
            elapsed_ms: None,
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(io_err(path))?))
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    Ok(csv::Writer::from_writer(File::create(path).map_err(io_err(path))?))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> ToolkitError + '_ {
    move |e| ToolkitError::Output(format!("{}: {e}", path.display()))
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| ToolkitError::Output(format!("{}: {e}", path.display())))?;
    w.write_all(b"\n").map_err(io_err(path))?;
    w.flush().map_err(io_err(path))
}

pub fn read_report(path: &Path) -> Result<RunReport> {
    let file = File::open(path).map_err(io_err(path))?;
    serde_json::from_reader(std::io::BufReader::new(file))
        .map_err(|e| ToolkitError::Parse { path: path.into(), line: e.line() as u64, message: e.to_string() })
}

/// Iteration 0 holds the starting values; later rows are the fitted exponents.
pub fn write_trace(cfg: &EstimateConfig, params: &GravityParams, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    let err = csv_err(path);
    w.write_record(["iteration", "delta", "beta", "ln_k", "r_squared"]).map_err(&err)?;
    w.write_record(["0".to_string(), cfg.delta_init.to_string(), cfg.beta_init.to_string(), String::new(), String::new()])
        .map_err(&err)?;
    for e in &params.trace {
        w.write_record([
            e.iteration.to_string(),
            e.delta.to_string(),
            e.beta.to_string(),
            e.ln_k.to_string(),
            e.r_squared.to_string(),
        ])
        .map_err(&err)?;
    }
    w.flush().map_err(io_err(path))
}

pub fn write_pairs(rows: &[PairRow], path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    for r in rows {
        w.serialize(r).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Before/after flow vectors for plotting the effect of imputation.
pub fn write_impute_before_after(data: &Dataset, pv: &PairVector, after: &[f64], path: &Path) -> Result<()> {
    let recs = data.table.records();
    let mut w = csv_writer(path)?;
    let err = csv_err(path);
    w.write_record(["pair_index", "i_iso", "j_iso", "t_before", "t_after", "imputed"]).map_err(&err)?;
    for k in 0..pv.len() {
        let (i, j) = pv.pair(k);
        w.write_record([
            k.to_string(),
            recs[i].iso.clone(),
            recs[j].iso.clone(),
            pv.t()[k].to_string(),
            after[k].to_string(),
            pv.zero_mask()[k].to_string(),
        ])
        .map_err(&err)?;
    }
    w.flush().map_err(io_err(path))
}
