//! The `gravity` command line.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use gravity_core::mlvalidate::{agglomerate, confusion, elbow_curve, kmeans, knn_classify, split_train_test, KMeansConfig};
use gravity_core::{EstimateConfig, ImputeConfig};

use crate::error::{io_err, Result, ToolkitError};
use crate::ingest::{load_dataset, InputFiles};
use crate::params_file::{self, load_params};
use crate::pipeline::{inspect_imputation, run_files};
use crate::report::{self, ConfigEcho, RunReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gravity", version, about = "Gravity-model estimation with imputed zero trade flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate (ln K, δ, β) for one year and write report.json, trace.csv, pairs.csv.
    Estimate(EstimateArgs),
    /// Impute zero flows once at fixed exponents and write impute_before_after.csv.
    ImputeInspect(InspectArgs),
    /// K-means, elbow curve and Ward dendrogram over a parameter list.
    Cluster(ClusterArgs),
    /// Stratified split, KNN classification and confusion matrix over k-means labels.
    Classify(ClassifyArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// gdp.csv: iso,year,gdp_usd
    #[arg(long)]
    gdp: PathBuf,
    /// capitals.csv: iso,capital_name,lat_deg,lon_deg
    #[arg(long)]
    capitals: PathBuf,
    /// trade.csv: exporter_iso,importer_iso,year,value_usd
    #[arg(long)]
    trade: PathBuf,
    #[arg(long)]
    year: i32,
}

impl InputArgs {
    fn files(&self) -> InputFiles {
        InputFiles { gdp: self.gdp.clone(), capitals: self.capitals.clone(), trade: self.trade.clone() }
    }
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    delta_init: f64,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    beta_init: f64,
    /// Tolerance on consecutive δ and on consecutive β.
    #[arg(long, default_value_t = 0.001)]
    eps: f64,
    #[arg(long, default_value_t = 4)]
    neighbors: usize,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    #[arg(long)]
    out: PathBuf,
    /// Record wall-clock time in report.json (makes the report non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct InspectArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, allow_negative_numbers = true)]
    delta: f64,
    #[arg(long, allow_negative_numbers = true)]
    beta: f64,
    #[arg(long, default_value_t = 4)]
    neighbors: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ClusterArgs {
    /// source,delta,beta
    #[arg(long)]
    points: PathBuf,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long, default_value_t = 10)]
    k_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long)]
    points: PathBuf,
    /// Number of k-means clusters used as class labels.
    #[arg(long, default_value_t = 4)]
    k: usize,
    /// Neighbours consulted by the classifier.
    #[arg(long, default_value_t = 4)]
    knn: usize,
    /// Training share.
    #[arg(long, default_value_t = 0.8)]
    ratio: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    restarts: usize,
    #[arg(long)]
    out: PathBuf,
}

/// Parse `args` (including the program name) and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Estimate(a) => cmd_estimate(&a),
        Command::ImputeInspect(a) => cmd_impute_inspect(&a),
        Command::Cluster(a) => cmd_cluster(&a),
        Command::Classify(a) => cmd_classify(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_INPUT
        }
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

fn cmd_estimate(a: &EstimateArgs) -> Result<i32> {
    let started = Instant::now();
    let cfg = EstimateConfig {
        delta_init: a.delta_init,
        beta_init: a.beta_init,
        eps1: a.eps,
        eps2: a.eps,
        max_iter: a.max_iter,
        impute: ImputeConfig { m_neighbors: a.neighbors, ..ImputeConfig::default() },
    };
    let run = run_files(&a.input.files(), a.input.year, &cfg)?;
    ensure_dir(&a.out)?;

    let echo = ConfigEcho {
        gdp: a.input.gdp.display().to_string(),
        capitals: a.input.capitals.display().to_string(),
        trade: a.input.trade.display().to_string(),
        year: a.input.year,
        estimate: cfg,
    };
    let params = run.estimation.params.clone();
    let mut rep = RunReport::build(echo, &run.data, &run.pairs, &run.estimation.filled, params, &run.adjustment);
    if a.timing {
        rep.elapsed_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    report::write_json(&rep, &a.out.join("report.json"))?;
    report::write_trace(&cfg, &rep.params, &a.out.join("trace.csv"))?;
    report::write_pairs(&rep.pairs, &a.out.join("pairs.csv"))?;

    let p = &rep.params;
    println!(
        "year {}: {} countries, {} pairs, {} zero flows ({:.1}%)",
        a.input.year,
        rep.n_countries,
        rep.n_pairs,
        rep.zero_flows,
        100.0 * rep.zero_share
    );
    println!("ln_k = {}  delta = {}  beta = {}", p.ln_k, p.delta, p.beta);
    println!("iterations = {}  converged = {}", p.iterations, p.converged);
    if p.oscillating {
        println!("warning: parameter cycle detected in trace");
    }
    println!("K' = exp(ln_k) = {}; any other constant rescales every kappa uniformly", rep.k_prime);
    Ok(if p.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
}

fn cmd_impute_inspect(a: &InspectArgs) -> Result<i32> {
    let data = load_dataset(&a.input.files(), a.input.year)?;
    let cfg = ImputeConfig { m_neighbors: a.neighbors, ..ImputeConfig::default() };
    let (pv, after) = inspect_imputation(&data, a.delta, a.beta, &cfg)?;
    ensure_dir(&a.out)?;
    report::write_impute_before_after(&data, &pv, &after, &a.out.join("impute_before_after.csv"))?;
    println!("{} pairs, {} imputed", pv.len(), pv.zero_count());
    Ok(EXIT_OK)
}

fn cmd_cluster(a: &ClusterArgs) -> Result<i32> {
    let set = load_params(&a.points)?;
    for p in &set.partial {
        println!("excluded (single parameter): {}", p.source);
    }
    let cfg = KMeansConfig { seed: a.seed, restarts: a.restarts };
    let model = kmeans(&set.literature, a.k, &cfg)?;
    let k_max = a.k_max.min(set.literature.len());
    let curve = elbow_curve(&set.literature, k_max, &cfg)?;
    let tree = agglomerate(&set.literature)?;
    ensure_dir(&a.out)?;
    params_file::write_elbow(&curve, &a.out.join("elbow.csv"))?;
    params_file::write_clusters(&set.literature, &model, &set.own, &a.out.join("clusters.csv"))?;
    params_file::write_dendrogram(&tree, &a.out.join("dendrogram.csv"))?;
    println!("k = {}  inertia = {}", model.k, model.inertia);
    for (c, centre) in model.centroids.iter().enumerate() {
        println!("cluster {c}: centroid ({}, {})", centre[0], centre[1]);
    }
    for p in &set.own {
        println!("{} -> cluster {}", p.source, model.nearest(p.coords()));
    }
    Ok(EXIT_OK)
}

fn cmd_classify(a: &ClassifyArgs) -> Result<i32> {
    let set = load_params(&a.points)?;
    let cfg = KMeansConfig { seed: a.seed, restarts: a.restarts };
    let model = kmeans(&set.literature, a.k, &cfg)?;
    let labels = &model.assignments;
    let split = split_train_test(labels, a.ratio, a.seed)?;
    let train: Vec<[f64; 2]> = split.train.iter().map(|&i| set.literature[i].coords()).collect();
    let train_labels: Vec<usize> = split.train.iter().map(|&i| labels[i]).collect();
    if a.knn > train.len() {
        return Err(ToolkitError::Output(format!("--knn {} exceeds {} training points", a.knn, train.len())));
    }
    let actual: Vec<usize> = split.test.iter().map(|&i| labels[i]).collect();
    let predicted = split
        .test
        .iter()
        .map(|&i| knn_classify(&train, &train_labels, a.knn, set.literature[i].coords()))
        .collect::<gravity_core::Result<Vec<_>>>()?;
    let matrix = confusion(&actual, &predicted, model.k)?;
    let queries = set
        .own
        .iter()
        .map(|p| Ok((p, knn_classify(&train, &train_labels, a.knn, p.coords())?)))
        .collect::<gravity_core::Result<Vec<_>>>()?;

    ensure_dir(&a.out)?;
    params_file::write_confusion(&matrix, &a.out.join("confusion.csv"))?;
    params_file::write_labels(&queries, &a.out.join("queries.csv"))?;
    println!("train = {}  test = {}", split.train.len(), split.test.len());
    println!("accuracy = {}", matrix.accuracy);
    for (p, l) in &queries {
        println!("{} -> cluster {l}", p.source);
    }
    Ok(EXIT_OK)
}
