//! `source,delta,beta` parameter lists and the clustering/classification outputs.

use std::fs::File;
use std::path::Path;

use gravity_core::mlvalidate::{ClusterModel, ConfusionMatrix, MergeTree, ParamPoint};
use serde::Deserialize;

use crate::error::{io_err, Result, ToolkitError};

/// Sources whose label starts with this prefix are our own estimates, not literature.
pub const OWN_ESTIMATE_PREFIX: &str = "this-work";

#[derive(Debug, Deserialize)]
struct Row {
    source: String,
    delta: Option<f64>,
    beta: Option<f64>,
}

/// A row reporting only one of the two exponents.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialRow {
    pub source: String,
    pub delta: Option<f64>,
    pub beta: Option<f64>,
}

/// Parsed parameter file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamSet {
    /// Published (δ, β) pairs.
    pub literature: Vec<ParamPoint>,
    /// Rows tagged as our own estimates.
    pub own: Vec<ParamPoint>,
    /// Rows left out of two-dimensional clustering.
    pub partial: Vec<PartialRow>,
}

pub fn load_params(path: &Path) -> Result<ParamSet> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| ToolkitError::Parse { path: path.into(), line: 1, message: e.to_string() })?
        .clone();
    for col in ["source", "delta", "beta"] {
        if !headers.iter().any(|h| h == col) {
            return Err(ToolkitError::Parse {
                path: path.into(),
                line: 1,
                message: format!("missing column `{col}` (expected source,delta,beta)"),
            });
        }
    }
    let mut set = ParamSet::default();
    for record in reader.records() {
        let record = record.map_err(|e| ToolkitError::Parse {
            path: path.into(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let row: Row = record
            .deserialize(Some(&headers))
            .map_err(|e| ToolkitError::Parse { path: path.into(), line, message: e.to_string() })?;
        for v in [row.delta, row.beta].into_iter().flatten() {
            if !v.is_finite() {
                return Err(ToolkitError::Parse { path: path.into(), line, message: format!("non-finite value {v}") });
            }
        }
        match (row.delta, row.beta) {
            (Some(d), Some(b)) => {
                let p = ParamPoint::new(row.source, d, b);
                if p.source.starts_with(OWN_ESTIMATE_PREFIX) {
                    set.own.push(p);
                } else {
                    set.literature.push(p);
                }
            }
            (delta, beta) => set.partial.push(PartialRow { source: row.source, delta, beta }),
        }
    }
    Ok(set)
}

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    Ok(csv::Writer::from_writer(File::create(path).map_err(io_err(path))?))
}

fn err(path: &Path) -> impl Fn(csv::Error) -> ToolkitError + '_ {
    move |e| ToolkitError::Output(format!("{}: {e}", path.display()))
}

pub fn write_elbow(curve: &[(usize, f64)], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["k", "inertia"]).map_err(err(path))?;
    for (k, i) in curve {
        w.write_record([k.to_string(), i.to_string()]).map_err(err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// `(source, delta, beta, label)` rows.
pub fn write_labels(rows: &[(&ParamPoint, usize)], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["source", "delta", "beta", "label"]).map_err(err(path))?;
    for (p, l) in rows {
        w.write_record([p.source.clone(), p.delta.to_string(), p.beta.to_string(), l.to_string()]).map_err(err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn write_clusters(points: &[ParamPoint], model: &ClusterModel, own: &[ParamPoint], path: &Path) -> Result<()> {
    let mut rows: Vec<(&ParamPoint, usize)> = points.iter().zip(model.assignments.iter().copied()).collect();
    rows.extend(own.iter().map(|p| (p, model.nearest(p.coords()))));
    write_labels(&rows, path)
}

pub fn write_dendrogram(tree: &MergeTree, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["step", "cluster_a", "cluster_b", "distance", "size"]).map_err(err(path))?;
    for (s, m) in tree.steps.iter().enumerate() {
        w.write_record([s.to_string(), m.a.to_string(), m.b.to_string(), m.distance.to_string(), m.size.to_string()])
            .map_err(err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Matrix layout: one row per actual class, one `pred_<c>` column per predicted class.
pub fn write_confusion(c: &ConfusionMatrix, path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    let mut header = vec!["actual".to_string()];
    header.extend((0..c.counts.len()).map(|p| format!("pred_{p}")));
    w.write_record(&header).map_err(err(path))?;
    for (a, row) in c.counts.iter().enumerate() {
        let mut rec = vec![a.to_string()];
        rec.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&rec).map_err(err(path))?;
    }
    w.flush().map_err(io_err(path))
}
