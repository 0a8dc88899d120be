//! Country, GDP, capital and directed-trade CSV files.
//!
//! All files are UTF-8 CSV with a header row:
//!
//! * `gdp.csv`: `iso,year,gdp_usd`
//! * `capitals.csv`: `iso,capital_name,lat_deg,lon_deg`
//! * `trade.csv`: `exporter_iso,importer_iso,year,value_usd` (directed exports)

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::path::{Path, PathBuf};

use gravity_core::{CountryRecord, CountryTable, DirectedTradeMatrix, GeoPoint, SquareMatrix};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{io_err, Result, ToolkitError};

#[derive(Debug, Deserialize, Serialize)]
struct GdpRow {
    iso: String,
    year: i32,
    gdp_usd: f64,
}

#[derive(Debug, Deserialize, Serialize)]
struct CapitalRow {
    iso: String,
    capital_name: String,
    lat_deg: f64,
    lon_deg: f64,
}

#[derive(Debug, Deserialize, Serialize)]
struct TradeRow {
    exporter_iso: String,
    importer_iso: String,
    year: i32,
    value_usd: f64,
}

/// Row counts dropped or merged while loading.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    /// GDP rows for the requested year with `gdp_usd <= 0`.
    pub gdp_rejected: usize,
    /// Countries with GDP but no capital.
    pub dropped_no_capital: usize,
    /// Countries with a capital but no GDP.
    pub dropped_no_gdp: usize,
    /// Countries with GDP and capital but no trade rows for the year.
    pub dropped_no_trade: usize,
    /// Trade rows for other years.
    pub trade_other_year: usize,
    /// Trade rows naming a country outside the table.
    pub trade_unknown_iso: usize,
    /// Trade rows with exporter equal to importer.
    pub trade_self: usize,
    /// Trade rows merged into an earlier row for the same direction.
    pub trade_duplicates_summed: usize,
}

fn normalize_iso(s: &str) -> String {
    s.trim().to_ascii_uppercase()
}

fn open(path: &Path) -> Result<csv::Reader<File>> {
    let file = File::open(path).map_err(io_err(path))?;
    Ok(csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(file))
}

/// Deserialize every row, calling `f(line, row)`.
fn for_each_row<T: DeserializeOwned>(
    path: &Path,
    required: &[&str],
    mut f: impl FnMut(u64, T) -> Result<()>,
) -> Result<()> {
    let mut reader = open(path)?;
    let headers = reader
        .headers()
        .map_err(|e| ToolkitError::Parse { path: path.into(), line: 1, message: e.to_string() })?
        .clone();
    for col in required {
        if !headers.iter().any(|h| h == *col) {
            return Err(ToolkitError::Parse {
                path: path.into(),
                line: 1,
                message: format!("missing column `{col}` (expected {})", required.join(",")),
            });
        }
    }
    for record in reader.records() {
        let record = record.map_err(|e| ToolkitError::Parse {
            path: path.into(),
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let row: T = record
            .deserialize(Some(&headers))
            .map_err(|e| ToolkitError::Parse { path: path.into(), line, message: e.to_string() })?;
        f(line, row)?;
    }
    Ok(())
}

fn parse_err(path: &Path, line: u64, message: impl Into<String>) -> ToolkitError {
    ToolkitError::Parse { path: path.into(), line, message: message.into() }
}

/// Countries present in both files for `year`, sorted by ISO code.
pub fn load_countries(gdp_file: &Path, capitals_file: &Path, year: i32) -> Result<(CountryTable, LoadReport)> {
    let mut report = LoadReport::default();
    let mut gdp: BTreeMap<String, f64> = BTreeMap::new();
    let mut seen_gdp: HashMap<String, u64> = HashMap::new();
    for_each_row(gdp_file, &["iso", "year", "gdp_usd"], |line, row: GdpRow| {
        if row.year != year {
            return Ok(());
        }
        let iso = normalize_iso(&row.iso);
        if seen_gdp.insert(iso.clone(), line).is_some() {
            return Err(ToolkitError::DuplicateIso { path: gdp_file.into(), line, iso });
        }
        if row.gdp_usd.is_finite() && row.gdp_usd > 0.0 {
            gdp.insert(iso, row.gdp_usd);
        } else if row.gdp_usd.is_nan() {
            return Err(parse_err(gdp_file, line, "gdp_usd is NaN"));
        } else {
            report.gdp_rejected += 1;
        }
        Ok(())
    })?;

    let mut capitals: BTreeMap<String, (String, GeoPoint)> = BTreeMap::new();
    for_each_row(capitals_file, &["iso", "capital_name", "lat_deg", "lon_deg"], |line, row: CapitalRow| {
        let iso = normalize_iso(&row.iso);
        let point = GeoPoint::new(row.lat_deg, row.lon_deg).map_err(|e| parse_err(capitals_file, line, e.to_string()))?;
        if capitals.insert(iso.clone(), (row.capital_name, point)).is_some() {
            return Err(ToolkitError::DuplicateIso { path: capitals_file.into(), line, iso });
        }
        Ok(())
    })?;

    report.dropped_no_capital = gdp.keys().filter(|k| !capitals.contains_key(*k)).count();
    report.dropped_no_gdp = capitals.keys().filter(|k| !gdp.contains_key(*k)).count();
    let records: Vec<CountryRecord> = gdp
        .into_iter()
        .filter_map(|(iso, g)| {
            capitals.get(&iso).map(|(name, p)| CountryRecord { iso, capital_name: name.clone(), gdp_usd: g, capital: *p })
        })
        .collect();
    if records.is_empty() {
        return Err(ToolkitError::NoCommonCountries { gdp: gdp_file.into(), capitals: capitals_file.into() });
    }
    Ok((CountryTable::new(year, records)?, report))
}

/// Directed trade over `table`'s index space for `table.year()`.
///
/// Also returns, per country, whether it appears in any in-year row.
pub fn load_trades(
    trade_file: &Path,
    table: &CountryTable,
    report: &mut LoadReport,
) -> Result<(DirectedTradeMatrix, Vec<bool>)> {
    let n = table.len();
    let mut ex = SquareMatrix::zeros(n);
    let mut filled = vec![false; n * n];
    let mut traders = vec![false; n];
    for_each_row(trade_file, &["exporter_iso", "importer_iso", "year", "value_usd"], |line, row: TradeRow| {
        if !(row.value_usd.is_finite() && row.value_usd >= 0.0) {
            return Err(parse_err(trade_file, line, format!("value_usd must be a non-negative number, got {}", row.value_usd)));
        }
        if row.year != table.year() {
            report.trade_other_year += 1;
            return Ok(());
        }
        let (from, to) = (normalize_iso(&row.exporter_iso), normalize_iso(&row.importer_iso));
        let (Some(i), Some(j)) = (table.index_of(&from), table.index_of(&to)) else {
            report.trade_unknown_iso += 1;
            return Ok(());
        };
        if i == j {
            report.trade_self += 1;
            return Ok(());
        }
        traders[i] = true;
        traders[j] = true;
        if filled[i * n + j] {
            report.trade_duplicates_summed += 1;
        }
        filled[i * n + j] = true;
        *ex.get_mut(i, j) += row.value_usd;
        Ok(())
    })?;
    Ok((DirectedTradeMatrix::new(ex)?, traders))
}

/// Countries and directed trade restricted to countries with GDP, capital and trade rows.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub table: CountryTable,
    pub exports: DirectedTradeMatrix,
    pub report: LoadReport,
}

/// Paths of the three input files.
#[derive(Debug, Clone)]
pub struct InputFiles {
    pub gdp: PathBuf,
    pub capitals: PathBuf,
    pub trade: PathBuf,
}

/// Load and intersect all three files for one year.
pub fn load_dataset(files: &InputFiles, year: i32) -> Result<Dataset> {
    let (table, mut report) = load_countries(&files.gdp, &files.capitals, year)?;
    let (exports, traders) = load_trades(&files.trade, &table, &mut report)?;
    report.dropped_no_trade = traders.iter().filter(|&&t| !t).count();
    if report.dropped_no_trade == table.len() {
        return Err(ToolkitError::Output(format!(
            "{}: no trade rows for {year} between known countries",
            files.trade.display()
        )));
    }
    Ok(Dataset { table: table.restrict(&traders), exports: exports.restrict(&traders), report })
}

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(io_err(path))?;
    Ok(csv::Writer::from_writer(file))
}

fn csv_out(path: &Path) -> impl Fn(csv::Error) -> ToolkitError + '_ {
    move |e| ToolkitError::Output(format!("{}: {e}", path.display()))
}

/// Canonical `gdp.csv` and `capitals.csv` for `table`.
pub fn write_countries(table: &CountryTable, gdp_file: &Path, capitals_file: &Path) -> Result<()> {
    let mut g = writer(gdp_file)?;
    let mut c = writer(capitals_file)?;
    for r in table.records() {
        g.serialize(GdpRow { iso: r.iso.clone(), year: table.year(), gdp_usd: r.gdp_usd }).map_err(csv_out(gdp_file))?;
        c.serialize(CapitalRow {
            iso: r.iso.clone(),
            capital_name: r.capital_name.clone(),
            lat_deg: r.capital.lat(),
            lon_deg: r.capital.lon(),
        })
        .map_err(csv_out(capitals_file))?;
    }
    g.flush().map_err(io_err(gdp_file))?;
    c.flush().map_err(io_err(capitals_file))?;
    Ok(())
}

/// Canonical `trade.csv`: one row per non-zero directed flow, row-major order.
pub fn write_trades(table: &CountryTable, ex: &DirectedTradeMatrix, trade_file: &Path) -> Result<()> {
    let mut w = writer(trade_file)?;
    let recs = table.records();
    for i in 0..ex.n() {
        for j in 0..ex.n() {
            let v = ex.get(i, j);
            if i != j && v > 0.0 {
                w.serialize(TradeRow {
                    exporter_iso: recs[i].iso.clone(),
                    importer_iso: recs[j].iso.clone(),
                    year: table.year(),
                    value_usd: v,
                })
                .map_err(csv_out(trade_file))?;
            }
        }
    }
    w.flush().map_err(io_err(trade_file))?;
    Ok(())
}
