//! Country tables and trade matrices sharing one index space.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{GravityError, Result};
use crate::geo::{distance_matrix, DistanceMatrix, GeoPoint};
use crate::matrix::SquareMatrix;

/// One country: ISO code, capital and GDP.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CountryRecord {
    /// Upper-case ISO 3166 alpha-3 code.
    pub iso: String,
    /// Capital city name.
    pub capital_name: String,
    /// GDP in current USD.
    pub gdp_usd: f64,
    /// Capital coordinates.
    pub capital: GeoPoint,
}

/// Countries for one year, sorted by ISO code. Position is the matrix index.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CountryTable {
    year: i32,
    records: Vec<CountryRecord>,
}

impl CountryTable {
    /// Sorts by ISO and rejects duplicates or non-positive GDP.
    pub fn new(year: i32, mut records: Vec<CountryRecord>) -> Result<Self> {
        for r in &records {
            if !(r.gdp_usd.is_finite() && r.gdp_usd > 0.0) {
                return Err(GravityError::NonPositiveGdp { iso: r.iso.clone(), gdp: r.gdp_usd });
            }
        }
        records.sort_by(|a, b| a.iso.cmp(&b.iso));
        if let Some(w) = records.windows(2).find(|w| w[0].iso == w[1].iso) {
            return Err(GravityError::DuplicateIso(w[0].iso.clone()));
        }
        Ok(Self { year, records })
    }

    /// Calendar year.
    pub fn year(&self) -> i32 {
        self.year
    }

    /// Records in index order.
    pub fn records(&self) -> &[CountryRecord] {
        &self.records
    }

    /// Number of countries.
    pub fn len(&self) -> usize {
        self.records.len()
    }

    /// Whether the table has no countries.
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Index of an ISO code.
    pub fn index_of(&self, iso: &str) -> Option<usize> {
        self.records.binary_search_by(|r| r.iso.as_str().cmp(iso)).ok()
    }

    /// GDPs in index order.
    pub fn gdps(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.gdp_usd).collect()
    }

    /// Capitals in index order.
    pub fn capitals(&self) -> Vec<GeoPoint> {
        self.records.iter().map(|r| r.capital).collect()
    }

    /// Pairwise capital distances in index order.
    pub fn distance_matrix(&self) -> Result<DistanceMatrix> {
        distance_matrix(&self.capitals())
    }

    /// Keep only flagged countries.
    pub fn restrict(&self, keep: &[bool]) -> Self {
        let records = self
            .records
            .iter()
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|(r, _)| r.clone())
            .collect();
        Self { year: self.year, records }
    }
}

/// Directed exports: `ex[i][j]` is the value exported from `i` to `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectedTradeMatrix(SquareMatrix);

impl DirectedTradeMatrix {
    /// Checks non-negative finite entries and a zero diagonal.
    pub fn new(ex: SquareMatrix) -> Result<Self> {
        let n = ex.n();
        for i in 0..n {
            for j in 0..n {
                let v = ex.get(i, j);
                if !(v.is_finite() && v >= 0.0) || (i == j && v != 0.0) {
                    return Err(GravityError::InvalidTradeValue { row: i, col: j, value: v });
                }
            }
        }
        Ok(Self(ex))
    }

    /// Number of countries.
    pub fn n(&self) -> usize {
        self.0.n()
    }

    /// Exports from `i` to `j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    /// Underlying matrix.
    pub fn as_matrix(&self) -> &SquareMatrix {
        &self.0
    }

    /// Keep only flagged countries.
    pub fn restrict(&self, keep: &[bool]) -> Self {
        Self(self.0.restrict(keep))
    }
}

/// Total bilateral trade `F_ij = Ex_ij + Ex_ji`, symmetric with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeMatrix(SquareMatrix);

impl TradeMatrix {
    /// Checks symmetry, non-negativity and a zero diagonal.
    pub fn new(f: SquareMatrix) -> Result<Self> {
        let n = f.n();
        for i in 0..n {
            for j in 0..n {
                let v = f.get(i, j);
                if !(v.is_finite() && v >= 0.0) || (i == j && v != 0.0) || v != f.get(j, i) {
                    return Err(GravityError::InvalidTradeValue { row: i, col: j, value: v });
                }
            }
        }
        Ok(Self(f))
    }

    /// Number of countries.
    pub fn n(&self) -> usize {
        self.0.n()
    }

    /// Flow between `i` and `j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    /// Underlying matrix.
    pub fn as_matrix(&self) -> &SquareMatrix {
        &self.0
    }
}

/// `F = Ex + Exᵀ`.
pub fn symmetrize(ex: &DirectedTradeMatrix) -> TradeMatrix {
    let n = ex.n();
    let mut f = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let v = ex.get(i, j) + ex.get(j, i);
            f.set(i, j, v);
            f.set(j, i, v);
        }
    }
    TradeMatrix(f)
}
