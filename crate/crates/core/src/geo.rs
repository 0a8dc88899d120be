//! Great-circle distances between capital cities.

use crate::error::{GravityError, Result};
use crate::matrix::SquareMatrix;

/// Mean Earth radius used by the haversine formula.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Latitude/longitude in signed decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GeoPoint {
    lat: f64,
    lon: f64,
}

impl GeoPoint {
    /// Validated point. Latitude must lie in `[-90, 90]`, longitude in `(-180, 180]`.
    pub fn new(lat: f64, lon: f64) -> Result<Self> {
        let p = Self { lat, lon };
        p.validate()?;
        Ok(p)
    }

    /// Latitude in degrees.
    pub fn lat(&self) -> f64 {
        self.lat
    }

    /// Longitude in degrees.
    pub fn lon(&self) -> f64 {
        self.lon
    }

    fn validate(&self) -> Result<()> {
        if !(self.lat.is_finite() && (-90.0..=90.0).contains(&self.lat)) {
            return Err(GravityError::InvalidCoordinate {
                field: "lat",
                value: self.lat,
                expected: "[-90, 90]",
            });
        }
        if !(self.lon.is_finite() && self.lon > -180.0 && self.lon <= 180.0) {
            return Err(GravityError::InvalidCoordinate {
                field: "lon",
                value: self.lon,
                expected: "(-180, 180]",
            });
        }
        Ok(())
    }
}

/// Haversine great-circle distance in kilometres.
pub fn haversine_km(a: GeoPoint, b: GeoPoint) -> Result<f64> {
    a.validate()?;
    b.validate()?;
    let (phi1, phi2) = (a.lat.to_radians(), b.lat.to_radians());
    let dphi = phi1 - phi2;
    let dlambda = (a.lon - b.lon).to_radians();
    let s_phi = libm::sin(dphi / 2.0);
    let s_lambda = libm::sin(dlambda / 2.0);
    let h = s_phi * s_phi + libm::cos(phi1) * libm::cos(phi2) * s_lambda * s_lambda;
    // h can overshoot 1 by an ulp at antipodes
    let root = libm::sqrt(h).clamp(0.0, 1.0);
    Ok((2.0 * EARTH_RADIUS_KM * libm::asin(root)).min(core::f64::consts::PI * EARTH_RADIUS_KM))
}

/// Symmetric matrix of pairwise capital distances (km) with a zero diagonal.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DistanceMatrix(SquareMatrix);

impl DistanceMatrix {
    /// Number of countries.
    pub fn n(&self) -> usize {
        self.0.n()
    }

    /// Distance between `i` and `j` in km.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    /// Underlying matrix.
    pub fn as_matrix(&self) -> &SquareMatrix {
        &self.0
    }
}

/// Pairwise haversine distances between the given capitals.
pub fn distance_matrix(points: &[GeoPoint]) -> Result<DistanceMatrix> {
    let n = points.len();
    let mut d = SquareMatrix::zeros(n);
    for p in points {
        p.validate()?;
    }
    for i in 0..n {
        for j in i + 1..n {
            let km = haversine_km(points[i], points[j])?;
            d.set(i, j, km);
            d.set(j, i, km);
        }
    }
    Ok(DistanceMatrix(d))
}
