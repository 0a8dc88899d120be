//! Synthetic trade worlds that follow the gravity equation exactly, optionally
//! with multiplicative noise and censored small flows.

use gravity_core::{
    haversine_km, CountryRecord, CountryTable, DirectedTradeMatrix, GeoPoint, Result, SquareMatrix,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generator settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorldSpec {
    pub n: usize,
    pub seed: u64,
    pub year: i32,
    pub delta: f64,
    pub beta: f64,
    /// Constant `K` in `F = K (G_i G_j)^δ R^β`.
    pub k: f64,
    /// GDPs are drawn log-uniformly from this range (USD).
    pub gdp_range: (f64, f64),
    /// Each flow is multiplied by `exp(u)`, `u ~ U(-noise, noise)`.
    pub noise: f64,
}

impl Default for WorldSpec {
    fn default() -> Self {
        Self { n: 50, seed: 2014, year: 2014, delta: 1.0, beta: -1.1, k: 1e-12, gdp_range: (1e9, 2e13), noise: 0.0 }
    }
}

/// Three-letter code for index `k`: AAA, AAB, ...
pub fn iso_code(k: usize) -> String {
    let b = |v: usize| (b'A' + (v % 26) as u8) as char;
    [b(k / 676), b(k / 26), b(k)].iter().collect()
}

/// Random countries, then flows from the gravity equation split evenly between directions.
pub fn generate(spec: &WorldSpec) -> Result<(CountryTable, DirectedTradeMatrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (lo, hi) = (spec.gdp_range.0.ln(), spec.gdp_range.1.ln());
    let mut records = Vec::with_capacity(spec.n);
    for k in 0..spec.n {
        let gdp = rng.random_range(lo..hi).exp();
        let lat = rng.random_range(-55.0..65.0);
        let lon = rng.random_range(-179.5..179.5);
        records.push(CountryRecord {
            iso: iso_code(k),
            capital_name: format!("Capital {}", iso_code(k)),
            gdp_usd: gdp,
            capital: GeoPoint::new(lat, lon)?,
        });
    }
    let table = CountryTable::new(spec.year, records)?;
    let exports = gravity_flows(&table, spec, &mut rng)?;
    Ok((table, exports))
}

/// Flows for an existing table.
pub fn gravity_flows(table: &CountryTable, spec: &WorldSpec, rng: &mut impl Rng) -> Result<DirectedTradeMatrix> {
    let n = table.len();
    let recs = table.records();
    let mut ex = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let r = haversine_km(recs[i].capital, recs[j].capital)?;
            let mut f = spec.k * (recs[i].gdp_usd * recs[j].gdp_usd).powf(spec.delta) * r.powf(spec.beta);
            if spec.noise > 0.0 {
                f *= rng.random_range(-spec.noise..spec.noise).exp();
            }
            ex.set(i, j, f / 2.0);
            ex.set(j, i, f / 2.0);
        }
    }
    DirectedTradeMatrix::new(ex)
}

/// Zero the smallest `fraction` of bilateral flows (both directions).
pub fn censor_smallest(ex: &DirectedTradeMatrix, fraction: f64) -> Result<DirectedTradeMatrix> {
    let n = ex.n();
    let mut pairs: Vec<(f64, usize, usize)> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| (ex.get(i, j) + ex.get(j, i), i, j)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let cut = (fraction * pairs.len() as f64).floor() as usize;
    let mut m = ex.as_matrix().clone();
    for &(_, i, j) in &pairs[..cut] {
        m.set(i, j, 0.0);
        m.set(j, i, 0.0);
    }
    DirectedTradeMatrix::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use gravity_core::symmetrize;

    #[test]
    fn iso_codes_are_unique_letters() {
        assert_eq!(iso_code(0), "AAA");
        assert_eq!(iso_code(27), "ABB");
        let codes: std::collections::HashSet<_> = (0..500).map(iso_code).collect();
        assert_eq!(codes.len(), 500);
    }

    #[test]
    fn censoring_zeroes_the_requested_share() {
        let (_, ex) = generate(&WorldSpec { n: 10, ..Default::default() }).unwrap();
        let cen = censor_smallest(&ex, 0.3).unwrap();
        let f = symmetrize(&cen);
        let zeros = (0..10).flat_map(|i| (i + 1..10).map(move |j| (i, j))).filter(|&(i, j)| f.get(i, j) == 0.0).count();
        assert_eq!(zeros, 13);
    }

    #[test]
    fn deterministic() {
        let spec = WorldSpec { n: 8, noise: 0.3, ..Default::default() };
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
    }
}
