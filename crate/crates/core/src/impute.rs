//! Dummy values for zero flows by local nearest-neighbour regression.
//!
//! Every zero entry of the normalized flow vector is replaced by the value a
//! straight line predicts at that pair's predictor `x = gg^δ · r^β`, where the
//! line is fitted to the `m` originally non-zero pairs whose `x` lies closest.
//! Dummies are never used as anchors, so the result does not depend on the
//! order in which zeros are visited.

use alloc::vec::Vec;

use crate::error::{GravityError, Result};
use crate::matrix::{pair_count, upper_pairs};
use crate::regress::{ols1, predict1};
use crate::sum::sum;

/// Upper-triangle vectors of normalized flow, GDP product and distance.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PairVector {
    n_countries: usize,
    t: Vec<f64>,
    gg: Vec<f64>,
    r: Vec<f64>,
    zero_mask: Vec<bool>,
    pairs: Vec<(usize, usize)>,
}

impl PairVector {
    /// Assemble from already-normalized upper-triangle vectors.
    ///
    /// Checks lengths, `gg > 0`, `r > 0`, `t ≥ 0` and that each vector sums to 1.
    pub fn from_normalized(n_countries: usize, t: Vec<f64>, gg: Vec<f64>, r: Vec<f64>) -> Result<Self> {
        let len = pair_count(n_countries);
        if t.len() != len || gg.len() != len || r.len() != len {
            return Err(GravityError::DimensionMismatch(alloc::format!(
                "{n_countries} countries need {len} pairs; got t={}, gg={}, r={}",
                t.len(),
                gg.len(),
                r.len()
            )));
        }
        let pairs: Vec<_> = upper_pairs(n_countries).collect();
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if !(t[k].is_finite() && t[k] >= 0.0) {
                return Err(GravityError::InvalidTradeValue { row: i, col: j, value: t[k] });
            }
            if !(gg[k].is_finite() && gg[k] > 0.0) {
                return Err(GravityError::Invariant(alloc::format!("gg[{i},{j}] = {} is not positive", gg[k])));
            }
            if !(r[k].is_finite() && r[k] > 0.0) {
                return Err(GravityError::ZeroDistance { i, j });
            }
        }
        for (name, v) in [("t", &t), ("gg", &gg), ("r", &r)] {
            let s = sum(v.iter().copied());
            if len > 0 && libm::fabs(s - 1.0) > 1e-12 {
                return Err(GravityError::Invariant(alloc::format!("{name} sums to {s}, expected 1")));
            }
        }
        let zero_mask = t.iter().map(|&v| v == 0.0).collect();
        Ok(Self { n_countries, t, gg, r, zero_mask, pairs })
    }

    /// Number of countries `N`.
    pub fn n_countries(&self) -> usize {
        self.n_countries
    }

    /// Number of pairs `N(N-1)/2`.
    pub fn len(&self) -> usize {
        self.t.len()
    }

    /// Whether there are no pairs.
    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Normalized flows.
    pub fn t(&self) -> &[f64] {
        &self.t
    }

    /// Normalized GDP products.
    pub fn gg(&self) -> &[f64] {
        &self.gg
    }

    /// Normalized distances.
    pub fn r(&self) -> &[f64] {
        &self.r
    }

    /// `true` where the observed flow is zero.
    pub fn zero_mask(&self) -> &[bool] {
        &self.zero_mask
    }

    /// Number of zero flows.
    pub fn zero_count(&self) -> usize {
        self.zero_mask.iter().filter(|&&z| z).count()
    }

    /// Country indices `(i, j)`, `i < j`, of linear index `k`.
    pub fn pair(&self, k: usize) -> (usize, usize) {
        self.pairs[k]
    }

    /// All country-index pairs in linear order.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

/// Settings for the local regressions.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ImputeConfig {
    /// Anchors per local fit.
    pub m_neighbors: usize,
    /// Non-positive predictions are replaced by this fraction of the smallest observed flow.
    pub floor_factor: f64,
}

impl Default for ImputeConfig {
    fn default() -> Self {
        Self { m_neighbors: 4, floor_factor: 0.5 }
    }
}

impl ImputeConfig {
    /// Range checks.
    pub fn validate(&self) -> Result<()> {
        if self.m_neighbors < 2 {
            return Err(GravityError::InvalidConfig(alloc::format!(
                "m_neighbors must be >= 2, got {}",
                self.m_neighbors
            )));
        }
        if !(self.floor_factor > 0.0 && self.floor_factor < 1.0) {
            return Err(GravityError::InvalidConfig(alloc::format!(
                "floor_factor must lie in (0, 1), got {}",
                self.floor_factor
            )));
        }
        Ok(())
    }
}

/// Per-pair predictor `gg^δ · r^β`.
pub fn predictor_values(pv: &PairVector, delta: f64, beta: f64) -> Result<Vec<f64>> {
    if !delta.is_finite() || !beta.is_finite() {
        return Err(GravityError::InvalidConfig(alloc::format!("non-finite exponents ({delta}, {beta})")));
    }
    pv.gg
        .iter()
        .zip(&pv.r)
        .zip(&pv.pairs)
        .map(|((&gg, &r), &(i, j))| {
            let x = libm::pow(gg, delta) * libm::pow(r, beta);
            if x.is_finite() && x > 0.0 {
                Ok(x)
            } else {
                Err(GravityError::PredictorOverflow { i, j, value: x })
            }
        })
        .collect()
}

/// Fill the zero flows of `pv` using predictor `x`. Non-zero flows are copied unchanged.
pub fn impute_zeros(pv: &PairVector, x: &[f64], cfg: &ImputeConfig) -> Result<Vec<f64>> {
    impute_flows(&pv.t, x, cfg)
}

/// Same as [`impute_zeros`] on bare slices; entries equal to `0.0` are filled.
pub fn impute_flows(t: &[f64], x: &[f64], cfg: &ImputeConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if t.len() != x.len() {
        return Err(GravityError::DimensionMismatch(alloc::format!(
            "{} flows but {} predictor values",
            t.len(),
            x.len()
        )));
    }
    if let Some(k) = x.iter().position(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(GravityError::NonFinite(k));
    }
    if let Some(k) = t.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(GravityError::NonFinite(k));
    }

    let mut out = t.to_vec();
    if !t.contains(&0.0) {
        return Ok(out);
    }

    let mut anchors: Vec<(f64, usize)> =
        t.iter().enumerate().filter(|(_, &v)| v > 0.0).map(|(k, _)| (x[k], k)).collect();
    let m = cfg.m_neighbors;
    if anchors.len() < m {
        return Err(GravityError::InsufficientAnchors { needed: m, got: anchors.len() });
    }
    anchors.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let floor = cfg.floor_factor * anchors.iter().map(|&(_, k)| t[k]).fold(f64::INFINITY, f64::min);

    let mut xs = Vec::with_capacity(m);
    let mut ys = Vec::with_capacity(m);
    let mut chosen = Vec::with_capacity(m + 4);
    for (k, slot) in out.iter_mut().enumerate() {
        if t[k] != 0.0 {
            continue;
        }
        nearest_anchors(&anchors, x[k], m, &mut chosen);
        xs.clear();
        ys.clear();
        for &(_, a) in &chosen {
            xs.push(x[a]);
            ys.push(t[a]);
        }
        let local = match ols1(&ys, &xs) {
            Ok(fit) => predict1(&fit, x[k]),
            Err(GravityError::DegeneratePredictor) => sum(ys.iter().copied()) / ys.len() as f64,
            Err(e) => return Err(e),
        };
        *slot = if local.is_finite() && local > 0.0 { local } else { floor };
    }
    Ok(out)
}

/// The `m` anchors closest to `x0` by `|Δx|`, ties broken by lower linear index.
///
/// `anchors` must be sorted by `(x, index)`. Results go to `out` as linear indices.
fn nearest_anchors(anchors: &[(f64, usize)], x0: f64, m: usize, out: &mut Vec<(f64, usize)>) {
    let split = anchors.partition_point(|a| a.0 < x0);
    let (mut lo, mut hi) = (split, split);
    let dist = |i: usize| libm::fabs(anchors[i].0 - x0);
    out.clear();

    // merge the two distance-sorted frontiers
    while out.len() < m {
        let take_left = match (lo > 0, hi < anchors.len()) {
            (true, true) => {
                let (dl, dr) = (dist(lo - 1), dist(hi));
                dl < dr || (dl == dr && anchors[lo - 1].1 < anchors[hi].1)
            }
            (true, false) => true,
            (false, true) => false,
            (false, false) => break,
        };
        if take_left {
            lo -= 1;
            out.push((dist(lo), anchors[lo].1));
        } else {
            out.push((dist(hi), anchors[hi].1));
            hi += 1;
        }
    }
    // anything tied with the m-th distance competes on index
    let cutoff = out.iter().fold(0.0f64, |acc, c| acc.max(c.0));
    while lo > 0 && dist(lo - 1) == cutoff {
        lo -= 1;
        out.push((cutoff, anchors[lo].1));
    }
    while hi < anchors.len() && dist(hi) == cutoff {
        out.push((cutoff, anchors[hi].1));
        hi += 1;
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    out.truncate(m);
}
