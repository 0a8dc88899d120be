//! Normalization, the impute/regress fixed-point loop, and per-pair post adjustment.

use alloc::vec::Vec;

use crate::error::{GravityError, Result};
use crate::geo::DistanceMatrix;
use crate::impute::{impute_zeros, predictor_values, ImputeConfig, PairVector};
use crate::matrix::upper_pairs;
use crate::regress::ols2;
use crate::sum::sum;
use crate::trade::{CountryTable, TradeMatrix};

/// Parameter pairs closer than this at non-consecutive iterations count as a cycle.
pub const OSCILLATION_TOLERANCE: f64 = 1e-9;

/// Flatten the upper triangles of `F`, `G_iG_j` and `R` and divide each by its own total.
pub fn normalize_and_vectorize(f: &TradeMatrix, countries: &CountryTable, d: &DistanceMatrix) -> Result<PairVector> {
    let n = countries.len();
    if f.n() != n || d.n() != n {
        return Err(GravityError::DimensionMismatch(alloc::format!(
            "{n} countries, trade matrix {}x{0}, distance matrix {}x{1}",
            f.n(),
            d.n()
        )));
    }
    let gdp = countries.gdps();
    let mut flows = Vec::new();
    let mut products = Vec::new();
    let mut dists = Vec::new();
    for (i, j) in upper_pairs(n) {
        let r = d.get(i, j);
        if !(r > 0.0) {
            return Err(GravityError::ZeroDistance { i, j });
        }
        flows.push(f.get(i, j));
        products.push(gdp[i] * gdp[j]);
        dists.push(r);
    }
    let total_flow = sum(flows.iter().copied());
    if !(total_flow > 0.0) {
        return Err(GravityError::AllFlowsZero);
    }
    let total_product = sum(products.iter().copied());
    let total_dist = sum(dists.iter().copied());
    for v in &mut flows {
        *v /= total_flow;
    }
    for v in &mut products {
        *v /= total_product;
    }
    for v in &mut dists {
        *v /= total_dist;
    }
    PairVector::from_normalized(n, flows, products, dists)
}

/// Starting point, stopping rule and imputation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EstimateConfig {
    /// Initial GDP exponent.
    pub delta_init: f64,
    /// Initial distance exponent.
    pub beta_init: f64,
    /// Tolerance on consecutive δ.
    pub eps1: f64,
    /// Tolerance on consecutive β.
    pub eps2: f64,
    /// Iteration cap.
    pub max_iter: usize,
    /// Local regression settings.
    pub impute: ImputeConfig,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        Self { delta_init: 1.0, beta_init: -1.0, eps1: 1e-3, eps2: 1e-3, max_iter: 100, impute: ImputeConfig::default() }
    }
}

impl EstimateConfig {
    /// Range checks.
    pub fn validate(&self) -> Result<()> {
        if !(self.eps1 > 0.0 && self.eps2 > 0.0) {
            return Err(GravityError::InvalidConfig(alloc::format!(
                "eps1 and eps2 must be > 0, got {} and {}",
                self.eps1,
                self.eps2
            )));
        }
        if self.max_iter == 0 {
            return Err(GravityError::InvalidConfig("max_iter must be >= 1".into()));
        }
        if !(self.delta_init.is_finite() && self.beta_init.is_finite()) {
            return Err(GravityError::InvalidConfig("initial exponents must be finite".into()));
        }
        self.impute.validate()
    }
}

/// One pass of the loop: the regression fitted after imputing with the previous exponents.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceEntry {
    /// 1-based iteration number.
    pub iteration: usize,
    /// Fitted intercept.
    pub ln_k: f64,
    /// Fitted δ.
    pub delta: f64,
    /// Fitted β.
    pub beta: f64,
    /// Fit diagnostic.
    pub r_squared: f64,
    /// Earlier non-adjacent iteration whose (δ, β) this one repeats, if any.
    pub repeat_of: Option<usize>,
}

/// Result of [`estimate`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GravityParams {
    /// Final intercept (`ln K` in normalized units).
    pub ln_k: f64,
    /// Final GDP exponent δ.
    pub delta: f64,
    /// Final distance exponent β.
    pub beta: f64,
    /// Regressions performed.
    pub iterations: usize,
    /// Whether the last step met both tolerances.
    pub converged: bool,
    /// Whether a cycle was seen in the trace.
    pub oscillating: bool,
    /// Every regression in order.
    pub trace: Vec<TraceEntry>,
}

/// Parameters plus the filled flow vector the final regression was run on.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimation {
    /// Fitted parameters and trace.
    pub params: GravityParams,
    /// Normalized flows with dummies in place of zeros.
    pub filled: Vec<f64>,
}

/// Iterate impute → regress until consecutive exponents agree within `eps1`/`eps2`.
///
/// Non-convergence within `max_iter` is reported through `converged = false`.
pub fn estimate(pv: &PairVector, cfg: &EstimateConfig) -> Result<Estimation> {
    cfg.validate()?;
    if pv.len() < 3 {
        return Err(GravityError::TooFewObservations { needed: 3, got: pv.len() });
    }
    let ln_gg: Vec<f64> = pv.gg().iter().map(|&v| libm::log(v)).collect();
    let ln_r: Vec<f64> = pv.r().iter().map(|&v| libm::log(v)).collect();

    let (mut delta, mut beta) = (cfg.delta_init, cfg.beta_init);
    let mut trace: Vec<TraceEntry> = Vec::new();
    let mut converged = false;
    let mut filled = Vec::new();
    let mut ln_t = Vec::with_capacity(pv.len());

    for iteration in 1..=cfg.max_iter {
        let x = predictor_values(pv, delta, beta)?;
        filled = impute_zeros(pv, &x, &cfg.impute)?;
        ln_t.clear();
        ln_t.extend(filled.iter().map(|&v| libm::log(v)));
        let fit = ols2(&ln_t, &ln_gg, &ln_r)?;

        let n_prev = trace.len();
        let repeat_of = trace[..n_prev.saturating_sub(1)]
            .iter()
            .find(|e| {
                libm::fabs(e.delta - fit.b1) <= OSCILLATION_TOLERANCE
                    && libm::fabs(e.beta - fit.b2) <= OSCILLATION_TOLERANCE
            })
            .map(|e| e.iteration);
        trace.push(TraceEntry {
            iteration,
            ln_k: fit.intercept,
            delta: fit.b1,
            beta: fit.b2,
            r_squared: fit.r_squared,
            repeat_of,
        });

        let done = libm::fabs(fit.b1 - delta) <= cfg.eps1 && libm::fabs(fit.b2 - beta) <= cfg.eps2;
        delta = fit.b1;
        beta = fit.b2;
        if done {
            converged = true;
            break;
        }
    }

    let last = trace.last().copied().ok_or_else(|| GravityError::Invariant("empty trace".into()))?;
    let params = GravityParams {
        ln_k: last.ln_k,
        delta: last.delta,
        beta: last.beta,
        iterations: trace.len(),
        converged,
        oscillating: trace.iter().any(|e| e.repeat_of.is_some()),
        trace,
    };
    Ok(Estimation { params, filled })
}

/// Per-pair dielectric constants, bilateral distances and trade potentials.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PairAdjustment {
    /// `K′ = exp(ln_k)`, the common constant in normalized units.
    pub k_prime: f64,
    /// `κ_ij = P_ij / t_ij`.
    pub kappa: Vec<f64>,
    /// `T_ij = R_ij / κ_ij^(1/β)` in km.
    pub bilateral_distance: Vec<f64>,
    /// `P_ij = K′ gg^δ r^β`.
    pub potential: Vec<f64>,
}

/// Express each pair's deviation from the global fit as a dielectric constant.
///
/// `filled` is the imputed flow vector (see [`Estimation::filled`]), so every pair,
/// including originally zero ones, gets a finite κ.
pub fn post_adjust(
    pv: &PairVector,
    filled: &[f64],
    d: &DistanceMatrix,
    params: &GravityParams,
) -> Result<PairAdjustment> {
    if params.beta == 0.0 {
        return Err(GravityError::ZeroBeta);
    }
    if !(params.ln_k.is_finite() && params.delta.is_finite() && params.beta.is_finite()) {
        return Err(GravityError::InvalidConfig("non-finite parameters".into()));
    }
    if filled.len() != pv.len() || d.n() != pv.n_countries() {
        return Err(GravityError::DimensionMismatch(alloc::format!(
            "{} pairs, {} filled flows, distance matrix over {} countries",
            pv.len(),
            filled.len(),
            d.n()
        )));
    }
    let k_prime = libm::exp(params.ln_k);
    let x = predictor_values(pv, params.delta, params.beta)?;
    let inv_beta = 1.0 / params.beta;
    let mut kappa = Vec::with_capacity(pv.len());
    let mut bilateral_distance = Vec::with_capacity(pv.len());
    let mut potential = Vec::with_capacity(pv.len());
    for (k, &t) in filled.iter().enumerate() {
        if !(t > 0.0 && t.is_finite()) {
            let (i, j) = pv.pair(k);
            return Err(GravityError::Invariant(alloc::format!("flow for pair ({i}, {j}) is {t} after imputation")));
        }
        let p = k_prime * x[k];
        let kap = p / t;
        let (i, j) = pv.pair(k);
        potential.push(p);
        kappa.push(kap);
        bilateral_distance.push(d.get(i, j) / libm::pow(kap, inv_beta));
    }
    Ok(PairAdjustment { k_prime, kappa, bilateral_distance, potential })
}
