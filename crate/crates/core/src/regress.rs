//! Least-squares fits used by the estimator and the imputer.

use crate::error::{GravityError, Result};
use crate::sum::{sum, CompensatedSum};

/// Fit of `y ≈ intercept + b1·x1 + b2·x2`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Ols2Fit {
    /// Constant term.
    pub intercept: f64,
    /// Coefficient on `x1`.
    pub b1: f64,
    /// Coefficient on `x2`.
    pub b2: f64,
    /// Coefficient of determination, clamped to `[0, 1]`.
    pub r_squared: f64,
    /// Sample size.
    pub n: usize,
}

impl Ols2Fit {
    /// Fitted value at `(x1, x2)`.
    pub fn predict(&self, x1: f64, x2: f64) -> f64 {
        self.intercept + self.b1 * x1 + self.b2 * x2
    }
}

/// Fit of `y ≈ intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ols1Fit {
    /// Constant term.
    pub intercept: f64,
    /// Slope.
    pub slope: f64,
    /// Sample size.
    pub n: usize,
}

fn check_finite(v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(GravityError::NonFinite(i)),
        None => Ok(()),
    }
}

/// Two-predictor least squares with intercept, solved through the 3×3 normal
/// equations (compensated accumulation, partial pivoting).
pub fn ols2(y: &[f64], x1: &[f64], x2: &[f64]) -> Result<Ols2Fit> {
    let n = y.len();
    if x1.len() != n || x2.len() != n {
        return Err(GravityError::DimensionMismatch(alloc::format!(
            "y has {n} entries, x1 {}, x2 {}",
            x1.len(),
            x2.len()
        )));
    }
    if n < 3 {
        return Err(GravityError::TooFewObservations { needed: 3, got: n });
    }
    check_finite(y)?;
    check_finite(x1)?;
    check_finite(x2)?;

    let mut acc = [CompensatedSum::default(); 9];
    for k in 0..n {
        let (a, b, t) = (x1[k], x2[k], y[k]);
        for (slot, v) in acc.iter_mut().zip([a, b, a * a, a * b, b * b, t, a * t, b * t]) {
            slot.add(v);
        }
    }
    let s: [f64; 9] = core::array::from_fn(|i| acc[i].value());
    let nf = n as f64;
    let mut m = [
        [nf, s[0], s[1], s[5]],
        [s[0], s[2], s[3], s[6]],
        [s[1], s[3], s[4], s[7]],
    ];
    let [intercept, b1, b2] = solve3(&mut m)?;

    let residual = |k: usize| y[k] - (intercept + b1 * x1[k] + b2 * x2[k]);
    let mean_y = sum(y.iter().copied()) / nf;
    let sse = sum((0..n).map(|k| residual(k) * residual(k)));
    let sst = sum(y.iter().map(|&t| (t - mean_y) * (t - mean_y)));
    let r_squared = if sst > 0.0 { (1.0 - sse / sst).clamp(0.0, 1.0) } else { 1.0 };

    Ok(Ols2Fit { intercept, b1, b2, r_squared, n })
}

/// Gaussian elimination with partial pivoting on an augmented 3×4 system.
fn solve3(m: &mut [[f64; 4]; 3]) -> Result<[f64; 3]> {
    let scale = m
        .iter()
        .flat_map(|r| r[..3].iter())
        .fold(0.0f64, |acc, v| acc.max(libm::fabs(*v)));
    let threshold = 1e-12 * scale;
    for col in 0..3 {
        let pivot_row = (col..3)
            .max_by(|&a, &b| libm::fabs(m[a][col]).total_cmp(&libm::fabs(m[b][col])))
            .unwrap_or(col);
        m.swap(col, pivot_row);
        let pivot = m[col][col];
        if !(libm::fabs(pivot) >= threshold) || pivot == 0.0 {
            return Err(GravityError::SingularDesign { pivot: libm::fabs(pivot), threshold });
        }
        for row in col + 1..3 {
            let factor = m[row][col] / pivot;
            for k in col..4 {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    let mut out = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = m[row][3];
        for k in row + 1..3 {
            acc -= m[row][k] * out[k];
        }
        out[row] = acc / m[row][row];
    }
    Ok(out)
}

/// Simple linear regression by the centred closed form.
pub fn ols1(y: &[f64], x: &[f64]) -> Result<Ols1Fit> {
    let n = y.len();
    if x.len() != n {
        return Err(GravityError::DimensionMismatch(alloc::format!(
            "y has {n} entries, x {}",
            x.len()
        )));
    }
    if n < 2 {
        return Err(GravityError::TooFewObservations { needed: 2, got: n });
    }
    check_finite(y)?;
    check_finite(x)?;
    if x.iter().all(|&v| v == x[0]) {
        return Err(GravityError::DegeneratePredictor);
    }
    let nf = n as f64;
    let mx = sum(x.iter().copied()) / nf;
    let my = sum(y.iter().copied()) / nf;
    let sxx = sum(x.iter().map(|&v| (v - mx) * (v - mx)));
    let sxy = sum(x.iter().zip(y).map(|(&a, &b)| (a - mx) * (b - my)));
    if sxx == 0.0 {
        return Err(GravityError::DegeneratePredictor);
    }
    let slope = sxy / sxx;
    Ok(Ols1Fit { intercept: my - slope * mx, slope, n })
}

/// `intercept + slope·x`.
pub fn predict1(fit: &Ols1Fit, x: f64) -> f64 {
    fit.intercept + fit.slope * x
}
