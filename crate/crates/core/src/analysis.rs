//! Fitting procedures for scan data: non-negative power-series
//! decomposition in laser intensity, single power-law exponent extraction,
//! and Fowler-Nordheim I-V regression for the tip radius.

pub mod nnls;

use serde::Serialize;
use thiserror::Error;

use crate::emission::FN_EXPONENT_CONSTANT;

/// Condition-estimate threshold past which a power-series fit is flagged as
/// order-ambiguous rather than silently regularized.
const CONDITION_WARNING_THRESHOLD: f64 = 1e10;

/// Hard cap on the power-series order (matches the emission channel cap).
pub const MAX_FIT_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("need at least {needed} data points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("x and y lengths differ ({x} vs {y})")]
    LengthMismatch { x: usize, y: usize },
    #[error("max_order {0} exceeds the cap {MAX_FIT_ORDER}")]
    OrderTooHigh(usize),
    #[error("point {index}: power must be strictly positive, got {value}")]
    NonPositivePower { index: usize, value: f64 },
    #[error("powers must be strictly monotone (violated between points {0} and {1})")]
    NonMonotonePowers(usize, usize),
    #[error("point {index}: count must be non-negative and finite, got {value}")]
    InvalidCount { index: usize, value: f64 },
    #[error("point {index}: count must be strictly positive for a log-space fit, got {value}; pre-filter zero-count points")]
    NonPositiveCount { index: usize, value: f64 },
    #[error("point {index}: voltage must be nonzero, got {value}")]
    ZeroVoltage { index: usize, value: f64 },
    #[error("voltages must share one sign (point {0} differs from point 0)")]
    MixedVoltageSign(usize),
    #[error("{name} must be strictly positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },
    #[error("data inconsistent with Fowler-Nordheim emission: ln(Y/V^2) vs 1/|V| slope is {0:.3e} (expected negative)")]
    NotFowlerNordheim(f64),
    #[error("design matrix is numerically singular")]
    SingularDesign,
}

/// Result of the Σ cₙ Iⁿ decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeriesFit {
    /// cₙ against the raw power axis (index = order). Non-negative.
    pub coefficients: Vec<f64>,
    /// cₙ in the median-normalized basis actually solved.
    pub normalized_coefficients: Vec<f64>,
    /// Per-coefficient standard errors in the raw basis, from the
    /// unconstrained weighted covariance (AᵀWA)⁻¹.
    pub standard_errors: Vec<f64>,
    /// Median power used to normalize the intensity variable.
    pub power_scale: f64,
    /// Weighted residual norm ‖W^{1/2}(A c − y)‖₂.
    pub residual_norm: f64,
    /// Per-order contribution cₙ Iⁿ evaluated on the input grid:
    /// `per_order_contributions[n][i]`.
    pub per_order_contributions: Vec<Vec<f64>>,
    pub warnings: Vec<String>,
}

impl PowerSeriesFit {
    /// Contribution of one order at an arbitrary power (same units as the
    /// input grid).
    pub fn contribution_at(&self, order: usize, power: f64) -> f64 {
        self.coefficients[order] * power.powi(order as i32)
    }

    /// Model prediction at an arbitrary power.
    pub fn predict(&self, power: f64) -> f64 {
        (0..self.coefficients.len())
            .map(|n| self.contribution_at(n, power))
            .sum()
    }
}

/// Result of a single power-law fit `counts = prefactor × power^exponent`.
#[derive(Debug, Clone, PartialEq)]
pub struct SinglePowerFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
}

/// Result of the Fowler-Nordheim I-V regression.
#[derive(Debug, Clone, PartialEq)]
pub struct FnRadiusFit {
    /// Recovered tip radius (m).
    pub radius: f64,
    /// Slope of ln(Y/V²) against 1/|V| (V); negative for FN-like data.
    pub slope: f64,
    /// Intercept of the same regression.
    pub intercept: f64,
    pub assumed_phi_ev: f64,
    pub assumed_k: f64,
}

/// Non-negative least-squares decomposition of count data into Σ cₙ Iⁿ,
/// n = 0..=max_order.
///
/// Fitting happens in linear count space with Poisson weights
/// 1/max(count, 1). The intensity variable is normalized so the grid median
/// is 1 before the Vandermonde design is built (raw watts raised to the
/// fifth power are catastrophically ill-conditioned), and the returned
/// `coefficients` are mapped back to the raw power axis.
pub fn fit_power_sum(
    powers: &[f64],
    counts: &[f64],
    max_order: usize,
) -> Result<PowerSeriesFit, FitError> {
    if max_order > MAX_FIT_ORDER {
        return Err(FitError::OrderTooHigh(max_order));
    }
    if powers.len() != counts.len() {
        return Err(FitError::LengthMismatch {
            x: powers.len(),
            y: counts.len(),
        });
    }
    let needed = max_order + 2;
    if powers.len() < needed {
        return Err(FitError::InsufficientPoints {
            needed,
            got: powers.len(),
        });
    }
    validate_positive_monotone(powers)?;
    for (i, &c) in counts.iter().enumerate() {
        if !c.is_finite() || c < 0.0 {
            return Err(FitError::InvalidCount { index: i, value: c });
        }
    }

    let median = median(powers);
    let n_cols = max_order + 1;
    let intensities: Vec<f64> = powers.iter().map(|&p| p / median).collect();
    let weights: Vec<f64> = counts.iter().map(|&c| 1.0 / c.max(1.0)).collect();

    // Weighted design, column-major: column n is sqrt(w_i) I_i^n.
    let columns: Vec<Vec<f64>> = (0..n_cols)
        .map(|n| {
            intensities
                .iter()
                .zip(&weights)
                .map(|(&x, &w)| w.sqrt() * x.powi(n as i32))
                .collect()
        })
        .collect();
    let rhs: Vec<f64> = counts
        .iter()
        .zip(&weights)
        .map(|(&c, &w)| w.sqrt() * c)
        .collect();

    let solution = nnls::nnls(&columns, &rhs, 1e-10);

    let mut warnings = Vec::new();
    let cond = nnls::condition_estimate(&columns);
    if cond > CONDITION_WARNING_THRESHOLD {
        warnings.push(format!(
            "ill-conditioned design (condition estimate {cond:.1e}); adjacent orders \
             may be exchangeable on this grid"
        ));
    }

    // Unconstrained weighted covariance diagonal for standard errors; with
    // Poisson weights the scale factor is already unity.
    let standard_errors_norm = match nnls::normal_matrix_inverse_diagonal(&columns) {
        Some(diag) => diag.iter().map(|&d| d.max(0.0).sqrt()).collect(),
        None => {
            warnings.push(
                "singular design: standard errors are not available".to_string(),
            );
            vec![f64::INFINITY; n_cols]
        }
    };

    // Map back from the normalized basis: c_raw = c_norm / median^n.
    let coefficients: Vec<f64> = solution
        .x
        .iter()
        .enumerate()
        .map(|(n, &c)| c / median.powi(n as i32))
        .collect();
    let standard_errors: Vec<f64> = standard_errors_norm
        .iter()
        .enumerate()
        .map(|(n, &se): (usize, &f64)| se / median.powi(n as i32))
        .collect();
    let per_order_contributions: Vec<Vec<f64>> = (0..n_cols)
        .map(|n| {
            intensities
                .iter()
                .map(|&x| solution.x[n] * x.powi(n as i32))
                .collect()
        })
        .collect();

    Ok(PowerSeriesFit {
        coefficients,
        normalized_coefficients: solution.x,
        standard_errors,
        power_scale: median,
        residual_norm: solution.residual_norm,
        per_order_contributions,
        warnings,
    })
}

/// Ordinary least squares on (log power, log counts); the exponent is the
/// slope. Every count must be strictly positive.
pub fn fit_single_power(powers: &[f64], counts: &[f64]) -> Result<SinglePowerFit, FitError> {
    if powers.len() != counts.len() {
        return Err(FitError::LengthMismatch {
            x: powers.len(),
            y: counts.len(),
        });
    }
    if powers.len() < 3 {
        return Err(FitError::InsufficientPoints {
            needed: 3,
            got: powers.len(),
        });
    }
    for (i, &p) in powers.iter().enumerate() {
        if !(p > 0.0) || !p.is_finite() {
            return Err(FitError::NonPositivePower { index: i, value: p });
        }
    }
    for (i, &c) in counts.iter().enumerate() {
        if !(c > 0.0) || !c.is_finite() {
            return Err(FitError::NonPositiveCount { index: i, value: c });
        }
    }
    let log_p: Vec<f64> = powers.iter().map(|p| p.ln()).collect();
    let log_c: Vec<f64> = counts.iter().map(|c| c.ln()).collect();
    let (slope, intercept, r_squared) = ols(&log_p, &log_c)?;
    Ok(SinglePowerFit {
        exponent: slope,
        prefactor: intercept.exp(),
        r_squared,
    })
}

/// Fowler-Nordheim I-V regression: ln(Y/V²) against 1/|V| is linear with
/// slope -C₀ φ^{3/2} k r, so the tip radius follows from the slope and the
/// assumed workfunction and geometry factor.
pub fn fit_fn_radius(
    voltages: &[f64],
    counts: &[f64],
    phi_ev: f64,
    geometry_factor: f64,
    c0: f64,
) -> Result<FnRadiusFit, FitError> {
    if voltages.len() != counts.len() {
        return Err(FitError::LengthMismatch {
            x: voltages.len(),
            y: counts.len(),
        });
    }
    if voltages.len() < 3 {
        return Err(FitError::InsufficientPoints {
            needed: 3,
            got: voltages.len(),
        });
    }
    for (name, value) in [
        ("phi_ev", phi_ev),
        ("geometry_factor", geometry_factor),
        ("c0", c0),
    ] {
        if !(value > 0.0) || !value.is_finite() {
            return Err(FitError::NonPositiveParameter { name, value });
        }
    }
    let sign = voltages[0].signum();
    for (i, &v) in voltages.iter().enumerate() {
        if v == 0.0 || !v.is_finite() {
            return Err(FitError::ZeroVoltage { index: i, value: v });
        }
        if v.signum() != sign {
            return Err(FitError::MixedVoltageSign(i));
        }
    }
    for (i, &c) in counts.iter().enumerate() {
        if !(c > 0.0) || !c.is_finite() {
            return Err(FitError::NonPositiveCount { index: i, value: c });
        }
    }
    let x: Vec<f64> = voltages.iter().map(|v| 1.0 / v.abs()).collect();
    let y: Vec<f64> = voltages
        .iter()
        .zip(counts)
        .map(|(v, c)| (c / (v * v)).ln())
        .collect();
    let (slope, intercept, _) = ols(&x, &y)?;
    if slope >= 0.0 {
        return Err(FitError::NotFowlerNordheim(slope));
    }
    let radius = -slope / (c0 * phi_ev.powf(1.5) * geometry_factor);
    Ok(FnRadiusFit {
        radius,
        slope,
        intercept,
        assumed_phi_ev: phi_ev,
        assumed_k: geometry_factor,
    })
}

/// Default exponent constant for [`fit_fn_radius`].
pub fn default_fn_c0() -> f64 {
    FN_EXPONENT_CONSTANT
}

fn validate_positive_monotone(powers: &[f64]) -> Result<(), FitError> {
    for (i, &p) in powers.iter().enumerate() {
        if !(p > 0.0) || !p.is_finite() {
            return Err(FitError::NonPositivePower { index: i, value: p });
        }
    }
    if powers.len() > 1 {
        let increasing = powers[1] > powers[0];
        for i in 1..powers.len() {
            let ok = if increasing {
                powers[i] > powers[i - 1]
            } else {
                powers[i] < powers[i - 1]
            };
            if !ok {
                return Err(FitError::NonMonotonePowers(i - 1, i));
            }
        }
    }
    Ok(())
}

fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("values validated finite"));
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    }
}

/// Plain OLS of y on x: (slope, intercept, r²).
fn ols(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64), FitError> {
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mean_x) * (xi - mean_x);
        sxy += (xi - mean_x) * (yi - mean_y);
        syy += (yi - mean_y) * (yi - mean_y);
    }
    if sxx == 0.0 {
        return Err(FitError::SingularDesign);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_res = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| {
            let r = yi - (intercept + slope * xi);
            r * r
        })
        .sum::<f64>();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok((slope, intercept, r_squared))
}

/// Flat fit report shared by the three procedures; serializes to the JSON
/// emitted by the `fit` subcommands.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub model: String,
    pub coefficients: Option<Vec<f64>>,
    pub exponent: Option<f64>,
    pub radius_m: Option<f64>,
    pub residual: Option<f64>,
    pub r_squared: Option<f64>,
    pub warnings: Vec<String>,
}

impl FitReport {
    pub fn from_power_sum(fit: &PowerSeriesFit) -> Self {
        Self {
            model: "power-sum".to_string(),
            coefficients: Some(fit.coefficients.clone()),
            exponent: None,
            radius_m: None,
            residual: Some(fit.residual_norm),
            r_squared: None,
            warnings: fit.warnings.clone(),
        }
    }

    pub fn from_single_power(fit: &SinglePowerFit) -> Self {
        Self {
            model: "single-power".to_string(),
            coefficients: None,
            exponent: Some(fit.exponent),
            radius_m: None,
            residual: None,
            r_squared: Some(fit.r_squared),
            warnings: Vec::new(),
        }
    }

    pub fn from_fn_radius(fit: &FnRadiusFit) -> Self {
        Self {
            model: "fn-radius".to_string(),
            coefficients: None,
            exponent: None,
            radius_m: Some(fit.radius),
            residual: None,
            r_squared: None,
            warnings: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn forward(powers: &[f64], coeffs: &[f64]) -> Vec<f64> {
        powers
            .iter()
            .map(|&p| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(n, &c)| c * p.powi(n as i32))
                    .sum()
            })
            .collect()
    }

    fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
            .collect()
    }

    #[test]
    fn power_sum_noiseless_round_trip() {
        // Physical coefficients against raw powers near the paper's range.
        let powers = log_grid(1e-3, 40e-3, 24);
        let median = median(&powers);
        // Normalized truth (0,0,1,2,3,0) mapped to the raw axis.
        let truth: Vec<f64> = [0.0, 0.0, 1.0, 2.0, 3.0, 0.0]
            .iter()
            .enumerate()
            .map(|(n, &c)| c * 1e4 / median.powi(n as i32))
            .collect();
        let counts = forward(&powers, &truth);
        let fit = fit_power_sum(&powers, &counts, 5).unwrap();
        for (n, (&got, &want)) in fit.coefficients.iter().zip(&truth).enumerate() {
            if want > 0.0 {
                assert!(
                    (got - want).abs() / want < 1e-6,
                    "order {n}: {got} vs {want}"
                );
            } else {
                assert!(
                    got.abs() <= 1e-6 * truth[4].abs().max(1.0),
                    "order {n}: expected ~0, got {got}"
                );
            }
        }
        // Regenerating from the fit reproduces the input.
        for (&p, &c) in powers.iter().zip(&counts) {
            assert!((fit.predict(p) - c).abs() / c < 1e-9);
        }
    }

    #[test]
    fn power_sum_zero_counts() {
        let powers = log_grid(1e-3, 40e-3, 10);
        let counts = vec![0.0; powers.len()];
        let fit = fit_power_sum(&powers, &counts, 5).unwrap();
        assert!(fit.coefficients.iter().all(|&c| c == 0.0));
        assert_eq!(fit.residual_norm, 0.0);
    }

    #[test]
    fn power_sum_mixture_recovers_support() {
        // Comparable c₂, c₃, c₄ at the normalized scale: all three nonzero,
        // the rest pinned at zero.
        let powers = log_grid(2e-3, 30e-3, 30);
        let median = median(&powers);
        let truth: Vec<f64> = [0.0, 0.0, 3.0, 2.0, 4.0, 0.0]
            .iter()
            .enumerate()
            .map(|(n, &c)| c * 2e4 / median.powi(n as i32))
            .collect();
        let counts = forward(&powers, &truth);
        let fit = fit_power_sum(&powers, &counts, 5).unwrap();
        for n in [2, 3, 4] {
            assert!(fit.coefficients[n] > 0.5 * truth[n], "order {n} lost");
        }
        for n in [0, 1, 5] {
            assert!(
                fit.coefficients[n] < 1e-6 * truth[4],
                "order {n} spurious: {}",
                fit.coefficients[n]
            );
        }
    }

    #[test]
    fn power_sum_axis_rescaling() {
        // Median normalization makes the normalized solve identical under
        // axis rescaling; raw coefficients transform exactly as c/sⁿ.
        let powers = log_grid(1e-3, 40e-3, 16);
        let counts = forward(&powers, &[5.0, 0.0, 3e6, 0.0, 2e13, 0.0]);
        let fit = fit_power_sum(&powers, &counts, 5).unwrap();
        let s = 1e3;
        let scaled: Vec<f64> = powers.iter().map(|p| p * s).collect();
        let fit_scaled = fit_power_sum(&scaled, &counts, 5).unwrap();
        for n in 0..=5 {
            let a = fit.normalized_coefficients[n];
            let b = fit_scaled.normalized_coefficients[n];
            assert!((a - b).abs() <= 1e-9 * a.abs().max(1e-12), "norm {n}");
            let raw_back = fit_scaled.coefficients[n] * s.powi(n as i32);
            assert!(
                (raw_back - fit.coefficients[n]).abs()
                    <= 1e-9 * fit.coefficients[n].abs().max(1e-12),
                "raw {n}"
            );
        }
    }

    #[test]
    fn power_sum_input_validation() {
        let powers = log_grid(1e-3, 40e-3, 6);
        let counts = vec![1.0; 6];
        assert!(matches!(
            fit_power_sum(&powers, &counts, 5),
            Err(FitError::InsufficientPoints { needed: 7, got: 6 })
        ));
        assert!(fit_power_sum(&powers[..4], &counts[..5], 2).is_err());
        let bad = vec![1e-3, 2e-3, 2e-3, 3e-3, 4e-3, 5e-3, 6e-3];
        assert!(matches!(
            fit_power_sum(&bad, &vec![1.0; 7], 5),
            Err(FitError::NonMonotonePowers(1, 2))
        ));
        let neg = vec![-1e-3, 2e-3, 3e-3, 4e-3, 5e-3, 6e-3, 7e-3];
        assert!(fit_power_sum(&neg, &vec![1.0; 7], 5).is_err());
        assert!(fit_power_sum(&log_grid(1e-3, 4e-2, 12), &vec![1.0; 12], 9).is_err());
    }

    #[test]
    fn single_power_pure_law() {
        let powers = log_grid(1e-3, 40e-3, 12);
        let counts: Vec<f64> = powers.iter().map(|p| 3.0 * p.powi(4)).collect();
        let fit = fit_single_power(&powers, &counts).unwrap();
        assert!((fit.exponent - 4.0).abs() < 1e-6);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!((fit.prefactor - 3.0).abs() / 3.0 < 1e-6);
    }

    #[test]
    fn single_power_two_order_mixture_is_intermediate() {
        // Equal-weight c₂ = c₄ over a grid where both contribute: the
        // exponent lands strictly inside (2, 4), away from integers.
        let intensities = log_grid(0.3, 3.0, 20);
        let counts: Vec<f64> = intensities
            .iter()
            .map(|x| x.powi(2) + x.powi(4))
            .collect();
        let fit = fit_single_power(&intensities, &counts).unwrap();
        assert!(fit.exponent > 2.05 && fit.exponent < 3.95, "{}", fit.exponent);
        assert!((fit.exponent - fit.exponent.round()).abs() > 1e-3);
    }

    #[test]
    fn single_power_frozen_mixture_oracle() {
        // c₃ = 1, c₄ = 10 over 16 log-spaced normalized intensities in
        // [0.1, 1]; the OLS exponent was fixed independently at 3.746431.
        let intensities = log_grid(0.1, 1.0, 16);
        let counts: Vec<f64> = intensities
            .iter()
            .map(|x| x.powi(3) + 10.0 * x.powi(4))
            .collect();
        let fit = fit_single_power(&intensities, &counts).unwrap();
        assert!(
            (fit.exponent - 3.746431).abs() < 1e-5,
            "got {}",
            fit.exponent
        );
    }

    #[test]
    fn single_power_rejects_zero_counts() {
        let powers = vec![1.0, 2.0, 3.0];
        assert!(matches!(
            fit_single_power(&powers, &[1.0, 0.0, 3.0]),
            Err(FitError::NonPositiveCount { index: 1, .. })
        ));
        assert!(fit_single_power(&powers[..2], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn fn_radius_round_trip() {
        // Synthetic DC Fowler-Nordheim data at r = 40 nm, φ = 4.5 eV, k = 5.
        let c0 = default_fn_c0();
        let (phi, k, r): (f64, f64, f64) = (4.5, 5.0, 40e-9);
        let voltages: Vec<f64> = (0..9).map(|i| -50.0 - 50.0 * i as f64).collect();
        let counts: Vec<f64> = voltages
            .iter()
            .map(|v| 1e-3 * v * v * (-c0 * phi.powf(1.5) * k * r / v.abs()).exp())
            .collect();
        let fit = fit_fn_radius(&voltages, &counts, phi, k, c0).unwrap();
        assert!((fit.radius - r).abs() / r < 1e-3, "radius {}", fit.radius);
        assert!(fit.slope < 0.0);
        // Count rescaling moves only the intercept.
        let scaled: Vec<f64> = counts.iter().map(|c| 7.0 * c).collect();
        let fit2 = fit_fn_radius(&voltages, &scaled, phi, k, c0).unwrap();
        assert!((fit2.radius - fit.radius).abs() / fit.radius < 1e-12);
        assert!((fit2.slope - fit.slope).abs() / fit.slope.abs() < 1e-12);
        assert!((fit2.intercept - fit.intercept - 7f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn fn_radius_input_validation() {
        let c0 = default_fn_c0();
        assert!(matches!(
            fit_fn_radius(&[-50.0, -100.0], &[1.0, 2.0], 4.5, 5.0, c0),
            Err(FitError::InsufficientPoints { needed: 3, got: 2 })
        ));
        assert!(matches!(
            fit_fn_radius(&[-50.0, 100.0, -150.0], &[1.0, 2.0, 3.0], 4.5, 5.0, c0),
            Err(FitError::MixedVoltageSign(1))
        ));
        assert!(fit_fn_radius(&[-50.0, 0.0, -150.0], &[1.0, 2.0, 3.0], 4.5, 5.0, c0).is_err());
        // Counts growing with 1/|V| produce a positive slope → not FN.
        let err = fit_fn_radius(
            &[-50.0, -100.0, -150.0],
            &[1e6, 1e3, 1.0],
            4.5,
            5.0,
            c0,
        )
        .unwrap_err();
        assert!(matches!(err, FitError::NotFowlerNordheim(_)));
    }

    #[test]
    fn report_serialization_is_flat() {
        let fit = SinglePowerFit {
            exponent: 3.8,
            prefactor: 2.0,
            r_squared: 0.999,
        };
        let json = FitReport::from_single_power(&fit).to_json();
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        let obj = value.as_object().unwrap();
        for key in [
            "model",
            "coefficients",
            "exponent",
            "radius_m",
            "residual",
            "r_squared",
            "warnings",
        ] {
            assert!(obj.contains_key(key), "missing {key}");
        }
        assert_eq!(obj["model"], "single-power");
        assert!(obj["coefficients"].is_null());
    }
}
