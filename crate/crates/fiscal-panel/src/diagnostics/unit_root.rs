//! Cross-sectionally augmented panel unit-root tests.
//!
//! The unit-level regression is `dy_t = a + b y_{t-1} + c ybar_{t-1} +
//! d dybar_t + e_t`, with the cross-sectional average `ybar` proxying the
//! common factor; the statistic is the t-ratio of `b`. The panel statistic
//! averages the unit t-ratios. P-values come from simulated null
//! quantiles embedded in [`super::cips_cv`]; the trend variant is exposed
//! statistic-only.

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::cips_cv;
use super::TestResult;
use crate::error::{Error, Result};
use crate::ols;
use crate::panel::PanelDataset;

/// Deterministic-term configuration for the unit-level regression.
#[derive(Debug, Clone, Copy, Default)]
pub struct CadfConfig {
    /// Include a linear trend. No null quantiles are tabulated for this
    /// case, so panel p-values become undefined.
    pub include_trend: bool,
}

/// t-statistic of the lagged level in the cross-sectionally augmented
/// Dickey–Fuller regression.
pub fn cadf_stat(y: &[f64], ybar: &[f64], config: &CadfConfig) -> Result<f64> {
    let t = y.len();
    assert_eq!(t, ybar.len(), "series and averages must share a length");
    if t < 8 {
        return Err(Error::SeriesTooShort { len: t, min: 8 });
    }
    let mean = y.iter().sum::<f64>() / t as f64;
    if y.iter().all(|v| (v - mean).abs() < 1e-300) {
        return Err(Error::ZeroVarianceUnit("series".to_string()));
    }

    let rows = t - 1;
    let ncols = if config.include_trend { 5 } else { 4 };
    let mut x = DMatrix::zeros(rows, ncols);
    let mut dy = DVector::zeros(rows);
    for r in 0..rows {
        let tt = r + 1;
        dy[r] = y[tt] - y[tt - 1];
        x[(r, 0)] = 1.0;
        x[(r, 1)] = y[tt - 1];
        x[(r, 2)] = ybar[tt - 1];
        x[(r, 3)] = ybar[tt] - ybar[tt - 1];
        if config.include_trend {
            x[(r, 4)] = tt as f64;
        }
    }
    let mut names = vec![
        "const".to_string(),
        "level_lag1".to_string(),
        "avg_lag1".to_string(),
        "avg_diff".to_string(),
    ];
    if config.include_trend {
        names.push("trend".to_string());
    }
    let fit = ols::ols(&dy, &x, &names).map_err(|e| match e {
        Error::RankDeficient { columns } => Error::CollinearRegressors(columns.join(", ")),
        other => other,
    })?;
    Ok(fit.coefficients[1] / fit.standard_errors[1])
}

/// Panel unit-root test: the mean of unit-level [`cadf_stat`] values.
///
/// `detail` carries every unit statistic plus a Fisher-type combination of
/// the unit p-values (`fisher_statistic`, `fisher_p_value`), evaluated
/// against chi-squared with 2N degrees of freedom.
pub fn cips_test(panel: &PanelDataset, var: &str, config: &CadfConfig) -> Result<TestResult> {
    let n = panel.n_units();
    if n < 2 {
        return Err(Error::TooFewUnits { n, min: 2 });
    }
    let ybar = panel.cross_sectional_average(var, &panel.full_group())?;
    let mut stats = Vec::with_capacity(n);
    for (i, unit) in panel.unit_ids().iter().enumerate() {
        let y = panel.unit_series(var, i)?;
        let stat = cadf_stat(&y, &ybar, config).map_err(|e| match e {
            Error::ZeroVarianceUnit(_) => Error::ZeroVarianceUnit(unit.clone()),
            other => other,
        })?;
        stats.push(stat);
    }
    let statistic = stats.iter().sum::<f64>() / n as f64;

    let t = panel.n_years();
    let p_value = if config.include_trend {
        None
    } else {
        Some(cips_cv::cips_p_value(statistic, n, t))
    };

    let mut result = TestResult::new(statistic, p_value);
    for (unit, stat) in panel.unit_ids().iter().zip(&stats) {
        result = result.with(&format!("cadf_{unit}"), *stat);
    }
    if !config.include_trend {
        let fisher: f64 = stats
            .iter()
            .map(|s| -2.0 * cips_cv::cadf_p_value(*s, n, t).ln())
            .sum();
        let chi = ChiSquared::new(2.0 * n as f64).unwrap();
        result = result
            .with("fisher_statistic", fisher)
            .with("fisher_p_value", (1.0 - chi.cdf(fisher)).clamp(0.0, 1.0));
    }
    Ok(result)
}
