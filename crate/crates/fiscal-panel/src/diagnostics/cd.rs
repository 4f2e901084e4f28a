//! Cross-sectional dependence tests on pairwise correlations.

use statrs::distribution::{ContinuousCDF, Normal};

use super::TestResult;
use crate::error::{Error, Result};
use crate::panel::PanelDataset;

/// Settings for the power-enhanced dependence test.
#[derive(Debug, Clone, Copy)]
pub struct CdPlusConfig {
    /// Scale `c` of the screening threshold `c * sqrt(ln N / T)`.
    pub threshold_scale: f64,
}

impl Default for CdPlusConfig {
    fn default() -> Self {
        CdPlusConfig {
            threshold_scale: 2.0,
        }
    }
}

/// Per-unit series standardized to zero mean and unit norm, so pairwise
/// correlations are plain dot products.
fn standardized_rows(panel: &PanelDataset, var: &str) -> Result<Vec<Vec<f64>>> {
    let m = panel.variable(var)?;
    let t = panel.n_years();
    let mut rows = Vec::with_capacity(panel.n_units());
    for (i, unit) in panel.unit_ids().iter().enumerate() {
        let mut z: Vec<f64> = m.row(i).iter().copied().collect();
        let mean = z.iter().sum::<f64>() / t as f64;
        for v in z.iter_mut() {
            *v -= mean;
        }
        let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVarianceUnit(unit.clone()));
        }
        for v in z.iter_mut() {
            *v /= norm;
        }
        rows.push(z);
    }
    Ok(rows)
}

fn pairwise_correlations(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let r: f64 = rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum();
            out.push(r);
        }
    }
    out
}

/// Pairwise-correlation dependence test.
///
/// The statistic is `sqrt(2T / (N(N-1))) * sum_{i<j} r_ij`, standard normal
/// under cross-sectional independence; the p-value is two-sided. `detail`
/// reports the mean pairwise correlation.
pub fn cd_test(panel: &PanelDataset, var: &str) -> Result<TestResult> {
    let n = panel.n_units();
    if n < 2 {
        return Err(Error::TooFewUnits { n, min: 2 });
    }
    let t = panel.n_years() as f64;
    let rows = standardized_rows(panel, var)?;
    let corr = pairwise_correlations(&rows);
    let sum: f64 = corr.iter().sum();
    let statistic = (2.0 * t / (n as f64 * (n as f64 - 1.0))).sqrt() * sum;
    let normal = Normal::new(0.0, 1.0).unwrap();
    let p = 2.0 * (1.0 - normal.cdf(statistic.abs()));
    Ok(TestResult::new(statistic, Some(p.clamp(0.0, 1.0)))
        .with("mean_pairwise_correlation", sum / corr.len() as f64))
}

/// Power-enhanced dependence test: a standardized sum of squared pairwise
/// correlations plus a screening component that accumulates `|r_ij|` over
/// pairs exceeding the threshold.
///
/// The squared-correlation sum is centered and scaled with its exact
/// moments under normality, so the base component is standard normal under
/// independence; the screening component vanishes there. One-sided
/// p-value. `detail` reports the screened-pair count and both components.
pub fn cd_plus_test(panel: &PanelDataset, var: &str, config: &CdPlusConfig) -> Result<TestResult> {
    let n = panel.n_units();
    if n < 2 {
        return Err(Error::TooFewUnits { n, min: 2 });
    }
    let t = panel.n_years() as f64;
    let rows = standardized_rows(panel, var)?;
    let corr = pairwise_correlations(&rows);
    let pairs = corr.len() as f64;

    // Exact null moments of T r^2 when r is a correlation of two
    // independent Gaussian samples of length T: r^2 ~ Beta(1/2, (T-2)/2).
    let center = t / (t - 1.0);
    let variance = t * t * (2.0 * t - 4.0) / ((t - 1.0) * (t - 1.0) * (t + 1.0));
    let j1: f64 = corr
        .iter()
        .map(|r| t * r * r - center)
        .sum::<f64>()
        / (pairs * variance).sqrt();

    let delta = config.threshold_scale * ((n as f64).ln() / t).sqrt();
    let mut j0 = 0.0;
    let mut screened = 0usize;
    for r in &corr {
        if r.abs() > delta {
            j0 += r.abs();
            screened += 1;
        }
    }

    let statistic = j0 + j1;
    let normal = Normal::new(0.0, 1.0).unwrap();
    let p = 1.0 - normal.cdf(statistic);
    Ok(TestResult::new(statistic, Some(p.clamp(0.0, 1.0)))
        .with("j0", j0)
        .with("j1", j1)
        .with("screened_pairs", screened as f64)
        .with("threshold", delta))
}
