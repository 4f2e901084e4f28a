//! HAC-robust slope homogeneity test.
//!
//! Compares unit-level slope vectors against the pooled within estimator
//! through a standardized dispersion statistic that is asymptotically
//! standard normal under slope homogeneity. Unit-level long-run moment
//! matrices use a Bartlett-kernel estimator, making the dispersion robust
//! to serial correlation in the errors.
//!
//! The compared slope vector covers the spec's lagged dependent variable
//! and observed regressors; cross-sectional averages and the break dummy
//! are not part of the homogeneity hypothesis and stay out of the design.

use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ContinuousCDF, Normal};

use super::TestResult;
use crate::dcce::RegressionSpec;
use crate::error::{Error, Result};
use crate::ols;
use crate::panel::PanelDataset;

/// Bartlett bandwidth `floor(4 (T/100)^{2/9})` for a regression sample of
/// length `t`.
fn bartlett_bandwidth(t: usize) -> usize {
    (4.0 * (t as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize
}

struct UnitData {
    slopes: DVector<f64>,
    /// Demeaned slope regressors, rows = time.
    x_demeaned: DMatrix<f64>,
    residuals: DVector<f64>,
}

/// Dispersion test of slope homogeneity across units.
///
/// `detail` reports the average unit dispersion, the slope count, and the
/// Bartlett bandwidth. Two-sided normal p-value.
pub fn slope_homogeneity_test(panel: &PanelDataset, spec: &RegressionSpec) -> Result<TestResult> {
    spec.validate()?;
    let indices = spec.estimation_indices(panel)?;
    let n = indices.len();
    if n < 2 {
        return Err(Error::TooFewUnits { n, min: 2 });
    }

    let depth = spec
        .regressors
        .iter()
        .map(|r| r.lag)
        .max()
        .unwrap_or(0)
        .max(spec.lag_dependent);
    let t_total = panel.n_years();
    if t_total <= depth {
        return Err(Error::InsufficientObservations {
            detail: format!("panel length {t_total} does not cover lag depth {depth}"),
        });
    }
    let rows = t_total - depth;
    let k = spec.lag_dependent + spec.regressors.len();
    if k == 0 {
        return Err(Error::InvalidConfig(
            "slope homogeneity needs at least one slope".to_string(),
        ));
    }
    let cols = k + 1;
    if rows < cols + 2 {
        return Err(Error::InsufficientDegreesOfFreedom { rows, cols });
    }

    let dep = panel.variable(&spec.dependent)?;
    let mut names = vec!["const".to_string()];
    for l in 1..=spec.lag_dependent {
        names.push(format!("{}_lag{l}", spec.dependent));
    }
    for r in &spec.regressors {
        names.push(if r.lag == 0 {
            r.var.clone()
        } else {
            format!("{}_lag{}", r.var, r.lag)
        });
    }

    let mut units = Vec::with_capacity(n);
    for &idx in &indices {
        let mut x = DMatrix::zeros(rows, cols);
        let mut y = DVector::zeros(rows);
        for (row, tt) in (depth..t_total).enumerate() {
            y[row] = dep[(idx, tt)];
            x[(row, 0)] = 1.0;
            let mut c = 1;
            for l in 1..=spec.lag_dependent {
                x[(row, c)] = dep[(idx, tt - l)];
                c += 1;
            }
            for r in &spec.regressors {
                x[(row, c)] = panel.variable(&r.var)?[(idx, tt - r.lag)];
                c += 1;
            }
        }
        let fit = ols::ols(&y, &x, &names).map_err(|e| match e {
            Error::RankDeficient { columns } => Error::CollinearRegressors(columns.join(", ")),
            other => other,
        })?;
        let scale = y.dot(&y).max(1.0);
        if fit.rss <= 1e-12 * scale {
            return Err(Error::DegenerateVariance(panel.unit_ids()[idx].clone()));
        }
        // Demean the slope columns; the intercept is absorbed.
        let mut x_demeaned = DMatrix::zeros(rows, k);
        for j in 0..k {
            let col = x.column(j + 1);
            let mean = col.sum() / rows as f64;
            for r in 0..rows {
                x_demeaned[(r, j)] = col[r] - mean;
            }
        }
        units.push(UnitData {
            slopes: DVector::from_iterator(k, fit.coefficients[1..].iter().copied()),
            x_demeaned,
            residuals: fit.residuals,
        });
    }

    // Pooled within estimator over the stacked demeaned data.
    let mut xtx = DMatrix::zeros(k, k);
    let mut xty = DVector::zeros(k);
    for (&idx, u) in indices.iter().zip(&units) {
        let _ = idx;
        let y_demeaned = demeaned_response(panel, spec, idx, depth)?;
        xtx += u.x_demeaned.transpose() * &u.x_demeaned;
        xty += u.x_demeaned.transpose() * y_demeaned;
    }
    let pooled = xtx
        .clone()
        .lu()
        .solve(&xty)
        .ok_or_else(|| Error::CollinearRegressors("pooled within design is singular".into()))?;

    // Dispersion of unit slopes around the pooled slope, weighted by the
    // inverse HAC asymptotic covariance of each unit estimate.
    let bandwidth = bartlett_bandwidth(rows);
    let mut s_total = 0.0;
    for (&idx, u) in indices.iter().zip(&units) {
        let q = u.x_demeaned.transpose() * &u.x_demeaned / rows as f64;
        let omega = bartlett_lrv(&u.x_demeaned, &u.residuals, bandwidth);
        let omega_inv = omega.clone().try_inverse().ok_or_else(|| {
            Error::DegenerateVariance(panel.unit_ids()[idx].clone())
        })?;
        let d = &u.slopes - &pooled;
        let qd = &q * &d;
        let s_i = rows as f64 * (qd.transpose() * omega_inv * qd)[(0, 0)];
        s_total += s_i;
    }

    let n_f = n as f64;
    let k_f = k as f64;
    let statistic = n_f.sqrt() * (s_total / n_f - k_f) / (2.0 * k_f).sqrt();
    let normal = Normal::new(0.0, 1.0).unwrap();
    let p = 2.0 * (1.0 - normal.cdf(statistic.abs()));
    Ok(TestResult::new(statistic, Some(p.clamp(0.0, 1.0)))
        .with("mean_dispersion", s_total / n_f)
        .with("slopes", k_f)
        .with("bandwidth", bandwidth as f64))
}

fn demeaned_response(
    panel: &PanelDataset,
    spec: &RegressionSpec,
    idx: usize,
    depth: usize,
) -> Result<DVector<f64>> {
    let dep = panel.variable(&spec.dependent)?;
    let t_total = panel.n_years();
    let rows = t_total - depth;
    let mut y = DVector::zeros(rows);
    for (row, tt) in (depth..t_total).enumerate() {
        y[row] = dep[(idx, tt)];
    }
    let mean = y.sum() / rows as f64;
    for v in y.iter_mut() {
        *v -= mean;
    }
    Ok(y)
}

/// Bartlett-kernel long-run covariance of the moment series `x_t e_t`.
fn bartlett_lrv(x: &DMatrix<f64>, residuals: &DVector<f64>, bandwidth: usize) -> DMatrix<f64> {
    let t = x.nrows();
    let k = x.ncols();
    let mut scores = DMatrix::zeros(t, k);
    for r in 0..t {
        for c in 0..k {
            scores[(r, c)] = x[(r, c)] * residuals[r];
        }
    }
    let mut omega = scores.transpose() * &scores / t as f64;
    for lag in 1..=bandwidth.min(t.saturating_sub(1)) {
        let w = 1.0 - lag as f64 / (bandwidth as f64 + 1.0);
        let mut gamma = DMatrix::zeros(k, k);
        for r in lag..t {
            for a in 0..k {
                for b in 0..k {
                    gamma[(a, b)] += scores[(r, a)] * scores[(r - lag, b)];
                }
            }
        }
        gamma /= t as f64;
        omega += (&gamma + gamma.transpose()) * w;
    }
    omega
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dcce::Regressor;
    use crate::synth::rep_rng;
    use rand::prelude::*;
    use rand_distr::StandardNormal;
    use std::collections::BTreeMap;

    fn static_spec() -> RegressionSpec {
        RegressionSpec {
            dependent: "y".to_string(),
            lag_dependent: 0,
            regressors: vec![Regressor::contemporaneous("x")],
            break_year: None,
            csa_lags: crate::dcce::CsaLags::Fixed(0),
            group: None,
            csa_scope: crate::dcce::CsaScope::EstimationGroup,
        }
    }

    /// Panel with per-unit slope `slopes[i]`: `y = 1 + slope x + noise_sd e`.
    fn slope_panel(
        slopes: &[f64],
        t: usize,
        noise_sd: f64,
        rng: &mut impl Rng,
    ) -> PanelDataset {
        let n = slopes.len();
        let mut x = nalgebra::DMatrix::zeros(n, t);
        let mut y = nalgebra::DMatrix::zeros(n, t);
        for i in 0..n {
            let mut xv = 0.0;
            for j in 0..t {
                xv = 0.5 * xv + rng.sample::<f64, _>(StandardNormal);
                x[(i, j)] = xv;
                y[(i, j)] =
                    1.0 + slopes[i] * xv + noise_sd * rng.sample::<f64, _>(StandardNormal);
            }
        }
        let mut vars = BTreeMap::new();
        vars.insert("x".to_string(), x);
        vars.insert("y".to_string(), y);
        PanelDataset::from_matrices(
            (1..=n).map(|i| format!("U{i:02}")).collect(),
            (0..t as i32).map(|j| 1990 + j).collect(),
            vars,
        )
        .unwrap()
    }

    #[test]
    fn homogeneous_slopes_hold_size() {
        let reps = 300;
        let mut rejections = 0;
        for rep in 0..reps {
            let mut rng = rep_rng(700, rep);
            let panel = slope_panel(&vec![0.5; 30], 100, 1.0, &mut rng);
            let res = slope_homogeneity_test(&panel, &static_spec()).unwrap();
            if res.rejects_at(0.05) {
                rejections += 1;
            }
        }
        let rate = rejections as f64 / reps as f64;
        assert!(
            (0.02..=0.09).contains(&rate),
            "size {rate} outside [0.02, 0.09]"
        );
    }

    #[test]
    fn heterogeneous_slopes_are_detected() {
        let reps = 300;
        let mut rejections = 0;
        for rep in 0..reps {
            let mut rng = rep_rng(701, rep);
            let slopes: Vec<f64> = (0..30).map(|_| rng.gen_range(0.1..0.9)).collect();
            let panel = slope_panel(&slopes, 100, 1.0, &mut rng);
            let res = slope_homogeneity_test(&panel, &static_spec()).unwrap();
            if res.rejects_at(0.05) {
                rejections += 1;
            }
        }
        assert!(
            rejections as f64 >= 0.95 * reps as f64,
            "power {rejections}/{reps} below 95%"
        );
    }

    #[test]
    fn zero_residual_variance_is_degenerate() {
        let mut rng = rep_rng(702, 0);
        // Two units with exact fits, the rest noisy.
        let mut panel = slope_panel(&vec![0.5; 6], 40, 1.0, &mut rng);
        let x = panel.variable("x").unwrap().clone();
        let mut y = panel.variable("y").unwrap().clone();
        for i in 0..2 {
            for j in 0..40 {
                y[(i, j)] = 1.0 + 0.5 * x[(i, j)];
            }
        }
        panel = panel.with_variable("y", y).unwrap();
        assert!(matches!(
            slope_homogeneity_test(&panel, &static_spec()),
            Err(Error::DegenerateVariance(_))
        ));
    }

    #[test]
    fn insufficient_sample_is_rejected() {
        let mut rng = rep_rng(703, 0);
        let panel = slope_panel(&vec![0.5; 4], 4, 1.0, &mut rng);
        assert!(matches!(
            slope_homogeneity_test(&panel, &static_spec()),
            Err(Error::InsufficientDegreesOfFreedom { .. })
        ));
    }

    #[test]
    fn collinear_regressors_detected() {
        let mut rng = rep_rng(704, 0);
        let panel = slope_panel(&vec![0.5; 5], 30, 1.0, &mut rng);
        let dup = panel.variable("x").unwrap().clone();
        let panel = panel.with_variable("x2", dup).unwrap();
        let spec = RegressionSpec {
            regressors: vec![
                Regressor::contemporaneous("x"),
                Regressor::contemporaneous("x2"),
            ],
            ..static_spec()
        };
        assert!(matches!(
            slope_homogeneity_test(&panel, &spec),
            Err(Error::CollinearRegressors(_))
        ));
    }

    #[test]
    fn bandwidth_rule() {
        assert_eq!(bartlett_bandwidth(100), 4);
        assert_eq!(bartlett_bandwidth(33), 3);
        assert_eq!(bartlett_bandwidth(400), 5);
    }
}
