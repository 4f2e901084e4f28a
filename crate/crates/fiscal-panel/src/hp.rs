//! Hodrick–Prescott trend extraction and percent-gap construction.
//!
//! The trend solves the penalized least-squares first-order conditions
//! `(I + lambda K'K) tau = y`, where `K` is the (T-2)×T second-difference
//! operator. `I + lambda K'K` is symmetric positive definite and
//! pentadiagonal, so the solve is a banded Cholesky factorization in O(T)
//! per series, followed by one iterative-refinement pass to keep the
//! residual at machine level even for very large smoothing parameters.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::panel::PanelDataset;

/// Smoothing configuration for the filter.
#[derive(Debug, Clone, Copy)]
pub struct FilterConfig {
    /// Nonnegative smoothing parameter; 100 is the standard annual-data
    /// choice.
    pub lambda: f64,
    /// Filter `ln(series)` instead of the levels. Gaps are then log
    /// deviations times 100; the trend is reported back on levels.
    pub log_input: bool,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            lambda: 100.0,
            log_input: false,
        }
    }
}

impl FilterConfig {
    pub fn with_lambda(lambda: f64) -> Self {
        FilterConfig {
            lambda,
            ..Default::default()
        }
    }
}

/// Trend/cycle decomposition of one series.
///
/// `trend + cycle == input` by construction. `gap_percent` is the percent
/// deviation from trend: `100 * cycle / trend` on levels, `100 * (ln y -
/// ln trend)` when the filter ran on logs. Cells where the trend is zero
/// carry `NaN` as the undefined-gap marker.
#[derive(Debug, Clone)]
pub struct TrendCycle {
    pub trend: Vec<f64>,
    pub cycle: Vec<f64>,
    pub gap_percent: Vec<f64>,
}

/// Decompose `series` into trend and cycle.
pub fn hp_trend(series: &[f64], config: &FilterConfig) -> Result<TrendCycle> {
    let t = series.len();
    if t < 4 {
        return Err(Error::SeriesTooShort { len: t, min: 4 });
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput { unit: None });
    }
    if config.lambda < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "smoothing parameter must be nonnegative, got {}",
            config.lambda
        )));
    }

    if config.log_input {
        if series.iter().any(|v| *v <= 0.0) {
            return Err(Error::NonPositiveLog { unit: None });
        }
        let logs: Vec<f64> = series.iter().map(|v| v.ln()).collect();
        let tau_log = solve_hp_system(&logs, config.lambda);
        let trend: Vec<f64> = tau_log.iter().map(|v| v.exp()).collect();
        let cycle: Vec<f64> = series
            .iter()
            .zip(&trend)
            .map(|(y, tr)| y - tr)
            .collect();
        let gap_percent: Vec<f64> = logs
            .iter()
            .zip(&tau_log)
            .map(|(ly, lt)| 100.0 * (ly - lt))
            .collect();
        Ok(TrendCycle {
            trend,
            cycle,
            gap_percent,
        })
    } else {
        let trend = solve_hp_system(series, config.lambda);
        let cycle: Vec<f64> = series
            .iter()
            .zip(&trend)
            .map(|(y, tr)| y - tr)
            .collect();
        let gap_percent: Vec<f64> = cycle
            .iter()
            .zip(&trend)
            .map(|(c, tr)| {
                if *tr == 0.0 {
                    f64::NAN
                } else {
                    100.0 * c / tr
                }
            })
            .collect();
        Ok(TrendCycle {
            trend,
            cycle,
            gap_percent,
        })
    }
}

/// Filter every unit of `panel[var]` independently and return a derived
/// panel carrying the percent gaps as `<var>_gap`.
pub fn detrend_panel(
    panel: &PanelDataset,
    var: &str,
    config: &FilterConfig,
) -> Result<PanelDataset> {
    let m = panel.variable(var)?;
    let mut gaps = DMatrix::zeros(panel.n_units(), panel.n_years());
    for (i, unit) in panel.unit_ids().iter().enumerate() {
        let series: Vec<f64> = m.row(i).iter().copied().collect();
        let tc = hp_trend(&series, config).map_err(|e| e.with_unit(unit))?;
        for (j, g) in tc.gap_percent.iter().enumerate() {
            gaps[(i, j)] = *g;
        }
    }
    panel.with_variable(&format!("{var}_gap"), gaps)
}

/// Solve `(I + lambda K'K) tau = y` by banded Cholesky with one
/// refinement pass.
fn solve_hp_system(y: &[f64], lambda: f64) -> Vec<f64> {
    let (d0, d1, d2) = hp_matrix_bands(y.len(), lambda);
    let chol = BandedCholesky::factor(&d0, &d1, &d2);
    let mut tau = chol.solve(y);
    // One step of iterative refinement; for moderate lambda this is a
    // no-op at machine precision, for extreme lambda it keeps the
    // residual small relative to the data.
    let r = band_residual(&d0, &d1, &d2, &tau, y);
    let delta = chol.solve(&r);
    for (t, d) in tau.iter_mut().zip(&delta) {
        *t += d;
    }
    tau
}

/// Diagonals of `I + lambda K'K` (main, first, second), for T >= 4.
fn hp_matrix_bands(t: usize, lambda: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut d0 = vec![0.0; t];
    let mut d1 = vec![0.0; t - 1];
    let mut d2 = vec![0.0; t - 2];
    for i in 0..t {
        // Row i of K'K touches second-difference rows i-2, i-1, i.
        let mut diag = 0.0;
        if i + 2 < t {
            diag += 1.0;
        }
        if i >= 1 && i + 1 < t {
            diag += 4.0;
        }
        if i >= 2 {
            diag += 1.0;
        }
        d0[i] = 1.0 + lambda * diag;
    }
    for i in 0..t - 1 {
        let mut s = 0.0;
        if i + 2 < t {
            s += -2.0;
        }
        if i >= 1 {
            s += -2.0;
        }
        d1[i] = lambda * s;
    }
    for i in 0..t - 2 {
        d2[i] = lambda;
    }
    (d0, d1, d2)
}

/// `y - A tau` for the banded symmetric matrix with the given diagonals.
fn band_residual(d0: &[f64], d1: &[f64], d2: &[f64], tau: &[f64], y: &[f64]) -> Vec<f64> {
    let t = y.len();
    let mut r = Vec::with_capacity(t);
    for i in 0..t {
        let mut ax = d0[i] * tau[i];
        if i >= 1 {
            ax += d1[i - 1] * tau[i - 1];
        }
        if i + 1 < t {
            ax += d1[i] * tau[i + 1];
        }
        if i >= 2 {
            ax += d2[i - 2] * tau[i - 2];
        }
        if i + 2 < t {
            ax += d2[i] * tau[i + 2];
        }
        r.push(y[i] - ax);
    }
    r
}

/// Cholesky factor of a symmetric positive definite pentadiagonal matrix,
/// stored as three diagonals of L.
struct BandedCholesky {
    l0: Vec<f64>,
    l1: Vec<f64>,
    l2: Vec<f64>,
}

impl BandedCholesky {
    fn factor(d0: &[f64], d1: &[f64], d2: &[f64]) -> Self {
        let n = d0.len();
        let mut l0 = vec![0.0; n];
        let mut l1 = vec![0.0; n.saturating_sub(1)];
        let mut l2 = vec![0.0; n.saturating_sub(2)];
        for i in 0..n {
            let mut s = d0[i];
            if i >= 1 {
                s -= l1[i - 1] * l1[i - 1];
            }
            if i >= 2 {
                s -= l2[i - 2] * l2[i - 2];
            }
            l0[i] = s.sqrt();
            if i + 1 < n {
                let mut s = d1[i];
                if i >= 1 {
                    s -= l1[i - 1] * l2[i - 1];
                }
                l1[i] = s / l0[i];
            }
            if i + 2 < n {
                l2[i] = d2[i] / l0[i];
            }
        }
        BandedCholesky { l0, l1, l2 }
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        // L z = rhs
        let mut z = vec![0.0; n];
        for i in 0..n {
            let mut s = rhs[i];
            if i >= 1 {
                s -= self.l1[i - 1] * z[i - 1];
            }
            if i >= 2 {
                s -= self.l2[i - 2] * z[i - 2];
            }
            z[i] = s / self.l0[i];
        }
        // L' x = z
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = z[i];
            if i + 1 < n {
                s -= self.l1[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= self.l2[i] * x[i + 2];
            }
            x[i] = s / self.l0[i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    /// Dense direct-solve oracle: build `I + lambda K'K` explicitly and
    /// solve with a full LU factorization.
    fn dense_hp_solve(y: &[f64], lambda: f64) -> Vec<f64> {
        let t = y.len();
        let mut k = DMatrix::zeros(t - 2, t);
        for r in 0..t - 2 {
            k[(r, r)] = 1.0;
            k[(r, r + 1)] = -2.0;
            k[(r, r + 2)] = 1.0;
        }
        let a = DMatrix::identity(t, t) + k.transpose() * k * lambda;
        let rhs = nalgebra::DVector::from_column_slice(y);
        let sol = a.lu().solve(&rhs).expect("dense HP system is SPD");
        sol.iter().copied().collect()
    }

    fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn constant_series_is_its_own_trend() {
        let y = vec![5.0; 5];
        let tc = hp_trend(&y, &FilterConfig::with_lambda(100.0)).unwrap();
        assert!(max_abs_diff(&tc.trend, &y) < 1e-10);
        assert!(tc.cycle.iter().all(|c| c.abs() < 1e-10));
    }

    #[test]
    fn linear_series_is_its_own_trend() {
        let y = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let tc = hp_trend(&y, &FilterConfig::with_lambda(100.0)).unwrap();
        assert!(max_abs_diff(&tc.trend, &y) < 1e-10);
        assert!(tc.cycle.iter().all(|c| c.abs() < 1e-10));
    }

    #[test]
    fn matches_dense_oracle_on_small_series() {
        let y = vec![1.0, 2.0, 4.0, 2.0, 1.0];
        let tc = hp_trend(&y, &FilterConfig::with_lambda(100.0)).unwrap();
        let oracle = dense_hp_solve(&y, 100.0);
        assert!(max_abs_diff(&tc.trend, &oracle) < 1e-10);
    }

    #[test]
    fn matches_dense_oracle_on_random_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let y: Vec<f64> = (0..33).map(|_| rng.gen_range(-10.0..10.0)).collect();
            let tc = hp_trend(&y, &FilterConfig::with_lambda(100.0)).unwrap();
            let oracle = dense_hp_solve(&y, 100.0);
            assert!(max_abs_diff(&tc.trend, &oracle) < 1e-10);

            // System residual stays at machine level relative to the data.
            let norm_y = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let (d0, d1, d2) = hp_matrix_bands(33, 100.0);
            let r = band_residual(&d0, &d1, &d2, &tc.trend, &y);
            let max_r = r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            assert!(max_r <= 1e-10 * norm_y.max(1.0));
        }
    }

    #[test]
    fn cycle_orthogonal_to_constant_and_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let y: Vec<f64> = (0..40)
            .map(|t| 0.2 * t as f64 + rng.gen_range(-3.0..3.0))
            .collect();
        let tc = hp_trend(&y, &FilterConfig::with_lambda(100.0)).unwrap();
        let s0: f64 = tc.cycle.iter().sum();
        let s1: f64 = tc.cycle.iter().enumerate().map(|(t, c)| t as f64 * c).sum();
        assert!(s0.abs() < 1e-8, "sum of cycle = {s0}");
        assert!(s1.abs() < 1e-8, "time-weighted sum of cycle = {s1}");
    }

    #[test]
    fn lambda_zero_returns_input() {
        let y = vec![3.0, -1.0, 2.5, 0.5, 9.0];
        let tc = hp_trend(&y, &FilterConfig::with_lambda(0.0)).unwrap();
        assert_eq!(tc.trend, y);
        assert!(tc.cycle.iter().all(|c| *c == 0.0));
    }

    #[test]
    fn huge_lambda_approaches_least_squares_line() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let y: Vec<f64> = (0..33)
            .map(|t| 1.0 + 0.3 * t as f64 + rng.gen_range(-2.0..2.0))
            .collect();
        let tc = hp_trend(&y, &FilterConfig::with_lambda(1e12)).unwrap();

        // Ordinary least squares line through (t, y_t).
        let n = y.len() as f64;
        let tbar = (n - 1.0) / 2.0;
        let ybar = y.iter().sum::<f64>() / n;
        let sxy: f64 = y
            .iter()
            .enumerate()
            .map(|(t, v)| (t as f64 - tbar) * (v - ybar))
            .sum();
        let sxx: f64 = (0..y.len())
            .map(|t| (t as f64 - tbar).powi(2))
            .sum();
        let slope = sxy / sxx;
        let line: Vec<f64> = (0..y.len())
            .map(|t| ybar + slope * (t as f64 - tbar))
            .collect();
        assert!(max_abs_diff(&tc.trend, &line) < 1e-4);
    }

    #[test]
    fn filter_is_linear_in_the_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let x: Vec<f64> = (0..25).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let y: Vec<f64> = (0..25).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let (alpha, beta) = (1.7, -0.4);
        let combo: Vec<f64> = x
            .iter()
            .zip(&y)
            .map(|(a, b)| alpha * a + beta * b)
            .collect();
        let cfg = FilterConfig::with_lambda(100.0);
        let tx = hp_trend(&x, &cfg).unwrap().trend;
        let ty = hp_trend(&y, &cfg).unwrap().trend;
        let tc = hp_trend(&combo, &cfg).unwrap().trend;
        for i in 0..x.len() {
            assert!((tc[i] - (alpha * tx[i] + beta * ty[i])).abs() < 1e-8);
        }
    }

    #[test]
    fn short_series_rejected() {
        assert!(matches!(
            hp_trend(&[1.0, 2.0, 3.0], &FilterConfig::default()),
            Err(Error::SeriesTooShort { len: 3, min: 4 })
        ));
    }

    #[test]
    fn non_finite_rejected() {
        assert!(matches!(
            hp_trend(&[1.0, f64::NAN, 3.0, 4.0], &FilterConfig::default()),
            Err(Error::NonFiniteInput { .. })
        ));
    }

    #[test]
    fn log_input_requires_positive_values() {
        let err = hp_trend(&[1.0, -2.0, 3.0, 4.0], &FilterConfig {
            lambda: 100.0,
            log_input: true,
        })
        .unwrap_err();
        assert!(matches!(err, Error::NonPositiveLog { .. }));
    }

    #[test]
    fn zero_trend_cell_marks_gap_undefined() {
        // Odd series around zero keeps the trend crossing zero.
        let y = vec![-2.0, -1.0, 0.0, 1.0, 2.0];
        let tc = hp_trend(&y, &FilterConfig::with_lambda(100.0)).unwrap();
        // Trend of an antisymmetric series is antisymmetric: middle is 0.
        assert!(tc.trend[2].abs() < 1e-12);
        if tc.trend[2] == 0.0 {
            assert!(tc.gap_percent[2].is_nan());
        }
    }

    #[test]
    fn detrend_panel_linear_units_have_zero_gap() {
        let mut obs = std::collections::BTreeMap::new();
        let mut cells = std::collections::BTreeMap::new();
        for (u, base) in [("A", 50.0), ("B", 80.0)] {
            for (j, year) in (2000..2010).enumerate() {
                cells.insert((u.to_string(), year), base + 2.0 * j as f64);
            }
        }
        obs.insert("gdp".to_string(), cells);
        let panel = PanelDataset::from_observations(&obs).unwrap();
        let derived = detrend_panel(&panel, "gdp", &FilterConfig::default()).unwrap();
        let gaps = derived.variable("gdp_gap").unwrap();
        assert!(gaps.iter().all(|g| g.abs() < 1e-8));
    }

    #[test]
    fn detrend_panel_matches_per_unit_oracle() {
        let panel = crate::synth::trending_level_panel(52, 33, 17, "rgdp");
        let cfg = FilterConfig::default();
        let derived = detrend_panel(&panel, "rgdp", &cfg).unwrap();
        let gaps = derived.variable("rgdp_gap").unwrap();
        for i in 0..panel.n_units() {
            let series = panel.unit_series("rgdp", i).unwrap();
            let tc = hp_trend(&series, &cfg).unwrap();
            for j in 0..panel.n_years() {
                assert!((gaps[(i, j)] - tc.gap_percent[j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn detrend_panel_attaches_unit_to_errors() {
        let mut obs = std::collections::BTreeMap::new();
        let mut cells = std::collections::BTreeMap::new();
        for (j, year) in (2000..2006).enumerate() {
            cells.insert(("A".to_string(), year), 1.0 + j as f64);
            cells.insert(("B".to_string(), year), if j == 3 { -1.0 } else { 1.0 });
        }
        obs.insert("gdp".to_string(), cells);
        let panel = PanelDataset::from_observations(&obs).unwrap();
        let err = detrend_panel(&panel, "gdp", &FilterConfig {
            lambda: 100.0,
            log_input: true,
        })
        .unwrap_err();
        match err {
            Error::NonPositiveLog { unit } => assert_eq!(unit.as_deref(), Some("B")),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
