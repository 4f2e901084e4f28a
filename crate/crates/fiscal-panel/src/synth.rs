//! Seeded synthetic panel generators for simulation studies and examples.
//!
//! Every generator is a pure function of its seed; Monte Carlo experiments
//! derive one independent stream per replication via [`rep_rng`] so results
//! never depend on scheduling.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::panel::PanelDataset;

/// Independent RNG stream for replication `replication` of an experiment
/// keyed by `master_seed`.
pub fn rep_rng(master_seed: u64, replication: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replication);
    rng
}

fn unit_ids(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("C{i:03}")).collect()
}

fn years(t: usize) -> Vec<i32> {
    (0..t as i32).map(|j| 1990 + j).collect()
}

fn panel_from(var: &str, m: DMatrix<f64>) -> PanelDataset {
    let (n, t) = (m.nrows(), m.ncols());
    let mut vars = BTreeMap::new();
    vars.insert(var.to_string(), m);
    PanelDataset::from_matrices(unit_ids(n), years(t), vars).expect("generator shapes are valid")
}

/// N×T panel of iid standard normal draws.
pub fn independent_normal_panel(n: usize, t: usize, seed: u64, var: &str) -> PanelDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = DMatrix::from_fn(n, t, |_, _| rng.sample::<f64, _>(StandardNormal));
    panel_from(var, m)
}

/// One common factor with unit loadings plus idiosyncratic noise:
/// `x_it = f_t + idio_sd * e_it`.
pub fn factor_panel(n: usize, t: usize, seed: u64, var: &str, idio_sd: f64) -> PanelDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let factor: Vec<f64> = (0..t).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let m = DMatrix::from_fn(n, t, |_, j| {
        factor[j] + idio_sd * rng.sample::<f64, _>(StandardNormal)
    });
    panel_from(var, m)
}

/// Independent driftless random walks started at zero.
pub fn random_walk_panel(n: usize, t: usize, seed: u64, var: &str) -> PanelDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = DMatrix::zeros(n, t);
    for i in 0..n {
        let mut level = 0.0;
        for j in 0..t {
            level += rng.sample::<f64, _>(StandardNormal);
            m[(i, j)] = level;
        }
    }
    panel_from(var, m)
}

/// Independent stationary AR(1) processes with unit innovation variance,
/// burned in for 50 periods.
pub fn ar_panel(n: usize, t: usize, coef: f64, seed: u64, var: &str) -> PanelDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = DMatrix::zeros(n, t);
    for i in 0..n {
        let mut x = 0.0;
        for _ in 0..50 {
            x = coef * x + rng.sample::<f64, _>(StandardNormal);
        }
        for j in 0..t {
            x = coef * x + rng.sample::<f64, _>(StandardNormal);
            m[(i, j)] = x;
        }
    }
    panel_from(var, m)
}

/// Positive trending level series (index numbers around 100) with a smooth
/// cyclical component, for exercising trend extraction.
pub fn trending_level_panel(n: usize, t: usize, seed: u64, var: &str) -> PanelDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = DMatrix::zeros(n, t);
    for i in 0..n {
        let base: f64 = rng.gen_range(50.0..150.0);
        let growth: f64 = rng.gen_range(0.01..0.03);
        let mut cycle = 0.0;
        for j in 0..t {
            cycle = 0.7 * cycle + 0.02 * rng.sample::<f64, _>(StandardNormal);
            m[(i, j)] = base * ((growth * j as f64) + cycle).exp();
        }
    }
    panel_from(var, m)
}

/// Data-generating process for the empirical surplus rule: a dynamic panel
/// with one common factor loading on both the dependent variable and the
/// regressors.
///
/// Per unit: `s_t = intercept + phi s_{t-1} + rho b_{t-1} + beta_y yg_t +
/// beta_g gg_t + gamma_i f_t + eps_t`, where `b` is a persistent AR
/// process, the gaps are mildly autocorrelated, and all right-hand
/// variables load on the factor `f`.
#[derive(Debug, Clone)]
pub struct FrfDgp {
    pub n_units: usize,
    pub n_years: usize,
    pub phi: f64,
    pub rho: f64,
    pub beta_y: f64,
    pub beta_g: f64,
    pub intercept: f64,
    pub noise_sd: f64,
}

impl Default for FrfDgp {
    fn default() -> Self {
        FrfDgp {
            n_units: 52,
            n_years: 33,
            phi: 0.358,
            rho: 0.033,
            beta_y: 0.219,
            beta_g: -0.150,
            intercept: 0.5,
            noise_sd: 0.5,
        }
    }
}

impl FrfDgp {
    /// Simulate one panel with variables `pb`, `debt`, `ygap`, `ggap`.
    pub fn simulate(&self, rng: &mut ChaCha8Rng) -> PanelDataset {
        let n = self.n_units;
        let t = self.n_years;
        let burn = 50;
        let total = t + burn;

        // Common factor, AR(0.5).
        let mut factor = vec![0.0; total];
        let mut f = 0.0;
        for item in factor.iter_mut() {
            f = 0.5 * f + rng.sample::<f64, _>(StandardNormal);
            *item = f;
        }

        let mut pb = DMatrix::zeros(n, t);
        let mut debt = DMatrix::zeros(n, t);
        let mut ygap = DMatrix::zeros(n, t);
        let mut ggap = DMatrix::zeros(n, t);

        for i in 0..n {
            let gamma: f64 = rng.gen_range(0.5..1.5);
            let load_b: f64 = rng.gen_range(0.2..1.0);
            let load_y: f64 = rng.gen_range(0.2..1.0);
            let load_g: f64 = rng.gen_range(0.2..1.0);

            let mut b = 60.0;
            let mut yg = 0.0;
            let mut gg = 0.0;
            let mut s = 0.0;
            for k in 0..total {
                let b_lag = b;
                let s_lag = s;
                b = 60.0 * 0.2 + 0.8 * b + load_b * factor[k]
                    + rng.sample::<f64, _>(StandardNormal);
                yg = 0.3 * yg + load_y * factor[k] + rng.sample::<f64, _>(StandardNormal);
                gg = 0.3 * gg + load_g * factor[k] + rng.sample::<f64, _>(StandardNormal);
                s = self.intercept
                    + self.phi * s_lag
                    + self.rho * b_lag
                    + self.beta_y * yg
                    + self.beta_g * gg
                    + gamma * factor[k]
                    + self.noise_sd * rng.sample::<f64, _>(StandardNormal);
                if k >= burn {
                    let j = k - burn;
                    pb[(i, j)] = s;
                    debt[(i, j)] = b;
                    ygap[(i, j)] = yg;
                    ggap[(i, j)] = gg;
                }
            }
        }

        let mut vars = BTreeMap::new();
        vars.insert("pb".to_string(), pb);
        vars.insert("debt".to_string(), debt);
        vars.insert("ygap".to_string(), ygap);
        vars.insert("ggap".to_string(), ggap);
        PanelDataset::from_matrices(unit_ids(n), years(t), vars).expect("valid shapes")
    }
}

/// Full synthetic dataset shaped like the production input files: 52
/// countries, 1990–2022, with primary balance, debt, and current account
/// ratios in percent of GDP plus real GDP and real government spending
/// index levels.
pub fn synthetic_dataset(seed: u64) -> PanelDataset {
    let n = 52;
    let t = 33;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Global business-cycle factor shared across countries.
    let mut factor = vec![0.0; t];
    let mut f = 0.0;
    for item in factor.iter_mut() {
        f = 0.6 * f + rng.sample::<f64, _>(StandardNormal);
        *item = f;
    }

    let mut pb = DMatrix::zeros(n, t);
    let mut debt = DMatrix::zeros(n, t);
    let mut ca = DMatrix::zeros(n, t);
    let mut rgdp = DMatrix::zeros(n, t);
    let mut rgov = DMatrix::zeros(n, t);

    for i in 0..n {
        let debt_anchor: f64 = rng.gen_range(20.0..110.0);
        let gamma: f64 = rng.gen_range(0.3..1.2);
        let growth: f64 = rng.gen_range(0.01..0.035);
        let base_gdp: f64 = rng.gen_range(80.0..120.0);
        let base_gov: f64 = rng.gen_range(15.0..30.0);
        let rho_i: f64 = rng.gen_range(0.02..0.06);
        let phi_i: f64 = rng.gen_range(0.2..0.5);

        let mut b = debt_anchor;
        let mut s = 0.0;
        let mut c = rng.gen_range(-5.0..5.0);
        let mut gdp_cycle = 0.0;
        let mut gov_cycle = 0.0;
        for j in 0..t {
            gdp_cycle = 0.6 * gdp_cycle
                + 0.015 * (gamma * factor[j] + rng.sample::<f64, _>(StandardNormal));
            gov_cycle = 0.5 * gov_cycle
                + 0.02 * (0.5 * gamma * factor[j] + rng.sample::<f64, _>(StandardNormal));
            rgdp[(i, j)] = base_gdp * (growth * j as f64 + gdp_cycle).exp();
            rgov[(i, j)] = base_gov * (growth * 0.9 * j as f64 + gov_cycle).exp();

            let s_lag = s;
            let b_lag = b;
            s = phi_i * s_lag + rho_i * (b_lag - debt_anchor)
                + 30.0 * gdp_cycle
                - 20.0 * gov_cycle
                + gamma * 0.3 * factor[j]
                + 0.8 * rng.sample::<f64, _>(StandardNormal);
            // Debt accumulates against the surplus with a small
            // rate-growth differential.
            b = (b_lag - s) * 1.01 + rng.sample::<f64, _>(StandardNormal);
            b = b.max(3.0);
            c = 0.7 * c + 0.5 * gamma * factor[j] + rng.sample::<f64, _>(StandardNormal);

            pb[(i, j)] = s;
            debt[(i, j)] = b;
            ca[(i, j)] = c;
        }
    }

    let mut vars = BTreeMap::new();
    vars.insert("pb".to_string(), pb);
    vars.insert("debt".to_string(), debt);
    vars.insert("ca".to_string(), ca);
    vars.insert("rgdp".to_string(), rgdp);
    vars.insert("rgov".to_string(), rgov);
    PanelDataset::from_matrices(unit_ids(n), years(t), vars).expect("valid shapes")
}
