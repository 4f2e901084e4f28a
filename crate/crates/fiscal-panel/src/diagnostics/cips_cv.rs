//! Simulated null quantiles for the panel unit-root statistics.
//!
//! The embedded tables hold quantiles of the unit-level t-ratio and of the
//! panel average under the unit-root null (independent driftless random
//! walks, intercept-only regressions), simulated once with fixed seeds on
//! a grid of panel sizes; `cips_cv_data.rs` is the frozen output of
//! `generate_tables_source`, reproducible via the ignored
//! `regenerate_null_quantile_tables` test. P-values interpolate linearly
//! in N, T, and the tabulated probability levels, truncated to the table
//! range.

include!("cips_cv_data.rs");

fn interp_levels(stat: f64, probs: &[f64], quantiles: &[f64]) -> f64 {
    if stat <= quantiles[0] {
        return probs[0];
    }
    let last = quantiles.len() - 1;
    if stat >= quantiles[last] {
        return probs[last];
    }
    let mut k = 0;
    while quantiles[k + 1] < stat {
        k += 1;
    }
    let w = (stat - quantiles[k]) / (quantiles[k + 1] - quantiles[k]);
    probs[k] + w * (probs[k + 1] - probs[k])
}

/// Weights for linear interpolation of `v` inside `grid`, clamped to the
/// table range.
fn bracket(grid: &[usize], v: usize) -> (usize, usize, f64) {
    let v = v as f64;
    if v <= grid[0] as f64 {
        return (0, 0, 0.0);
    }
    let last = grid.len() - 1;
    if v >= grid[last] as f64 {
        return (last, last, 0.0);
    }
    let mut k = 0;
    while (grid[k + 1] as f64) < v {
        k += 1;
    }
    let w = (v - grid[k] as f64) / (grid[k + 1] as f64 - grid[k] as f64);
    (k, k + 1, w)
}

fn interpolated_quantiles<const P: usize>(
    table: &[[[f64; P]; GRID_T_LEN]; GRID_N_LEN],
    n: usize,
    t: usize,
) -> [f64; P] {
    let (n0, n1, wn) = bracket(&GRID_N, n);
    let (t0, t1, wt) = bracket(&GRID_T, t);
    let mut out = [0.0; P];
    for (p, item) in out.iter_mut().enumerate() {
        let q00 = table[n0][t0][p];
        let q01 = table[n0][t1][p];
        let q10 = table[n1][t0][p];
        let q11 = table[n1][t1][p];
        let q0 = q00 + wt * (q01 - q00);
        let q1 = q10 + wt * (q11 - q10);
        *item = q0 + wn * (q1 - q0);
    }
    out
}

/// Left-tail p-value of the panel-average statistic for an N×T panel,
/// truncated to the tabulated range.
pub(crate) fn cips_p_value(stat: f64, n: usize, t: usize) -> f64 {
    let q = interpolated_quantiles(&CIPS_Q, n, t);
    interp_levels(stat, &CIPS_PROBS, &q)
}

/// Left-tail p-value of a unit-level t-ratio, truncated to the tabulated
/// range.
pub(crate) fn cadf_p_value(stat: f64, n: usize, t: usize) -> f64 {
    let q = interpolated_quantiles(&CADF_Q, n, t);
    interp_levels(stat, &CADF_PROBS, &q)
}

/// Critical value of the panel-average statistic at tabulated level `p`.
#[allow(dead_code)]
pub(crate) fn cips_critical_value(p: f64, n: usize, t: usize) -> f64 {
    let q = interpolated_quantiles(&CIPS_Q, n, t);
    let idx = CIPS_PROBS
        .iter()
        .position(|x| (x - p).abs() < 1e-12)
        .expect("level must be tabulated");
    q[idx]
}

/// Sanity checks on the embedded tables (quantiles strictly increasing in
/// the probability level).
#[cfg(test)]
pub(crate) fn check_tables() {
    for ni in 0..GRID_N_LEN {
        for ti in 0..GRID_T_LEN {
            for p in 1..CIPS_PROBS.len() {
                assert!(
                    CIPS_Q[ni][ti][p] > CIPS_Q[ni][ti][p - 1],
                    "CIPS quantiles not monotone at cell ({ni},{ti})"
                );
            }
            for p in 1..CADF_PROBS.len() {
                assert!(
                    CADF_Q[ni][ti][p] > CADF_Q[ni][ti][p - 1],
                    "CADF quantiles not monotone at cell ({ni},{ti})"
                );
            }
        }
    }
}

#[cfg(test)]
pub(crate) fn generate_tables_source() -> String {
    use rayon::prelude::*;
    use std::fmt::Write;

    const REPS: u64 = 20_000;

    struct Cell {
        cips_q: Vec<f64>,
        cadf_q: Vec<f64>,
    }

    fn quantile(sorted: &[f64], p: f64) -> f64 {
        let h = (sorted.len() - 1) as f64 * p;
        let lo = h.floor() as usize;
        let frac = h - lo as f64;
        if lo + 1 < sorted.len() {
            sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
        } else {
            sorted[lo]
        }
    }

    fn simulate_cell(n: usize, t: usize) -> Cell {
        use rand::prelude::*;
        use rand_distr::StandardNormal;

        let cell_seed = 0xC1B5_0000u64 + (n as u64) * 1000 + t as u64;
        let mut cips = Vec::with_capacity(REPS as usize);
        let mut cadf = Vec::with_capacity(REPS as usize * n);
        for rep in 0..REPS {
            let mut rng = crate::synth::rep_rng(cell_seed, rep);
            let mut units = vec![vec![0.0f64; t]; n];
            for series in units.iter_mut() {
                let mut level = 0.0;
                for v in series.iter_mut() {
                    level += rng.sample::<f64, _>(StandardNormal);
                    *v = level;
                }
            }
            let ybar: Vec<f64> = (0..t)
                .map(|j| units.iter().map(|u| u[j]).sum::<f64>() / n as f64)
                .collect();
            let mut sum = 0.0;
            for series in &units {
                let s = super::unit_root::cadf_stat(series, &ybar, &Default::default())
                    .expect("null simulation is well posed");
                cadf.push(s);
                sum += s;
            }
            cips.push(sum / n as f64);
        }
        cips.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cadf.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Cell {
            cips_q: CIPS_PROBS.iter().map(|p| quantile(&cips, *p)).collect(),
            cadf_q: CADF_PROBS.iter().map(|p| quantile(&cadf, *p)).collect(),
        }
    }

    let cells: Vec<((usize, usize), Cell)> = GRID_N
        .iter()
        .flat_map(|&n| GRID_T.iter().map(move |&t| (n, t)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(n, t)| ((n, t), simulate_cell(n, t)))
        .collect();

    let cell = |n: usize, t: usize| -> &Cell {
        &cells.iter().find(|((cn, ct), _)| *cn == n && *ct == t).unwrap().1
    };

    let mut out = String::new();
    out.push_str("// Generated by `regenerate_null_quantile_tables`; do not edit by hand.\n");
    let _ = writeln!(out, "pub(crate) const GRID_N_LEN: usize = {};", GRID_N.len());
    let _ = writeln!(out, "pub(crate) const GRID_T_LEN: usize = {};", GRID_T.len());
    let _ = writeln!(out, "pub(crate) const GRID_N: [usize; GRID_N_LEN] = {GRID_N:?};");
    let _ = writeln!(out, "pub(crate) const GRID_T: [usize; GRID_T_LEN] = {GRID_T:?};");
    let _ = writeln!(
        out,
        "pub(crate) const CIPS_PROBS: [f64; {}] = {CIPS_PROBS:?};",
        CIPS_PROBS.len()
    );
    let _ = writeln!(
        out,
        "pub(crate) const CADF_PROBS: [f64; {}] = {CADF_PROBS:?};",
        CADF_PROBS.len()
    );
    let fmt_rows = |out: &mut String, name: &str, len: usize, get: &dyn Fn(usize, usize) -> Vec<f64>| {
        let _ = writeln!(
            out,
            "pub(crate) const {name}: [[[f64; {len}]; GRID_T_LEN]; GRID_N_LEN] = ["
        );
        for &n in GRID_N.iter() {
            out.push_str("    [\n");
            for &t in GRID_T.iter() {
                let q = get(n, t);
                let body: Vec<String> = q.iter().map(|v| format!("{v:.4}")).collect();
                let _ = writeln!(out, "        [{}],", body.join(", "));
            }
            out.push_str("    ],\n");
        }
        out.push_str("];\n");
    };
    fmt_rows(&mut out, "CIPS_Q", CIPS_PROBS.len(), &|n, t| {
        cell(n, t).cips_q.clone()
    });
    fmt_rows(&mut out, "CADF_Q", CADF_PROBS.len(), &|n, t| {
        cell(n, t).cadf_q.clone()
    });
    out
}
