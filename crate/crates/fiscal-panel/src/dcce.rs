//! Dynamic common-correlated-effects mean-group estimation.
//!
//! Each unit is fit by least squares on a design holding its own lags,
//! the observed regressors, an optional break dummy, and lagged
//! cross-sectional averages of the dependent variable and regressors that
//! proxy unobserved common factors. Unit slopes are averaged into the
//! mean-group estimate with nonparametric standard errors; a half-panel
//! jackknife is available for small-T bias correction.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::ols;
use crate::panel::{GroupSplit, PanelDataset};

/// Number of cross-sectional-average lags entering the design.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsaLags {
    Fixed(usize),
    /// Cube root of the post-lagging sample length, floored.
    Auto,
}

/// Whose averages proxy the common factors in subgroup regressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CsaScope {
    /// Averages over the estimation subsample (default).
    #[default]
    EstimationGroup,
    /// Averages over the full panel regardless of the estimation group.
    FullPanel,
}

/// One observed regressor, entered at the given lag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Regressor {
    pub var: String,
    pub lag: usize,
}

impl Regressor {
    pub fn contemporaneous(var: impl Into<String>) -> Self {
        Regressor {
            var: var.into(),
            lag: 0,
        }
    }

    pub fn lagged(var: impl Into<String>) -> Self {
        Regressor {
            var: var.into(),
            lag: 1,
        }
    }

    fn column_name(&self) -> String {
        if self.lag == 0 {
            self.var.clone()
        } else {
            format!("{}_lag{}", self.var, self.lag)
        }
    }
}

/// Declarative description of one mean-group regression.
#[derive(Debug, Clone)]
pub struct RegressionSpec {
    pub dependent: String,
    /// Number of own lags of the dependent variable (1 for the standard
    /// dynamic rule).
    pub lag_dependent: usize,
    pub regressors: Vec<Regressor>,
    /// Step-dummy break year: the dummy is 1 for years at or after it.
    pub break_year: Option<i32>,
    pub csa_lags: CsaLags,
    /// Estimation subsample; `None` estimates over the full panel.
    pub group: Option<GroupSplit>,
    pub csa_scope: CsaScope,
}

impl RegressionSpec {
    pub fn new(dependent: impl Into<String>, regressors: Vec<Regressor>) -> Self {
        RegressionSpec {
            dependent: dependent.into(),
            lag_dependent: 1,
            regressors,
            break_year: None,
            csa_lags: CsaLags::Auto,
            group: None,
            csa_scope: CsaScope::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.regressors.iter().any(|r| r.var == self.dependent) {
            return Err(Error::InvalidConfig(format!(
                "dependent variable {:?} cannot also appear as a regressor",
                self.dependent
            )));
        }
        Ok(())
    }

    /// Lag depth consumed by the model's own terms (dependent and
    /// regressor lags).
    fn own_lag_depth(&self) -> usize {
        self.regressors
            .iter()
            .map(|r| r.lag)
            .max()
            .unwrap_or(0)
            .max(self.lag_dependent)
    }

    /// Resolve the cross-sectional-average lag count for a panel of
    /// length `t`.
    pub fn resolve_csa_lags(&self, t: usize) -> usize {
        match self.csa_lags {
            CsaLags::Fixed(m) => m,
            CsaLags::Auto => {
                let t_eff = t.saturating_sub(self.own_lag_depth());
                ((t_eff as f64).cbrt() + 1e-9).floor() as usize
            }
        }
    }

    /// Copy with `csa_lags` pinned for panel length `t`, so derived
    /// samples (jackknife halves) share the full-sample design.
    fn resolved(&self, t: usize) -> RegressionSpec {
        let mut out = self.clone();
        out.csa_lags = CsaLags::Fixed(self.resolve_csa_lags(t));
        out
    }

    fn csa_group(&self, panel: &PanelDataset) -> GroupSplit {
        match (&self.group, self.csa_scope) {
            (Some(g), CsaScope::EstimationGroup) => g.clone(),
            _ => panel.full_group(),
        }
    }

    /// Units entering the estimation, as canonical panel indices.
    pub fn estimation_indices(&self, panel: &PanelDataset) -> Result<Vec<usize>> {
        match &self.group {
            Some(g) => panel.member_indices(g),
            None => Ok((0..panel.n_units()).collect()),
        }
    }
}

/// Response vector and design matrix for one unit.
#[derive(Debug, Clone)]
pub struct UnitDesign {
    pub response: DVector<f64>,
    pub design: DMatrix<f64>,
    pub column_names: Vec<String>,
    /// Calendar years of the usable rows.
    pub years_used: Vec<i32>,
}

/// Build the regression rows for one unit.
///
/// Column order is fixed: intercept, lags of the dependent variable, the
/// regressors as ordered, the break dummy when requested, then the
/// cross-sectional averages of the dependent variable and of each distinct
/// regressor variable at lags `0..=m`.
pub fn build_design(
    panel: &PanelDataset,
    spec: &RegressionSpec,
    unit_idx: usize,
) -> Result<UnitDesign> {
    spec.validate()?;
    let t = panel.n_years();
    let m = spec.resolve_csa_lags(t);
    let depth = spec.own_lag_depth().max(m);
    if t <= depth {
        return Err(Error::InsufficientObservations {
            detail: format!("panel length {t} does not cover lag depth {depth}"),
        });
    }
    let rows = t - depth;

    // Distinct underlying variables entering the average block.
    let mut csa_vars: Vec<String> = vec![spec.dependent.clone()];
    for r in &spec.regressors {
        if !csa_vars.contains(&r.var) {
            csa_vars.push(r.var.clone());
        }
    }

    let cols =
        1 + spec.lag_dependent + spec.regressors.len() + usize::from(spec.break_year.is_some())
            + csa_vars.len() * (m + 1);
    if rows <= cols {
        let hint = if m > 0 {
            "; consider reducing csa_lags"
        } else {
            ""
        };
        return Err(Error::InsufficientObservations {
            detail: format!("{rows} usable rows for {cols} design columns{hint}"),
        });
    }

    let csa_members = spec.csa_group(panel);
    let member_count = panel.member_indices(&csa_members)?.len();
    if member_count < 2 {
        // A single-member average reproduces the unit's own series and the
        // design cannot identify the factor proxies.
        let columns = csa_vars
            .iter()
            .map(|v| format!("csa_{v}_lag0"))
            .collect::<Vec<_>>();
        return Err(Error::RankDeficient { columns });
    }
    let mut averages = Vec::with_capacity(csa_vars.len());
    for v in &csa_vars {
        averages.push(panel.cross_sectional_average(v, &csa_members)?);
    }

    let dep = panel.variable(&spec.dependent)?;
    let mut design = DMatrix::zeros(rows, cols);
    let mut response = DVector::zeros(rows);
    let mut column_names = Vec::with_capacity(cols);

    column_names.push("const".to_string());
    for l in 1..=spec.lag_dependent {
        column_names.push(format!("{}_lag{l}", spec.dependent));
    }
    for r in &spec.regressors {
        column_names.push(r.column_name());
    }
    if spec.break_year.is_some() {
        column_names.push("break_dummy".to_string());
    }
    for v in &csa_vars {
        for l in 0..=m {
            column_names.push(format!("csa_{v}_lag{l}"));
        }
    }

    let mut years_used = Vec::with_capacity(rows);
    for (row, tt) in (depth..t).enumerate() {
        years_used.push(panel.years()[tt]);
        response[row] = dep[(unit_idx, tt)];
        let mut c = 0;
        design[(row, c)] = 1.0;
        c += 1;
        for l in 1..=spec.lag_dependent {
            design[(row, c)] = dep[(unit_idx, tt - l)];
            c += 1;
        }
        for r in &spec.regressors {
            let mat = panel.variable(&r.var)?;
            design[(row, c)] = mat[(unit_idx, tt - r.lag)];
            c += 1;
        }
        if let Some(break_year) = spec.break_year {
            design[(row, c)] = if panel.years()[tt] >= break_year {
                1.0
            } else {
                0.0
            };
            c += 1;
        }
        for avg in &averages {
            for l in 0..=m {
                design[(row, c)] = avg[tt - l];
                c += 1;
            }
        }
        debug_assert_eq!(c, cols);
    }

    Ok(UnitDesign {
        response,
        design,
        column_names,
        years_used,
    })
}

/// Per-unit estimation output.
#[derive(Debug, Clone)]
pub struct UnitEstimate {
    pub unit: String,
    /// Retained coefficient names, in design order.
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    /// Collinear columns removed by the rank guard.
    pub dropped: Vec<String>,
    pub residuals: Vec<f64>,
    pub dof: usize,
}

impl UnitEstimate {
    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.coefficients[i])
    }
}

/// Fit one unit of the spec. Collinear columns are dropped by the
/// pivoting rank guard and recorded (and logged), never removed silently.
pub fn estimate_unit(
    panel: &PanelDataset,
    spec: &RegressionSpec,
    unit_idx: usize,
) -> Result<UnitEstimate> {
    let unit = panel.unit_ids()[unit_idx].clone();
    let built = build_design(panel, spec, unit_idx)?;

    let mean = built.response.iter().sum::<f64>() / built.response.len() as f64;
    if built.response.iter().all(|v| (v - mean).abs() < 1e-300) {
        return Err(Error::RankDeficient {
            columns: vec![format!(
                "dependent {:?} is constant for unit {unit}",
                spec.dependent
            )],
        });
    }

    let fit = ols::ols_dropping(&built.response, &built.design, &built.column_names)?;
    let dropped: Vec<String> = fit
        .dropped
        .iter()
        .map(|&j| built.column_names[j].clone())
        .collect();
    if !dropped.is_empty() {
        log::warn!("unit {unit}: dropped collinear design columns [{}]", dropped.join(", "));
    }
    Ok(UnitEstimate {
        unit,
        names: fit
            .retained
            .iter()
            .map(|&j| built.column_names[j].clone())
            .collect(),
        coefficients: fit.retained.iter().map(|&j| fit.coefficients[j]).collect(),
        dropped,
        residuals: fit.residuals.iter().copied().collect(),
        dof: fit.dof,
    })
}

/// Cross-unit aggregation of per-unit estimates.
#[derive(Debug, Clone)]
pub struct MeanGroupResult {
    pub units: Vec<UnitEstimate>,
    pub names: Vec<String>,
    /// Arithmetic means of the unit coefficients, in `names` order.
    pub mg_coefficients: Vec<f64>,
    /// Nonparametric dispersion standard errors,
    /// `sqrt(sum (theta_i - mean)^2 / (N (N - 1)))`.
    pub mg_se: Vec<f64>,
    pub bias_corrected: bool,
}

impl MeanGroupResult {
    pub fn coefficient(&self, name: &str) -> Option<f64> {
        self.index_of(name).map(|i| self.mg_coefficients[i])
    }

    pub fn standard_error(&self, name: &str) -> Option<f64> {
        self.index_of(name).map(|i| self.mg_se[i])
    }

    /// Two-sided normal p-value of the mean-group coefficient.
    pub fn p_value(&self, name: &str) -> Option<f64> {
        let i = self.index_of(name)?;
        let se = self.mg_se[i];
        if se == 0.0 {
            return Some(if self.mg_coefficients[i] == 0.0 { 1.0 } else { 0.0 });
        }
        let z = (self.mg_coefficients[i] / se).abs();
        let normal = Normal::new(0.0, 1.0).unwrap();
        Some((2.0 * (1.0 - normal.cdf(z))).clamp(0.0, 1.0))
    }

    fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Average unit estimates into the mean-group result.
pub fn mean_group(units: Vec<UnitEstimate>) -> Result<MeanGroupResult> {
    if units.len() < 2 {
        return Err(Error::TooFewUnits {
            n: units.len(),
            min: 2,
        });
    }
    let names = units[0].names.clone();
    for u in &units[1..] {
        if u.names != names {
            return Err(Error::InconsistentCoefficientSets {
                detail: format!(
                    "unit {} retained [{}] but unit {} retained [{}]",
                    units[0].unit,
                    names.join(", "),
                    u.unit,
                    u.names.join(", ")
                ),
            });
        }
    }
    let n = units.len() as f64;
    let mut mg_coefficients = vec![0.0; names.len()];
    for u in &units {
        for (k, v) in u.coefficients.iter().enumerate() {
            mg_coefficients[k] += v;
        }
    }
    for v in mg_coefficients.iter_mut() {
        *v /= n;
    }
    let mut mg_se = vec![0.0; names.len()];
    for u in &units {
        for (k, v) in u.coefficients.iter().enumerate() {
            let d = v - mg_coefficients[k];
            mg_se[k] += d * d;
        }
    }
    for v in mg_se.iter_mut() {
        *v = (*v / (n * (n - 1.0))).sqrt();
    }
    Ok(MeanGroupResult {
        units,
        names,
        mg_coefficients,
        mg_se,
        bias_corrected: false,
    })
}

fn estimate_unit_jackknifed(
    panel: &PanelDataset,
    spec: &RegressionSpec,
    unit_idx: usize,
) -> Result<UnitEstimate> {
    let resolved = spec.resolved(panel.n_years());
    let full = estimate_unit(panel, &resolved, unit_idx)?;
    let half = panel.n_years() / 2;
    let first = panel.year_slice(0, half);
    let second = panel.year_slice(half, panel.n_years());
    let fit_a = estimate_unit(&first, &resolved, unit_idx)?;
    let fit_b = estimate_unit(&second, &resolved, unit_idx)?;
    if fit_a.names != full.names || fit_b.names != full.names {
        return Err(Error::InconsistentCoefficientSets {
            detail: format!(
                "half-panel fits for unit {} retained different columns than the full fit",
                full.unit
            ),
        });
    }
    let coefficients: Vec<f64> = full
        .coefficients
        .iter()
        .zip(fit_a.coefficients.iter().zip(&fit_b.coefficients))
        .map(|(f, (a, b))| 2.0 * f - 0.5 * (a + b))
        .collect();
    Ok(UnitEstimate {
        coefficients,
        ..full
    })
}

/// Estimation switches for [`estimate_dcce`].
#[derive(Debug, Clone, Copy, Default)]
pub struct DcceOptions {
    /// Apply the half-panel jackknife correction per unit.
    pub jackknife: bool,
    /// Fan unit fits out over a thread pool; results are gathered in
    /// canonical unit order either way.
    pub parallel: bool,
}

/// Estimate the spec over its group: per-unit fits in canonical order,
/// then mean-group aggregation. Any unit failure aborts the run with the
/// full list of failed units.
pub fn estimate_dcce(
    panel: &PanelDataset,
    spec: &RegressionSpec,
    options: &DcceOptions,
) -> Result<MeanGroupResult> {
    spec.validate()?;
    let indices = spec.estimation_indices(panel)?;
    let fit_one = |&idx: &usize| -> (usize, Result<UnitEstimate>) {
        let r = if options.jackknife {
            estimate_unit_jackknifed(panel, spec, idx)
        } else {
            estimate_unit(panel, spec, idx)
        };
        (idx, r)
    };
    let mut results: Vec<(usize, Result<UnitEstimate>)> = if options.parallel {
        indices.par_iter().map(fit_one).collect()
    } else {
        indices.iter().map(fit_one).collect()
    };
    results.sort_by_key(|(idx, _)| *idx);

    let mut estimates = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (idx, r) in results {
        match r {
            Ok(e) => estimates.push(e),
            Err(e) => failures.push((panel.unit_ids()[idx].clone(), e)),
        }
    }
    if !failures.is_empty() {
        return Err(Error::UnitFailures { failures });
    }
    let mut mg = mean_group(estimates)?;
    mg.bias_corrected = options.jackknife;
    Ok(mg)
}

/// Half-panel jackknife estimation of the spec (bias-corrected variant of
/// [`estimate_dcce`]).
pub fn jackknife_correct(panel: &PanelDataset, spec: &RegressionSpec) -> Result<MeanGroupResult> {
    estimate_dcce(
        panel,
        spec,
        &DcceOptions {
            jackknife: true,
            parallel: false,
        },
    )
}
