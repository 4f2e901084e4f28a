//! Batch pipeline: configuration, orchestration, and artifact emission.
//!
//! `run_pipeline` ingests a delimited panel, builds the percent gaps, runs
//! the diagnostic battery, estimates the mean-group regressions for the
//! aggregate panel and every configured group pair, summarizes the
//! implied long-run responses with sustainability verdicts, and emits
//! figure data. All artifacts are staged in memory and written in one
//! pass, so a failing run leaves no partial outputs; reruns are
//! byte-identical.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::dcce::{self, CsaLags, CsaScope, DcceOptions, Regressor, RegressionSpec};
use crate::diagnostics::{cd_plus_test, cd_test, cips_test, CadfConfig, CdPlusConfig};
use crate::error::{Error, Result};
use crate::hp::{detrend_panel, FilterConfig};
use crate::panel::{ingest_table, GroupSplit, IngestSchema, PanelDataset};
use crate::report::{
    format_significant, render_diagnostics_table, render_figure_data, render_regression_table,
    DiagnosticsRow, RegressionColumn, TableLayout,
};
use crate::sustainability::{
    simulate_debt_path_with, ClassifyConfig, EconomyPath, FiscalRule, Path as RatePath,
};

/// Column mapping from logical variables to file headers.
#[derive(Debug, Clone, Deserialize)]
pub struct ColumnMap {
    #[serde(default = "default_unit_column")]
    pub unit: String,
    #[serde(default = "default_year_column")]
    pub year: String,
    pub primary_balance: String,
    pub debt: String,
    pub real_gdp: String,
    pub real_spending: String,
    #[serde(default)]
    pub current_account: Option<String>,
}

fn default_unit_column() -> String {
    "country".to_string()
}

fn default_year_column() -> String {
    "year".to_string()
}

/// Sustainability scenario attached to the estimated rules.
#[derive(Debug, Clone, Deserialize)]
#[serde(default)]
pub struct ScenarioConfig {
    pub interest_rate: f64,
    pub growth_rate: f64,
    pub horizon: usize,
    /// Initial debt ratio; the final-year mean debt of the panel applies
    /// when absent.
    pub initial_debt: Option<f64>,
    pub tolerance: f64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            interest_rate: 0.03,
            growth_rate: 0.02,
            horizon: 500,
            initial_debt: None,
            tolerance: 1e-6,
        }
    }
}

/// Fully resolved pipeline settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub data: PathBuf,
    pub output_dir: PathBuf,
    pub delimiter: char,
    pub columns: ColumnMap,
    /// Explicit named groups; processed in sorted-name order.
    pub groups: BTreeMap<String, Vec<String>>,
    /// Derive a high/low split at the median of unit median debt ratios.
    pub median_split: bool,
    pub break_year: i32,
    pub hp_lambda: f64,
    pub hp_log: bool,
    pub csa_lags: CsaLags,
    pub csa_scope: CsaScope,
    pub jackknife: bool,
    pub seed: u64,
    pub parallel: bool,
    pub year_window: Option<(i32, i32)>,
    pub drop_incomplete: bool,
    pub scenario: ScenarioConfig,
}

impl RunConfig {
    /// Minimal configuration over a data file, with defaults everywhere
    /// else.
    pub fn new(data: impl Into<PathBuf>, output_dir: impl Into<PathBuf>, columns: ColumnMap) -> Self {
        RunConfig {
            data: data.into(),
            output_dir: output_dir.into(),
            delimiter: ',',
            columns,
            groups: BTreeMap::new(),
            median_split: true,
            break_year: 2008,
            hp_lambda: 100.0,
            hp_log: false,
            csa_lags: CsaLags::Auto,
            csa_scope: CsaScope::EstimationGroup,
            jackknife: false,
            seed: 0,
            parallel: true,
            year_window: None,
            drop_incomplete: false,
            scenario: ScenarioConfig::default(),
        }
    }
}

// ---------------------------------------------------------------------
// Configuration file parsing
// ---------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum CsaLagsToml {
    Count(usize),
    Mode(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(default)]
struct OptionsToml {
    delimiter: Option<String>,
    median_split: Option<bool>,
    break_year: Option<i32>,
    hp_lambda: Option<f64>,
    hp_log: Option<bool>,
    csa_lags: Option<CsaLagsToml>,
    csa_scope: Option<String>,
    jackknife: Option<bool>,
    seed: Option<u64>,
    parallel: Option<bool>,
    years: Option<(i32, i32)>,
    drop_incomplete: Option<bool>,
}

#[derive(Debug, Deserialize)]
struct ConfigToml {
    data: String,
    #[serde(default)]
    output_dir: Option<String>,
    columns: ColumnMap,
    #[serde(default)]
    options: OptionsToml,
    #[serde(default)]
    groups: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    scenario: Option<ScenarioConfig>,
}

/// Load a TOML run configuration. Relative paths resolve against the
/// configuration file's directory.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let raw = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let parsed: ConfigToml =
        toml::from_str(&raw).map_err(|e| Error::InvalidConfig(format!("{path:?}: {e}")))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let resolve = |p: &str| -> PathBuf {
        let pb = PathBuf::from(p);
        if pb.is_absolute() {
            pb
        } else {
            base.join(pb)
        }
    };

    let mut config = RunConfig::new(
        resolve(&parsed.data),
        resolve(parsed.output_dir.as_deref().unwrap_or("out")),
        parsed.columns,
    );
    config.groups = parsed.groups;
    if let Some(s) = parsed.scenario {
        config.scenario = s;
    }
    let o = parsed.options;
    if let Some(d) = o.delimiter {
        let mut chars = d.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => config.delimiter = c,
            _ => {
                return Err(Error::InvalidConfig(format!(
                    "delimiter must be a single character, got {d:?}"
                )))
            }
        }
    }
    if let Some(v) = o.median_split {
        config.median_split = v;
    }
    if let Some(v) = o.break_year {
        config.break_year = v;
    }
    if let Some(v) = o.hp_lambda {
        config.hp_lambda = v;
    }
    if let Some(v) = o.hp_log {
        config.hp_log = v;
    }
    config.csa_lags = match o.csa_lags {
        None => CsaLags::Auto,
        Some(CsaLagsToml::Count(m)) => CsaLags::Fixed(m),
        Some(CsaLagsToml::Mode(s)) if s.eq_ignore_ascii_case("auto") => CsaLags::Auto,
        Some(CsaLagsToml::Mode(s)) => {
            return Err(Error::InvalidConfig(format!(
                "csa_lags must be an integer or \"auto\", got {s:?}"
            )))
        }
    };
    config.csa_scope = match o.csa_scope.as_deref() {
        None | Some("group") => CsaScope::EstimationGroup,
        Some("panel") => CsaScope::FullPanel,
        Some(other) => {
            return Err(Error::InvalidConfig(format!(
                "csa_scope must be \"group\" or \"panel\", got {other:?}"
            )))
        }
    };
    if let Some(v) = o.jackknife {
        config.jackknife = v;
    }
    if let Some(v) = o.seed {
        config.seed = v;
    }
    if let Some(v) = o.parallel {
        config.parallel = v;
    }
    config.year_window = o.years;
    if let Some(v) = o.drop_incomplete {
        config.drop_incomplete = v;
    }
    Ok(config)
}

// ---------------------------------------------------------------------
// Pipeline stages
// ---------------------------------------------------------------------

/// Logical variable names used inside the pipeline panel.
const VAR_BALANCE: &str = "primary_balance";
const VAR_DEBT: &str = "debt";
const VAR_GDP: &str = "real_gdp";
const VAR_SPENDING: &str = "real_spending";
const VAR_CA: &str = "current_account";
const VAR_OUTPUT_GAP: &str = "real_gdp_gap";
const VAR_SPENDING_GAP: &str = "real_spending_gap";

fn ingest_schema(config: &RunConfig) -> IngestSchema {
    let c = &config.columns;
    let mut variables = vec![
        (VAR_BALANCE.to_string(), c.primary_balance.clone()),
        (VAR_DEBT.to_string(), c.debt.clone()),
        (VAR_GDP.to_string(), c.real_gdp.clone()),
        (VAR_SPENDING.to_string(), c.real_spending.clone()),
    ];
    if let Some(ca) = &c.current_account {
        variables.push((VAR_CA.to_string(), ca.clone()));
    }
    IngestSchema {
        unit_column: c.unit.clone(),
        year_column: c.year.clone(),
        variables,
        delimiter: config.delimiter as u8,
        drop_incomplete: config.drop_incomplete,
        year_window: config.year_window,
    }
}

/// Ingest and validate without computing anything further.
pub fn ingest_check(config: &RunConfig) -> Result<PanelDataset> {
    if !config.data.exists() {
        return Err(Error::InvalidConfig(format!(
            "data file {} does not exist",
            config.data.display()
        )));
    }
    let panel = ingest_table(&config.data, &ingest_schema(config))?;
    let years = panel.years();
    if config.break_year < years[0] || config.break_year > *years.last().unwrap() {
        return Err(Error::InvalidConfig(format!(
            "break year {} lies outside the panel years {}..{}",
            config.break_year,
            years[0],
            years.last().unwrap()
        )));
    }
    for (label, members) in &config.groups {
        let g = GroupSplit::new(label.clone(), members.clone());
        panel.member_indices(&g)?;
    }
    Ok(panel)
}

fn gap_panel(config: &RunConfig, panel: &PanelDataset) -> Result<PanelDataset> {
    let hp = FilterConfig {
        lambda: config.hp_lambda,
        log_input: config.hp_log,
    };
    let with_output = detrend_panel(panel, VAR_GDP, &hp)?;
    detrend_panel(&with_output, VAR_SPENDING, &hp)
}

fn diagnostics_rows(panel: &PanelDataset) -> Result<Vec<DiagnosticsRow>> {
    let mut battery = vec![VAR_BALANCE, VAR_DEBT, VAR_OUTPUT_GAP, VAR_SPENDING_GAP];
    if panel.has_variable(VAR_CA) {
        battery.push(VAR_CA);
    }
    let mut rows = Vec::with_capacity(battery.len());
    for var in battery {
        let cips = cips_test(panel, var, &CadfConfig::default())?;
        let cadf_combined = (
            cips.detail["fisher_statistic"],
            Some(cips.detail["fisher_p_value"]),
        );
        rows.push(DiagnosticsRow {
            label: var.to_string(),
            summary: panel.summary(var)?,
            cd: cd_test(panel, var)?,
            cd_plus: cd_plus_test(panel, var, &CdPlusConfig::default())?,
            cadf_combined,
            cips,
        });
    }
    Ok(rows)
}

fn regression_spec(config: &RunConfig, with_ca: bool, group: Option<GroupSplit>) -> RegressionSpec {
    let mut regressors = vec![
        Regressor::lagged(VAR_DEBT),
        Regressor::contemporaneous(VAR_OUTPUT_GAP),
        Regressor::contemporaneous(VAR_SPENDING_GAP),
    ];
    if with_ca {
        regressors.push(Regressor::contemporaneous(VAR_CA));
    }
    RegressionSpec {
        dependent: VAR_BALANCE.to_string(),
        lag_dependent: 1,
        regressors,
        break_year: Some(config.break_year),
        csa_lags: config.csa_lags,
        group,
        csa_scope: config.csa_scope,
    }
}

/// Estimation groups in canonical order: the full panel, the median-debt
/// pair when enabled, then explicit groups sorted by name.
fn estimation_groups(config: &RunConfig, panel: &PanelDataset) -> Result<Vec<Option<GroupSplit>>> {
    let mut groups: Vec<Option<GroupSplit>> = vec![None];
    if config.median_split {
        let (high, low) = panel.median_debt_split(VAR_DEBT)?;
        groups.push(Some(high));
        groups.push(Some(low));
    }
    for (label, members) in &config.groups {
        groups.push(Some(GroupSplit::new(label.clone(), members.clone())));
    }
    Ok(groups)
}

fn run_regressions(
    config: &RunConfig,
    panel: &PanelDataset,
) -> Result<Vec<RegressionColumn>> {
    let has_ca = panel.has_variable(VAR_CA);
    let options = DcceOptions {
        jackknife: config.jackknife,
        parallel: config.parallel,
    };
    let mut columns = Vec::new();
    let mut index = 0;
    for group in estimation_groups(config, panel)? {
        let label = group
            .as_ref()
            .map(|g| g.label.clone())
            .unwrap_or_else(|| "all".to_string());
        for with_ca in [false, true] {
            if with_ca && !has_ca {
                continue;
            }
            index += 1;
            let spec = regression_spec(config, with_ca, group.clone());
            let result = dcce::estimate_dcce(panel, &spec, &options)?;
            columns.push(RegressionColumn {
                label: format!("{label}({index})"),
                result,
            });
        }
    }
    Ok(columns)
}

fn regression_layout(has_ca: bool) -> TableLayout {
    let mut rows = vec![
        ("primary_balance_lag1", "lagged_primary_balance"),
        ("debt_lag1", "lagged_debt"),
        ("const", "constant"),
        ("real_gdp_gap", "output_gap"),
        ("real_spending_gap", "spending_gap"),
        ("break_dummy", "break_dummy"),
    ];
    if has_ca {
        rows.push((VAR_CA, "current_account"));
    }
    TableLayout::new(&rows)
}

fn long_run_table(
    config: &RunConfig,
    panel: &PanelDataset,
    columns: &[RegressionColumn],
) -> String {
    let b0 = config.scenario.initial_debt.unwrap_or_else(|| {
        let m = panel.variable(VAR_DEBT).expect("debt is ingested");
        let last = panel.n_years() - 1;
        (0..panel.n_units()).map(|i| m[(i, last)]).sum::<f64>() / panel.n_units() as f64
    });
    let economy = EconomyPath::constant(config.scenario.interest_rate, config.scenario.growth_rate);
    let classify = ClassifyConfig {
        tolerance: config.scenario.tolerance,
        ..Default::default()
    };

    let mut out = String::new();
    out.push_str(
        "regression\tphi\trho\tlong_run_response\tresponse_per_10pp\tdecay_factor\tverdict\n",
    );
    for c in columns {
        let phi = c.result.coefficient("primary_balance_lag1");
        let rho = c.result.coefficient("debt_lag1");
        let (Some(phi), Some(rho)) = (phi, rho) else {
            let _ = writeln!(out, "{}\t--\t--\t--\t--\t--\t--", c.label);
            continue;
        };
        let (response, decay) = if phi < 1.0 {
            let r = rho / (1.0 - phi);
            (Some(r), Some(1.0 - r))
        } else {
            (None, None)
        };
        let verdict = match FiscalRule::new(phi, rho, RatePath::Constant(0.0)) {
            Ok(rule) => simulate_debt_path_with(
                &rule,
                &economy,
                b0,
                0.0,
                config.scenario.horizon,
                &classify,
            )
            .map(|r| r.verdict.to_string())
            .unwrap_or_else(|e| format!("error: {e}")),
            Err(_) => "--".to_string(),
        };
        let fmt_opt = |v: Option<f64>| match v {
            Some(v) => format_significant(v, 4),
            None => "--".to_string(),
        };
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            c.label,
            format_significant(phi, 4),
            format_significant(rho, 4),
            fmt_opt(response),
            fmt_opt(response.map(|r| 10.0 * r)),
            fmt_opt(decay),
            verdict
        );
    }
    out
}

fn figure_groups(config: &RunConfig, panel: &PanelDataset) -> Result<Vec<GroupSplit>> {
    let mut groups = vec![panel.full_group()];
    for g in estimation_groups(config, panel)?.into_iter().flatten() {
        groups.push(g);
    }
    Ok(groups)
}

fn sha256_hex(content: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(content.as_bytes());
    let digest = hasher.finalize();
    digest.iter().fold(String::new(), |mut acc, b| {
        let _ = write!(acc, "{b:02x}");
        acc
    })
}

/// Canonical echo of the effective settings, one sorted `key = value` line
/// each.
fn echo_config(config: &RunConfig) -> String {
    let mut lines: Vec<String> = vec![
        format!("break_year = {}", config.break_year),
        format!("csa_lags = {:?}", config.csa_lags),
        format!("csa_scope = {:?}", config.csa_scope),
        format!("data = {}", config.data.display()),
        format!("delimiter = {:?}", config.delimiter),
        format!("drop_incomplete = {}", config.drop_incomplete),
        format!("hp_lambda = {}", config.hp_lambda),
        format!("hp_log = {}", config.hp_log),
        format!("jackknife = {}", config.jackknife),
        format!("median_split = {}", config.median_split),
        format!("parallel = {}", config.parallel),
        format!(
            "scenario = {{ interest_rate = {}, growth_rate = {}, horizon = {}, initial_debt = {:?}, tolerance = {} }}",
            config.scenario.interest_rate,
            config.scenario.growth_rate,
            config.scenario.horizon,
            config.scenario.initial_debt,
            config.scenario.tolerance
        ),
        format!("seed = {}", config.seed),
        format!("year_window = {:?}", config.year_window),
    ];
    for (label, members) in &config.groups {
        lines.push(format!("group.{label} = [{}]", members.join(", ")));
    }
    lines.sort();
    lines.join("\n")
}

/// Outcome of a pipeline run.
#[derive(Debug)]
pub struct RunSummary {
    pub artifacts: Vec<PathBuf>,
    pub n_units: usize,
    pub n_years: usize,
}

fn write_artifacts(dir: &Path, files: &[(String, String)]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        source: e,
    })?;
    let mut written = Vec::new();
    for (name, content) in files {
        let path = dir.join(name);
        if let Err(e) = std::fs::write(&path, content) {
            for p in &written {
                let _ = std::fs::remove_file(p);
            }
            return Err(Error::Io {
                path: path.display().to_string(),
                source: e,
            });
        }
        written.push(path);
    }
    Ok(written)
}

/// Run the diagnostic stage only and write `summary_diagnostics.tsv`.
pub fn run_diagnose(config: &RunConfig) -> Result<RunSummary> {
    let panel = ingest_check(config)?;
    let panel = gap_panel(config, &panel)?;
    let rows = diagnostics_rows(&panel)?;
    let files = vec![(
        "summary_diagnostics.tsv".to_string(),
        render_diagnostics_table(&rows),
    )];
    let artifacts = write_artifacts(&config.output_dir, &files)?;
    Ok(RunSummary {
        artifacts,
        n_units: panel.n_units(),
        n_years: panel.n_years(),
    })
}

/// Run the estimation stage only and write `regressions.tsv` plus
/// `long_run.tsv`.
pub fn run_estimate(config: &RunConfig) -> Result<RunSummary> {
    let panel = ingest_check(config)?;
    let panel = gap_panel(config, &panel)?;
    let columns = run_regressions(config, &panel)?;
    let files = vec![
        (
            "regressions.tsv".to_string(),
            render_regression_table(&columns, &regression_layout(panel.has_variable(VAR_CA))),
        ),
        (
            "long_run.tsv".to_string(),
            long_run_table(config, &panel, &columns),
        ),
    ];
    let artifacts = write_artifacts(&config.output_dir, &files)?;
    Ok(RunSummary {
        artifacts,
        n_units: panel.n_units(),
        n_years: panel.n_years(),
    })
}

/// Full pipeline: diagnostics, regressions, long-run summary, figure
/// data, and a manifest.
pub fn run_pipeline(config: &RunConfig) -> Result<RunSummary> {
    let panel = ingest_check(config)?;
    let panel = gap_panel(config, &panel)?;

    let rows = diagnostics_rows(&panel)?;
    let columns = run_regressions(config, &panel)?;
    let groups = figure_groups(config, &panel)?;

    let figure1_vars = vec![
        (VAR_BALANCE.to_string(), "primary_balance".to_string()),
        (VAR_DEBT.to_string(), "debt".to_string()),
    ];
    let figure2_vars = vec![
        (VAR_OUTPUT_GAP.to_string(), "output_gap".to_string()),
        (VAR_SPENDING_GAP.to_string(), "spending_gap".to_string()),
    ];

    let mut files = vec![
        (
            "summary_diagnostics.tsv".to_string(),
            render_diagnostics_table(&rows),
        ),
        (
            "regressions.tsv".to_string(),
            render_regression_table(&columns, &regression_layout(panel.has_variable(VAR_CA))),
        ),
        (
            "long_run.tsv".to_string(),
            long_run_table(config, &panel, &columns),
        ),
        (
            "figure1_balance_debt.tsv".to_string(),
            render_figure_data(&panel, &groups, &figure1_vars)?,
        ),
        (
            "figure2_gaps.tsv".to_string(),
            render_figure_data(&panel, &groups, &figure2_vars)?,
        ),
    ];

    let echo = echo_config(config);
    let mut manifest = String::new();
    let _ = writeln!(manifest, "fiscal-panel manifest");
    let _ = writeln!(manifest, "version = {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(manifest, "config_sha256 = {}", sha256_hex(&echo));
    let _ = writeln!(manifest, "\n[config]");
    let _ = writeln!(manifest, "{echo}");
    let _ = writeln!(manifest, "\n[artifacts]");
    for (name, content) in &files {
        let _ = writeln!(manifest, "{name}\t{}", sha256_hex(content));
    }
    files.push(("manifest.txt".to_string(), manifest));

    let artifacts = write_artifacts(&config.output_dir, &files)?;
    Ok(RunSummary {
        artifacts,
        n_units: panel.n_units(),
        n_years: panel.n_years(),
    })
}

// ---------------------------------------------------------------------
// Stand-alone scenario simulation
// ---------------------------------------------------------------------

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioToml {
    phi: f64,
    rho: f64,
    #[serde(default)]
    mu: Option<f64>,
    #[serde(default)]
    mu_file: Option<String>,
    #[serde(default)]
    interest_rate: Option<f64>,
    #[serde(default)]
    interest_file: Option<String>,
    #[serde(default)]
    growth_rate: Option<f64>,
    #[serde(default)]
    growth_file: Option<String>,
    #[serde(default)]
    discount: Option<f64>,
    #[serde(default)]
    discount_file: Option<String>,
    b0: f64,
    #[serde(default)]
    s0: Option<f64>,
    horizon: usize,
    #[serde(default)]
    tolerance: Option<f64>,
}

fn load_series(path: &Path) -> Result<Vec<f64>> {
    let raw = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let mut out = Vec::new();
    for (i, line) in raw.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| Error::UnparsableNumber {
            row: i + 1,
            column: path.display().to_string(),
            value: line.to_string(),
        })?;
        out.push(v);
    }
    if out.is_empty() {
        return Err(Error::EmptyFile);
    }
    Ok(out)
}

/// A parsed scenario: the rule, the rate environment, and the initial
/// conditions.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub rule: FiscalRule,
    pub economy: EconomyPath,
    pub b0: f64,
    pub s0: f64,
    pub horizon: usize,
    pub tolerance: f64,
}

/// Load a scenario description from TOML. Paths resolve against the
/// scenario file's directory; each rate accepts a constant or a file with
/// one value per line.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let raw = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    let parsed: ScenarioToml =
        toml::from_str(&raw).map_err(|e| Error::InvalidConfig(format!("{path:?}: {e}")))?;
    let base = path.parent().unwrap_or(Path::new("."));

    let pick = |constant: Option<f64>,
                file: Option<String>,
                default: Option<f64>,
                what: &str|
     -> Result<RatePath> {
        match (constant, file) {
            (Some(_), Some(_)) => Err(Error::InvalidConfig(format!(
                "{what}: give either a constant or a file, not both"
            ))),
            (Some(v), None) => Ok(RatePath::Constant(v)),
            (None, Some(f)) => Ok(RatePath::Series(load_series(&base.join(f))?)),
            (None, None) => match default {
                Some(v) => Ok(RatePath::Constant(v)),
                None => Err(Error::InvalidConfig(format!("{what} is required"))),
            },
        }
    };

    let mu = pick(parsed.mu, parsed.mu_file, Some(0.0), "mu")?;
    let interest = pick(
        parsed.interest_rate,
        parsed.interest_file,
        None,
        "interest_rate",
    )?;
    let growth = pick(parsed.growth_rate, parsed.growth_file, None, "growth_rate")?;
    let discount = match (parsed.discount, parsed.discount_file) {
        (None, None) => None,
        (c, f) => Some(pick(c, f, None, "discount")?),
    };

    Ok(Scenario {
        rule: FiscalRule::new(parsed.phi, parsed.rho, mu)?,
        economy: EconomyPath {
            interest,
            growth,
            discount,
        },
        b0: parsed.b0,
        s0: parsed.s0.unwrap_or(0.0),
        horizon: parsed.horizon,
        tolerance: parsed.tolerance.unwrap_or(1e-6),
    })
}

/// Simulate a scenario and write the trajectory table; returns the
/// written path and the verdict line.
pub fn run_simulate(scenario: &Scenario, output_dir: &Path) -> Result<(PathBuf, String)> {
    let classify = ClassifyConfig {
        tolerance: scenario.tolerance,
        ..Default::default()
    };
    let result = simulate_debt_path_with(
        &scenario.rule,
        &scenario.economy,
        scenario.b0,
        scenario.s0,
        scenario.horizon,
        &classify,
    )?;
    let mut out = String::from("t\tdebt\tsurplus\tdiscounted_debt\n");
    for t in 0..result.debt.len() {
        let _ = writeln!(
            out,
            "{t}\t{}\t{}\t{}",
            result.debt[t], result.surplus[t], result.discounted_debt[t]
        );
    }
    let files = vec![("debt_path.tsv".to_string(), out)];
    let written = write_artifacts(output_dir, &files)?;
    Ok((written[0].clone(), result.verdict.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;

    fn demo_columns() -> ColumnMap {
        ColumnMap {
            unit: "country".to_string(),
            year: "year".to_string(),
            primary_balance: "pb".to_string(),
            debt: "debt".to_string(),
            real_gdp: "rgdp".to_string(),
            real_spending: "rgov".to_string(),
            current_account: Some("ca".to_string()),
        }
    }

    fn write_dataset(dir: &Path, seed: u64) -> PathBuf {
        let panel = synth::synthetic_dataset(seed);
        let path = dir.join("panel.csv");
        panel.write_delimited(&path, ',').unwrap();
        path
    }

    #[test]
    fn pipeline_produces_all_artifacts() {
        let dir = tempfile::tempdir().unwrap();
        let data = write_dataset(dir.path(), 0);
        let config = RunConfig::new(data, dir.path().join("out"), demo_columns());
        let summary = run_pipeline(&config).unwrap();
        assert_eq!(summary.n_units, 52);
        assert_eq!(summary.n_years, 33);
        let names: Vec<String> = summary
            .artifacts
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().to_string())
            .collect();
        assert_eq!(
            names,
            vec![
                "summary_diagnostics.tsv",
                "regressions.tsv",
                "long_run.tsv",
                "figure1_balance_debt.tsv",
                "figure2_gaps.tsv",
                "manifest.txt",
            ]
        );
        for p in &summary.artifacts {
            assert!(p.exists());
            assert!(std::fs::metadata(p).unwrap().len() > 0);
        }
    }

    #[test]
    fn unknown_column_fails_validation_before_compute() {
        let dir = tempfile::tempdir().unwrap();
        let data = write_dataset(dir.path(), 1);
        let mut columns = demo_columns();
        columns.debt = "no_such_column".to_string();
        let config = RunConfig::new(data, dir.path().join("out"), columns);
        let err = run_pipeline(&config).unwrap_err();
        assert!(matches!(err, Error::MissingColumn(_)));
        assert_eq!(err.exit_code(), 2);
        assert!(!dir.path().join("out").exists());
    }

    #[test]
    fn break_year_outside_window_fails_validation() {
        let dir = tempfile::tempdir().unwrap();
        let data = write_dataset(dir.path(), 2);
        let mut config = RunConfig::new(data, dir.path().join("out"), demo_columns());
        config.break_year = 1980;
        let err = run_pipeline(&config).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig(_)));
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn config_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        write_dataset(dir.path(), 3);
        let toml_text = r#"
data = "panel.csv"
output_dir = "artifacts"

[columns]
primary_balance = "pb"
debt = "debt"
real_gdp = "rgdp"
real_spending = "rgov"
current_account = "ca"

[options]
csa_lags = "auto"
break_year = 2009
seed = 7
parallel = false

[groups]
north = ["C001", "C002"]

[scenario]
interest_rate = 0.04
growth_rate = 0.02
horizon = 300
"#;
        let cfg_path = dir.path().join("run.toml");
        std::fs::write(&cfg_path, toml_text).unwrap();
        let config = load_config(&cfg_path).unwrap();
        assert_eq!(config.break_year, 2009);
        assert_eq!(config.seed, 7);
        assert!(!config.parallel);
        assert_eq!(config.csa_lags, CsaLags::Auto);
        assert_eq!(config.groups["north"], vec!["C001", "C002"]);
        assert_eq!(config.scenario.horizon, 300);
        assert!(config.data.ends_with("panel.csv"));
        assert!(config.output_dir.ends_with("artifacts"));
    }

    #[test]
    fn scenario_file_parses_and_simulates() {
        let dir = tempfile::tempdir().unwrap();
        let scenario_text = r#"
phi = 0.358
rho = 0.033
b0 = 74.8
horizon = 500
interest_rate = 0.03
growth_rate = 0.02
"#;
        let path = dir.path().join("scenario.toml");
        std::fs::write(&path, scenario_text).unwrap();
        let scenario = load_scenario(&path).unwrap();
        let (written, verdict) = run_simulate(&scenario, dir.path()).unwrap();
        assert!(written.exists());
        assert_eq!(verdict, "sustainable");
        let content = std::fs::read_to_string(&written).unwrap();
        assert!(content.starts_with("t\tdebt\tsurplus\tdiscounted_debt\n"));
        assert_eq!(content.lines().count(), 502);
    }

    #[test]
    fn scenario_with_series_file() {
        let dir = tempfile::tempdir().unwrap();
        let mu_path = dir.path().join("mu.txt");
        let mu_values: Vec<String> = (0..10).map(|t| format!("{}", 0.1 * t as f64)).collect();
        std::fs::write(&mu_path, mu_values.join("\n")).unwrap();
        let scenario_text = r#"
phi = 0.3
rho = 0.02
mu_file = "mu.txt"
b0 = 50.0
horizon = 10
interest_rate = 0.03
growth_rate = 0.02
"#;
        let path = dir.path().join("scenario.toml");
        std::fs::write(&path, scenario_text).unwrap();
        let scenario = load_scenario(&path).unwrap();
        assert!(matches!(scenario.rule.mu, RatePath::Series(ref s) if s.len() == 10));
        let (_, verdict) = run_simulate(&scenario, dir.path()).unwrap();
        // Ten periods cannot support a verdict either way here.
        assert_eq!(verdict, "inconclusive (consider a longer horizon)");
    }
}
