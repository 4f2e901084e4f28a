//! Debt law of motion under a surplus rule, and numerical no-Ponzi checks.
//!
//! The debt ratio follows `b_t = ((1 + r_t) / (1 + g_t)) (b_{t-1} - s_t)`
//! with the surplus rule `s_t = phi s_{t-1} + rho b_{t-1} + mu_t`. The
//! simulator tracks the discounted debt sequence and classifies the path:
//! discounted debt vanishing means the rule services debt faster than a
//! pure rollover scheme, so lenders' break-even condition holds.

use crate::error::{Error, Result};

/// Exogenous scalar path: a constant or an explicit series.
#[derive(Debug, Clone)]
pub enum Path {
    Constant(f64),
    Series(Vec<f64>),
}

impl Path {
    fn at(&self, step: usize) -> Option<f64> {
        match self {
            Path::Constant(v) => Some(*v),
            Path::Series(s) => s.get(step).copied(),
        }
    }

    fn check_len(&self, horizon: usize, what: &str) -> Result<()> {
        match self {
            Path::Constant(_) => Ok(()),
            Path::Series(s) if s.len() >= horizon => Ok(()),
            Path::Series(s) => Err(Error::InvalidConfig(format!(
                "{what} series has length {} but the horizon is {horizon}",
                s.len()
            ))),
        }
    }
}

/// Surplus rule `s_t = phi s_{t-1} + rho b_{t-1} + mu_t`.
#[derive(Debug, Clone)]
pub struct FiscalRule {
    pub phi: f64,
    pub rho: f64,
    pub mu: Path,
}

/// Values of `mu` beyond this magnitude draw a boundedness warning; the
/// rule's long-run algebra assumes the non-debt determinants stay bounded.
pub const MU_WARN_CAP: f64 = 1000.0;

impl FiscalRule {
    /// Build a rule for sustainability analysis. Inertia must satisfy
    /// `0 <= phi < 1`; the inertia-free boundary `phi = 0` is allowed.
    pub fn new(phi: f64, rho: f64, mu: Path) -> Result<FiscalRule> {
        if phi >= 1.0 {
            return Err(Error::NonStationaryInertia(phi));
        }
        if phi < 0.0 || !phi.is_finite() {
            return Err(Error::InvalidRule(format!(
                "inertia must lie in [0, 1), got {phi}"
            )));
        }
        if !rho.is_finite() {
            return Err(Error::InvalidRule(format!(
                "debt response must be finite, got {rho}"
            )));
        }
        Ok(FiscalRule { phi, rho, mu })
    }

    pub fn long_run_response(&self) -> f64 {
        self.rho / (1.0 - self.phi)
    }

    pub fn decay_factor(&self) -> f64 {
        1.0 - self.long_run_response()
    }
}

/// Permanent surplus adjustment per unit of debt, `rho / (1 - phi)`.
pub fn long_run_response(phi: f64, rho: f64) -> Result<f64> {
    if phi >= 1.0 {
        return Err(Error::NonStationaryInertia(phi));
    }
    let value = rho / (1.0 - phi);
    if value >= 1.0 {
        log::warn!(
            "long-run response {value:.4} is at or above unity; the rule over-adjusts to debt"
        );
    }
    Ok(value)
}

/// Factor by which debt growth is permanently reduced relative to pure
/// rollover: `1 - rho / (1 - phi)`. Sustainability needs a value in (0, 1)
/// for a positive debt response.
pub fn ponzi_decay_factor(phi: f64, rho: f64) -> Result<f64> {
    Ok(1.0 - long_run_response(phi, rho)?)
}

/// Long-run characterization of a rule.
#[derive(Debug, Clone, Copy)]
pub struct LongRunAssessment {
    pub response: f64,
    pub decay_factor: f64,
    /// Set when the response is at or above unity, violating the
    /// maintained restriction for the decay algebra.
    pub over_adjustment: bool,
}

pub fn assess_rule(phi: f64, rho: f64) -> Result<LongRunAssessment> {
    let response = long_run_response(phi, rho)?;
    Ok(LongRunAssessment {
        response,
        decay_factor: 1.0 - response,
        over_adjustment: response >= 1.0,
    })
}

/// Interest, growth, and optional discounting environment.
#[derive(Debug, Clone)]
pub struct EconomyPath {
    /// Period interest rate `r_t`.
    pub interest: Path,
    /// Period output growth `g_t`.
    pub growth: Path,
    /// Optional one-period discount factors standing in for the pricing
    /// kernel; natural discounting `(1 + g)/(1 + r)` applies when absent.
    pub discount: Option<Path>,
}

impl EconomyPath {
    pub fn constant(interest: f64, growth: f64) -> Self {
        EconomyPath {
            interest: Path::Constant(interest),
            growth: Path::Constant(growth),
            discount: None,
        }
    }
}

/// Sustainability classification of a simulated path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Sustainable,
    PonziViolation,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Sustainable => write!(f, "sustainable"),
            Verdict::PonziViolation => write!(f, "ponzi-violation"),
            Verdict::Inconclusive => write!(f, "inconclusive (consider a longer horizon)"),
        }
    }
}

/// Simulated trajectories, index 0 holding the initial condition.
#[derive(Debug, Clone)]
pub struct DebtPathResult {
    pub debt: Vec<f64>,
    pub surplus: Vec<f64>,
    /// `debt[t]` deflated by the cumulative discount product.
    pub discounted_debt: Vec<f64>,
    pub verdict: Verdict,
}

/// Classification thresholds.
#[derive(Debug, Clone, Copy)]
pub struct ClassifyConfig {
    /// Relative tolerance on discounted debt, against the initial level.
    pub tolerance: f64,
    /// Fraction of the horizon forming the tail window.
    pub tail_fraction: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            tolerance: 1e-6,
            tail_fraction: 0.1,
        }
    }
}

/// Run the debt recursion for `horizon` periods.
pub fn simulate_debt_path(
    rule: &FiscalRule,
    economy: &EconomyPath,
    b0: f64,
    s0: f64,
    horizon: usize,
) -> Result<DebtPathResult> {
    simulate_debt_path_with(rule, economy, b0, s0, horizon, &ClassifyConfig::default())
}

/// [`simulate_debt_path`] with explicit classification thresholds.
pub fn simulate_debt_path_with(
    rule: &FiscalRule,
    economy: &EconomyPath,
    b0: f64,
    s0: f64,
    horizon: usize,
    config: &ClassifyConfig,
) -> Result<DebtPathResult> {
    if horizon == 0 {
        return Err(Error::HorizonZero);
    }
    rule.mu.check_len(horizon, "mu")?;
    economy.interest.check_len(horizon, "interest")?;
    economy.growth.check_len(horizon, "growth")?;
    if let Some(d) = &economy.discount {
        d.check_len(horizon, "discount")?;
    }

    let mut debt = Vec::with_capacity(horizon + 1);
    let mut surplus = Vec::with_capacity(horizon + 1);
    let mut discounted = Vec::with_capacity(horizon + 1);
    debt.push(b0);
    surplus.push(s0);
    discounted.push(b0);

    let mut cumulative_discount = 1.0;
    let mut warned_mu = false;
    for step in 0..horizon {
        let r = economy.interest.at(step).unwrap();
        let g = economy.growth.at(step).unwrap();
        if 1.0 + r <= 0.0 {
            return Err(Error::NonPositiveGrossRate { step, rate: r });
        }
        if 1.0 + g <= 0.0 {
            return Err(Error::NonPositiveGrossRate { step, rate: g });
        }
        let mu = rule.mu.at(step).unwrap();
        if !warned_mu && mu.abs() > MU_WARN_CAP {
            log::warn!(
                "mu at step {step} is {mu}; the rule assumes bounded non-debt determinants"
            );
            warned_mu = true;
        }
        let b_prev = debt[step];
        let s_prev = surplus[step];
        let s = rule.phi * s_prev + rule.rho * b_prev + mu;
        let b = (1.0 + r) / (1.0 + g) * (b_prev - s);
        let d = match &economy.discount {
            Some(path) => path.at(step).unwrap(),
            None => (1.0 + g) / (1.0 + r),
        };
        cumulative_discount *= d;
        surplus.push(s);
        debt.push(b);
        discounted.push(b * cumulative_discount);
    }

    let mut result = DebtPathResult {
        debt,
        surplus,
        discounted_debt: discounted,
        verdict: Verdict::Inconclusive,
    };
    result.verdict = classify_sustainability(&result, config.tolerance);
    Ok(result)
}

/// Verdict from the discounted-debt tail: below tolerance and shrinking is
/// sustainable, bounded away from zero and nondecreasing is a Ponzi
/// violation, anything else is inconclusive.
pub fn classify_sustainability(result: &DebtPathResult, tolerance: f64) -> Verdict {
    let horizon = result.discounted_debt.len() - 1;
    let tail_len = (horizon as f64 * 0.1).ceil() as usize;
    if tail_len < 2 {
        return Verdict::Inconclusive;
    }
    let b0 = result.debt[0];
    let threshold = if b0 == 0.0 {
        tolerance
    } else {
        tolerance * b0.abs()
    };
    let tail: Vec<f64> = result.discounted_debt[result.discounted_debt.len() - tail_len..]
        .iter()
        .map(|v| v.abs())
        .collect();
    let slack = 1e-12 * (1.0 + b0.abs());
    let nonincreasing = tail.windows(2).all(|w| w[1] <= w[0] + slack);
    let nondecreasing = tail.windows(2).all(|w| w[1] + slack >= w[0]);
    if tail.iter().all(|v| *v < threshold) && nonincreasing {
        Verdict::Sustainable
    } else if tail.iter().all(|v| *v >= threshold) && nondecreasing {
        Verdict::PonziViolation
    } else {
        Verdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(phi: f64, rho: f64) -> FiscalRule {
        FiscalRule::new(phi, rho, Path::Constant(0.0)).unwrap()
    }

    #[test]
    fn long_run_response_paper_magnitudes() {
        let lr = long_run_response(0.358, 0.033).unwrap();
        assert!((10.0 * lr - 0.514).abs() < 0.005);
        let lr = long_run_response(0.323, 0.0182).unwrap();
        assert!((10.0 * lr - 0.269).abs() < 0.005);
        let lr = long_run_response(0.377, 0.0403).unwrap();
        assert!((10.0 * lr - 0.647).abs() < 0.005);
    }

    #[test]
    fn long_run_response_identities() {
        assert_eq!(long_run_response(0.7, 0.0).unwrap(), 0.0);
        assert_eq!(long_run_response(0.0, 0.25).unwrap(), 0.25);
        assert!(matches!(
            long_run_response(1.0, 0.1),
            Err(Error::NonStationaryInertia(_))
        ));
    }

    #[test]
    fn decay_factor_values() {
        let d = ponzi_decay_factor(0.358, 0.033).unwrap();
        assert!((d - 0.9486).abs() < 5e-5);
        assert_eq!(ponzi_decay_factor(0.0, 0.0).unwrap(), 1.0);

        let a = assess_rule(0.5, 0.6).unwrap();
        assert!(a.decay_factor < 0.0);
        assert!(a.over_adjustment);
    }

    #[test]
    fn decay_is_one_minus_response_exactly() {
        for (phi, rho) in [(0.358, 0.033), (0.1, 0.02), (0.9, 0.05)] {
            let r = long_run_response(phi, rho).unwrap();
            let d = ponzi_decay_factor(phi, rho).unwrap();
            assert_eq!(d, 1.0 - r);
        }
    }

    #[test]
    fn rule_constructor_bounds_inertia() {
        assert!(FiscalRule::new(1.0, 0.1, Path::Constant(0.0)).is_err());
        assert!(FiscalRule::new(-0.1, 0.1, Path::Constant(0.0)).is_err());
        assert!(FiscalRule::new(0.0, 0.1, Path::Constant(0.0)).is_ok());
    }

    #[test]
    fn flat_rates_with_pure_debt_response_decay_geometrically() {
        let economy = EconomyPath::constant(0.02, 0.02);
        let res = simulate_debt_path(&rule(0.0, 0.05), &economy, 100.0, 0.0, 50).unwrap();
        assert!((res.debt[1] - 95.0).abs() < 1e-12);
        assert!((res.debt[2] - 90.25).abs() < 1e-12);
        for t in 0..=50 {
            let closed = 0.95f64.powi(t as i32) * 100.0;
            assert!(
                (res.debt[t] - closed).abs() < 1e-9 * closed.max(1.0),
                "t={t}: {} vs {}",
                res.debt[t],
                closed
            );
        }
        // Matches the decay factor: 1 - rho/(1-0) = 0.95.
        assert_eq!(ponzi_decay_factor(0.0, 0.05).unwrap(), 0.95);
    }

    #[test]
    fn rollover_benchmark_grows_at_the_rate_gap() {
        let economy = EconomyPath::constant(0.04, 0.02);
        let res = simulate_debt_path(&rule(0.0, 0.0), &economy, 80.0, 0.0, 30).unwrap();
        let gross = 1.04 / 1.02;
        for t in 1..=30 {
            assert!((res.debt[t] / res.debt[t - 1] - gross).abs() < 1e-12);
        }
        // Natural discounting leaves discounted debt at its initial level.
        for t in 0..=30 {
            assert!((res.discounted_debt[t] - 80.0).abs() < 1e-9);
        }
        assert_eq!(res.verdict, Verdict::PonziViolation);
    }

    #[test]
    fn estimated_rule_keeps_debt_sustainable() {
        let economy = EconomyPath::constant(0.03, 0.02);
        let res = simulate_debt_path(&rule(0.358, 0.033), &economy, 74.8, 0.0, 500).unwrap();
        assert_eq!(res.verdict, Verdict::Sustainable);
        let last = res.discounted_debt.last().unwrap().abs();
        assert!(last < 1e-6 * 74.8, "discounted tail {last}");
    }

    #[test]
    fn recursion_identity_holds_everywhere() {
        let economy = EconomyPath {
            interest: Path::Series((0..40).map(|t| 0.02 + 0.001 * t as f64).collect()),
            growth: Path::Series((0..40).map(|t| 0.015 + 0.0005 * t as f64).collect()),
            discount: None,
        };
        let rule = FiscalRule::new(0.4, 0.04, Path::Constant(0.3)).unwrap();
        let res = simulate_debt_path(&rule, &economy, 60.0, 1.0, 40).unwrap();
        for t in 1..=40 {
            let r = 0.02 + 0.001 * (t - 1) as f64;
            let g = 0.015 + 0.0005 * (t - 1) as f64;
            // Rearranged law of motion.
            let lhs = res.debt[t] * (1.0 + g) / (1.0 + r) + res.surplus[t];
            assert!((lhs - res.debt[t - 1]).abs() < 1e-12 * (1.0 + res.debt[t - 1].abs()));
            // Surplus rule.
            let s = 0.4 * res.surplus[t - 1] + 0.04 * res.debt[t - 1] + 0.3;
            assert!((s - res.surplus[t]).abs() < 1e-12 * (1.0 + s.abs()));
        }
    }

    #[test]
    fn explicit_discount_series_is_used() {
        let economy = EconomyPath {
            interest: Path::Constant(0.05),
            growth: Path::Constant(0.0),
            discount: Some(Path::Constant(0.5)),
        };
        let res = simulate_debt_path(&rule(0.0, 0.0), &economy, 10.0, 0.0, 5).unwrap();
        for t in 1..=5 {
            let expected = res.debt[t] * 0.5f64.powi(t as i32);
            assert!((res.discounted_debt[t] - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn verdict_monotone_in_debt_response() {
        let economy = EconomyPath::constant(0.03, 0.02);
        let mut previous_sustainable = false;
        for rho_milli in (0..=60).map(|k| k as f64 * 0.001) {
            let res =
                simulate_debt_path(&rule(0.3, rho_milli), &economy, 74.8, 0.0, 400).unwrap();
            let sustainable = res.verdict == Verdict::Sustainable;
            if previous_sustainable {
                assert!(
                    sustainable,
                    "raising the debt response from a sustainable rule broke sustainability (rho={rho_milli})"
                );
            }
            previous_sustainable = previous_sustainable || sustainable;
        }
        assert!(previous_sustainable, "no rule in the sweep was sustainable");
    }

    #[test]
    fn discounted_path_matches_decay_approximation() {
        // Inertia-free case: the discounted level is (1-rho)^n b0 against
        // the approximation (1-rho)^{n+1} b0, a relative gap of exactly rho.
        let economy = EconomyPath::constant(0.02, 0.02);
        for rho in [0.01, 0.033, 0.05] {
            let n = 300;
            let res = simulate_debt_path(&rule(0.0, rho), &economy, 100.0, 0.0, n).unwrap();
            let decay = ponzi_decay_factor(0.0, rho).unwrap();
            let approx = decay.powi(n as i32 + 1) * 100.0;
            let actual = res.discounted_debt[n];
            let rel = (actual - approx).abs() / actual.abs();
            assert!(rel < 0.05, "rho={rho}: relative gap {rel}");
        }
        // Mild inertia stays within the documented band at long horizons.
        let res = simulate_debt_path(&rule(0.1, 0.01), &economy, 100.0, 0.0, 200).unwrap();
        let decay = ponzi_decay_factor(0.1, 0.01).unwrap();
        let approx = decay.powi(201) * 100.0;
        let rel = (res.discounted_debt[200] - approx).abs() / res.discounted_debt[200].abs();
        assert!(rel < 0.05, "relative gap {rel}");
    }

    #[test]
    fn short_horizon_is_inconclusive() {
        let economy = EconomyPath::constant(0.03, 0.02);
        let res = simulate_debt_path(&rule(0.358, 0.033), &economy, 74.8, 0.0, 3).unwrap();
        assert_eq!(res.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn degenerate_inputs_error() {
        let economy = EconomyPath::constant(0.03, 0.02);
        assert!(matches!(
            simulate_debt_path(&rule(0.3, 0.03), &economy, 50.0, 0.0, 0),
            Err(Error::HorizonZero)
        ));
        let bad = EconomyPath::constant(-1.5, 0.02);
        assert!(matches!(
            simulate_debt_path(&rule(0.3, 0.03), &bad, 50.0, 0.0, 5),
            Err(Error::NonPositiveGrossRate { .. })
        ));
        let short = EconomyPath {
            interest: Path::Series(vec![0.02; 3]),
            growth: Path::Constant(0.01),
            discount: None,
        };
        assert!(simulate_debt_path(&rule(0.3, 0.03), &short, 50.0, 0.0, 5).is_err());
    }
}
