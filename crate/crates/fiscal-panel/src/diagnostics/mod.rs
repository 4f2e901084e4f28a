//! Pre-estimation diagnostic battery: cross-sectional dependence tests,
//! panel unit-root tests, and slope homogeneity.

use std::collections::BTreeMap;

mod cd;
mod cips_cv;
mod slope;
mod unit_root;

pub use cd::{cd_plus_test, cd_test, CdPlusConfig};
pub use slope::slope_homogeneity_test;
pub use unit_root::{cadf_stat, cips_test, CadfConfig};

/// Outcome of one diagnostic test.
///
/// `p_value` is `None` where no reference distribution is tabulated for the
/// requested configuration. `detail` carries auxiliary values such as
/// per-unit statistics, keyed deterministically.
#[derive(Debug, Clone)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: Option<f64>,
    pub detail: BTreeMap<String, f64>,
}

impl TestResult {
    pub(crate) fn new(statistic: f64, p_value: Option<f64>) -> Self {
        TestResult {
            statistic,
            p_value,
            detail: BTreeMap::new(),
        }
    }

    pub(crate) fn with(mut self, key: &str, value: f64) -> Self {
        self.detail.insert(key.to_string(), value);
        self
    }

    /// True when the test rejects at significance level `alpha`.
    pub fn rejects_at(&self, alpha: f64) -> bool {
        matches!(self.p_value, Some(p) if p < alpha)
    }
}
