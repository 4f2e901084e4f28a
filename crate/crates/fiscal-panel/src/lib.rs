//! Panel econometrics for fiscal policy analysis.
//!
//! The crate estimates heterogeneous fiscal reaction functions on balanced
//! cross-country panels and checks whether the estimated rules keep public
//! debt on a sustainable path. It provides:
//!
//! - [`panel`] — balanced panel container, delimited-text ingestion,
//!   median-debt group splits, cross-sectional averages;
//! - [`hp`] — Hodrick–Prescott trend extraction via a pentadiagonal
//!   Cholesky solve, and percent-gap construction;
//! - [`diagnostics`] — cross-sectional dependence tests (CD and its
//!   power-enhanced variant), CADF/CIPS panel unit-root tests, and an
//!   HAC-robust slope homogeneity test;
//! - [`dcce`] — dynamic common-correlated-effects mean-group estimation
//!   with optional half-panel jackknife bias correction;
//! - [`sustainability`] — debt law-of-motion simulation under a surplus
//!   rule, discounted-debt diagnostics, and a no-Ponzi verdict;
//! - [`report`] / [`pipeline`] — deterministic table and figure-data
//!   emission, and the batch pipeline behind the `fiscal-panel` binary.
//!
//! Every entry point is deterministic given its inputs; simulation helpers
//! in [`synth`] take explicit seeds. Start with the runnable examples
//! (`cargo run --example dcce_estimate`, etc.) for end-to-end usage.

pub mod dcce;
pub mod diagnostics;
pub mod error;
pub mod hp;
pub mod ols;
pub mod panel;
pub mod pipeline;
pub mod report;
pub mod sustainability;
pub mod synth;

pub use error::{Error, Result};
pub use panel::{GroupSplit, PanelDataset, VariableSummary};
