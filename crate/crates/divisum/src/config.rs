//! Run-wide configuration shared by the library entry points and the CLI.

use serde::{Deserialize, Serialize};

/// Floating-point effort level.
///
/// `Standard` targets ~1e-15 relative accuracy with plain compensated
/// summation. `High` tightens every internal slack factor (inner tolerances,
/// term budgets, quadrature budgets) so that reported errors never exceed
/// the standard-mode ones; it does not change the result type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    Standard,
    High,
}

/// Output serialization format for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

/// Configuration for a verification run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    /// Target tolerance for pass/fail decisions.
    pub tol: f64,
    /// Hard cap on series/product terms per evaluation.
    pub max_terms: usize,
    pub precision: Precision,
    pub output: OutputFormat,
    /// Seed for randomized property suites.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tol: 1e-8,
            max_terms: 1_000_000,
            precision: Precision::Standard,
            output: OutputFormat::Text,
            seed: 0,
        }
    }
}

impl RunConfig {
    /// Inner tolerance handed to sub-evaluations so that stacked truncation
    /// errors stay well inside the reported tolerance.
    pub fn inner_tol(&self, tol: f64) -> f64 {
        match self.precision {
            Precision::Standard => tol / 10.0,
            Precision::High => tol / 100.0,
        }
    }

    /// Term budget, scaled up in high-precision mode.
    pub fn term_budget(&self) -> usize {
        match self.precision {
            Precision::Standard => self.max_terms,
            Precision::High => self.max_terms.saturating_mul(4),
        }
    }
}
