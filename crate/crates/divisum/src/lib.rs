//! Numerical verification of divisor-sum, Lambert-series, theta-function and
//! Mellin-transform identities.
//!
//! The crate is organised around five layers:
//!
//! - [`numtheory`]: exact integer kernels (sieves, divisors, weighted Moebius
//!   inversion, gcd-sums, periodic characters).
//! - [`seriescore`]: truncation-controlled evaluation of Lambert-type series,
//!   power series and exponent-weighted infinite products, plus the paired
//!   left/right evaluators of the product/series transforms built on them.
//! - [`specialfn`]: Gamma, Riemann/Hurwitz zeta, periodic L-series, Jacobi
//!   theta functions, the eta-type product and the Rogers-Ramanujan
//!   continued fraction.
//! - [`mellin`]: numerical Mellin transform on (0, inf) with certified
//!   splitting, plus closed-form right-hand sides.
//! - [`identities`]: the verification catalog mapping each identity to
//!   structurally independent LHS/RHS evaluators and pass/fail reports.
//!
//! Every series or product evaluation carries a certified tail bound; results
//! are returned together with the truncation depth used and a saturation flag
//! when the requested tolerance could not be met within the term budget.

pub mod config;
pub(crate) mod consts;
pub mod error;
pub mod identities;
pub mod mellin;
pub mod numtheory;
pub mod seriescore;
pub mod specialfn;

pub use config::{OutputFormat, Precision, RunConfig};
pub use error::{Error, Result};
