//! Heterogeneous incident rates and exact tests for shift/incident data.
//!
//! * [`numerics`]: log-gamma, regularized incomplete gamma, log binomials.
//! * [`distributions`]: Poisson, negative binomial and hypergeometric tails.
//! * [`mixture_model`]: the Gamma-mixed Poisson count model.
//! * [`exact_tests`]: one-sided exact tests and the relocation sweep.
//! * [`case_data`]: built-in ledger, ward tables and scenarios.
//! * [`simulation`]: seeded Monte Carlo cross-checks.
//! * [`report`]: recomputation of all reference values.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod case_data;
pub mod distributions;
mod error;
pub mod mixture_model;
pub mod numerics;
mod quadrature;
pub mod reference;
pub mod report;
pub mod simulation;

pub use error::{Error, Result};
