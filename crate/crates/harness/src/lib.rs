//! Experiment harness around the curve shortening flow simulator:
//! outcome classification, critical-parameter bisection, late-time
//! analysis, trajectory persistence and SVG figures.

// negated comparisons like `!(lo < hi)` also reject NaN inputs
#![allow(clippy::manual_is_multiple_of, clippy::neg_cmp_op_on_partial_ord)]

pub mod analyze;
pub mod bisect;
pub mod classify;
pub mod config;
pub mod export;
pub mod plot;
pub mod report;

use thiserror::Error;

/// Errors from configuration, persistence and analysis.
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] csf_core::Error),
    #[error("invalid bisection bracket: {0}")]
    BracketInvalid(String),
    #[error("analysis error: {0}")]
    Analysis(String),
}
