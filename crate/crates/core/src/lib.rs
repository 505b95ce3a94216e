//! Numerical toolkit for historical daily equity panels:
//!
//! - capitalization-weighted index construction (price, ex-rights adjusted,
//!   and total-return variants) with divisor-adjusted corporate actions,
//! - a six-step GLS estimator for the market model with AR(p) residuals and
//!   stochastic volatility, and event studies (AR / CAR / SCAR) on top of it,
//! - a simulator for the four-portfolio trading-environment model, with
//!   closed-form event-time decompositions and proposition sweeps used to
//!   validate the estimation pipeline on synthetic panels.

pub mod calendar;
pub mod capm;
pub mod error;
pub mod event;
pub mod group;
pub mod index;
mod linalg;
pub mod model;
pub mod panel;
pub mod report;
pub mod seed;
pub mod stats;
pub mod sv;

pub use calendar::TradingCalendar;
pub use error::{Error, Result};
pub use group::Group;
