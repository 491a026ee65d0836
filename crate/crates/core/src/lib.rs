//! Offline anti-swing trajectory planning for double-pendulum tower cranes.
//!
//! Trolley and slew moves are planned in the flat-output space of the
//! linearized hook-payload dynamics: the flat outputs are fixed-coefficient
//! polynomials in normalized time, so the only free decision is the operating
//! time. The resulting time-vs-effort problems are solved with GDE3, either
//! randomly initialized or seeded with collective opposition (CO-GDE3), and a
//! single operating point is picked by average fuzzy membership.
//!
//! Module map:
//!
//! - [`model`]: crane constants and the flatness maps from flat-output
//!   derivatives to actuated and swing states.
//! - [`trajectory`]: polynomial flat-output trajectories and their analytic
//!   derivatives.
//! - [`motop`]: the trolley and slew bi-objective problems.
//! - [`moea`]: opposition operators, population initializers and GDE3.
//! - [`metrics`]: hyperarea, spacing, convergence speed and run statistics.
//! - [`decision`]: average fuzzy membership selection.
//! - [`oracle`]: forward simulation and geometric checks used for validation.
//! - [`problems`]: name-to-problem registry and a toy benchmark.
//! - [`config`], [`campaign`], [`report`]: the batch front-end behind the CLI.

pub mod campaign;
pub mod config;
pub mod decision;
pub mod error;
pub mod metrics;
pub mod model;
pub mod moea;
pub mod motop;
pub mod oracle;
pub mod problems;
pub mod report;
pub mod trajectory;

pub use error::{Error, Result};
