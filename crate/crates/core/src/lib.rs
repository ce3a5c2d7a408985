//! Dynamics of a one-compartment protest population under visibility and
//! policing switches.
//!
//! The state is the fraction `r ∈ [0, 1]` of the population that is actively
//! protesting. It evolves according to
//!
//! ```text
//! dr/dt = c1 · v(r; α) · (1 − r) − c2 · p(r; β) · r
//! ```
//!
//! where `v` switches growth on once the protest is larger than the
//! visibility threshold `1 − α`, and `p` switches policing off once the
//! protest outgrows the regime's policing capacity `β`.
//!
//! The crate is organised as:
//!
//! - [`model`]: parameters, the switching terms, the right-hand side, region
//!   classification, equilibria with basins, and rate calibration.
//! - [`schedule`]: piecewise-linear parameter tracks and instantaneous shocks.
//! - [`integrator`]: fixed-step RK4 with bisection-localised threshold
//!   crossings, plus the closed-form segment solution.
//! - [`analysis`]: parameter-plane sweeps, escape shocks, rising-`c*` studies
//!   and illustrative presets.
//! - [`scenario`]: the JSON scenario format, built-in scenarios, and CSV/SVG
//!   output.
//!
//! ```
//! use revdyn::model::{classify_region, ModelParams, RegionLabel, DEFAULT_TOLERANCE};
//!
//! let params = ModelParams::new(0.98, 0.05, revdyn::model::C1_CALIBRATED, revdyn::model::C2_CALIBRATED)?;
//! let region = classify_region(&params, DEFAULT_TOLERANCE);
//! assert_eq!(region.label, RegionLabel::IIIe);
//! # Ok::<(), revdyn::Error>(())
//! ```

pub mod analysis;
mod error;
pub mod integrator;
pub mod model;
pub mod scenario;
pub mod schedule;

pub use error::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;
