//! The autonomous model: parameters, switching terms, regions, equilibria.

mod calibration;
mod dynamics;
mod equilibria;
mod params;
mod region;

pub use calibration::{calibrate_c1, calibrate_c2};
pub use dynamics::{c_star, policing, rhs, rhs_with_switches, visibility};
pub use equilibria::{equilibria, predict_limit, Equilibrium, EquilibriumSet, Interval, Stability};
pub use params::{Fraction, ModelParams};
pub use region::{classify_region, Boundaries, Region, RegionLabel};

pub(crate) use params::{check_rate, check_unit_open};

/// `ln 10`: growth to 90% of the population in one month with no policing.
pub const C1_CALIBRATED: f64 = std::f64::consts::LN_10;

/// `30 ln 10`: 90% of protesters cleared in one day (1/30 month) under full
/// policing and no recruitment.
pub const C2_CALIBRATED: f64 = 30.0 * std::f64::consts::LN_10;

/// Default tolerance for region classification.
pub const DEFAULT_TOLERANCE: f64 = 1e-12;
