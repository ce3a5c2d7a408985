use crate::model::check_unit_open;
use crate::{Error, Result};

fn rate_from_fraction(field: &str, fraction: f64, horizon: f64) -> Result<f64> {
    check_unit_open(field, fraction)?;
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::invalid(
            "horizon",
            "horizon must be a finite positive time",
            horizon,
        ));
    }
    Ok(-(-fraction).ln_1p() / horizon)
}

/// Enthusiasm rate such that `dr/dt = c1 (1 - r)` started from `r = 0`
/// reaches `spread_fraction` after `horizon` months.
pub fn calibrate_c1(spread_fraction: f64, horizon: f64) -> Result<f64> {
    rate_from_fraction("spread_fraction", spread_fraction, horizon)
}

/// Policing rate such that `dr/dt = -c2 r` removes `clear_fraction` of the
/// protesters in `horizon` months.
pub fn calibrate_c2(clear_fraction: f64, horizon: f64) -> Result<f64> {
    rate_from_fraction("clear_fraction", clear_fraction, horizon)
}

#[cfg(test)]
mod tests {
    // Worked examples quote the rates rounded, e.g. c1 = 2.302585.
    #![allow(clippy::approx_constant)]

    use super::*;
    use crate::model::{C1_CALIBRATED, C2_CALIBRATED};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{LN_10, LN_2};

    #[test]
    fn reproduces_calibrated_constants() {
        assert_abs_diff_eq!(
            calibrate_c1(0.9, 1.0).unwrap(),
            C1_CALIBRATED,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            calibrate_c2(0.9, 1.0 / 30.0).unwrap(),
            C2_CALIBRATED,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(C1_CALIBRATED, 2.302585092994046, epsilon = 1e-15);
        assert_abs_diff_eq!(C2_CALIBRATED, 69.07755278982137, epsilon = 1e-13);
    }

    #[test]
    fn closed_forms() {
        assert_abs_diff_eq!(calibrate_c1(0.99, 2.0).unwrap(), LN_10, epsilon = 1e-12);
        assert_abs_diff_eq!(
            calibrate_c1(0.9, 2.0).unwrap(),
            LN_10 / 2.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(calibrate_c2(0.9, 1.0).unwrap(), LN_10, epsilon = 1e-12);
        assert_abs_diff_eq!(
            calibrate_c2(0.5, 1.0 / 30.0).unwrap(),
            30.0 * LN_2,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(30.0 * LN_2, 20.794, epsilon = 1e-3);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(calibrate_c1(0.0, 1.0).is_err());
        assert!(calibrate_c1(1.0, 1.0).is_err());
        assert!(calibrate_c2(0.5, 0.0).is_err());
        assert!(calibrate_c2(0.5, -1.0).is_err());
    }
}
