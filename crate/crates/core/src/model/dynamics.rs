use super::ModelParams;

/// Visibility switch: 1 iff `r > 1 - alpha`. Zero on the threshold itself.
#[inline]
pub fn visibility(r: f64, alpha: f64) -> u8 {
    u8::from(r > 1.0 - alpha)
}

/// Policing switch: 1 iff `r < beta`. Zero on the threshold itself.
#[inline]
pub fn policing(r: f64, beta: f64) -> u8 {
    u8::from(r < beta)
}

/// Right-hand side with the switches supplied by the caller.
#[inline]
pub fn rhs_with_switches(r: f64, params: &ModelParams, v: u8, p: u8) -> f64 {
    params.c1() * f64::from(v) * (1.0 - r) - params.c2() * f64::from(p) * r
}

/// `dr/dt` in 1/month.
#[inline]
pub fn rhs(r: f64, params: &ModelParams) -> f64 {
    rhs_with_switches(
        r,
        params,
        visibility(r, params.alpha()),
        policing(r, params.beta()),
    )
}

/// The interior equilibrium candidate `c1 / (c1 + c2)`.
#[inline]
pub fn c_star(c1: f64, c2: f64) -> f64 {
    c1 / (c1 + c2)
}

#[cfg(test)]
mod tests {
    // Worked examples quote the rates rounded, e.g. c1 = 2.302585.
    #![allow(clippy::approx_constant)]

    use super::*;
    use crate::model::{C1_CALIBRATED, C2_CALIBRATED};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn visibility_is_strict() {
        assert_eq!(visibility(0.05, 0.96), 1);
        // 1 - 0.96 is not exactly 0.04 in binary, so probe the computed threshold.
        assert_eq!(visibility(1.0 - 0.96, 0.96), 0);
        assert_eq!(visibility(0.0, 0.999), 0);
    }

    #[test]
    fn policing_is_strict() {
        assert_eq!(policing(0.05, 0.06), 1);
        assert_eq!(policing(0.06, 0.06), 0);
        assert_eq!(policing(1.0, 0.999), 0);
    }

    #[test]
    fn rhs_examples() {
        let p = ModelParams::new(0.96, 0.06, 2.302585, 69.0776).unwrap();
        assert_eq!(rhs(0.0, &p), 0.0);
        assert_eq!(rhs(1.0, &p), 0.0);
        assert_abs_diff_eq!(
            rhs(0.05, &p),
            2.302585 * 0.95 - 69.0776 * 0.05,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(rhs(0.05, &p), -1.26643, epsilon = 1e-5);
        assert_abs_diff_eq!(rhs(0.07, &p), 2.14140, epsilon = 1e-5);
    }

    #[test]
    fn c_star_examples() {
        assert_abs_diff_eq!(
            c_star(C1_CALIBRATED, C2_CALIBRATED),
            1.0 / 31.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(c_star(3.26, 69.0776), 0.04506, epsilon = 1e-4);
        assert_eq!(c_star(2.5, 2.5), 0.5);
    }

    proptest! {
        #[test]
        fn endpoints_are_fixed(a in 0.001f64..0.999, b in 0.001f64..0.999,
                               c1 in 0.01f64..100.0, c2 in 0.01f64..100.0) {
            let p = ModelParams::new(a, b, c1, c2).unwrap();
            prop_assert_eq!(rhs(0.0, &p), 0.0);
            prop_assert_eq!(rhs(1.0, &p), 0.0);
        }

        #[test]
        fn switches_are_monotone(a in 0.001f64..0.999, b in 0.001f64..0.999,
                                 r1 in 0.0f64..1.0, r2 in 0.0f64..1.0) {
            let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
            prop_assert!(visibility(lo, a) <= visibility(hi, a));
            prop_assert!(policing(lo, b) >= policing(hi, b));
        }

        #[test]
        fn c_star_is_scale_invariant(c1 in 1e-3f64..1e3, c2 in 1e-3f64..1e3, k in 1e-3f64..1e3) {
            let base = c_star(c1, c2);
            prop_assert!(base > 0.0 && base < 1.0);
            prop_assert!((c_star(k * c1, k * c2) - base).abs() <= 1e-14);
        }
    }
}
