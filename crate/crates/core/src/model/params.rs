use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A protest fraction, always in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize)]
#[serde(transparent)]
pub struct Fraction(f64);

impl Fraction {
    pub const ZERO: Fraction = Fraction(0.0);
    pub const ONE: Fraction = Fraction(1.0);

    /// Rejects anything outside `[0, 1]`, including NaN.
    pub fn new(r: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&r) {
            Ok(Fraction(r))
        } else {
            Err(Error::invalid("r", "fraction must lie in [0,1]", r))
        }
    }

    /// Saturates into `[0, 1]`. NaN maps to 0.
    pub fn clamped(r: f64) -> Self {
        if r.is_nan() {
            Fraction(0.0)
        } else {
            Fraction(r.clamp(0.0, 1.0))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Fraction {
    type Error = Error;

    fn try_from(r: f64) -> Result<Self> {
        Fraction::new(r)
    }
}

impl From<Fraction> for f64 {
    fn from(r: Fraction) -> f64 {
        r.0
    }
}

impl<'de> Deserialize<'de> for Fraction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = f64::deserialize(d)?;
        Fraction::new(r).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// The four model parameters.
///
/// * `alpha`: visibility. Growth is switched on once `r > 1 - alpha`.
/// * `beta`: policing capacity. Policing is switched on while `r < beta`.
/// * `c1`: enthusiasm rate, per month.
/// * `c2`: policing efficiency rate, per month.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct ModelParams {
    alpha: f64,
    beta: f64,
    c1: f64,
    c2: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    alpha: f64,
    beta: f64,
    c1: f64,
    c2: f64,
}

impl TryFrom<RawParams> for ModelParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        ModelParams::new(raw.alpha, raw.beta, raw.c1, raw.c2)
    }
}

pub(crate) fn check_unit_open(field: &str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        let constraint = match field {
            "alpha" => "alpha must lie in (0,1)",
            "beta" => "beta must lie in (0,1)",
            _ => "value must lie in (0,1)",
        };
        Err(Error::invalid(field, constraint, value))
    }
}

pub(crate) fn check_rate(field: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        let constraint = match field {
            "c1" => "c1 must be a finite positive rate",
            "c2" => "c2 must be a finite positive rate",
            _ => "rate must be finite and positive",
        };
        Err(Error::invalid(field, constraint, value))
    }
}

impl ModelParams {
    /// Validates and builds a parameter set. The endpoints 0 and 1 are
    /// rejected for `alpha` and `beta`.
    pub fn new(alpha: f64, beta: f64, c1: f64, c2: f64) -> Result<Self> {
        check_unit_open("alpha", alpha)?;
        check_unit_open("beta", beta)?;
        check_rate("c1", c1)?;
        check_rate("c2", c2)?;
        Ok(ModelParams {
            alpha,
            beta,
            c1,
            c2,
        })
    }

    /// `alpha` and `beta` with the calibrated rates `c1 = ln 10`, `c2 = 30 ln 10`.
    pub fn calibrated(alpha: f64, beta: f64) -> Result<Self> {
        Self::new(alpha, beta, super::C1_CALIBRATED, super::C2_CALIBRATED)
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    #[inline]
    pub fn c1(&self) -> f64 {
        self.c1
    }

    #[inline]
    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// The visibility threshold `1 - alpha`.
    #[inline]
    pub fn visibility_threshold(&self) -> f64 {
        1.0 - self.alpha
    }

    /// `c1 / (c1 + c2)`.
    #[inline]
    pub fn c_star(&self) -> f64 {
        super::c_star(self.c1, self.c2)
    }

    pub fn with_c1(&self, c1: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, c1, self.c2)
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={} beta={} c1={} c2={}",
            self.alpha, self.beta, self.c1, self.c2
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_closed_endpoints() {
        assert!(ModelParams::new(0.0, 0.5, 1.0, 1.0).is_err());
        assert!(ModelParams::new(1.0, 0.5, 1.0, 1.0).is_err());
        assert!(ModelParams::new(0.5, 0.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(0.5, 1.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new(0.5, 0.5, 0.0, 1.0).is_err());
        assert!(ModelParams::new(0.5, 0.5, 1.0, -2.0).is_err());
        assert!(ModelParams::new(f64::NAN, 0.5, 1.0, 1.0).is_err());
        assert!(ModelParams::new(0.5, 0.5, f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn beta_error_names_the_constraint() {
        let err = ModelParams::new(0.5, 1.5, 1.0, 1.0).unwrap_err();
        assert!(err.to_string().contains("beta must lie in (0,1)"), "{err}");
    }

    #[test]
    fn fraction_bounds() {
        assert!(Fraction::new(-1e-12).is_err());
        assert!(Fraction::new(1.0 + 1e-12).is_err());
        assert!(Fraction::new(f64::NAN).is_err());
        assert_eq!(Fraction::clamped(1.3).get(), 1.0);
        assert_eq!(Fraction::clamped(-0.2).get(), 0.0);
        assert_eq!(Fraction::new(0.25).unwrap().get(), 0.25);
    }

    #[test]
    fn deserialize_validates() {
        let ok: ModelParams =
            serde_json::from_str(r#"{"alpha":0.9,"beta":0.2,"c1":1.0,"c2":2.0}"#).unwrap();
        assert_eq!(ok.beta(), 0.2);
        let bad =
            serde_json::from_str::<ModelParams>(r#"{"alpha":0.9,"beta":1.2,"c1":1.0,"c2":2.0}"#);
        assert!(bad
            .unwrap_err()
            .to_string()
            .contains("beta must lie in (0,1)"));
        let unknown = serde_json::from_str::<ModelParams>(
            r#"{"alpha":0.9,"beta":0.2,"c1":1.0,"c2":2.0,"gamma":1}"#,
        );
        assert!(unknown.unwrap_err().to_string().contains("gamma"));
    }
}
