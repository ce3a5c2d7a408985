use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::ModelParams;
use crate::Error;

/// Qualitative regime of a parameter set.
///
/// | label | condition | name |
/// |-------|-----------|------|
/// | `I`    | `α + β = 1` | measure-zero boundary |
/// | `II`   | `α + β < 1` | failed state |
/// | `III0` | `α + β > 1`, `c* < 1 − α` | stable police state |
/// | `IIIe` | `α + β > 1`, `1 − α ≤ c* ≤ β` | meta-stable police state |
/// | `III1` | `α + β > 1`, `c* > β` | unstable police state |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    I,
    II,
    III0,
    IIIe,
    III1,
}

impl RegionLabel {
    pub const ALL: [RegionLabel; 5] = [
        RegionLabel::I,
        RegionLabel::II,
        RegionLabel::III0,
        RegionLabel::IIIe,
        RegionLabel::III1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RegionLabel::I => "I",
            RegionLabel::II => "II",
            RegionLabel::III0 => "III0",
            RegionLabel::IIIe => "IIIe",
            RegionLabel::III1 => "III1",
        }
    }

    /// Descriptive name of the regime.
    pub fn regime(self) -> &'static str {
        match self {
            RegionLabel::I => "boundary (alpha + beta = 1)",
            RegionLabel::II => "failed state",
            RegionLabel::III0 => "stable police state",
            RegionLabel::IIIe => "meta-stable police state",
            RegionLabel::III1 => "unstable police state",
        }
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RegionLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        RegionLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::Validation(format!("unknown region label {s:?}")))
    }
}

/// Boundary tags set when a parameter set sits within tolerance of a
/// region boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Boundaries {
    pub alpha_plus_beta_eq_1: bool,
    pub cstar_eq_visibility_threshold: bool,
    pub cstar_eq_beta: bool,
}

impl Boundaries {
    pub fn any(&self) -> bool {
        self.alpha_plus_beta_eq_1 || self.cstar_eq_visibility_threshold || self.cstar_eq_beta
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub label: RegionLabel,
    pub on_boundary: Boundaries,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label.as_str())
    }
}

/// Classifies `params` into one of the five regions.
///
/// Ties `c* = 1 − α` and `c* = β` (within `tol`) resolve to `III0` and
/// `III1` with the matching boundary tag set.
pub fn classify_region(params: &ModelParams, tol: f64) -> Region {
    let excess = params.alpha() + params.beta() - 1.0;
    let mut on_boundary = Boundaries::default();

    if excess.abs() <= tol {
        on_boundary.alpha_plus_beta_eq_1 = true;
        return Region {
            label: RegionLabel::I,
            on_boundary,
        };
    }
    if excess < 0.0 {
        return Region {
            label: RegionLabel::II,
            on_boundary,
        };
    }

    let cs = params.c_star();
    let threshold = params.visibility_threshold();
    on_boundary.cstar_eq_visibility_threshold = (cs - threshold).abs() <= tol;
    on_boundary.cstar_eq_beta = (cs - params.beta()).abs() <= tol;

    let label = if on_boundary.cstar_eq_visibility_threshold || cs < threshold {
        RegionLabel::III0
    } else if on_boundary.cstar_eq_beta || cs > params.beta() {
        RegionLabel::III1
    } else {
        RegionLabel::IIIe
    };
    Region { label, on_boundary }
}
