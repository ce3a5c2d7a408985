//! Parameter-plane sweeps, escape shocks, rising-`c*` studies and presets.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::model::{
    classify_region, equilibria, Equilibrium, Fraction, ModelParams, RegionLabel, C1_CALIBRATED,
    C2_CALIBRATED, DEFAULT_TOLERANCE,
};
use crate::{Error, Result};

/// `count` cell centres spread evenly over `(start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl AxisRange {
    pub fn new(start: f64, end: f64, count: usize) -> Result<Self> {
        let range = AxisRange { start, end, count };
        range.validate("axis")?;
        Ok(range)
    }

    fn validate(&self, name: &str) -> Result<()> {
        for (what, v) in [("start", self.start), ("end", self.end)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::invalid(
                    format!("{name}.{what}"),
                    "value must lie in (0,1)",
                    v,
                ));
            }
        }
        if self.start >= self.end {
            return Err(Error::Validation(format!(
                "{name}: start must be below end"
            )));
        }
        if self.count < 2 {
            return Err(Error::invalid(
                format!("{name}.count"),
                "resolution must be at least 2",
                self.count as f64,
            ));
        }
        Ok(())
    }

    pub fn centers(&self) -> Vec<f64> {
        let width = (self.end - self.start) / self.count as f64;
        (0..self.count)
            .map(|i| self.start + (i as f64 + 0.5) * width)
            .collect()
    }
}

/// Parses `start:end:count`.
impl FromStr for AxisRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, end, count] = parts.as_slice() else {
            return Err(Error::Validation(format!(
                "range {s:?} is not of the form start:end:count"
            )));
        };
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::Validation(format!("range {s:?}: {x:?} is not a number")))
        };
        let count = count.trim().parse::<usize>().map_err(|_| {
            Error::Validation(format!("range {s:?}: {count:?} is not a cell count"))
        })?;
        AxisRange::new(num(start)?, num(end)?, count)
    }
}

/// Region labels over an `alpha × beta` grid of cell centres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionGrid {
    pub alpha_axis: Vec<f64>,
    pub beta_axis: Vec<f64>,
    /// Row-major by alpha: `cells[i * beta_axis.len() + j]` is `(alpha_i, beta_j)`.
    pub cells: Vec<RegionLabel>,
    pub c1: f64,
    pub c2: f64,
}

impl RegionGrid {
    pub fn get(&self, i: usize, j: usize) -> RegionLabel {
        self.cells[i * self.beta_axis.len() + j]
    }

    /// `(alpha, beta, label)` for every cell in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64, RegionLabel)> + '_ {
        self.alpha_axis.iter().enumerate().flat_map(move |(i, &a)| {
            self.beta_axis
                .iter()
                .enumerate()
                .map(move |(j, &b)| (a, b, self.get(i, j)))
        })
    }

    pub fn count(&self, label: RegionLabel) -> usize {
        self.cells.iter().filter(|&&l| l == label).count()
    }
}

/// Classifies every cell of the grid. Cells are evaluated in parallel; the
/// result does not depend on scheduling.
pub fn sweep_regions(alpha: AxisRange, beta: AxisRange, c1: f64, c2: f64) -> Result<RegionGrid> {
    alpha.validate("alpha")?;
    beta.validate("beta")?;
    // validates the rates
    ModelParams::new(0.5, 0.5, c1, c2)?;

    let alpha_axis = alpha.centers();
    let beta_axis = beta.centers();
    let nb = beta_axis.len();
    let cells = (0..alpha_axis.len() * nb)
        .into_par_iter()
        .map(|k| {
            let params = ModelParams::new(alpha_axis[k / nb], beta_axis[k % nb], c1, c2)
                .expect("axis centres lie in (0,1)");
            classify_region(&params, DEFAULT_TOLERANCE).label
        })
        .collect();

    Ok(RegionGrid {
        alpha_axis,
        beta_axis,
        cells,
        c1,
        c2,
    })
}

/// Whether a shock of exactly `minimal_shock` is enough.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Attainment {
    /// The shock must be strictly larger than `minimal_shock`.
    Open,
    /// A shock equal to `minimal_shock` suffices.
    Closed,
}

impl fmt::Display for Attainment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Attainment::Open => "open",
            Attainment::Closed => "closed",
        })
    }
}

/// Smallest shock that carries the state out of the basin of a stable
/// equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EscapeReport {
    pub from_equilibrium: Fraction,
    pub minimal_shock: f64,
    pub attainment: Attainment,
    /// Where a just-sufficient shock leads.
    pub destination: Equilibrium,
}

impl EscapeReport {
    /// Whether a shock of size `delta_r` escapes.
    pub fn escapes(&self, delta_r: f64) -> bool {
        match self.attainment {
            Attainment::Open => delta_r > self.minimal_shock,
            Attainment::Closed => delta_r >= self.minimal_shock,
        }
    }
}

/// Escape shock from `from`, which must be `0` or (in region IIIe) `c*`.
pub fn escape_shock(params: &ModelParams, from: Fraction) -> Result<EscapeReport> {
    let set = equilibria(params, DEFAULT_TOLERANCE);
    let label = set.region.label;
    let cs = params.c_star();
    let a = params.visibility_threshold();
    let b = params.beta();
    let from_zero = from.get() == 0.0;
    let from_cstar = label == RegionLabel::IIIe && (from.get() - cs).abs() <= 1e-9;

    let stable_at = |x: f64| {
        *set.stable()
            .find(|e| e.value.get() == x)
            .expect("requested equilibrium is present")
    };

    let (minimal_shock, attainment, destination) = match (label, from_zero, from_cstar) {
        (RegionLabel::III0, true, _) => (b, Attainment::Closed, stable_at(1.0)),
        (RegionLabel::IIIe, true, _) => (a, Attainment::Open, stable_at(cs)),
        (RegionLabel::IIIe, _, true) => (b - cs, Attainment::Closed, stable_at(1.0)),
        (RegionLabel::III1, true, _) => (a, Attainment::Open, stable_at(1.0)),
        (RegionLabel::II, true, _) => (b, Attainment::Closed, Equilibrium::continuum_point(b)),
        (RegionLabel::I, true, _) => (b, Attainment::Open, stable_at(1.0)),
        _ => {
            return Err(Error::Validation(format!(
                "r = {} is not an escapable stable equilibrium in region {label} (allowed: 0{})",
                from,
                if label == RegionLabel::IIIe {
                    format!(" or c* = {cs}")
                } else {
                    String::new()
                }
            )))
        }
    };

    Ok(EscapeReport {
        from_equilibrium: if from_cstar {
            Fraction::clamped(cs)
        } else {
            Fraction::ZERO
        },
        minimal_shock,
        attainment,
        destination,
    })
}

/// One row of a rising-enthusiasm study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CstarStudyRow {
    pub c1: f64,
    pub c_star: f64,
    pub region: RegionLabel,
    /// Escape from the civil-unrest equilibrium, present in region IIIe only.
    pub escape_from_cstar: Option<EscapeReport>,
}

/// Re-classifies `base` for each enthusiasm rate in `c1_values`.
pub fn rising_cstar_study(base: &ModelParams, c1_values: &[f64]) -> Result<Vec<CstarStudyRow>> {
    if c1_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Validation(
            "c1 values must be strictly ascending".into(),
        ));
    }
    c1_values
        .iter()
        .map(|&c1| {
            let params = base.with_c1(c1)?;
            let region = classify_region(&params, DEFAULT_TOLERANCE).label;
            let c_star = params.c_star();
            let escape_from_cstar = if region == RegionLabel::IIIe {
                Some(escape_shock(&params, Fraction::clamped(c_star))?)
            } else {
                None
            };
            Ok(CstarStudyRow {
                c1,
                c_star,
                region,
                escape_from_cstar,
            })
        })
        .collect()
}

/// A named, illustrative parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub params: ModelParams,
    pub region: RegionLabel,
}

/// Parameter sets placing well-known situations in their regions.
///
/// Only the region memberships are meaningful; the numbers are chosen to
/// land comfortably inside each region.
pub fn presets() -> Vec<Preset> {
    let p = |a, b, c1, c2| ModelParams::new(a, b, c1, c2).expect("preset is valid");
    vec![
        Preset {
            name: "tunisia-pre-internet",
            description: "stable police state before social media: alpha 0.96, beta 0.06",
            params: p(0.96, 0.06, C1_CALIBRATED, C2_CALIBRATED),
            region: RegionLabel::III0,
        },
        Preset {
            name: "iran",
            description:
                "large policing capacity and efficiency keep the regime a stable police state",
            params: p(0.9, 0.3, C1_CALIBRATED, 2.0 * C2_CALIBRATED),
            region: RegionLabel::III0,
        },
        Preset {
            name: "china",
            description: "meta-stable police state with recurring small protests near c*",
            params: p(0.98, 0.1, C1_CALIBRATED, C2_CALIBRATED),
            region: RegionLabel::IIIe,
        },
        Preset {
            name: "somalia",
            description: "failed state: weak media and weak government",
            params: p(0.2, 0.1, C1_CALIBRATED, C2_CALIBRATED),
            region: RegionLabel::II,
        },
    ]
}
