use std::fmt;

use serde::{Deserialize, Serialize};

use super::{classify_region, Fraction, ModelParams, Region, RegionLabel, DEFAULT_TOLERANCE};

/// An interval of `[0, 1]` with explicit endpoint closure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Interval {
    pub fn open(lo: f64, hi: f64) -> Self {
        Interval {
            lo,
            hi,
            lo_closed: false,
            hi_closed: false,
        }
    }

    pub fn open_closed(lo: f64, hi: f64) -> Self {
        Interval {
            hi_closed: true,
            ..Interval::open(lo, hi)
        }
    }

    pub fn closed_open(lo: f64, hi: f64) -> Self {
        Interval {
            lo_closed: true,
            ..Interval::open(lo, hi)
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed {
            x >= self.lo
        } else {
            x > self.lo
        };
        let below = if self.hi_closed {
            x <= self.hi
        } else {
            x < self.hi
        };
        above && below
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    /// True when no point lies in both intervals.
    pub fn is_disjoint(&self, other: &Interval) -> bool {
        let (left, right) = if self.lo <= other.lo {
            (self, other)
        } else {
            (other, self)
        };
        left.hi < right.lo || (left.hi == right.lo && !(left.hi_closed && right.lo_closed))
    }

    /// A point strictly inside the interval, if it has an interior.
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stability {
    AsymptoticallyStable,
    Unstable,
    /// A member of a continuum of neutrally stable rest points.
    ContinuumStable,
}

impl fmt::Display for Stability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stability::AsymptoticallyStable => "asymptotically stable",
            Stability::Unstable => "unstable",
            Stability::ContinuumStable => "continuum stable",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub value: Fraction,
    pub stability: Stability,
    /// Basin of attraction, excluding the equilibrium itself where it is an
    /// endpoint. `None` for unstable and continuum points.
    pub basin: Option<Interval>,
}

impl Equilibrium {
    fn stable(value: f64, basin: Interval) -> Self {
        Equilibrium {
            value: Fraction::clamped(value),
            stability: Stability::AsymptoticallyStable,
            basin: Some(basin),
        }
    }

    fn unstable(value: f64) -> Self {
        Equilibrium {
            value: Fraction::clamped(value),
            stability: Stability::Unstable,
            basin: None,
        }
    }

    pub(crate) fn continuum_point(value: f64) -> Self {
        Equilibrium {
            value: Fraction::clamped(value),
            stability: Stability::ContinuumStable,
            basin: None,
        }
    }

    pub fn is_stable(&self) -> bool {
        self.stability == Stability::AsymptoticallyStable
    }
}

/// All rest points of a constant-parameter model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSet {
    pub params: ModelParams,
    pub region: Region,
    /// Isolated equilibria in increasing order of value.
    pub equilibria: Vec<Equilibrium>,
    /// Region II only: the open interval `(β, 1 − α)` of neutrally stable
    /// rest points.
    pub continuum: Option<Interval>,
}

impl EquilibriumSet {
    pub fn stable(&self) -> impl Iterator<Item = &Equilibrium> {
        self.equilibria.iter().filter(|e| e.is_stable())
    }

    pub fn unstable(&self) -> impl Iterator<Item = &Equilibrium> {
        self.equilibria
            .iter()
            .filter(|e| e.stability == Stability::Unstable)
    }

    /// The stable equilibrium whose basin or value contains `r`.
    pub fn attractor_of(&self, r: f64) -> Option<&Equilibrium> {
        self.stable()
            .find(|e| e.value.get() == r || e.basin.is_some_and(|b| b.contains(r)))
    }
}

/// Equilibria and basins for constant `params`.
pub fn equilibria(params: &ModelParams, tol: f64) -> EquilibriumSet {
    let region = classify_region(params, tol);
    let a = params.visibility_threshold();
    let b = params.beta();
    let mut continuum = None;

    let equilibria = match region.label {
        RegionLabel::I => vec![
            Equilibrium::stable(0.0, Interval::open(0.0, b)),
            Equilibrium::unstable(b),
            Equilibrium::stable(1.0, Interval::open(b, 1.0)),
        ],
        RegionLabel::II => {
            continuum = Some(Interval::open(b, a));
            vec![
                Equilibrium::stable(0.0, Interval::open(0.0, b)),
                Equilibrium::unstable(b),
                Equilibrium::unstable(a),
                Equilibrium::stable(1.0, Interval::open(a, 1.0)),
            ]
        }
        RegionLabel::III0 => vec![
            Equilibrium::stable(0.0, Interval::open(0.0, b)),
            Equilibrium::stable(1.0, Interval::closed_open(b, 1.0)),
        ],
        RegionLabel::IIIe => vec![
            Equilibrium::stable(0.0, Interval::open_closed(0.0, a)),
            Equilibrium::stable(params.c_star(), Interval::open(a, b)),
            Equilibrium::stable(1.0, Interval::closed_open(b, 1.0)),
        ],
        RegionLabel::III1 => vec![
            Equilibrium::stable(0.0, Interval::open_closed(0.0, a)),
            Equilibrium::stable(1.0, Interval::open(a, 1.0)),
        ],
    };

    EquilibriumSet {
        params: *params,
        region,
        equilibria,
        continuum,
    }
}

/// The long-time limit of the trajectory started at `r0` under constant
/// `params`.
///
/// An initial state exactly on an unstable equilibrium stays there. A state
/// inside the region-II continuum is itself the limit.
pub fn predict_limit(r0: Fraction, params: &ModelParams) -> Equilibrium {
    let set = equilibria(params, DEFAULT_TOLERANCE);
    let r = r0.get();

    if let Some(e) = set.equilibria.iter().find(|e| e.value.get() == r) {
        return *e;
    }
    if let Some(e) = set.attractor_of(r) {
        return *e;
    }
    if set.continuum.is_some_and(|c| c.contains(r)) {
        return Equilibrium::continuum_point(r);
    }
    // Unreachable for a well-formed set: basins, unstable points and the
    // continuum cover [0, 1]. Fall back to the nearest stable point.
    *set.stable()
        .min_by(|x, y| {
            (x.value.get() - r)
                .abs()
                .total_cmp(&(y.value.get() - r).abs())
        })
        .expect("0 and 1 are always stable")
}
