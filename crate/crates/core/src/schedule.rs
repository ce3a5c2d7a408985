//! Time-varying parameters and instantaneous shocks.
//!
//! A [`Track`] is a piecewise-linear function of time with constant
//! extrapolation past both ends. A [`Schedule`] bundles one track per model
//! parameter. Instantaneous parameter changes are expressed as short ramps,
//! so every schedule is continuous in time.

use serde::{Deserialize, Serialize};

use crate::model::{check_rate, check_unit_open, Fraction, ModelParams};
use crate::{Error, Result};

/// Piecewise-linear parameter track.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Track {
    breakpoints: Vec<(f64, f64)>,
}

impl Track {
    /// Breakpoint times must be finite and strictly increasing; at least one
    /// breakpoint is required.
    pub fn new(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::Validation(
                "track needs at least one breakpoint".into(),
            ));
        }
        for (i, &(t, v)) in breakpoints.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::invalid(
                    format!("breakpoint[{i}].time"),
                    "time must be finite",
                    t,
                ));
            }
            if !v.is_finite() {
                return Err(Error::invalid(
                    format!("breakpoint[{i}].value"),
                    "value must be finite",
                    v,
                ));
            }
        }
        if let Some(i) = breakpoints.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(Error::invalid(
                format!("breakpoint[{}].time", i + 1),
                "breakpoint times must be strictly increasing",
                breakpoints[i + 1].0,
            ));
        }
        Ok(Track { breakpoints })
    }

    pub fn constant(value: f64) -> Self {
        Track {
            breakpoints: vec![(0.0, value)],
        }
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.breakpoints
    }

    pub fn is_constant(&self) -> bool {
        self.breakpoints.windows(2).all(|w| w[0].1 == w[1].1)
    }

    /// Value at time `t`.
    pub fn eval(&self, t: f64) -> f64 {
        let bp = &self.breakpoints;
        let (t0, v0) = bp[0];
        if t <= t0 {
            return v0;
        }
        let (tn, vn) = bp[bp.len() - 1];
        if t >= tn {
            return vn;
        }
        // first breakpoint strictly after t
        let i = bp.partition_point(|&(ti, _)| ti <= t);
        let (ta, va) = bp[i - 1];
        let (tb, vb) = bp[i];
        if t == ta {
            return va;
        }
        let w = (t - ta) / (tb - ta);
        va + w * (vb - va)
    }

    fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.breakpoints.iter().map(|&(_, v)| v)
    }
}

impl<'de> Deserialize<'de> for Track {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let bp = Vec::<(f64, f64)>::deserialize(d)?;
        Track::new(bp).map_err(serde::de::Error::custom)
    }
}

/// One track per model parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub alpha: Track,
    pub beta: Track,
    pub c1: Track,
    pub c2: Track,
}

impl Schedule {
    /// Validates that every breakpoint value is admissible for its
    /// parameter. Linear interpolation keeps intermediate values admissible.
    pub fn new(alpha: Track, beta: Track, c1: Track, c2: Track) -> Result<Self> {
        for (name, track) in [("alpha", &alpha), ("beta", &beta)] {
            for (i, v) in track.values().enumerate() {
                check_unit_open(name, v).map_err(|e| prefix(e, name, i))?;
            }
        }
        for (name, track) in [("c1", &c1), ("c2", &c2)] {
            for (i, v) in track.values().enumerate() {
                check_rate(name, v).map_err(|e| prefix(e, name, i))?;
            }
        }
        Ok(Schedule {
            alpha,
            beta,
            c1,
            c2,
        })
    }

    pub fn constant(params: &ModelParams) -> Self {
        Schedule {
            alpha: Track::constant(params.alpha()),
            beta: Track::constant(params.beta()),
            c1: Track::constant(params.c1()),
            c2: Track::constant(params.c2()),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.tracks().iter().all(|t| t.is_constant())
    }

    pub fn tracks(&self) -> [&Track; 4] {
        [&self.alpha, &self.beta, &self.c1, &self.c2]
    }

    pub fn eval(&self, t: f64) -> ModelParams {
        ModelParams::new(
            self.alpha.eval(t),
            self.beta.eval(t),
            self.c1.eval(t),
            self.c2.eval(t),
        )
        .expect("schedule values are validated at construction")
    }

    /// Sorted, deduplicated breakpoint times of all four tracks.
    pub fn breakpoint_times(&self) -> Vec<f64> {
        let mut times: Vec<f64> = self
            .tracks()
            .iter()
            .flat_map(|t| t.breakpoints().iter().map(|&(t, _)| t))
            .collect();
        times.sort_by(f64::total_cmp);
        times.dedup();
        times
    }
}

fn prefix(err: Error, track: &str, index: usize) -> Error {
    match err {
        Error::Invalid {
            constraint, value, ..
        } => Error::Invalid {
            field: format!("schedule.{track}[{index}]"),
            constraint,
            value,
        },
        other => other,
    }
}

/// An instantaneous jump of `delta_r` in the protest fraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawShock")]
pub struct Shock {
    pub time: f64,
    pub delta_r: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawShock {
    time: f64,
    delta_r: f64,
}

impl TryFrom<RawShock> for Shock {
    type Error = Error;

    fn try_from(raw: RawShock) -> Result<Self> {
        Shock::new(raw.time, raw.delta_r)
    }
}

impl Shock {
    pub fn new(time: f64, delta_r: f64) -> Result<Self> {
        if !time.is_finite() {
            return Err(Error::invalid("shock.time", "time must be finite", time));
        }
        if !(delta_r > 0.0 && delta_r <= 1.0) {
            return Err(Error::invalid(
                "shock.delta_r",
                "delta_r must lie in (0,1]",
                delta_r,
            ));
        }
        Ok(Shock { time, delta_r })
    }
}

/// `min(r + delta_r, 1)`.
pub fn apply_shock(r: Fraction, shock: &Shock) -> Fraction {
    Fraction::clamped(r.get() + shock.delta_r)
}

/// Sorts shocks by time and merges simultaneous ones by summing their jumps.
pub fn normalize_shocks(shocks: &[Shock]) -> Vec<Shock> {
    let mut sorted = shocks.to_vec();
    sorted.sort_by(|a, b| a.time.total_cmp(&b.time));
    let mut merged: Vec<Shock> = Vec::with_capacity(sorted.len());
    for s in sorted {
        match merged.last_mut() {
            Some(last) if last.time == s.time => last.delta_r += s.delta_r,
            _ => merged.push(s),
        }
    }
    merged
}

/// Parameter schedule of the Egyptian scenario.
///
/// Time is in months from January 14, with one day = 1/30 month:
///
/// * `alpha`: 0.96, rising to 0.98 over Jan 25–28, cut back to 0.96 on
///   Jan 28–29 by the Internet shutdown, restored to 0.98 on Feb 1–2.
/// * `c1`: 2.30, rising to 3.26 over Jan 25–28.
/// * `beta`: 0.06, dropping to 0.04 on Feb 1–2 as the army intervenes.
/// * `c2`: 69.1, dropping to 50.0 on Feb 1–2.
pub fn egypt_schedule() -> Schedule {
    let d = |days: f64| days / 30.0;
    let alpha = Track::new(vec![
        (0.0, 0.96),
        (d(11.0), 0.96),
        (d(14.0), 0.98),
        (d(15.0), 0.96),
        (d(18.0), 0.96),
        (d(19.0), 0.98),
    ]);
    let c1 = Track::new(vec![(0.0, 2.30), (d(11.0), 2.30), (d(14.0), 3.26)]);
    let beta = Track::new(vec![(0.0, 0.06), (d(18.0), 0.06), (d(19.0), 0.04)]);
    let c2 = Track::new(vec![(0.0, 69.1), (d(18.0), 69.1), (d(19.0), 50.0)]);
    Schedule::new(alpha.unwrap(), beta.unwrap(), c1.unwrap(), c2.unwrap())
        .expect("static schedule is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn track_interpolates_and_extrapolates() {
        let t = Track::new(vec![(0.0, 0.96), (1.0, 0.98)]).unwrap();
        assert_abs_diff_eq!(t.eval(0.5), 0.97, epsilon = 1e-15);
        assert_eq!(t.eval(-3.0), 0.96);
        assert_eq!(t.eval(7.0), 0.98);
        assert_eq!(Track::constant(0.96).eval(5.0), 0.96);
    }

    #[test]
    fn track_rejects_unsorted_times() {
        assert!(Track::new(vec![]).is_err());
        assert!(Track::new(vec![(0.0, 1.0), (0.0, 2.0)]).is_err());
        let err = Track::new(vec![(0.0, 1.0), (2.0, 2.0), (1.0, 3.0)]).unwrap_err();
        assert!(err.to_string().contains("breakpoint[2].time"), "{err}");
    }

    #[test]
    fn schedule_rejects_invalid_values() {
        let err = Schedule::new(
            Track::constant(0.9),
            Track::new(vec![(0.0, 0.5), (1.0, 1.5)]).unwrap(),
            Track::constant(1.0),
            Track::constant(1.0),
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("schedule.beta[1]") && msg.contains("beta must lie in (0,1)"),
            "{msg}"
        );
    }

    /// Direct transcription of the piecewise formulas for the Egyptian
    /// parameter profiles.
    fn egypt_formula(t: f64) -> [f64; 4] {
        let s = 30.0 * t;
        let alpha = if s < 11.0 {
            0.96
        } else if s < 14.0 {
            0.96 * (14.0 - s) / 3.0 + 0.98 * (s - 11.0) / 3.0
        } else if s < 15.0 {
            0.98 * (15.0 - s) + 0.96 * (s - 14.0)
        } else if s < 18.0 {
            0.96
        } else if s < 19.0 {
            0.96 * (19.0 - s) + 0.98 * (s - 18.0)
        } else {
            0.98
        };
        let c1 = if s < 11.0 {
            2.30
        } else if s < 14.0 {
            2.30 * (14.0 - s) / 3.0 + 3.26 * (s - 11.0) / 3.0
        } else {
            3.26
        };
        let beta = if s < 18.0 {
            0.06
        } else if s < 19.0 {
            0.06 * (19.0 - s) + 0.04 * (s - 18.0)
        } else {
            0.04
        };
        let c2 = if s < 18.0 {
            69.1
        } else if s < 19.0 {
            69.1 * (19.0 - s) + 50.0 * (s - 18.0)
        } else {
            50.0
        };
        [alpha, beta, c1, c2]
    }

    #[test]
    fn egypt_matches_piecewise_formulas() {
        let s = egypt_schedule();
        for i in 0..=3000 {
            let t = i as f64 / 2000.0;
            let p = s.eval(t);
            let f = egypt_formula(t);
            assert_abs_diff_eq!(p.alpha(), f[0], epsilon = 1e-12);
            assert_abs_diff_eq!(p.beta(), f[1], epsilon = 1e-12);
            assert_abs_diff_eq!(p.c1(), f[2], epsilon = 1e-12);
            assert_abs_diff_eq!(p.c2(), f[3], epsilon = 1e-12);
        }
    }

    #[test]
    fn egypt_breakpoint_values() {
        let s = egypt_schedule();
        let d = |x: f64| x / 30.0;
        let alpha_expect = [
            (0.0, 0.96),
            (d(11.0), 0.96),
            (d(14.0), 0.98),
            (d(15.0), 0.96),
            (d(18.0), 0.96),
            (d(19.0), 0.98),
            (d(12.5), 0.97),
            (1.0, 0.98),
        ];
        for (t, v) in alpha_expect {
            assert_abs_diff_eq!(s.alpha.eval(t), v, epsilon = 1e-12);
        }
        for (t, v) in [(0.0, 2.30), (d(11.0), 2.30), (d(14.0), 3.26)] {
            assert_abs_diff_eq!(s.c1.eval(t), v, epsilon = 1e-12);
        }
        for (t, v) in [(0.0, 0.06), (d(18.0), 0.06), (d(19.0), 0.04)] {
            assert_abs_diff_eq!(s.beta.eval(t), v, epsilon = 1e-12);
        }
        for (t, v) in [(0.0, 69.1), (d(18.0), 69.1), (d(19.0), 50.0)] {
            assert_abs_diff_eq!(s.c2.eval(t), v, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(s.beta.eval(18.5 / 30.0), 0.05, epsilon = 1e-12);
    }

    #[test]
    fn egypt_is_continuous_at_junctions() {
        let s = egypt_schedule();
        let h = 1e-9;
        for t in s.breakpoint_times() {
            for track in s.tracks() {
                assert!((track.eval(t + h) - track.eval(t - h)).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn shock_examples() {
        let shock = |d| Shock::new(0.0, d).unwrap();
        let f = |r| Fraction::new(r).unwrap();
        assert_eq!(apply_shock(f(0.0), &shock(0.05)).get(), 0.05);
        assert_eq!(apply_shock(f(0.98), &shock(0.05)).get(), 1.0);
        assert_abs_diff_eq!(
            apply_shock(f(0.032258), &shock(0.021)).get(),
            0.053258,
            epsilon = 1e-15
        );
        assert!(Shock::new(0.0, 0.0).is_err());
        assert!(Shock::new(0.0, -0.1).is_err());
    }

    #[test]
    fn simultaneous_shocks_merge() {
        let shocks = [
            Shock::new(0.5, 0.01).unwrap(),
            Shock::new(0.1, 0.02).unwrap(),
            Shock::new(0.5, 0.03).unwrap(),
        ];
        let merged = normalize_shocks(&shocks);
        assert_eq!(merged.len(), 2);
        assert_eq!(merged[0].time, 0.1);
        assert_abs_diff_eq!(merged[1].delta_r, 0.04);
    }

    proptest! {
        #[test]
        fn shocks_stay_in_unit_interval(r in 0.0f64..=1.0, d in 1e-9f64..=1.0) {
            let out = apply_shock(Fraction::new(r).unwrap(), &Shock::new(0.0, d).unwrap()).get();
            prop_assert!((0.0..=1.0).contains(&out));
        }

        #[test]
        fn track_stays_within_breakpoint_hull(vals in prop::collection::vec(-5.0f64..5.0, 1..6), t in -1.0f64..8.0) {
            let bp: Vec<(f64, f64)> = vals.iter().enumerate().map(|(i, &v)| (i as f64, v)).collect();
            let track = Track::new(bp).unwrap();
            let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let x = track.eval(t);
            prop_assert!(x >= lo - 1e-12 && x <= hi + 1e-12);
        }
    }
}
