//! Trajectories of the switching model under schedules and shocks.
//!
//! Between discontinuities the right-hand side is smooth, so the solver takes
//! fixed classical RK4 steps with the switch values `(v, p)` frozen. After each
//! step the switches are re-evaluated at the new state; if either flipped,
//! the crossing is bracketed by bisection on the step length and the step is
//! cut at the crossing. Shock times, track breakpoints and output sample
//! times are forced step boundaries.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{
    classify_region, policing, visibility, Fraction, ModelParams, RegionLabel, DEFAULT_TOLERANCE,
};
use crate::schedule::{apply_shock, normalize_shocks, Schedule, Shock};
use crate::{Error, Result};

/// Upper bound on switch flips in one run; far above anything the model
/// produces without sliding motion.
const MAX_CROSSINGS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// RK4 step in months.
    pub step: f64,
    /// Width in months of the bracket that localises a threshold crossing.
    pub crossing_tolerance: f64,
    /// Spacing of recorded samples in months.
    pub sample_interval: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            step: 1e-4,
            crossing_tolerance: 1e-10,
            sample_interval: 1e-3,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("solver.step", self.step),
            ("solver.crossing_tolerance", self.crossing_tolerance),
            ("solver.sample_interval", self.sample_interval),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::invalid(name, "must be finite and positive", value));
            }
        }
        Ok(())
    }
}

/// One recorded state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
    pub c1: f64,
    pub c2: f64,
    pub v: u8,
    pub p: u8,
    pub region: RegionLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Shock,
    ThresholdCrossing,
    RegionChange,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::Shock => "shock",
            EventKind::ThresholdCrossing => "threshold_crossing",
            EventKind::RegionChange => "region_change",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub events: Vec<Event>,
}

impl Trajectory {
    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    /// Final protest fraction.
    pub fn final_r(&self) -> f64 {
        self.samples.last().map_or(f64::NAN, |s| s.r)
    }

    /// Samples with `from <= t <= to`.
    pub fn window(&self, from: f64, to: f64) -> impl Iterator<Item = &Sample> {
        self.samples
            .iter()
            .filter(move |s| s.t >= from && s.t <= to)
    }

    /// Latest sample at or before `t`. At a shock instant this is the
    /// post-shock sample.
    pub fn at(&self, t: f64) -> Option<&Sample> {
        let i = self.samples.partition_point(|s| s.t <= t);
        i.checked_sub(1).map(|i| &self.samples[i])
    }

    pub fn events_of(&self, kind: EventKind) -> impl Iterator<Item = &Event> {
        self.events.iter().filter(move |e| e.kind == kind)
    }
}

/// Closed-form solution of `dr/dt = a (1 - r) - b r` after `dt` months.
pub fn step_exact(r0: Fraction, a: f64, b: f64, dt: f64) -> Fraction {
    let k = a + b;
    if k == 0.0 {
        return r0;
    }
    let limit = a / k;
    Fraction::clamped(limit + (r0.get() - limit) * (-k * dt).exp())
}

#[derive(Clone, Copy)]
struct Rates {
    alpha: f64,
    beta: f64,
    c1: f64,
    c2: f64,
}

impl Rates {
    fn at(schedule: &Schedule, t: f64) -> Self {
        Rates {
            alpha: schedule.alpha.eval(t),
            beta: schedule.beta.eval(t),
            c1: schedule.c1.eval(t),
            c2: schedule.c2.eval(t),
        }
    }

    fn mode(&self, r: f64) -> Mode {
        Mode {
            v: visibility(r, self.alpha),
            p: policing(r, self.beta),
        }
    }

    fn params(&self) -> ModelParams {
        ModelParams::new(self.alpha, self.beta, self.c1, self.c2)
            .expect("schedule values are validated at construction")
    }

    fn region(&self) -> RegionLabel {
        classify_region(&self.params(), DEFAULT_TOLERANCE).label
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Mode {
    v: u8,
    p: u8,
}

fn frozen_rhs(schedule: &Schedule, mode: Mode, t: f64, r: f64) -> f64 {
    let mut f = 0.0;
    if mode.v == 1 {
        f += schedule.c1.eval(t) * (1.0 - r);
    }
    if mode.p == 1 {
        f -= schedule.c2.eval(t) * r;
    }
    f
}

fn rk4(schedule: &Schedule, mode: Mode, t: f64, r: f64, h: f64) -> f64 {
    let k1 = frozen_rhs(schedule, mode, t, r);
    let k2 = frozen_rhs(schedule, mode, t + 0.5 * h, r + 0.5 * h * k1);
    let k3 = frozen_rhs(schedule, mode, t + 0.5 * h, r + 0.5 * h * k2);
    let k4 = frozen_rhs(schedule, mode, t + h, r + h * k3);
    (r + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)).clamp(0.0, 1.0)
}

struct Recorder<'a> {
    schedule: &'a Schedule,
    out: Trajectory,
    region: RegionLabel,
}

impl Recorder<'_> {
    fn sample(&mut self, t: f64, r: f64) {
        let rates = Rates::at(self.schedule, t);
        let mode = rates.mode(r);
        self.out.samples.push(Sample {
            t,
            r,
            alpha: rates.alpha,
            beta: rates.beta,
            c1: rates.c1,
            c2: rates.c2,
            v: mode.v,
            p: mode.p,
            region: rates.region(),
        });
    }

    fn event(&mut self, t: f64, kind: EventKind, detail: String) {
        self.out.events.push(Event { t, kind, detail });
    }

    fn check_region(&mut self, t: f64) {
        let region = Rates::at(self.schedule, t).region();
        if region != self.region {
            self.event(
                t,
                EventKind::RegionChange,
                format!("{} -> {}", self.region, region),
            );
            self.region = region;
        }
    }
}

/// Integrates from `r0` at `t = 0` to `t_end`.
///
/// Shocks outside `[0, t_end]` are ignored; simultaneous shocks are merged.
/// At a shock instant both the pre- and post-shock states are sampled, and
/// the shock is applied after the parameters at that instant are evaluated.
pub fn simulate(
    r0: Fraction,
    schedule: &Schedule,
    shocks: &[Shock],
    t_end: f64,
    config: &SolverConfig,
) -> Result<Trajectory> {
    config.validate()?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::invalid(
            "t_end",
            "t_end must be finite and positive",
            t_end,
        ));
    }

    let shocks: Vec<Shock> = normalize_shocks(shocks)
        .into_iter()
        .filter(|s| s.time >= 0.0 && s.time <= t_end)
        .collect();
    let breakpoints: Vec<f64> = schedule
        .breakpoint_times()
        .into_iter()
        .filter(|&b| b > 0.0 && b < t_end)
        .collect();

    let track_regions = !schedule.is_constant();
    let mut rec = Recorder {
        schedule,
        out: Trajectory::default(),
        region: Rates::at(schedule, 0.0).region(),
    };

    let mut t = 0.0_f64;
    let mut r = r0.get();
    let mut next_shock = 0usize;
    let mut next_break = 0usize;
    let mut sample_index = 0u64;
    let mut crossings = 0usize;
    let sample_time = |k: u64| k as f64 * config.sample_interval;

    rec.sample(t, r);
    sample_index += 1;

    loop {
        // Everything scheduled at the current instant.
        while next_shock < shocks.len() && shocks[next_shock].time <= t {
            let shock = shocks[next_shock];
            next_shock += 1;
            let pre = rec.out.samples.last().is_some_and(|s| s.t == t);
            if !pre {
                rec.sample(t, r);
            }
            let before = r;
            r = apply_shock(Fraction::clamped(r), &shock).get();
            rec.event(
                t,
                EventKind::Shock,
                format!("delta_r={} r: {} -> {}", shock.delta_r, before, r),
            );
            rec.sample(t, r);
        }
        while next_break < breakpoints.len() && breakpoints[next_break] <= t {
            next_break += 1;
        }
        if t >= t_end {
            break;
        }

        let mut stop = t_end;
        if let Some(s) = shocks.get(next_shock) {
            stop = stop.min(s.time);
        }
        if let Some(&b) = breakpoints.get(next_break) {
            stop = stop.min(b);
        }
        while sample_time(sample_index) <= t {
            sample_index += 1;
        }
        stop = stop.min(sample_time(sample_index));

        // March to `stop` in steps of at most `config.step`.
        while t < stop {
            let remaining = stop - t;
            let (h, lands) = if remaining <= config.step * (1.0 + 1e-9) {
                (remaining, true)
            } else {
                (config.step, false)
            };
            let rates = Rates::at(schedule, t);
            let mode = rates.mode(r);
            let r_new = rk4(schedule, mode, t, r, h);
            let t_new = if lands { stop } else { t + h };
            if !r_new.is_finite() {
                return Err(Error::NonFinite { t: t_new });
            }

            let new_mode = Rates::at(schedule, t_new).mode(r_new);
            if new_mode == mode {
                t = t_new;
                r = r_new;
            } else {
                crossings += 1;
                if crossings > MAX_CROSSINGS {
                    return Err(Error::Validation(format!(
                        "more than {MAX_CROSSINGS} switch crossings; the trajectory is chattering near t = {t}"
                    )));
                }
                let (_, hi_len) =
                    bracket_crossing(schedule, mode, t, r, h, config.crossing_tolerance);
                let t_cross = if hi_len >= h { t_new } else { t + hi_len };
                let r_cross = if hi_len >= h {
                    r_new
                } else {
                    rk4(schedule, mode, t, r, hi_len)
                };
                let after = Rates::at(schedule, t_cross).mode(r_cross);
                rec.event(
                    t_cross,
                    EventKind::ThresholdCrossing,
                    describe_crossing(mode, after, r_cross),
                );
                t = t_cross;
                r = r_cross;
            }
            if track_regions {
                rec.check_region(t);
            }
        }

        if t == sample_time(sample_index) || t == t_end {
            rec.sample(t, r);
        }
    }

    Ok(rec.out)
}

/// Shrinks `[0, h]` around the first switch change of a step started at
/// `(t, r)` with switches `mode`. Returns `(lo, hi)` with the mode unchanged
/// at `lo` and changed at `hi`.
fn bracket_crossing(
    schedule: &Schedule,
    mode: Mode,
    t: f64,
    r: f64,
    h: f64,
    tol: f64,
) -> (f64, f64) {
    let mut lo = 0.0;
    let mut hi = h;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let r_mid = rk4(schedule, mode, t, r, mid);
        if Rates::at(schedule, t + mid).mode(r_mid) == mode {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

fn describe_crossing(before: Mode, after: Mode, r: f64) -> String {
    let mut parts = Vec::new();
    if before.v != after.v {
        parts.push(format!("v {}->{}", before.v, after.v));
    }
    if before.p != after.p {
        parts.push(format!("p {}->{}", before.p, after.p));
    }
    format!("{} at r={r}", parts.join(" "))
}
