//! Scenario files, built-in scenarios and output formats.
//!
//! A scenario is a JSON object:
//!
//! ```json
//! {
//!   "name": "tunisia-alpha-0.98-beta-0.05",
//!   "description": "optional free text",
//!   "r0": 0.0,
//!   "t_end": 2.0,
//!   "params": { "alpha": 0.98, "beta": 0.05, "c1": 2.302585092994046, "c2": 69.07755278982137 },
//!   "shocks": [ { "time": 0.0333, "delta_r": 0.021 } ],
//!   "solver": { "step": 0.0001, "crossing_tolerance": 1e-10, "sample_interval": 0.001 }
//! }
//! ```
//!
//! Instead of `params`, a `schedule` object may give each parameter as
//! either a number or a list of `[time, value]` breakpoints. Exactly one of
//! the two must be present. `description`, `shocks` and `solver` (and each
//! of its fields) are optional. Unknown fields are rejected.

mod builtin;
mod output;

pub use builtin::{builtin_scenario, builtin_scenarios, CHINA, EGYPT, TUNISIA_ALPHA, TUNISIA_C1};
pub use output::{
    format_trajectory_csv, write_grid_csv, write_trajectory_csv, write_trajectory_svg,
    TRAJECTORY_HEADER,
};

use serde::{Deserialize, Serialize};

use crate::integrator::{simulate, SolverConfig, Trajectory};
use crate::model::{Fraction, ModelParams};
use crate::schedule::{Schedule, Shock, Track};
use crate::{Error, Result};

/// Solver settings a scenario overrides; unset fields take the defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crossing_tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_interval: Option<f64>,
}

impl SolverOverrides {
    pub fn is_empty(&self) -> bool {
        *self == SolverOverrides::default()
    }

    pub fn resolve(&self) -> SolverConfig {
        let d = SolverConfig::default();
        SolverConfig {
            step: self.step.unwrap_or(d.step),
            crossing_tolerance: self.crossing_tolerance.unwrap_or(d.crossing_tolerance),
            sample_interval: self.sample_interval.unwrap_or(d.sample_interval),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: String,
    pub description: Option<String>,
    pub r0: Fraction,
    pub t_end: f64,
    pub schedule: Schedule,
    pub shocks: Vec<Shock>,
    pub solver: SolverOverrides,
}

impl ScenarioSpec {
    /// A constant-parameter scenario with default solver settings.
    pub fn constant(
        name: impl Into<String>,
        params: &ModelParams,
        r0: Fraction,
        t_end: f64,
        shocks: Vec<Shock>,
    ) -> Self {
        ScenarioSpec {
            name: name.into(),
            description: None,
            r0,
            t_end,
            schedule: Schedule::constant(params),
            shocks,
            solver: SolverOverrides::default(),
        }
    }

    pub fn solver_config(&self) -> SolverConfig {
        self.solver.resolve()
    }

    pub fn run(&self) -> Result<Trajectory> {
        self.run_with(&self.solver_config())
    }

    pub fn run_with(&self, config: &SolverConfig) -> Result<Trajectory> {
        simulate(self.r0, &self.schedule, &self.shocks, self.t_end, config)
    }

    /// JSON text with one line per field; `parse_scenario` reads it back
    /// unchanged.
    pub fn to_json(&self) -> String {
        let mut out = String::from("{\n");
        let mut fields = vec![format!("  \"name\": {}", json_str(&self.name))];
        if let Some(d) = &self.description {
            fields.push(format!("  \"description\": {}", json_str(d)));
        }
        fields.push(format!("  \"r0\": {}", json_num(self.r0.get())));
        fields.push(format!("  \"t_end\": {}", json_num(self.t_end)));

        let s = &self.schedule;
        let tracks: Vec<String> = [
            ("alpha", &s.alpha),
            ("beta", &s.beta),
            ("c1", &s.c1),
            ("c2", &s.c2),
        ]
        .iter()
        .map(|(name, track)| format!("    \"{name}\": {}", track_json(track)))
        .collect();
        fields.push(format!("  \"schedule\": {{\n{}\n  }}", tracks.join(",\n")));

        if !self.shocks.is_empty() {
            let shocks: Vec<String> = self
                .shocks
                .iter()
                .map(|sh| {
                    format!(
                        "    {{ \"time\": {}, \"delta_r\": {} }}",
                        json_num(sh.time),
                        json_num(sh.delta_r)
                    )
                })
                .collect();
            fields.push(format!("  \"shocks\": [\n{}\n  ]", shocks.join(",\n")));
        }
        if !self.solver.is_empty() {
            let solver = serde_json::to_string(&self.solver).expect("solver serialises");
            fields.push(format!("  \"solver\": {solver}"));
        }
        out.push_str(&fields.join(",\n"));
        out.push_str("\n}\n");
        out
    }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialise")
}

fn json_num(x: f64) -> String {
    serde_json::Value::from(x).to_string()
}

fn track_json(track: &Track) -> String {
    match track.breakpoints() {
        [(t, v)] if *t == 0.0 => json_num(*v),
        bp => {
            let pts: Vec<String> = bp
                .iter()
                .map(|&(t, v)| format!("[{}, {}]", json_num(t), json_num(v)))
                .collect();
            format!("[{}]", pts.join(", "))
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    #[serde(default)]
    description: Option<String>,
    r0: f64,
    t_end: f64,
    #[serde(default)]
    params: Option<RawParams>,
    #[serde(default)]
    schedule: Option<RawSchedule>,
    #[serde(default)]
    shocks: Vec<RawShock>,
    #[serde(default)]
    solver: SolverOverrides,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    alpha: f64,
    beta: f64,
    c1: f64,
    c2: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSchedule {
    alpha: RawTrack,
    beta: RawTrack,
    c1: RawTrack,
    c2: RawTrack,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawTrack {
    Constant(f64),
    Breakpoints(Vec<(f64, f64)>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawShock {
    time: f64,
    delta_r: f64,
}

fn with_field(err: Error, field: String) -> Error {
    match err {
        Error::Invalid {
            constraint, value, ..
        } => Error::Invalid {
            field,
            constraint,
            value,
        },
        Error::Validation(msg) => Error::Validation(format!("{field}: {msg}")),
        other => other,
    }
}

fn build_track(name: &str, raw: RawTrack) -> Result<Track> {
    match raw {
        RawTrack::Constant(v) => Ok(Track::constant(v)),
        RawTrack::Breakpoints(bp) => Track::new(bp).map_err(|e| match e {
            Error::Invalid {
                field,
                constraint,
                value,
            } => Error::Invalid {
                field: format!("schedule.{name}.{field}"),
                constraint,
                value,
            },
            other => with_field(other, format!("schedule.{name}")),
        }),
    }
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Parses and validates scenario text.
///
/// Malformed JSON and unknown fields produce [`Error::Parse`] with a line and
/// column. Well-formed input that breaks a model constraint produces
/// [`Error::Invalid`] naming the offending field.
pub fn parse_scenario(text: &str) -> Result<ScenarioSpec> {
    let raw: RawScenario = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })?;

    if raw.name.trim().is_empty() {
        return Err(Error::Validation("name: must not be empty".into()));
    }
    let r0 = Fraction::new(raw.r0).map_err(|e| with_field(e, "r0".into()))?;
    if !(raw.t_end > 0.0 && raw.t_end.is_finite()) {
        return Err(Error::invalid(
            "t_end",
            "t_end must be finite and positive",
            raw.t_end,
        ));
    }

    let schedule = match (raw.params, raw.schedule) {
        (Some(p), None) => {
            let params = ModelParams::new(p.alpha, p.beta, p.c1, p.c2).map_err(|e| match e {
                Error::Invalid {
                    field,
                    constraint,
                    value,
                } => Error::Invalid {
                    field: format!("params.{field}"),
                    constraint,
                    value,
                },
                other => other,
            })?;
            Schedule::constant(&params)
        }
        (None, Some(s)) => Schedule::new(
            build_track("alpha", s.alpha)?,
            build_track("beta", s.beta)?,
            build_track("c1", s.c1)?,
            build_track("c2", s.c2)?,
        )?,
        (Some(_), Some(_)) => {
            return Err(Error::Validation(
                "give either params or schedule, not both".into(),
            ))
        }
        (None, None) => return Err(Error::Validation("missing params or schedule".into())),
    };

    let shocks = raw
        .shocks
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            Shock::new(s.time, s.delta_r).map_err(|e| with_field(e, format!("shocks[{i}]")))
        })
        .collect::<Result<Vec<_>>>()?;

    raw.solver.resolve().validate()?;

    Ok(ScenarioSpec {
        name: raw.name,
        description: raw.description,
        r0,
        t_end: raw.t_end,
        schedule,
        shocks,
        solver: raw.solver,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "name": "demo",
        "r0": 0.0,
        "t_end": 1.0,
        "params": {"alpha": 0.98, "beta": 0.05, "c1": 2.3, "c2": 69.1},
        "shocks": [{"time": 0.1, "delta_r": 0.03}]
    }"#;

    #[test]
    fn parses_constant_shorthand() {
        let s = parse_scenario(MINIMAL).unwrap();
        assert_eq!(s.name, "demo");
        assert!(s.schedule.is_constant());
        assert_eq!(s.schedule.eval(3.0).beta(), 0.05);
        assert_eq!(s.shocks.len(), 1);
        assert_eq!(s.solver_config(), SolverConfig::default());
        assert_eq!(parse_scenario(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn invalid_beta_names_constraint() {
        let text = MINIMAL.replace("\"beta\": 0.05", "\"beta\": 1.5");
        let err = parse_scenario(&text).unwrap_err();
        let msg = err.to_string();
        assert!(
            msg.contains("beta must lie in (0,1)") && msg.contains("params.beta"),
            "{msg}"
        );
        assert!(matches!(err, Error::Invalid { .. }));
    }

    #[test]
    fn unknown_field_is_named() {
        let text = MINIMAL.replace("\"r0\"", "\"gamma\": 1, \"r0\"");
        let err = parse_scenario(&text).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!(err.to_string().contains("gamma"));
        let text = MINIMAL.replace("\"delta_r\"", "\"size\": 2, \"delta_r\"");
        assert!(parse_scenario(&text)
            .unwrap_err()
            .to_string()
            .contains("size"));
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_scenario("{\n  \"name\": \"x\",\n  \"r0\": ,\n}").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 3);
                assert!(column > 0);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn schedule_errors_are_located() {
        let text = r#"{"name":"x","r0":0,"t_end":1,
            "schedule":{"alpha":0.9,"beta":[[0,0.1],[1,1.2]],"c1":1,"c2":1}}"#;
        let msg = parse_scenario(text).unwrap_err().to_string();
        assert!(msg.contains("schedule.beta[1]"), "{msg}");
        let text = r#"{"name":"x","r0":0,"t_end":1,
            "schedule":{"alpha":0.9,"beta":[[1,0.1],[0,0.2]],"c1":1,"c2":1}}"#;
        let msg = parse_scenario(text).unwrap_err().to_string();
        assert!(msg.contains("schedule.beta.breakpoint[1].time"), "{msg}");
    }

    #[test]
    fn structural_errors() {
        let both = MINIMAL.replace(
            "\"shocks\"",
            "\"schedule\": {\"alpha\":0.9,\"beta\":0.1,\"c1\":1,\"c2\":1}, \"shocks\"",
        );
        assert!(parse_scenario(&both).is_err());
        let neither = r#"{"name":"x","r0":0,"t_end":1}"#;
        assert!(parse_scenario(neither).is_err());
        let bad_r0 = MINIMAL.replace("\"r0\": 0.0", "\"r0\": 1.5");
        assert!(parse_scenario(&bad_r0)
            .unwrap_err()
            .to_string()
            .contains("r0"));
        let bad_shock = MINIMAL.replace("\"delta_r\": 0.03", "\"delta_r\": -0.03");
        assert!(parse_scenario(&bad_shock)
            .unwrap_err()
            .to_string()
            .contains("shocks[0]"));
        let bad_solver = MINIMAL.replace("\"shocks\"", "\"solver\": {\"step\": 0}, \"shocks\"");
        assert!(parse_scenario(&bad_solver)
            .unwrap_err()
            .to_string()
            .contains("solver.step"));
    }
}
