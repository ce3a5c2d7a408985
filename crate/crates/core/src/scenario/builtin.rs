use super::{ScenarioSpec, SolverOverrides};
use crate::model::{Fraction, ModelParams, C1_CALIBRATED, C2_CALIBRATED};
use crate::schedule::{egypt_schedule, Schedule, Shock, Track};
use crate::{Error, Result};

/// `(alpha, beta)` combinations of the visibility study.
pub const TUNISIA_ALPHA: [(f64, f64); 4] = [(0.96, 0.05), (0.96, 0.06), (0.98, 0.05), (0.98, 0.06)];

/// Enthusiasm values of the `c1` study. The first entry stands for `ln 10`.
pub const TUNISIA_C1: [(&str, f64); 4] = [
    ("2.30", C1_CALIBRATED),
    ("3.26", 3.26),
    ("4.02", 4.02),
    ("4.80", 4.80),
];

pub const EGYPT: &str = "egypt";
pub const CHINA: &str = "china-rising-c1";

const DEC_17: f64 = 1.0 / 30.0;
const JAN_5: f64 = 20.0 / 30.0;
const JAN_25: f64 = 11.0 / 30.0;

fn shock(t: f64, d: f64) -> Shock {
    Shock::new(t, d).expect("built-in shock is valid")
}

fn tunisia_alpha(alpha: f64, beta: f64) -> ScenarioSpec {
    let params = ModelParams::calibrated(alpha, beta).expect("built-in parameters are valid");
    let mut spec = ScenarioSpec::constant(
        format!("tunisia-alpha-{alpha:.2}-beta-{beta:.2}"),
        &params,
        Fraction::ZERO,
        2.0,
        vec![shock(DEC_17, 0.021), shock(JAN_5, 0.021)],
    );
    spec.description = Some(format!(
        "Tunisia, visibility study: alpha={alpha}, beta={beta}, c1=ln 10, c2=30 ln 10; \
         shocks of 0.021 on Dec 17 (t=1/30) and Jan 5 (t=20/30). {}",
        match (alpha == 0.98, beta == 0.05) {
            (false, _) => "Stable police state: both shocks die out.",
            (true, true) => "Meta-stable police state: civil unrest after the first shock, revolution after the second.",
            (true, false) => "Meta-stable police state: civil unrest persists after both shocks.",
        }
    ));
    spec
}

fn tunisia_c1(label: &str, c1: f64) -> ScenarioSpec {
    let params =
        ModelParams::new(0.96, 0.06, c1, C2_CALIBRATED).expect("built-in parameters are valid");
    let mut spec = ScenarioSpec::constant(
        format!("tunisia-c1-{label}"),
        &params,
        Fraction::ZERO,
        2.0,
        vec![shock(DEC_17, 0.041), shock(JAN_5, 0.01)],
    );
    let outcome = match label {
        "2.30" => "Stable police state: the state returns to total control.",
        "3.26" => "Meta-stable police state: civil unrest at c* = 0.0451 survives the second shock.",
        "4.02" => "Meta-stable police state: civil unrest at c* = 0.0550, tipped into revolution by the second shock.",
        _ => "Unstable police state: the first shock alone leads to revolution.",
    };
    spec.description = Some(format!(
        "Tunisia, enthusiasm study: alpha=0.96, beta=0.06, c1={label}, c2=30 ln 10; \
         shocks of 0.041 on Dec 17 (t=1/30) and 0.01 on Jan 5 (t=20/30). {outcome}"
    ));
    spec
}

fn egypt() -> ScenarioSpec {
    ScenarioSpec {
        name: EGYPT.into(),
        description: Some(
            "Egypt with time-varying parameters from Jan 14 (t=0): alpha and c1 rise over Jan 25-28, \
             the Internet shutdown cuts alpha back on Jan 28-29, and the army's intervention lowers \
             beta and c2 on Feb 1-2. A single shock of 0.05 on Jan 25 (t=11/30)."
                .into(),
        ),
        r0: Fraction::ZERO,
        t_end: 1.5,
        schedule: egypt_schedule(),
        shocks: vec![shock(JAN_25, 0.05)],
        solver: SolverOverrides::default(),
    }
}

fn china() -> ScenarioSpec {
    let schedule = Schedule::new(
        Track::constant(0.97),
        Track::constant(0.06),
        Track::new(vec![(0.0, C1_CALIBRATED), (3.0, 5.0)]).expect("valid track"),
        Track::constant(C2_CALIBRATED),
    )
    .expect("valid schedule");
    ScenarioSpec {
        name: CHINA.into(),
        description: Some(
            "Illustrative: a meta-stable police state whose enthusiasm c1 grows steadily, raising c*. \
             Recurring shocks of 0.01 produce protests that grow with c* until one tips the regime."
                .into(),
        ),
        r0: Fraction::new(0.035).expect("valid"),
        t_end: 3.0,
        schedule,
        shocks: (1..=5).map(|k| shock(0.5 * k as f64, 0.01)).collect(),
        solver: SolverOverrides::default(),
    }
}

/// All built-in scenarios, in a fixed order.
pub fn builtin_scenarios() -> Vec<ScenarioSpec> {
    let mut out: Vec<ScenarioSpec> = TUNISIA_ALPHA
        .iter()
        .map(|&(a, b)| tunisia_alpha(a, b))
        .collect();
    out.extend(TUNISIA_C1.iter().map(|&(label, c1)| tunisia_c1(label, c1)));
    out.push(egypt());
    out.push(china());
    out
}

/// Looks up a built-in by name.
pub fn builtin_scenario(name: &str) -> Result<ScenarioSpec> {
    let all = builtin_scenarios();
    let names: Vec<String> = all.iter().map(|s| s.name.clone()).collect();
    all.into_iter().find(|s| s.name == name).ok_or_else(|| {
        Error::Validation(format!(
            "unknown scenario {name:?}; available: {}",
            names.join(", ")
        ))
    })
}
