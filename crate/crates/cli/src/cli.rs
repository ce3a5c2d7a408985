use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};

use revdyn::analysis::{escape_shock, sweep_regions, AxisRange};
use revdyn::integrator::Trajectory;
use revdyn::model::{
    classify_region, equilibria, Fraction, ModelParams, C1_CALIBRATED, C2_CALIBRATED,
    DEFAULT_TOLERANCE,
};
use revdyn::scenario::{
    builtin_scenario, builtin_scenarios, parse_scenario, write_grid_csv, write_trajectory_csv,
    write_trajectory_svg, ScenarioSpec,
};
use revdyn::Error;

/// Environment variable naming the directory for file outputs when
/// `--output` is not given.
pub const OUTPUT_DIR_VAR: &str = "REVDYN_OUTPUT_DIR";

const RATE_HELP: &str = "Default rates when --c1/--c2 are omitted:\n  \
    c1 = ln 10 ~ 2.302585   (dr/dt = c1 (1 - r) from r = 0 reaches 0.9 in one month)\n  \
    c2 = 30 ln 10 ~ 69.0776 (dr/dt = -c2 r clears 90% of protesters in one day = 1/30 month)";

#[derive(Debug, Parser)]
#[command(
    name = "revdyn",
    version,
    about = "Protest dynamics under visibility and policing switches"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output to this file instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    /// Output format. Defaults to text for reports and csv for trajectories and grids.
    #[arg(short, long, global = true, value_enum)]
    format: Option<Format>,

    /// Print the version banner to standard error.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Args)]
struct ParamArgs {
    /// Visibility, in (0,1). Growth is on while r > 1 - alpha.
    #[arg(long)]
    alpha: f64,
    /// Policing capacity, in (0,1). Policing is on while r < beta.
    #[arg(long)]
    beta: f64,
    /// Enthusiasm rate per month [default: ln 10].
    #[arg(long)]
    c1: Option<f64>,
    /// Policing efficiency per month [default: 30 ln 10].
    #[arg(long)]
    c2: Option<f64>,
}

impl ParamArgs {
    fn params(&self) -> Result<ModelParams, Error> {
        ModelParams::new(
            self.alpha,
            self.beta,
            self.c1.unwrap_or(C1_CALIBRATED),
            self.c2.unwrap_or(C2_CALIBRATED),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EscapeFrom {
    #[value(name = "0")]
    Zero,
    Cstar,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the region of a parameter set and its c*.
    #[command(after_help = RATE_HELP)]
    Classify(ParamArgs),
    /// Print equilibria, their stability and basins of attraction.
    #[command(after_help = RATE_HELP)]
    Equilibria(ParamArgs),
    /// Simulate a scenario file.
    Simulate {
        /// Path to a JSON scenario file.
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Classify a grid of (alpha, beta) cell centres.
    #[command(after_help = RATE_HELP)]
    Sweep {
        /// Alpha axis as start:end:count (count = number of cell centres).
        #[arg(long)]
        alpha: AxisRange,
        /// Beta axis as start:end:count.
        #[arg(long)]
        beta: AxisRange,
        #[arg(long)]
        c1: Option<f64>,
        #[arg(long)]
        c2: Option<f64>,
    },
    /// List the built-in scenarios.
    ScenarioList,
    /// Run a built-in scenario.
    ScenarioRun {
        /// Built-in scenario name (see scenario-list).
        name: String,
    },
    /// Print the smallest shock that leaves a stable equilibrium.
    #[command(after_help = RATE_HELP)]
    Escape {
        #[command(flatten)]
        params: ParamArgs,
        /// Equilibrium to leave: 0 (total state control) or cstar (civil unrest).
        #[arg(long, value_enum)]
        from: EscapeFrom,
    },
}

#[derive(Debug)]
enum Failure {
    Validation(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Io(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

fn scenario_catalogue() -> String {
    let mut out = String::from("Built-in scenarios:\n");
    for s in builtin_scenarios() {
        out.push_str(&format!(
            "  {}\n      {}\n",
            s.name,
            s.description.as_deref().unwrap_or("")
        ));
    }
    out
}

pub fn main() -> ExitCode {
    let catalogue = scenario_catalogue();
    let command = Cli::command()
        .mut_subcommand("scenario-run", |c| c.after_help(catalogue.clone()))
        .mut_subcommand("scenario-list", |c| c.after_help(catalogue.clone()));
    let cli = match command
        .try_get_matches()
        .and_then(|m| Cli::from_arg_matches(&m))
    {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    if cli.verbose {
        eprintln!("revdyn {}", env!("CARGO_PKG_VERSION"));
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("I/O error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Where output goes: an explicit path, the output directory from the
/// environment (file outputs only), or standard output.
fn destination(cli: &Cli, default_name: Option<String>) -> Result<Box<dyn Write>, Failure> {
    let path = match (&cli.output, default_name) {
        (Some(p), _) => Some(p.clone()),
        (None, Some(name)) => {
            std::env::var_os(OUTPUT_DIR_VAR).map(|dir| Path::new(&dir).join(name))
        }
        (None, None) => None,
    };
    match path {
        Some(p) => {
            let file =
                File::create(&p).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn report_format(cli: &Cli) -> Result<bool, Failure> {
    match cli.format {
        None => Ok(false),
        Some(Format::Json) => Ok(true),
        Some(f) => Err(Failure::Validation(format!(
            "--format {} is not available for this command (use json or omit it)",
            f.to_possible_value().unwrap().get_name()
        ))),
    }
}

fn json_line<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialises");
    s.push('\n');
    s
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    let mut out = destination(cli, None)?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Classify(args) => {
            let json = report_format(cli)?;
            let params = args.params()?;
            let region = classify_region(&params, DEFAULT_TOLERANCE);
            let text = if json {
                json_line(&serde_json::json!({
                    "region": region.label,
                    "regime": region.label.regime(),
                    "c_star": params.c_star(),
                    "on_boundary": region.on_boundary,
                }))
            } else {
                let mut t = format!("{}\nc*={:.12}\n", region.label, params.c_star());
                let b = region.on_boundary;
                for (on, tag) in [
                    (b.alpha_plus_beta_eq_1, "alpha_plus_beta_eq_1"),
                    (
                        b.cstar_eq_visibility_threshold,
                        "cstar_eq_visibility_threshold",
                    ),
                    (b.cstar_eq_beta, "cstar_eq_beta"),
                ] {
                    if on {
                        t.push_str(&format!("boundary: {tag}\n"));
                    }
                }
                t
            };
            emit(cli, &text)
        }
        Command::Equilibria(args) => {
            let json = report_format(cli)?;
            let set = equilibria(&args.params()?, DEFAULT_TOLERANCE);
            let text = if json {
                json_line(&set)
            } else {
                let mut t = format!(
                    "region {} ({})\n",
                    set.region.label,
                    set.region.label.regime()
                );
                for e in &set.equilibria {
                    t.push_str(&format!("r = {:.12}  {}", e.value.get(), e.stability));
                    if let Some(b) = e.basin {
                        t.push_str(&format!("  basin {b}"));
                    }
                    t.push('\n');
                }
                if let Some(c) = set.continuum {
                    t.push_str(&format!("continuum {c}  continuum stable\n"));
                }
                t
            };
            emit(cli, &text)
        }
        Command::Simulate { scenario } => {
            let text = std::fs::read_to_string(scenario)
                .map_err(|e| Failure::Io(format!("{}: {e}", scenario.display())))?;
            let spec = parse_scenario(&text)
                .map_err(|e| Failure::from(e).prefixed(&scenario.display().to_string()))?;
            write_run(cli, &spec)
        }
        Command::ScenarioRun { name } => write_run(cli, &builtin_scenario(name)?),
        Command::ScenarioList => {
            let json = report_format(cli)?;
            let text = if json {
                let list: Vec<_> = builtin_scenarios()
                    .into_iter()
                    .map(|s| serde_json::json!({"name": s.name, "description": s.description}))
                    .collect();
                json_line(&list)
            } else {
                builtin_scenarios()
                    .into_iter()
                    .map(|s| format!("{}\t{}\n", s.name, s.description.unwrap_or_default()))
                    .collect()
            };
            emit(cli, &text)
        }
        Command::Sweep {
            alpha,
            beta,
            c1,
            c2,
        } => {
            let grid = sweep_regions(
                *alpha,
                *beta,
                c1.unwrap_or(C1_CALIBRATED),
                c2.unwrap_or(C2_CALIBRATED),
            )?;
            let format = cli.format.unwrap_or(Format::Csv);
            let mut out = match format {
                Format::Csv => destination(cli, Some("sweep.csv".into()))?,
                Format::Json => destination(cli, Some("sweep.json".into()))?,
                Format::Svg => {
                    return Err(Failure::Validation(
                        "sweep supports csv or json output".into(),
                    ))
                }
            };
            match format {
                Format::Json => out.write_all(json_line(&grid).as_bytes())?,
                _ => {
                    write_grid_csv(&grid, &mut out)?;
                }
            }
            out.flush()?;
            Ok(())
        }
        Command::Escape { params, from } => {
            let json = report_format(cli)?;
            let params = params.params()?;
            let from = match from {
                EscapeFrom::Zero => Fraction::ZERO,
                EscapeFrom::Cstar => Fraction::new(params.c_star())?,
            };
            let report = escape_shock(&params, from)?;
            let text = if json {
                json_line(&report)
            } else {
                format!(
                    "from r = {:.12}\nminimal shock {:.12} ({})\ndestination r = {:.12} ({})\n",
                    report.from_equilibrium.get(),
                    report.minimal_shock,
                    match report.attainment {
                        revdyn::analysis::Attainment::Open => "open: the shock must exceed it",
                        revdyn::analysis::Attainment::Closed => "closed: equality suffices",
                    },
                    report.destination.value.get(),
                    report.destination.stability
                )
            };
            emit(cli, &text)
        }
    }
}

impl Failure {
    fn prefixed(self, context: &str) -> Self {
        match self {
            Failure::Validation(m) => Failure::Validation(format!("{context}: {m}")),
            Failure::Io(m) => Failure::Io(format!("{context}: {m}")),
        }
    }
}

fn write_run(cli: &Cli, spec: &ScenarioSpec) -> Result<(), Failure> {
    let traj: Trajectory = spec.run()?;
    let format = cli.format.unwrap_or(Format::Csv);
    let ext = match format {
        Format::Csv => "csv",
        Format::Json => "json",
        Format::Svg => "svg",
    };
    let mut out = destination(cli, Some(format!("{}.{ext}", spec.name)))?;
    match format {
        Format::Csv => {
            write_trajectory_csv(&traj, &mut out)?;
        }
        Format::Json => {
            out.write_all(json_line(&traj).as_bytes())?;
            out.flush()?;
        }
        Format::Svg => {
            write_trajectory_svg(&traj, &spec.name, &mut out)?;
        }
    }
    Ok(())
}
