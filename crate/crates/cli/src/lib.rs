//! The `decohere` command line.
//!
//! Exit codes: `0` on success, `1` when `verify` finds a failing check and
//! `2` for usage, input and computation errors. Violation verdicts are data
//! and never change the exit code.

mod format;
mod inputs;
mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use decohere::channels::Channel;
use decohere::ncmodel::classical_bound;
use decohere::noisescan::{analytic_threshold, find_threshold, sweep, ThresholdOutcome, DEFAULT_TOL};
use decohere::scenarios::file::ScenarioDoc;
use decohere::scenarios::{evaluate_inequality, Direction, Picture, Scenario};
use decohere::NoisePlacement;

use format::{csv_num, csv_table, human_num, signed};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "decohere", version, about = "Depolarizing noise against Kochen-Specker contextuality")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    format: OutputFormat,
}

#[derive(Debug, clap::Args)]
struct Setup {
    /// Built-in scenario (kcbs, pm) or a scenario file
    scenario: String,
    /// maxmix, kcbs-optimal, basis:k or file:path
    #[arg(long, default_value = "maxmix")]
    state: String,
    /// Where the depolarizing channel acts: none, before-first, before-each
    #[arg(long, default_value = "before-each")]
    placement: NoisePlacement,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Describe a scenario and check its invariants
    Info {
        scenario: String,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the inequality for one state and noise level
    Eval {
        #[command(flatten)]
        setup: Setup,
        /// Depolarizing parameter (1 means no noise)
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// schrodinger, heisenberg or both
        #[arg(long, default_value = "both")]
        picture: Picture,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the inequality over a grid of noise levels
    Sweep {
        #[command(flatten)]
        setup: Setup,
        #[arg(long, default_value_t = 0.0)]
        p_min: f64,
        #[arg(long, default_value_t = 1.0)]
        p_max: f64,
        /// Number of grid points, endpoints included
        #[arg(long, default_value_t = 11)]
        steps: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Bisect for the noise level where the violation ends
    Threshold {
        #[command(flatten)]
        setup: Setup,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Classical bounds by enumerating deterministic assignments
    Bound {
        scenario: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in invariant checks
    Verify {
        /// Seed for the randomized checks
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random pairs per dimension for the duality check
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug)]
pub struct Failure {
    message: String,
}

impl Failure {
    fn new(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
        }
    }
}

impl From<decohere::Error> for Failure {
    fn from(e: decohere::Error) -> Self {
        Failure::new(e.to_string())
    }
}

/// Rendered standard output and the exit code to leave with.
struct Outcome {
    stdout: String,
    code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, code: 0 }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return 2;
            }
            out.code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            2
        }
    }
}

fn execute(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Info { scenario, common } => info(&scenario, common.format),
        Command::Eval {
            setup,
            p,
            picture,
            common,
        } => eval(&setup, p, picture, common.format).map(Outcome::ok),
        Command::Sweep {
            setup,
            p_min,
            p_max,
            steps,
            common,
        } => sweep_cmd(&setup, p_min, p_max, steps, common.format).map(Outcome::ok),
        Command::Threshold { setup, tol, common } => {
            threshold(&setup, tol, common.format).map(Outcome::ok)
        }
        Command::Bound { scenario, common } => bound(&scenario, common.format).map(Outcome::ok),
        Command::Verify {
            seed,
            samples,
            common,
        } => verify::run(seed, samples, common.format),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn inequality_line(s: &Scenario) -> String {
    let ineq = s.inequality();
    let terms: Vec<String> = ineq
        .gamma
        .iter()
        .enumerate()
        .map(|(k, g)| format!("{} <{}>", signed(*g), s.context_label(k)))
        .collect();
    format!("{} {} {}", terms.join(" "), ineq.direction.symbol(), ineq.bound)
}

#[derive(Serialize)]
struct InfoJson<'a> {
    scenario: ScenarioDoc,
    diagnostics: &'a [decohere::scenarios::DiagnosticCheck],
    valid: bool,
}

fn info(id: &str, fmt: OutputFormat) -> Result<Outcome, Failure> {
    let (s, diag) = inputs::load_scenario_unchecked(id)?;
    let valid = diag.passed();
    let stdout = match fmt {
        OutputFormat::Csv => return Err(Failure::new("info has no csv output")),
        OutputFormat::Json => to_json(&InfoJson {
            scenario: ScenarioDoc::from_scenario(&s),
            diagnostics: &diag.checks,
            valid,
        }),
        OutputFormat::Human => {
            let d = s.dimension();
            let mut out = format!("scenario {}\ndimension {d}\n", s.name());
            out += &format!("measurements ({})\n", s.measurements().len());
            for o in s.measurements() {
                let tr = o.matrix().trace().map(|t| t.re).unwrap_or(f64::NAN);
                let plus = ((d as f64 + tr) / 2.0).round();
                out += &format!(
                    "  {:<6} +1 x{}, -1 x{}\n",
                    o.label(),
                    plus,
                    d as f64 - plus
                );
            }
            out += &format!("contexts ({})\n", s.contexts().len());
            for (k, _) in s.contexts().iter().enumerate() {
                out += &format!(
                    "  {k:<3} {:<16} gamma {}\n",
                    s.context_label(k),
                    s.inequality().gamma[k]
                );
            }
            out += &format!("inequality {}\n", inequality_line(&s));
            out += &format!("bound {}\n", s.inequality().bound);
            out += "diagnostics\n";
            for c in &diag.checks {
                let tag = if c.passed { "ok  " } else { "FAIL" };
                out += &format!("  [{tag}] {}: {}\n", c.name, c.detail);
            }
            out += &format!("valid {valid}\n");
            out
        }
    };
    Ok(Outcome {
        stdout,
        code: if valid { 0 } else { 2 },
    })
}

fn noise_channel(p: f64, dim: usize) -> Result<Channel, Failure> {
    Channel::depolarizing(p, dim).map_err(|e| Failure::new(format!("--p: {e}")))
}

fn eval(setup: &Setup, p: f64, picture: Picture, fmt: OutputFormat) -> Result<String, Failure> {
    let s = inputs::load_scenario(&setup.scenario)?;
    let rho = inputs::load_state(&setup.state, s.dimension())?;
    let ch = noise_channel(p, s.dimension())?;
    let mut report = evaluate_inequality(&s, &rho, Some(&ch), setup.placement, picture)?;
    report.state = setup.state.clone();
    Ok(match fmt {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = report
                .contexts
                .iter()
                .zip(&report.gamma)
                .zip(&report.correlators)
                .map(|((c, g), v)| vec![c.clone(), g.to_string(), csv_num(*v)])
                .collect();
            csv_table(&["context", "gamma", "correlator"], &rows)
        }
        OutputFormat::Human => {
            let mut out = format!("scenario   {}\nstate      {}\n", report.scenario, report.state);
            out += &match report.p {
                Some(p) => format!("noise      depolarizing p = {} {}\n", human_num(p), report.placement.as_str()),
                None => "noise      none\n".to_string(),
            };
            out += &format!("picture    {}", report.picture);
            if let Some(r) = report.picture_residual {
                out += &format!(" (max residual {r:.2e})");
            }
            out += "\n\n";
            let width = report.contexts.iter().map(String::len).max().unwrap_or(0).max(7);
            out += &format!("{:<width$}  {:>6}  {:>12}\n", "context", "gamma", "correlator");
            for ((c, g), v) in report.contexts.iter().zip(&report.gamma).zip(&report.correlators) {
                out += &format!("{c:<width$}  {:>6}  {:>12}\n", signed(*g), human_num(*v));
            }
            out += &format!(
                "\nvalue      {}\nbound      {} {}\nviolated   {}\n",
                human_num(report.value),
                report.direction.symbol(),
                report.bound,
                report.violated
            );
            out
        }
    })
}

fn sweep_cmd(setup: &Setup, p_min: f64, p_max: f64, steps: usize, fmt: OutputFormat) -> Result<String, Failure> {
    let s = inputs::load_scenario(&setup.scenario)?;
    let rho = inputs::load_state(&setup.state, s.dimension())?;
    let mut series = sweep(&s, &rho, setup.placement, p_min, p_max, steps)?;
    series.state = setup.state.clone();
    Ok(match fmt {
        OutputFormat::Json => to_json(&series),
        OutputFormat::Csv => {
            let rows: Vec<Vec<String>> = series
                .points
                .iter()
                .map(|pt| {
                    vec![
                        csv_num(pt.p),
                        csv_num(pt.value),
                        csv_num(series.bound),
                        pt.violated.to_string(),
                    ]
                })
                .collect();
            csv_table(&["p", "value", "bound", "violated"], &rows)
        }
        OutputFormat::Human => {
            let mut out = format!(
                "scenario {}  state {}  placement {}  bound {} {}\n\n",
                series.scenario,
                series.state,
                series.placement.as_str(),
                series.direction.symbol(),
                series.bound
            );
            out += &format!("{:>10}  {:>12}  violated\n", "p", "value");
            for pt in &series.points {
                out += &format!("{:>10}  {:>12}  {}\n", human_num(pt.p), human_num(pt.value), pt.violated);
            }
            let show = |t: Option<f64>| t.map_or_else(|| "n/a".to_string(), human_num);
            out += &format!(
                "\nanalytic threshold {}\nnumeric threshold  {}\n",
                show(series.analytic_threshold),
                show(series.numeric_threshold)
            );
            out
        }
    })
}

#[derive(Serialize)]
struct ThresholdReport {
    scenario: String,
    state: String,
    placement: NoisePlacement,
    tol: f64,
    outcome: &'static str,
    p: Option<f64>,
    analytic_threshold: Option<f64>,
}

fn outcome_text(o: ThresholdOutcome) -> &'static str {
    match o {
        ThresholdOutcome::Crossing(_) => "crossing",
        ThresholdOutcome::NeverViolates => "never violates",
        ThresholdOutcome::AlwaysViolates => "always violates",
    }
}

fn threshold(setup: &Setup, tol: f64, fmt: OutputFormat) -> Result<String, Failure> {
    let s = inputs::load_scenario(&setup.scenario)?;
    let rho = inputs::load_state(&setup.state, s.dimension())?;
    let outcome = find_threshold(&s, &rho, setup.placement, tol)?;
    let report = ThresholdReport {
        scenario: s.name().to_string(),
        state: setup.state.clone(),
        placement: setup.placement,
        tol,
        outcome: outcome_text(outcome),
        p: outcome.crossing(),
        analytic_threshold: analytic_threshold(&s, &rho, setup.placement)?,
    };
    Ok(match fmt {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => csv_table(
            &["outcome", "p"],
            &[vec![report.outcome.to_string(), report.p.map(csv_num).unwrap_or_default()]],
        ),
        OutputFormat::Human => {
            let mut out = match report.p {
                Some(p) => format!("threshold {}\n", human_num(p)),
                None => format!("threshold {}\n", report.outcome),
            };
            if let Some(a) = report.analytic_threshold {
                out += &format!("analytic  {}\n", human_num(a));
            }
            out
        }
    })
}

#[derive(Serialize)]
struct BoundReport {
    scenario: String,
    assignments: u64,
    min: f64,
    argmin: String,
    max: f64,
    argmax: String,
    bound: f64,
    direction: Direction,
    /// The classical extreme on the side the inequality constrains.
    tight: bool,
}

fn bound(id: &str, fmt: OutputFormat) -> Result<String, Failure> {
    let s = inputs::load_scenario(id)?;
    let b = classical_bound(&s)?;
    let ineq = s.inequality();
    let extreme = match ineq.direction {
        Direction::AtMost => b.max,
        Direction::AtLeast => b.min,
    };
    let report = BoundReport {
        scenario: s.name().to_string(),
        assignments: b.assignments,
        min: b.min,
        argmin: b.argmin.to_string(),
        max: b.max,
        argmax: b.argmax.to_string(),
        bound: ineq.bound,
        direction: ineq.direction,
        tight: extreme == ineq.bound,
    };
    Ok(match fmt {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => csv_table(
            &["extreme", "value", "assignment"],
            &[
                vec!["min".into(), report.min.to_string(), report.argmin.clone()],
                vec!["max".into(), report.max.to_string(), report.argmax.clone()],
            ],
        ),
        OutputFormat::Human => format!(
            "scenario {}\nassignments {}\nmin {}  witness {}\nmax {}  witness {}\ninequality {} {}  (tight: {})\n",
            report.scenario,
            report.assignments,
            report.min,
            report.argmin,
            report.max,
            report.argmax,
            ineq.direction.symbol(),
            ineq.bound,
            report.tight
        ),
    })
}
