use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use uryson::band::{project, EvalMode};
use uryson::calculus::{pointwise, Formula};
use uryson::element::{LatticeElement, Model};
use uryson::error::{Error, Result};
use uryson::lateral::{check_admissible, continuous_part_at};
use uryson::operator::{Operator, UrysonOperator};
use uryson::rational::{self, Rational};
use uryson::report::Report;
use uryson::scenario::Scenario;
use uryson::suite::{run_suite_with, SuiteOptions};

#[derive(Parser)]
#[command(name = "uryson", version, about = "Exact calculus of orthogonally additive operators")]
struct Cli {
    /// Scenario file (TOML). Defaults to the built-in worked examples.
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Fragment resolution for sequences. Defaults to the scenario's.
    #[arg(long, global = true)]
    resolution: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Machine,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Grid,
}

#[derive(Subcommand)]
enum Command {
    /// Print Tx.
    Eval { operator: String, element: String },
    /// Evaluate join, meet, pos, neg or abs at an element: `calc join T S x`, `calc pos T x`.
    Calc {
        formula: String,
        #[arg(num_args = 2..=3)]
        args: Vec<String>,
    },
    /// Split Te into its parts in and off the band generated by S.
    BandProject {
        t: String,
        s: String,
        element: String,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// ε for the grid mode.
        #[arg(long)]
        eps: Option<String>,
    },
    /// Split Te into laterally continuous and singular parts.
    Decompose { operator: String, element: String },
    /// Describe an admissible set, optionally checking its closure rules.
    Admissible {
        set: String,
        #[arg(long)]
        check: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
        /// Add a negative control that must fail.
        #[arg(long)]
        inject_corruption: bool,
    },
    /// Render a saved machine-format report.
    Report { file: PathBuf },
}

/// Failures map to exit status 1, usage and input problems to 2.
enum Outcome {
    Ok,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let scenario = match &cli.scenario {
        Some(path) => Scenario::load(path)?,
        None => Scenario::builtin(),
    };
    let resolution = cli.resolution.unwrap_or(scenario.suites.resolution);
    let out = Output { format: cli.format };
    match &cli.command {
        Command::Eval { operator, element } => {
            let t = scenario.operator(operator)?;
            let x = parse_element(&scenario, element, t.domain().model())?;
            out.vector("eval", json!({"operator": operator, "input": x.to_string()}), "", &t.apply(&x)?);
        }
        Command::Calc { formula, args } => {
            let f: Formula = formula.parse()?;
            let needs_s = matches!(f, Formula::Join | Formula::Meet);
            let (t, s, x) = match (needs_s, args.as_slice()) {
                (true, [t, s, x]) => (t, Some(s), x),
                (false, [t, x]) => (t, None, x),
                _ => return Err(Error::Usage(format!("`calc {f}` takes {} arguments", if needs_s { "T S x" } else { "T x" }))),
            };
            let top = scenario.operator(t)?;
            let other = s.map(|s| scenario.operator(s)).transpose()?;
            let x = parse_element(&scenario, x, top.domain().model())?;
            let value = pointwise::<UrysonOperator, UrysonOperator>(f, top, other, &x, resolution)?;
            out.vector(
                "calc",
                json!({"formula": f.to_string(), "operator": t, "other": s, "input": x.to_string()}),
                "",
                &value.output,
            );
        }
        Command::BandProject { t, s, element, mode, eps } => {
            let top = scenario.operator(t)?;
            let gen = scenario.operator(s)?;
            let e = parse_element(&scenario, element, top.domain().model())?;
            let mode = match (mode, eps) {
                (Mode::Exact, None) => EvalMode::ExactLimit,
                (Mode::Exact, Some(_)) => return Err(Error::Usage("--eps needs --mode grid".into())),
                (Mode::Grid, Some(eps)) => EvalMode::Epsilon(rational::parse(eps)?),
                (Mode::Grid, None) => return Err(Error::Usage("--mode grid needs --eps".into())),
            };
            let p = project(top, gen, &e, &mode, resolution)?;
            out.pair(
                "band-project",
                json!({"operator": t, "generator": s, "input": e.to_string(), "mode": p.mode.to_string()}),
                ("pi", &p.pi_part),
                ("sigma", &p.sigma_part),
            );
        }
        Command::Decompose { operator, element } => {
            let t = scenario.operator(operator)?;
            let e = parse_element(&scenario, element, t.domain().model())?;
            let parts = continuous_part_at(t, &e, resolution)?;
            out.pair(
                "decompose",
                json!({"operator": operator, "input": e.to_string()}),
                ("continuous", &parts.continuous_part),
                ("singular", &parts.singular_part),
            );
        }
        Command::Admissible { set, check } => {
            let d = scenario.admissible(set)?;
            let verdict = check.then(|| check_admissible(&d, resolution)).transpose()?;
            match out.format {
                Format::Table => {
                    println!("{}: model {}, laterally dense: {} ({})", d.name(), d.model(), d.laterally_dense(), d.justification());
                    if let Some(v) = &verdict {
                        let status = if v.passed { "pass" } else { "fail" };
                        println!("admissible: {status} ({} checks)", v.checked);
                        if let Some(w) = &v.witness {
                            println!("witness: {w}");
                        }
                    }
                }
                Format::Machine => println!(
                    "{}",
                    json!({
                        "command": "admissible",
                        "set": d.name(),
                        "model": d.model().to_string(),
                        "laterally_dense": d.laterally_dense(),
                        "status": verdict.as_ref().map(|v| if v.passed { "pass" } else { "fail" }),
                        "checked": verdict.as_ref().map(|v| v.checked),
                        "witness": verdict.as_ref().and_then(|v| v.witness.clone()),
                    })
                ),
            }
            if verdict.is_some_and(|v| !v.passed) {
                return Ok(Outcome::CheckFailed);
            }
        }
        Command::Verify { suite, seed, trials, inject_corruption } => {
            let seed = match (seed, out.format) {
                (Some(s), _) => *s,
                (None, Format::Machine) => return Err(Error::Usage("--seed is required with --format machine".into())),
                (None, Format::Table) => scenario.suites.seed.unwrap_or(0),
            };
            let mut options = SuiteOptions::from_scenario(&scenario);
            options.resolution = resolution;
            options.inject_corruption = *inject_corruption;
            if let Some(t) = trials {
                options.trials = *t;
            }
            let report = run_suite_with(&scenario, suite, seed, &options)?;
            out.report(&report);
            if !report.all_passed() {
                return Ok(Outcome::CheckFailed);
            }
        }
        Command::Report { file } => {
            let text = fs::read_to_string(file)
                .map_err(|e| Error::Scenario(format!("cannot read {}: {e}", file.display())))?;
            let report = Report::from_machine(&text)?;
            out.report(&report);
            if !report.all_passed() {
                return Ok(Outcome::CheckFailed);
            }
        }
    }
    Ok(Outcome::Ok)
}

struct Output {
    format: Format,
}

fn coords(x: &LatticeElement) -> Vec<String> {
    x.coords().iter().map(rational::format).collect()
}

impl Output {
    fn vector(&self, command: &str, mut meta: serde_json::Value, label: &str, x: &LatticeElement) {
        match self.format {
            Format::Table if label.is_empty() => println!("{}", coords(x).join(" ")),
            Format::Table => println!("{label}: {}", coords(x).join(" ")),
            Format::Machine => {
                meta["command"] = json!(command);
                meta["output"] = json!(coords(x));
                println!("{meta}");
            }
        }
    }

    fn pair(&self, command: &str, mut meta: serde_json::Value, a: (&str, &LatticeElement), b: (&str, &LatticeElement)) {
        match self.format {
            Format::Table => {
                println!("{}: {}", a.0, coords(a.1).join(" "));
                println!("{}: {}", b.0, coords(b.1).join(" "));
            }
            Format::Machine => {
                meta["command"] = json!(command);
                meta[a.0] = json!(coords(a.1));
                meta[b.0] = json!(coords(b.1));
                println!("{meta}");
            }
        }
    }

    fn report(&self, report: &Report) {
        match self.format {
            Format::Table => print!("{}", report.to_table()),
            Format::Machine => print!("{}", report.to_machine()),
        }
    }
}

/// A scenario element name, `0`, a vector `1,-1/2`, or a sequence
/// `prefix|tail` such as `5,2|3` or `|1`.
fn parse_element(scenario: &Scenario, text: &str, model: Model) -> Result<LatticeElement> {
    let text = text.trim();
    if let Ok(x) = scenario.element(text) {
        return check(x.clone(), model, text);
    }
    if text == "0" {
        return Ok(LatticeElement::zero(model));
    }
    let list = |s: &str| -> Result<Vec<Rational>> {
        s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(rational::parse).collect()
    };
    let x = match text.split_once('|') {
        Some((prefix, tail)) => LatticeElement::ec_seq(list(prefix)?, rational::parse(tail.trim())?),
        None => LatticeElement::finite(list(text)?),
    };
    check(x, model, text)
}

fn check(x: LatticeElement, model: Model, text: &str) -> Result<LatticeElement> {
    if x.model() == model {
        Ok(x)
    } else {
        Err(Error::Usage(format!("element `{text}` is in {} but the operator acts on {model}", x.model())))
    }
}
