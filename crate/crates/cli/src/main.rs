use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use fockvir::rational::{self, Rational};
use fockvir::verify::{central_charge_formula, extract_central_charge, run_dirac_checks, run_family_suite};
use fockvir::{CheckReport, CheckStatus, Error, GeneratorFamily, ScenarioParams, Truncation, Window};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "fockvir", version, about = "Exact checks of free-field Virasoro Fock modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification scenario, or sweep the central charge over a grid.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Scenario {
    BosonUnconstrained,
    BosonReduced,
    FermionUnconstrained,
    FermionReduced,
    DiracChecks,
    All,
}

impl Scenario {
    fn family(self) -> Option<GeneratorFamily> {
        match self {
            Scenario::BosonUnconstrained => Some(GeneratorFamily::BosonUnconstrained),
            Scenario::BosonReduced => Some(GeneratorFamily::BosonReduced),
            Scenario::FermionUnconstrained => Some(GeneratorFamily::FermionUnconstrained),
            Scenario::FermionReduced => Some(GeneratorFamily::FermionReduced),
            Scenario::DiracChecks | Scenario::All => None,
        }
    }

    fn name(self) -> &'static str {
        match self.family() {
            Some(f) => f.name(),
            None if self == Scenario::DiracChecks => "dirac-checks",
            None => "all",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    scenario: Scenario,
    /// Boson mass parameter, `p/q`.
    #[arg(long = "M", default_value = "1", value_parser = parse_rational)]
    mass: Rational,
    #[arg(long, default_value = "1/2", value_parser = parse_rational, allow_hyphen_values = true)]
    lambda: Rational,
    /// Level cap; defaults to 6 for bosons and 11/2 for fermions.
    #[arg(long, value_parser = parse_rational)]
    level: Option<Rational>,
    #[arg(long, default_value_t = 4)]
    zmax: u32,
    #[arg(long, default_value_t = 3)]
    mmax: i64,
    #[arg(long, default_value_t = 8)]
    window: u32,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// File of `M λ` pairs, one per line; `#` starts a comment.
    #[arg(long)]
    sweep: Option<PathBuf>,
}

fn parse_rational(text: &str) -> Result<Rational, String> {
    rational::parse(text).map_err(|e| e.to_string())
}

/// A check tagged with the scenario that produced it.
struct Entry {
    scenario: &'static str,
    report: CheckReport,
}

struct Charges {
    family: GeneratorFamily,
    formula: Rational,
    oracle: Option<Rational>,
}

struct Run {
    entries: Vec<Entry>,
    charges: Vec<Charges>,
}

impl Run {
    fn failed(&self) -> usize {
        self.entries.iter().filter(|e| e.report.status == CheckStatus::Fail).count()
    }
}

fn scenario_params(args: &VerifyArgs, family: GeneratorFamily, mass: &Rational, lambda: &Rational) -> Result<ScenarioParams, Error> {
    let mut s = ScenarioParams::new(family, mass.clone(), lambda.clone()).with_m_range(args.mmax);
    let level = match &args.level {
        Some(l) => l.clone(),
        None => s.trunc.level_cap(),
    };
    s.trunc = Truncation::new(&level, args.zmax)?;
    s.window = Window::new(args.window)?;
    Ok(s)
}

fn run_family(args: &VerifyArgs, family: GeneratorFamily, run: &mut Run) -> Result<(), Error> {
    let s = scenario_params(args, family, &args.mass, &args.lambda)?;
    s.space()?;
    match run_family_suite(&s) {
        Ok(suite) => {
            run.charges.push(Charges { family, formula: suite.c_formula, oracle: Some(suite.c_oracle) });
            run.entries.extend(suite.checks.into_iter().map(|report| Entry { scenario: family.name(), report }));
        }
        Err(Error::OracleInconsistency { at_two, at_three }) => {
            let formula = central_charge_formula(family, &s.params);
            run.entries.push(Entry {
                scenario: family.name(),
                report: CheckReport::fail(
                    "central_charge",
                    "c from <0|[L_m, L_-m]|0>, m = 2, 3",
                    formula.to_string(),
                    format!("inconsistent ({at_two} at m=2, {at_three} at m=3)"),
                    "oracle",
                ),
            });
            run.charges.push(Charges { family, formula, oracle: None });
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

fn run_scenario(args: &VerifyArgs) -> Result<Run, Error> {
    let mut run = Run { entries: Vec::new(), charges: Vec::new() };
    let families: Vec<GeneratorFamily> = match args.scenario.family() {
        Some(f) => vec![f],
        None if args.scenario == Scenario::All => GeneratorFamily::ALL.to_vec(),
        None => Vec::new(),
    };
    for family in families {
        run_family(args, family, &mut run)?;
    }
    if matches!(args.scenario, Scenario::DiracChecks | Scenario::All) {
        let reports = run_dirac_checks(&args.mass, &args.lambda, Window::new(args.window)?, args.mmax)?;
        run.entries.extend(reports.into_iter().map(|report| Entry { scenario: "dirac-checks", report }));
    }
    // stable sort keeps the (m, n) order within each check name
    run.entries.sort_by(|a, b| (a.scenario, &a.report.name).cmp(&(b.scenario, &b.report.name)));
    Ok(run)
}

fn parse_sweep(text: &str) -> anyhow::Result<Vec<(Rational, Rational)>> {
    let mut grid = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [m, l] = fields[..] else {
            bail!("line {}: expected `M λ`, found {line:?}", no + 1);
        };
        let m = rational::parse(m).with_context(|| format!("line {}", no + 1))?;
        let l = rational::parse(l).with_context(|| format!("line {}", no + 1))?;
        grid.push((m, l));
    }
    if grid.is_empty() {
        bail!("sweep grid is empty");
    }
    Ok(grid)
}

fn sweep(args: &VerifyArgs, grid: &[(Rational, Rational)]) -> anyhow::Result<Run> {
    let Some(family) = args.scenario.family() else {
        bail!("--sweep needs a single generator family, not {}", args.scenario.name());
    };
    let mut run = Run { entries: Vec::new(), charges: Vec::new() };
    for (m, l) in grid {
        let s = scenario_params(args, family, m, l)?;
        s.space()?;
        let formula = central_charge_formula(family, &s.params);
        let probe = format!("M={m} λ={l}");
        let law = "c from <0|[L_m, L_-m]|0>, m = 2, 3";
        let report = match extract_central_charge(&s) {
            Ok(c) => CheckReport::compare("central_charge", law, &formula, &c, probe),
            Err(Error::OracleInconsistency { at_two, at_three }) => {
                CheckReport::fail("central_charge", law, formula.to_string(), format!("inconsistent ({at_two}, {at_three})"), probe)
            }
            Err(e) => return Err(e.into()),
        };
        run.entries.push(Entry { scenario: family.name(), report });
    }
    Ok(run)
}

fn params_json(args: &VerifyArgs) -> Value {
    json!({
        "M": args.mass.to_string(),
        "lambda": args.lambda.to_string(),
        "level": args.level.as_ref().map(|l| l.to_string()),
        "zmax": args.zmax,
        "mmax": args.mmax,
        "window": args.window,
    })
}

fn summary(run: &Run) -> (usize, usize, usize) {
    let count = |s: CheckStatus| run.entries.iter().filter(|e| e.report.status == s).count();
    (count(CheckStatus::Pass), count(CheckStatus::Fail), count(CheckStatus::Skipped))
}

fn render_json(args: &VerifyArgs, run: &Run) -> Value {
    let checks: Vec<Value> = run
        .entries
        .iter()
        .map(|e| {
            json!({
                "scenario": e.scenario,
                "name": e.report.name,
                "law": e.report.law,
                "status": e.report.status.to_string(),
                "expected": e.report.expected,
                "got": e.report.got,
                "probe": e.report.probe,
            })
        })
        .collect();
    let (passed, failed, skipped) = summary(run);
    let mut out = json!({
        "scenario": args.scenario.name(),
        "params": params_json(args),
        "checks": checks,
        "summary": {
            "total": run.entries.len(),
            "passed": passed,
            "failed": failed,
            "skipped": skipped,
            "status": if failed == 0 { "pass" } else { "fail" },
        },
    });
    if !run.charges.is_empty() {
        out["central_charges"] = run
            .charges
            .iter()
            .map(|c| {
                json!({
                    "family": c.family.name(),
                    "c_formula": c.formula.to_string(),
                    "c_oracle": c.oracle.as_ref().map(|o| o.to_string()),
                })
            })
            .collect();
    }
    if let [c] = &run.charges[..] {
        out["c_formula"] = json!(c.formula.to_string());
        out["c_oracle"] = json!(c.oracle.as_ref().map(|o| o.to_string()));
    }
    out
}

fn render_text(run: &Run) -> String {
    let mut out = String::new();
    let mut current = "";
    for e in &run.entries {
        if e.scenario != current {
            current = e.scenario;
            out.push_str(&format!("== {current}\n"));
        }
        out.push_str(&format!("{}\n", e.report));
    }
    let (passed, failed, skipped) = summary(run);
    out.push_str(&format!(
        "summary: {} checks, {passed} passed, {failed} failed, {skipped} skipped: {}\n",
        run.entries.len(),
        if failed == 0 { "pass" } else { "fail" }
    ));
    out
}

fn verify_command(args: &VerifyArgs) -> anyhow::Result<Run> {
    if args.mmax < 2 {
        bail!("--mmax must be at least 2");
    }
    match &args.sweep {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let grid = parse_sweep(&text)?;
            sweep(args, &grid)
        }
        None => Ok(run_scenario(args)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Verify(args) = cli.command;
    let run = match verify_command(&args) {
        Ok(run) => run,
        Err(e) => {
            eprintln!("fockvir: {e:#}");
            return ExitCode::from(2);
        }
    };
    match args.format {
        Format::Text => print!("{}", render_text(&run)),
        Format::Json => println!("{}", serde_json::to_string_pretty(&render_json(&args, &run)).expect("serializable")),
    }
    if run.failed() == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fockvir::rational::int;

    #[test]
    fn sweep_file_parsing() {
        let grid = parse_sweep("# M lambda\n1/2 1\n\n2 -1/3  # trailing\n").unwrap();
        assert_eq!(grid, vec![(rational::frac(1, 2), int(1)), (int(2), rational::frac(-1, 3))]);
        assert!(parse_sweep("# nothing\n").is_err());
        assert!(parse_sweep("1 2 3\n").is_err());
        assert!(parse_sweep("1 x\n").is_err());
    }

    #[test]
    fn scenario_names() {
        assert_eq!(Scenario::DiracChecks.name(), "dirac-checks");
        assert_eq!(Scenario::BosonReduced.name(), "boson-reduced");
    }
}
