//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use fockvir::operators::{build_l, is_safe};
use fockvir::rational::{frac, int};
use fockvir::verify::{
    central_charge_at, central_charge_formula, check_christoffel, check_virasoro_relation,
    extract_central_charge, jacobi_spot_check, run_dirac_checks,
};
use fockvir::{CheckReport, CheckStatus, FamilyParams, GeneratorFamily, ModeIndex, Rational, ScenarioParams, StateVector, Truncation, Window};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn from_reports(reports: &[CheckReport]) -> Self {
        let failed: Vec<&CheckReport> = reports.iter().filter(|r| r.status == CheckStatus::Fail).collect();
        let skipped = reports.iter().filter(|r| r.status == CheckStatus::Skipped).count();
        match failed.first() {
            None if skipped > 0 => Outcome {
                passed: true,
                detail: format!("{} checks, {skipped} vacuous (no safe state)", reports.len()),
            },
            None => Outcome { passed: true, detail: format!("{} checks", reports.len()) },
            Some(r) => Outcome {
                passed: false,
                detail: format!("{} of {} failed, first: {r}", failed.len(), reports.len()),
            },
        }
    }

    fn error(e: impl std::fmt::Display) -> Self {
        Outcome { passed: false, detail: format!("error: {e}") }
    }
}

fn scenario(family: GeneratorFamily, mass: Rational, lambda: Rational) -> ScenarioParams {
    ScenarioParams::new(family, mass, lambda)
}

fn grid() -> Vec<ScenarioParams> {
    let mut out = Vec::new();
    for m in [int(0), frac(1, 2), int(1), int(2)] {
        for l in [int(0), frac(1, 2), int(1)] {
            out.push(scenario(GeneratorFamily::BosonUnconstrained, m.clone(), l));
        }
    }
    for m in [frac(1, 2), int(1), int(2)] {
        for l in [int(0), frac(1, 2), int(1)] {
            out.push(scenario(GeneratorFamily::BosonReduced, m.clone(), l));
        }
    }
    for l in [int(0), frac(1, 3), frac(1, 2), int(1), int(2)] {
        out.push(scenario(GeneratorFamily::FermionUnconstrained, int(1), l));
    }
    out.push(scenario(GeneratorFamily::FermionReduced, int(1), int(0)));
    out
}

fn representatives() -> Vec<ScenarioParams> {
    vec![
        scenario(GeneratorFamily::BosonUnconstrained, int(1), frac(1, 2)),
        scenario(GeneratorFamily::BosonReduced, frac(1, 2), int(1)),
        scenario(GeneratorFamily::FermionUnconstrained, int(1), frac(1, 3)),
        scenario(GeneratorFamily::FermionReduced, int(1), int(0)),
    ]
}

fn central_charge_grid() -> Outcome {
    let start = Instant::now();
    let mut reports = Vec::new();
    for s in grid() {
        let expected = central_charge_formula(s.family, &s.params);
        let probe = format!("{} M={} λ={}", s.family, s.params.mass, s.params.lambda);
        match extract_central_charge(&s) {
            Ok(c) => reports.push(CheckReport::compare("central_charge", "c oracle", &expected, &c, probe)),
            Err(e) => return Outcome::error(format!("{probe}: {e}")),
        }
    }
    let c_half = central_charge_formula(GeneratorFamily::FermionUnconstrained, &FamilyParams::new(int(1), frac(1, 2)));
    reports.push(CheckReport::compare("c_at_half", "c = 1 at λ = 1/2", int(1), c_half, "fermion"));
    let elapsed = start.elapsed();
    let mut out = Outcome::from_reports(&reports);
    out.detail = format!("{} in {:.1?}", out.detail, elapsed);
    if elapsed.as_secs() >= 60 {
        out.passed = false;
        out.detail.push_str(" (over 60 s)");
    }
    out
}

fn virasoro_identity() -> Outcome {
    let mut reports = Vec::new();
    let mut extended = Vec::new();
    for s in representatives() {
        let c = match extract_central_charge(&s) {
            Ok(c) => c,
            Err(e) => return Outcome::error(e),
        };
        // at level 11/2, m = n = 3 has no safe state; level 6 reaches it
        let wider = s.family.is_fermionic().then(|| s.clone().with_truncation(Truncation::from_doubled(12, 0)));
        match check_virasoro_relation(&s, &c) {
            Ok(r) => reports.extend(r),
            Err(e) => return Outcome::error(e),
        }
        if let Some(w) = wider {
            match check_virasoro_relation(&w, &c) {
                Ok(r) => extended.extend(r),
                Err(e) => return Outcome::error(e),
            }
        }
    }
    if let Some(r) = extended.iter().find(|r| !r.passed()) {
        return Outcome { passed: false, detail: format!("at level 6: {r}") };
    }
    let mut out = Outcome::from_reports(&reports);
    out.detail = format!("{}; {} more at fermion level 6", out.detail, extended.len());
    out
}

fn dirac_reports() -> Result<Vec<CheckReport>, fockvir::Error> {
    run_dirac_checks(&int(1), &frac(1, 2), Window::new(8)?, 3)
}

fn select(reports: &[CheckReport], prefixes: &[&str]) -> Vec<CheckReport> {
    reports
        .iter()
        .filter(|r| prefixes.iter().any(|p| r.name.starts_with(p)))
        .cloned()
        .collect()
}

fn dirac_machinery(all: &[CheckReport]) -> Outcome {
    let picked = select(all, &["delta_contract", "bracket_matrix", "dirac_bracket", "dirac_zero_modes"]);
    if picked.len() < 9 {
        return Outcome { passed: false, detail: format!("only {} reports", picked.len()) };
    }
    Outcome::from_reports(&picked)
}

fn compatibility(all: &[CheckReport]) -> Outcome {
    let picked = select(all, &["compatibility", "fermion_only_if", "dirac_kills_constraints"]);
    let only_if = picked.iter().find(|r| r.name == "fermion_only_if");
    match only_if {
        Some(r) if r.passed() && r.got == "incompatible" => Outcome::from_reports(&picked),
        _ => Outcome { passed: false, detail: "λ = 0 was not reported incompatible".into() },
    }
}

fn classification(all: &[CheckReport]) -> Outcome {
    let picked = select(all, &["classify"]);
    if picked.len() != 3 {
        return Outcome { passed: false, detail: format!("{} classification reports", picked.len()) };
    }
    Outcome::from_reports(&picked)
}

fn christoffel() -> Outcome {
    let mut reports = Vec::new();
    for (m, l) in [(int(1), int(1)), (frac(1, 2), frac(-2, 3))] {
        let s = scenario(GeneratorFamily::BosonReduced, m, l);
        match check_christoffel(&s) {
            Ok(r) => reports.extend(r),
            Err(e) => return Outcome::error(e),
        }
    }
    Outcome::from_reports(&reports)
}

fn window_doubling() -> Result<usize, String> {
    let spaces: Vec<(ScenarioParams, fockvir::FockSpace)> = representatives()
        .into_iter()
        .map(|s| {
            let space = s.space().expect("default truncation is valid");
            (s, space)
        })
        .collect();
    let bases: Vec<Vec<fockvir::BasisState>> = spaces.iter().map(|(_, sp)| sp.enumerate_basis()).collect();
    let mut runner = TestRunner::new(Config { cases: 100, failure_persistence: None, ..Config::default() });
    let strategy = (0..spaces.len(), -3i64..=3, any::<prop::sample::Index>());
    let probes = std::cell::Cell::new(0usize);
    runner
        .run(&strategy, |(family, m, pick)| {
            let (s, space) = &spaces[family];
            let op = build_l(s.family, ModeIndex::integer(m), &s.params).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let safe: Vec<&fockvir::BasisState> =
                bases[family].iter().filter(|b| is_safe(space, b, &[op.degree()])).collect();
            let psi = pick.get(&safe);
            let v = StateVector::basis((*psi).clone());
            let narrow = op.apply(space, &v).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let wide = op
                .apply_windowed(space, &v, 2 * op.default_window_doubled(space))
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(narrow, wide, "L[{}] on {}", m, psi);
            probes.set(probes.get() + 1);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(probes.get())
}

fn self_checks() -> Outcome {
    let mut reports = Vec::new();
    for s in representatives() {
        match jacobi_spot_check(&s, (1, 2, -3)) {
            Ok(r) => reports.push(r),
            Err(e) => return Outcome::error(e),
        }
    }
    for s in grid() {
        let probe = format!("{} M={} λ={}", s.family, s.params.mass, s.params.lambda);
        match (central_charge_at(&s, 2), central_charge_at(&s, 3)) {
            (Ok(a), Ok(b)) => reports.push(CheckReport::compare("oracle_consistency", "c(m=2) = c(m=3)", a, b, probe)),
            (Err(e), _) | (_, Err(e)) => return Outcome::error(e),
        }
    }
    match window_doubling() {
        Ok(n) => reports.push(CheckReport::compare("window_doubling", "doubled window", 100, n, "random probes")),
        Err(e) => return Outcome { passed: false, detail: format!("window doubling: {e}") },
    }
    Outcome::from_reports(&reports)
}

fn main() -> ExitCode {
    let dirac = dirac_reports();
    let from_dirac = |f: fn(&[CheckReport]) -> Outcome| match &dirac {
        Ok(r) => f(r),
        Err(e) => Outcome::error(e),
    };
    let results = [
        ("1 central-charge grid", central_charge_grid()),
        ("2 Virasoro operator identity", virasoro_identity()),
        ("3 Dirac machinery", from_dirac(dirac_machinery)),
        ("4 compatibility and only-if", from_dirac(compatibility)),
        ("5 constraint classification", from_dirac(classification)),
        ("6 Christoffel anomaly", christoffel()),
        ("7 engine self-checks", self_checks()),
    ];
    let mut ok = true;
    for (name, out) in &results {
        println!("criterion {name}: {} ({})", if out.passed { "PASS" } else { "FAIL" }, out.detail);
        ok &= out.passed;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
