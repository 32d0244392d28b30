//! End-to-end checks: the Virasoro relation with its central term, the
//! vacuum-component central-charge oracle, primary-field and anomaly laws,
//! and the Dirac-machinery suite.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{AlgebraId, Mode, ModeIndex};
use crate::dirac::{self, ConstraintFamily, ConstraintLabel, Window};
use crate::error::{Error, Result};
use crate::fock::{BasisState, FockSpace, StateVector, Truncation};
use crate::linear::LinearExpr;
use crate::operators::{
    build_b, build_chi_boson, build_k, build_l, commutator_action, is_safe, FamilyParams,
    GeneratorFamily, OperatorSpec,
};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    /// The identity under test, as a formula.
    pub law: String,
    pub status: CheckStatus,
    pub expected: String,
    pub got: String,
    pub probe: String,
}

impl CheckReport {
    fn new(
        status: CheckStatus,
        name: &str,
        law: &str,
        expected: impl Into<String>,
        got: impl Into<String>,
        probe: impl Into<String>,
    ) -> Self {
        CheckReport {
            name: name.to_string(),
            law: law.to_string(),
            status,
            expected: expected.into(),
            got: got.into(),
            probe: probe.into(),
        }
    }

    pub fn pass(
        name: &str,
        law: &str,
        expected: impl Into<String>,
        got: impl Into<String>,
        probe: impl Into<String>,
    ) -> Self {
        CheckReport::new(CheckStatus::Pass, name, law, expected, got, probe)
    }

    pub fn fail(
        name: &str,
        law: &str,
        expected: impl Into<String>,
        got: impl Into<String>,
        probe: impl Into<String>,
    ) -> Self {
        CheckReport::new(CheckStatus::Fail, name, law, expected, got, probe)
    }

    pub fn skipped(name: &str, law: &str, probe: impl Into<String>) -> Self {
        CheckReport::new(CheckStatus::Skipped, name, law, "-", "-", probe)
    }

    /// Pass iff `expected == got`.
    pub fn compare(name: &str, law: &str, expected: impl fmt::Display, got: impl fmt::Display, probe: impl Into<String>) -> Self {
        let (e, g) = (expected.to_string(), got.to_string());
        let status = if e == g { CheckStatus::Pass } else { CheckStatus::Fail };
        CheckReport::new(status, name, law, e, g, probe)
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} expected={} got={} {}  # {} | {}",
            self.name, self.expected, self.got, self.status, self.probe, self.law
        )
    }
}

const VIRASORO_LAW: &str = "[L_m, L_n] = (n-m) L_{m+n} - c/12 (m^3-m) δ_{m+n}";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioParams {
    pub family: GeneratorFamily,
    pub params: FamilyParams,
    pub trunc: Truncation,
    pub m_range: i64,
    pub window: Window,
}

impl ScenarioParams {
    /// Default grid: level cap 6 (bosons) or 11/2 (fermions), `a†[0]` cap 4,
    /// `|m| ≤ 3`, constraint window 8.
    pub fn new(family: GeneratorFamily, mass: Rational, lambda: Rational) -> Self {
        let trunc = if family.is_fermionic() {
            Truncation::from_doubled(11, 4)
        } else {
            Truncation::integer(6, 4)
        };
        ScenarioParams {
            family,
            params: FamilyParams::new(mass, lambda),
            trunc,
            m_range: 3,
            window: Window::new(8).expect("positive"),
        }
    }

    pub fn with_truncation(mut self, trunc: Truncation) -> Self {
        self.trunc = trunc;
        self
    }

    pub fn with_m_range(mut self, m_range: i64) -> Self {
        self.m_range = m_range;
        self
    }

    pub fn space(&self) -> Result<FockSpace> {
        if self.m_range < 2 {
            return Err(Error::Domain(format!("m_range {} < 2", self.m_range)));
        }
        if self.family == GeneratorFamily::BosonReduced && self.params.mass.is_zero() {
            return Err(Error::ZeroMass);
        }
        FockSpace::new(self.family.algebra(&self.params), self.trunc)
    }

    fn generators(&self, bound: i64) -> Result<BTreeMap<i64, OperatorSpec>> {
        (-bound..=bound)
            .map(|m| Ok((m, build_l(self.family, ModeIndex::integer(m), &self.params)?)))
            .collect()
    }
}

/// The closed-form central charge claimed for each family.
pub fn central_charge_formula(family: GeneratorFamily, params: &FamilyParams) -> Rational {
    let (m, l) = (&params.mass, &params.lambda);
    let l2 = l * l;
    match family {
        GeneratorFamily::BosonUnconstrained => rational::int(2) - rational::int(24) * m * l2,
        GeneratorFamily::BosonReduced => rational::int(1) - rational::int(24) * m * l2,
        GeneratorFamily::FermionUnconstrained => {
            rational::int(-2) * (rational::int(1) - rational::int(6) * l + rational::int(6) * l2)
        }
        GeneratorFamily::FermionReduced => rational::frac(1, 2),
    }
}

/// `c = -12 (f(m) + 2m g) / (m^3 - m)` with `f(m) = <0| [L_m, L_{-m}] |0>`
/// and `g = <0| L_0 |0>` (vacuum components), for a single `m ≥ 2`.
pub fn central_charge_at(params: &ScenarioParams, m: i64) -> Result<Rational> {
    let space = params.space()?;
    if m < 2 || space.truncation().level_cap_doubled() < 2 * m {
        return Err(Error::Domain(format!(
            "central-charge extraction at m = {m} needs level cap ≥ {m}"
        )));
    }
    if space.algebra().zero_mode_creator().is_some() && space.truncation().zero_mode_cap() < 2 {
        return Err(Error::Domain("central-charge extraction needs zero-mode cap ≥ 2".into()));
    }
    let lm = build_l(params.family, ModeIndex::integer(m), &params.params)?;
    let lmm = build_l(params.family, ModeIndex::integer(-m), &params.params)?;
    let l0 = build_l(params.family, ModeIndex::ZERO, &params.params)?;
    let f = commutator_action(&lm, &lmm, &BasisState::vacuum(), &space)?.vacuum_component();
    let g = l0.apply(&space, &StateVector::vacuum())?.vacuum_component();
    let mr = rational::int(m);
    Ok(rational::int(-12) * (f + rational::int(2) * &mr * g) / (&mr * &mr * &mr - &mr))
}

/// Central charge read off at `m = 2`, confirmed at `m = 3`.
pub fn extract_central_charge(params: &ScenarioParams) -> Result<Rational> {
    let at_two = central_charge_at(params, 2)?;
    let at_three = central_charge_at(params, 3)?;
    if at_two != at_three {
        return Err(Error::OracleInconsistency {
            at_two: at_two.to_string(),
            at_three: at_three.to_string(),
        });
    }
    Ok(at_two)
}

/// `[L_m, L_n] ψ - (n-m) L_{m+n} ψ + c/12 (m^3-m) δ_{m+n} ψ = 0` for all
/// `|m|, |n| ≤ m_range` and every safe basis state; one entry per `(m, n)`.
pub fn check_virasoro_relation(params: &ScenarioParams, c_expected: &Rational) -> Result<Vec<CheckReport>> {
    let space = params.space()?;
    let range = params.m_range;
    let gens = params.generators(2 * range)?;
    let basis = space.enumerate_basis();

    struct Tally {
        states: usize,
        failure: Option<(BasisState, StateVector)>,
    }
    let mut tallies: BTreeMap<(i64, i64), Tally> = BTreeMap::new();
    for m in -range..=range {
        for n in -range..=range {
            tallies.insert((m, n), Tally { states: 0, failure: None });
        }
    }

    for psi in &basis {
        let v = StateVector::basis(psi.clone());
        let mut once: BTreeMap<i64, StateVector> = BTreeMap::new();
        for m in -range..=range {
            if is_safe(&space, psi, &[ModeIndex::integer(m)]) {
                once.insert(m, gens[&m].apply(&space, &v)?);
            }
        }
        for m in -range..=range {
            for n in -range..=range {
                let (dm, dn) = (ModeIndex::integer(m), ModeIndex::integer(n));
                if !is_safe(&space, psi, &[dm, dn]) {
                    continue;
                }
                let lhs = &gens[&m].apply(&space, &once[&n])? - &gens[&n].apply(&space, &once[&m])?;
                let mut rhs = gens[&(m + n)].apply(&space, &v)?.scaled(&rational::int(n - m));
                if m + n == 0 {
                    let anomaly = c_expected * rational::int(m * m * m - m) / rational::int(12);
                    rhs.add_scaled(&v, &-anomaly);
                }
                let residual = &lhs - &rhs;
                let t = tallies.get_mut(&(m, n)).expect("seeded");
                t.states += 1;
                if !residual.is_zero() && t.failure.is_none() {
                    t.failure = Some((psi.clone(), residual));
                }
            }
        }
    }

    Ok(tallies
        .into_iter()
        .map(|((m, n), t)| {
            let probe = format!("m={m} n={n} c={c_expected} on {} safe states", t.states);
            match t.failure {
                None if t.states > 0 => CheckReport::pass("virasoro", VIRASORO_LAW, "0", "0", probe),
                None => CheckReport::skipped("virasoro", VIRASORO_LAW, probe),
                Some((psi, r)) => CheckReport::fail(
                    "virasoro",
                    VIRASORO_LAW,
                    "0",
                    format!("{r} on {psi}"),
                    probe,
                ),
            }
        })
        .collect())
}

/// `[A_m, X_n] = E(m, n)` as operators, on every safe basis state.
struct LinearLaw<'a> {
    name: &'a str,
    law: &'a str,
    generator: Box<dyn Fn(i64) -> Result<OperatorSpec> + 'a>,
    probe: Box<dyn Fn(ModeIndex) -> Result<OperatorSpec> + 'a>,
    expected: Box<dyn Fn(i64, ModeIndex) -> Result<OperatorSpec> + 'a>,
    /// Probe indices in doubled units.
    indices: Vec<i64>,
}

fn check_linear_law(space: &FockSpace, law: &LinearLaw<'_>, range: i64) -> Result<Vec<CheckReport>> {
    let basis = space.enumerate_basis();
    let mut out = Vec::new();
    for m in -range..=range {
        let gen = (law.generator)(m)?;
        let mut states = 0usize;
        let mut failure = None;
        'outer: for &d in &law.indices {
            let n = ModeIndex::from_doubled(d);
            let x = (law.probe)(n)?;
            let expected = (law.expected)(m, n)?;
            for psi in &basis {
                if !is_safe(space, psi, &[gen.degree(), x.degree()]) {
                    continue;
                }
                let lhs = commutator_action(&gen, &x, psi, space)?;
                let rhs = expected.apply(space, &StateVector::basis(psi.clone()))?;
                states += 1;
                if lhs != rhs {
                    failure = Some(format!("index {n} on {psi}: {lhs} vs {rhs}"));
                    break 'outer;
                }
            }
        }
        let probe = format!("m={m}, |index| ≤ {range}, {states} probes");
        out.push(match failure {
            None => CheckReport::pass(law.name, law.law, "equal", "equal", probe),
            Some(detail) => CheckReport::fail(law.name, law.law, "equal", detail, probe),
        });
    }
    Ok(out)
}

fn mode_op(algebra: &AlgebraId, x: Mode) -> Result<OperatorSpec> {
    OperatorSpec::mode(algebra.clone(), x)
}

/// `c · x` as an operator of degree `x.index`; zero when `c = 0` or `x` is
/// not in the algebra.
fn scaled_mode_op(algebra: &AlgebraId, x: Mode, c: Rational, constant: Rational) -> Result<OperatorSpec> {
    let mut e = LinearExpr::scalar(constant);
    if algebra.contains(x) {
        e.add_term(x, c);
    }
    let mut op = OperatorSpec::from_linear(algebra.clone(), &e)?;
    if e.is_zero() {
        // keep the degree bookkeeping consistent for the zero operator
        op = OperatorSpec::from_linear(algebra.clone(), &LinearExpr::zero())?;
    }
    Ok(op)
}

fn integer_indices(range: i64) -> Vec<i64> {
    (-range..=range).map(|n| 2 * n).collect()
}

fn half_indices(range: i64) -> Vec<i64> {
    (-2 * range..=2 * range).filter(|d| d % 2 != 0).collect()
}

/// Primary-field transformation laws of the oscillator modes.
pub fn check_primary_laws(params: &ScenarioParams) -> Result<Vec<CheckReport>> {
    let space = params.space()?;
    let alg = space.algebra().clone();
    let p = &params.params;
    let range = params.m_range;
    let int = rational::int;
    let mut laws: Vec<LinearLaw<'_>> = Vec::new();
    match params.family {
        GeneratorFamily::BosonUnconstrained => {
            let mass = p.mass.clone();
            let a = alg.clone();
            laws.push(LinearLaw {
                name: "primary_K_a",
                law: "[K_m, a_n] = (m+n) a_{m+n}",
                generator: Box::new(|m| build_k(ModeIndex::integer(m))),
                probe: Box::new(move |n| mode_op(&AlgebraId::UnconstrainedBoson, Mode::new(crate::FieldKind::BosonA, n))),
                expected: Box::new(move |m, n| {
                    let k = n.as_integer().expect("integer");
                    scaled_mode_op(&a, Mode::a(m + k), int(m + k), Rational::zero())
                }),
                indices: integer_indices(range),
            });
            let a = alg.clone();
            laws.push(LinearLaw {
                name: "primary_K_adag",
                law: "[K_m, a†_n] = n a†_{m+n}",
                generator: Box::new(|m| build_k(ModeIndex::integer(m))),
                probe: Box::new(|n| mode_op(&AlgebraId::UnconstrainedBoson, Mode::new(crate::FieldKind::BosonADag, n))),
                expected: Box::new(move |m, n| {
                    let k = n.as_integer().expect("integer");
                    scaled_mode_op(&a, Mode::adag(m + k), int(k), Rational::zero())
                }),
                indices: integer_indices(range),
            });
            let (m1, m2, m3) = (mass.clone(), mass.clone(), mass.clone());
            laws.push(LinearLaw {
                name: "helper_K_chi",
                law: "[K_m, χ_n] = n χ_{m+n}",
                generator: Box::new(|m| build_k(ModeIndex::integer(m))),
                probe: Box::new(move |n| build_chi_boson(n, &m1)),
                expected: Box::new(move |m, n| {
                    let k = n.as_integer().expect("integer");
                    let chi = build_chi_boson(ModeIndex::integer(m + k), &m2)?.linear();
                    OperatorSpec::from_linear(AlgebraId::UnconstrainedBoson, &chi.scaled(&int(k)))
                }),
                indices: integer_indices(range),
            });
            let m4 = mass.clone();
            laws.push(LinearLaw {
                name: "helper_K_B",
                law: "[K_m, B_n] = n B_{m+n}",
                generator: Box::new(|m| build_k(ModeIndex::integer(m))),
                probe: Box::new(move |n| build_b(n, &m3)),
                expected: Box::new(move |m, n| {
                    let k = n.as_integer().expect("integer");
                    let b = build_b(ModeIndex::integer(m + k), &m4)?.linear();
                    OperatorSpec::from_linear(AlgebraId::UnconstrainedBoson, &b.scaled(&int(k)))
                }),
                indices: integer_indices(range),
            });
            let a = alg.clone();
            let lam = p.lambda.clone();
            laws.push(LinearLaw {
                name: "primary_L_a0",
                law: "[L_m, a_0] = m a_m + λ δ_m",
                generator: Box::new(move |m| build_l(GeneratorFamily::BosonUnconstrained, ModeIndex::integer(m), p)),
                probe: Box::new(|n| mode_op(&AlgebraId::UnconstrainedBoson, Mode::new(crate::FieldKind::BosonA, n))),
                expected: Box::new(move |m, _| {
                    let constant = if m == 0 { lam.clone() } else { Rational::zero() };
                    scaled_mode_op(&a, Mode::a(m), int(m), constant)
                }),
                indices: vec![0],
            });
        }
        GeneratorFamily::FermionUnconstrained => {
            let lam = p.lambda.clone();
            let a = alg.clone();
            laws.push(LinearLaw {
                name: "primary_L_b",
                law: "[L_m, b_r] = ((1-λ) m + r) b_{m+r}",
                generator: Box::new(move |m| build_l(GeneratorFamily::FermionUnconstrained, ModeIndex::integer(m), p)),
                probe: Box::new(|r| mode_op(&AlgebraId::UnconstrainedFermion, Mode::new(crate::FieldKind::FermionB, r))),
                expected: Box::new(move |m, r| {
                    let c = (Rational::one() - &lam) * int(m) + r.to_rational();
                    scaled_mode_op(&a, Mode::new(crate::FieldKind::FermionB, ModeIndex::integer(m) + r), c, Rational::zero())
                }),
                indices: half_indices(range),
            });
            let lam = p.lambda.clone();
            let a = alg.clone();
            laws.push(LinearLaw {
                name: "primary_L_bdag",
                law: "[L_m, b†_r] = (λ m + r) b†_{m+r}",
                generator: Box::new(move |m| build_l(GeneratorFamily::FermionUnconstrained, ModeIndex::integer(m), p)),
                probe: Box::new(|r| mode_op(&AlgebraId::UnconstrainedFermion, Mode::new(crate::FieldKind::FermionBDag, r))),
                expected: Box::new(move |m, r| {
                    let c = &lam * int(m) + r.to_rational();
                    scaled_mode_op(&a, Mode::new(crate::FieldKind::FermionBDag, ModeIndex::integer(m) + r), c, Rational::zero())
                }),
                indices: half_indices(range),
            });
        }
        GeneratorFamily::FermionReduced => {
            let a = alg.clone();
            laws.push(LinearLaw {
                name: "primary_L_b",
                law: "[L_m, b_r] = (m/2 + r) b_{m+r}",
                generator: Box::new(move |m| build_l(GeneratorFamily::FermionReduced, ModeIndex::integer(m), p)),
                probe: Box::new(|r| mode_op(&AlgebraId::ReducedFermion, Mode::new(crate::FieldKind::ReducedB, r))),
                expected: Box::new(move |m, r| {
                    let c = rational::frac(m, 2) + r.to_rational();
                    scaled_mode_op(&a, Mode::new(crate::FieldKind::ReducedB, ModeIndex::integer(m) + r), c, Rational::zero())
                }),
                indices: half_indices(range),
            });
        }
        GeneratorFamily::BosonReduced => {}
    }
    let mut out = Vec::new();
    for law in &laws {
        out.extend(check_linear_law(&space, law, range)?);
    }
    Ok(out)
}

/// `n a†_{m+n} - M λ m(m+1) δ_{m+n}`, with `a†_0` dropped.
pub fn christoffel_expected(m: i64, n: i64, mass: &Rational, lambda: &Rational) -> LinearExpr {
    let mut e = LinearExpr::zero();
    if m + n != 0 {
        e.add_term(Mode::reduced_adag(m + n), rational::int(n));
    } else {
        e.add_constant(&-(mass * lambda * rational::int(m * (m + 1))));
    }
    e
}

const CHRISTOFFEL_LAW: &str = "[L_m, a†_n]* = n a†_{m+n} - M λ m(m+1) δ_{m+n}";

/// The anomalous transformation of `a†_n` in the reduced boson module, by
/// Fock action and through the Dirac bracket of the unconstrained generator.
pub fn check_christoffel(params: &ScenarioParams) -> Result<Vec<CheckReport>> {
    if params.family != GeneratorFamily::BosonReduced {
        return Err(Error::Domain("Christoffel law applies to the reduced boson family".into()));
    }
    let space = params.space()?;
    let (mass, lambda) = (&params.params.mass, &params.params.lambda);
    let range = params.m_range;
    let basis = space.enumerate_basis();
    let mut out = Vec::new();
    for m in -range..=range {
        let lm = build_l(params.family, ModeIndex::integer(m), &params.params)?;
        for n in -range..=range {
            let expected = christoffel_expected(m, n, mass, lambda);
            let probe = format!("m={m} n={n}");
            let via_dirac = dirac::dirac_transform_adagger(ModeIndex::integer(m), ModeIndex::integer(n), mass, lambda)?;
            out.push(CheckReport::compare("christoffel_dirac", CHRISTOFFEL_LAW, &expected, &via_dirac, probe.clone()));
            if n == 0 {
                continue;
            }
            let x = OperatorSpec::mode(space.algebra().clone(), Mode::reduced_adag(n))?;
            let expected_op = OperatorSpec::from_linear(space.algebra().clone(), &expected)?;
            let mut states = 0;
            let mut failure = None;
            for psi in &basis {
                if !is_safe(&space, psi, &[lm.degree(), x.degree()]) {
                    continue;
                }
                let lhs = commutator_action(&lm, &x, psi, &space)?;
                let rhs = expected_op.apply(&space, &StateVector::basis(psi.clone()))?;
                states += 1;
                if lhs != rhs {
                    failure = Some(format!("{lhs} vs {rhs} on {psi}"));
                    break;
                }
            }
            let probe = format!("{probe}, {states} probes");
            out.push(match failure {
                None => CheckReport::pass("christoffel_fock", CHRISTOFFEL_LAW, expected.to_string(), expected.to_string(), probe),
                Some(d) => CheckReport::fail("christoffel_fock", CHRISTOFFEL_LAW, expected.to_string(), d, probe),
            });
        }
    }
    Ok(out)
}

/// `[[A,B],C] + [[B,C],A] + [[C,A],B]` on every safe state, for
/// `A, B, C = L_{m1}, L_{m2}, L_{m3}`.
pub fn jacobi_spot_check(params: &ScenarioParams, labels: (i64, i64, i64)) -> Result<CheckReport> {
    let space = params.space()?;
    let (m1, m2, m3) = labels;
    let ops = [m1, m2, m3]
        .iter()
        .map(|&m| build_l(params.family, ModeIndex::integer(m), &params.params))
        .collect::<Result<Vec<_>>>()?;
    let degrees: Vec<ModeIndex> = ops.iter().map(OperatorSpec::degree).collect();
    let apply3 = |i: usize, j: usize, k: usize, v: &StateVector| -> Result<StateVector> {
        ops[i].apply(&space, &ops[j].apply(&space, &ops[k].apply(&space, v)?)?)
    };
    // [[X,Y],Z] = XYZ - YXZ - ZXY + ZYX
    let nested = |x: usize, y: usize, z: usize, v: &StateVector| -> Result<StateVector> {
        let mut out = apply3(x, y, z, v)?;
        out.add_scaled(&apply3(y, x, z, v)?, &-Rational::one());
        out.add_scaled(&apply3(z, x, y, v)?, &-Rational::one());
        out.add_scaled(&apply3(z, y, x, v)?, &Rational::one());
        Ok(out)
    };
    let law = "[[A,B],C] + [[B,C],A] + [[C,A],B] = 0";
    let mut states = 0;
    for psi in space.enumerate_basis() {
        if !is_safe(&space, &psi, &degrees) {
            continue;
        }
        let v = StateVector::basis(psi.clone());
        let mut total = nested(0, 1, 2, &v)?;
        total = &total + &nested(1, 2, 0, &v)?;
        total = &total + &nested(2, 0, 1, &v)?;
        states += 1;
        if !total.is_zero() {
            return Ok(CheckReport::fail("jacobi", law, "0", format!("{total} on {psi}"), format!("L[{m1}], L[{m2}], L[{m3}]")));
        }
    }
    Ok(CheckReport::pass("jacobi", law, "0", "0", format!("L[{m1}], L[{m2}], L[{m3}] on {states} safe states")))
}

/// Everything checked for one generator family at one parameter point.
#[derive(Debug, Clone)]
pub struct FamilySuite {
    pub family: GeneratorFamily,
    pub c_formula: Rational,
    pub c_oracle: Rational,
    pub checks: Vec<CheckReport>,
}

pub fn run_family_suite(params: &ScenarioParams) -> Result<FamilySuite> {
    let c_formula = central_charge_formula(params.family, &params.params);
    let c_oracle = extract_central_charge(params)?;
    let mut checks = vec![CheckReport::compare(
        "central_charge",
        "c from <0|[L_m, L_-m]|0>, m = 2, 3",
        &c_formula,
        &c_oracle,
        format!("{} M={} λ={}", params.family, params.params.mass, params.params.lambda),
    )];
    checks.extend(check_virasoro_relation(params, &c_formula)?);
    checks.extend(check_primary_laws(params)?);
    if params.family == GeneratorFamily::BosonReduced {
        checks.extend(check_christoffel(params)?);
    }
    checks.push(jacobi_spot_check(params, (1, 2, -3))?);
    Ok(FamilySuite {
        family: params.family,
        c_formula,
        c_oracle,
        checks,
    })
}

/// Inversion, Dirac brackets, classification, and compatibility for both
/// constraint families. `mass` parametrizes the boson family; the fermion
/// checks use λ = 1/2 and the λ = 0 counterexample.
pub fn run_dirac_checks(mass: &Rational, lambda: &Rational, window: Window, m_range: i64) -> Result<Vec<CheckReport>> {
    if mass.is_zero() {
        return Err(Error::ZeroMass);
    }
    let n = i64::from(window.half_width());
    let mut out = Vec::new();
    let boson = ConstraintFamily::boson(mass.clone());
    let fermion = ConstraintFamily::Fermion;

    for (name, fam) in [("delta_contract_boson", &boson), ("delta_contract_fermion", &fermion)] {
        let delta = dirac::invert_c(fam, window)?;
        let product = delta.contract(fam)?;
        let size = delta.labels().len();
        let ok = product
            .iter()
            .enumerate()
            .all(|(i, row)| row.iter().enumerate().all(|(j, v)| *v == if i == j { Rational::one() } else { Rational::zero() }));
        let law = "(-1)^R Δ^{PR} C_{RS} = δ^P_S";
        let probe = format!("{size}×{size} window, closed form agrees");
        out.push(if ok {
            CheckReport::pass(name, law, "identity", "identity", probe)
        } else {
            CheckReport::fail(name, law, "identity", "non-identity", probe)
        });
    }

    for (name, fam) in [("bracket_matrix_boson", &boson), ("bracket_matrix_fermion", &fermion)] {
        let (labels, c) = fam.bracket_matrix(window)?;
        let mut mismatch = None;
        for (i, &p) in labels.iter().enumerate() {
            for (j, &r) in labels.iter().enumerate() {
                if fam.closed_form_bracket(p, r).as_ref() != Some(&c[i][j]) {
                    mismatch = Some(format!("{p},{r}"));
                }
            }
        }
        let law = "C_{PR} = [χ_P, χ_R] matches closed form";
        out.push(match mismatch {
            None => CheckReport::pass(name, law, "closed form", "closed form", format!("N = {n}")),
            Some(at) => CheckReport::fail(name, law, "closed form", format!("differs at {at}"), format!("N = {n}")),
        });
    }

    let dba = "[a†_m, a†_n]* = -(M/2) m δ_{m+n}";
    let mut first_bad = None;
    let mut count = 0;
    for a in -n..=n {
        for b in -n..=n {
            let expected = if a + b == 0 { -(mass * rational::int(a)) / rational::int(2) } else { Rational::zero() };
            let got = dirac::dirac_bracket(&LinearExpr::mode(Mode::adag(a)), &LinearExpr::mode(Mode::adag(b)), &boson)?;
            count += 1;
            if got != expected && first_bad.is_none() {
                first_bad = Some(format!("({a},{b}): {got} vs {expected}"));
            }
        }
    }
    out.push(match first_bad {
        None => CheckReport::pass("dirac_bracket_boson", dba, "all", "all", format!("{count} pairs, |m|,|n| ≤ {n}")),
        Some(d) => CheckReport::fail("dirac_bracket_boson", dba, "all", d, format!("|m|,|n| ≤ {n}")),
    });
    for (x, y, label) in [
        (Mode::adag(0), Mode::adag(0), "[a†_0, a†_0]*"),
        (Mode::adag(0), Mode::a(0), "[a†_0, a_0]*"),
        (Mode::a(0), Mode::a(0), "[a_0, a_0]*"),
    ] {
        let got = dirac::dirac_bracket(&LinearExpr::mode(x), &LinearExpr::mode(y), &boson)?;
        out.push(CheckReport::compare("dirac_zero_modes", "zero-mode Dirac brackets vanish", "0", got, label));
    }

    let dbb = "{b_r, b_s}* = 1/2 δ_{r+s}";
    let mut first_bad = None;
    let mut count = 0;
    for r in half_indices(n) {
        for s in half_indices(n) {
            let expected = if r + s == 0 { rational::frac(1, 2) } else { Rational::zero() };
            let got = dirac::dirac_bracket(&LinearExpr::mode(Mode::b(r)), &LinearExpr::mode(Mode::b(s)), &fermion)?;
            count += 1;
            if got != expected && first_bad.is_none() {
                first_bad = Some(format!("({r}/2,{s}/2): {got} vs {expected}"));
            }
        }
    }
    out.push(match first_bad {
        None => CheckReport::pass("dirac_bracket_fermion", dbb, "all", "all", format!("{count} pairs, |r|,|s| ≤ {n}")),
        Some(d) => CheckReport::fail("dirac_bracket_fermion", dbb, "all", d, format!("|r|,|s| ≤ {n}")),
    });

    let cls = dirac::classify(&ConstraintFamily::boson_without_gauge_condition(mass.clone()), window)?;
    let first: Vec<String> = cls.first_class.iter().map(|l| l.to_string()).collect();
    out.push(CheckReport::compare("classify_boson_ungauged", "χ_0 ≈ 0 is first class", "χ[0]", first.join(","), format!("N = {n}")));
    let cls = dirac::classify(&boson, window)?;
    out.push(CheckReport::compare(
        "classify_boson_gauged",
        "with χ_0̄ = a_0 all constraints are second class",
        "none",
        if cls.first_class.is_empty() { "none".to_string() } else { format!("{:?}", cls.first_class) },
        format!("N = {n}"),
    ));
    let cls = dirac::classify(&ConstraintFamily::EvenFermionCopy, window)?;
    out.push(CheckReport::compare(
        "classify_even_fermion_copy",
        "even-statistics χ_r = b_r - b†_r has C = 0",
        format!("{} first class", 2 * n),
        format!("{} first class", cls.first_class.len()),
        format!("N = {n}, {} second class", cls.second_class.len()),
    ));

    out.extend(compatibility_factors(mass, m_range.max(5), window)?);

    let half = FamilyParams::new(Rational::one(), rational::frac(1, 2));
    for m in -m_range..=m_range {
        let op = build_l(GeneratorFamily::FermionUnconstrained, ModeIndex::integer(m), &half)?;
        out.extend(dirac::verify_compatibility(&op, &fermion, window)?.into_iter().filter(|r| r.name != "compatibility" || !r.passed()));
    }
    let zero = FamilyParams::new(Rational::one(), Rational::zero());
    let only_if = "compatibility at λ = 0 fails";
    let op = build_l(GeneratorFamily::FermionUnconstrained, ModeIndex::integer(2), &zero)?;
    let failures = dirac::verify_compatibility(&op, &fermion, window)?
        .into_iter()
        .filter(|r| r.name == "compatibility" && !r.passed())
        .count();
    out.push(if failures > 0 {
        CheckReport::pass("fermion_only_if", only_if, "incompatible", "incompatible", format!("L[2], {failures} incompatible χ_r"))
    } else {
        CheckReport::fail("fermion_only_if", only_if, "incompatible", "compatible", "L[2]")
    });

    let bp = FamilyParams::new(mass.clone(), lambda.clone());
    for m in -m_range..=m_range {
        let op = build_l(GeneratorFamily::BosonUnconstrained, ModeIndex::integer(m), &bp)?;
        out.extend(dirac::verify_compatibility(&op, &boson, window)?.into_iter().filter(|r| r.name != "compatibility" || !r.passed()));
    }
    Ok(out)
}

/// `[L_m, χ_n] = n χ_{m+n}` (boson) and `[L_m, χ_r] = (m/2 + r) χ_{m+r}`
/// (fermion, λ = 1/2) for `|m|, |n| ≤ range`.
pub fn compatibility_factors(mass: &Rational, range: i64, window: Window) -> Result<Vec<CheckReport>> {
    let _ = window;
    let mut out = Vec::new();
    let boson = ConstraintFamily::boson(mass.clone());
    let bp = FamilyParams::new(mass.clone(), Rational::one());
    let mut bad = None;
    for m in -range..=range {
        let op = build_l(GeneratorFamily::BosonUnconstrained, ModeIndex::integer(m), &bp)?;
        for n in -range..=range {
            let k = dirac::constraint_multiple(&op, &boson, ConstraintLabel::Index(ModeIndex::integer(n)))?;
            if k != Some(rational::int(n)) && bad.is_none() {
                bad = Some(format!("m={m} n={n}: {k:?}"));
            }
        }
    }
    let law = "[L_m, χ_n] = n χ_{m+n}";
    out.push(match bad {
        None => CheckReport::pass("compatibility_boson", law, "n", "n", format!("|m|,|n| ≤ {range}")),
        Some(d) => CheckReport::fail("compatibility_boson", law, "n", d, format!("|m|,|n| ≤ {range}")),
    });

    let fermion = ConstraintFamily::Fermion;
    let fp = FamilyParams::new(Rational::one(), rational::frac(1, 2));
    let mut bad = None;
    for m in -range..=range {
        let op = build_l(GeneratorFamily::FermionUnconstrained, ModeIndex::integer(m), &fp)?;
        for d in half_indices(range) {
            let r = ModeIndex::half(d);
            let k = dirac::constraint_multiple(&op, &fermion, ConstraintLabel::Index(r))?;
            let expected = rational::frac(m, 2) + r.to_rational();
            if k.as_ref() != Some(&expected) && bad.is_none() {
                bad = Some(format!("m={m} r={r}: {k:?}"));
            }
        }
    }
    let law = "[L_m, χ_r] = (m/2 + r) χ_{m+r} at λ = 1/2";
    out.push(match bad {
        None => CheckReport::pass("compatibility_fermion", law, "m/2 + r", "m/2 + r", format!("|m|,|r| ≤ {range}")),
        Some(d) => CheckReport::fail("compatibility_fermion", law, "m/2 + r", d, format!("|m|,|r| ≤ {range}")),
    });
    Ok(out)
}
