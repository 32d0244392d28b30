//! Constraint families, their bracket matrices, and the graded Dirac bracket.
//!
//! Sign convention for the inverse: `(-1)^{p(R)} Δ^{PR} C_{RS} = δ^P_S`, and
//!
//! ```text
//! [A, B]* = [A, B] - (-1)^{p(R)} [A, χ_P] Δ^{PR} [χ_R, B]
//! ```
//!
//! The boson and fermion families are infinite; their `C` and `Δ` are
//! banded with closed forms. Windowed checks build `C` from the constraint
//! expressions themselves and invert it by exact elimination.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{AlgebraId, FieldKind, Mode, ModeIndex, Parity};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::linear::LinearExpr;
use crate::operators::{build_l, FamilyParams, GeneratorFamily, OperatorSpec};
use crate::rational::{self, Rational};
use crate::verify::CheckReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConstraintLabel {
    /// `χ_m` or `χ_r`.
    Index(ModeIndex),
    /// The gauge condition `χ_0̄ = a_0`.
    ZeroBar,
    /// Position in a user-supplied finite family.
    Item(usize),
}

impl fmt::Display for ConstraintLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintLabel::Index(i) => write!(f, "χ[{i}]"),
            ConstraintLabel::ZeroBar => write!(f, "χ[0̄]"),
            ConstraintLabel::Item(i) => write!(f, "χ#{i}"),
        }
    }
}

/// Constraints with `|2 index| ≤ 2N` participate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Window {
    half_width: u32,
}

impl Window {
    pub fn new(half_width: u32) -> Result<Self> {
        if half_width == 0 {
            return Err(Error::Domain("window half-width must be positive".into()));
        }
        Ok(Window { half_width })
    }

    pub fn half_width(&self) -> u32 {
        self.half_width
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintFamily {
    /// `χ_m = a†_m - M m a_m` for all `m`, optionally with `χ_0̄ = a_0`.
    Boson { mass: Rational, gauge_condition: bool },
    /// `χ_r = b_r - b†_r`.
    Fermion,
    /// `χ_r = b_r - b†_r` with even statistics; `C` vanishes identically.
    EvenFermionCopy,
    Finite {
        algebra: AlgebraId,
        constraints: Vec<LinearExpr>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub second_class: Vec<ConstraintLabel>,
    pub first_class: Vec<ConstraintLabel>,
}

impl Classification {
    pub fn all_second_class(&self) -> bool {
        self.first_class.is_empty()
    }
}

/// Δ restricted to a set of labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaMatrix {
    labels: Vec<ConstraintLabel>,
    entries: Matrix,
}

impl DeltaMatrix {
    pub fn labels(&self) -> &[ConstraintLabel] {
        &self.labels
    }

    pub fn get(&self, p: ConstraintLabel, r: ConstraintLabel) -> Option<&Rational> {
        let i = self.labels.iter().position(|&l| l == p)?;
        let j = self.labels.iter().position(|&l| l == r)?;
        Some(&self.entries[i][j])
    }

    /// `(-1)^{p(R)} Δ^{PR} C_{RS}`, which must be the identity.
    pub fn contract(&self, family: &ConstraintFamily) -> Result<Matrix> {
        let (labels, c) = family.bracket_matrix_on(&self.labels)?;
        debug_assert_eq!(labels, self.labels);
        let mut signed = self.entries.clone();
        for (j, l) in self.labels.iter().enumerate() {
            if family.parity(*l)?.is_odd() {
                for row in signed.iter_mut() {
                    row[j] = -row[j].clone();
                }
            }
        }
        Ok(linalg::multiply(&signed, &c))
    }
}

impl ConstraintFamily {
    pub fn boson(mass: Rational) -> Self {
        ConstraintFamily::Boson {
            mass,
            gauge_condition: true,
        }
    }

    pub fn boson_without_gauge_condition(mass: Rational) -> Self {
        ConstraintFamily::Boson {
            mass,
            gauge_condition: false,
        }
    }

    pub fn algebra(&self) -> AlgebraId {
        match self {
            ConstraintFamily::Boson { .. } => AlgebraId::UnconstrainedBoson,
            ConstraintFamily::Fermion => AlgebraId::UnconstrainedFermion,
            ConstraintFamily::EvenFermionCopy => AlgebraId::EvenFermionCopy,
            ConstraintFamily::Finite { algebra, .. } => algebra.clone(),
        }
    }

    pub fn labels(&self, window: Window) -> Vec<ConstraintLabel> {
        let n = i64::from(window.half_width);
        match self {
            ConstraintFamily::Boson { gauge_condition, .. } => {
                let mut out: Vec<_> = (-n..=n)
                    .map(|m| ConstraintLabel::Index(ModeIndex::integer(m)))
                    .collect();
                if *gauge_condition {
                    out.push(ConstraintLabel::ZeroBar);
                }
                out
            }
            ConstraintFamily::Fermion | ConstraintFamily::EvenFermionCopy => (-2 * n..=2 * n)
                .filter(|d| d % 2 != 0)
                .map(|d| ConstraintLabel::Index(ModeIndex::from_doubled(d)))
                .collect(),
            ConstraintFamily::Finite { constraints, .. } => {
                (0..constraints.len()).map(ConstraintLabel::Item).collect()
            }
        }
    }

    fn has_label(&self, label: ConstraintLabel) -> bool {
        match (self, label) {
            (ConstraintFamily::Boson { .. }, ConstraintLabel::Index(i)) => i.is_integer(),
            (ConstraintFamily::Boson { gauge_condition, .. }, ConstraintLabel::ZeroBar) => {
                *gauge_condition
            }
            (
                ConstraintFamily::Fermion | ConstraintFamily::EvenFermionCopy,
                ConstraintLabel::Index(i),
            ) => !i.is_integer(),
            (ConstraintFamily::Finite { constraints, .. }, ConstraintLabel::Item(k)) => {
                k < constraints.len()
            }
            _ => false,
        }
    }

    pub fn constraint(&self, label: ConstraintLabel) -> Result<LinearExpr> {
        if !self.has_label(label) {
            return Err(Error::Domain(format!("{label} is not a constraint of this family")));
        }
        Ok(match (self, label) {
            (ConstraintFamily::Boson { mass, .. }, ConstraintLabel::Index(i)) => {
                let m = i.as_integer().expect("checked above");
                LinearExpr::mode(Mode::adag(m)).with(Mode::a(m), -(mass * rational::int(m)))
            }
            (ConstraintFamily::Boson { .. }, ConstraintLabel::ZeroBar) => LinearExpr::mode(Mode::a(0)),
            (ConstraintFamily::Fermion | ConstraintFamily::EvenFermionCopy, ConstraintLabel::Index(r)) => {
                LinearExpr::mode(Mode::new(FieldKind::FermionB, r))
                    .with(Mode::new(FieldKind::FermionBDag, r), -Rational::one())
            }
            (ConstraintFamily::Finite { constraints, .. }, ConstraintLabel::Item(k)) => {
                constraints[k].clone()
            }
            _ => unreachable!("label membership checked"),
        })
    }

    pub fn parity(&self, label: ConstraintLabel) -> Result<Parity> {
        self.constraint(label)?.parity_in(&self.algebra())
    }

    /// `C_PR` computed from the constraint expressions.
    pub fn bracket(&self, p: ConstraintLabel, r: ConstraintLabel) -> Result<Rational> {
        self.constraint(p)?.bracket(&self.constraint(r)?, &self.algebra())
    }

    /// Registered closed form of `C_PR`.
    pub fn closed_form_bracket(&self, p: ConstraintLabel, r: ConstraintLabel) -> Option<Rational> {
        use ConstraintLabel::*;
        if !self.has_label(p) || !self.has_label(r) {
            return None;
        }
        match self {
            ConstraintFamily::Boson { mass, .. } => Some(match (p, r) {
                (Index(m), Index(n)) if (m + n).is_zero() => {
                    rational::int(2) * mass * m.to_rational()
                }
                (Index(m), ZeroBar) if m.is_zero() => Rational::one(),
                (ZeroBar, Index(m)) if m.is_zero() => -Rational::one(),
                _ => Rational::zero(),
            }),
            ConstraintFamily::Fermion => Some(match (p, r) {
                (Index(a), Index(b)) if (a + b).is_zero() => rational::int(-2),
                _ => Rational::zero(),
            }),
            ConstraintFamily::EvenFermionCopy => Some(Rational::zero()),
            ConstraintFamily::Finite { .. } => None,
        }
    }

    /// Registered closed form of `Δ^{PR}`; only for fully second-class families.
    pub fn closed_form_delta(&self, p: ConstraintLabel, r: ConstraintLabel) -> Option<Rational> {
        use ConstraintLabel::*;
        if !self.has_label(p) || !self.has_label(r) {
            return None;
        }
        match self {
            ConstraintFamily::Boson {
                mass,
                gauge_condition: true,
            } if !mass.is_zero() => Some(match (p, r) {
                (Index(m), Index(n)) if (m + n).is_zero() && !m.is_zero() => {
                    -(rational::int(2) * mass * m.to_rational()).recip()
                }
                (ZeroBar, Index(m)) if m.is_zero() => Rational::one(),
                (Index(m), ZeroBar) if m.is_zero() => -Rational::one(),
                _ => Rational::zero(),
            }),
            ConstraintFamily::Fermion => Some(match (p, r) {
                (Index(a), Index(b)) if (a + b).is_zero() => rational::frac(1, 2),
                _ => Rational::zero(),
            }),
            _ => None,
        }
    }

    fn bracket_matrix_on(&self, labels: &[ConstraintLabel]) -> Result<(Vec<ConstraintLabel>, Matrix)> {
        let mut c = Vec::with_capacity(labels.len());
        for &p in labels {
            let mut row = Vec::with_capacity(labels.len());
            for &r in labels {
                row.push(self.bracket(p, r)?);
            }
            c.push(row);
        }
        Ok((labels.to_vec(), c))
    }

    /// `C` on the window, built from the constraint expressions.
    pub fn bracket_matrix(&self, window: Window) -> Result<(Vec<ConstraintLabel>, Matrix)> {
        self.bracket_matrix_on(&self.labels(window))
    }

    /// Constraints whose bracket with `x` can be nonzero.
    fn partners(&self, x: Mode) -> Vec<ConstraintLabel> {
        match self {
            ConstraintFamily::Boson { gauge_condition, .. } => {
                let mut out = vec![ConstraintLabel::Index(-x.index)];
                if *gauge_condition && x.index.is_zero() {
                    out.push(ConstraintLabel::ZeroBar);
                }
                out
            }
            ConstraintFamily::Fermion | ConstraintFamily::EvenFermionCopy => {
                vec![ConstraintLabel::Index(-x.index)]
            }
            ConstraintFamily::Finite { constraints, .. } => {
                (0..constraints.len()).map(ConstraintLabel::Item).collect()
            }
        }
    }

    /// The nonzero entries `Δ^{PR}` of column `R`.
    fn delta_column(&self, r: ConstraintLabel) -> Result<Vec<(ConstraintLabel, Rational)>> {
        use ConstraintLabel::*;
        let candidates = match (self, r) {
            (ConstraintFamily::Boson { .. }, Index(i)) if i.is_zero() => vec![ZeroBar],
            (ConstraintFamily::Boson { .. }, ZeroBar) => vec![Index(ModeIndex::ZERO)],
            (ConstraintFamily::Boson { .. } | ConstraintFamily::Fermion, Index(i)) => vec![Index(-i)],
            (ConstraintFamily::Finite { constraints, .. }, _) => {
                let delta = invert_finite(self, constraints.len())?;
                return Ok(delta
                    .labels
                    .iter()
                    .filter_map(|&p| {
                        let v = delta.get(p, r)?.clone();
                        (!v.is_zero()).then_some((p, v))
                    })
                    .collect());
            }
            _ => Vec::new(),
        };
        Ok(candidates
            .into_iter()
            .filter_map(|p| {
                let v = self.closed_form_delta(p, r)?;
                (!v.is_zero()).then_some((p, v))
            })
            .collect())
    }

    /// Errors unless every constraint of the family is second class.
    pub fn ensure_second_class(&self) -> Result<()> {
        match self {
            ConstraintFamily::Boson {
                mass,
                gauge_condition,
            } => {
                if mass.is_zero() {
                    return Err(Error::ZeroMass);
                }
                if !gauge_condition {
                    return Err(Error::NotSecondClass {
                        first_class: ConstraintLabel::Index(ModeIndex::ZERO).to_string(),
                    });
                }
                Ok(())
            }
            ConstraintFamily::Fermion => Ok(()),
            ConstraintFamily::EvenFermionCopy => Err(Error::NotSecondClass {
                first_class: "all χ[r]".into(),
            }),
            ConstraintFamily::Finite { .. } => {
                let cls = classify_labels(self, &self.labels(Window { half_width: 1 }), 0)?;
                if cls.all_second_class() {
                    Ok(())
                } else {
                    Err(Error::NotSecondClass {
                        first_class: join(&cls.first_class),
                    })
                }
            }
        }
    }
}

fn join(labels: &[ConstraintLabel]) -> String {
    labels.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ")
}

fn classify_labels(
    family: &ConstraintFamily,
    labels: &[ConstraintLabel],
    half_width: u32,
) -> Result<Classification> {
    let (_, c) = family.bracket_matrix_on(labels)?;
    let mut second = Vec::new();
    let mut first = Vec::new();
    for (i, &l) in labels.iter().enumerate() {
        if c[i].iter().all(Zero::is_zero) {
            first.push(l);
        } else {
            second.push(i);
        }
    }
    let block: Matrix = second
        .iter()
        .map(|&i| second.iter().map(|&j| c[i][j].clone()).collect())
        .collect();
    if !block.is_empty() && linalg::invert(&block).is_none() {
        return Err(Error::SingularBlock { half_width });
    }
    Ok(Classification {
        second_class: second.into_iter().map(|i| labels[i]).collect(),
        first_class: first,
    })
}

/// Splits the windowed constraints into first class (identically zero `C` row)
/// and second class (the rest, which must form an invertible block).
pub fn classify(family: &ConstraintFamily, window: Window) -> Result<Classification> {
    classify_labels(family, &family.labels(window), window.half_width)
}

fn invert_on(
    family: &ConstraintFamily,
    labels: Vec<ConstraintLabel>,
    half_width: u32,
) -> Result<DeltaMatrix> {
    let (_, c) = family.bracket_matrix_on(&labels)?;
    let cls = classify_labels(family, &labels, half_width)?;
    if !cls.all_second_class() {
        return Err(Error::NotSecondClass {
            first_class: join(&cls.first_class),
        });
    }
    let mut entries = linalg::invert(&c).ok_or(Error::SingularBlock { half_width })?;
    for (j, l) in labels.iter().enumerate() {
        if family.parity(*l)?.is_odd() {
            for row in entries.iter_mut() {
                row[j] = -row[j].clone();
            }
        }
    }
    Ok(DeltaMatrix { labels, entries })
}

fn invert_finite(family: &ConstraintFamily, len: usize) -> Result<DeltaMatrix> {
    invert_on(family, (0..len).map(ConstraintLabel::Item).collect(), 0)
}

/// Δ on the window by exact elimination of the windowed `C`. Where a closed
/// form is registered every entry is compared against it.
pub fn invert_c(family: &ConstraintFamily, window: Window) -> Result<DeltaMatrix> {
    if let ConstraintFamily::Boson { mass, .. } = family {
        if mass.is_zero() {
            return Err(Error::ZeroMass);
        }
    }
    let delta = invert_on(family, family.labels(window), window.half_width)?;
    for &p in &delta.labels {
        for &r in &delta.labels {
            if let Some(closed) = family.closed_form_delta(p, r) {
                let windowed = delta.get(p, r).expect("label in window");
                if *windowed != closed {
                    return Err(Error::ClosedFormMismatch {
                        row: p.to_string(),
                        col: r.to_string(),
                        windowed: windowed.to_string(),
                        closed: closed.to_string(),
                    });
                }
            }
        }
    }
    Ok(delta)
}

/// Σ over the exact support of `(-1)^{p(R)} [A, χ_P] Δ^{PR} [χ_R, B]`, with
/// `[A, χ_P]` supplied by `left`.
fn correction<T>(
    family: &ConstraintFamily,
    b: &LinearExpr,
    mut left: impl FnMut(&LinearExpr) -> Result<T>,
    mut accumulate: impl FnMut(T, Rational),
) -> Result<()> {
    let algebra = family.algebra();
    let mut rs = BTreeSet::new();
    for (y, _) in b.terms() {
        for label in family.partners(*y) {
            if family.has_label(label) {
                rs.insert(label);
            }
        }
    }
    for r in rs {
        let chi_r = family.constraint(r)?;
        let rb = chi_r.bracket(b, &algebra)?;
        if rb.is_zero() {
            continue;
        }
        let sign = rational::sign(chi_r.parity_in(&algebra)?.is_odd());
        for (p, delta) in family.delta_column(r)? {
            let ap = left(&family.constraint(p)?)?;
            accumulate(ap, &sign * delta * &rb);
        }
    }
    Ok(())
}

/// Graded Dirac bracket of two linear expressions (a scalar).
pub fn dirac_bracket(a: &LinearExpr, b: &LinearExpr, family: &ConstraintFamily) -> Result<Rational> {
    family.ensure_second_class()?;
    let algebra = family.algebra();
    let mut value = a.bracket(b, &algebra)?;
    correction(
        family,
        b,
        |chi_p| a.bracket(chi_p, &algebra),
        |ap, w| value -= ap * w,
    )?;
    Ok(value)
}

/// Dirac bracket `[op, x]*` of a generator with a linear expression.
pub fn dirac_bracket_operator(
    op: &OperatorSpec,
    x: &LinearExpr,
    family: &ConstraintFamily,
) -> Result<LinearExpr> {
    family.ensure_second_class()?;
    if op.algebra() != &family.algebra() {
        return Err(Error::Domain(format!(
            "operator over {} paired with constraints over {}",
            op.algebra(),
            family.algebra()
        )));
    }
    let mut value = op.bracket_linear(x)?;
    correction(
        family,
        x,
        |chi_p| op.bracket_linear(chi_p),
        |ap: LinearExpr, w| value.add_scaled(&ap, &-w),
    )?;
    Ok(value)
}

/// If `[op, χ_n] = k χ_{deg(op)+n}` exactly, returns `Some(k)`.
pub fn constraint_multiple(
    op: &OperatorSpec,
    family: &ConstraintFamily,
    label: ConstraintLabel,
) -> Result<Option<Rational>> {
    let ConstraintLabel::Index(n) = label else {
        return Err(Error::Domain(format!("{label} has no index to shift")));
    };
    let bracket = op.bracket_linear(&family.constraint(label)?)?;
    let target = family.constraint(ConstraintLabel::Index(op.degree() + n))?;
    if bracket.is_zero() {
        return Ok(Some(Rational::zero()));
    }
    let (x, cx) = target.terms().next().expect("constraints are nonzero");
    let k = bracket.coefficient(*x) / cx;
    Ok((target.scaled(&k) == bracket).then_some(k))
}

/// Compatibility of a generator with a constraint family on a window:
/// `[op, χ_n]` must lie in the span of `χ_{deg+n}`, and every basic mode
/// must have vanishing Dirac bracket with every windowed constraint.
pub fn verify_compatibility(
    op: &OperatorSpec,
    family: &ConstraintFamily,
    window: Window,
) -> Result<Vec<CheckReport>> {
    let mut reports = Vec::new();
    let law = "[L_m, χ_n] ∈ span(χ_{m+n})";
    for label in family.labels(window) {
        let ConstraintLabel::Index(n) = label else { continue };
        let probe = format!("[L[{}], {label}]", op.degree());
        let target = ConstraintLabel::Index(op.degree() + n);
        let expected = format!("k·{target}");
        match constraint_multiple(op, family, label)? {
            Some(k) => reports.push(CheckReport::pass("compatibility", law, expected, format!("({k})·{target}"), probe)),
            None => {
                let got = op.bracket_linear(&family.constraint(label)?)?;
                reports.push(CheckReport::fail(
                    "compatibility",
                    law,
                    expected,
                    format!("incompatible: {got}"),
                    probe,
                ));
            }
        }
    }
    reports.push(dirac_annihilates_constraints(family, window)?);
    Ok(reports)
}

/// `[x, χ_R]* = 0` for every basic mode and constraint on the window.
pub fn dirac_annihilates_constraints(family: &ConstraintFamily, window: Window) -> Result<CheckReport> {
    let algebra = family.algebra();
    let labels = family.labels(window);
    let n = 2 * i64::from(window.half_width);
    let mut checked = 0usize;
    for &kind in algebra.kinds() {
        for d in -n..=n {
            let x = Mode::new(kind, ModeIndex::from_doubled(d));
            if !algebra.contains(x) {
                continue;
            }
            for &r in &labels {
                let v = dirac_bracket(&LinearExpr::mode(x), &family.constraint(r)?, family)?;
                checked += 1;
                if !v.is_zero() {
                    return Ok(CheckReport::fail(
                        "dirac_kills_constraints",
                        "[A, χ_R]* = 0",
                        "0",
                        v.to_string(),
                        format!("[{x}, {r}]*"),
                    ));
                }
            }
        }
    }
    Ok(CheckReport::pass(
        "dirac_kills_constraints",
        "[A, χ_R]* = 0",
        "0",
        "0",
        format!("{checked} pairs, N = {}", window.half_width),
    ))
}

/// Solves `χ_m ≈ 0` for `a_m = a†_m / (M m)`, sets `a_0 ≈ 0` and
/// `a†_0 = χ_0 ≈ 0`, and renames `a†` into the reduced algebra.
pub fn solve_boson_constraints(expr: &LinearExpr, mass: &Rational) -> Result<LinearExpr> {
    if mass.is_zero() {
        return Err(Error::ZeroMass);
    }
    let mut bad = None;
    let out = expr.map_modes(|x| match (x.kind, x.index.as_integer()) {
        (_, Some(0)) => LinearExpr::zero(),
        (FieldKind::BosonADag, Some(m)) => LinearExpr::mode(Mode::reduced_adag(m)),
        (FieldKind::BosonA, Some(m)) => {
            LinearExpr::mode(Mode::reduced_adag(m)).scaled(&(mass * rational::int(m)).recip())
        }
        _ => {
            bad = Some(x);
            LinearExpr::zero()
        }
    });
    match bad {
        Some(x) => Err(Error::ForeignMode {
            mode: x.to_string(),
            algebra: AlgebraId::UnconstrainedBoson.name(),
        }),
        None => Ok(out),
    }
}

/// `[L_m, a†_n]*` for the unconstrained boson generator, through the Dirac
/// bracket, expressed on the constraint surface.
pub fn dirac_transform_adagger(m: ModeIndex, n: ModeIndex, mass: &Rational, lambda: &Rational) -> Result<LinearExpr> {
    if mass.is_zero() {
        return Err(Error::ZeroMass);
    }
    let n = n
        .as_integer()
        .ok_or_else(|| Error::Domain(format!("boson index {n} must be an integer")))?;
    let params = FamilyParams::new(mass.clone(), lambda.clone());
    let op = build_l(GeneratorFamily::BosonUnconstrained, m, &params)?;
    let family = ConstraintFamily::boson(mass.clone());
    let raw = dirac_bracket_operator(&op, &LinearExpr::mode(Mode::adag(n)), &family)?;
    solve_boson_constraints(&raw, mass)
}
