//! Normal-ordered operators and the generator families built from them.
//!
//! An [`OperatorSpec`] is `Σ_r c(r) :X[m-r] Y[r]: + Σ c_x x + constant`, with
//! `c(r) = α + β r` affine in the summation index. Inside `:…:` an
//! annihilator standing left of a creator is moved to the right with its
//! parity sign; every other pair is kept in written order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::algebra::{canonical_bracket, AlgebraId, FieldKind, Mode, ModeIndex, Parity};
use crate::error::{Error, Result};
use crate::fock::{BasisState, FockSpace, StateVector};
use crate::linear::LinearExpr;
use crate::rational::{self, Rational};

/// `α + β r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineCoeff {
    pub constant: Rational,
    pub slope: Rational,
}

impl AffineCoeff {
    pub fn new(constant: Rational, slope: Rational) -> Self {
        AffineCoeff { constant, slope }
    }

    pub fn at(&self, r: ModeIndex) -> Rational {
        if self.slope.is_zero() {
            return self.constant.clone();
        }
        &self.constant + &self.slope * r.to_rational()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearTerm {
    pub left: FieldKind,
    pub right: FieldKind,
    /// `m` in the pairs `(m - r, r)`.
    pub total_index: ModeIndex,
    pub coeff: AffineCoeff,
    /// Drop every realized term with a zero-index factor.
    pub omit_zero_modes: bool,
}

impl BilinearTerm {
    fn right_index_step(&self) -> (i64, i64) {
        // (offset, step) of admissible doubled r values
        if self.right.half_integer_indexed() {
            (1, 2)
        } else {
            (0, 2)
        }
    }

    /// Written-order pair `(X[m-r], Y[r])` with its coefficient, or `None`
    /// when the term is absent at `r` or vanishes.
    fn written_pair(&self, r: ModeIndex, algebra: &AlgebraId) -> Option<(Mode, Mode, Rational)> {
        if self.right.half_integer_indexed() == r.is_integer() {
            return None;
        }
        let left = Mode::new(self.left, self.total_index - r);
        let right = Mode::new(self.right, r);
        if self.omit_zero_modes && (left.index.is_zero() || right.index.is_zero()) {
            return None;
        }
        if !algebra.contains(left) || !algebra.contains(right) {
            return None;
        }
        let c = self.coeff.at(r);
        (!c.is_zero()).then_some((left, right, c))
    }

    /// The normal-ordered term at `r` in application order (first applied
    /// first), the coefficient carrying the reordering sign.
    fn realize(&self, r: ModeIndex, algebra: &AlgebraId) -> Option<(Mode, Mode, Rational)> {
        let (left, right, c) = self.written_pair(r, algebra)?;
        if left.is_annihilator() && right.is_creator() {
            let anti = algebra
                .parity_of(left.kind)
                .anticommutes_with(algebra.parity_of(right.kind));
            Some((left, right, if anti { -c } else { c }))
        } else {
            Some((right, left, c))
        }
    }
}

/// A (bilinear + linear + constant) operator of definite degree and parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorSpec {
    algebra: AlgebraId,
    degree: ModeIndex,
    parity: Parity,
    bilinears: Vec<BilinearTerm>,
    linear: BTreeMap<Mode, Rational>,
    constant: Rational,
}

impl OperatorSpec {
    fn empty(algebra: AlgebraId, degree: ModeIndex, parity: Parity) -> Self {
        OperatorSpec {
            algebra,
            degree,
            parity,
            bilinears: Vec::new(),
            linear: BTreeMap::new(),
            constant: Rational::zero(),
        }
    }

    /// A linear expression viewed as an operator. Its modes must share index
    /// and parity.
    pub fn from_linear(algebra: AlgebraId, expr: &LinearExpr) -> Result<Self> {
        let parity = expr.parity_in(&algebra)?;
        let mut indices = expr.terms().map(|(x, _)| x.index);
        let degree = indices.next().unwrap_or(ModeIndex::ZERO);
        let constant_off_level = !degree.is_zero() && !expr.constant().is_zero();
        if indices.any(|i| i != degree) || constant_off_level {
            return Err(Error::Domain(format!("{expr} is not homogeneous in level")));
        }
        let mut op = OperatorSpec::empty(algebra, degree, parity);
        for (x, c) in expr.terms() {
            op.algebra.check(*x)?;
            op.linear.insert(*x, c.clone());
        }
        op.constant = expr.constant().clone();
        Ok(op)
    }

    pub fn mode(algebra: AlgebraId, x: Mode) -> Result<Self> {
        OperatorSpec::from_linear(algebra, &LinearExpr::mode(x))
    }

    pub fn algebra(&self) -> &AlgebraId {
        &self.algebra
    }

    /// Level shift of the operator.
    pub fn degree(&self) -> ModeIndex {
        self.degree
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn bilinears(&self) -> &[BilinearTerm] {
        &self.bilinears
    }

    pub fn linear(&self) -> LinearExpr {
        let mut e = LinearExpr::scalar(self.constant.clone());
        for (x, c) in &self.linear {
            e.add_term(*x, c.clone());
        }
        e
    }

    /// The operator as a linear expression, if it has no bilinear part.
    pub fn as_linear(&self) -> Option<LinearExpr> {
        self.bilinears.is_empty().then(|| self.linear())
    }

    fn add_linear(&mut self, x: Mode, c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.linear.entry(x).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.linear.remove(&x);
        }
    }

    /// Summation window used by [`apply`](Self::apply): `|r| ≤ level_cap + |m|`.
    pub fn default_window_doubled(&self, space: &FockSpace) -> i64 {
        space.truncation().level_cap_doubled() + self.degree.doubled().abs()
    }

    pub fn apply(&self, space: &FockSpace, v: &StateVector) -> Result<StateVector> {
        self.apply_windowed(space, v, self.default_window_doubled(space))
    }

    /// Applies the operator summing bilinears over `|2r| ≤ half_width_doubled`.
    pub fn apply_windowed(
        &self,
        space: &FockSpace,
        v: &StateVector,
        half_width_doubled: i64,
    ) -> Result<StateVector> {
        if space.algebra() != &self.algebra {
            return Err(Error::Domain(format!(
                "operator over {} applied in the {} module",
                self.algebra,
                space.algebra()
            )));
        }
        let mut out = StateVector::zero();
        if v.is_zero() {
            return Ok(out);
        }
        for term in &self.bilinears {
            let (offset, step) = term.right_index_step();
            let mut d = -half_width_doubled;
            // align to the admissible residue class
            if (d - offset).rem_euclid(step) != 0 {
                d += 1;
            }
            while d <= half_width_doubled {
                if let Some((first, second, c)) = term.realize(ModeIndex::from_doubled(d), &self.algebra)
                {
                    for (s, a) in v.iter() {
                        let once = space.apply_mode_to_basis(first, s)?;
                        if once.is_empty() {
                            continue;
                        }
                        let ca = &c * a;
                        for (t, c1) in once {
                            for (u, c2) in space.apply_mode_to_basis(second, &t)? {
                                out.add_term(u, &ca * c1.clone() * c2);
                            }
                        }
                    }
                }
                d += step;
            }
        }
        for (x, c) in &self.linear {
            for (s, a) in v.iter() {
                for (t, c1) in space.apply_mode_to_basis(*x, s)? {
                    out.add_term(t, c * a * c1);
                }
            }
        }
        if !self.constant.is_zero() {
            out.add_scaled(v, &self.constant);
        }
        Ok(out)
    }

    /// Symbolic graded bracket `[self, x}` with a linear expression. The
    /// result is again linear (one contraction per realized bilinear term).
    pub fn bracket_linear(&self, x: &LinearExpr) -> Result<LinearExpr> {
        let alg = &self.algebra;
        let mut out = LinearExpr::zero();
        for (z, cz) in x.terms() {
            let z = *z;
            alg.check(z)?;
            let pz = alg.parity_of(z.kind);
            for term in &self.bilinears {
                // [X Y, z} = X [Y, z} + (-1)^{p(Y) p(z)} [X, z} Y
                let r = -z.index;
                if let Some((left, right, c)) = term.written_pair(r, alg) {
                    let b = canonical_bracket(right, z, alg)?;
                    if !b.is_zero() {
                        out.add_term(left, c * b * cz);
                    }
                }
                let r = term.total_index + z.index;
                if let Some((left, right, c)) = term.written_pair(r, alg) {
                    let b = canonical_bracket(left, z, alg)?;
                    if !b.is_zero() {
                        let anti = alg.parity_of(right.kind).anticommutes_with(pz);
                        let v = c * b * cz;
                        out.add_term(right, if anti { -v } else { v });
                    }
                }
            }
            for (y, cy) in &self.linear {
                let b = canonical_bracket(*y, z, alg)?;
                if !b.is_zero() {
                    out.add_constant(&(b * cy * cz));
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for t in &self.bilinears {
            parts.push(format!(
                "Σ_r ({} + ({})r) :{}[{}-r] {}[r]:{}",
                t.coeff.constant,
                t.coeff.slope,
                t.left.symbol(),
                t.total_index,
                t.right.symbol(),
                if t.omit_zero_modes { " (no zero modes)" } else { "" }
            ));
        }
        let lin = self.linear();
        if !lin.is_zero() || parts.is_empty() {
            parts.push(lin.to_string());
        }
        f.write_str(&parts.join(" + "))
    }
}

/// `(A∘B − (−1)^{p(A)p(B)} B∘A)(ψ)`, refused outside the safe window.
pub fn commutator_action(
    a: &OperatorSpec,
    b: &OperatorSpec,
    psi: &BasisState,
    space: &FockSpace,
) -> Result<StateVector> {
    ensure_safe(space, psi, &[a.degree(), b.degree()])?;
    let v = StateVector::basis(psi.clone());
    let ab = a.apply(space, &b.apply(space, &v)?)?;
    let ba = b.apply(space, &a.apply(space, &v)?)?;
    Ok(if a.parity().anticommutes_with(b.parity()) {
        &ab + &ba
    } else {
        &ab - &ba
    })
}

/// Safe-window rule for applying operators of the given degrees to `state`
/// in any order: every partial level stays within the cap, and the
/// `a†[0]` occupancy has room for one extra quantum per operator.
pub fn is_safe(space: &FockSpace, state: &BasisState, degrees: &[ModeIndex]) -> bool {
    let mut max_shift = 0i64;
    for mask in 1u32..(1 << degrees.len()) {
        let s: i64 = degrees
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, d)| d.doubled())
            .sum();
        max_shift = max_shift.max(s);
    }
    let trunc = space.truncation();
    if state.level_doubled() + max_shift > trunc.level_cap_doubled() {
        return false;
    }
    if space.algebra().zero_mode_creator().is_some()
        && state.zero_occupancy() + degrees.len() as u32 > trunc.zero_mode_cap()
    {
        return false;
    }
    true
}

pub fn ensure_safe(space: &FockSpace, state: &BasisState, degrees: &[ModeIndex]) -> Result<()> {
    if is_safe(space, state, degrees) {
        Ok(())
    } else {
        Err(Error::UnsafeLevel {
            state: state.to_string(),
            degrees: degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", "),
        })
    }
}

/// The four Virasoro realizations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorFamily {
    /// `L_m = K_m + λ(m+1) B_m` on the `a`, `a†` module.
    BosonUnconstrained,
    /// `L_m = Σ (1/M) :a†_{m-r} a†_r: + 2λ(m+1) a†_m`, zero modes skipped.
    BosonReduced,
    /// `L_m = -Σ (-λm + r) :b†_{m-r} b_r:`.
    FermionUnconstrained,
    /// `L_m = -Σ (-m/2 + r) :b_{m-r} b_r:` with `{b_r, b_s} = 1/2 δ`.
    FermionReduced,
}

impl GeneratorFamily {
    pub const ALL: [GeneratorFamily; 4] = [
        GeneratorFamily::BosonUnconstrained,
        GeneratorFamily::BosonReduced,
        GeneratorFamily::FermionUnconstrained,
        GeneratorFamily::FermionReduced,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorFamily::BosonUnconstrained => "boson-unconstrained",
            GeneratorFamily::BosonReduced => "boson-reduced",
            GeneratorFamily::FermionUnconstrained => "fermion-unconstrained",
            GeneratorFamily::FermionReduced => "fermion-reduced",
        }
    }

    pub fn algebra(self, params: &FamilyParams) -> AlgebraId {
        match self {
            GeneratorFamily::BosonUnconstrained => AlgebraId::UnconstrainedBoson,
            GeneratorFamily::BosonReduced => AlgebraId::ReducedBoson {
                mass: params.mass.clone(),
            },
            GeneratorFamily::FermionUnconstrained => AlgebraId::UnconstrainedFermion,
            GeneratorFamily::FermionReduced => AlgebraId::ReducedFermion,
        }
    }

    pub fn is_fermionic(self) -> bool {
        matches!(
            self,
            GeneratorFamily::FermionUnconstrained | GeneratorFamily::FermionReduced
        )
    }
}

impl fmt::Display for GeneratorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GeneratorFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown generator family {s:?}")))
    }
}

/// `M` (boson families) and `λ`. The two families use `λ` for unrelated
/// parameters: the boson linear-term coefficient and the fermion weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyParams {
    pub mass: Rational,
    pub lambda: Rational,
}

impl FamilyParams {
    pub fn new(mass: Rational, lambda: Rational) -> Self {
        FamilyParams { mass, lambda }
    }
}

fn integer_index(m: ModeIndex) -> Result<i64> {
    m.as_integer()
        .ok_or_else(|| Error::Domain(format!("generator label {m} must be an integer")))
}

/// `K_m = Σ_r r :a†_{m-r} a_r:`.
pub fn build_k(m: ModeIndex) -> Result<OperatorSpec> {
    integer_index(m)?;
    let mut op = OperatorSpec::empty(AlgebraId::UnconstrainedBoson, m, Parity::Even);
    op.bilinears.push(BilinearTerm {
        left: FieldKind::BosonADag,
        right: FieldKind::BosonA,
        total_index: m,
        coeff: AffineCoeff::new(Rational::zero(), Rational::one()),
        omit_zero_modes: false,
    });
    Ok(op)
}

/// `B_m = a†_m + M m a_m`.
pub fn build_b(m: ModeIndex, mass: &Rational) -> Result<OperatorSpec> {
    let mi = integer_index(m)?;
    let mut op = OperatorSpec::empty(AlgebraId::UnconstrainedBoson, m, Parity::Even);
    op.add_linear(Mode::adag(mi), Rational::one());
    op.add_linear(Mode::a(mi), mass * rational::int(mi));
    Ok(op)
}

/// `χ_m = a†_m - M m a_m`.
pub fn build_chi_boson(m: ModeIndex, mass: &Rational) -> Result<OperatorSpec> {
    let mi = integer_index(m)?;
    let mut op = OperatorSpec::empty(AlgebraId::UnconstrainedBoson, m, Parity::Even);
    op.add_linear(Mode::adag(mi), Rational::one());
    op.add_linear(Mode::a(mi), -(mass * rational::int(mi)));
    Ok(op)
}

/// The gauge condition `χ_0̄ = a_0`.
pub fn build_chi_bar0() -> OperatorSpec {
    let mut op = OperatorSpec::empty(AlgebraId::UnconstrainedBoson, ModeIndex::ZERO, Parity::Even);
    op.add_linear(Mode::a(0), Rational::one());
    op
}

/// `χ_r = b_r - b†_r` in the unconstrained fermion algebra.
pub fn build_chi_fermion(r: ModeIndex) -> Result<OperatorSpec> {
    if r.is_integer() {
        return Err(Error::Domain(format!("fermion constraint index {r} must be half-integer")));
    }
    let mut op = OperatorSpec::empty(AlgebraId::UnconstrainedFermion, r, Parity::Odd);
    op.add_linear(Mode::new(FieldKind::FermionB, r), Rational::one());
    op.add_linear(Mode::new(FieldKind::FermionBDag, r), -Rational::one());
    Ok(op)
}

/// Intercept of the normal-ordered fermion `L_0` on the half-integer moded
/// vacuum, `-(2λ-1)^2/8`. Without it the vacuum expectation of
/// `[L_m, L_{-m}]` carries a term linear in `m` that no central charge
/// absorbs; it vanishes at `λ = 1/2`.
pub fn fermion_vacuum_energy(lambda: &Rational) -> Rational {
    let t = rational::int(2) * lambda - Rational::one();
    -(&t * &t) / rational::int(8)
}

pub fn build_l(family: GeneratorFamily, m: ModeIndex, params: &FamilyParams) -> Result<OperatorSpec> {
    let mi = integer_index(m)?;
    let lam = &params.lambda;
    let mr = m.to_rational();
    match family {
        GeneratorFamily::BosonUnconstrained => {
            let mut op = build_k(m)?;
            let scale = lam * rational::int(mi + 1);
            op.add_linear(Mode::adag(mi), scale.clone());
            op.add_linear(Mode::a(mi), scale * &params.mass * rational::int(mi));
            Ok(op)
        }
        GeneratorFamily::BosonReduced => {
            if params.mass.is_zero() {
                return Err(Error::ZeroMass);
            }
            let algebra = family.algebra(params);
            let mut op = OperatorSpec::empty(algebra, m, Parity::Even);
            op.bilinears.push(BilinearTerm {
                left: FieldKind::ReducedADag,
                right: FieldKind::ReducedADag,
                total_index: m,
                coeff: AffineCoeff::new(params.mass.recip(), Rational::zero()),
                omit_zero_modes: true,
            });
            if mi != 0 {
                op.add_linear(Mode::reduced_adag(mi), rational::int(2) * lam * rational::int(mi + 1));
            }
            Ok(op)
        }
        GeneratorFamily::FermionUnconstrained => {
            let mut op = OperatorSpec::empty(AlgebraId::UnconstrainedFermion, m, Parity::Even);
            op.bilinears.push(BilinearTerm {
                left: FieldKind::FermionBDag,
                right: FieldKind::FermionB,
                total_index: m,
                coeff: AffineCoeff::new(lam * mr, -Rational::one()),
                omit_zero_modes: false,
            });
            if mi == 0 {
                op.constant = fermion_vacuum_energy(lam);
            }
            Ok(op)
        }
        GeneratorFamily::FermionReduced => {
            let mut op = OperatorSpec::empty(AlgebraId::ReducedFermion, m, Parity::Even);
            op.bilinears.push(BilinearTerm {
                left: FieldKind::ReducedB,
                right: FieldKind::ReducedB,
                total_index: m,
                coeff: AffineCoeff::new(mr / rational::int(2), -Rational::one()),
                omit_zero_modes: false,
            });
            Ok(op)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Truncation;
    use crate::rational::{frac, int};

    fn boson_space(cap: u32, z: u32) -> FockSpace {
        FockSpace::new(AlgebraId::UnconstrainedBoson, Truncation::integer(cap, z)).unwrap()
    }

    fn state(space: &FockSpace, creators: &[Mode], z: u32) -> BasisState {
        BasisState::from_creators(space.algebra(), creators, z).unwrap().unwrap().0
    }

    fn mi(m: i64) -> ModeIndex {
        ModeIndex::integer(m)
    }

    #[test]
    fn b_and_chi_linear_parts() {
        let b0 = build_b(mi(0), &int(5)).unwrap().as_linear().unwrap();
        assert_eq!(b0, LinearExpr::mode(Mode::adag(0)));
        let b2 = build_b(mi(2), &frac(1, 2)).unwrap().as_linear().unwrap();
        assert_eq!(b2, LinearExpr::mode(Mode::adag(2)).with(Mode::a(2), int(1)));
        let alg = AlgebraId::UnconstrainedBoson;
        let bm2 = build_b(mi(-2), &frac(1, 2)).unwrap().as_linear().unwrap();
        assert_eq!(b2.bracket(&bm2, &alg).unwrap(), int(-2));
        let c3 = build_chi_boson(mi(3), &int(1)).unwrap().as_linear().unwrap();
        let cm3 = build_chi_boson(mi(-3), &int(1)).unwrap().as_linear().unwrap();
        assert_eq!(c3.bracket(&cm3, &alg).unwrap(), int(6));
        let b3 = build_b(mi(3), &int(1)).unwrap().as_linear().unwrap();
        assert_eq!(b3.bracket(&cm3, &alg).unwrap(), int(0));
        let chi0 = build_chi_boson(mi(0), &int(1)).unwrap().as_linear().unwrap();
        let a0 = build_chi_bar0().as_linear().unwrap();
        assert_eq!(chi0.bracket(&a0, &alg).unwrap(), int(1));
    }

    #[test]
    fn k_brackets_symbolic() {
        let k2 = build_k(mi(2)).unwrap();
        let chi3 = build_chi_boson(mi(3), &int(1)).unwrap().as_linear().unwrap();
        let chi5 = build_chi_boson(mi(5), &int(1)).unwrap().as_linear().unwrap();
        assert_eq!(k2.bracket_linear(&chi3).unwrap(), chi5.scaled(&int(3)));
        let k1 = build_k(mi(1)).unwrap();
        assert_eq!(
            k1.bracket_linear(&LinearExpr::mode(Mode::a(2))).unwrap(),
            LinearExpr::mode(Mode::a(3)).scaled(&int(3))
        );
        assert_eq!(
            k2.bracket_linear(&LinearExpr::mode(Mode::adag(-1))).unwrap(),
            LinearExpr::mode(Mode::adag(1)).scaled(&int(-1))
        );
    }

    #[test]
    fn k_bracket_via_fock_action() {
        let fs = boson_space(6, 4);
        let k1 = build_k(mi(1)).unwrap();
        let a2 = OperatorSpec::mode(AlgebraId::UnconstrainedBoson, Mode::a(2)).unwrap();
        let a3 = OperatorSpec::mode(AlgebraId::UnconstrainedBoson, Mode::a(3)).unwrap();
        for psi in fs.enumerate_basis() {
            if !is_safe(&fs, &psi, &[mi(1), mi(2)]) {
                continue;
            }
            let lhs = commutator_action(&k1, &a2, &psi, &fs).unwrap();
            let rhs = a3.apply(&fs, &StateVector::basis(psi.clone())).unwrap().scaled(&int(3));
            assert_eq!(lhs, rhs, "on {psi}");
        }
    }

    #[test]
    fn k0_counts_level() {
        let fs = boson_space(6, 2);
        let psi = state(&fs, &[Mode::adag(2), Mode::a(1)], 0);
        let v = StateVector::basis(psi);
        assert_eq!(build_k(mi(0)).unwrap().apply(&fs, &v).unwrap(), v.scaled(&int(3)));
    }

    #[test]
    fn l0_forms() {
        let p = FamilyParams::new(int(2), frac(1, 3));
        let l0 = build_l(GeneratorFamily::BosonUnconstrained, mi(0), &p).unwrap();
        assert_eq!(l0.linear(), LinearExpr::mode(Mode::adag(0)).scaled(&frac(1, 3)));
        let r0 = build_l(GeneratorFamily::BosonReduced, mi(0), &p).unwrap();
        assert!(r0.linear().is_zero());
        assert!(r0.bilinears()[0].omit_zero_modes);
        assert_eq!(
            build_l(GeneratorFamily::BosonReduced, mi(1), &FamilyParams::new(int(0), int(1))),
            Err(Error::ZeroMass)
        );
    }

    #[test]
    fn fermion_reduced_l0_eigenvalue() {
        let fs = FockSpace::new(AlgebraId::ReducedFermion, Truncation::from_doubled(8, 0)).unwrap();
        let l0 = build_l(GeneratorFamily::FermionReduced, mi(0), &FamilyParams::new(int(1), int(0))).unwrap();
        let v = StateVector::basis(state(&fs, &[Mode::reduced_b(1)], 0));
        assert_eq!(l0.apply(&fs, &v).unwrap(), v.scaled(&frac(1, 2)));
        assert!(l0.apply(&fs, &StateVector::zero()).unwrap().is_zero());
    }

    #[test]
    fn fermion_l0_intercept() {
        assert_eq!(fermion_vacuum_energy(&int(0)), frac(-1, 8));
        assert_eq!(fermion_vacuum_energy(&frac(1, 2)), int(0));
        let fs = FockSpace::new(AlgebraId::UnconstrainedFermion, Truncation::from_doubled(2, 0)).unwrap();
        let l0 = build_l(GeneratorFamily::FermionUnconstrained, mi(0), &FamilyParams::new(int(1), int(2))).unwrap();
        let vac = StateVector::vacuum();
        assert_eq!(l0.apply(&fs, &vac).unwrap(), vac.scaled(&frac(-9, 8)));
        let l1 = build_l(GeneratorFamily::FermionUnconstrained, mi(1), &FamilyParams::new(int(1), int(2))).unwrap();
        assert!(l1.linear().is_zero());
    }

    #[test]
    fn fermion_primary_law_example() {
        // λ = 1/2: [L_1, b_{1/2}] = b_{3/2}
        let p = FamilyParams::new(int(1), frac(1, 2));
        let l1 = build_l(GeneratorFamily::FermionUnconstrained, mi(1), &p).unwrap();
        let got = l1.bracket_linear(&LinearExpr::mode(Mode::b(1))).unwrap();
        assert_eq!(got, LinearExpr::mode(Mode::b(3)));
    }

    #[test]
    fn self_commutator_vanishes() {
        let fs = boson_space(6, 4);
        let p = FamilyParams::new(int(1), frac(1, 2));
        let l1 = build_l(GeneratorFamily::BosonUnconstrained, mi(1), &p).unwrap();
        for psi in fs.enumerate_basis().into_iter().filter(|s| is_safe(&fs, s, &[mi(1), mi(1)])) {
            assert!(commutator_action(&l1, &l1, &psi, &fs).unwrap().is_zero());
        }
    }

    #[test]
    fn unsafe_probe_is_refused() {
        let fs = boson_space(3, 4);
        let p = FamilyParams::new(int(1), int(1));
        let l2 = build_l(GeneratorFamily::BosonUnconstrained, mi(2), &p).unwrap();
        let psi = state(&fs, &[Mode::a(2)], 0);
        assert!(matches!(
            commutator_action(&l2, &l2, &psi, &fs),
            Err(Error::UnsafeLevel { .. })
        ));
    }
}
