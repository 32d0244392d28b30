//! Oscillator modes, their statistics, and the canonical brackets of the
//! four mode algebras (plus the even-statistics copy of the fermion
//! algebra used to exhibit the spin-statistics degeneracy).

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Z2 grading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        matches!(self, Parity::Odd)
    }

    pub fn from_odd(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// `p(self) + p(other)` mod 2.
    pub fn combine(self, other: Parity) -> Parity {
        Parity::from_odd(self.is_odd() != other.is_odd())
    }

    /// True when `(-1)^{p(self) p(other)} = -1`.
    pub fn anticommutes_with(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

/// A mode index in `Z` or `Z + 1/2`, stored doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex(i64);

impl ModeIndex {
    pub const ZERO: ModeIndex = ModeIndex(0);

    pub fn integer(m: i64) -> Self {
        ModeIndex(2 * m)
    }

    pub fn from_doubled(doubled: i64) -> Self {
        ModeIndex(doubled)
    }

    /// `r` given as `numerator / 2`, i.e. `half(3)` is `3/2`.
    pub fn half(numerator: i64) -> Self {
        ModeIndex(numerator)
    }

    pub fn doubled(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The integer value; `None` for half-integers.
    pub fn as_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn to_rational(self) -> Rational {
        rational::frac(self.0, 2)
    }

    pub fn abs(self) -> Self {
        ModeIndex(self.0.abs())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let r = rational::parse(text)?;
        let doubled = r * rational::int(2);
        if !rational::is_integer(&doubled) {
            return Err(Error::Parse(text.to_string()));
        }
        let d: i64 = doubled
            .numer()
            .try_into()
            .map_err(|_| Error::Parse(text.to_string()))?;
        Ok(ModeIndex(d))
    }
}

impl Add for ModeIndex {
    type Output = ModeIndex;
    fn add(self, rhs: ModeIndex) -> ModeIndex {
        ModeIndex(self.0 + rhs.0)
    }
}

impl Sub for ModeIndex {
    type Output = ModeIndex;
    fn sub(self, rhs: ModeIndex) -> ModeIndex {
        ModeIndex(self.0 - rhs.0)
    }
}

impl Neg for ModeIndex {
    type Output = ModeIndex;
    fn neg(self) -> ModeIndex {
        ModeIndex(-self.0)
    }
}

impl fmt::Display for ModeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Which oscillator a mode belongs to.
///
/// The order of the variants fixes the canonical order of creators inside
/// a basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    /// `a`, the weight-0 boson.
    BosonA,
    /// `a†`, its weight-1 conjugate.
    BosonADag,
    /// `b`, the fermion of weight λ.
    FermionB,
    /// `b†`, its conjugate of weight 1 − λ.
    FermionBDag,
    /// `a†` after eliminating `a` by the boson constraints.
    ReducedADag,
    /// `b` after eliminating `b†` by the fermion constraints.
    ReducedB,
}

impl FieldKind {
    pub fn parity(self) -> Parity {
        match self {
            FieldKind::BosonA | FieldKind::BosonADag | FieldKind::ReducedADag => Parity::Even,
            FieldKind::FermionB | FieldKind::FermionBDag | FieldKind::ReducedB => Parity::Odd,
        }
    }

    /// Conformal weight. `lambda` is the fermion weight parameter; the boson
    /// weights do not depend on it.
    pub fn weight(self, lambda: &Rational) -> Rational {
        match self {
            FieldKind::BosonA => Rational::zero(),
            FieldKind::BosonADag | FieldKind::ReducedADag => Rational::one(),
            FieldKind::FermionB => lambda.clone(),
            FieldKind::FermionBDag => Rational::one() - lambda,
            FieldKind::ReducedB => rational::frac(1, 2),
        }
    }

    /// Fermionic kinds carry half-integer indices.
    pub fn half_integer_indexed(self) -> bool {
        matches!(
            self,
            FieldKind::FermionB | FieldKind::FermionBDag | FieldKind::ReducedB
        )
    }

    pub fn symbol(self) -> &'static str {
        match self {
            FieldKind::BosonA => "a",
            FieldKind::BosonADag | FieldKind::ReducedADag => "a†",
            FieldKind::FermionB | FieldKind::ReducedB => "b",
            FieldKind::FermionBDag => "b†",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mode {
    pub kind: FieldKind,
    pub index: ModeIndex,
}

impl Mode {
    pub fn new(kind: FieldKind, index: ModeIndex) -> Self {
        Mode { kind, index }
    }

    pub fn a(m: i64) -> Self {
        Mode::new(FieldKind::BosonA, ModeIndex::integer(m))
    }

    pub fn adag(m: i64) -> Self {
        Mode::new(FieldKind::BosonADag, ModeIndex::integer(m))
    }

    pub fn reduced_adag(m: i64) -> Self {
        Mode::new(FieldKind::ReducedADag, ModeIndex::integer(m))
    }

    /// `b[doubled/2]`.
    pub fn b(doubled: i64) -> Self {
        Mode::new(FieldKind::FermionB, ModeIndex::half(doubled))
    }

    pub fn bdag(doubled: i64) -> Self {
        Mode::new(FieldKind::FermionBDag, ModeIndex::half(doubled))
    }

    pub fn reduced_b(doubled: i64) -> Self {
        Mode::new(FieldKind::ReducedB, ModeIndex::half(doubled))
    }

    pub fn parity(self) -> Parity {
        self.kind.parity()
    }

    pub fn is_creator(self) -> bool {
        let d = self.index.doubled();
        d > 0 || (d == 0 && matches!(self.kind, FieldKind::BosonADag | FieldKind::ReducedADag))
    }

    pub fn is_annihilator(self) -> bool {
        !self.is_creator()
    }

    pub fn level(self) -> Rational {
        mode_level(self)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.kind.symbol(), self.index)
    }
}

/// Level grading of a mode. The bilinear `a†[m-r] a[r]` has level `m` for
/// every `r`, so generators labelled `m` are homogeneous of level `m`.
pub fn mode_level(x: Mode) -> Rational {
    x.index.to_rational()
}

/// The mode algebras the engine works in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AlgebraId {
    /// `[a†_m, a_n] = δ_{m+n}`.
    UnconstrainedBoson,
    /// `{b_r, b†_s} = δ_{r+s}`.
    UnconstrainedFermion,
    /// Reduced boson, `[a†_m, a†_n] = -(M/2) m δ_{m+n}`; `a†_0` is removed.
    ReducedBoson { mass: Rational },
    /// Reduced fermion, `{b_r, b_s} = 1/2 δ_{r+s}`.
    ReducedFermion,
    /// `b`, `b†` with the fermion bracket values but even statistics:
    /// `[b_r, b†_s] = δ_{r+s}`.
    EvenFermionCopy,
}

impl AlgebraId {
    pub fn name(&self) -> String {
        match self {
            AlgebraId::UnconstrainedBoson => "unconstrained-boson".into(),
            AlgebraId::UnconstrainedFermion => "unconstrained-fermion".into(),
            AlgebraId::ReducedBoson { mass } => format!("reduced-boson(M={mass})"),
            AlgebraId::ReducedFermion => "reduced-fermion".into(),
            AlgebraId::EvenFermionCopy => "even-fermion-copy".into(),
        }
    }

    pub fn kinds(&self) -> &'static [FieldKind] {
        match self {
            AlgebraId::UnconstrainedBoson => &[FieldKind::BosonA, FieldKind::BosonADag],
            AlgebraId::UnconstrainedFermion | AlgebraId::EvenFermionCopy => {
                &[FieldKind::FermionB, FieldKind::FermionBDag]
            }
            AlgebraId::ReducedBoson { .. } => &[FieldKind::ReducedADag],
            AlgebraId::ReducedFermion => &[FieldKind::ReducedB],
        }
    }

    pub fn contains(&self, x: Mode) -> bool {
        if !self.kinds().contains(&x.kind) {
            return false;
        }
        if x.kind.half_integer_indexed() == x.index.is_integer() {
            return false;
        }
        // a†_0 = χ_0 ≈ 0 is eliminated together with a_0.
        !(matches!(self, AlgebraId::ReducedBoson { .. }) && x.index.is_zero())
    }

    pub fn check(&self, x: Mode) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::ForeignMode {
                mode: x.to_string(),
                algebra: self.name(),
            })
        }
    }

    /// Statistics of a kind inside this algebra.
    pub fn parity_of(&self, kind: FieldKind) -> Parity {
        match self {
            AlgebraId::EvenFermionCopy => Parity::Even,
            _ => kind.parity(),
        }
    }

    /// The zero-mode creator `a†[0]`, when the algebra has one.
    pub fn zero_mode_creator(&self) -> Option<Mode> {
        matches!(self, AlgebraId::UnconstrainedBoson).then(|| Mode::adag(0))
    }

    pub fn half_integer_indexed(&self) -> bool {
        self.kinds()[0].half_integer_indexed()
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Scalar value of the graded commutator `[x, y} = xy - (-1)^{p(x)p(y)} yx`.
pub fn canonical_bracket(x: Mode, y: Mode, algebra: &AlgebraId) -> Result<Rational> {
    algebra.check(x)?;
    algebra.check(y)?;
    if x.index + y.index != ModeIndex::ZERO {
        return Ok(Rational::zero());
    }
    use FieldKind::*;
    let value = match (algebra, x.kind, y.kind) {
        (AlgebraId::UnconstrainedBoson, BosonADag, BosonA) => Rational::one(),
        (AlgebraId::UnconstrainedBoson, BosonA, BosonADag) => -Rational::one(),
        (AlgebraId::UnconstrainedFermion, FermionB, FermionBDag)
        | (AlgebraId::UnconstrainedFermion, FermionBDag, FermionB) => Rational::one(),
        (AlgebraId::EvenFermionCopy, FermionB, FermionBDag) => Rational::one(),
        (AlgebraId::EvenFermionCopy, FermionBDag, FermionB) => -Rational::one(),
        (AlgebraId::ReducedBoson { mass }, ReducedADag, ReducedADag) => {
            -(mass * x.index.to_rational()) / rational::int(2)
        }
        (AlgebraId::ReducedFermion, ReducedB, ReducedB) => rational::frac(1, 2),
        _ => Rational::zero(),
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn all_algebras() -> Vec<AlgebraId> {
        vec![
            AlgebraId::UnconstrainedBoson,
            AlgebraId::UnconstrainedFermion,
            AlgebraId::ReducedBoson { mass: frac(3, 2) },
            AlgebraId::ReducedFermion,
            AlgebraId::EvenFermionCopy,
        ]
    }

    fn window_modes(algebra: &AlgebraId, max_doubled: i64) -> Vec<Mode> {
        let mut out = Vec::new();
        for &kind in algebra.kinds() {
            for d in -max_doubled..=max_doubled {
                let x = Mode::new(kind, ModeIndex::from_doubled(d));
                if algebra.contains(x) {
                    out.push(x);
                }
            }
        }
        out
    }

    #[test]
    fn boson_canonical_pair() {
        let alg = AlgebraId::UnconstrainedBoson;
        assert_eq!(canonical_bracket(Mode::adag(2), Mode::a(-2), &alg).unwrap(), int(1));
        assert_eq!(canonical_bracket(Mode::a(-2), Mode::adag(2), &alg).unwrap(), int(-1));
        assert_eq!(canonical_bracket(Mode::a(0), Mode::a(0), &alg).unwrap(), int(0));
        assert_eq!(canonical_bracket(Mode::adag(1), Mode::a(2), &alg).unwrap(), int(0));
    }

    #[test]
    fn reduced_brackets() {
        let alg = AlgebraId::ReducedBoson { mass: int(1) };
        let x = |m| Mode::reduced_adag(m);
        assert_eq!(canonical_bracket(x(3), x(5), &alg).unwrap(), int(0));
        assert_eq!(canonical_bracket(x(3), x(-3), &alg).unwrap(), frac(-3, 2));
        let fer = AlgebraId::ReducedFermion;
        assert_eq!(
            canonical_bracket(Mode::reduced_b(1), Mode::reduced_b(-1), &fer).unwrap(),
            frac(1, 2)
        );
    }

    #[test]
    fn foreign_modes_are_rejected() {
        let err = canonical_bracket(Mode::b(1), Mode::a(0), &AlgebraId::UnconstrainedBoson);
        assert!(matches!(err, Err(Error::ForeignMode { .. })));
        // integer-indexed fermion
        let bad = Mode::new(FieldKind::FermionB, ModeIndex::integer(1));
        assert!(!AlgebraId::UnconstrainedFermion.contains(bad));
        // a†_0 is gone from the reduced boson algebra
        let alg = AlgebraId::ReducedBoson { mass: int(1) };
        assert!(canonical_bracket(Mode::reduced_adag(0), Mode::reduced_adag(0), &alg).is_err());
    }

    #[test]
    fn levels() {
        assert_eq!(mode_level(Mode::adag(-3)), int(-3));
        assert_eq!(mode_level(Mode::b(5)), frac(5, 2));
        // a†[m-r] a[r] has total level m for every r
        let m = 2;
        for r in -10..=10 {
            assert_eq!(mode_level(Mode::adag(m - r)) + mode_level(Mode::a(r)), int(m));
        }
    }

    #[test]
    fn field_metadata() {
        let lam = frac(1, 3);
        assert_eq!(FieldKind::BosonA.weight(&lam), int(0));
        assert_eq!(FieldKind::BosonADag.weight(&lam), int(1));
        assert_eq!(FieldKind::FermionB.weight(&lam), frac(1, 3));
        assert_eq!(FieldKind::FermionBDag.weight(&lam), frac(2, 3));
        for k in [FieldKind::BosonA, FieldKind::BosonADag, FieldKind::ReducedADag] {
            assert_eq!(k.parity(), Parity::Even);
        }
        for k in [FieldKind::FermionB, FieldKind::FermionBDag, FieldKind::ReducedB] {
            assert_eq!(k.parity(), Parity::Odd);
        }
    }

    #[test]
    fn creators_and_annihilators() {
        assert!(Mode::a(1).is_creator());
        assert!(Mode::adag(0).is_creator());
        assert!(Mode::a(0).is_annihilator());
        assert!(Mode::b(-1).is_annihilator());
    }

    #[test]
    fn mode_text() {
        assert_eq!(Mode::adag(-3).to_string(), "a†[-3]");
        assert_eq!(Mode::b(1).to_string(), "b[1/2]");
        assert_eq!(Mode::bdag(-5).to_string(), "b†[-5/2]");
        assert_eq!(ModeIndex::parse("-3/2").unwrap(), ModeIndex::half(-3));
        assert!(ModeIndex::parse("1/3").is_err());
    }

    #[test]
    fn graded_antisymmetry_and_grading_on_window() {
        for alg in all_algebras() {
            let modes = window_modes(&alg, 16);
            for &x in &modes {
                for &y in &modes {
                    let xy = canonical_bracket(x, y, &alg).unwrap();
                    let yx = canonical_bracket(y, x, &alg).unwrap();
                    let anti = alg.parity_of(x.kind).anticommutes_with(alg.parity_of(y.kind));
                    let expected = if anti { yx.clone() } else { -yx.clone() };
                    assert_eq!(xy, expected, "{alg}: [{x},{y}]");
                    if !xy.is_zero() {
                        assert!((mode_level(x) + mode_level(y)).is_zero());
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn index_arithmetic_matches_rationals(a in -40i64..40, b in -40i64..40) {
            let (x, y) = (ModeIndex::from_doubled(a), ModeIndex::from_doubled(b));
            prop_assert_eq!((x + y).to_rational(), x.to_rational() + y.to_rational());
            prop_assert_eq!((x - y).to_rational(), x.to_rational() - y.to_rational());
            prop_assert_eq!(ModeIndex::parse(&x.to_string()).unwrap(), x);
        }
    }
}
