//! Level-truncated Fock modules.
//!
//! A basis state is `(a†[0])^z c_1 c_2 ... c_k |0>` with the creators `c_i`
//! in canonical (ascending) order. Applying a mode never drops a component
//! silently: anything leaving the truncation is reported as
//! [`Error::TruncationOverflow`].

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{canonical_bracket, AlgebraId, Mode, ModeIndex};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Maximum total level and maximum `a†[0]` occupancy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Truncation {
    level_cap_doubled: i64,
    zero_mode_cap: u32,
}

impl Truncation {
    pub fn new(level_cap: &Rational, zero_mode_cap: u32) -> Result<Self> {
        let doubled = level_cap * rational::int(2);
        if !rational::is_integer(&doubled) || doubled < Rational::zero() {
            return Err(Error::Domain(format!(
                "level cap {level_cap} is not a non-negative multiple of 1/2"
            )));
        }
        let level_cap_doubled = doubled
            .numer()
            .try_into()
            .map_err(|_| Error::Domain(format!("level cap {level_cap} too large")))?;
        Ok(Truncation {
            level_cap_doubled,
            zero_mode_cap,
        })
    }

    pub fn integer(level_cap: u32, zero_mode_cap: u32) -> Self {
        Truncation {
            level_cap_doubled: 2 * i64::from(level_cap),
            zero_mode_cap,
        }
    }

    pub fn from_doubled(level_cap_doubled: u32, zero_mode_cap: u32) -> Self {
        Truncation {
            level_cap_doubled: i64::from(level_cap_doubled),
            zero_mode_cap,
        }
    }

    pub fn level_cap(&self) -> Rational {
        rational::frac(self.level_cap_doubled, 2)
    }

    pub fn level_cap_doubled(&self) -> i64 {
        self.level_cap_doubled
    }

    pub fn zero_mode_cap(&self) -> u32 {
        self.zero_mode_cap
    }

    fn validate_for(&self, algebra: &AlgebraId) -> Result<()> {
        if !algebra.half_integer_indexed() && self.level_cap_doubled % 2 != 0 {
            return Err(Error::Domain(format!(
                "level cap {} must be an integer for the {algebra} module",
                self.level_cap()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisState {
    creators: Vec<Mode>,
    zero_occupancy: u32,
}

impl BasisState {
    pub fn vacuum() -> Self {
        BasisState {
            creators: Vec::new(),
            zero_occupancy: 0,
        }
    }

    /// Builds the normal-ordered state `(a†[0])^z x_1 ... x_k |0>` and returns
    /// it with the sign picked up while sorting the creators. `None` when a
    /// fermionic creator repeats (the state vanishes).
    pub fn from_creators(
        algebra: &AlgebraId,
        creators: &[Mode],
        zero_occupancy: u32,
    ) -> Result<Option<(Self, Rational)>> {
        let mut state = BasisState {
            creators: Vec::new(),
            zero_occupancy,
        };
        let mut sign = Rational::one();
        for &c in creators.iter().rev() {
            algebra.check(c)?;
            if !c.is_creator() || c.index.is_zero() {
                return Err(Error::Domain(format!("{c} is not a nonzero-index creator")));
            }
            match state.insert_creator(algebra, c) {
                Some((s, negative)) => {
                    state = s;
                    if negative {
                        sign = -sign;
                    }
                }
                None => return Ok(None),
            }
        }
        Ok(Some((state, sign)))
    }

    pub fn creators(&self) -> &[Mode] {
        &self.creators
    }

    pub fn zero_occupancy(&self) -> u32 {
        self.zero_occupancy
    }

    pub fn is_vacuum(&self) -> bool {
        self.creators.is_empty() && self.zero_occupancy == 0
    }

    pub fn level_doubled(&self) -> i64 {
        self.creators.iter().map(|c| c.index.doubled()).sum()
    }

    pub fn level(&self) -> Rational {
        rational::frac(self.level_doubled(), 2)
    }

    /// Left-multiplies by the creator `x` and re-sorts. Returns the new state
    /// and whether an odd number of fermionic transpositions occurred, or
    /// `None` for a repeated fermion.
    fn insert_creator(&self, algebra: &AlgebraId, x: Mode) -> Option<(BasisState, bool)> {
        let odd = algebra.parity_of(x.kind).is_odd();
        let pos = self.creators.partition_point(|c| *c <= x);
        if odd && pos > 0 && self.creators[pos - 1] == x {
            return None;
        }
        let negative = odd
            && self.creators[..pos]
                .iter()
                .filter(|c| algebra.parity_of(c.kind).is_odd())
                .count()
                % 2
                == 1;
        let mut creators = Vec::with_capacity(self.creators.len() + 1);
        creators.extend_from_slice(&self.creators[..pos]);
        creators.push(x);
        creators.extend_from_slice(&self.creators[pos..]);
        Some((
            BasisState {
                creators,
                zero_occupancy: self.zero_occupancy,
            },
            negative,
        ))
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.zero_occupancy {
            0 => {}
            1 => write!(f, "a†[0] ")?,
            z => write!(f, "a†[0]^{z} ")?,
        }
        for c in &self.creators {
            write!(f, "{c} ")?;
        }
        write!(f, "|0>")
    }
}

/// Finite linear combination of basis states. Zero amplitudes are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StateVector {
    amplitudes: BTreeMap<BasisState, Rational>,
}

impl StateVector {
    pub fn zero() -> Self {
        StateVector::default()
    }

    pub fn vacuum() -> Self {
        StateVector::basis(BasisState::vacuum())
    }

    pub fn basis(state: BasisState) -> Self {
        let mut v = StateVector::zero();
        v.add_term(state, Rational::one());
        v
    }

    pub fn add_term(&mut self, state: BasisState, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.amplitudes.entry(state) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += coeff * other`.
    pub fn add_scaled(&mut self, other: &StateVector, coeff: &Rational) {
        if coeff.is_zero() {
            return;
        }
        for (s, a) in &other.amplitudes {
            self.add_term(s.clone(), a * coeff);
        }
    }

    pub fn scaled(&self, coeff: &Rational) -> StateVector {
        let mut out = StateVector::zero();
        out.add_scaled(self, coeff);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn amplitude(&self, state: &BasisState) -> Rational {
        self.amplitudes.get(state).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisState, &Rational)> {
        self.amplitudes.iter()
    }

    pub fn vacuum_component(&self) -> Rational {
        self.amplitude(&BasisState::vacuum())
    }
}

impl std::ops::Sub<&StateVector> for &StateVector {
    type Output = StateVector;
    fn sub(self, rhs: &StateVector) -> StateVector {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl std::ops::Add<&StateVector> for &StateVector {
    type Output = StateVector;
    fn add(self, rhs: &StateVector) -> StateVector {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (s, a)) in self.amplitudes.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({a}) {s}")?;
        }
        Ok(())
    }
}

pub fn vacuum_component(v: &StateVector) -> Rational {
    v.vacuum_component()
}

/// A mode algebra together with a truncation of its Fock module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockSpace {
    algebra: AlgebraId,
    trunc: Truncation,
}

impl FockSpace {
    pub fn new(algebra: AlgebraId, trunc: Truncation) -> Result<Self> {
        trunc.validate_for(&algebra)?;
        Ok(FockSpace { algebra, trunc })
    }

    pub fn algebra(&self) -> &AlgebraId {
        &self.algebra
    }

    pub fn truncation(&self) -> &Truncation {
        &self.trunc
    }

    /// Every basis state within the truncation, ordered by level and then
    /// canonically.
    pub fn enumerate_basis(&self) -> Vec<BasisState> {
        let cap = self.trunc.level_cap_doubled;
        let step = if self.algebra.half_integer_indexed() { 1 } else { 2 };
        let start = step;
        let mut candidates = Vec::new();
        for &kind in self.algebra.kinds() {
            let mut d = start;
            while d <= cap {
                let x = Mode::new(kind, ModeIndex::from_doubled(d));
                if self.algebra.contains(x) {
                    candidates.push(x);
                }
                d += step;
            }
        }
        candidates.sort();

        let mut partial = Vec::new();
        let mut out = Vec::new();
        self.extend_partitions(&candidates, 0, cap, &mut partial, &mut out);

        let z_max = if self.algebra.zero_mode_creator().is_some() {
            self.trunc.zero_mode_cap
        } else {
            0
        };
        let mut states: Vec<BasisState> = out
            .into_iter()
            .flat_map(|creators: Vec<Mode>| {
                (0..=z_max).map(move |z| BasisState {
                    creators: creators.clone(),
                    zero_occupancy: z,
                })
            })
            .collect();
        states.sort_by(|a, b| a.level_doubled().cmp(&b.level_doubled()).then_with(|| a.cmp(b)));
        states
    }

    fn extend_partitions(
        &self,
        candidates: &[Mode],
        from: usize,
        budget: i64,
        partial: &mut Vec<Mode>,
        out: &mut Vec<Vec<Mode>>,
    ) {
        out.push(partial.clone());
        for i in from..candidates.len() {
            let x = candidates[i];
            if x.index.doubled() > budget {
                continue;
            }
            let odd = self.algebra.parity_of(x.kind).is_odd();
            partial.push(x);
            let next = if odd { i + 1 } else { i };
            self.extend_partitions(candidates, next, budget - x.index.doubled(), partial, out);
            partial.pop();
        }
    }

    /// `x` applied to a single basis state, as (state, coefficient) pairs.
    /// Repeated states may appear; callers accumulate.
    pub fn apply_mode_to_basis(
        &self,
        x: Mode,
        state: &BasisState,
    ) -> Result<Vec<(BasisState, Rational)>> {
        self.algebra.check(x)?;
        let mut out = Vec::new();
        if x.is_creator() {
            if Some(x) == self.algebra.zero_mode_creator() {
                if state.zero_occupancy + 1 > self.trunc.zero_mode_cap {
                    return Err(Error::TruncationOverflow(format!(
                        "{x} on {state} exceeds zero-mode cap {}",
                        self.trunc.zero_mode_cap
                    )));
                }
                let mut s = state.clone();
                s.zero_occupancy += 1;
                out.push((s, Rational::one()));
                return Ok(out);
            }
            let level = state.level_doubled() + x.index.doubled();
            if level > self.trunc.level_cap_doubled {
                return Err(Error::TruncationOverflow(format!(
                    "{x} on {state} exceeds level cap {}",
                    self.trunc.level_cap()
                )));
            }
            if let Some((s, negative)) = state.insert_creator(&self.algebra, x) {
                out.push((s, rational::sign(negative)));
            }
            return Ok(out);
        }

        let x_odd = self.algebra.parity_of(x.kind).is_odd();
        let target = -x.index;
        let mut odd_before = 0usize;
        for (i, c) in state.creators.iter().enumerate() {
            if c.index == target {
                let b = canonical_bracket(x, *c, &self.algebra)?;
                if !b.is_zero() {
                    let mut creators = state.creators.clone();
                    creators.remove(i);
                    let negative = x_odd && odd_before % 2 == 1;
                    out.push((
                        BasisState {
                            creators,
                            zero_occupancy: state.zero_occupancy,
                        },
                        if negative { -b } else { b },
                    ));
                }
            }
            if self.algebra.parity_of(c.kind).is_odd() {
                odd_before += 1;
            }
        }
        if let Some(zc) = self.algebra.zero_mode_creator() {
            if state.zero_occupancy > 0 && target.is_zero() {
                let b = canonical_bracket(x, zc, &self.algebra)?;
                if !b.is_zero() {
                    let mut s = state.clone();
                    s.zero_occupancy -= 1;
                    out.push((s, b * rational::int(i64::from(state.zero_occupancy))));
                }
            }
        }
        Ok(out)
    }

    pub fn apply_mode(&self, x: Mode, v: &StateVector) -> Result<StateVector> {
        let mut out = StateVector::zero();
        for (s, a) in v.iter() {
            for (t, c) in self.apply_mode_to_basis(x, s)? {
                out.add_term(t, c * a);
            }
        }
        Ok(out)
    }

    /// Applies `modes` right to left, i.e. `modes[0]` acts last.
    pub fn apply_word(&self, modes: &[Mode], v: &StateVector) -> Result<StateVector> {
        let mut cur = v.clone();
        for &x in modes.iter().rev() {
            cur = self.apply_mode(x, &cur)?;
        }
        Ok(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn space(alg: AlgebraId, cap_doubled: u32, z: u32) -> FockSpace {
        FockSpace::new(alg, Truncation::from_doubled(cap_doubled, z)).unwrap()
    }

    fn state(alg: &AlgebraId, creators: &[Mode], z: u32) -> BasisState {
        let (s, sign) = BasisState::from_creators(alg, creators, z).unwrap().unwrap();
        assert_eq!(sign, int(1));
        s
    }

    #[test]
    fn reduced_fermion_level_two_basis() {
        let alg = AlgebraId::ReducedFermion;
        let basis = space(alg.clone(), 4, 0).enumerate_basis();
        let expected = vec![
            BasisState::vacuum(),
            state(&alg, &[Mode::reduced_b(1)], 0),
            state(&alg, &[Mode::reduced_b(3)], 0),
            state(&alg, &[Mode::reduced_b(1), Mode::reduced_b(3)], 0),
        ];
        assert_eq!(basis, expected);
    }

    #[test]
    fn level_zero_is_vacuum_only() {
        for alg in [
            AlgebraId::UnconstrainedBoson,
            AlgebraId::UnconstrainedFermion,
            AlgebraId::ReducedBoson { mass: int(1) },
            AlgebraId::ReducedFermion,
        ] {
            assert_eq!(space(alg, 0, 0).enumerate_basis(), vec![BasisState::vacuum()]);
        }
    }

    #[test]
    fn unconstrained_fermion_level_one() {
        let alg = AlgebraId::UnconstrainedFermion;
        let basis = space(alg, 2, 0).enumerate_basis();
        let levels: Vec<_> = basis.iter().map(BasisState::level).collect();
        assert_eq!(levels, vec![int(0), frac(1, 2), frac(1, 2), int(1)]);
    }

    #[test]
    fn boson_integer_cap_required() {
        assert!(FockSpace::new(AlgebraId::UnconstrainedBoson, Truncation::from_doubled(3, 1)).is_err());
        assert!(FockSpace::new(AlgebraId::ReducedFermion, Truncation::from_doubled(3, 0)).is_ok());
    }

    #[test]
    fn contraction_with_canonical_bracket() {
        let fs = space(AlgebraId::UnconstrainedBoson, 4, 2);
        // a†[-2] a[2] |0> = [a†[-2], a[2]] |0> = |0>
        let v = fs.apply_word(&[Mode::adag(-2), Mode::a(2)], &StateVector::vacuum()).unwrap();
        assert_eq!(v, StateVector::vacuum());
        // a[-2] a†[2]|0> = -|0>
        let v = fs.apply_word(&[Mode::a(-2), Mode::adag(2)], &StateVector::vacuum()).unwrap();
        assert_eq!(v, StateVector::vacuum().scaled(&int(-1)));
    }

    #[test]
    fn reduced_fermion_contraction_and_nilpotency() {
        let fs = space(AlgebraId::ReducedFermion, 4, 0);
        let b1 = StateVector::basis(state(fs.algebra(), &[Mode::reduced_b(1)], 0));
        let v = fs.apply_mode(Mode::reduced_b(-1), &b1).unwrap();
        assert_eq!(v, StateVector::vacuum().scaled(&frac(1, 2)));
        assert!(fs.apply_mode(Mode::reduced_b(1), &b1).unwrap().is_zero());
    }

    #[test]
    fn fermion_signs() {
        let alg = AlgebraId::ReducedFermion;
        let fs = space(alg.clone(), 8, 0);
        // b[3/2] b[1/2] |0> = - b[1/2] b[3/2] |0>
        let (s, sign) = BasisState::from_creators(&alg, &[Mode::reduced_b(3), Mode::reduced_b(1)], 0)
            .unwrap()
            .unwrap();
        assert_eq!(sign, int(-1));
        let direct = fs
            .apply_word(&[Mode::reduced_b(3), Mode::reduced_b(1)], &StateVector::vacuum())
            .unwrap();
        assert_eq!(direct, StateVector::basis(s.clone()).scaled(&int(-1)));
        // removing b[3/2] from b[1/2] b[3/2]|0> crosses one fermion
        let v = fs.apply_mode(Mode::reduced_b(-3), &StateVector::basis(s)).unwrap();
        let b1 = state(&alg, &[Mode::reduced_b(1)], 0);
        assert_eq!(v, StateVector::basis(b1).scaled(&frac(-1, 2)));
    }

    #[test]
    fn zero_mode_derivative() {
        let fs = space(AlgebraId::UnconstrainedBoson, 2, 3);
        let z2 = StateVector::basis(BasisState {
            creators: vec![],
            zero_occupancy: 2,
        });
        let v = fs.apply_mode(Mode::a(0), &z2).unwrap();
        let z1 = StateVector::basis(BasisState {
            creators: vec![],
            zero_occupancy: 1,
        });
        assert_eq!(v, z1.scaled(&int(-2)));
    }

    #[test]
    fn overflow_is_reported() {
        let fs = space(AlgebraId::UnconstrainedBoson, 2, 1);
        let err = fs.apply_mode(Mode::a(2), &StateVector::vacuum());
        assert!(matches!(err, Err(Error::TruncationOverflow(_))));
        let once = fs.apply_mode(Mode::adag(0), &StateVector::vacuum()).unwrap();
        assert!(matches!(fs.apply_mode(Mode::adag(0), &once), Err(Error::TruncationOverflow(_))));
    }

    #[test]
    fn annihilators_kill_vacuum() {
        let fs = space(AlgebraId::UnconstrainedBoson, 12, 2);
        for m in -6..=0 {
            assert!(fs.apply_mode(Mode::a(m), &StateVector::vacuum()).unwrap().is_zero());
            if m < 0 {
                assert!(fs.apply_mode(Mode::adag(m), &StateVector::vacuum()).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn vacuum_component_lookup() {
        assert_eq!(vacuum_component(&StateVector::vacuum()), int(1));
        let alg = AlgebraId::UnconstrainedBoson;
        let v = StateVector::basis(state(&alg, &[Mode::adag(1)], 0));
        assert_eq!(vacuum_component(&v), int(0));
        let ralg = AlgebraId::ReducedFermion;
        let mut w = StateVector::vacuum().scaled(&frac(3, 2));
        w.add_term(state(&ralg, &[Mode::reduced_b(1), Mode::reduced_b(3)], 0), int(-2));
        assert_eq!(vacuum_component(&w), frac(3, 2));
    }
}
