//! Exact-arithmetic free-field Fock modules of the Virasoro algebra.
//!
//! The crate builds the scalar-boson and scalar-fermion oscillator
//! realizations, reduces them by second-class constraints through the
//! graded Dirac bracket, and checks the resulting Virasoro relations and
//! central charges on level-truncated Fock spaces. All arithmetic is over
//! arbitrary-precision rationals.
//!
//! Index convention: modes with positive index create, modes with negative
//! index annihilate. For the boson zero modes `a†[0]` creates and `a[0]`
//! annihilates. The level of a mode is its index, so `L[m]` raises the level
//! by `m`.

pub mod algebra;
pub mod dirac;
pub mod error;
pub mod fock;
pub mod linear;
mod linalg;
pub mod operators;
pub mod rational;
pub mod verify;

pub use algebra::{canonical_bracket, mode_level, AlgebraId, FieldKind, Mode, ModeIndex, Parity};
pub use dirac::{ConstraintFamily, ConstraintLabel, Window};
pub use error::{Error, Result};
pub use fock::{BasisState, FockSpace, StateVector, Truncation};
pub use linear::LinearExpr;
pub use operators::{FamilyParams, GeneratorFamily, OperatorSpec};
pub use rational::Rational;
pub use verify::{CheckReport, CheckStatus, ScenarioParams};
