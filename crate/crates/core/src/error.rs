use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("mode {mode} does not belong to the {algebra} algebra")]
    ForeignMode { mode: String, algebra: String },

    #[error("M = 0: the 1/M kernel of the reduced boson generators is undefined")]
    ZeroMass,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("truncation overflow: {0}")]
    TruncationOverflow(String),

    #[error("probe state {state} is outside the safe window for operator degrees {degrees}")]
    UnsafeLevel { state: String, degrees: String },

    #[error("second-class block is singular on window N = {half_width}")]
    SingularBlock { half_width: u32 },

    #[error("constraint family is not fully second class (first class: {first_class}); add gauge conditions")]
    NotSecondClass { first_class: String },

    #[error("windowed inverse disagrees with the closed form at ({row}, {col}): {windowed} vs {closed}")]
    ClosedFormMismatch {
        row: String,
        col: String,
        windowed: String,
        closed: String,
    },

    #[error("central-charge oracle inconsistent: m = 2 gives {at_two}, m = 3 gives {at_three}")]
    OracleInconsistency { at_two: String, at_three: String },

    #[error("cannot parse {0:?} as an exact rational")]
    Parse(String),
}
