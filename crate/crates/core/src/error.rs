use thiserror::Error;

/// Errors raised by the belief-base engine and its knowledge backends.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("propositions belong to different world universes")]
    UniverseMismatch,
    #[error("universe of {count} worlds exceeds the limit of {max}")]
    TooManyWorlds { count: usize, max: usize },
    #[error("a world universe needs at least one world")]
    EmptyUniverse,

    #[error("invalid mass {0}: masses must be finite and strictly positive")]
    InvalidMass(f64),
    #[error("masses sum to {0}, expected 1")]
    MassNotNormalized(f64),
    #[error("focal element is the empty proposition")]
    EmptyFocal,
    #[error("invalid tell weights <{x_t}, {x_f}>")]
    InvalidWeights { x_t: f64, x_f: f64 },
    #[error("total conflict: Dempster's rule is undefined")]
    TotalConflict,

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("signature has {count} atoms, limit is {max}")]
    TooManyAtoms { count: usize, max: usize },
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("unknown frame element `{0}`")]
    UnknownElement(String),

    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("predicate `{predicate}` has arity {expected}, used with {found} arguments")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("free variable `{0}`")]
    FreeVariable(String),
    #[error("unsupported quantifier use: {0}")]
    UnsupportedQuantifier(String),

    #[error("sentence not supported by this engine: {0}")]
    UnsupportedSentence(String),
    #[error("too many assumptions for the ATMS ({0})")]
    TooManyAssumptions(usize),
    #[error("configuration oracle is limited to {max} tells, state has {count}")]
    TooManyTells { count: usize, max: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
