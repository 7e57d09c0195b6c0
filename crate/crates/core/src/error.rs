use thiserror::Error;

/// Errors raised when constructing or operating on solenoid data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("covering degree {value} at {position} is below 2")]
    DegreeTooSmall { position: String, value: u64 },

    #[error("period must contain at least one entry")]
    EmptyPeriod,

    #[error("cannot factor {0}: input must be at least 2")]
    NotFactorable(u64),

    #[error("tower depth must be at least 1")]
    ZeroDepth,

    #[error("level {level} exceeds tower depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },

    #[error("level {level} is coarser than the set's own level {set_level}")]
    LevelTooCoarse { level: usize, set_level: usize },

    #[error("residue {residue} is not below modulus {modulus}")]
    ResidueOutOfRange { residue: String, modulus: String },

    #[error("clopen set must contain at least one residue")]
    EmptyClopenSet,

    #[error("operands live on different towers")]
    TowerMismatch,

    #[error("window is not collapsible: its translates overlap without coinciding")]
    NotCollapsible,

    #[error("genus {0} is out of range for this operation")]
    InvalidGenus(i64),

    #[error("covering degree must be at least 1, got {0}")]
    InvalidDegree(i64),

    #[error("generator index {index} exceeds genus {genus}")]
    GeneratorOutOfRange { index: u32, genus: u32 },

    #[error("word has genus {word} but the surface has genus {surface}")]
    GenusMismatch { word: u32, surface: u32 },

    #[error("malformed word: {0}")]
    MalformedWord(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix at {position} has |det| = {det}; every bonding matrix needs |det| >= 2")]
    DegenerateMatrix { position: String, det: String },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("ragged matrix rows")]
    RaggedMatrix,

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
