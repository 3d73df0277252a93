use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix text is empty")]
    EmptyMatrix,
    #[error("matrix rows have unequal lengths (row {row} has {found} entries, expected {expected})")]
    RaggedRows {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("unrecognised matrix token {0:?}")]
    BadToken(String),
    #[error("matrix has no nonzero entries")]
    ZeroMatrix,
    #[error("refinement factor must be positive")]
    ZeroRefinement,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("index {index} out of range 1..={len}")]
    OutOfRange { index: usize, len: usize },
    #[error("inflation needs {expected} parts, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("inflation parts must be nonempty")]
    EmptyPart,
    #[error("invalid gridded permutation: {0}")]
    InvalidGridding(String),
    #[error("letter {0} is not in the cell alphabet")]
    UnknownLetter(String),
    #[error("malformed word token {0:?}")]
    BadWord(String),
    #[error("matrix is not a partial multiplication matrix")]
    NotPartialMultiplication,
    #[error("sign assignment does not certify the matrix")]
    BadSigns,
    #[error("matrix is not dot-isolated")]
    NotDotIsolated,
    #[error("length {requested} exceeds the configured bound {bound}")]
    BoundExceeded { requested: usize, bound: usize },
    #[error("automata have different alphabets")]
    AlphabetMismatch,
    #[error("automaton is not acyclic apart from self-loops")]
    NotPathLoopForm,
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("generating function disagrees with word counts at length {0}")]
    GfMismatch(usize),
    #[error("permutation {0} is not in the class")]
    NotInClass(String),
}
