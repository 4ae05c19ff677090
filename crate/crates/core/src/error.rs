use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid character {found:?} at column {column}; words are '0'/'1' strings")]
    NonBinary { found: char, column: usize },
    #[error("empty word")]
    EmptyWord,
    #[error("index {index} out of range for word of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("support indices must be strictly increasing")]
    UnsortedSupport,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid residue system: target {target} not in [0, {modulus})")]
    InvalidResidue { modulus: u64, target: u64 },

    #[error("line {line}: word length {found}, expected {expected}")]
    RaggedCodebook { line: usize, expected: usize, found: usize },
    #[error("line {line}: duplicate codeword {word}")]
    DuplicateWord { line: usize, word: String },
    #[error("codebook is empty")]
    EmptyCodebook,
    #[error("minimum distance needs at least two codewords")]
    TooFewWords,
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("word length {0} too large for exhaustive sweep (max 20)")]
    SweepTooLarge(usize),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("flip budget {budget} violates 2d < d_min = {d_min}")]
    BudgetTooLarge { budget: usize, d_min: usize },
    #[error("balanced words collide: {0}")]
    Collision(String),
    #[error("no balancing subset exists (internal invariant broken)")]
    NoBalancingSubset,
    #[error("malformed balanced code: {0}")]
    MalformedBalancedCode(String),

    #[error("no candidate in the residue class")]
    NoCandidate,
    #[error("{0} distinct candidates in the residue class")]
    AmbiguousCandidates(usize),
    #[error("no codeword within radius {0}")]
    NoCodewordWithinRadius(usize),
    #[error("two codewords tie at punctured distance {0}")]
    AmbiguousNearest(usize),

    #[error("invalid channel config: {0}")]
    InvalidChannel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
