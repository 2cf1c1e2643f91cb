use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet mismatch")]
    AlphabetMismatch,
    #[error("letter {0} is not in the alphabet")]
    UnknownLetter(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("operation requires a deterministic automaton")]
    NotDeterministic,
    #[error("language is not finite")]
    InfiniteLanguage,
    #[error("language is not upward closed; witness {0:?}")]
    NotUpwardClosed(String),
    #[error("operation requires the two-letter signed alphabet")]
    RequiresSignedAlphabet,
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("not a poset: {0}")]
    NotAPoset(String),
    #[error("distance axiom ({axiom}) violated at {witness}")]
    AxiomViolation {
        axiom: &'static str,
        witness: String,
    },
    #[error("invalid monoid table: {0}")]
    InvalidMonoid(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("no join exists for {0}")]
    MissingJoin(String),
    #[error("no meet exists for {0}")]
    MissingMeet(String),
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("carrier mismatch: {0} vs {1}")]
    CarrierMismatch(usize, usize),
    #[error("set of partitions is not a sublattice: {0}")]
    NotSublattice(String),
    #[error("partial map does not preserve the relations: {0}")]
    PreservationViolated(String),
    #[error("lattice is not residuated: no residual for ({0}, {1})")]
    NotResiduated(String, String),
    #[error("not a finite lattice: {0}")]
    NotALattice(String),
    #[error("not an abelian group: {0}")]
    NotAGroup(String),
    #[error("polynomial is not integer valued: {0}")]
    NotIntegerValued(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("no Zadori system on {0} points")]
    NoZadoriSystem(usize),
    #[error("final segment is empty")]
    EmptySegment,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
