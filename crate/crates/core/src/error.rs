use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Operands live in different carriers (kind or dimension).
    GroupMismatch,
    /// Checked integer arithmetic overflowed.
    Overflow,
    EmptyVector,
    InvalidCone(String),
    NotHermitian { residual: f64 },
    InvalidTolerance(f64),
    InvalidUnit,
    /// The value is not between 0 and the unit.
    OutOfInterval,
    /// A partial operation (`⊕` or `⊖`) is not defined for the operands.
    Undefined,
    UnsupportedCarrier(&'static str),
    NotLattice,
    NotMV,
    /// A pair of subsets was expected to be nested.
    NotComparable,
    SizeExceeded { what: &'static str, limit: usize, actual: usize },
    DuplicateGroundElement { first: usize, second: usize },
    TableSize { expected: usize, actual: usize },
    UnverifiedWitness,
    NotMorphism,
    InvalidSection(String),
    NotCommuting { first: usize, second: usize, residual: f64 },
    NotProjection { index: usize, residual: f64 },
    UnknownOutcome(usize),
    Precondition(&'static str),
    BudgetExhausted { nodes: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::GroupMismatch => write!(f, "operands belong to different groups"),
            Error::Overflow => write!(f, "integer overflow"),
            Error::EmptyVector => write!(f, "integer vectors need at least one entry"),
            Error::InvalidCone(msg) => write!(f, "invalid cone: {msg}"),
            Error::NotHermitian { residual } => {
                write!(f, "matrix is not Hermitian (max |H - H*| = {residual:e})")
            }
            Error::InvalidTolerance(t) => write!(f, "invalid tolerance {t}"),
            Error::InvalidUnit => write!(f, "unit must be positive and nonzero"),
            Error::OutOfInterval => write!(f, "value is not in [0, u]"),
            Error::Undefined => write!(f, "partial operation undefined for these operands"),
            Error::UnsupportedCarrier(what) => write!(f, "unsupported carrier: {what}"),
            Error::NotLattice => write!(f, "no unique bound exists (not a lattice)"),
            Error::NotMV => write!(f, "algebra is not an MV-effect algebra"),
            Error::NotComparable => write!(f, "subsets are not nested"),
            Error::SizeExceeded { what, limit, actual } => {
                write!(f, "{what} exceeds cap: {actual} > {limit}")
            }
            Error::DuplicateGroundElement { first, second } => {
                write!(f, "ground set elements {first} and {second} coincide")
            }
            Error::TableSize { expected, actual } => {
                write!(f, "table has {actual} entries, expected {expected}")
            }
            Error::UnverifiedWitness => write!(f, "β is not a verified witness mapping"),
            Error::NotMorphism => write!(f, "mapping is not an effect algebra morphism"),
            Error::InvalidSection(msg) => write!(f, "invalid section: {msg}"),
            Error::NotCommuting { first, second, residual } => write!(
                f,
                "elements {first} and {second} do not commute (max |xy - yx| = {residual:e})"
            ),
            Error::NotProjection { index, residual } => write!(
                f,
                "element {index} is not a projection (max |x^2 - x| = {residual:e})"
            ),
            Error::UnknownOutcome(i) => write!(f, "unknown outcome {i}"),
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::BudgetExhausted { nodes } => {
                write!(f, "search budget exhausted after {nodes} nodes")
            }
        }
    }
}

impl core::error::Error for Error {}
