use core::fmt;

use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by series arithmetic and form construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Binary operation on series whose metadata disagree.
    MetadataMismatch { field: &'static str },
    /// An operation needed a series of a particular rank.
    RankMismatch { expected: u8, found: u8 },
    /// Lowest q-slice is not a single monomial.
    NotUnitLed,
    /// Exact division left a remainder at this q-exponent (times 24).
    NotDivisible { n24: i64 },
    /// Division by the zero series.
    DivisionByZero,
    /// The index matrix is not positive-definite.
    DegenerateIndex,
    /// Substitution matrix with determinant other than +1 or -1.
    NotUnimodular,
    /// Gram matrix has no `(a, b, c)` representation with nonnegative entries.
    NotIndexMatrix { xx: i64, xy: i64, yy: i64 },
    /// Eisenstein series of an unsupported weight.
    UnsupportedWeight(i64),
    /// Theta-block derivative form requested with `abc = 0`.
    VanishingThetaBlock,
    /// A span of generator monomials came out larger than the dimension
    /// formula allows, which means an expansion is wrong.
    RankExceedsDimension { rank: usize, dim: u64 },
    /// Text that could not be parsed.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MetadataMismatch { field } => write!(f, "series metadata differ in {field}"),
            Error::RankMismatch { expected, found } => {
                write!(f, "expected a rank-{expected} series, found rank {found}")
            }
            Error::NotUnitLed => f.write_str("not unit-led: lowest q-slice is not a monomial"),
            Error::NotDivisible { n24 } => {
                write!(f, "not divisible: remainder at q^({n24}/24)")
            }
            Error::DivisionByZero => f.write_str("division by the zero series"),
            Error::DegenerateIndex => f.write_str("index matrix is not positive-definite"),
            Error::NotUnimodular => f.write_str("substitution matrix is not unimodular"),
            Error::NotIndexMatrix { xx, xy, yy } => write!(
                f,
                "Gram matrix [[{xx}, {xy}], [{xy}, {yy}]] is not of the form [[a+b, b], [b, c+b]] \
                 with a, b, c >= 0; reduce it with the anharmonic action first"
            ),
            Error::UnsupportedWeight(k) => write!(f, "no Eisenstein series of weight {k}"),
            Error::VanishingThetaBlock => {
                f.write_str("theta block derivative form vanishes unless a, b, c are all nonzero")
            }
            Error::RankExceedsDimension { rank, dim } => {
                write!(f, "span rank {rank} exceeds the dimension {dim}")
            }
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
