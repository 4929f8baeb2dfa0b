use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("gcd({0}, {1}) is undefined")]
    GcdOfZeros(i64, i64),

    #[error("{name} = {value} is not coprime to {modulus}")]
    NotCoprime {
        name: &'static str,
        value: i64,
        modulus: i64,
    },

    #[error("{0} must be nonzero")]
    ZeroArgument(&'static str),

    #[error("{name} = {value} is out of range: {expected}")]
    OutOfRange {
        name: &'static str,
        value: i64,
        expected: &'static str,
    },

    #[error("characters belong to different moduli ({0} and {1})")]
    ModulusMismatch(u64, u64),

    #[error("L(1, chi) diverges for the principal character")]
    PrincipalAtOne,

    #[error("{0} is not a positive rational in the supported domain")]
    Domain(String),
}

impl Error {
    pub(crate) fn range(
        name: &'static str,
        value: impl TryInto<i64>,
        expected: &'static str,
    ) -> Self {
        Error::OutOfRange {
            name,
            value: value.try_into().unwrap_or(i64::MAX),
            expected,
        }
    }
}
