use thiserror::Error;

/// Errors raised anywhere in the workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("{p}^{n} does not fit below 2^63")]
    PrecisionOverflow { p: u64, n: u32 },
    #[error("gamma table for {p}^{n} needs {entries} entries, budget is {budget}")]
    TableBudgetExceeded { p: u64, n: u32, entries: u64, budget: u64 },
    #[error("context for p={0} was built without a gamma table")]
    GammaTableMissing(u64),
    #[error("argument must be nonzero in F_p")]
    ZeroArgument,
    #[error("{0} is not invertible modulo p^N")]
    NotInvertible(u64),
    #[error("no guaranteed p-adic digits left; raise the precision")]
    PrecisionExhausted,
    #[error("result carries {available} digits, {required} required")]
    InsufficientPrecision { available: i64, required: i64 },
    #[error("denominator of {num}/{den} is divisible by p")]
    BadDenominator { num: i64, den: i64 },
    #[error("Gauss product is not balanced: pi-exponent {0} is not a multiple of p-1")]
    NotBalanced(i64),
    #[error("no rewrite applies but {0} Gauss sums remain")]
    ReductionStuck(usize),
    #[error("character {0} requires (p-1) divisible by {1}")]
    CharacterUnavailable(&'static str, u64),
    #[error("bad argument: {0}")]
    BadArgument(String),
    #[error("order {0} is not supported")]
    Unsupported(u32),
    #[error("float evaluation residual {0} exceeds tolerance")]
    AccuracyBudget(String),
    #[error("series of order {have} cannot supply coefficient {need}")]
    OrderTooSmall { have: usize, need: usize },
    #[error("{0} is not a sum of two squares")]
    NoRepresentation(u64),
    #[error("p={p} (class {class} mod 12) is outside the residue classes of {check}")]
    WrongResidueClass { p: u64, class: u64, check: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
