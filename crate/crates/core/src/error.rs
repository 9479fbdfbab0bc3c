use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("unsupported rank {rank}: {reason}")]
    UnsupportedRank { rank: usize, reason: &'static str },

    #[error("weight {0} is not dominant")]
    NotDominant(String),

    #[error("non-regular element: Weyl denominator {0:e} below tolerance")]
    NonRegular(f64),

    #[error("odd-power residual {0:e} exceeds tolerance; polynomial is not even")]
    OddResidual(f64),

    #[error("parabolic element encountered (trace {0}); group is not cocompact")]
    Parabolic(String),

    #[error("elliptic element {0} has no finite order within the search bound")]
    InfiniteOrder(String),

    #[error("enumeration exceeded the element cap of {0}")]
    Explosion(usize),

    #[error("undetermined v(gamma) for class {word}: index lower bound {lower_bound}")]
    UndeterminedV { word: String, lower_bound: u64 },

    #[error("spectrum contains {0} ambiguity-flagged classes (pass --allow-ambiguous to use them)")]
    Ambiguous(usize),

    #[error("points {0} and {1} have equal squares")]
    RepeatedSquares(usize, usize),

    #[error("ill-conditioned least-squares fit (condition number {0:e})")]
    IllConditioned(f64),

    #[error("division guard: {0}")]
    ZeroDivisor(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors raised by numerical guards rather than by bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonRegular(_)
                | Error::OddResidual(_)
                | Error::Parabolic(_)
                | Error::InfiniteOrder(_)
                | Error::Explosion(_)
                | Error::UndeterminedV { .. }
                | Error::IllConditioned(_)
                | Error::ZeroDivisor(_)
        )
    }
}
