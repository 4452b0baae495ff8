use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("row {row} of the transition matrix sums to {sum}, expected 1")]
    RowNotStochastic { row: usize, sum: f64 },

    #[error("transition entry ({row}, {col}) = {value} is not strictly inside (0, 1)")]
    EntryOutOfRange { row: usize, col: usize, value: f64 },

    #[error("noise parameter epsilon_{symbol} = {value} is not strictly inside (0, 1)")]
    NoiseOutOfRange { symbol: usize, value: f64 },

    #[error("symbol {symbol} is outside the alphabet 0..{q}")]
    SymbolOutOfRange { symbol: usize, q: usize },

    #[error("{routine} did not converge after {iterations} iterations")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
    },

    #[error("least-squares system is rank deficient (column {column})")]
    RankDeficient { column: usize },

    #[error("estimated contraction rate {gamma} is not below 1")]
    GammaNotContractive { gamma: f64 },

    #[error("enumerating {q}^{n} words exceeds the block enumeration cap")]
    BlockTooLarge { q: usize, n: usize },
}

impl Error {
    /// True for errors caused by the input instance rather than by a
    /// numerical routine.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::ShapeMismatch(_)
                | Error::RowNotStochastic { .. }
                | Error::EntryOutOfRange { .. }
                | Error::NoiseOutOfRange { .. }
                | Error::SymbolOutOfRange { .. }
                | Error::BlockTooLarge { .. }
        )
    }
}
