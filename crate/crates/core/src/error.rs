use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("database must hold at least 2 items, got {0}")]
    TooSmall(u64),
    #[error("{n_blocks} blocks do not divide {n_items} items evenly")]
    NonDivisible { n_items: u64, n_blocks: u64 },
    #[error("invalid block count {0}: need at least {1}")]
    BadK(u64, u64),
    #[error("{n_items} items exceed the exact-integer range ({limit}) of the scalar type")]
    Precision { n_items: u64, limit: u64 },
    #[error("local iteration has no non-target subspace when blocks hold a single item")]
    Degenerate,
    #[error("state vector of {n_items} amplitudes exceeds the cap of {cap}")]
    CapExceeded { n_items: u64, cap: u64 },
    #[error("target index {index} out of range for {n_items} items")]
    BadIndex { index: u64, n_items: u64 },
    #[error("no schedule in the search range reaches success probability {threshold}")]
    Infeasible { threshold: f64 },
    #[error("probability {0} outside the open interval (0, 1)")]
    BadProbability(f64),
    #[error("unknown lower-bound variant `{0}`")]
    BadVariant(String),
    #[error("malformed state dump: {0}")]
    Format(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
