use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty sequence")]
    EmptySequence,

    #[error("sequence contains values that cannot be ordered")]
    Unordered,

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("order {0} is outside the supported range 2..=256")]
    InvalidOrder(usize),

    #[error("cipher blocks must have order 256, got {0}")]
    BlockOrder(usize),

    #[error("order mismatch: square has order {square}, block has order {block}")]
    OrderMismatch { square: usize, block: usize },

    #[error("order {0} is not a power of two")]
    NonPowerOfTwoOrder(usize),

    #[error("index {index} out of range for order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("symbol {symbol} out of range for order {order}")]
    SymbolOutOfRange { symbol: u8, order: usize },

    #[error("cells do not form a Latin square")]
    NotLatin,

    #[error("spatial rotation direction {0} is not one of 0, 1, 2")]
    InvalidDirection(u8),

    #[error("invalid key: {0}")]
    InvalidKey(String),

    #[error("key bit {0} out of range 0..256")]
    KeyBitOutOfRange(usize),

    #[error("empty plane")]
    EmptyPlane,

    #[error("zero variance")]
    ZeroVariance,

    #[error("not enough pixel pairs: {0}")]
    TooFewPairs(usize),

    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unsupported depth: maxval {0}")]
    UnsupportedDepth(u32),

    #[error("container: {0}")]
    Container(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
