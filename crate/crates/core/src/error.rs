use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid design: {0}")]
    Validation(String),

    #[error("unknown core {0}")]
    UnknownCore(u32),

    #[error("duplicate power entry for core {0}")]
    DuplicatePower(u32),

    #[error("TAM width must be at least 1")]
    ZeroWidth,

    #[error("design has no cores")]
    EmptyDesign,

    #[error("T_min must be at least 1 cycle")]
    ZeroTmin,

    #[error("core {core} draws {power_mw} mW but the power cap is {p_max} mW")]
    Unschedulable {
        core: u32,
        power_mw: u64,
        p_max: u64,
    },

    #[error("no future finish event after cycle {0}")]
    NoFutureEvent(u64),

    #[error("instance too large for oracle: {0}")]
    OracleTooLarge(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
