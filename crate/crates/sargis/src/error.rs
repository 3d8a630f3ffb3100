use thiserror::Error;

/// Crate-wide error type.
#[derive(Error, Debug)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("DEM parse error at line {line}: {msg}")]
    DemParse { line: usize, msg: String },

    #[error("footprint error: {0}")]
    Footprint(String),

    #[error("scene placement failed: could not fit {placed} of {requested} buildings after {retries} retries; enlarge the extent or reduce n_buildings")]
    Placement {
        placed: usize,
        requested: usize,
        retries: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("degenerate hull: {0}")]
    DegenerateHull(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite value in {what}")]
    NonFinite { what: String },

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("id mismatch: {0}")]
    IdMismatch(String),

    #[error("split produced an empty {split} set; try a different train fraction")]
    EmptySplit { split: String },

    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
