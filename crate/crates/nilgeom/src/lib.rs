//! Files, JSON reports, the command line and the reproduction checklist for
//! [`nilgeom_core`].

pub mod cli;
pub mod io;
pub mod json;
pub mod repro;
pub mod report;
pub mod runner;

pub use nilgeom_core as core;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] nilgeom_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Input(String),
}

impl Error {
    /// Malformed input is a usage error; anything the engine rejects is a
    /// verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(nilgeom_core::Error::Parse { .. })
            | Error::Core(nilgeom_core::Error::NotLieAlgebra { .. })
            | Error::Core(nilgeom_core::Error::Dimension { .. })
            | Error::Core(nilgeom_core::Error::DimensionRange(_))
            | Error::Io(_)
            | Error::Json(_)
            | Error::Input(_) => 2,
            Error::Core(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
