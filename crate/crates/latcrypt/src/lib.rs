//! Std companion to `latcrypt-core`: key and frame file formats, the AWGN
//! channel simulator with VNR sweeps, and report formatting for the
//! `latcrypt` command line.

pub mod channel;
pub mod framefile;
pub mod keyfile;
pub mod report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] latcrypt_core::Error),
    #[error("malformed key file, line {line}: {reason}")]
    KeyFormat { line: usize, reason: String },
    #[error("malformed frame file: {0}")]
    FrameFormat(String),
    #[error("invalid sweep: {0}")]
    Sweep(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
