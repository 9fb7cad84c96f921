//! Error type shared by all modules.

use std::fmt;

/// Errors reported by constructors and operators on invalid input.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Invalid grid parameters or a grid mismatch between operands.
    Grid(String),
    /// Invalid wave-packet specification.
    Packet(String),
    /// Invalid bigrid level (mesh ratio incompatible with the fine grid).
    Bigrid(String),
    /// Invalid measurement request (overlapping bands, empty field, bad exponents).
    Analysis(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Grid(msg) => write!(f, "grid: {msg}"),
            Error::Packet(msg) => write!(f, "packet: {msg}"),
            Error::Bigrid(msg) => write!(f, "bigrid: {msg}"),
            Error::Analysis(msg) => write!(f, "analysis: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
