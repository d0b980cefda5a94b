use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::dynamics::Failure;

/// Errors produced by the model crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("missing key: {0}")]
    MissingKey(String),
    #[error("unknown key: {0}")]
    UnknownKey(String),
    #[error("duplicate key: {0}")]
    DuplicateKey(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{key}: {msg}")]
    BadValue { key: String, msg: String },
    /// One or more invariant violations, each message naming the key.
    #[error("{}", Joined(.0))]
    Invalid(Vec<String>),
    #[error("surface: {0}")]
    Surface(String),
    #[error("degenerate inflow: blade-relative wind speed is zero")]
    DegenerateInflow,
    #[error("{0}")]
    Spec(String),
    #[error("no instability found for gain multipliers up to {upper}")]
    NoInstability { upper: f64 },
    #[error("search did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("could not bracket the target within the search range")]
    NoBracket,
    #[error("simulation failure: {0}")]
    Simulation(Failure),
}

struct Joined<'a>(&'a [String]);

impl fmt::Display for Joined<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            f.write_str(m)?;
        }
        Ok(())
    }
}
