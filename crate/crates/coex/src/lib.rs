//! File formats and command implementations for the `coex` tool.
//!
//! Documents are JSON. Every report is emitted with sorted keys, so equal
//! inputs give byte-identical outputs.

pub mod commands;
pub mod json;

pub use commands::{Exit, Outcome};

/// Environment variable overriding the default ground-set cap.
pub const MAX_GROUND_ENV: &str = "COEX_MAX_GROUND";

/// `--max-ground` if given, else `COEX_MAX_GROUND`, else `default`.
pub fn max_ground(flag: Option<usize>, env: Option<&str>, default: usize) -> Result<usize, json::InputError> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match env {
        Some(s) => s
            .trim()
            .parse()
            .map_err(|_| json::InputError(format!("{MAX_GROUND_ENV} must be a non-negative integer, got \"{s}\""))),
        None => Ok(default),
    }
}
