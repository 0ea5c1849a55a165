//! Exact Fontaine-Laffaille modules with symplectic and orthogonal pairings
//! over finite local coefficient rings.

pub mod cli;
pub mod error;
pub mod feasibility;
pub mod fl_module;
pub mod json;
pub mod lifting;
pub mod matrix;
pub mod pairing;
pub mod random;
pub mod simple;
pub mod tangent;
pub mod ring;

pub use error::{Error, Result};

/// Enumeration limit: `FLAB_SIZE_GUARD` from the environment if set and
/// parseable, otherwise `default`.
pub fn size_guard(default: u128) -> u128 {
    std::env::var("FLAB_SIZE_GUARD").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(default)
}
