//! Positive Dehn twist factorizations for rational blowdown families.

pub mod families;
pub mod fatgroup;
pub mod fourman;
pub mod mcgword;
pub mod surfaces;

/// Crate version, recorded in certificates.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
