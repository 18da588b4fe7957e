//! Shared test support: seeded random-instance generators and independent
//! oracle implementations for cross-checking the main library.

pub mod gen;
pub mod oracle;

pub use gen::*;
pub use oracle::*;
