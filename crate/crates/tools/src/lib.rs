//! JSON series format, the acceptance suite and the `jacobi` command line.

pub mod checks;
pub mod cli;
pub mod json;
