//! Table ingestion and validation behind the `dirac` command-line tool.

pub mod tables;
pub mod validate;
