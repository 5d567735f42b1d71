//! Batch front end for the modular square-root laboratory: configuration,
//! sweep execution, deterministic CSV/JSONL output, and the verification
//! suite. The `sqrtlab` binary is a thin shell over this library.

pub mod config;
pub mod error;
pub mod rows;
pub mod runner;
pub mod verify;
