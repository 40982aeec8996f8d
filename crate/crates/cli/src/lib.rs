//! Shared pieces of the `cubforge` binary.

pub mod report;
