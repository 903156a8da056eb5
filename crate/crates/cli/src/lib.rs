//! Configuration, verification suites and report documents behind the
//! `wronskian` binary.

pub mod commands;
pub mod config;
pub mod suite;
