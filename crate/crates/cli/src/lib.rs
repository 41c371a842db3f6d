//! Runner, configuration, artifact, and validation layers behind the
//! `hopfwind` binary, exposed as a library so integration tests can drive
//! full-size runs in-process.

pub mod config;
pub mod error;
pub mod output;
pub mod runner;
pub mod validate;
