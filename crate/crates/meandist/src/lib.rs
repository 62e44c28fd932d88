//! Parallel execution, file formats and the `meandist` command line on top
//! of [`meandist_core`].
//!
//! * [`exec::RayonExecutor`] runs estimator streams on a thread pool with
//!   results identical to the sequential executor.
//! * [`spec`] reads and writes body and profile JSON.
//! * [`suites`] holds the verification suites and the body corpus.
//! * [`cli`] is the command-line front end.

pub mod cli;
pub mod error;
pub mod exec;
pub mod report;
pub mod spec;
pub mod suites;

pub use error::CliError;
pub use exec::RayonExecutor;
pub use spec::{parse_body_spec, serialize_body, BodySpec, ProfileSpec};
