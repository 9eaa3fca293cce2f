//! CSV ingestion, run orchestration and output files for `shapereg-core`.
//!
//! The `shapereg` binary wraps [`run::fit`]; everything it does is also
//! reachable from here.

pub mod cli;
pub mod clock;
pub mod data;
pub mod output;
pub mod run;

pub use clock::StdClock;
pub use data::{load_csv, DataError, Dataset};
pub use run::{fit, RunError, RunOutcome};
