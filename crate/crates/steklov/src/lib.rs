//! File formats, reports and the command-line driver around `steklov-core`.

pub mod corpus;
pub mod error;
pub mod report;
pub mod spec;
pub mod svg;
pub mod verify;

pub use error::HarnessError;
pub use report::VerificationReport;
pub use spec::SpecFile;
pub use verify::{verify, VerifyOptions};
