//! File formats: scenario documents, JSON-lines traces and sweep reports.

pub mod report;
pub mod scenario_file;
pub mod trace;

pub use report::{SweepRow, SweepTable};
pub use scenario_file::ScenarioFile;
pub use trace::{Trace, TraceError, TraceHeader, TraceTick, VerdictRecord};
