//! Golden and property suites, built-in models and report emission.

mod builtins;
mod report;
mod suites;

pub use builtins::{builtin, builtin_cases, Origin, SuiteCase, Target};
pub use report::{CaseReport, Measurement, Report, Timing};
pub use suites::{
    run_suite, SuiteConfig, SuiteName, AND_SAMPLES, PERSPECTIVE_CHANGES, REDUCTION_SAMPLES,
};
