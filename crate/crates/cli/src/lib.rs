//! Problem-file parsing, command dispatch and report rendering for `nca`.

pub mod commands;
pub mod json;
pub mod report;
pub mod spec;

pub use commands::{parse_pairs, parse_times, run_command, Command, Flags};
pub use report::{emit_report, Format, Report};
pub use spec::{Diagnostic, ProblemSpec, SpecError};

/// Process exit codes.
pub mod exit {
    pub const PASS: u8 = 0;
    pub const VIOLATED: u8 = 1;
    pub const INPUT_ERROR: u8 = 2;
}
