//! File formats, presets, reports and the subcommands behind the `regnet`
//! binary.

pub mod netfile;
pub mod output;
pub mod random;
pub mod registry;
pub mod report;
pub mod run;

pub use netfile::NetworkFile;
pub use random::{random_spec, RandomParams};
pub use registry::{build_preset, PresetArgs, PRESETS};
pub use run::{run, Command, Numeric, Outcome, RunConfig, RunError, Source, Status};
