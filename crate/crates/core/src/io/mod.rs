//! Run configuration, output formats and the command-line subcommands.

pub mod commands;
pub mod config;
pub mod output;

pub use commands::{
    cmd_boundary_drift, cmd_classify, cmd_ctable, cmd_replicator, cmd_simulate, cmd_sweep,
    CommandError,
};
pub use config::{parse_config, serialize_config, ConfigError, GridAxis, RunConfig, SampleSpec, SweepOptions};
pub use output::{spacetime_pgm, trajectory_csv, write_spacetime_pgm, OutputError, MAX_PGM_SIDE};
