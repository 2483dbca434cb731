//! End-to-end simulation: configuration, the per-frame transceiver, sweep
//! control and result files.

pub mod config;
pub mod exec;
pub mod pipeline;
pub mod report;
pub mod sweep;

pub use report::{
    write_genie_csv, write_sweep_csv, CSV_SCHEMA_VERSION, GENIE_COLUMNS, SWEEP_COLUMNS,
};

pub use config::{CodeSource, OuterCodeConfig, OuterRebuild, StopRule, System, SystemConfig};
pub use exec::Execution;
pub use pipeline::{BaselineTrace, BetaSource, FrameOutcome, FrameTrace, Transmission};
pub use sweep::{
    wilson_interval, GapRow, GenieComparison, SweepKind, SweepPoint, SweepResult, Tally, Z_95,
};
