//! Experiment driver: configuration, scenarios, tau sweeps, CSV output and
//! checkpoints.

pub mod checkpoint;
pub mod config;
pub mod csv;
pub mod oracle;
pub mod scenario;
pub mod sweep;

pub use checkpoint::{decode_checkpoint, encode_checkpoint, read_checkpoint, write_checkpoint, Checkpoint};
pub use config::Config;
pub use csv::{emit_csv, parse_csv, render_csv, CsvTable};
pub use scenario::{build_initial_state, Scenario};
pub use sweep::{run_relaxing, run_sweep, run_sweep_with, run_unreferenced, SweepResult, TauRun};
