//! Experiment harness: JSON-configured Monte-Carlo sweeps over sparse random
//! tensors, written as deterministic CSV.

pub mod config;
pub mod error;
pub mod record;
pub mod run;
pub mod summary;

pub use config::{Command, ExperimentConfig, PRule};
pub use error::{HarnessError, Result};
pub use record::{mask_wall_ms, read_csv, to_csv_string, write_csv, ResultRecord, CSV_HEADER};
pub use run::run;
pub use summary::{summarize, summarize_records, Summary};
