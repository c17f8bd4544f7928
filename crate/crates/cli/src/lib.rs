//! Input parsing, single runs and the benchmark harness behind the `sdepth`
//! binary.

pub mod bench;
pub mod error;
pub mod io;
pub mod run;

pub use bench::{bench, BenchCell, BenchSpec, BenchTable, CellStatus};
pub use error::{CliError, CliResult};
pub use io::{parse_dataset, read_dataset, write_dataset};
pub use run::{run, Method, MuSpec, OutputFormat, RunConfig, RunOutput, SigmaSpec};
