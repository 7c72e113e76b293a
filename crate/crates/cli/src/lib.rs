//! Command-line front end for `relpose`: estimation on correspondence files,
//! synthetic sweeps, and the tie-break demonstration.

pub mod args;
pub mod commands;
pub mod error;
pub mod formats;

use std::io::Write;

pub use args::Cli;
pub use error::{CliError, CliResult};

pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    let go = |out: &mut dyn Write| match &cli.command {
        args::Command::Estimate(a) => commands::estimate(a, out),
        args::Command::Bench(a) => commands::bench(a, out),
        args::Command::DemoTiebreak(a) => commands::demo_tiebreak(a, out),
    };
    match cli.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Input(format!("--threads: {e}")))?;
            let mut buf = Vec::new();
            pool.install(|| go(&mut buf))?;
            out.write_all(&buf)?;
            Ok(())
        }
        None => go(out),
    }
}
