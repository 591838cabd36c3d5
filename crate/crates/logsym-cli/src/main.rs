//! `logsym` — cohomology of partitionable log symplectic torus models.
//!
//! Exit codes: 0 success, 1 input error (bad file, bad expression, bad
//! flags), 2 mathematical check failure (not closed, not partitionable,
//! degenerate, …) with the structured report still printed on stdout.

mod commands;
mod expr;
mod model;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Parser)]
#[command(
    name = "logsym",
    version,
    about = "Poisson cohomology of partitionable log symplectic torus models"
)]
struct Cli {
    /// What to compute
    #[arg(value_enum)]
    command: commands::Command,

    /// Model description (JSON; see docs/schema.json)
    model: PathBuf,

    /// Output format: TSV table or JSON report
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Replace the oracle cutoff list with a single truncation level
    #[arg(long, value_name = "N")]
    cutoff: Option<i64>,

    /// Exclude index collections that reuse a pair in both J and K
    #[arg(long)]
    strict_jk: bool,

    /// Require pairing scalars to be nonzero on every intersection component
    #[arg(long)]
    strict_components: bool,

    /// Column cap for oracle matrices
    #[arg(long, value_name = "M")]
    max_matrix: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 2 on usage errors by default; keep 2 reserved for
            // mathematical failures and report usage problems as input errors
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let model = match model::load(&cli.model) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let flags = commands::Flags {
        cutoff: cli.cutoff,
        strict_jk: cli.strict_jk,
        strict_components: cli.strict_components,
        max_matrix: cli.max_matrix,
    };
    match commands::run(cli.command, &model, &flags) {
        Ok(out) => {
            match cli.format {
                Format::Table => print!("{}", out.table),
                Format::Json => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&out.json).expect("report serializes")
                    );
                }
            }
            ExitCode::from(if out.check_failed { 2 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
