//! Command-line entry point.
//!
//! Exit status: 0 when every non-vacuous check passed, 1 when some check
//! failed, 2 on errors (bad arguments, unreadable or malformed files,
//! invalid scenario data).

use std::path::PathBuf;

use anyhow::bail;
use clap::{Parser, Subcommand};

use cb_lab::report::{to_json, to_text};
use cb_lab::tasks::{
    builtin_workload, execute, file_workload, parse_field, parse_range, BuiltinArgs, RunOptions,
};

#[derive(Parser)]
#[command(
    name = "cb-lab",
    about = "Exact Cayley-Bacharach checks on built-in and file-defined scenarios",
    after_help = "Examples:\n  \
        cb-lab builtin twisted-cubic --d 5 --roots 1,2,3 --check all\n  \
        cb-lab builtin line-grid --d1 2 --d2 3 --check tv --a 0..2\n  \
        cb-lab run scenario.json --report json"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Which checks to run: all, cb, tv, det or koszul.
    #[arg(long, global = true, default_value = "all")]
    check: String,

    /// Inclusive twist range for Tan-Viehweg sweeps, e.g. 0..2.
    #[arg(long, global = true)]
    a: Option<String>,

    /// Inclusive Koszul twist window, e.g. 6..9.
    #[arg(long, global = true)]
    twist_window: Option<String>,

    /// Base field: Q or Fp:<prime>.  Defaults to Q; for files, to the
    /// field named in the file.
    #[arg(long, global = true)]
    field: Option<String>,

    /// Seed for the built-in constructors.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output format: text or json.
    #[arg(long, global = true, default_value = "text")]
    report: String,

    /// Record wall-clock time in the report.  Off by default so that equal
    /// inputs produce byte-identical output.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named built-in scenario: line-grid, twisted-cubic or det-eleven.
    Builtin {
        name: String,

        /// Number of lines in the first pencil (line-grid).
        #[arg(long)]
        d1: Option<usize>,

        /// Number of lines in the second pencil (line-grid).
        #[arg(long)]
        d2: Option<usize>,

        /// Degree of the plane curve section (twisted-cubic).
        #[arg(long)]
        d: Option<usize>,

        /// Comma-separated residual roots on the marked line (twisted-cubic).
        #[arg(long)]
        roots: Option<String>,

        /// Designate the collinear pair (true) or a generic one (false)
        /// (det-eleven).
        #[arg(long)]
        collinear: Option<bool>,
    },
    /// Run the tasks declared in a scenario file.
    Run { file: PathBuf },
}

enum ReportFmt {
    Text,
    Json,
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let fmt = match cli.report.as_str() {
        "text" => ReportFmt::Text,
        "json" => ReportFmt::Json,
        other => bail!("unknown report format {other:?}, expected text or json"),
    };
    let opts = RunOptions {
        check: cli.check.parse()?,
        a_range: cli.a.as_deref().map(parse_range).transpose()?,
        twist_window: cli.twist_window.as_deref().map(parse_range).transpose()?,
        field: cli.field.as_deref().map(parse_field).transpose()?,
        seed: cli.seed,
        timing: cli.timing,
    };
    let workload = match &cli.command {
        Command::Builtin { name, d1, d2, d, roots, collinear } => {
            let roots = roots.as_deref().map(parse_roots).transpose()?;
            let args =
                BuiltinArgs { d1: *d1, d2: *d2, d: *d, roots, collinear: *collinear };
            builtin_workload(name, &args, &opts)?
        }
        Command::Run { file } => file_workload(file, &opts)?,
    };
    let report = execute(&workload)?;
    match fmt {
        ReportFmt::Json => emit(&format!("{}\n", to_json(&report)))?,
        ReportFmt::Text => emit(&to_text(&report))?,
    }
    Ok(report.pass)
}

/// Write to stdout, treating a closed pipe as a normal end of output.
fn emit(text: &str) -> anyhow::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Ok(()) => Ok(()),
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(e.into()),
    }
}

fn parse_roots(s: &str) -> anyhow::Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| anyhow::anyhow!("cannot parse root {t:?} in --roots"))
        })
        .collect()
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => {}
        Ok(false) => std::process::exit(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
