use std::path::PathBuf;
use std::process::ExitCode;

use agapia::interp::{Config, DEFAULT_ROUND_CAP};
use agapia_cli::{cmd_htm_gen, cmd_run, cmd_typecheck, examples, read, CliError, Format, RunConfig};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "agapia", version, about = "Typecheck, run and generate Agapia programs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the program's interface type.
    Typecheck { file: PathBuf },
    /// Run the program and print its scenario.
    Run {
        file: PathBuf,
        /// North input, e.g. "6;nil;nil".
        #[arg(long)]
        north: Option<String>,
        /// West input; repeated values are concatenated.
        #[arg(long)]
        west: Vec<String>,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
        /// W-steps allowed per module invocation.
        #[arg(long, default_value_t = agapia::exec::DEFAULT_STEP_BUDGET)]
        step_budget: u64,
        /// Rounds allowed per loop.
        #[arg(long, default_value_t = DEFAULT_ROUND_CAP)]
        round_cap: u64,
    },
    /// Generate the program for an HTM tree file.
    HtmGen {
        tree: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Add the feedback layer.
        #[arg(long)]
        feedback: bool,
    },
    /// The shipped example corpus.
    Examples {
        #[arg(value_enum)]
        action: ExamplesAction,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExamplesAction {
    List,
    RunAll,
}

fn dispatch(cmd: Cmd) -> Result<String, CliError> {
    match cmd {
        Cmd::Typecheck { file } => cmd_typecheck(&file.display().to_string(), &read(&file)?),
        Cmd::Run {
            file,
            north,
            west,
            format,
            step_budget,
            round_cap,
        } => {
            let format = match format {
                FormatArg::Text => Format::Text,
                FormatArg::Structured => Format::Structured,
            };
            let cfg = RunConfig::from_literals(
                north.as_deref(),
                &west,
                format,
                Config {
                    step_budget,
                    round_cap,
                },
            )?;
            cmd_run(&file.display().to_string(), &read(&file)?, &cfg)
        }
        Cmd::HtmGen { tree, out, feedback } => cmd_htm_gen(&tree, &out, feedback),
        Cmd::Examples {
            action: ExamplesAction::List,
        } => Ok(examples::cmd_list()),
        Cmd::Examples {
            action: ExamplesAction::RunAll,
        } => match examples::cmd_run_all() {
            (report, true) => Ok(report),
            (report, false) => Err(CliError::Diagnostics(report.trim_end().to_string())),
        },
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().cmd) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
