use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tropical_vertex::cli::{self, Command, Format, Job, Mode};

#[derive(Parser)]
#[command(name = "tvx", about = "Scattering diagrams, tropical counts and wall-crossing checks")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
    /// Truncation order.
    #[arg(long, global = true)]
    order: Option<u32>,
    #[arg(long, global = true, default_value_t = cli::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value = "ks")]
    mode: ModeArg,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: FormatArg,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Complete a diagram.
    Complete { input: PathBuf },
    /// Print the defect at every singular point.
    Check { input: PathBuf },
    /// Tropical counts for a tangency profile.
    Tropical { input: PathBuf },
    /// Relative invariants read off a completed diagram.
    Gw { input: PathBuf },
    /// Verify a wall-crossing identity.
    Wcf { input: PathBuf },
    /// Draw a diagram as SVG.
    Render { input: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ks,
    Perturb,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
    Svg,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (command, input) = match args.command {
        Cmd::Complete { input } => (Command::Complete, input),
        Cmd::Check { input } => (Command::Check, input),
        Cmd::Tropical { input } => (Command::Tropical, input),
        Cmd::Gw { input } => (Command::Gw, input),
        Cmd::Wcf { input } => (Command::Wcf, input),
        Cmd::Render { input } => (Command::Render, input),
    };
    let job = Job {
        command,
        input,
        order: args.order,
        seed: args.seed,
        mode: match args.mode {
            ModeArg::Ks => Mode::Ks,
            ModeArg::Perturb => Mode::Perturb,
        },
        format: match args.format {
            FormatArg::Text => Format::Text,
            FormatArg::Structured => Format::Structured,
            FormatArg::Svg => Format::Svg,
        },
    };
    let outcome = match cli::run(&job) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("tvx: {e}");
            return ExitCode::from(2);
        }
    };
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.output) {
                eprintln!("tvx: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{}", outcome.output),
    }
    ExitCode::from(outcome.exit_code())
}
