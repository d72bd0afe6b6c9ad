use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nikishin_cli::{aggregate, run_scenario, Command, RunOptions};

#[derive(Parser)]
#[command(name = "nikishin", version, about = "Hermite-Padé approximants of perturbed Nikishin systems")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Type II approximants along the index sequence: convergence, orthogonality,
    /// remainder, zero localization, Phi sign changes.
    Type2Run(RunArgs),
    /// Multipoint type I forms: ratio asymptotics, coefficient zeros, integral form.
    Type1Run(RunArgs),
    /// Seeded sampling of sign changes of random linear forms.
    AtCheck(RunArgs),
    /// Inverse-measure series and Carleman indicator of every generator.
    Identities(RunArgs),
    /// Recompute and aggregate verdicts from earlier output directories.
    Report {
        dirs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (JSON).
    scenario: PathBuf,
    /// Working precision in bits.
    #[arg(long)]
    precision: Option<u32>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for the multi-index fan-out.
    #[arg(long)]
    jobs: Option<usize>,
    /// Only run these checks (comma separated).
    #[arg(long, value_delimiter = ',')]
    check: Vec<String>,
}

fn run(cmd: Command, args: RunArgs) -> u8 {
    let opts = RunOptions {
        precision: args.precision,
        out: args.out,
        seed: args.seed,
        jobs: args.jobs,
        check: args.check,
    };
    match run_scenario(cmd, &args.scenario, &opts) {
        Ok(outcome) => {
            print!("{}", outcome.summary);
            println!("results in {}", outcome.out_dir.display());
            outcome.exit_code() as u8
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code() as u8
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Cmd::Type2Run(a) => run(Command::Type2Run, a),
        Cmd::Type1Run(a) => run(Command::Type1Run, a),
        Cmd::AtCheck(a) => run(Command::AtCheck, a),
        Cmd::Identities(a) => run(Command::Identities, a),
        Cmd::Report { dirs, out } => match aggregate(&dirs, out.as_deref()) {
            Ok((text, ok)) => {
                print!("{text}");
                u8::from(!ok)
            }
            Err(e) => {
                eprintln!("error: {e}");
                e.exit_code() as u8
            }
        },
    };
    ExitCode::from(code)
}
