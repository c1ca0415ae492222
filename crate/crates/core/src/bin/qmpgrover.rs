use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qmpgrover::experiment::{
    cmd_layout, cmd_report, cmd_simulate, cmd_sweep, DepthSource, ExperimentConfig, ExperimentError, Overrides,
    SuccessSource,
};

#[derive(Parser)]
#[command(name = "qmpgrover", version, about = "Grover and multi-programmed partial Grover search experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and simulate a circuit; write distribution, counts and summary.
    Simulate(Flags),
    /// Closed-form success curves over j for each b.
    Sweep(Flags),
    /// Place one block per guess on a coupling map.
    Layout(Flags),
    /// Volume and success table for the search variants.
    Report(Flags),
}

#[derive(Clone, Copy, ValueEnum)]
enum Success {
    Theory,
    Simulated,
    Quoted,
}

#[derive(Clone, Copy, ValueEnum)]
enum Depth {
    Logical,
    Quoted,
}

#[derive(Args)]
struct Flags {
    /// JSON or TOML manifest; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated MSB-left bitstrings.
    #[arg(long, value_delimiter = ',')]
    targets: Option<Vec<String>>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    j_max: Option<u64>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    map: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    success: Option<Success>,
    #[arg(long, value_enum)]
    depth: Option<Depth>,
    /// Also write sweep.svg.
    #[arg(long)]
    svg: bool,
}

impl Flags {
    fn resolve(self) -> Result<ExperimentConfig, ExperimentError> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        config.apply(Overrides {
            n: self.n,
            targets: self.targets,
            b: self.b,
            j: self.j,
            j_max: self.j_max,
            shots: self.shots,
            seed: self.seed,
            map: self.map,
            out: self.out,
            success: self.success.map(|s| match s {
                Success::Theory => SuccessSource::Theory,
                Success::Simulated => SuccessSource::Simulated,
                Success::Quoted => SuccessSource::Quoted,
            }),
            depth: self.depth.map(|d| match d {
                Depth::Logical => DepthSource::Logical,
                Depth::Quoted => DepthSource::Quoted,
            }),
            svg: self.svg,
        });
        Ok(config)
    }
}

fn run(command: Command) -> Result<Vec<PathBuf>, ExperimentError> {
    Ok(match command {
        Command::Simulate(f) => cmd_simulate(&f.resolve()?)?.files,
        Command::Sweep(f) => cmd_sweep(&f.resolve()?)?.files,
        Command::Layout(f) => cmd_layout(&f.resolve()?)?.files,
        Command::Report(f) => cmd_report(&f.resolve()?)?.files,
    })
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qmpgrover: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
