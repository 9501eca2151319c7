use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cheshire_cli::commands::{self, OutputFormat};
use cheshire_cli::CliError;

/// Simulator and analysis toolkit for a single-photon quantum Cheshire cat
/// interferometer: exact pre/postselected states, weak measurements of
/// presence and circular polarization, stochastic photon counting, and
/// recovery of weak values from count data.
#[derive(Parser)]
#[command(name = "cheshire", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Noiseless detection-probability sweep over the phase grid.
    Sweep {
        /// TOML configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Output path (CSV plus a JSON sidecar, or one JSON file).
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
    /// Seeded stochastic counting run over the phase grid.
    Montecarlo {
        #[arg(long)]
        config: PathBuf,
        /// Master RNG seed; identical seeds give byte-identical CSVs.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
    /// Fringe fit and weak-value estimates for a counts CSV.
    Analyze {
        /// Counts CSV produced by `montecarlo`.
        #[arg(long)]
        counts: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// Report output path (JSON).
        #[arg(long)]
        out: PathBuf,
        /// No-filter baseline counts CSV, enabling presence weak values.
        #[arg(long)]
        baseline: Option<PathBuf>,
        /// Also write an SVG plot of the counts with the fitted curve.
        #[arg(long)]
        svg: bool,
    },
    /// Run the canonical configurations and tabulate simulated observables
    /// against the reported reference values.
    ReproducePaper {
        /// Directory receiving comparison.csv, report.json and config.toml.
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Print the Brewster angle and slide reflectance for a refractive index.
    Fresnel {
        #[arg(long)]
        n: f64,
        /// Incidence angle in degrees; defaults to the Brewster angle.
        #[arg(long)]
        angle_deg: Option<f64>,
    },
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep {
            config,
            out,
            format,
        } => commands::sweep::run(&config, &out, format),
        Command::Montecarlo {
            config,
            seed,
            out,
            format,
        } => commands::montecarlo::run(&config, seed, &out, format),
        Command::Analyze {
            counts,
            config,
            out,
            baseline,
            svg,
        } => commands::analyze::run(&commands::analyze::AnalyzeArgs {
            counts: &counts,
            config: &config,
            out: &out,
            baseline: baseline.as_deref(),
            svg,
        }),
        Command::ReproducePaper { out_dir, seed } => commands::reproduce::run(&out_dir, seed),
        Command::Fresnel { n, angle_deg } => commands::fresnel::run(n, angle_deg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code as u8)
        }
    }
}
