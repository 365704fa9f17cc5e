use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use evolute_kit::curve::SamplingOptions;
use evolute_kit::evolute::Orientation;
use evolute_kit::report::analysis::{seed_from_env, AnalysisOptions, NESTING_PAIRS};
use evolute_kit::report::commands::{
    cmd_analyze, cmd_checks, cmd_evolute, cmd_figure1, cmd_involute, CliError, EXIT_PARSE,
};

/// Evolutes, involutes and regularity analysis of plane curves.
///
/// Curves are named by descriptors `name[:key=value,...]`, e.g. `ellipse:a=2,b=1`,
/// `radius_profile:m=3,c=1,R0=1`, `limacon`, or `csv:path=samples.csv`.
/// `t0` and `t1` override the parameter interval of any curve.
#[derive(Parser)]
#[command(name = "evolute-kit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Sampling {
    /// Nodes per unit arclength.
    #[arg(long)]
    density: Option<f64>,
    /// Curvature magnitude treated as zero.
    #[arg(long, default_value_t = evolute_kit::curve::DEFAULT_KAPPA_MIN)]
    kappa_min: f64,
}

impl Sampling {
    fn options(&self, default_density: f64) -> SamplingOptions {
        SamplingOptions { density: self.density.unwrap_or(default_density), kappa_min: self.kappa_min }
    }
}

#[derive(Args)]
struct Seeded {
    /// Seed for sampled pairs; defaults to $EVOLUTE_KIT_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Random osculating-disk pairs per monotone segment.
    #[arg(long, default_value_t = NESTING_PAIRS)]
    pairs: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Write parent and evolute samples (CSV) and an SVG overlay.
    Evolute {
        descriptor: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Write the involute with string constant `c` (CSV and SVG).
    Involute {
        descriptor: String,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        /// Arclength assigned to the start of the curve (default 0).
        #[arg(long, allow_negative_numbers = true)]
        start: Option<f64>,
        /// Unwind from the end of the curve instead of the start.
        #[arg(long)]
        backward: bool,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Full JSON analysis report.
    Analyze {
        descriptor: String,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        seeded: Seeded,
    },
    /// Draw the limaçon and its involute.
    Figure1 {
        #[arg(long, default_value = "figure1.svg")]
        out: PathBuf,
    },
    /// Double points, disk nesting and simplicity as JSON.
    Checks {
        descriptor: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        sampling: Sampling,
        #[command(flatten)]
        seeded: Seeded,
    },
}

fn analysis_options(sampling: &Sampling, seeded: &Seeded, density: f64) -> Result<AnalysisOptions, CliError> {
    let seed = match seeded.seed {
        Some(s) => s,
        None => seed_from_env().map_err(|m| CliError { code: EXIT_PARSE, message: m })?,
    };
    Ok(AnalysisOptions {
        sampling: sampling.options(density),
        seed,
        nesting_pairs: seeded.pairs,
        ..AnalysisOptions::default()
    })
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Evolute { descriptor, out, sampling } => {
            cmd_evolute(&descriptor, &out, sampling.options(SamplingOptions::DEFAULT_DENSITY))
        }
        Command::Involute { descriptor, c, start, backward, out, sampling } => {
            let orientation = if backward { Orientation::Backward } else { Orientation::Forward };
            cmd_involute(&descriptor, c, start, orientation, &out, sampling.options(SamplingOptions::DEFAULT_DENSITY))
        }
        Command::Analyze { descriptor, out, sampling, seeded } => {
            let opts = analysis_options(&sampling, &seeded, SamplingOptions::ANALYSIS_DENSITY)?;
            cmd_analyze(&descriptor, out.as_deref(), opts)
        }
        Command::Figure1 { out } => cmd_figure1(&out),
        Command::Checks { descriptor, out, sampling, seeded } => {
            let opts = analysis_options(&sampling, &seeded, SamplingOptions::DEFAULT_DENSITY)?;
            cmd_checks(&descriptor, out.as_deref(), opts)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
