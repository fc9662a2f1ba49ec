use std::path::PathBuf;
use std::process::exit;

use clap::{Args, Parser, Subcommand};

use hconvex::cli::{constants_table, run_counterexample, run_curve, run_suite, RunConfig};
use hconvex::Error;

/// Numerical verification of convexity properties of weighted boundary
/// norms of harmonic functions over families of level surfaces.
#[derive(Parser)]
#[command(name = "hconvex", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flag overrides shared by all subcommands; each mirrors a config-file key
/// and takes precedence over it.
#[derive(Args, Default)]
struct Overrides {
    /// Flat key=value configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    harmonic: Option<String>,
    #[arg(long)]
    t_start: Option<String>,
    #[arg(long)]
    t_end: Option<String>,
    #[arg(long)]
    n_points: Option<String>,
    /// Grid spacing: linear | log
    #[arg(long)]
    spacing: Option<String>,
    #[arg(long)]
    degree: Option<String>,
    #[arg(long)]
    coarea_degree: Option<String>,
    #[arg(long)]
    refinements: Option<String>,
    #[arg(long)]
    tolerance: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Comma-separated frequency list for the counterexample
    #[arg(long)]
    nu: Option<String>,
    /// Output directory (default: $HCONVEX_OUTPUT_DIR or ./out)
    #[arg(long)]
    output: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named check suite and write curve.csv, report.csv, summary.txt
    Suite {
        /// flat_sharpness | model_sharpness | ellipse | ellipsoid | torus |
        /// eigen | mean_value | monotonicity | square_counterexample
        name: String,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Write curve.csv for the configured family and harmonic
    Curve {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Print the conditioning constants of a family
    Constants {
        /// radial:<n> | ellipsoid:<axes> | torus:<n>,<k>,<eps> | sampled:<axes>
        family: String,
    },
    /// Run the non-convex boundary counterexample and print the ratio table
    Counterexample {
        #[command(flatten)]
        overrides: Overrides,
    },
}

fn build_config(overrides: &Overrides) -> Result<RunConfig, Error> {
    let mut config = RunConfig::default();
    if let Some(path) = &overrides.config {
        config.load_file(path)?;
    }
    let pairs: [(&str, &Option<String>); 12] = [
        ("family", &overrides.family),
        ("harmonic", &overrides.harmonic),
        ("t_start", &overrides.t_start),
        ("t_end", &overrides.t_end),
        ("n_points", &overrides.n_points),
        ("spacing", &overrides.spacing),
        ("degree", &overrides.degree),
        ("coarea_degree", &overrides.coarea_degree),
        ("refinements", &overrides.refinements),
        ("tolerance", &overrides.tolerance),
        ("seed", &overrides.seed),
        ("nu", &overrides.nu),
    ];
    for (key, value) in pairs {
        if let Some(v) = value {
            config.set(key, v)?;
        }
    }
    if let Some(out) = &overrides.output {
        config.set("output", out)?;
    }
    Ok(config)
}

fn run() -> Result<i32, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Suite { name, overrides } => {
            let mut config = build_config(&overrides)?;
            config.suite = name;
            let code = run_suite(&config)?;
            let summary = std::fs::read_to_string(config.output.join("summary.txt"))
                .unwrap_or_default();
            print!("{summary}");
            Ok(code)
        }
        Command::Curve { overrides } => {
            let config = build_config(&overrides)?;
            let code = run_curve(&config)?;
            println!("wrote {}", config.output.join("curve.csv").display());
            Ok(code)
        }
        Command::Constants { family } => {
            print!("{}", constants_table(&family)?);
            Ok(0)
        }
        Command::Counterexample { overrides } => {
            let config = build_config(&overrides)?;
            run_counterexample(&config)
        }
    }
}

fn main() {
    match run() {
        Ok(code) => exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            exit(2);
        }
    }
}
