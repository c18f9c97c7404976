use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hofib::homology::Coefficients;
use hofib_cli::{emit, load, parse_coefficients, run, Command, Flags, Format};

/// Homology fibrations, subdivision and Borel constructions on finite simplicial sets.
///
/// Targets name declarations from the `--file` documents or built-ins such as
/// `circle`, `delta2`, `boundary3`, `polygon6`, `binary_icosahedral`,
/// `collapse_circle_to_interval`, `covering_6_to_3`, `Z2`, `Z3` and `idem`.
#[derive(Parser, Debug)]
#[command(name = "hofib", version)]
struct Cli {
    command: Command,
    /// Sset, map, monoid, category or diagram name.
    target: Option<String>,
    /// Declaration files; may be repeated.
    #[arg(short, long = "file")]
    files: Vec<PathBuf>,
    /// Truncation bound.
    #[arg(long, default_value_t = 4)]
    max_dim: usize,
    /// Z, or Zp / Z/p for a prime p.
    #[arg(long, default_value = "Z", value_parser = parse_coefficients)]
    coefficients: Coefficients,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Check every operator of the simplex category instead of the generating faces and degeneracies.
    #[arg(long)]
    deep_ops: bool,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record wall-clock time in the report.
    #[arg(long)]
    timing: bool,
    /// star-lemma: a single face, as comma-separated vertices.
    #[arg(long, value_delimiter = ',')]
    face: Option<Vec<usize>>,
    /// star-lemma: check this many faces chosen with --seed.
    #[arg(long)]
    samples: Option<usize>,
    /// group-completion/borel: telescope along this endomorphism.
    #[arg(long)]
    telescope: Option<String>,
    /// Number of telescope stages.
    #[arg(long, default_value_t = 2)]
    stages: usize,
    /// Object for the representable diagram of a category.
    #[arg(long)]
    object: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("HOFIB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // only fails if a pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let flags = Flags {
        max_dim: cli.max_dim,
        coefficients: cli.coefficients,
        deep_ops: cli.deep_ops,
        seed: cli.seed,
        timing: cli.timing,
        face: cli.face,
        samples: cli.samples,
        telescope: cli.telescope,
        stages: cli.stages,
        object: cli.object,
    };
    let result = load(&cli.files).and_then(|env| run(cli.command, cli.target.as_deref(), &env, &flags));
    match result {
        Ok(report) => {
            println!("{}", emit(&report, cli.format).trim_end());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
