use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use orbicycle::Budget;
use orbicycle_cli::{run_text, Format};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

/// Run a scene file and print its report.
#[derive(Debug, Parser)]
#[command(name = "orbicycle", version, about)]
struct Args {
    /// Scene file to run; `-` reads standard input.
    scene: PathBuf,

    /// Seed for every random choice made while running.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Gröbner basis pair budget.
    #[arg(long, default_value_t = Budget::default().max_pairs)]
    max_pairs: usize,

    /// Gröbner basis term-count budget.
    #[arg(long, default_value_t = Budget::default().max_terms)]
    max_terms: usize,

    /// Largest degree the univariate factorizer accepts.
    #[arg(long, default_value_t = Budget::default().degree_bound)]
    degree_bound: usize,

    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let text = if args.scene.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map(|_| s)
    } else {
        std::fs::read_to_string(&args.scene)
    };
    let text = match text {
        Ok(t) => t,
        Err(e) => {
            eprintln!("orbicycle: cannot read {}: {}", args.scene.display(), e);
            return ExitCode::from(2);
        }
    };
    let budget = Budget { max_pairs: args.max_pairs, max_terms: args.max_terms, degree_bound: args.degree_bound };
    let report = run_text(&text, args.seed, budget);
    let format = match args.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Json => Format::Json,
    };
    print!("{}", report.render(format));
    ExitCode::from(report.exit_code() as u8)
}
