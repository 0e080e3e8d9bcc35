//! `agkit`: command-line front end.
//!
//! Exit codes: 0 when every verdict is as expected, 1 when a check fails,
//! 2 for usage, parse and input errors.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use agkit_core::builtins::Catalog;
use agkit_core::Limits;

#[derive(Parser, Debug)]
#[command(name = "agkit", version, about = "Finite algebra workbench for Almost Gautama algebras")]
struct Cli {
    /// Print the canonical JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

/// Algebras are builtin names (2, 3_dblst, 3_klst, 4_dmba), paths to JSON
/// algebra files, or `*`-separated products of either.
#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect an algebra.
    #[command(subcommand)]
    Algebra(AlgebraCommand),
    /// Decide an identity or quasi-identity in a variety.
    Check {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        sentence: String,
    },
    /// List the homomorphisms between two algebras.
    Homs { source: String, target: String },
    /// List the congruences of an algebra.
    Congruences { algebra: String },
    /// Simple, SI, DI, the complement conditions and the generated variety.
    Classify { algebra: String },
    /// Decide every diagram of embeddings base -> left, base -> right.
    Amalgamate {
        #[arg(long)]
        variety: String,
        #[arg(long)]
        base: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Classify the amalgamation property.
    ClassifyAp(VarietyChoice),
    /// Check the lemma registry.
    Lemmas {
        #[arg(long)]
        variety: Option<String>,
    },
    /// Transferability, injectives, joint embedding and amalgamation bases.
    Applications {
        #[arg(long)]
        variety: String,
    },
    /// Generate a free algebra on at most three generators.
    Free {
        #[arg(long)]
        variety: String,
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Run every check against the shipped expectations.
    VerifyPaper {
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum AlgebraCommand {
    /// Print the operation tables.
    Show { algebra: String },
}

#[derive(Args, Debug)]
#[group(multiple = false)]
struct VarietyChoice {
    #[arg(long)]
    variety: Option<String>,
    /// All eight varieties (the default).
    #[arg(long)]
    all: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    let catalog = match Limits::from_env() {
        Ok(l) => Catalog::with_limits(l),
        Err(e) => {
            eprintln!("agkit: {e}");
            return ExitCode::from(2);
        }
    };
    match commands::run(&catalog, cli.command, argv) {
        Ok(out) => {
            if cli.json {
                print!("{}", out.report.to_canonical_json());
            } else {
                print!("{}", out.text);
            }
            if out.report.all_ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("agkit: {e}");
            ExitCode::from(2)
        }
    }
}
