//! `snclab`: check, transform and search digraph pairs from the command line.
//!
//! Exit codes: 0 when the property holds, 1 when it fails or a counterexample
//! is found, 2 on input or usage errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use snc_core::search::Hypothesis;
use snc_core::Variant;

#[derive(Parser, Debug)]
#[command(
    name = "snclab",
    version,
    about = "Exact checks for second-neighbourhood inequalities on digraph pairs"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Built-in fixture pairs.
    #[command(subcommand)]
    Fixtures(FixturesCommand),
    /// Per-vertex inequality report.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// Ignore document weights and use all ones.
        #[arg(long)]
        unweighted: bool,
    },
    /// Identity and tournament-pair hypothesis checks.
    Hypotheses { file: PathBuf },
    /// Replace each vertex by as many copies as its (integer) weight.
    BlowUp {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Losing density of the loop-stripped first relation.
    Density { file: PathBuf },
    /// Certificate for the union inequality on a tournament pair.
    Theorem { file: PathBuf },
    /// Counterexample search campaign.
    Search(SearchArgs),
}

#[derive(Subcommand, Debug)]
pub enum FixturesCommand {
    /// Run every fixture check.
    Verify {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        id: u8,
    },
    /// Write a fixture as a pair document.
    Export {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        id: u8,
        /// Destination file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    /// `C = AB`.
    #[value(alias = "product-only")]
    Ab,
    /// `C = AB ∪ BA`.
    Union,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Ab => Variant::ProductOnly,
            VariantArg::Union => Variant::Union,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HypothesisArg {
    /// `A ∩ Bᵀ = I`.
    Identity,
    /// `A ∩ Bᵀ = I` and `A ⊆ B`.
    Subset,
    /// `A ∩ Bᵀ = I` and `A ∪ Bᵀ = V × V`.
    Tournament,
}

impl From<HypothesisArg> for Hypothesis {
    fn from(h: HypothesisArg) -> Self {
        match h {
            HypothesisArg::Identity => Hypothesis::IdentityOnly,
            HypothesisArg::Subset => Hypothesis::IdentitySubset,
            HypothesisArg::Tournament => Hypothesis::TournamentPair,
        }
    }
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(value_enum)]
    pub mode: ModeArg,
    /// Number of vertices.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Samples drawn in random mode.
    #[arg(long, default_value_t = 1000)]
    pub iters: u64,
    #[arg(long, value_enum, default_value_t = VariantArg::Union)]
    pub variant: VariantArg,
    #[arg(long, value_enum, default_value_t = HypothesisArg::Identity)]
    pub hypothesis: HypothesisArg,
    /// Also look for weights violating the inequality everywhere.
    #[arg(long)]
    pub oracle: bool,
    /// Worker threads; results do not depend on it.
    #[arg(long, default_value_t = 1)]
    pub parallelism: usize,
    /// Permit exhaustive enumeration on five vertices.
    #[arg(long)]
    pub allow_n5: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command) {
        Ok(report) => {
            match cli.format {
                Format::Text => print!("{}", report.text),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&report.json).expect("report serializes")
                ),
            }
            ExitCode::from(report.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
