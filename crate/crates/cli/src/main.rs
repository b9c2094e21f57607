//! `omegalarge`: checks, searches and extractions for largeness relative to a
//! sentence, from the command line.
//!
//! Exit codes: 0 true or found, 1 false or absent, 2 inconclusive or out of
//! budget, 3 usage error.

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use omegalarge::SparsityPolicy;

mod commands;
mod input;
mod report;

use report::{Failure, Status};

#[derive(Parser)]
#[command(
    name = "omegalarge",
    version,
    about = "Largeness relative to a sentence: checks, extractions and bounds"
)]
struct Cli {
    #[command(flatten)]
    globals: Globals,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
pub struct Globals {
    /// Print one JSON result object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Step budget for searches, or element budget for materialization.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub budget: u64,
    /// Least admissible set element.
    #[arg(long, global = true, default_value_t = 3)]
    pub floor: u64,
    /// Sparsity policy for pigeonhole extraction.
    #[arg(long, global = true, default_value = "none", value_parser = parse_sparsity)]
    pub sparsity: SparsityPolicy,
    /// Check apartness of every pair of sibling blocks when replaying certificates.
    #[arg(long, global = true)]
    pub paranoid: bool,
    /// Worker threads for exhaustive enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
}

fn parse_sparsity(s: &str) -> Result<SparsityPolicy, String> {
    s.parse().map_err(|e: omegalarge::Error| e.to_string())
}

#[derive(Args, Clone, Debug)]
pub struct ThetaArgs {
    /// Matrix in x, y, z, or `top`.
    #[arg(long, default_value = "top")]
    pub theta: String,
    /// The number parameter `a`.
    #[arg(long, default_value = "0")]
    pub a: String,
    /// The set parameter `A` as a 0/1 string, position 0 first.
    #[arg(long)]
    pub param: Option<String>,
}

#[derive(Args, Clone, Debug)]
pub struct ColoringArgs {
    /// Coloring as a JSON file or inline JSON.
    #[arg(long)]
    pub coloring: Option<String>,
    /// Draw a coloring with this many colors from the seed.
    #[arg(long)]
    pub random_colors: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Largeness checks and extractions.
    Large {
        #[command(subcommand)]
        command: LargeCmd,
    },
    /// Whether one set is apart from another.
    Apart(commands::ApartArgs),
    /// Groupings of pair colorings.
    Grouping {
        #[command(subcommand)]
        command: GroupingCmd,
    },
    /// Largeness and density relative to a Ramsey-like statement.
    Gamma {
        #[command(subcommand)]
        command: GammaCmd,
    },
    /// Transitive subsets of pair colorings.
    Em {
        #[command(subcommand)]
        command: EmCmd,
    },
    /// Homogeneous subsets of transitive pair colorings.
    Ads {
        #[command(subcommand)]
        command: AdsCmd,
    },
    /// Minimal large sets with a coloring that defeats homogeneous large subsets.
    Lowerbound {
        #[command(subcommand)]
        command: LowerboundCmd,
    },
    /// Exponents of the explicit bounds, as TSV.
    BoundsTable(commands::BoundsArgs),
    /// Parse, evaluate and rewrite formulas.
    Formula {
        #[command(subcommand)]
        command: FormulaCmd,
    },
}

#[derive(Subcommand)]
enum LargeCmd {
    /// Search for or replay a certificate of ω^n·k-largeness.
    Check(commands::CheckArgs),
    /// The minimal ω^n-large interval starting at a base.
    Minimal(commands::MinimalArgs),
    /// A homogeneous large subset for a coloring of points.
    Pigeonhole(commands::PigeonholeArgs),
    /// Split an ω^(n+m)-large set into ω^n-large pieces.
    Decompose(commands::DecomposeArgs),
    /// Join ω^a·b-large blocks into one large set.
    Fuse(commands::FuseArgs),
}

#[derive(Subcommand)]
enum GroupingCmd {
    Find(commands::GroupingFindArgs),
    Check(commands::GroupingCheckArgs),
}

#[derive(Subcommand)]
enum GammaCmd {
    Large(commands::GammaLargeArgs),
    Dense(commands::GammaDenseArgs),
}

#[derive(Subcommand)]
enum EmCmd {
    Extract(commands::EmArgs),
}

#[derive(Subcommand)]
enum AdsCmd {
    /// The auxiliary coloring of pairs by how long their interval is.
    Q(commands::AdsArgs),
    Extract(commands::AdsArgs),
}

#[derive(Subcommand)]
enum LowerboundCmd {
    /// Summary of a minimal tree.
    Tree(commands::TreeArgs),
    /// The parity coloring of a tree's elements.
    Fx(commands::FxArgs),
    /// Check that no homogeneous subset is large.
    Verify(commands::VerifyArgs),
}

#[derive(Subcommand)]
enum FormulaCmd {
    Parse(commands::FormulaArgs),
    Eval(commands::EvalArgs),
    /// Interleave bounded copies of the leading first-order quantifiers.
    Weaken(commands::FormulaArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SearchMode {
    Exhaustive,
    Greedy,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum VerifyMode {
    Exhaustive,
    Pruned,
}

fn dispatch(cmd: Command, g: &Globals) -> report::Outcome {
    use commands as c;
    match cmd {
        Command::Large { command } => match command {
            LargeCmd::Check(a) => c::large_check(a, g),
            LargeCmd::Minimal(a) => c::large_minimal(a, g),
            LargeCmd::Pigeonhole(a) => c::large_pigeonhole(a, g),
            LargeCmd::Decompose(a) => c::large_decompose(a, g),
            LargeCmd::Fuse(a) => c::large_fuse(a, g),
        },
        Command::Apart(a) => c::apart(a, g),
        Command::Grouping { command } => match command {
            GroupingCmd::Find(a) => c::grouping_find(a, g),
            GroupingCmd::Check(a) => c::grouping_check(a, g),
        },
        Command::Gamma { command } => match command {
            GammaCmd::Large(a) => c::gamma_large(a, g),
            GammaCmd::Dense(a) => c::gamma_dense(a, g),
        },
        Command::Em {
            command: EmCmd::Extract(a),
        } => c::em_extract(a, g),
        Command::Ads { command } => match command {
            AdsCmd::Q(a) => c::ads_q(a, g),
            AdsCmd::Extract(a) => c::ads_extract(a, g),
        },
        Command::Lowerbound { command } => match command {
            LowerboundCmd::Tree(a) => c::lowerbound_tree(a, g),
            LowerboundCmd::Fx(a) => c::lowerbound_fx(a, g),
            LowerboundCmd::Verify(a) => c::lowerbound_verify(a, g),
        },
        Command::BoundsTable(a) => c::bounds(a, g),
        Command::Formula { command } => match command {
            FormulaCmd::Parse(a) => c::formula_parse(a, g),
            FormulaCmd::Eval(a) => c::formula_eval(a, g),
            FormulaCmd::Weaken(a) => c::formula_weaken(a, g),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            if std::env::args().any(|a| a == "--json") {
                return Failure::Usage(e.render().to_string().trim().to_string()).emit(true);
            }
            let _ = e.print();
            return ExitCode::from(Status::Usage.code());
        }
    };
    let g = cli.globals;
    match dispatch(cli.command, &g) {
        Ok(r) => r.emit(g.json),
        Err(f) => f.emit(g.json),
    }
}
