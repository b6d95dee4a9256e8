//! Command-line front end: build spaces and manifests, run operator words,
//! compare characters against the symbolic and Freudenthal oracles, and
//! export geometry.
//!
//! Exit codes: 0 success, 1 usage or I/O errors, 2 operator undefined
//! (with the failing token index on stderr), 3 oracle mismatch.

use clap::{Args, Parser, Subcommand};

mod commands;
mod export;
mod manifest;

#[derive(Parser)]
#[command(
    name = "polydd",
    version,
    about = "Divided difference operators on parapolytopes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a string-space JSON file
    Space {
        #[command(subcommand)]
        action: SpaceAction,
    },
    /// Apply an operator word to a seed point
    Apply(RunArgs),
    /// Recompute a character two ways and compare
    Check(CheckArgs),
    /// Export a chain as JSON, a point list, or an OFF mesh
    Export(ExportArgs),
    /// Emit the Gelfand-Zetlin manifest for a dominant weight
    Gz(GzArgs),
    /// Emit the Sp(4) example manifest
    Sp4(Sp4Args),
    /// Emit the SL(3) twisted-cube manifest
    TwistedCube(TwistedCubeArgs),
    /// Degenerate a block of a string space
    Degenerate(DegenerateArgs),
    /// Emit a Bott-tower manifest from upper-triangular data
    BottTower(BottTowerArgs),
    /// Emit a Bott-Samelson manifest from Cartan data and a word
    BottSamelson(BottSamelsonArgs),
}

#[derive(Subcommand)]
enum SpaceAction {
    /// Parse and validate the file
    Validate { file: String },
}

#[derive(Args)]
pub struct RunArgs {
    /// Manifest file with space, word, and seed
    #[arg(long)]
    manifest: Option<String>,
    /// String-space JSON file (alternative to --manifest)
    #[arg(long)]
    space: Option<String>,
    /// Whitespace-separated word tokens, e.g. "D1 E:0,-1/2,0 D2"
    #[arg(long, allow_hyphen_values = true)]
    word: Option<String>,
    /// Comma-separated rational seed coordinates
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    /// Also emit every intermediate chain
    #[arg(long)]
    trace: bool,
    /// Compare the character against the symbolic oracle after applying
    #[arg(long)]
    oracle: bool,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
pub struct CheckArgs {
    #[arg(long)]
    manifest: Option<String>,
    #[arg(long)]
    space: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    word: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    /// Named Cartan type for Freudenthal and Weyl-dimension comparisons
    #[arg(long)]
    cartan: Option<String>,
    /// Check this chain file instead of re-running the pipeline
    #[arg(long)]
    chain: Option<String>,
}

#[derive(Args)]
pub struct ExportArgs {
    /// Chain JSON file (as written by apply)
    #[arg(long)]
    chain: String,
    /// json | points | off
    #[arg(long, default_value = "json")]
    format: String,
    /// 1-based coordinate triple for off export of higher-dimensional chains
    #[arg(long)]
    project: Option<String>,
    /// Output file (off: base name, writes BASE.pos.off / BASE.neg.off)
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
pub struct GzArgs {
    #[arg(long)]
    n: usize,
    /// Non-increasing integers, e.g. "3,0,-3"
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
pub struct Sp4Args {
    /// Four integers a,b,c,d with (c+d)-(a+b) >= 0 and (a+b)-2(c+d) >= 0
    #[arg(long, allow_hyphen_values = true)]
    seed: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
pub struct TwistedCubeArgs {
    /// Three rationals a,b,c (seed x=a, y=b, z=c)
    #[arg(long, allow_hyphen_values = true)]
    seed: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
pub struct DegenerateArgs {
    #[arg(long)]
    space: String,
    /// 1-based block to split
    #[arg(long)]
    block: Option<usize>,
    /// Degenerate every block down to lines
    #[arg(long)]
    full: bool,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
pub struct BottTowerArgs {
    /// Strictly upper-triangular rows, semicolon-separated: "0,3;0,0"
    #[arg(long, allow_hyphen_values = true)]
    matrix: String,
    /// Seed for the word D_1 ... D_d (defaults to the origin)
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
pub struct BottSamelsonArgs {
    /// Named Cartan type, e.g. A2
    #[arg(long)]
    cartan: String,
    /// Comma-separated 1-based simple-root indices, e.g. "1,2,1"
    #[arg(long, allow_hyphen_values = true)]
    word: String,
    /// Translation inserted left of the k-th letter: "k:u1,u2,..." (repeatable)
    #[arg(long = "u", allow_hyphen_values = true)]
    translations: Vec<String>,
    /// Seed point (defaults to the origin)
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    #[arg(long)]
    out: Option<String>,
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code_for(&e)
        }
    };
    std::process::exit(code);
}

fn exit_code_for(e: &anyhow::Error) -> i32 {
    if let Some(lib) = e.downcast_ref::<polydd::Error>() {
        if lib.is_operator_domain_error() {
            return 2;
        }
    }
    1
}

fn dispatch(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Space {
            action: SpaceAction::Validate { file },
        } => commands::space_validate(&file),
        Command::Apply(args) => commands::apply(args),
        Command::Check(args) => commands::check(args),
        Command::Export(args) => commands::export(args),
        Command::Gz(args) => commands::gz(args),
        Command::Sp4(args) => commands::sp4(args),
        Command::TwistedCube(args) => commands::twisted_cube(args),
        Command::Degenerate(args) => commands::degenerate(args),
        Command::BottTower(args) => commands::bott_tower(args),
        Command::BottSamelson(args) => commands::bott_samelson(args),
    }
}
