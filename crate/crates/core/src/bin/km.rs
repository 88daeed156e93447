use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mixed_koszul::cli::{run, Flags};

/// Local-algebra computations on mixed complexes: standard bases, colengths,
/// Euler characteristics, multiplicities, and vector-field indices.
#[derive(Parser)]
#[command(name = "km", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// JSON problem file
    file: PathBuf,
    /// Symmetric degree ν (default 0)
    #[arg(long)]
    nu: Option<u32>,
    /// Seed for randomized searches (default 1)
    #[arg(long)]
    seed: Option<u64>,
    /// Cap on μ for Hilbert-grid stabilization
    #[arg(long)]
    mu_cap: Option<u32>,
    /// Cap on ν for Hilbert-grid stabilization
    #[arg(long)]
    nu_cap: Option<u32>,
    /// Compact JSON output (the default)
    #[arg(long)]
    json: bool,
    /// Pretty-printed JSON output
    #[arg(long, conflicts_with = "json")]
    pretty: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Standard basis of the ideal a or the module given by A
    Sb(Common),
    /// Colength of the ideal a or the module given by A
    Colength(Common),
    /// Euler characteristic of the mixed complex K_ν
    Chi(Common),
    /// Mixed multiplicities (e_0, …, e_d) of the pair (a, A)
    Mixed(Common),
    /// Parameter multiplicity e(a; A; E)
    ParamMult(Common),
    /// Alternating multiplicity S(a, A)
    AltMult(Common),
    /// Index of the vector field of an icis payload (three cross-checked routes)
    Index(Common),
    /// Run a named cross-check on the file's data
    Verify {
        /// One of: thm01, thm02, nu-independence, gl-invariance,
        /// additivity-129, cm-length-1210, reduction-423, delta-23
        property: String,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, property, common) = match &cli.command {
        Cmd::Sb(c) => ("sb", None, c),
        Cmd::Colength(c) => ("colength", None, c),
        Cmd::Chi(c) => ("chi", None, c),
        Cmd::Mixed(c) => ("mixed", None, c),
        Cmd::ParamMult(c) => ("param-mult", None, c),
        Cmd::AltMult(c) => ("alt-mult", None, c),
        Cmd::Index(c) => ("index", None, c),
        Cmd::Verify { property, common } => ("verify", Some(property.as_str()), common),
    };
    let flags = Flags {
        nu: common.nu,
        seed: common.seed,
        mu_cap: common.mu_cap,
        nu_cap: common.nu_cap,
        pretty: common.pretty,
    };
    let (report, code) = run(name, property, &common.file, &flags);
    println!("{report}");
    ExitCode::from(code as u8)
}
