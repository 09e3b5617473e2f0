//! Argument parsing and dispatch.
//!
//! Exit status: 0 success, 2 unreadable input or bad arguments, 3 the input
//! fails validation, 4 a search limit was hit. Reports go to stdout, the
//! elapsed time to stderr.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::commands::{algebra, diagram, ext, schreier, ses, Settings};
use crate::error::{CliError, Result};
use crate::report::{render, Outcome, OutputFormat};

/// Extensions of finite algebras: validation, canonical forms, enumeration,
/// syzygies, 3×3 diagrams and Schreier extensions of monoids.
#[derive(Debug, Parser)]
#[command(name = "extcalc", version)]
pub struct Cli {
    /// Largest carrier for exhaustive work.
    #[arg(long, global = true, value_name = "N")]
    pub limits_carrier: Option<usize>,
    /// Backtracking node budget per search.
    #[arg(long, global = true, value_name = "N")]
    pub limits_nodes: Option<u64>,
    /// Threads for enumeration.
    #[arg(long, global = true, value_name = "N")]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: OutputFormat,
    /// Seed for the random generators.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Algebras and homomorphisms.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Short exact sequences.
    #[command(subcommand)]
    Ses(SesCmd),
    /// Exact sequences of length n over Z/m-modules.
    #[command(subcommand)]
    Ext(ExtCmd),
    /// 3×3 diagrams.
    #[command(subcommand, name = "threebythree")]
    ThreeByThree(DiagramCmd),
    /// Schreier extensions of monoids.
    #[command(subcommand)]
    Schreier(SchreierCmd),
}

#[derive(Debug, Args)]
pub struct Pair {
    /// Kernel end, a built-in name.
    #[arg(long = "K", visible_alias = "k")]
    pub k: String,
    /// Quotient end, a built-in name.
    #[arg(long = "Q", visible_alias = "q")]
    pub q: String,
}

#[derive(Debug, Args)]
pub struct ModuleArgs {
    /// Modulus m of the ring Z/m.
    #[arg(long)]
    pub ring: usize,
    #[command(flatten)]
    pub ends: Pair,
    /// Length of the sequences.
    #[arg(long)]
    pub n: usize,
}

#[derive(Debug, Subcommand)]
pub enum AlgebraCmd {
    /// Check the defining equations.
    Validate { file: PathBuf },
    /// Check the semi-abelian witness.
    Witness { file: PathBuf },
    /// Print a built-in algebra.
    Show {
        name: String,
        #[arg(long, default_value = "groups")]
        variety: String,
    },
    /// Properties of a homomorphism file.
    Hom { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum SesCmd {
    Validate { file: PathBuf },
    /// Canonical form.
    Canon { file: PathBuf },
    /// Equivalence of two extensions with the same ends.
    Equiv { a: PathBuf, b: PathBuf },
    /// All extensions of Q by K up to equivalence.
    Enum {
        #[arg(long)]
        variety: String,
        #[command(flatten)]
        ends: Pair,
        /// Middle-object sizes (required outside fiber-uniform varieties).
        #[arg(long, value_delimiter = ',')]
        carriers: Option<Vec<usize>>,
    },
    Central { file: PathBuf },
    /// Pull back along a homomorphism into the base.
    Pullback { ses: PathBuf, eta: PathBuf },
    /// A random valid extension (uses --seed).
    Random {
        #[arg(long)]
        variety: String,
        #[arg(long, default_value_t = 16)]
        max_size: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ExtCmd {
    Validate { file: PathBuf },
    Splice { a: PathBuf, b: PathBuf },
    /// Syzygy and free resolution of a module.
    Syzygy {
        #[arg(long)]
        ring: usize,
        #[arg(long = "Q", visible_alias = "q")]
        q: String,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Pull back along the syzygy of the base.
    Reduce { file: PathBuf },
    /// Representatives of the classes of length-n sequences.
    Classes(ModuleArgs),
    /// Ext^n from a free resolution.
    Oracle(ModuleArgs),
}

#[derive(Debug, Subcommand)]
pub enum DiagramCmd {
    Validate { file: PathBuf },
    /// Whether the lower right square is a regular pushout.
    Pushout { file: PathBuf },
    Decompose { file: PathBuf },
    /// Reduce along the double syzygy of the corner.
    Reduce { file: PathBuf },
    /// A random valid diagram (uses --seed).
    Random {
        #[arg(long)]
        variety: String,
        #[arg(long, default_value_t = 64)]
        max_total: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum SchreierCmd {
    Check { file: PathBuf },
    /// Schreier data and the retract maps.
    Maps { file: PathBuf },
    Canon { file: PathBuf },
    Enum {
        #[command(flatten)]
        ends: Pair,
    },
    Equiv { a: PathBuf, b: PathBuf },
}

/// `carrier=N,nodes=N,workers=N`, any subset.
pub fn parse_env_limits(text: &str, s: &mut Settings) -> Result<()> {
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("EXTCALC_LIMITS: expected key=value, got `{part}`")))?;
        let bad = || CliError::Usage(format!("EXTCALC_LIMITS: bad value in `{part}`"));
        let n: u64 = value.trim().parse().map_err(|_| bad())?;
        match key.trim() {
            "carrier" => s.limits.max_carrier = usize::try_from(n).map_err(|_| bad())?,
            "nodes" => s.limits.max_nodes = n,
            "workers" => s.workers = usize::try_from(n).map_err(|_| bad())?,
            other => return Err(CliError::Usage(format!("EXTCALC_LIMITS: unknown key `{other}`"))),
        }
    }
    Ok(())
}

impl Cli {
    /// Defaults, then `EXTCALC_LIMITS`, then flags.
    pub fn settings(&self, env: Option<&str>) -> Result<Settings> {
        let mut s = Settings::default();
        if let Some(text) = env {
            parse_env_limits(text, &mut s)?;
        }
        if let Some(n) = self.limits_carrier {
            s.limits.max_carrier = n;
        }
        if let Some(n) = self.limits_nodes {
            s.limits.max_nodes = n;
        }
        if let Some(n) = self.workers {
            s.workers = n;
        }
        if let Some(n) = self.seed {
            s.seed = n;
        }
        if s.limits.max_carrier == 0 || s.limits.max_nodes == 0 || s.workers == 0 {
            return Err(CliError::Usage("limits and worker count must be positive".into()));
        }
        Ok(s)
    }
}

pub fn run(command: &Command, s: &Settings) -> Result<Outcome> {
    match command {
        Command::Algebra(c) => match c {
            AlgebraCmd::Validate { file } => algebra::validate(file, s),
            AlgebraCmd::Witness { file } => algebra::witness(file, s),
            AlgebraCmd::Show { name, variety } => algebra::show(variety, name),
            AlgebraCmd::Hom { file } => algebra::hom(file, s),
        },
        Command::Ses(c) => match c {
            SesCmd::Validate { file } => ses::validate(file, s),
            SesCmd::Canon { file } => ses::canon(file, s),
            SesCmd::Equiv { a, b } => ses::equiv(a, b, s),
            SesCmd::Enum {
                variety,
                ends,
                carriers,
            } => ses::enumerate(variety, &ends.k, &ends.q, carriers.as_deref(), s),
            SesCmd::Central { file } => ses::central(file, s),
            SesCmd::Pullback { ses: e, eta } => ses::pullback(e, eta, s),
            SesCmd::Random { variety, max_size } => ses::random(variety, *max_size, s),
        },
        Command::Ext(c) => match c {
            ExtCmd::Validate { file } => ext::validate(file, s),
            ExtCmd::Splice { a, b } => ext::splice_files(a, b, s),
            ExtCmd::Syzygy { ring, q, depth } => ext::syzygy_of(*ring, q, *depth),
            ExtCmd::Reduce { file } => ext::reduce(file, s),
            ExtCmd::Classes(m) => ext::classes(m.ring, &m.ends.k, &m.ends.q, m.n, s),
            ExtCmd::Oracle(m) => ext::oracle(m.ring, &m.ends.k, &m.ends.q, m.n),
        },
        Command::ThreeByThree(c) => match c {
            DiagramCmd::Validate { file } => diagram::validate(file, s),
            DiagramCmd::Pushout { file } => diagram::pushout(file, s),
            DiagramCmd::Decompose { file } => diagram::decompose(file, s),
            DiagramCmd::Reduce { file } => diagram::reduce(file, s),
            DiagramCmd::Random { variety, max_total } => diagram::random(variety, *max_total, s),
        },
        Command::Schreier(c) => match c {
            SchreierCmd::Check { file } => schreier::check(file, s),
            SchreierCmd::Maps { file } => schreier::maps(file, s),
            SchreierCmd::Canon { file } => schreier::canon(file, s),
            SchreierCmd::Enum { ends } => schreier::enumerate(&ends.k, &ends.q, s),
            SchreierCmd::Equiv { a, b } => schreier::equiv(a, b, s),
        },
    }
}

/// Entry point of the binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let env = std::env::var("EXTCALC_LIMITS").ok();
    let result = cli.settings(env.as_deref()).and_then(|s| run(&cli.command, &s));
    let (report, code) = match result {
        Ok(out) => {
            let code = out.exit_code();
            (out.report, code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let report = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
            (report, e.exit_code())
        }
    };
    // A closed pipe on stdout is not worth a panic.
    let _ = std::io::stdout().write_all(render(&report, cli.format).as_bytes());
    eprintln!("elapsed: {} ms", start.elapsed().as_millis());
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_then_flags() {
        let cli = Cli::parse_from(["extcalc", "--workers", "3", "schreier", "enum", "--K", "Z2", "--Q", "Z2"]);
        let s = cli.settings(Some("carrier=10, nodes=99,workers=2")).unwrap();
        assert_eq!(s.limits.max_carrier, 10);
        assert_eq!(s.limits.max_nodes, 99);
        assert_eq!(s.workers, 3);
        assert!(cli.settings(Some("carrier=0")).is_err());
        assert!(cli.settings(Some("speed=1")).is_err());
    }
}
