//! Argument parsing for the `crystalkit` binary.

use clap::{Args, Parser, Subcommand};
use crystalkit_core::shell::{execute, Command, Format, DEFAULT_SCAN_CAP};

pub const SEED_VAR: &str = "CRYSTALKIT_SEED";

#[derive(Parser, Debug)]
#[command(name = "crystalkit", version, about = "Exact analysis of crystallographic and Bieberbach groups")]
struct Cli {
    /// Output format
    #[arg(long, global = true, default_value = "json", value_parser = parse_format)]
    format: Format,
    /// Seed for randomized steps; defaults to $CRYSTALKIT_SEED, then 0
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Cmd,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Invariants, predicates and spin structures of a group
    Analyze { group: String },
    /// H^k of the holonomy with lattice coefficients
    Cohomology {
        group: String,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        degree: u8,
    },
    /// Smallest flat manifold dimension for a holonomy group
    Search {
        /// Built-in catalog name (Z2, Z3, Z2xZ2) or a holonomy file
        #[arg(long)]
        holonomy: String,
        #[arg(long)]
        max_dim: usize,
        #[arg(long)]
        mult_free: bool,
    },
    /// Generalized Hantzsche-Wendt groups
    Ghw {
        #[command(subcommand)]
        action: GhwCmd,
    },
    /// Fibonacci group presentations
    Fibonacci {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        n: usize,
        /// Search for an epimorphism onto this group
        #[arg(long)]
        check_epi: Option<String>,
    },
    /// Fixed points and entropy of affine self-maps
    Dynamics {
        #[command(subcommand)]
        action: DynamicsCmd,
    },
    /// Spin structures
    Spin { group: String },
    /// Built-in groups
    Catalog {
        #[command(subcommand)]
        action: CatalogCmd,
    },
    /// Full report for one group
    Report { group: String },
}

#[derive(Subcommand, Debug)]
enum GhwCmd {
    Enumerate {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        orientable: bool,
    },
}

#[derive(Args, Debug)]
struct GroupArg {
    #[arg(long)]
    group: String,
}

#[derive(Subcommand, Debug)]
enum DynamicsCmd {
    /// Validate x -> Fx + d and report L, N and entropy
    Check {
        #[command(flatten)]
        group: GroupArg,
        /// Rows separated by ';', entries by ','
        #[arg(long, allow_hyphen_values = true)]
        matrix: String,
        /// Entries separated by ',' as p/q
        #[arg(long, allow_hyphen_values = true)]
        vector: Option<String>,
    },
    /// Exhaustive search for violations of N = |L|
    Scan {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        bound: i64,
        #[arg(long, default_value_t = DEFAULT_SCAN_CAP)]
        cap: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogCmd {
    List,
    Show { name: String },
}

impl Cmd {
    fn into_command(self) -> Command {
        match self {
            Cmd::Analyze { group } => Command::Analyze { group },
            Cmd::Cohomology { group, degree } => Command::Cohomology { group, degree: degree as usize },
            Cmd::Search { holonomy, max_dim, mult_free } => Command::Search { holonomy, max_dim, mult_free },
            Cmd::Ghw { action: GhwCmd::Enumerate { dim, orientable } } => Command::GhwEnumerate { dim, orientable },
            Cmd::Fibonacci { r, n, check_epi } => Command::Fibonacci { r, n, check_epi },
            Cmd::Dynamics { action: DynamicsCmd::Check { group, matrix, vector } } => {
                Command::DynamicsCheck { group: group.group, matrix, vector }
            }
            Cmd::Dynamics { action: DynamicsCmd::Scan { group, bound, cap } } => {
                Command::DynamicsScan { group: group.group, bound, cap }
            }
            Cmd::Spin { group } => Command::Spin { group },
            Cmd::Catalog { action: CatalogCmd::List } => Command::CatalogList,
            Cmd::Catalog { action: CatalogCmd::Show { name } } => Command::CatalogShow { name },
            Cmd::Report { group } => Command::Report { group },
        }
    }
}

/// Result of one invocation: exit code and the two output streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn env_seed() -> Result<Option<u64>, String> {
    match std::env::var(SEED_VAR) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| format!("{SEED_VAR}={v:?} is not an unsigned integer")),
        Err(_) => Ok(None),
    }
}

/// Parse `argv` (program name first) and run the command.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let seed = match cli.seed.map_or_else(env_seed, |s| Ok(Some(s))) {
        Ok(s) => s.unwrap_or(0),
        Err(msg) => return Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
    };
    let echo = argv.iter().skip(1).cloned().collect();
    match execute(&cli.command.into_command(), echo, seed) {
        Ok(report) => Outcome { code: 0, stdout: report.render(cli.format), stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
