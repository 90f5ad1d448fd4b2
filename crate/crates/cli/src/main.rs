//! `evomap` command line.
//!
//! Exit codes: 0 success, 1 input/parse/validation error, 2 match error,
//! 3 migration inconsistency, 4 roundtrip mismatch.

mod commands;
mod repo;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use evomap::error::{EngineError, MatchError, MigrationError};

#[derive(Parser)]
#[command(name = "evomap", version, about = "Diff evolution mappings between ontology versions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum Format {
    #[default]
    Native,
    Obo,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum Agg {
    /// Fuse pairs per pass, as the rules are written
    Literal,
    /// Fuse whole groups per pass
    #[default]
    Fused,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum Matcher {
    /// Pair concepts with equal ids
    #[default]
    Id,
    /// Pair concepts with equal label root paths
    Label,
}

/// Two versions and how to match them.
#[derive(Args, Debug)]
pub struct VersionPair {
    #[arg(long)]
    pub old: PathBuf,
    #[arg(long)]
    pub new: PathBuf,
    /// Input format of both versions
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    /// Match file (`old<TAB>new` per line); overrides --matcher
    #[arg(long = "match")]
    pub match_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    pub matcher: Matcher,
    /// Attribute holding concept labels for the label matcher
    #[arg(long, default_value = "name")]
    pub label_attr: String,
}

#[derive(Args, Debug)]
pub struct EngineArgs {
    #[arg(long, value_enum, default_value_t)]
    pub agg: Agg,
    /// Attribute whose false/true flips count as obsolescence
    #[arg(long, default_value = "obsolete")]
    pub obsolete_attr: String,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the basic and compact diff of two versions
    Diff {
        #[command(flatten)]
        pair: VersionPair,
        #[command(flatten)]
        engine: EngineArgs,
        /// Compact diff output (stdout if absent)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the basic diff here
        #[arg(long)]
        basic_out: Option<PathBuf>,
    },
    /// Apply a diff to a version (compact diffs are expanded first)
    Migrate {
        #[arg(long)]
        old: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        diff: PathBuf,
        /// Migrated version output (stdout if absent)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report absent deletions and present additions as warnings
        #[arg(long)]
        lenient: bool,
    },
    /// Write the inverse of a diff
    Invert {
        #[arg(long)]
        diff: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Migrate forward and back, and compare with the original
    Roundtrip {
        #[command(flatten)]
        pair: VersionPair,
    },
    /// Per-kind counts of a diff, and the basic-versus-compact comparison
    Stats {
        #[arg(long)]
        diff: PathBuf,
        /// Basic diff to compare against
        #[arg(long)]
        basic: Option<PathBuf>,
    },
    /// Compute a match mapping
    Match {
        #[command(flatten)]
        pair: VersionPair,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a synthetic version pair with its match and edit script
    Synth {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        size: usize,
        #[arg(long)]
        edits: usize,
        #[arg(long)]
        out_dir: PathBuf,
        /// Allow edits that overlap on the same concepts
        #[arg(long)]
        dirty: bool,
    },
    /// Inspect the rule catalog
    Rules {
        #[command(subcommand)]
        command: RulesCommand,
    },
    /// Working repository of versions, matches and diffs
    Repo {
        #[arg(long, env = "EVOMAP_REPO", default_value = ".evomap")]
        repo: PathBuf,
        #[command(subcommand)]
        command: RepoCommand,
    },
}

#[derive(Subcommand)]
enum RulesCommand {
    /// Print every built-in rule in evaluation order
    List,
}

#[derive(Subcommand)]
pub enum RepoCommand {
    Init,
    /// Store a file under a name
    Put {
        file: PathBuf,
        #[arg(long)]
        name: String,
        /// Artifact kind; guessed from content if absent
        #[arg(long, value_parser = ["version", "match", "diff"])]
        kind: Option<String>,
        /// Add a new entry when the name already holds different content
        #[arg(long)]
        force_new_entry: bool,
    },
    /// Fetch the latest content stored under a name
    Get {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print name, kind, hash and size of every entry
    List,
}

/// Marks a failed roundtrip.
#[derive(Debug, thiserror::Error)]
#[error("roundtrip mismatch: {0}")]
pub struct RoundtripMismatch(pub String);

fn exit_code(err: &anyhow::Error) -> u8 {
    let is_match = |e: &(dyn std::error::Error + 'static)| {
        e.is::<MatchError>() || matches!(e.downcast_ref::<EngineError>(), Some(EngineError::InvalidMatch(_)))
    };
    if err.chain().any(is_match) {
        2
    } else if err.chain().any(|e| e.is::<RoundtripMismatch>()) {
        4
    } else if err.chain().any(|e| e.is::<MigrationError>()) {
        3
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Diff { pair, engine, out, basic_out } => commands::diff(&pair, &engine, out.as_deref(), basic_out.as_deref()),
        Command::Migrate { old, format, diff, out, lenient } => commands::migrate(&old, format, &diff, out.as_deref(), lenient),
        Command::Invert { diff, out } => commands::invert(&diff, out.as_deref()),
        Command::Roundtrip { pair } => commands::roundtrip(&pair),
        Command::Stats { diff, basic } => commands::stats(&diff, basic.as_deref()),
        Command::Match { pair, out } => commands::match_versions(&pair, out.as_deref()),
        Command::Synth { seed, size, edits, out_dir, dirty } => commands::synth(seed, size, edits, &out_dir, dirty),
        Command::Rules { command: RulesCommand::List } => commands::rules_list(),
        Command::Repo { repo, command } => commands::repo(&repo, command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
