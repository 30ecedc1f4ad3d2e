use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "arrovian", version, about = "Arrovian social welfare functions on countable societies")]
pub struct Cli {
    /// Print the JSON schema of the verb's output (all verbs if none given).
    #[arg(long, global = true)]
    pub schema: bool,

    /// Worker threads for splittable searches.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weak orders on a set of alternatives.
    #[command(subcommand)]
    Orders(OrdersCmd),
    /// Societies, profiles and measurability.
    #[command(subcommand)]
    Society(SocietyCmd),
    /// Social welfare functions.
    #[command(subcommand)]
    Swf(SwfCmd),
    /// Decisive-coalition ultrafilters.
    #[command(subcommand)]
    Ks(KsCmd),
    /// Exhaustive search for Arrovian table SWFs.
    #[command(subcommand, alias = "arrowcheck")]
    Arrow(ArrowCmd),
    /// The Fréchet SWF on the finite–cofinite society.
    #[command(subcommand)]
    Fishburn(FishburnCmd),
    /// The range gadget of an enumeration.
    Reversal(ReversalArgs),
    /// Deterministic run of the property suite.
    Selftest,
}

impl Command {
    pub fn verb(&self) -> &'static str {
        match self {
            Command::Orders(_) => "orders",
            Command::Society(_) => "society",
            Command::Swf(_) => "swf",
            Command::Ks(_) => "ks",
            Command::Arrow(_) => "arrow",
            Command::Fishburn(_) => "fishburn",
            Command::Reversal(_) => "reversal",
            Command::Selftest => "selftest",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum OrdersCmd {
    /// Enumerate every weak order on `{0..alts}`.
    Enum {
        #[arg(long, default_value_t = 3)]
        alts: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SocietyKind {
    Finite,
    FiniteCofinite,
    Gadget,
}

#[derive(Clone, Debug, Args)]
pub struct SocietyArgs {
    #[arg(long, value_enum, default_value_t = SocietyKind::FiniteCofinite)]
    pub kind: SocietyKind,
    /// Voters of a finite society.
    #[arg(long, default_value_t = 3)]
    pub voters: u32,
    /// Alternatives `{0..alts}`.
    #[arg(long, default_value_t = 3)]
    pub alts: u32,
    /// Enumeration table (JSON array of naturals) for a gadget society.
    #[arg(long)]
    pub h: Option<PathBuf>,
    /// Bundled toy enumerator for a gadget society.
    #[arg(long, conflicts_with = "h")]
    pub toy: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum SocietyCmd {
    /// Describe a society.
    Build(SocietyArgs),
    /// Index of a quasi-partition profile.
    Embed {
        #[command(flatten)]
        society: SocietyArgs,
        /// Order pattern for each cell, then one for everyone else, e.g. "0 < 1 < *".
        #[arg(long = "pattern", required = true)]
        patterns: Vec<String>,
        /// Cell as `set:1,2`, `cofinite:1,2`, `gen:N`, `mask:M` or `index:N`.
        #[arg(long = "cell", required = true)]
        cells: Vec<String>,
    },
    /// Coalition weakly preferring `x` to `y` in a profile.
    Mu {
        #[command(flatten)]
        society: SocietyArgs,
        #[arg(long)]
        profile_index: String,
        #[arg(long)]
        x: u32,
        #[arg(long)]
        y: u32,
        /// Stage for undecided generators.
        #[arg(long, default_value_t = 1000)]
        stage: u64,
        /// Members listed below this voter.
        #[arg(long, default_value_t = 20)]
        list_below: u64,
    },
    /// A voter's order in a profile.
    Eval {
        #[command(flatten)]
        society: SocietyArgs,
        #[arg(long)]
        profile_index: String,
        #[arg(long)]
        voter: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum SwfCmd {
    /// Social order of a profile.
    Eval {
        #[command(flatten)]
        society: SocietyArgs,
        /// `dictator:D`, `principal:D`, `frechet`, `frechet:STAGE` or `table:FILE`.
        #[arg(long)]
        provenance: String,
        #[arg(long)]
        profile_index: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum KsCmd {
    /// Extract the ultrafilter of decisive coalitions.
    Extract {
        #[command(flatten)]
        society: SocietyArgs,
        #[arg(long)]
        provenance: String,
        /// Voters whose atoms and co-atoms are reported on infinite societies.
        #[arg(long, default_value_t = 10)]
        report_below: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DomainArg {
    Linear,
    Weak,
}

#[derive(Debug, Subcommand)]
pub enum ArrowCmd {
    /// Enumerate and classify every survivor.
    Search {
        #[arg(long, default_value_t = 2)]
        voters: u32,
        #[arg(long, default_value_t = 3)]
        alts: u32,
        #[arg(long, value_enum, default_value_t = DomainArg::Linear)]
        domain: DomainArg,
        /// Prune witnesses kept in the report.
        #[arg(long, default_value_t = 16)]
        log_cap: usize,
        /// Cross-check each survivor with extraction.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        verify: bool,
    },
}

#[derive(Clone, Debug, Args)]
pub struct FishburnArgs {
    /// Largest tuple size for simultaneous overruling.
    #[arg(long, default_value_t = 3)]
    pub k: usize,
    /// Every voter below this gets an overruling witness.
    #[arg(long, default_value_t = 50)]
    pub bound: u64,
    /// Sampled independence probe pairs (and as many unanimity probes).
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    /// Cofinite-majority profiles.
    #[arg(long, default_value_t = 100)]
    pub cofinite: usize,
    /// Sampled voter tuples.
    #[arg(long, default_value_t = 20)]
    pub tuples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum FishburnCmd {
    /// Axiom probes and non-dictatoriality witnesses.
    Demo(FishburnArgs),
}

#[derive(Clone, Debug, Args)]
pub struct ReversalArgs {
    /// Enumeration table (JSON array of naturals).
    #[arg(long)]
    pub h: Option<PathBuf>,
    /// Bundled toy enumerator instead of a table.
    #[arg(long, conflicts_with = "h")]
    pub toy: Option<u64>,
    /// Query `n`; repeatable.
    #[arg(long = "n")]
    pub n: Vec<u64>,
    /// Query every `n` below this as well.
    #[arg(long)]
    pub below: Option<u64>,
    #[arg(long, default_value_t = 100)]
    pub stage_bound: u64,
    /// Also write the report to this file.
    #[arg(long)]
    pub emit: Option<PathBuf>,
}
