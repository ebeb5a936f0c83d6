use clap::{Args, Parser, Subcommand, ValueEnum};
use hpfcc::bench::OutputFormat;
use hpfcc::search::{SearchParams, StableFactor};
use hpfcc::HeuristicKind;
use std::path::PathBuf;
use std::time::Duration;

#[derive(Debug, Parser)]
#[command(name = "hpfcc", version, about = "HP protein folding on the face-centred cubic lattice")]
pub struct Cli {
    /// Print progress details to stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fold one sequence and report the best conformation found.
    Solve(SolveArgs),
    /// Run seeded batches over an instance file and summarize them.
    Bench(BenchArgs),
    /// Exhaustively find the optimal energy of a short sequence.
    Enumerate(EnumerateArgs),
    /// Convert amino-acid FASTA records to HP records.
    Convert(ConvertArgs),
}

#[derive(Debug, Clone, Args)]
#[group(id = "input", required = true, multiple = false)]
pub struct Input {
    /// H/P sequence given directly (an amino-acid string with --convert).
    #[arg(long, group = "input")]
    pub seq: Option<String>,
    /// Instance file; pick the record with --name, or the first one.
    #[arg(long, group = "input")]
    pub instances: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Conversion {
    /// Treat sequences as amino-acid strings and classify them into H/P.
    #[arg(long)]
    pub convert: bool,
    /// Classification table (`<residue> <H|P>` per line) replacing the default.
    #[arg(long, value_name = "FILE")]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Heuristic {
    H1,
    H2,
    H3,
}

impl From<Heuristic> for HeuristicKind {
    fn from(h: Heuristic) -> Self {
        match h {
            Heuristic::H1 => HeuristicKind::Contacts,
            Heuristic::H2 => HeuristicKind::AllPairDistance,
            Heuristic::H3 => HeuristicKind::CentroidDistance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

fn parse_duration(s: &str) -> Result<Duration, String> {
    humantime::parse_duration(s).map_err(|e| e.to_string())
}

fn parse_factor(s: &str) -> Result<StableFactor, String> {
    s.parse().map_err(|e: hpfcc::search::ParamError| e.to_string())
}

#[derive(Debug, Clone, Args)]
#[command(next_help_heading = "Search parameters")]
pub struct ParamArgs {
    /// Initial segment size.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub segment_size: u64,
    /// Iterations without a new best before the segment grows.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_stable: u64,
    /// Growth factor of the stagnation threshold.
    #[arg(long, default_value = "1.2", value_parser = parse_factor)]
    pub stable_factor: StableFactor,
    /// Lower end of the tabu tenure range; tenure is drawn from [4, n/8] by default.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub tenure_min: u64,
    /// Divisor d of the upper tenure end n/d.
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
    pub tenure_divisor: u64,
    /// Largest contiguous window in single-segment mode.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_single_segment: u64,
    /// Length of each piece in multiple-segment mode.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub sub_segment: u64,
    /// Cap on the placements enumerated for one single window; larger windows are narrowed.
    #[arg(long, default_value_t = 20_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_single_neighborhood: u64,
    /// Cap on the placements enumerated for one multiple-segment selection.
    #[arg(long, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_multiple_neighborhood: u64,
    /// Iteration limit per run [default: 100000 unless --budget or --target is given].
    #[arg(long)]
    pub max_iters: Option<u64>,
    /// Wall-clock limit per run, e.g. 60s or 10m.
    #[arg(long, value_parser = parse_duration)]
    pub budget: Option<Duration>,
    /// Stop once this energy is reached.
    #[arg(long, allow_negative_numbers = true)]
    pub target: Option<i64>,
    /// Guide every iteration with one heuristic instead of drawing one.
    #[arg(long, value_enum)]
    pub pin_heuristic: Option<Heuristic>,
    /// Greedy single-residue iterations applied to the random start.
    #[arg(long, default_value_t = 0)]
    pub warmup: u64,
}

impl ParamArgs {
    pub fn to_params(&self, seed: u64) -> SearchParams {
        let defaults = SearchParams::default();
        let max_iterations = match (self.max_iters, self.budget, self.target) {
            (Some(m), _, _) => Some(m),
            (None, None, None) => defaults.max_iterations,
            _ => None,
        };
        SearchParams {
            initial_segment_size: self.segment_size as usize,
            initial_max_stable: self.max_stable,
            stable_factor: self.stable_factor,
            tenure_min: self.tenure_min,
            tenure_max_divisor: self.tenure_divisor,
            max_single_segment_size: self.max_single_segment as usize,
            multi_sub_segment_size: self.sub_segment as usize,
            max_single_neighborhood: self.max_single_neighborhood,
            max_multiple_neighborhood: self.max_multiple_neighborhood,
            max_iterations,
            wall_clock_budget: self.budget,
            rng_seed: seed,
            pinned_heuristic: self.pin_heuristic.map(Into::into),
            warmup_iterations: self.warmup,
            target_energy: self.target,
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: Input,
    /// Record name to take from the instance file.
    #[arg(long, requires = "instances")]
    pub name: Option<String>,
    #[command(flatten)]
    pub conversion: Conversion,
    /// Random seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for conformation.txt and trace.csv; without it the
    /// conformation is printed.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Instance file.
    #[arg(long)]
    pub instances: PathBuf,
    #[command(flatten)]
    pub conversion: Conversion,
    /// Independent runs per instance.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub runs: u64,
    /// Runs executed at once [default: available cores].
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub parallelism: Option<u64>,
    /// Run r uses seed seed-base + r.
    #[arg(long, default_value_t = 0)]
    pub seed_base: u64,
    /// Output directory.
    #[arg(long, default_value = "bench-out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Header tag holding the reference energy for R.I., e.g. LS-Mem.
    #[arg(long)]
    pub reference: Option<String>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// H/P sequence of at most 9 monomers.
    #[arg(long)]
    pub seq: String,
    /// Visit every walk instead of one per symmetry class.
    #[arg(long)]
    pub no_symmetry: bool,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    /// Amino-acid FASTA file.
    #[arg(long)]
    pub input: PathBuf,
    /// Output file [default: stdout].
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Classification table replacing the default.
    #[arg(long, value_name = "FILE")]
    pub table: Option<PathBuf>,
}
