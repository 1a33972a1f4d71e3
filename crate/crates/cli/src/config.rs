//! Command-line surface.

use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use comednet::algebra::CompareMode;
use comednet::atc::AtcLevel;
use comednet::community::DEFAULT_SEED;
use comednet::metrics::Measure;

#[derive(Debug, Parser)]
#[command(name = "comednet", version, about = "Build and analyse drug co-medication networks")]
pub struct RunConfig {
    /// Worker threads for shortest-path sweeps (defaults to all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dispensing records -> co-medication edge list.
    Build(BuildArgs),
    /// Network-level topology summary.
    Stats(StatsArgs),
    /// Per-node centrality scores.
    Centrality(CentralityArgs),
    /// Within-group density ratios by ATC level.
    Assortativity(AssortativityArgs),
    /// Louvain modules.
    Communities(CommunitiesArgs),
    /// Edge-wise comparison of two networks.
    Compare(CompareArgs),
    /// Keep only edges also present in an interaction catalog.
    Combine(CombineArgs),
    /// Ego network of one node.
    Ego(EgoArgs),
    /// Write the network as Pajek, GEXF or explorer JSON.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Pajek,
    Gexf,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EgoFormat {
    Csv,
    Json,
    Pajek,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Anatomical,
    Therapeutic,
    Pharmacological,
}

impl From<Level> for AtcLevel {
    fn from(l: Level) -> AtcLevel {
        match l {
            Level::Anatomical => AtcLevel::Anatomical,
            Level::Therapeutic => AtcLevel::Therapeutic,
            Level::Pharmacological => AtcLevel::Pharmacological,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Ratio,
    Difference,
}

impl From<Mode> for CompareMode {
    fn from(m: Mode) -> CompareMode {
        match m {
            Mode::Ratio => CompareMode::Ratio,
            Mode::Difference => CompareMode::Difference,
        }
    }
}

fn parse_filter(raw: &str) -> Result<(String, String), String> {
    raw.split_once('=')
        .map(|(k, v)| (k.trim().to_owned(), v.trim().to_owned()))
        .filter(|(k, _)| !k.is_empty())
        .ok_or_else(|| format!("expected column=value, got `{raw}`"))
}

fn parse_date(raw: &str) -> Result<NaiveDate, String> {
    NaiveDate::parse_from_str(raw, "%Y-%m-%d").map_err(|e| format!("expected YYYY-MM-DD: {e}"))
}

fn parse_delimiter(raw: &str) -> Result<u8, String> {
    match raw {
        "\\t" | "tab" => Ok(b'\t'),
        s if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        s => Err(format!("delimiter must be one ASCII character, got `{s}`")),
    }
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Dispensing file with header `patient_id,atc,name,date,ddd`.
    #[arg(long)]
    pub input: PathBuf,
    /// Date on which co-medication is assessed.
    #[arg(long, value_parser = parse_date)]
    pub index_date: NaiveDate,
    /// Edge-list CSV to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Optional node table (`id,label`) including drugs without co-medication.
    #[arg(long)]
    pub nodes_out: Option<PathBuf>,
    #[arg(long, default_value_t = 14)]
    pub gap_days: u32,
    #[arg(long, default_value_t = 1.2)]
    pub adherence_factor: f64,
    /// ATC codes to drop, one per line.
    #[arg(long)]
    pub exclusions: Option<PathBuf>,
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    pub delimiter: u8,
    /// Skip malformed rows instead of aborting.
    #[arg(long)]
    pub lenient: bool,
    /// Keep only records whose column equals the value (repeatable).
    #[arg(long = "filter", value_parser = parse_filter)]
    pub filters: Vec<(String, String)>,
}

#[derive(Debug, Args, Clone)]
pub struct NetworkInput {
    /// Edge-list CSV with header `drug_a,drug_b,weight`.
    #[arg(long)]
    pub edges: PathBuf,
    /// Node table adding labels and isolated nodes.
    #[arg(long)]
    pub nodes: Option<PathBuf>,
    #[arg(long)]
    pub directed: bool,
    /// Treat every edge as weight 1.
    #[arg(long)]
    pub unweighted: bool,
}

#[derive(Debug, Args, Clone)]
pub struct ReportOutput {
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    /// Output file (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub input: NetworkInput,
    #[command(flatten)]
    pub output: ReportOutput,
}

#[derive(Debug, Args)]
pub struct CentralityArgs {
    #[command(flatten)]
    pub input: NetworkInput,
    #[command(flatten)]
    pub output: ReportOutput,
    /// Comma-separated subset of degree,betweenness,closeness,eigenvector.
    #[arg(long, value_delimiter = ',', default_value = "degree,betweenness,closeness,eigenvector")]
    pub measures: Vec<Measure>,
    /// Path lengths as 1/weight instead of hop counts.
    #[arg(long)]
    pub weighted_paths: bool,
    /// Eigenvector centrality on the weighted adjacency.
    #[arg(long)]
    pub weighted_eigenvector: bool,
    #[arg(long)]
    pub normalized_betweenness: bool,
    /// Report only the k best nodes per measure.
    #[arg(long)]
    pub top_k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AssortativityArgs {
    #[command(flatten)]
    pub input: NetworkInput,
    #[command(flatten)]
    pub output: ReportOutput,
    #[arg(long, value_enum, default_value_t = Level::Anatomical)]
    pub level: Level,
    /// Reference density (defaults to the network's own density).
    #[arg(long)]
    pub reference_density: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CommunitiesArgs {
    #[command(flatten)]
    pub input: NetworkInput,
    #[command(flatten)]
    pub output: ReportOutput,
    #[arg(long, default_value_t = 1.0)]
    pub resolution: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// CSV `node,module` to write.
    #[arg(long)]
    pub partition_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// First network (numerator of ratios).
    #[arg(long)]
    pub a: PathBuf,
    /// Second network.
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Ratio)]
    pub mode: Mode,
    #[arg(long, default_value_t = 10)]
    pub top_k: usize,
    #[command(flatten)]
    pub output: ReportOutput,
}

#[derive(Debug, Args)]
pub struct CombineArgs {
    #[command(flatten)]
    pub input: NetworkInput,
    /// Interaction catalog `atc_a,atc_b[,severity]`.
    #[arg(long)]
    pub ddi: PathBuf,
    /// Edge-list CSV to write.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EgoArgs {
    #[command(flatten)]
    pub input: NetworkInput,
    #[arg(long)]
    pub node: String,
    #[arg(long, value_enum, default_value_t = EgoFormat::Csv)]
    pub format: EgoFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub input: NetworkInput,
    #[arg(long, value_enum)]
    pub format: ExportFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Attach centrality scores (JSON only).
    #[arg(long)]
    pub with_measures: bool,
    /// Attach Louvain modules (JSON only).
    #[arg(long)]
    pub with_communities: bool,
    #[arg(long, default_value_t = 1.0)]
    pub resolution: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}
