//! `radreward` command-line scorer.
//!
//! Exit codes: 0 success, 1 I/O or runtime failure, 2 alignment error,
//! 3 parse error, 4 usage error.

mod commands;
mod error;
mod input;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use radreward::rewards::{RelationScope, Variant};

use crate::error::Result;

#[derive(Parser, Debug)]
#[command(name = "radreward", version, about = "Factual rewards and metrics for radiology reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Pair {
    /// Hypothesis file.
    #[arg(long)]
    pub hyp: PathBuf,
    /// Reference file.
    #[arg(long = "ref")]
    pub reference: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct Output {
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include one row per example, in input order.
    #[arg(long)]
    pub per_example: bool,
    /// Worker threads for per-example scoring (0: one per CPU).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Bleu4,
    Rougel,
    Ciderd,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Bleu4 => "bleu4",
            Metric::Rougel => "rougel",
            Metric::Ciderd => "ciderd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    Outgoing,
    Incident,
}

impl From<Scope> for RelationScope {
    fn from(s: Scope) -> Self {
        match s {
            Scope::Outgoing => RelationScope::Outgoing,
            Scope::Incident => RelationScope::Incident,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Graph rewards of hypothesis annotations against references, paired by report id.
    ScoreRg {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_delimiter = ',', default_value = "e,er,er_bar", value_parser = parse_variant)]
        variants: Vec<Variant>,
        /// Which relations set the ER flag.
        #[arg(long, value_enum, default_value_t = Scope::Outgoing)]
        relation_scope: Scope,
        #[command(flatten)]
        output: Output,
    },
    /// BLEU-4, ROUGE-L and CIDEr-D of plain-text reports, paired by line.
    ScoreNlg {
        #[command(flatten)]
        pair: Pair,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "bleu4,rougel,ciderd")]
        metrics: Vec<Metric>,
        #[command(flatten)]
        output: Output,
    },
    /// Clinical-label F1 of label CSVs, paired by report id.
    ChexbertF1 {
        #[command(flatten)]
        pair: Pair,
        /// `headline` (five observations), `all` (fourteen) or a comma-separated list of names.
        #[arg(long, default_value = "headline")]
        classes: String,
        #[command(flatten)]
        output: Output,
    },
    /// Entity-set F1 of entity JSONL files, paired by report id.
    EntityF1 {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        output: Output,
    },
    /// Self-critical training on the bundled toy task; writes the learning curve CSV.
    ScstDemo {
        /// TOML config; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Write the curve here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Graphviz DOT of annotation graphs.
    ExportDot {
        /// Annotation JSON object or JSONL corpus.
        input: PathBuf,
        /// Only the report with this id.
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entity and relation counts per label.
    Stats {
        /// Annotation JSON objects or JSONL corpora.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
}

fn parse_variant(s: &str) -> std::result::Result<Variant, String> {
    s.parse()
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::ScoreRg { pair, variants, relation_scope, output } => {
            commands::rg::run(&pair, &variants, relation_scope.into(), &output)
        }
        Command::ScoreNlg { pair, metrics, output } => commands::nlg::run(&pair, &metrics, &output),
        Command::ChexbertF1 { pair, classes, output } => commands::factual::run_chexbert(&pair, &classes, &output),
        Command::EntityF1 { pair, output } => commands::factual::run_entity(&pair, &output),
        Command::ScstDemo { config, seed, out } => commands::scst::run(config.as_deref(), seed, out.as_deref()),
        Command::ExportDot { input, id, out } => commands::graph::export_dot(&input, id.as_deref(), out.as_deref()),
        Command::Stats { inputs, output } => commands::graph::stats(&inputs, &output),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("radreward: {e}");
        std::process::exit(e.exit_code());
    }
}
