use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use blockwmd::pipeline::{run, Command, ModeSelection, RunConfig};
use blockwmd::synthetic::SyntheticConfig;

#[derive(Parser)]
#[command(name = "blockwmd", version, about = "Ontology-guided document summarization and WMD classification")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write the knowledge-block summary of every corpus document.
    Summarize(Inputs),
    /// Write the pairwise document distance matrix per mode.
    Distance(Inputs),
    /// Run the repeated holdout kNN evaluation per mode.
    Evaluate(Inputs),
    /// Write a seeded synthetic corpus with embeddings, ontology, stop words and patterns.
    GenSynthetic(Synthetic),
}

#[derive(clap::Args)]
struct Inputs {
    /// Directory of corpus documents.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Ontology file; repeat to merge several in order.
    #[arg(long)]
    ontology: Vec<PathBuf>,
    /// Word vectors in word2vec text format.
    #[arg(long)]
    embeddings: Option<PathBuf>,
    /// Stop-word list, one per line.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Casualty patterns; built-in patterns when omitted.
    #[arg(long)]
    patterns: Option<PathBuf>,
    /// Normalized edit-distance threshold for concept matching.
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    repetitions: usize,
    #[arg(long, default_value = "both")]
    mode: ModeSelection,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct Synthetic {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    classes: usize,
    #[arg(long, default_value_t = 50)]
    docs_per_class: usize,
    #[arg(long, default_value_t = 10)]
    paragraphs: usize,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, cfg) = match cli.command {
        Cmd::Summarize(a) => (Command::Summarize, a.into_config()),
        Cmd::Distance(a) => (Command::Distance, a.into_config()),
        Cmd::Evaluate(a) => (Command::Evaluate, a.into_config()),
        Cmd::GenSynthetic(s) => {
            let mut cfg = RunConfig::new(s.out);
            cfg.seed = s.seed;
            cfg.synthetic = SyntheticConfig {
                classes: s.classes,
                docs_per_class: s.docs_per_class,
                paragraphs: s.paragraphs,
                ..SyntheticConfig::default()
            };
            (Command::GenSynthetic, cfg)
        }
    };
    match run(cmd, &cfg) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

impl Inputs {
    fn into_config(self) -> RunConfig {
        let mut cfg = RunConfig::new(self.out);
        cfg.corpus = self.corpus;
        cfg.ontologies = self.ontology;
        cfg.embeddings = self.embeddings;
        cfg.stopwords = self.stopwords;
        cfg.patterns = self.patterns;
        cfg.delta = self.delta;
        cfg.k = self.k;
        cfg.seed = self.seed;
        cfg.repetitions = self.repetitions;
        cfg.mode = self.mode;
        cfg
    }
}
