//! Batch orchestration behind the `blockwmd` command: input validation,
//! corpus ingestion and the summarize / distance / evaluate /
//! gen-synthetic workflows, each writing into one output directory.

use std::collections::{BTreeMap, HashSet};
use std::fmt::{self, Write as _};
use std::path::{Path, PathBuf};

use crate::embedding::EmbeddingStore;
use crate::error::{Error, Result};
use crate::knn_eval::{evaluate, stratified_split, Comparison, EvalConfig, EvalReport, LabeledCorpus};
use crate::ontology::{merge_ontologies, CoreBlock, LeafConceptSets, Ontology};
use crate::rules::{apply_rules, classify_severity, CasualtyExtraction, CasualtyPatternSet, NumeralMap};
use crate::summarizer::{summarize, KnowledgeBlocks, MatchThreshold};
use crate::synthetic::{generate, SyntheticConfig};
use crate::text::{load_stopwords, segment_document, segment_text, Document, SegmenterConfig, TokenList};
use crate::wmd::{nbow, DistanceMatrix, NBow};

/// Which text represents a document when distances are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PipelineMode {
    FullDocument,
    Summarized,
}

impl PipelineMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PipelineMode::FullDocument => "full",
            PipelineMode::Summarized => "summary",
        }
    }
}

/// The `--mode` flag.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ModeSelection {
    Full,
    Summary,
    #[default]
    Both,
}

impl ModeSelection {
    pub fn modes(self) -> &'static [PipelineMode] {
        match self {
            ModeSelection::Full => &[PipelineMode::FullDocument],
            ModeSelection::Summary => &[PipelineMode::Summarized],
            ModeSelection::Both => &[PipelineMode::FullDocument, PipelineMode::Summarized],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ModeSelection::Full => "full",
            ModeSelection::Summary => "summary",
            ModeSelection::Both => "both",
        }
    }

    fn needs_summaries(self) -> bool {
        self != ModeSelection::Full
    }
}

impl std::str::FromStr for ModeSelection {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "full" => Ok(ModeSelection::Full),
            "summary" => Ok(ModeSelection::Summary),
            "both" => Ok(ModeSelection::Both),
            other => Err(format!("unknown mode `{other}` (expected full, summary or both)")),
        }
    }
}

/// Summary of one document: the knowledge blocks plus the casualty rules
/// applied to the objective-aspect block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DocumentSummary {
    pub blocks: KnowledgeBlocks,
    pub casualties: CasualtyExtraction,
    pub augmented_oa: String,
}

impl DocumentSummary {
    /// Non-empty blocks in oa, sa, jr order with the augmented oa text.
    pub fn text(&self) -> String {
        let mut parts = Vec::new();
        for block in CoreBlock::ALL {
            let text = match block {
                CoreBlock::ObjectiveAspect => self.augmented_oa.as_str(),
                _ => self.blocks.get(block).text.as_str(),
            };
            if !text.is_empty() {
                parts.push(text);
            }
        }
        parts.join("\n\n")
    }

    /// The summary file written by the `summarize` command.
    pub fn to_text(&self, id: &str) -> String {
        let mut out = format!("%id: {id}\n");
        let c = &self.casualties;
        let _ = writeln!(
            out,
            "%casualties: deaths={} injuries={} severity={}",
            c.deaths,
            c.injuries,
            classify_severity(c.deaths, c.injuries).description()
        );
        for block in CoreBlock::ALL {
            let b = self.blocks.get(block);
            let indices: Vec<String> = b.indices.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "\n[{}] paragraphs={}", block.tag().as_str(), indices.join(","));
            let text = match block {
                CoreBlock::ObjectiveAspect => self.augmented_oa.as_str(),
                _ => b.text.as_str(),
            };
            if !text.is_empty() {
                out.push_str(text);
                out.push('\n');
            }
        }
        out
    }
}

/// Segmented representation of a document under one pipeline mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pub tokens: TokenList,
    /// Knowledge blocks, summarized mode only.
    pub blocks: Option<KnowledgeBlocks>,
    /// Summarized mode found no block and fell back to the full document.
    pub fallback: bool,
}

/// Everything needed to turn documents into comparable distributions.
#[derive(Clone, Debug)]
pub struct Engine {
    pub leaf_sets: LeafConceptSets,
    pub threshold: MatchThreshold,
    pub segmenter: SegmenterConfig,
    pub embeddings: EmbeddingStore,
    pub patterns: CasualtyPatternSet,
}

impl Engine {
    pub fn summarize(&self, doc: &Document) -> Result<DocumentSummary> {
        let blocks = summarize(doc, &self.leaf_sets, self.threshold, &self.segmenter)?;
        let (augmented_oa, casualties) = apply_rules(&blocks.b_oa.text, &self.patterns)?;
        Ok(DocumentSummary {
            blocks,
            casualties,
            augmented_oa,
        })
    }

    pub fn represent(&self, doc: &Document, mode: PipelineMode) -> Result<Representation> {
        match mode {
            PipelineMode::FullDocument => Ok(Representation {
                tokens: segment_document(doc, &self.segmenter)?,
                blocks: None,
                fallback: false,
            }),
            PipelineMode::Summarized => {
                let summary = self.summarize(doc)?;
                let fallback = summary.blocks.is_empty();
                let tokens = if fallback {
                    segment_document(doc, &self.segmenter)?
                } else {
                    segment_text(&summary.text(), &self.segmenter)?
                };
                Ok(Representation {
                    tokens,
                    blocks: Some(summary.blocks),
                    fallback,
                })
            }
        }
    }

    pub fn nbow(&self, tokens: &TokenList) -> Result<NBow> {
        nbow(tokens, &self.embeddings, &self.segmenter)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Summarize,
    Distance,
    Evaluate,
    GenSynthetic,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Summarize => "summarize",
            Command::Distance => "distance",
            Command::Evaluate => "evaluate",
            Command::GenSynthetic => "gen-synthetic",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    /// Merged in order.
    pub ontologies: Vec<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    /// Built-in casualty patterns are used when absent.
    pub patterns: Option<PathBuf>,
    pub delta: f64,
    pub k: usize,
    pub seed: u64,
    pub repetitions: usize,
    pub mode: ModeSelection,
    pub out: PathBuf,
    /// Generator settings for `gen-synthetic`; its seed is replaced by `seed`.
    pub synthetic: SyntheticConfig,
}

impl RunConfig {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        RunConfig {
            corpus: None,
            ontologies: Vec::new(),
            embeddings: None,
            stopwords: None,
            patterns: None,
            delta: 0.5,
            k: 5,
            seed: 0,
            repetitions: 5,
            mode: ModeSelection::Both,
            out: out.into(),
            synthetic: SyntheticConfig::default(),
        }
    }

    fn to_text(&self, cmd: Command) -> String {
        let path = |p: &Option<PathBuf>| p.as_ref().map_or("-".to_string(), |p| p.display().to_string());
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", cmd.as_str());
        let _ = writeln!(out, "corpus: {}", path(&self.corpus));
        for o in &self.ontologies {
            let _ = writeln!(out, "ontology: {}", o.display());
        }
        let _ = writeln!(out, "embeddings: {}", path(&self.embeddings));
        let _ = writeln!(out, "stopwords: {}", path(&self.stopwords));
        let _ = writeln!(out, "patterns: {}", path(&self.patterns));
        let _ = writeln!(out, "delta: {}", self.delta);
        let _ = writeln!(out, "k: {}", self.k);
        let _ = writeln!(out, "seed: {}", self.seed);
        let _ = writeln!(out, "repetitions: {}", self.repetitions);
        let _ = writeln!(out, "mode: {}", self.mode.as_str());
        if cmd == Command::GenSynthetic {
            let s = &self.synthetic;
            let _ = writeln!(out, "synthetic.classes: {}", s.classes);
            let _ = writeln!(out, "synthetic.docs_per_class: {}", s.docs_per_class);
            let _ = writeln!(out, "synthetic.paragraphs: {}", s.paragraphs);
        }
        out
    }
}

/// Whether a failure happened while checking inputs or while computing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Validation,
    Runtime,
}

#[derive(Debug)]
pub struct RunError {
    pub stage: Stage,
    pub error: Error,
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self.stage {
            Stage::Validation => 2,
            Stage::Runtime => 3,
        }
    }
}

impl fmt::Display for RunError {
    /// `<validation|runtime>: <category>: <detail>` on a single line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stage = match self.stage {
            Stage::Validation => "validation",
            Stage::Runtime => "runtime",
        };
        let detail = self.error.to_string().replace('\n', " ");
        write!(f, "{stage}: {}: {detail}", self.error.kind())
    }
}

impl std::error::Error for RunError {}

fn validation(error: Error) -> RunError {
    RunError {
        stage: Stage::Validation,
        error,
    }
}

fn runtime(error: Error) -> RunError {
    RunError {
        stage: Stage::Runtime,
        error,
    }
}

/// One parsed corpus file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub file_name: String,
    pub document: Document,
}

/// Reads every non-hidden regular file of `dir` in lexicographic filename
/// order. Document ids default to the file stem and must be unique.
pub fn ingest_documents(dir: &Path, require_labels: bool) -> Result<Vec<CorpusEntry>> {
    let corpus_err = |path: &Path, message: String| Error::Corpus {
        path: path.to_path_buf(),
        message,
    };
    let listing = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = BTreeMap::new();
    for entry in listing {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        let path = entry.path();
        if name.starts_with('.') || !path.is_file() {
            continue;
        }
        files.insert(name, path);
    }
    if files.is_empty() {
        return Err(corpus_err(dir, "no document files".into()));
    }
    let mut seen = HashSet::new();
    let mut entries = Vec::with_capacity(files.len());
    for (name, path) in files {
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let stem = Path::new(&name)
            .file_stem()
            .map_or(name.clone(), |s| s.to_string_lossy().into_owned());
        let document =
            Document::parse(&text, &stem).map_err(|e| corpus_err(&path, e.to_string()))?;
        if require_labels && document.label.is_none() {
            return Err(corpus_err(&path, "missing `%label:` header".into()));
        }
        if !seen.insert(document.id.clone()) {
            return Err(corpus_err(&path, format!("duplicate id `{}`", document.id)));
        }
        entries.push(CorpusEntry {
            file_name: name,
            document,
        });
    }
    Ok(entries)
}

/// Labeled corpus of `dir`; every document needs a `%label:` header.
pub fn ingest_corpus(dir: &Path) -> Result<LabeledCorpus> {
    let docs = ingest_documents(dir, true)?;
    LabeledCorpus::new(docs.into_iter().map(|e| e.document).collect())
}

/// Loads and merges the ontologies in order.
pub fn load_merged_ontology(paths: &[PathBuf]) -> Result<Ontology> {
    let mut merged: Option<Ontology> = None;
    for path in paths {
        let next = Ontology::from_path(path)?;
        merged = Some(match merged {
            None => next,
            Some(acc) => merge_ontologies(&acc, &next)?,
        });
    }
    merged.ok_or_else(|| Error::InvalidConfig("no ontology given".into()))
}

fn require<'a>(path: &'a Option<PathBuf>, flag: &str, cmd: Command) -> Result<&'a Path> {
    path.as_deref()
        .ok_or_else(|| Error::InvalidConfig(format!("`{}` requires --{flag}", cmd.as_str())))
}

/// Inputs parsed and checked before any output is written.
struct Validated {
    entries: Vec<CorpusEntry>,
    engine: Engine,
}

fn validate(cmd: Command, cfg: &RunConfig) -> Result<Validated> {
    let threshold = MatchThreshold::new(cfg.delta)?;
    let corpus_dir = require(&cfg.corpus, "corpus", cmd)?;
    let needs_ontology = cmd == Command::Summarize || cfg.mode.needs_summaries();
    let needs_embeddings = cmd != Command::Summarize;
    if needs_ontology && cfg.ontologies.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "`{}` in mode {} requires --ontology",
            cmd.as_str(),
            cfg.mode.as_str()
        )));
    }
    let entries = ingest_documents(corpus_dir, cmd == Command::Evaluate)?;

    let leaf_sets = if cfg.ontologies.is_empty() {
        LeafConceptSets::default()
    } else {
        load_merged_ontology(&cfg.ontologies)?.leaf_concepts()
    };
    if needs_ontology && leaf_sets.is_empty() {
        return Err(Error::NoLeafConcepts);
    }
    let embeddings = if needs_embeddings {
        EmbeddingStore::from_path(require(&cfg.embeddings, "embeddings", cmd)?)?
    } else {
        match &cfg.embeddings {
            Some(p) => EmbeddingStore::from_path(p)?,
            None => EmbeddingStore::new(1),
        }
    };
    let mut segmenter = SegmenterConfig::whitespace();
    if let Some(p) = &cfg.stopwords {
        segmenter.stopwords = load_stopwords(p)?;
    }
    let patterns = match &cfg.patterns {
        Some(p) => CasualtyPatternSet::from_path(p, NumeralMap::default())?,
        None => CasualtyPatternSet::default(),
    };

    if cmd == Command::Evaluate {
        if cfg.repetitions == 0 {
            return Err(Error::InvalidConfig("--repetitions must be positive".into()));
        }
        let docs: Vec<Document> = entries.iter().map(|e| e.document.clone()).collect();
        let corpus = LabeledCorpus::new(docs)?;
        if corpus.labels().len() < 2 {
            return Err(Error::InvalidConfig(format!(
                "evaluation needs at least two categories, found {}",
                corpus.labels().len()
            )));
        }
        let ratio = EvalConfig::default().split_ratio;
        let (train, _) = stratified_split(corpus.label_ids(), ratio, cfg.seed);
        if cfg.k == 0 || cfg.k > train.len() {
            return Err(Error::KExceedsTraining {
                k: cfg.k,
                train: train.len(),
            });
        }
    }

    Ok(Validated {
        entries,
        engine: Engine {
            leaf_sets,
            threshold,
            segmenter,
            embeddings,
            patterns,
        },
    })
}

/// Files written by a successful run, relative to the output directory.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunOutput {
    pub files: Vec<PathBuf>,
}

struct Writer<'a> {
    root: &'a Path,
    written: Vec<PathBuf>,
}

impl Writer<'_> {
    fn write(&mut self, relative: impl AsRef<Path>, text: &str) -> Result<()> {
        let relative = relative.as_ref();
        let path = self.root.join(relative);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        self.written.push(relative.to_path_buf());
        Ok(())
    }
}

/// Runs one command. Inputs are validated completely before the output
/// directory is touched; a validation failure leaves no files behind.
pub fn run(cmd: Command, cfg: &RunConfig) -> std::result::Result<RunOutput, RunError> {
    if cmd == Command::GenSynthetic {
        let synthetic = SyntheticConfig {
            seed: cfg.seed,
            ..cfg.synthetic.clone()
        };
        let corpus = generate(&synthetic).map_err(validation)?;
        let mut writer = Writer {
            root: &cfg.out,
            written: Vec::new(),
        };
        writer.write("config.txt", &cfg.to_text(cmd)).map_err(runtime)?;
        corpus.write_to(&cfg.out).map_err(runtime)?;
        return Ok(RunOutput {
            files: writer.written,
        });
    }

    let Validated { entries, engine } = validate(cmd, cfg).map_err(validation)?;
    let mut artifacts: Vec<(PathBuf, String)> = Vec::new();
    match cmd {
        Command::Summarize => {
            for entry in &entries {
                let summary = engine.summarize(&entry.document).map_err(runtime)?;
                let stem = Path::new(&entry.file_name)
                    .file_stem()
                    .map_or(entry.file_name.clone(), |s| s.to_string_lossy().into_owned());
                artifacts.push((
                    Path::new("summaries").join(format!("{stem}.txt")),
                    summary.to_text(&entry.document.id),
                ));
            }
        }
        Command::Distance => {
            for &mode in cfg.mode.modes() {
                let bags = entries
                    .iter()
                    .map(|e| engine.nbow(&engine.represent(&e.document, mode)?.tokens))
                    .collect::<Result<Vec<_>>>()
                    .map_err(runtime)?;
                let matrix = DistanceMatrix::compute(&bags, &engine.embeddings).map_err(runtime)?;
                artifacts.push((format!("distances_{}.txt", mode.as_str()).into(), matrix.to_text()));
            }
            let ids: Vec<&str> = entries.iter().map(|e| e.document.id.as_str()).collect();
            artifacts.push(("documents.txt".into(), ids.join("\n") + "\n"));
        }
        Command::Evaluate => {
            let corpus = LabeledCorpus::new(entries.into_iter().map(|e| e.document).collect())
                .map_err(validation)?;
            let eval_cfg = EvalConfig {
                k: cfg.k,
                repetitions: cfg.repetitions,
                seed: cfg.seed,
                ..EvalConfig::default()
            };
            let mut reports: Vec<EvalReport> = Vec::new();
            for &mode in cfg.mode.modes() {
                let report = evaluate(&corpus, &engine, &eval_cfg, mode).map_err(runtime)?;
                artifacts.push((format!("report_{}.txt", mode.as_str()).into(), report.to_text()));
                reports.push(report);
            }
            if let [full, summarized] = &reports[..] {
                let comparison = Comparison { full, summarized };
                artifacts.push(("comparison.txt".into(), comparison.to_text()));
            }
        }
        Command::GenSynthetic => unreachable!("handled above"),
    }

    let mut writer = Writer {
        root: &cfg.out,
        written: Vec::new(),
    };
    writer.write("config.txt", &cfg.to_text(cmd)).map_err(runtime)?;
    for (path, text) in &artifacts {
        writer.write(path, text).map_err(runtime)?;
    }
    Ok(RunOutput {
        files: writer.written,
    })
}
