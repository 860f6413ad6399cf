use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    // ontology files
    #[error("line {line}: malformed ontology line: {message}")]
    MalformedOntology { line: usize, message: String },
    #[error("line {line}: duplicate concept id `{id}`")]
    DuplicateConcept { line: usize, id: String },
    #[error("line {line}: concept `{id}` names unknown parent `{parent}`")]
    DanglingParent {
        line: usize,
        id: String,
        parent: String,
    },
    #[error("line {line}: cycle detected through concept `{id}`")]
    OntologyCycle { line: usize, id: String },
    #[error("line {line}: unknown block tag `{tag}`")]
    UnknownBlockTag { line: usize, tag: String },
    #[error("merge conflict for `{label}`: {existing} vs {incoming}")]
    MergeConflict {
        label: String,
        existing: String,
        incoming: String,
    },
    #[error("merge would create a cycle through `{label}`")]
    MergeCycle { label: String },

    // text and summarization
    #[error("dictionary segmentation requires a dictionary")]
    MissingDictionary,
    #[error("invalid document `{id}`: {message}")]
    InvalidDocument { id: String, message: String },
    #[error("normalized edit distance is undefined for two empty strings")]
    UndefinedInput,
    #[error("match threshold must lie in [0, 1], got {0}")]
    InvalidThreshold(f64),
    #[error("no leaf concepts for any knowledge block")]
    NoLeafConcepts,

    // casualty rules
    #[error("cannot parse numeral `{0}`")]
    Numeral(String),
    #[error("invalid casualty pattern `{pattern}`: {message}")]
    InvalidPattern { pattern: String, message: String },
    #[error("line {line}: malformed pattern line: {message}")]
    MalformedPatternLine { line: usize, message: String },

    // embeddings
    #[error("line {line}: malformed embedding header: {message}")]
    EmbeddingHeader { line: usize, message: String },
    #[error("line {line}: expected {expected} components, found {found}")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: non-numeric component `{token}`")]
    NonNumeric { line: usize, token: String },
    #[error("line {line}: duplicate word `{word}`")]
    DuplicateWord { line: usize, word: String },
    #[error("header declares {expected} words, found {found}")]
    VocabCount { expected: usize, found: usize },
    #[error("no vector for word `{0}`")]
    MissingVector(String),

    // transport
    #[error("document has no in-vocabulary words after filtering")]
    EmptyDistribution,
    #[error("marginals do not sum to 1 (source {source_sum}, target {target_sum})")]
    InfeasibleMarginals { source_sum: f64, target_sum: f64 },
    #[error("invalid transport input: {0}")]
    InvalidTransport(String),

    // evaluation
    #[error("k = {k} exceeds training set size {train}")]
    KExceedsTraining { k: usize, train: usize },
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),
    #[error("invalid evaluation config: {0}")]
    InvalidConfig(String),

    // corpus and files
    #[error("{path}: {message}")]
    Corpus { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Short dotted category used in machine-readable CLI error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MalformedOntology { .. } => "ontology.malformed",
            Error::DuplicateConcept { .. } => "ontology.duplicate_id",
            Error::DanglingParent { .. } => "ontology.dangling_parent",
            Error::OntologyCycle { .. } => "ontology.cycle",
            Error::UnknownBlockTag { .. } => "ontology.unknown_tag",
            Error::MergeConflict { .. } => "ontology.merge_conflict",
            Error::MergeCycle { .. } => "ontology.merge_cycle",
            Error::MissingDictionary => "text.missing_dictionary",
            Error::InvalidDocument { .. } => "text.invalid_document",
            Error::UndefinedInput => "summarizer.undefined_input",
            Error::InvalidThreshold(_) => "summarizer.invalid_threshold",
            Error::NoLeafConcepts => "summarizer.no_leaf_concepts",
            Error::Numeral(_) => "rules.numeral",
            Error::InvalidPattern { .. } => "rules.invalid_pattern",
            Error::MalformedPatternLine { .. } => "rules.malformed",
            Error::EmbeddingHeader { .. } => "embedding.header",
            Error::DimensionMismatch { .. } => "embedding.dimension",
            Error::NonNumeric { .. } => "embedding.non_numeric",
            Error::DuplicateWord { .. } => "embedding.duplicate_word",
            Error::VocabCount { .. } => "embedding.vocab_count",
            Error::MissingVector(_) => "embedding.missing_vector",
            Error::EmptyDistribution => "wmd.empty_distribution",
            Error::InfeasibleMarginals { .. } => "wmd.infeasible_marginals",
            Error::InvalidTransport(_) => "wmd.invalid_input",
            Error::KExceedsTraining { .. } => "eval.k_exceeds_training",
            Error::UndefinedMetric(_) => "eval.undefined_metric",
            Error::InvalidConfig(_) => "eval.invalid_config",
            Error::Corpus { .. } => "corpus",
            Error::Io { .. } => "io",
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
