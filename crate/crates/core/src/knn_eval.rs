//! kNN classification over document distances and the experiment harness:
//! repeated stratified 4:1 holdout, accuracy, average performing time and
//! summarization proportion.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Instant;

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pipeline::{Engine, PipelineMode};
use crate::summarizer::KnowledgeBlocks;
use crate::text::{segment_document, segment_text, unique_words, Document, SegmenterConfig};
use crate::wmd::{wmd_distance, NBow};

/// Documents that all carry a category label.
#[derive(Clone, Debug)]
pub struct LabeledCorpus {
    documents: Vec<Document>,
    labels: Vec<String>,
    label_ids: Vec<usize>,
}

impl LabeledCorpus {
    pub fn new(documents: Vec<Document>) -> Result<Self> {
        let mut names = BTreeSet::new();
        for doc in &documents {
            let label = doc.label.as_ref().ok_or_else(|| Error::InvalidDocument {
                id: doc.id.clone(),
                message: "missing label".into(),
            })?;
            names.insert(label.clone());
        }
        let labels: Vec<String> = names.into_iter().collect();
        let label_ids = documents
            .iter()
            .map(|d| {
                let label = d.label.as_deref().unwrap_or_default();
                labels.binary_search_by(|l| l.as_str().cmp(label)).unwrap_or(0)
            })
            .collect();
        Ok(LabeledCorpus {
            documents,
            labels,
            label_ids,
        })
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    /// Distinct labels, sorted.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Index into [`labels`](Self::labels) for every document.
    pub fn label_ids(&self) -> &[usize] {
        &self.label_ids
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }
}

/// Majority label among the `k` training documents nearest to `test`.
///
/// Equal distances are ordered by document index. When several labels tie on
/// votes, the one whose closest member ranks first wins, so a tie always goes
/// to the nearest neighbor carrying one of the tied labels.
pub fn knn_classify<L: Clone + Eq>(
    test: usize,
    distances: &Array2<f64>,
    train: &[usize],
    labels: &[L],
    k: usize,
) -> Result<L> {
    if k == 0 || k > train.len() {
        return Err(Error::KExceedsTraining {
            k,
            train: train.len(),
        });
    }
    let mut ranked: Vec<usize> = train.to_vec();
    ranked.sort_by(|&a, &b| {
        distances[[test, a]]
            .total_cmp(&distances[[test, b]])
            .then(a.cmp(&b))
    });
    ranked.truncate(k);

    // (label, votes, rank of first occurrence)
    let mut tally: Vec<(&L, usize, usize)> = Vec::new();
    for (rank, &doc) in ranked.iter().enumerate() {
        match tally.iter_mut().find(|(l, _, _)| **l == labels[doc]) {
            Some(entry) => entry.1 += 1,
            None => tally.push((&labels[doc], 1, rank)),
        }
    }
    let (label, _, _) = tally
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.2.cmp(&a.2)))
        .expect("k >= 1");
    Ok(label.clone())
}

/// Entry `(k, l)` counts documents of category `k` classified as `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub labels: Vec<String>,
    pub counts: Array2<usize>,
}

impl ConfusionMatrix {
    pub fn new(labels: Vec<String>) -> Self {
        let m = labels.len();
        ConfusionMatrix {
            labels,
            counts: Array2::zeros((m, m)),
        }
    }

    pub fn record(&mut self, actual: usize, predicted: usize) {
        self.counts[[actual, predicted]] += 1;
    }

    pub fn total(&self) -> usize {
        self.counts.sum()
    }

    pub fn trace(&self) -> usize {
        self.counts.diag().sum()
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        self.counts += &other.counts;
    }
}

pub fn accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::UndefinedMetric("accuracy of an empty confusion matrix".into()));
    }
    Ok(cm.trace() as f64 / total as f64)
}

/// Average unique words of the summaries over the average unique words of
/// the documents, both taken over `test`.
pub fn proportion(
    documents: &[Document],
    summaries: &[KnowledgeBlocks],
    test: &[usize],
    seg: &SegmenterConfig,
) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::UndefinedMetric("proportion over an empty test set".into()));
    }
    let mut summary_words = 0usize;
    let mut document_words = 0usize;
    for &i in test {
        let doc_tokens = segment_document(&documents[i], seg)?;
        let distinct = unique_words(&doc_tokens).len();
        if distinct == 0 {
            return Err(Error::UndefinedMetric(format!(
                "document `{}` has no words",
                documents[i].id
            )));
        }
        document_words += distinct;
        let summary_tokens = segment_text(&summaries[i].summary_text(), seg)?;
        summary_words += unique_words(&summary_tokens).len();
    }
    // the 1/|test| factors of both averages cancel
    Ok(summary_words as f64 / document_words as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    pub k: usize,
    /// Train : test proportion of every split.
    pub split_ratio: (usize, usize),
    pub repetitions: usize,
    pub seed: u64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            k: 5,
            split_ratio: (4, 1),
            repetitions: 5,
            seed: 0,
        }
    }
}

/// Stratified random split. Every label with at least two documents appears
/// in both parts. Returns sorted `(train, test)` indices.
pub fn stratified_split(
    label_ids: &[usize],
    ratio: (usize, usize),
    seed: u64,
) -> (Vec<usize>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = label_ids.iter().copied().max().map_or(0, |m| m + 1);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for class in 0..classes {
        let mut members: Vec<usize> = (0..label_ids.len())
            .filter(|&i| label_ids[i] == class)
            .collect();
        members.shuffle(&mut rng);
        let n = members.len();
        let wanted = (n * ratio.1 + (ratio.0 + ratio.1) / 2) / (ratio.0 + ratio.1);
        let n_test = if n < 2 { 0 } else { wanted.clamp(1, n - 1) };
        test.extend_from_slice(&members[..n_test]);
        train.extend_from_slice(&members[n_test..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}

/// Wall-clock seconds per stage, averaged over repetitions.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StageTimes {
    pub segmentation: f64,
    pub distance: f64,
    pub classification: f64,
}

impl StageTimes {
    /// Average performing time: the sum of the three stages.
    pub fn apt(&self) -> f64 {
        self.segmentation + self.distance + self.classification
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub mode: PipelineMode,
    pub documents: usize,
    pub k: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub accuracies: Vec<f64>,
    pub mean_accuracy: f64,
    /// Summarized mode only.
    pub proportion: Option<f64>,
    pub empty_summary_fallbacks: usize,
    /// Summed over all repetitions.
    pub confusion: ConfusionMatrix,
    pub times: StageTimes,
}

pub fn format_ratio(x: f64) -> String {
    format!("{x:.12}")
}

impl EvalReport {
    /// `key: value` lines followed by the confusion rows. Wall-clock fields
    /// all start with `time.`.
    pub fn to_text(&self) -> String {
        self.render(true)
    }

    /// The report without wall-clock fields; identical across reruns.
    pub fn deterministic_text(&self) -> String {
        self.render(false)
    }

    fn render(&self, timing: bool) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "mode: {}", self.mode.as_str());
        let _ = writeln!(out, "documents: {}", self.documents);
        let _ = writeln!(out, "categories: {}", self.confusion.labels.len());
        let _ = writeln!(out, "k: {}", self.k);
        let _ = writeln!(out, "repetitions: {}", self.repetitions);
        let _ = writeln!(out, "seed: {}", self.seed);
        for (i, acc) in self.accuracies.iter().enumerate() {
            let _ = writeln!(out, "accuracy.{i}: {}", format_ratio(*acc));
        }
        let _ = writeln!(out, "mean_accuracy: {}", format_ratio(self.mean_accuracy));
        match self.proportion {
            Some(p) => {
                let _ = writeln!(out, "proportion: {}", format_ratio(p));
            }
            None => out.push_str("proportion: n/a\n"),
        }
        let _ = writeln!(out, "empty_summary_fallbacks: {}", self.empty_summary_fallbacks);
        for (k, label) in self.confusion.labels.iter().enumerate() {
            let row: Vec<String> = self
                .confusion
                .counts
                .row(k)
                .iter()
                .map(usize::to_string)
                .collect();
            let _ = writeln!(out, "confusion[{label}]: {}", row.join(" "));
        }
        if timing {
            let t = &self.times;
            let _ = writeln!(out, "time.segmentation_seconds: {:.6}", t.segmentation);
            let _ = writeln!(out, "time.distance_seconds: {:.6}", t.distance);
            let _ = writeln!(out, "time.classification_seconds: {:.6}", t.classification);
            let _ = writeln!(out, "time.apt_seconds: {:.6}", t.apt());
        }
        out
    }
}

/// Runs `cfg.repetitions` seeded splits (seed + repetition index) of the
/// corpus through the requested pipeline and classifies every test document.
pub fn evaluate(
    corpus: &LabeledCorpus,
    engine: &Engine,
    cfg: &EvalConfig,
    mode: PipelineMode,
) -> Result<EvalReport> {
    if corpus.labels().len() < 2 {
        return Err(Error::InvalidConfig(format!(
            "evaluation needs at least two categories, found {}",
            corpus.labels().len()
        )));
    }
    if cfg.repetitions == 0 || cfg.split_ratio.0 == 0 || cfg.split_ratio.1 == 0 {
        return Err(Error::InvalidConfig(
            "repetitions and both split parts must be positive".into(),
        ));
    }
    let docs = corpus.documents();
    let n = docs.len();
    let mut accuracies = Vec::with_capacity(cfg.repetitions);
    let mut confusion = ConfusionMatrix::new(corpus.labels().to_vec());
    let mut times = StageTimes::default();
    let mut proportions = Vec::new();
    let mut fallbacks = 0;

    for rep in 0..cfg.repetitions {
        let (train, test) =
            stratified_split(corpus.label_ids(), cfg.split_ratio, cfg.seed + rep as u64);
        if cfg.k == 0 || cfg.k > train.len() {
            return Err(Error::KExceedsTraining {
                k: cfg.k,
                train: train.len(),
            });
        }

        let started = Instant::now();
        let representations = docs
            .iter()
            .map(|d| engine.represent(d, mode))
            .collect::<Result<Vec<_>>>()?;
        times.segmentation += started.elapsed().as_secs_f64();
        fallbacks = representations.iter().filter(|r| r.fallback).count();

        let started = Instant::now();
        let bags = representations
            .iter()
            .map(|r| engine.nbow(&r.tokens))
            .collect::<Result<Vec<NBow>>>()?;
        let mut distances = Array2::from_elem((n, n), f64::NAN);
        for &i in &test {
            for &j in &train {
                distances[[i, j]] = wmd_distance(&bags[i], &bags[j], &engine.embeddings)?;
            }
        }
        times.distance += started.elapsed().as_secs_f64();

        let started = Instant::now();
        let mut rep_confusion = ConfusionMatrix::new(corpus.labels().to_vec());
        for &i in &test {
            let predicted = knn_classify(i, &distances, &train, corpus.label_ids(), cfg.k)?;
            rep_confusion.record(corpus.label_ids()[i], predicted);
        }
        times.classification += started.elapsed().as_secs_f64();

        accuracies.push(accuracy(&rep_confusion)?);
        confusion.merge(&rep_confusion);
        if mode == PipelineMode::Summarized {
            let blocks: Vec<KnowledgeBlocks> = representations
                .into_iter()
                .map(|r| r.blocks.unwrap_or_default())
                .collect();
            proportions.push(proportion(docs, &blocks, &test, &engine.segmenter)?);
        }
    }

    let reps = cfg.repetitions as f64;
    times.segmentation /= reps;
    times.distance /= reps;
    times.classification /= reps;
    Ok(EvalReport {
        mode,
        documents: n,
        k: cfg.k,
        repetitions: cfg.repetitions,
        seed: cfg.seed,
        mean_accuracy: accuracies.iter().sum::<f64>() / reps,
        accuracies,
        proportion: (!proportions.is_empty())
            .then(|| proportions.iter().sum::<f64>() / proportions.len() as f64),
        empty_summary_fallbacks: fallbacks,
        confusion,
        times,
    })
}

/// Side-by-side view of a full-document and a summarized evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison<'a> {
    pub full: &'a EvalReport,
    pub summarized: &'a EvalReport,
}

impl Comparison<'_> {
    /// APT speedup of the summarized pipeline, `t1 / t2`.
    pub fn speedup(&self) -> f64 {
        self.full.times.apt() / self.summarized.times.apt()
    }

    pub fn to_text(&self) -> String {
        self.render(true)
    }

    pub fn deterministic_text(&self) -> String {
        self.render(false)
    }

    fn render(&self, timing: bool) -> String {
        let mut out = String::new();
        let (full, summ) = (self.full, self.summarized);
        let _ = writeln!(out, "accuracy.full: {}", format_ratio(full.mean_accuracy));
        let _ = writeln!(out, "accuracy.summary: {}", format_ratio(summ.mean_accuracy));
        let _ = writeln!(
            out,
            "accuracy.gain: {}",
            format_ratio(summ.mean_accuracy - full.mean_accuracy)
        );
        if let Some(p) = summ.proportion {
            let _ = writeln!(out, "proportion.summary: {}", format_ratio(p));
        }
        if timing {
            let _ = writeln!(out, "time.t1_full_apt_seconds: {:.6}", full.times.apt());
            let _ = writeln!(out, "time.t2_summary_apt_seconds: {:.6}", summ.times.apt());
            let _ = writeln!(out, "time.t1_over_t2: {:.3}", self.speedup());
            let _ = writeln!(out, "time.full_distance_seconds: {:.6}", full.times.distance);
            let _ = writeln!(out, "time.summary_distance_seconds: {:.6}", summ.times.distance);
        }
        out
    }
}
