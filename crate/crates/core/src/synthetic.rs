//! Seeded synthetic corpora with planted class structure.
//!
//! Every class owns a cluster in embedding space and a private vocabulary of
//! concept words for each core block. A document places those words in
//! three randomly chosen paragraphs (one per block) and pads every paragraph
//! with shared background words whose vectors carry no class signal.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::embedding::EmbeddingStore;
use crate::error::{Error, Result};
use crate::ontology::{BlockTag, Concept, CoreBlock, Ontology};
use crate::rules::{CasualtyPatternSet, SeverityLevel};
use crate::summarizer::normalized_lev;
use crate::text::Document;

pub const STOPWORDS: [&str; 12] = [
    "the", "of", "and", "was", "in", "to", "a", "on", "caused", "deaths", "death", "injured",
];

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticConfig {
    pub seed: u64,
    pub classes: usize,
    pub docs_per_class: usize,
    /// Paragraphs per document; at least three.
    pub paragraphs: usize,
    /// Background words in every paragraph.
    pub words_per_paragraph: usize,
    /// Size of each class's concept vocabulary per block.
    pub concepts_per_class_block: usize,
    /// Concept words written into each block paragraph.
    pub concept_tokens_per_block: usize,
    pub background_vocab: usize,
    pub dim: usize,
    /// Standard deviation of concept vectors around their class center.
    pub cluster_spread: f64,
    /// Adds a casualty phrase to the objective-aspect paragraph, with a
    /// death count whose severity level is class index mod 3.
    pub casualties: bool,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            seed: 0,
            classes: 2,
            docs_per_class: 50,
            paragraphs: 10,
            words_per_paragraph: 4,
            concepts_per_class_block: 6,
            concept_tokens_per_block: 3,
            background_vocab: 400,
            dim: 16,
            cluster_spread: 0.3,
            casualties: true,
        }
    }
}

impl SyntheticConfig {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.classes < 2 || self.docs_per_class == 0 {
            return bad("need at least two classes and one document per class");
        }
        if self.paragraphs < 3 {
            return bad("documents need at least three paragraphs");
        }
        if self.concepts_per_class_block == 0 || self.concept_tokens_per_block == 0 {
            return bad("concept vocabulary and tokens per block must be positive");
        }
        if self.dim == 0 || !(self.cluster_spread >= 0.0 && self.cluster_spread.is_finite()) {
            return bad("dimension must be positive and spread finite and non-negative");
        }
        if self.words_per_paragraph > 0 && self.background_vocab == 0 {
            return bad("background words requested with an empty background vocabulary");
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SyntheticCorpus {
    pub documents: Vec<Document>,
    pub embeddings: EmbeddingStore,
    pub ontology: Ontology,
    pub stopwords: Vec<String>,
    pub patterns: CasualtyPatternSet,
    /// `concepts[class][block]` lists the class's concept words per core block.
    pub concepts: Vec<[Vec<String>; 3]>,
}

pub fn class_label(class: usize) -> String {
    format!("class_{class}")
}

fn unit_gaussian(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    normalize(v)
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    v
}

fn random_word(rng: &mut ChaCha8Rng, min: usize, max: usize) -> String {
    let len = rng.random_range(min..=max);
    (0..len).map(|_| rng.random_range(b'a'..=b'z') as char).collect()
}

/// Deaths producing the given severity level.
fn deaths_for(level: SeverityLevel, rng: &mut ChaCha8Rng) -> u64 {
    match level {
        SeverityLevel::General => 0,
        SeverityLevel::Serious => rng.random_range(1..=2),
        SeverityLevel::ExtraordinarilySerious => rng.random_range(3..=9),
    }
}

pub fn generate(cfg: &SyntheticConfig) -> Result<SyntheticCorpus> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut taken: HashSet<String> = STOPWORDS.iter().map(|s| s.to_string()).collect();

    // Concept words sit at normalized edit distance above the default match
    // threshold from every other word, so only the planted tokens match.
    let mut concept_words: Vec<String> = Vec::new();
    let mut concepts: Vec<[Vec<String>; 3]> = Vec::with_capacity(cfg.classes);
    for _ in 0..cfg.classes {
        let mut per_block: [Vec<String>; 3] = Default::default();
        for words in per_block.iter_mut() {
            while words.len() < cfg.concepts_per_class_block {
                let w = random_word(&mut rng, 6, 8);
                let far = taken
                    .iter()
                    .all(|t| normalized_lev(&w, t).map_or(false, |d| d > 0.5));
                if far {
                    taken.insert(w.clone());
                    concept_words.push(w.clone());
                    words.push(w);
                }
            }
        }
        concepts.push(per_block);
    }
    let mut background: Vec<String> = Vec::with_capacity(cfg.background_vocab);
    while background.len() < cfg.background_vocab {
        let w = random_word(&mut rng, 4, 8);
        if taken.contains(&w) {
            continue;
        }
        let far = concept_words
            .iter()
            .all(|c| normalized_lev(&w, c).map_or(false, |d| d > 0.5));
        if far {
            taken.insert(w.clone());
            background.push(w);
        }
    }

    let mut embeddings = EmbeddingStore::new(cfg.dim);
    for per_block in &concepts {
        let center = unit_gaussian(&mut rng, cfg.dim);
        for word in per_block.iter().flatten() {
            let v: Vec<f64> = center
                .iter()
                .map(|c| c + cfg.cluster_spread * rng.sample::<f64, _>(StandardNormal))
                .collect();
            embeddings.insert(word.as_str(), &normalize(v));
        }
    }
    for word in &background {
        embeddings.insert(word.as_str(), &unit_gaussian(&mut rng, cfg.dim));
    }
    for level in SeverityLevel::ALL {
        embeddings.insert(level.description(), &unit_gaussian(&mut rng, cfg.dim));
    }

    let ontology = build_ontology(&concepts)?;

    let mut documents = Vec::with_capacity(cfg.classes * cfg.docs_per_class);
    for index in 0..cfg.classes * cfg.docs_per_class {
        let class = index % cfg.classes;
        let mut slots: Vec<usize> = (0..cfg.paragraphs).collect();
        slots.shuffle(&mut rng);
        let mut paragraphs = Vec::with_capacity(cfg.paragraphs);
        for p in 0..cfg.paragraphs {
            let mut words: Vec<String> = (0..cfg.words_per_paragraph)
                .map(|_| background.choose(&mut rng).expect("non-empty").clone())
                .collect();
            if let Some(block) = slots[..3].iter().position(|&s| s == p) {
                let vocabulary = &concepts[class][block];
                for _ in 0..cfg.concept_tokens_per_block {
                    words.push(vocabulary.choose(&mut rng).expect("non-empty").clone());
                }
            }
            words.shuffle(&mut rng);
            words.insert(0, STOPWORDS[rng.random_range(0..8)].to_string());
            let mut paragraph = words.join(" ");
            if cfg.casualties && slots[0] == p {
                let deaths = deaths_for(SeverityLevel::ALL[class % 3], &mut rng);
                let injuries = rng.random_range(0..=9);
                let _ = write!(paragraph, " caused {deaths} deaths and injured {injuries}");
            }
            paragraphs.push(paragraph);
        }
        documents.push(Document::new(
            format!("doc_{index:04}"),
            Some(class_label(class)),
            paragraphs,
        )?);
    }

    Ok(SyntheticCorpus {
        documents,
        embeddings,
        ontology,
        stopwords: STOPWORDS.iter().map(|s| s.to_string()).collect(),
        patterns: CasualtyPatternSet::default(),
        concepts,
    })
}

/// A top-level node with one tagged child per core block, per-class
/// intermediate nodes and the concept words as leaves, plus an untagged
/// branch whose leaves are never matched.
fn build_ontology(concepts: &[[Vec<String>; 3]]) -> Result<Ontology> {
    let mut nodes = vec![Concept::new("doc", "judgment document", None, Some(BlockTag::Other))];
    for (b, block) in CoreBlock::ALL.into_iter().enumerate() {
        let short = block.short_name();
        nodes.push(Concept::new(
            short,
            block.tag().as_str().replace('_', " "),
            Some("doc"),
            Some(block.tag()),
        ));
        for (class, per_block) in concepts.iter().enumerate() {
            let group = format!("{short}_{class}");
            nodes.push(Concept::new(
                group.as_str(),
                format!("{} {short} group", class_label(class)),
                Some(short),
                None,
            ));
            for (i, word) in per_block[b].iter().enumerate() {
                nodes.push(Concept::new(
                    format!("{group}_{i}"),
                    word.as_str(),
                    Some(group.as_str()),
                    None,
                ));
            }
        }
    }
    nodes.push(Concept::new("misc", "other facts", Some("doc"), Some(BlockTag::Other)));
    nodes.push(Concept::new("court", "court name", Some("misc"), None));
    Ontology::from_concepts(nodes)
}

impl SyntheticCorpus {
    /// Writes `corpus/doc_XXXX.txt`, `embeddings.txt`, `ontology.tsv`,
    /// `stopwords.txt` and `patterns.tsv` under `dir`.
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        let corpus = dir.join("corpus");
        std::fs::create_dir_all(&corpus).map_err(|e| Error::io(&corpus, e))?;
        let write = |path: std::path::PathBuf, text: String| {
            std::fs::write(&path, text).map_err(|e| Error::io(&path, e))
        };
        for doc in &self.documents {
            write(corpus.join(format!("{}.txt", doc.id)), doc.to_text())?;
        }
        write(dir.join("embeddings.txt"), self.embeddings.to_text())?;
        write(dir.join("ontology.tsv"), self.ontology.to_text())?;
        write(dir.join("stopwords.txt"), self.stopwords.join("\n") + "\n")?;
        write(dir.join("patterns.tsv"), self.patterns.to_text())?;
        Ok(())
    }
}
