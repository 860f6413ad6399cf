//! Full-document versus summarized kNN classification on a synthetic corpus.
//!
//! cargo run --release --example knn_evaluation -- [docs_per_class] [seed]

use blockwmd::knn_eval::{evaluate, Comparison, EvalConfig, LabeledCorpus};
use blockwmd::pipeline::{Engine, PipelineMode};
use blockwmd::summarizer::MatchThreshold;
use blockwmd::synthetic::{generate, SyntheticConfig};
use blockwmd::text::SegmenterConfig;

fn main() -> blockwmd::Result<()> {
    let mut args = std::env::args().skip(1);
    let docs_per_class = args.next().and_then(|a| a.parse().ok()).unwrap_or(100);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(7);

    let synthetic = generate(&SyntheticConfig {
        seed,
        docs_per_class,
        ..SyntheticConfig::default()
    })?;
    let engine = Engine {
        leaf_sets: synthetic.ontology.leaf_concepts(),
        threshold: MatchThreshold::default(),
        segmenter: SegmenterConfig::whitespace().with_stopwords(synthetic.stopwords.clone()),
        embeddings: synthetic.embeddings.clone(),
        patterns: synthetic.patterns.clone(),
    };
    let corpus = LabeledCorpus::new(synthetic.documents)?;
    let cfg = EvalConfig {
        seed,
        ..EvalConfig::default()
    };

    let full = evaluate(&corpus, &engine, &cfg, PipelineMode::FullDocument)?;
    let summarized = evaluate(&corpus, &engine, &cfg, PipelineMode::Summarized)?;
    print!("{}", full.to_text());
    println!();
    print!("{}", summarized.to_text());
    println!();
    print!("{}", Comparison { full: &full, summarized: &summarized }.to_text());
    Ok(())
}
