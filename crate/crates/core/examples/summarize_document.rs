//! Extractive knowledge-block summary of one judgment document.
//!
//! cargo run --example summarize_document -- [delta]

use blockwmd::ontology::{CoreBlock, Ontology};
use blockwmd::summarizer::{summarize, MatchThreshold};
use blockwmd::text::{Document, SegmenterConfig};

const ONTOLOGY: &str = "\
oa\tobjective aspect\t-\tobjective_aspect
drunk\tdrunk\toa\t-
highway\thighway\toa\t-
sa\tsubjective aspect\t-\tsubjective_aspect
negligence\tnegligence\tsa\t-
jr\tjudgment result\t-\tjudgment_result
detention\tdetention\tjr\t-
fine\tfine\tjr\t-
";

const DOCUMENT: &str = "\
%id: case-17
%label: traffic

The court heard the case in open session.

The defendant was drunk and drove on the highway at night.

The defendant showed negligence and ignored warnings from drunken passengers.

The court orders detention for six months and a fine.
";

fn main() -> blockwmd::Result<()> {
    let delta = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.5);
    let sets = Ontology::parse(ONTOLOGY)?.leaf_concepts();
    let doc = Document::parse(DOCUMENT, "case")?;
    let blocks = summarize(&doc, &sets, MatchThreshold::new(delta)?, &SegmenterConfig::whitespace())?;
    for block in CoreBlock::ALL {
        let b = blocks.get(block);
        println!("[{}] counts={:?} selected={:?}", block.short_name(), b.counts, b.indices);
        if !b.is_empty() {
            println!("  {}", b.text.replace('\n', "\n  "));
        }
    }
    Ok(())
}
