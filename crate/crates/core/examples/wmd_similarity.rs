//! Word Mover's Distance between short sentences over a toy embedding,
//! with the centroid lower bound for comparison.
//!
//! cargo run --example wmd_similarity

use blockwmd::embedding::EmbeddingStore;
use blockwmd::text::{segment, SegmenterConfig};
use blockwmd::wmd::{centroid_lower_bound, nbow, wmd_distance, wmd_plan};

fn main() -> blockwmd::Result<()> {
    let mut store = EmbeddingStore::new(2);
    for (word, v) in [
        ("driver", [1.0, 0.0]),
        ("motorist", [1.1, 0.1]),
        ("crashed", [0.0, 1.0]),
        ("collided", [0.1, 1.1]),
        ("truck", [2.0, 2.0]),
        ("lorry", [2.1, 1.9]),
        ("court", [-3.0, 0.5]),
        ("ruled", [-2.5, -1.0]),
    ] {
        store.insert(word, &v);
    }
    let seg = SegmenterConfig::whitespace().with_stopwords(["the", "a", "into"]);
    let sentences = [
        "the driver crashed into a truck",
        "a motorist collided with the lorry",
        "the court ruled",
    ];
    let docs = sentences
        .iter()
        .map(|s| nbow(&segment(s, &seg)?, &store, &seg))
        .collect::<blockwmd::Result<Vec<_>>>()?;

    for i in 0..docs.len() {
        for j in i + 1..docs.len() {
            println!(
                "{:?} vs {:?}: wmd={:.4} centroid_bound={:.4}",
                sentences[i],
                sentences[j],
                wmd_distance(&docs[i], &docs[j], &store)?,
                centroid_lower_bound(&docs[i], &docs[j], &store)?,
            );
        }
    }
    let plan = wmd_plan(&docs[0], &docs[1], &store)?;
    println!("words {:?} -> {:?}\n{:.3}", docs[0].words(), docs[1].words(), plan.flow);
    Ok(())
}
