//! Whitespace and dictionary longest-match segmentation with stop-word
//! removal.
//!
//! cargo run --example segment_text

use blockwmd::text::{remove_stopwords, segment, Dictionary, SegmenterConfig};

fn main() -> blockwmd::Result<()> {
    let english = SegmenterConfig::whitespace().with_stopwords(["the", "a", "of"]);
    let tokens = segment("the driver of a truck  ran the red light", &english)?;
    println!("tokens:    {:?}", tokens.as_slice());
    println!("filtered:  {:?}", remove_stopwords(&tokens, &english).as_slice());

    let dictionary: Dictionary = ["交通", "交通事故", "事故", "司机", "酒后驾驶"].into_iter().collect();
    let chinese = SegmenterConfig::longest_match(dictionary).with_stopwords(["的"]);
    let tokens = segment("司机酒后驾驶的交通事故", &chinese)?;
    println!("longest:   {:?}", tokens.as_slice());
    println!("filtered:  {:?}", remove_stopwords(&tokens, &chinese).as_slice());
    Ok(())
}
