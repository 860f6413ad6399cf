//! Casualty extraction and severity augmentation with the built-in
//! patterns.
//!
//! cargo run --example casualty_rules -- "text to scan"

use blockwmd::rules::{apply_rules, CasualtyPatternSet};

fn main() -> blockwmd::Result<()> {
    let patterns = CasualtyPatternSet::default();
    let inputs: Vec<String> = match std::env::args().nth(1) {
        Some(text) => vec![text],
        None => [
            "The collision caused 2 deaths and injured 4 people.",
            "The crash killed twenty three passengers.",
            "事故造成三人死亡五人受伤。",
            "Nobody was hurt.",
        ]
        .map(String::from)
        .to_vec(),
    };
    for text in &inputs {
        let (augmented, ext) = apply_rules(text, &patterns)?;
        println!("{text}");
        println!("  deaths={} injuries={} spans={}", ext.deaths, ext.injuries, ext.matched_spans.len());
        println!("  -> {augmented}");
    }
    Ok(())
}
