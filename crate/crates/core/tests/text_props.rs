use proptest::prelude::*;

use blockwmd::text::{remove_stopwords, segment, Dictionary, SegmenterConfig};

fn dictionary_config(words: &[String]) -> SegmenterConfig {
    SegmenterConfig::longest_match(words.iter().cloned().collect::<Dictionary>())
}

proptest! {
    #[test]
    fn segmentation_is_deterministic(text in "[abc 交通事故]{0,30}", words in prop::collection::vec("[abc交通事故]{1,4}", 0..8)) {
        let cfg = dictionary_config(&words);
        prop_assert_eq!(segment(&text, &cfg).unwrap(), segment(&text, &cfg).unwrap());
        let ws = SegmenterConfig::whitespace();
        prop_assert_eq!(segment(&text, &ws).unwrap(), segment(&text, &ws).unwrap());
    }

    #[test]
    fn longest_match_emits_dictionary_words(text in "[abc 交通事故]{0,30}", words in prop::collection::vec("[abc交通事故]{1,4}", 0..8)) {
        let cfg = dictionary_config(&words);
        let tokens = segment(&text, &cfg).unwrap();
        for t in tokens.iter() {
            prop_assert!(t.chars().count() == 1 || words.contains(t), "{t} not in dictionary");
        }
        // nothing but whitespace is dropped
        let kept: String = tokens.iter().map(String::as_str).collect();
        let expected: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        prop_assert_eq!(kept, expected);
    }

    #[test]
    fn stopword_removal_is_idempotent(text in "[abc ]{0,40}", stops in prop::collection::vec("[abc]{1,2}", 0..4)) {
        let cfg = SegmenterConfig::whitespace().with_stopwords(stops);
        let tokens = segment(&text, &cfg).unwrap();
        let once = remove_stopwords(&tokens, &cfg);
        prop_assert_eq!(remove_stopwords(&once, &cfg), once.clone());
        prop_assert!(once.iter().all(|t| !cfg.is_stopword(t)));
    }
}
