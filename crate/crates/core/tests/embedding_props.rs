use proptest::prelude::*;

use blockwmd::embedding::{load_embeddings, EmbeddingStore};

fn store() -> impl Strategy<Value = EmbeddingStore> {
    prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 3), 3..8).prop_map(|vs| {
        let mut s = EmbeddingStore::new(3);
        for (i, v) in vs.iter().enumerate() {
            s.insert(format!("w{i}"), v);
        }
        s
    })
}

proptest! {
    #[test]
    fn travel_cost_is_a_metric(s in store()) {
        let words = s.words().to_vec();
        for a in &words {
            for b in &words {
                let ab = s.travel_cost(a, b).unwrap();
                prop_assert!(ab >= 0.0);
                prop_assert_eq!(ab, s.travel_cost(b, a).unwrap());
                if a != b && s.lookup(a) != s.lookup(b) {
                    prop_assert!(ab > 0.0);
                }
                for c in &words {
                    let bound = ab + s.travel_cost(b, c).unwrap();
                    let ac = s.travel_cost(a, c).unwrap();
                    prop_assert!(ac <= bound + 1e-9 * bound.max(1.0));
                }
            }
            prop_assert_eq!(s.travel_cost(a, a).unwrap(), 0.0);
        }
    }

    #[test]
    fn text_round_trip(s in store()) {
        let back = load_embeddings(s.to_text().as_bytes()).unwrap();
        prop_assert_eq!(back.words(), s.words());
        for w in s.words() {
            prop_assert_eq!(back.lookup(w), s.lookup(w));
        }
    }
}
