use std::collections::BTreeSet;

use proptest::prelude::*;

use blockwmd::ontology::{merge_ontologies, BlockTag, Concept, CoreBlock, Ontology};
use blockwmd::Error;

const LABELS: [&str; 6] = ["bus", "road", "drunk", "speed", "intent", "fine"];
const TAGS: [Option<BlockTag>; 5] = [
    None,
    Some(BlockTag::ObjectiveAspect),
    Some(BlockTag::SubjectiveAspect),
    Some(BlockTag::JudgmentResult),
    Some(BlockTag::Other),
];

/// Random forest: node `k` hangs under an earlier node or is a root; only
/// roots carry tags.
fn forest(prefix: &'static str) -> impl Strategy<Value = Ontology> {
    prop::collection::vec((any::<prop::sample::Index>(), 0..LABELS.len(), 0..TAGS.len()), 1..12)
        .prop_map(move |nodes| {
            let concepts = nodes.iter().enumerate().map(|(k, (parent, label, tag))| {
                // one slot beyond the earlier nodes means "root"
                let p = parent.index(k + 1);
                let parent_id = (p < k).then(|| format!("{prefix}{p}"));
                Concept::new(
                    format!("{prefix}{k}"),
                    LABELS[*label],
                    parent_id.as_deref(),
                    if parent_id.is_none() { TAGS[*tag] } else { None },
                )
            });
            Ontology::from_concepts(concepts).expect("generated forests are valid")
        })
}

fn keys(o: &Ontology) -> BTreeSet<(String, Option<BlockTag>)> {
    o.concepts()
        .map(|c| (c.label.clone(), o.resolved_tag(&c.id)))
        .collect()
}

fn leaf_and_internal(o: &Ontology, block: CoreBlock) -> (BTreeSet<String>, BTreeSet<String>) {
    let (mut leaves, mut internal) = (BTreeSet::new(), BTreeSet::new());
    for c in o.concepts() {
        if !o.is_leaf(&c.id) {
            internal.insert(c.label.clone());
        } else if o.resolved_tag(&c.id) == Some(block.tag()) {
            leaves.insert(c.label.clone());
        }
    }
    (leaves, internal)
}

proptest! {
    #[test]
    fn leaf_sets_hold_only_childless_labels(o in forest("a")) {
        let sets = o.leaf_concepts();
        for block in CoreBlock::ALL {
            for label in sets.get(block) {
                // some concept with this label under this block has no children
                let witness = o.concepts().any(|c| {
                    &c.label == label
                        && o.children(&c.id).next().is_none()
                        && o.resolved_tag(&c.id) == Some(block.tag())
                });
                prop_assert!(witness, "{label} has no childless witness");
            }
        }
    }

    #[test]
    fn text_format_round_trips(o in forest("a")) {
        prop_assert_eq!(Ontology::parse(&o.to_text()).unwrap(), o);
    }

    #[test]
    fn merge_size_and_leaves(a in forest("a"), b in forest("b")) {
        match merge_ontologies(&a, &b) {
            Ok(m) => {
                prop_assert!(m.len() <= a.len() + b.len());
                let shared = keys(&a).intersection(&keys(&b)).count();
                prop_assert_eq!(m.len() == a.len() + b.len(), shared == 0);
                let sets = m.leaf_concepts();
                for block in CoreBlock::ALL {
                    let (leaves_a, internal_a) = leaf_and_internal(&a, block);
                    let (leaves_b, internal_b) = leaf_and_internal(&b, block);
                    for label in leaves_a.intersection(&leaves_b) {
                        if !internal_a.contains(label) && !internal_b.contains(label) {
                            prop_assert!(sets.get(block).contains(label));
                        }
                    }
                }
                // the merge is itself a valid ontology
                prop_assert_eq!(Ontology::parse(&m.to_text()).unwrap(), m);
            }
            Err(e) => prop_assert!(
                matches!(e, Error::MergeConflict { .. } | Error::MergeCycle { .. }),
                "unexpected error {e}"
            ),
        }
    }

    #[test]
    fn merging_with_itself_adds_nothing(a in forest("a")) {
        let m = merge_ontologies(&a, &a).unwrap();
        prop_assert_eq!(m.len(), a.len());
        prop_assert_eq!(m.leaf_concepts(), a.leaf_concepts());
    }
}
