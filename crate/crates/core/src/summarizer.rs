//! Knowledge-block summarization.
//!
//! For each core block, every paragraph is scored by how many of its
//! segmented words approximately match a leaf concept of that block, and the
//! block keeps exactly the paragraphs that attain the maximum score.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ontology::{CoreBlock, LeafConceptSets};
use crate::text::{segment, Document, SegmenterConfig, TokenList};

/// Character-level Levenshtein distance.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    levenshtein_chars(&a, &b)
}

fn levenshtein_chars(a: &[char], b: &[char]) -> usize {
    if a.is_empty() || b.is_empty() {
        return a.len().max(b.len());
    }
    // row[j] holds lev(i, j) for the current prefix length i of `a`
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, &ca) in a.iter().enumerate() {
        let mut diagonal = row[0];
        row[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let substitution = diagonal + usize::from(ca != cb);
            diagonal = row[j + 1];
            row[j + 1] = (row[j + 1] + 1).min(row[j] + 1).min(substitution);
        }
    }
    row[b.len()]
}

/// Edit distance divided by the longer length, in characters.
pub fn normalized_lev(w: &str, t: &str) -> Result<f64> {
    let longest = w.chars().count().max(t.chars().count());
    if longest == 0 {
        return Err(Error::UndefinedInput);
    }
    Ok(levenshtein(w, t) as f64 / longest as f64)
}

/// Upper bound on the normalized edit distance for a word to count as a
/// concept match.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct MatchThreshold(f64);

impl MatchThreshold {
    pub fn new(delta: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&delta) {
            Ok(MatchThreshold(delta))
        } else {
            Err(Error::InvalidThreshold(delta))
        }
    }

    pub fn delta(self) -> f64 {
        self.0
    }
}

impl Default for MatchThreshold {
    fn default() -> Self {
        MatchThreshold(0.5)
    }
}

/// Concept labels pre-split into characters for repeated matching.
struct ConceptIndex {
    labels: Vec<Vec<char>>,
}

impl ConceptIndex {
    fn new(concepts: &BTreeSet<String>) -> Self {
        ConceptIndex {
            labels: concepts.iter().map(|c| c.chars().collect()).collect(),
        }
    }

    fn matches(&self, word: &str, thr: MatchThreshold) -> bool {
        let w: Vec<char> = word.chars().collect();
        self.labels.iter().any(|t| {
            let longest = w.len().max(t.len());
            if longest == 0 {
                return false;
            }
            // lev >= length difference, so skip pairs that cannot pass
            let floor = w.len().abs_diff(t.len()) as f64 / longest as f64;
            floor <= thr.0 && levenshtein_chars(&w, t) as f64 / longest as f64 <= thr.0
        })
    }
}

/// Number of token occurrences that match at least one concept.
pub fn match_count(tokens: &TokenList, concepts: &BTreeSet<String>, thr: MatchThreshold) -> usize {
    let index = ConceptIndex::new(concepts);
    tokens.iter().filter(|w| index.matches(w, thr)).count()
}

/// Paragraphs selected for one knowledge block.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Block {
    /// Indices into the source document's paragraphs, ascending.
    pub indices: Vec<usize>,
    /// Selected paragraphs joined by blank lines.
    pub text: String,
    /// Match count of every paragraph, in document order.
    pub counts: Vec<usize>,
}

impl Block {
    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KnowledgeBlocks {
    pub b_oa: Block,
    pub b_sa: Block,
    pub b_jr: Block,
}

impl KnowledgeBlocks {
    pub fn get(&self, block: CoreBlock) -> &Block {
        match block {
            CoreBlock::ObjectiveAspect => &self.b_oa,
            CoreBlock::SubjectiveAspect => &self.b_sa,
            CoreBlock::JudgmentResult => &self.b_jr,
        }
    }

    fn get_mut(&mut self, block: CoreBlock) -> &mut Block {
        match block {
            CoreBlock::ObjectiveAspect => &mut self.b_oa,
            CoreBlock::SubjectiveAspect => &mut self.b_sa,
            CoreBlock::JudgmentResult => &mut self.b_jr,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.b_oa.is_empty() && self.b_sa.is_empty() && self.b_jr.is_empty()
    }

    /// Non-empty block texts in oa, sa, jr order, joined by blank lines.
    pub fn summary_text(&self) -> String {
        CoreBlock::ALL
            .iter()
            .map(|&b| self.get(b).text.as_str())
            .filter(|t| !t.is_empty())
            .collect::<Vec<_>>()
            .join("\n\n")
    }
}

pub fn summarize(
    doc: &Document,
    sets: &LeafConceptSets,
    thr: MatchThreshold,
    seg: &SegmenterConfig,
) -> Result<KnowledgeBlocks> {
    if sets.is_empty() {
        return Err(Error::NoLeafConcepts);
    }
    let segmented = doc
        .paragraphs()
        .iter()
        .map(|p| segment(p, seg))
        .collect::<Result<Vec<_>>>()?;

    let mut blocks = KnowledgeBlocks::default();
    for block in CoreBlock::ALL {
        let concepts = sets.get(block);
        if concepts.is_empty() {
            continue;
        }
        let index = ConceptIndex::new(concepts);
        let counts: Vec<usize> = segmented
            .iter()
            .map(|tokens| tokens.iter().filter(|w| index.matches(w, thr)).count())
            .collect();
        let best = counts.iter().copied().max().unwrap_or(0);
        let indices: Vec<usize> = if best == 0 {
            Vec::new()
        } else {
            (0..counts.len()).filter(|&i| counts[i] == best).collect()
        };
        let text = indices
            .iter()
            .map(|&i| doc.paragraphs()[i].as_str())
            .collect::<Vec<_>>()
            .join("\n\n");
        *blocks.get_mut(block) = Block {
            indices,
            text,
            counts,
        };
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(words: &[&str]) -> BTreeSet<String> {
        words.iter().map(|w| w.to_string()).collect()
    }

    fn toks(words: &[&str]) -> TokenList {
        words.iter().copied().collect()
    }

    #[test]
    fn levenshtein_basics() {
        assert_eq!(levenshtein("abc", "abc"), 0);
        assert_eq!(levenshtein("", "abc"), 3);
        assert_eq!(levenshtein("abc", ""), 3);
        assert_eq!(levenshtein("kitten", "sitting"), 3);
        // counted in characters, not bytes
        assert_eq!(levenshtein("醉酒驾驶", "醉驾"), 2);
    }

    #[test]
    fn normalized_values() {
        assert_eq!(normalized_lev("abc", "abc").unwrap(), 0.0);
        assert_eq!(normalized_lev("ab", "cd").unwrap(), 1.0);
        assert_eq!(normalized_lev("abcd", "abce").unwrap(), 0.25);
        assert!(matches!(normalized_lev("", ""), Err(Error::UndefinedInput)));
    }

    #[test]
    fn threshold_bounds() {
        assert!(MatchThreshold::new(0.0).is_ok());
        assert!(MatchThreshold::new(1.0).is_ok());
        assert!(MatchThreshold::new(1.5).is_err());
        assert!(MatchThreshold::new(f64::NAN).is_err());
        assert_eq!(MatchThreshold::default().delta(), 0.5);
    }

    #[test]
    fn match_count_examples() {
        let c_oa = set(&["drunk driving", "highway", "bus"]);
        let tokens = toks(&["defendant", "drunk driving", "on", "highway"]);
        let half = MatchThreshold::new(0.5).unwrap();
        assert_eq!(match_count(&tokens, &c_oa, half), 2);

        let exact = MatchThreshold::new(0.0).unwrap();
        assert_eq!(match_count(&toks(&["xyz", "bu"]), &c_oa, exact), 0);

        let quarter = MatchThreshold::new(0.25).unwrap();
        assert_eq!(match_count(&toks(&["abcd"]), &set(&["abce"]), quarter), 1);
    }

    #[test]
    fn token_matching_several_concepts_counts_once() {
        let concepts = set(&["abcd", "abce", "abcf"]);
        let half = MatchThreshold::default();
        assert_eq!(match_count(&toks(&["abcd"]), &concepts, half), 1);
        assert_eq!(match_count(&toks(&["abcd", "abcd"]), &concepts, half), 2);
    }

    fn sets(oa: &[&str], sa: &[&str], jr: &[&str]) -> LeafConceptSets {
        LeafConceptSets {
            c_oa: set(oa),
            c_sa: set(sa),
            c_jr: set(jr),
        }
    }

    #[test]
    fn single_paragraph_document() {
        let doc = Document::new("d", None, vec!["drunk bus negligence".into()]).unwrap();
        let kb = summarize(
            &doc,
            &sets(&["bus"], &["negligence"], &[]),
            MatchThreshold::default(),
            &SegmenterConfig::whitespace(),
        )
        .unwrap();
        assert_eq!(kb.b_oa.indices, vec![0]);
        assert_eq!(kb.b_sa.indices, vec![0]);
        assert!(kb.b_jr.is_empty());
    }

    #[test]
    fn argmax_paragraph_is_selected() {
        let doc = Document::new(
            "d",
            None,
            vec![
                "court of first instance".into(),
                "the bus entered the highway".into(),
                "sentenced to detention".into(),
            ],
        )
        .unwrap();
        let kb = summarize(
            &doc,
            &sets(&["bus", "highway"], &[], &["detention"]),
            MatchThreshold::new(0.0).unwrap(),
            &SegmenterConfig::whitespace(),
        )
        .unwrap();
        assert_eq!(kb.b_oa.counts, vec![0, 2, 0]);
        assert_eq!(kb.b_oa.indices, vec![1]);
        assert_eq!(kb.b_oa.text, "the bus entered the highway");
        assert_eq!(kb.b_jr.indices, vec![2]);
        assert_eq!(
            kb.summary_text(),
            "the bus entered the highway\n\nsentenced to detention"
        );
    }

    #[test]
    fn ties_keep_every_maximal_paragraph() {
        let doc = Document::new(
            "d",
            None,
            vec!["bus here".into(), "nothing".into(), "a bus".into()],
        )
        .unwrap();
        let kb = summarize(
            &doc,
            &sets(&["bus"], &[], &[]),
            MatchThreshold::default(),
            &SegmenterConfig::whitespace(),
        )
        .unwrap();
        assert_eq!(kb.b_oa.indices, vec![0, 2]);
    }

    #[test]
    fn zero_maximum_yields_empty_block() {
        let doc = Document::new("d", None, vec!["nothing relevant".into()]).unwrap();
        let kb = summarize(
            &doc,
            &sets(&["bus"], &[], &[]),
            MatchThreshold::new(0.0).unwrap(),
            &SegmenterConfig::whitespace(),
        )
        .unwrap();
        assert!(kb.is_empty());
        assert_eq!(kb.b_oa.counts, vec![0]);
    }

    #[test]
    fn no_leaf_concepts_is_an_error() {
        let doc = Document::new("d", None, vec!["x".into()]).unwrap();
        let err = summarize(
            &doc,
            &LeafConceptSets::default(),
            MatchThreshold::default(),
            &SegmenterConfig::whitespace(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NoLeafConcepts));
    }
}
