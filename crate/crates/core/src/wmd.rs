//! Word Mover's Distance between normalized bag-of-words documents.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use ndarray::Array2;

use crate::embedding::{euclidean, EmbeddingStore};
use crate::error::{Error, Result};
use crate::text::{SegmenterConfig, TokenList};
use crate::transport::{solve_transport, TransportPlan};

/// Normalized bag of words over in-vocabulary, non-stop words, in order of
/// first occurrence.
#[derive(Clone, Debug, PartialEq)]
pub struct NBow {
    words: Vec<String>,
    weights: Vec<f64>,
    counts: Vec<usize>,
}

impl NBow {
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Builds a distribution directly from `(word, count)` pairs. Repeated
    /// words are merged; zero counts are dropped.
    pub fn from_counts<S: Into<String>>(pairs: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut position: HashMap<String, usize> = HashMap::new();
        let mut words = Vec::new();
        let mut counts = Vec::new();
        for (word, count) in pairs {
            if count == 0 {
                continue;
            }
            let word = word.into();
            match position.get(&word) {
                Some(&i) => counts[i] += count,
                None => {
                    position.insert(word.clone(), words.len());
                    words.push(word);
                    counts.push(count);
                }
            }
        }
        if words.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        let total: usize = counts.iter().sum();
        let weights = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Ok(NBow {
            words,
            weights,
            counts,
        })
    }
}

pub fn nbow(tokens: &TokenList, store: &EmbeddingStore, cfg: &SegmenterConfig) -> Result<NBow> {
    NBow::from_counts(
        tokens
            .iter()
            .filter(|t| !cfg.is_stopword(t) && store.contains(t))
            .map(|t| (t.as_str(), 1)),
    )
}

fn vectors<'a>(doc: &NBow, store: &'a EmbeddingStore) -> Result<Vec<&'a [f64]>> {
    doc.words
        .iter()
        .map(|w| {
            store
                .lookup(w)
                .ok_or_else(|| Error::MissingVector(w.clone()))
        })
        .collect()
}

/// Pairwise word travel costs between the two documents' words.
pub fn cost_matrix(a: &NBow, b: &NBow, store: &EmbeddingStore) -> Result<Array2<f64>> {
    let (va, vb) = (vectors(a, store)?, vectors(b, store)?);
    Ok(Array2::from_shape_fn((va.len(), vb.len()), |(i, j)| {
        euclidean(va[i], vb[j])
    }))
}

/// Optimal transport plan between the two documents.
pub fn wmd_plan(a: &NBow, b: &NBow, store: &EmbeddingStore) -> Result<TransportPlan> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let cost = cost_matrix(a, b, store)?;
    solve_transport(&a.weights, &b.weights, &cost)
}

pub fn wmd_distance(a: &NBow, b: &NBow, store: &EmbeddingStore) -> Result<f64> {
    Ok(wmd_plan(a, b, store)?.objective)
}

/// Distance between the weighted centroids of the two documents; never
/// exceeds the Word Mover's Distance.
pub fn centroid_lower_bound(a: &NBow, b: &NBow, store: &EmbeddingStore) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let centroid = |doc: &NBow| -> Result<Vec<f64>> {
        let mut c = vec![0.0; store.dim()];
        for (v, w) in vectors(doc, store)?.into_iter().zip(&doc.weights) {
            for (ck, vk) in c.iter_mut().zip(v) {
                *ck += w * vk;
            }
        }
        Ok(c)
    };
    Ok(euclidean(&centroid(a)?, &centroid(b)?))
}

/// Square matrix of document distances in corpus order.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix(pub Array2<f64>);

impl DistanceMatrix {
    /// All pairwise distances; only the upper triangle is solved.
    pub fn compute(docs: &[NBow], store: &EmbeddingStore) -> Result<Self> {
        let n = docs.len();
        let mut d = Array2::zeros((n, n));
        for i in 0..n {
            for j in i + 1..n {
                let value = wmd_distance(&docs[i], &docs[j], store)?;
                d[[i, j]] = value;
                d[[j, i]] = value;
            }
        }
        Ok(DistanceMatrix(d))
    }

    pub fn len(&self) -> usize {
        self.0.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.0.nrows() == 0
    }

    /// Header line `n`, then one row per line with 12 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.len());
        for row in self.0.rows() {
            let cells: Vec<String> = row.iter().map(|x| format_sig12(*x)).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |message: String| Error::Corpus {
            path: "<distance matrix>".into(),
            message,
        };
        let mut lines = text.lines();
        let n: usize = lines
            .next()
            .and_then(|l| l.trim().parse().ok())
            .ok_or_else(|| bad("missing size header".into()))?;
        let mut d = Array2::zeros((n, n));
        for i in 0..n {
            let line = lines.next().ok_or_else(|| bad(format!("missing row {i}")))?;
            let cells: Vec<f64> = line
                .split_whitespace()
                .map(|c| c.parse::<f64>().map_err(|_| bad(format!("bad value `{c}`"))))
                .collect::<Result<_>>()?;
            if cells.len() != n {
                return Err(bad(format!("row {i} has {} values", cells.len())));
            }
            for (j, x) in cells.into_iter().enumerate() {
                d[[i, j]] = x;
            }
        }
        Ok(DistanceMatrix(d))
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_text()).map_err(|e| Error::io(path, e))
    }
}

/// Scientific notation with 12 significant digits.
pub fn format_sig12(x: f64) -> String {
    format!("{x:.11e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::load_embeddings;

    fn store() -> EmbeddingStore {
        load_embeddings("4 2\na 0 0\nb 3 4\nc 1 0\nd 0 1\n".as_bytes()).unwrap()
    }

    fn toks(words: &[&str]) -> TokenList {
        words.iter().copied().collect()
    }

    #[test]
    fn nbow_counts_and_weights() {
        let s = store();
        let cfg = SegmenterConfig::whitespace().with_stopwords(["the"]);
        let d = nbow(&toks(&["a", "the", "b", "oov", "a"]), &s, &cfg).unwrap();
        assert_eq!(d.words(), ["a", "b"]);
        assert_eq!(d.counts(), [2, 1]);
        assert_eq!(d.weights(), [2.0 / 3.0, 1.0 / 3.0]);

        let single = nbow(&toks(&["a"]), &s, &cfg).unwrap();
        assert_eq!(single.weights(), [1.0]);

        assert!(matches!(
            nbow(&toks(&["oovword", "the"]), &s, &cfg),
            Err(Error::EmptyDistribution)
        ));
    }

    #[test]
    fn distance_basics() {
        let s = store();
        let cfg = SegmenterConfig::whitespace();
        let a = nbow(&toks(&["a", "c"]), &s, &cfg).unwrap();
        assert!(wmd_distance(&a, &a, &s).unwrap() <= 1e-9);
        let x = nbow(&toks(&["a"]), &s, &cfg).unwrap();
        let y = nbow(&toks(&["b"]), &s, &cfg).unwrap();
        assert_eq!(wmd_distance(&x, &y, &s).unwrap(), 5.0);
        assert_eq!(centroid_lower_bound(&x, &y, &s).unwrap(), 5.0);
    }

    #[test]
    fn missing_vectors_propagate() {
        let s = store();
        let a = NBow::from_counts([("a", 1)]).unwrap();
        let z = NBow::from_counts([("zz", 1)]).unwrap();
        assert!(matches!(wmd_distance(&a, &z, &s), Err(Error::MissingVector(w)) if w == "zz"));
        assert!(centroid_lower_bound(&a, &z, &s).is_err());
    }

    #[test]
    fn centroid_bound_example() {
        let s = store();
        let a = NBow::from_counts([("c", 1), ("d", 1)]).unwrap();
        let b = NBow::from_counts([("a", 1)]).unwrap();
        let exact = wmd_distance(&a, &b, &s).unwrap();
        let bound = centroid_lower_bound(&a, &b, &s).unwrap();
        assert!((exact - 1.0).abs() < 1e-9);
        assert!((bound - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn matrix_text_format() {
        let s = store();
        let docs: Vec<NBow> = ["a", "b", "c"]
            .iter()
            .map(|w| NBow::from_counts([(*w, 1)]).unwrap())
            .collect();
        let m = DistanceMatrix::compute(&docs, &s).unwrap();
        let text = m.to_text();
        assert!(text.starts_with("3\n0.00000000000e0 5.00000000000e0 1.00000000000e0\n"));
        let back = DistanceMatrix::parse(&text).unwrap();
        for (x, y) in back.0.iter().zip(m.0.iter()) {
            assert!((x - y).abs() <= 1e-11 * y.abs().max(1.0));
        }
    }
}
