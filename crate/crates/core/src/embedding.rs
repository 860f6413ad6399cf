//! Word vectors in the word2vec text format and the Euclidean word travel
//! cost between them.

use std::collections::HashMap;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingStore {
    dim: usize,
    index: HashMap<String, usize>,
    words: Vec<String>,
    data: Vec<f64>,
}

impl EmbeddingStore {
    pub fn new(dim: usize) -> Self {
        assert!(dim > 0, "embedding dimension must be positive");
        EmbeddingStore {
            dim,
            index: HashMap::new(),
            words: Vec::new(),
            data: Vec::new(),
        }
    }

    /// Adds a vector; returns `false` (and leaves the store unchanged) when
    /// the word is already present.
    ///
    /// # Panics
    /// If the vector length differs from the store dimension or a component
    /// is not finite.
    pub fn insert(&mut self, word: impl Into<String>, vector: &[f64]) -> bool {
        assert_eq!(vector.len(), self.dim, "vector dimension mismatch");
        assert!(vector.iter().all(|x| x.is_finite()), "non-finite component");
        let word = word.into();
        if self.index.contains_key(&word) {
            return false;
        }
        self.index.insert(word.clone(), self.words.len());
        self.words.push(word);
        self.data.extend_from_slice(vector);
        true
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Words in insertion (file) order.
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn lookup(&self, word: &str) -> Option<&[f64]> {
        self.index
            .get(word)
            .map(|&i| &self.data[i * self.dim..(i + 1) * self.dim])
    }

    fn require(&self, word: &str) -> Result<&[f64]> {
        self.lookup(word)
            .ok_or_else(|| Error::MissingVector(word.to_string()))
    }

    pub fn travel_cost(&self, i: &str, j: &str) -> Result<f64> {
        Ok(euclidean(self.require(i)?, self.require(j)?))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        load_embeddings(std::io::BufReader::new(file))
    }

    /// Writes the word2vec text format. Components use the shortest
    /// representation that parses back to the same `f64`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.len(), self.dim);
        for (i, word) in self.words.iter().enumerate() {
            out.push_str(word);
            for x in &self.data[i * self.dim..(i + 1) * self.dim] {
                out.push(' ');
                out.push_str(&x.to_string());
            }
            out.push('\n');
        }
        out
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub fn lookup<'a>(s: &'a EmbeddingStore, w: &str) -> Option<&'a [f64]> {
    s.lookup(w)
}

pub fn travel_cost(s: &EmbeddingStore, i: &str, j: &str) -> Result<f64> {
    s.travel_cost(i, j)
}

/// Reads `vocab_count dim` followed by `word v1 ... v_dim` lines.
pub fn load_embeddings(source: impl BufRead) -> Result<EmbeddingStore> {
    let mut lines = source.lines().enumerate();
    let header_err = |line: usize, message: &str| Error::EmbeddingHeader {
        line,
        message: message.to_string(),
    };
    let (_, header) = lines.next().ok_or_else(|| header_err(1, "empty input"))?;
    let header = header.map_err(|e| header_err(1, &e.to_string()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [count, dim] = fields[..] else {
        return Err(header_err(1, "expected `vocab_count dim`"));
    };
    let count: usize = count
        .parse()
        .map_err(|_| header_err(1, "vocab_count is not an integer"))?;
    let dim: usize = dim
        .parse()
        .map_err(|_| header_err(1, "dim is not an integer"))?;
    if dim == 0 {
        return Err(header_err(1, "dim must be positive"));
    }

    let mut store = EmbeddingStore::new(dim);
    let mut vector = Vec::with_capacity(dim);
    for (index, line) in lines {
        let line_no = index + 1;
        let line = line.map_err(|e| header_err(line_no, &e.to_string()))?;
        let mut fields = line.split_whitespace();
        let Some(word) = fields.next() else {
            continue;
        };
        vector.clear();
        for token in fields {
            match token.parse::<f64>() {
                Ok(x) if x.is_finite() => vector.push(x),
                _ => {
                    return Err(Error::NonNumeric {
                        line: line_no,
                        token: token.to_string(),
                    })
                }
            }
        }
        if vector.len() != dim {
            return Err(Error::DimensionMismatch {
                line: line_no,
                expected: dim,
                found: vector.len(),
            });
        }
        if !store.insert(word, &vector) {
            return Err(Error::DuplicateWord {
                line: line_no,
                word: word.to_string(),
            });
        }
    }
    if store.len() != count {
        return Err(Error::VocabCount {
            expected: count,
            found: store.len(),
        });
    }
    Ok(store)
}
