//! Documents, word segmentation and stop-word filtering.

use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use crate::error::{Error, Result};

/// A paragraph-structured document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub label: Option<String>,
    paragraphs: Vec<String>,
}

impl Document {
    pub fn new(
        id: impl Into<String>,
        label: Option<String>,
        paragraphs: Vec<String>,
    ) -> Result<Self> {
        let id = id.into();
        if paragraphs.is_empty() {
            return Err(Error::InvalidDocument {
                id,
                message: "document has no paragraphs".into(),
            });
        }
        if let Some(i) = paragraphs.iter().position(|p| p.trim().is_empty()) {
            return Err(Error::InvalidDocument {
                id,
                message: format!("paragraph {} is empty", i + 1),
            });
        }
        Ok(Document {
            id,
            label,
            paragraphs,
        })
    }

    pub fn paragraphs(&self) -> &[String] {
        &self.paragraphs
    }

    /// Parses the corpus file format: optional `%id:` / `%label:` header
    /// lines, then paragraphs separated by one or more blank lines.
    pub fn parse(text: &str, fallback_id: &str) -> Result<Self> {
        let mut id = None;
        let mut label = None;
        let mut paragraphs = Vec::new();
        let mut current: Vec<&str> = Vec::new();
        let mut in_header = true;
        for line in text.lines() {
            let line = line.trim_end_matches('\r');
            if in_header {
                if let Some(value) = line.strip_prefix("%id:") {
                    id = Some(value.trim().to_string());
                    continue;
                }
                if let Some(value) = line.strip_prefix("%label:") {
                    label = Some(value.trim().to_string());
                    continue;
                }
                if line.trim().is_empty() {
                    continue;
                }
                in_header = false;
            }
            if line.trim().is_empty() {
                if !current.is_empty() {
                    paragraphs.push(current.join("\n"));
                    current.clear();
                }
            } else {
                current.push(line);
            }
        }
        if !current.is_empty() {
            paragraphs.push(current.join("\n"));
        }
        let id = id
            .filter(|s| !s.is_empty())
            .unwrap_or_else(|| fallback_id.to_string());
        Document::new(id, label.filter(|s| !s.is_empty()), paragraphs)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("%id: {}\n", self.id);
        if let Some(label) = &self.label {
            out.push_str(&format!("%label: {label}\n"));
        }
        for paragraph in &self.paragraphs {
            out.push('\n');
            out.push_str(paragraph);
            out.push('\n');
        }
        out
    }
}

/// Ordered segmented words. No token is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenList(Vec<String>);

impl TokenList {
    pub fn as_slice(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, String> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<String> {
        self.0
    }

    pub fn extend(&mut self, other: TokenList) {
        self.0.extend(other.0);
    }
}

impl<S: Into<String>> FromIterator<S> for TokenList {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        TokenList(
            iter.into_iter()
                .map(Into::into)
                .filter(|t: &String| !t.is_empty())
                .collect(),
        )
    }
}

impl<'a> IntoIterator for &'a TokenList {
    type Item = &'a String;
    type IntoIter = std::slice::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SegmentMode {
    #[default]
    Whitespace,
    DictionaryLongestMatch,
}

/// Word list for longest-match segmentation.
#[derive(Clone, Debug, Default)]
pub struct Dictionary {
    words: HashSet<String>,
    max_chars: usize,
}

impl Dictionary {
    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl<S: Into<String>> FromIterator<S> for Dictionary {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        let words: HashSet<String> = iter
            .into_iter()
            .map(Into::into)
            .filter(|w: &String| !w.is_empty())
            .collect();
        let max_chars = words.iter().map(|w| w.chars().count()).max().unwrap_or(0);
        Dictionary { words, max_chars }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SegmenterConfig {
    pub mode: SegmentMode,
    pub dictionary: Option<Dictionary>,
    pub stopwords: HashSet<String>,
}

impl SegmenterConfig {
    pub fn whitespace() -> Self {
        SegmenterConfig::default()
    }

    pub fn longest_match(dictionary: Dictionary) -> Self {
        SegmenterConfig {
            mode: SegmentMode::DictionaryLongestMatch,
            dictionary: Some(dictionary),
            stopwords: HashSet::new(),
        }
    }

    pub fn with_stopwords<S: Into<String>>(mut self, words: impl IntoIterator<Item = S>) -> Self {
        self.stopwords = words.into_iter().map(Into::into).collect();
        self
    }

    pub fn is_stopword(&self, word: &str) -> bool {
        self.stopwords.contains(word)
    }
}

/// Reads a stop-word file: one word per line, blank lines ignored.
pub fn load_stopwords(path: impl AsRef<Path>) -> Result<HashSet<String>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(parse_stopwords(&text))
}

pub fn parse_stopwords(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(str::to_string)
        .collect()
}

pub fn segment(paragraph: &str, cfg: &SegmenterConfig) -> Result<TokenList> {
    match cfg.mode {
        SegmentMode::Whitespace => Ok(paragraph.split_whitespace().collect()),
        SegmentMode::DictionaryLongestMatch => {
            let dictionary = cfg.dictionary.as_ref().ok_or(Error::MissingDictionary)?;
            Ok(longest_match(paragraph, dictionary))
        }
    }
}

/// Greedy left-to-right scan emitting the longest dictionary word at each
/// position, falling back to one character. Whitespace is skipped and never
/// starts or ends a token.
fn longest_match(text: &str, dictionary: &Dictionary) -> TokenList {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let byte_end = |i: usize| chars.get(i).map_or(text.len(), |&(b, _)| b);
    let mut tokens = Vec::new();
    let mut pos = 0;
    while pos < chars.len() {
        if chars[pos].1.is_whitespace() {
            pos += 1;
            continue;
        }
        let start = chars[pos].0;
        let longest = (2..=dictionary.max_chars.min(chars.len() - pos))
            .rev()
            .find(|&len| {
                !chars[pos + len - 1].1.is_whitespace()
                    && dictionary.contains(&text[start..byte_end(pos + len)])
            })
            .unwrap_or(1);
        tokens.push(text[start..byte_end(pos + longest)].to_string());
        pos += longest;
    }
    TokenList(tokens)
}

pub fn remove_stopwords(tokens: &TokenList, cfg: &SegmenterConfig) -> TokenList {
    TokenList(
        tokens
            .iter()
            .filter(|t| !cfg.is_stopword(t))
            .cloned()
            .collect(),
    )
}

pub fn unique_words(tokens: &TokenList) -> BTreeSet<&str> {
    tokens.iter().map(String::as_str).collect()
}

/// Segments every paragraph of `text` (split on blank lines) and concatenates
/// the tokens.
pub fn segment_text(text: &str, cfg: &SegmenterConfig) -> Result<TokenList> {
    let mut tokens = TokenList::default();
    for paragraph in text.split("\n\n").filter(|p| !p.trim().is_empty()) {
        tokens.extend(segment(paragraph, cfg)?);
    }
    Ok(tokens)
}

pub fn segment_document(doc: &Document, cfg: &SegmenterConfig) -> Result<TokenList> {
    let mut tokens = TokenList::default();
    for paragraph in doc.paragraphs() {
        tokens.extend(segment(paragraph, cfg)?);
    }
    Ok(tokens)
}
