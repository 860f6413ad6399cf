//! Casualty extraction and severity replacement for the objective-aspect
//! block.
//!
//! Death and injury counts are located with ordered regular expressions,
//! each holding one capture group for the numeral. The matched phrases are
//! then replaced by a fixed description of the casualty severity, so that
//! documents with different raw numbers but the same legal severity look
//! alike to the distance computation.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use regex::Regex;

use crate::error::{Error, Result};

/// Word (or character) to value table used by [`parse_numeral`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumeralMap(BTreeMap<String, u64>);

const ENGLISH_NUMERALS: [(&str, u64); 28] = [
    ("zero", 0),
    ("one", 1),
    ("two", 2),
    ("three", 3),
    ("four", 4),
    ("five", 5),
    ("six", 6),
    ("seven", 7),
    ("eight", 8),
    ("nine", 9),
    ("ten", 10),
    ("eleven", 11),
    ("twelve", 12),
    ("thirteen", 13),
    ("fourteen", 14),
    ("fifteen", 15),
    ("sixteen", 16),
    ("seventeen", 17),
    ("eighteen", 18),
    ("nineteen", 19),
    ("twenty", 20),
    ("thirty", 30),
    ("forty", 40),
    ("fifty", 50),
    ("sixty", 60),
    ("seventy", 70),
    ("eighty", 80),
    ("ninety", 90),
];

const CHINESE_NUMERALS: [(&str, u64); 12] = [
    ("零", 0),
    ("一", 1),
    ("二", 2),
    ("两", 2),
    ("三", 3),
    ("四", 4),
    ("五", 5),
    ("六", 6),
    ("七", 7),
    ("八", 8),
    ("九", 9),
    ("十", 10),
];

impl NumeralMap {
    pub fn new() -> Self {
        NumeralMap(BTreeMap::new())
    }

    pub fn insert(&mut self, word: impl Into<String>, value: u64) {
        self.0.insert(word.into(), value);
    }

    pub fn get(&self, word: &str) -> Option<u64> {
        self.0.get(word).copied()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }
}

impl Default for NumeralMap {
    /// English number words up to ninety plus the basic Chinese numerals.
    fn default() -> Self {
        ENGLISH_NUMERALS
            .iter()
            .chain(CHINESE_NUMERALS.iter())
            .map(|&(w, v)| (w, v))
            .collect()
    }
}

impl<S: Into<String>> FromIterator<(S, u64)> for NumeralMap {
    fn from_iter<I: IntoIterator<Item = (S, u64)>>(iter: I) -> Self {
        NumeralMap(iter.into_iter().map(|(w, v)| (w.into(), v)).collect())
    }
}

/// Converts Arabic digits, a single mapped word, or a tens composition of
/// mapped units (`two ten three`, `二十三`, `twenty three`) into a value.
pub fn parse_numeral(s: &str, map: &NumeralMap) -> Result<u64> {
    let s = s.trim();
    let fail = || Error::Numeral(s.to_string());
    if s.is_empty() {
        return Err(fail());
    }
    if s.bytes().all(|b| b.is_ascii_digit()) {
        return s.parse().map_err(|_| fail());
    }
    if let Some(v) = map.get(s) {
        return Ok(v);
    }
    let parts: Vec<String> = if s.contains(char::is_whitespace) {
        s.split_whitespace().map(str::to_string).collect()
    } else {
        s.chars().map(String::from).collect()
    };
    let values = parts
        .iter()
        .map(|p| map.get(p).ok_or_else(fail))
        .collect::<Result<Vec<_>>>()?;

    let mut total = 0;
    let mut unit: Option<u64> = None;
    let mut tens_filled = false;
    for v in values {
        match v {
            10 => {
                if tens_filled {
                    return Err(fail());
                }
                total = unit.take().unwrap_or(1) * 10;
                tens_filled = true;
            }
            0..=9 => {
                if unit.is_some() {
                    return Err(fail());
                }
                unit = Some(v);
            }
            _ => {
                if unit.is_some() || tens_filled {
                    return Err(fail());
                }
                total = v;
                tens_filled = true;
            }
        }
    }
    Ok(total + unit.unwrap_or(0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CasualtyKind {
    Death,
    Injury,
}

impl fmt::Display for CasualtyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CasualtyKind::Death => "death",
            CasualtyKind::Injury => "injury",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CasualtyPatternSet {
    death: Vec<Regex>,
    injury: Vec<Regex>,
    pub numerals: NumeralMap,
}

fn compile(pattern: &str) -> Result<Regex> {
    let invalid = |message: String| Error::InvalidPattern {
        pattern: pattern.to_string(),
        message,
    };
    let re = Regex::new(pattern).map_err(|e| invalid(e.to_string()))?;
    // captures_len counts the implicit whole-match group
    if re.captures_len() != 2 {
        return Err(invalid(format!(
            "expected exactly one capture group, found {}",
            re.captures_len() - 1
        )));
    }
    Ok(re)
}

impl CasualtyPatternSet {
    pub fn new<S: AsRef<str>>(death: &[S], injury: &[S], numerals: NumeralMap) -> Result<Self> {
        Ok(CasualtyPatternSet {
            death: death.iter().map(|p| compile(p.as_ref())).collect::<Result<_>>()?,
            injury: injury.iter().map(|p| compile(p.as_ref())).collect::<Result<_>>()?,
            numerals,
        })
    }

    /// Parses a pattern file: `death<TAB>regex` or `injury<TAB>regex` per
    /// line; `#` comments and blank lines are skipped.
    pub fn parse(text: &str, numerals: NumeralMap) -> Result<Self> {
        let mut death = Vec::new();
        let mut injury = Vec::new();
        for (index, line) in text.lines().enumerate() {
            let line_no = index + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((kind, pattern)) = line.split_once('\t') else {
                return Err(Error::MalformedPatternLine {
                    line: line_no,
                    message: "expected `death|injury <TAB> regex`".into(),
                });
            };
            let re = compile(pattern).map_err(|e| Error::MalformedPatternLine {
                line: line_no,
                message: e.to_string(),
            })?;
            match kind.trim() {
                "death" => death.push(re),
                "injury" => injury.push(re),
                other => {
                    return Err(Error::MalformedPatternLine {
                        line: line_no,
                        message: format!("unknown pattern kind `{other}`"),
                    })
                }
            }
        }
        Ok(CasualtyPatternSet {
            death,
            injury,
            numerals,
        })
    }

    pub fn from_path(path: impl AsRef<Path>, numerals: NumeralMap) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, numerals)
    }

    pub fn patterns(&self, kind: CasualtyKind) -> &[Regex] {
        match kind {
            CasualtyKind::Death => &self.death,
            CasualtyKind::Injury => &self.injury,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for kind in [CasualtyKind::Death, CasualtyKind::Injury] {
            for re in self.patterns(kind) {
                out.push_str(&format!("{kind}\t{}\n", re.as_str()));
            }
        }
        out
    }
}

impl Default for CasualtyPatternSet {
    /// Patterns for English test corpora (`caused 2 deaths`, `killed 1`,
    /// `injured more than 5`, ...) and common Chinese phrasings.
    fn default() -> Self {
        let numerals = NumeralMap::default();
        let mut english: Vec<&str> = ENGLISH_NUMERALS.iter().map(|(w, _)| *w).collect();
        // longest first so that `seventeen` is not read as `seven`
        english.sort_by_key(|w| std::cmp::Reverse(w.len()));
        let words = english.join("|");
        let n = format!(r"(\d+|(?:{words})(?: (?:{words}))*)");
        let zh = "([0-9零一二两三四五六七八九十]+)";
        let death = [
            format!(r"\bcaused (?:more than )?{n} deaths?\b"),
            format!(r"\bkilled (?:more than )?{n}\b"),
            format!(r"\b{n} (?:people|persons) (?:died|were killed)\b"),
            format!("造成{zh}人死亡"),
            format!("致{zh}人死亡"),
        ];
        let injury = [
            format!(r"\binjured (?:more than )?{n}\b"),
            format!(r"\b{n} (?:people|persons) (?:were )?injured\b"),
            format!(r"\bcaused (?:more than )?{n} injur(?:y|ies)\b"),
            format!("{zh}人受伤"),
            format!("{zh}人轻伤"),
        ];
        CasualtyPatternSet::new(&death, &injury, numerals).expect("default patterns compile")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedSpan {
    pub kind: CasualtyKind,
    /// Index of the pattern within its kind's list.
    pub pattern: usize,
    pub text: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CasualtyExtraction {
    pub deaths: u64,
    pub injuries: u64,
    pub matched_spans: Vec<MatchedSpan>,
}

/// Applies every pattern to `text`. The first match (in pattern order, then
/// text order) of each kind supplies its count; all matches are recorded as
/// spans so they can be replaced.
pub fn extract_casualties(text: &str, pats: &CasualtyPatternSet) -> Result<CasualtyExtraction> {
    let mut extraction = CasualtyExtraction::default();
    for kind in [CasualtyKind::Death, CasualtyKind::Injury] {
        let mut count = None;
        for (index, re) in pats.patterns(kind).iter().enumerate() {
            for caps in re.captures_iter(text) {
                let numeral = caps.get(1).map_or("", |m| m.as_str());
                let value = parse_numeral(numeral, &pats.numerals)?;
                count.get_or_insert(value);
                extraction.matched_spans.push(MatchedSpan {
                    kind,
                    pattern: index,
                    text: caps[0].to_string(),
                });
            }
        }
        let value = count.unwrap_or(0);
        match kind {
            CasualtyKind::Death => extraction.deaths = value,
            CasualtyKind::Injury => extraction.injuries = value,
        }
    }
    Ok(extraction)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SeverityLevel {
    General,
    Serious,
    ExtraordinarilySerious,
}

impl SeverityLevel {
    pub fn description(self) -> &'static str {
        match self {
            SeverityLevel::General => "[CASUALTY:GENERAL]",
            SeverityLevel::Serious => "[CASUALTY:SERIOUS]",
            SeverityLevel::ExtraordinarilySerious => "[CASUALTY:EXTRAORDINARY]",
        }
    }

    pub const ALL: [SeverityLevel; 3] = [
        SeverityLevel::General,
        SeverityLevel::Serious,
        SeverityLevel::ExtraordinarilySerious,
    ];
}

/// Deaths alone decide the level: none is general, one or two serious,
/// three or more extraordinarily serious.
pub fn classify_severity(deaths: u64, _injuries: u64) -> SeverityLevel {
    match deaths {
        0 => SeverityLevel::General,
        1..=2 => SeverityLevel::Serious,
        _ => SeverityLevel::ExtraordinarilySerious,
    }
}

/// Replaces every matched span with the severity description. Text without
/// spans is returned unchanged.
pub fn augment_block(block_text: &str, ext: &CasualtyExtraction) -> String {
    if ext.matched_spans.is_empty() {
        return block_text.to_string();
    }
    let description = classify_severity(ext.deaths, ext.injuries).description();
    let mut spans: Vec<&str> = ext.matched_spans.iter().map(|s| s.text.as_str()).collect();
    spans.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    spans.dedup();
    spans
        .into_iter()
        .fold(block_text.to_string(), |text, span| text.replace(span, description))
}

/// Extraction followed by augmentation.
pub fn apply_rules(text: &str, pats: &CasualtyPatternSet) -> Result<(String, CasualtyExtraction)> {
    let ext = extract_casualties(text, pats)?;
    Ok((augment_block(text, &ext), ext))
}
