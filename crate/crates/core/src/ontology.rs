//! Concept hierarchies for the top-level and domain-specific judgment
//! ontologies.
//!
//! An ontology is a forest of [`Concept`]s. Concepts directly under the
//! top-level ontology carry a [`BlockTag`] naming the knowledge block they
//! describe; every descendant inherits the nearest tagged ancestor's tag.
//! The childless concepts of the three core blocks are the match targets for
//! summarization ([`LeafConceptSets`]).
//!
//! The on-disk format is one concept per line:
//!
//! ```text
//! # id <TAB> label <TAB> parent-or-dash <TAB> tag-or-dash
//! oa      objective aspect    -   objective_aspect
//! ddb     dangerous driving behaviour oa  -
//! drunk   drunk driving       ddb -
//! ```

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::io::BufRead;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockTag {
    ObjectiveAspect,
    SubjectiveAspect,
    JudgmentResult,
    Other,
}

impl BlockTag {
    pub fn as_str(self) -> &'static str {
        match self {
            BlockTag::ObjectiveAspect => "objective_aspect",
            BlockTag::SubjectiveAspect => "subjective_aspect",
            BlockTag::JudgmentResult => "judgment_result",
            BlockTag::Other => "other",
        }
    }

    pub fn core(self) -> Option<CoreBlock> {
        match self {
            BlockTag::ObjectiveAspect => Some(CoreBlock::ObjectiveAspect),
            BlockTag::SubjectiveAspect => Some(CoreBlock::SubjectiveAspect),
            BlockTag::JudgmentResult => Some(CoreBlock::JudgmentResult),
            BlockTag::Other => None,
        }
    }
}

impl FromStr for BlockTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "objective_aspect" => Ok(BlockTag::ObjectiveAspect),
            "subjective_aspect" => Ok(BlockTag::SubjectiveAspect),
            "judgment_result" => Ok(BlockTag::JudgmentResult),
            "other" => Ok(BlockTag::Other),
            _ => Err(s.to_string()),
        }
    }
}

impl fmt::Display for BlockTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The three knowledge blocks that summarization extracts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CoreBlock {
    ObjectiveAspect,
    SubjectiveAspect,
    JudgmentResult,
}

impl CoreBlock {
    pub const ALL: [CoreBlock; 3] = [
        CoreBlock::ObjectiveAspect,
        CoreBlock::SubjectiveAspect,
        CoreBlock::JudgmentResult,
    ];

    pub fn tag(self) -> BlockTag {
        match self {
            CoreBlock::ObjectiveAspect => BlockTag::ObjectiveAspect,
            CoreBlock::SubjectiveAspect => BlockTag::SubjectiveAspect,
            CoreBlock::JudgmentResult => BlockTag::JudgmentResult,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            CoreBlock::ObjectiveAspect => "oa",
            CoreBlock::SubjectiveAspect => "sa",
            CoreBlock::JudgmentResult => "jr",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Concept {
    pub id: String,
    pub label: String,
    pub parent: Option<String>,
    pub block_tag: Option<BlockTag>,
}

impl Concept {
    pub fn new(
        id: impl Into<String>,
        label: impl Into<String>,
        parent: Option<&str>,
        block_tag: Option<BlockTag>,
    ) -> Self {
        Concept {
            id: id.into(),
            label: label.into(),
            parent: parent.map(str::to_string),
            block_tag,
        }
    }
}

/// A validated concept forest. Immutable once built.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ontology {
    concepts: BTreeMap<String, Concept>,
    children: BTreeMap<String, BTreeSet<String>>,
    roots: BTreeSet<String>,
}

/// Labels of the childless concepts under each core block.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LeafConceptSets {
    pub c_oa: BTreeSet<String>,
    pub c_sa: BTreeSet<String>,
    pub c_jr: BTreeSet<String>,
}

impl LeafConceptSets {
    pub fn get(&self, block: CoreBlock) -> &BTreeSet<String> {
        match block {
            CoreBlock::ObjectiveAspect => &self.c_oa,
            CoreBlock::SubjectiveAspect => &self.c_sa,
            CoreBlock::JudgmentResult => &self.c_jr,
        }
    }

    fn get_mut(&mut self, block: CoreBlock) -> &mut BTreeSet<String> {
        match block {
            CoreBlock::ObjectiveAspect => &mut self.c_oa,
            CoreBlock::SubjectiveAspect => &mut self.c_sa,
            CoreBlock::JudgmentResult => &mut self.c_jr,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.c_oa.is_empty() && self.c_sa.is_empty() && self.c_jr.is_empty()
    }
}

impl Ontology {
    /// Builds an ontology from in-memory concepts, checking every invariant.
    /// Errors carry the 1-based position of the offending concept.
    pub fn from_concepts(concepts: impl IntoIterator<Item = Concept>) -> Result<Self> {
        let numbered = concepts
            .into_iter()
            .enumerate()
            .map(|(i, c)| (i + 1, c))
            .collect();
        Self::from_numbered(numbered)
    }

    fn from_numbered(numbered: Vec<(usize, Concept)>) -> Result<Self> {
        let mut lines = HashMap::new();
        let mut concepts = BTreeMap::new();
        for (line, concept) in numbered {
            if concepts.contains_key(&concept.id) {
                return Err(Error::DuplicateConcept {
                    line,
                    id: concept.id,
                });
            }
            lines.insert(concept.id.clone(), line);
            concepts.insert(concept.id.clone(), concept);
        }
        let mut by_line: Vec<(&String, &usize)> = lines.iter().collect();
        by_line.sort_by_key(|(_, line)| **line);
        for (id, &line) in &by_line {
            if let Some(parent) = &concepts[*id].parent {
                if !concepts.contains_key(parent) {
                    return Err(Error::DanglingParent {
                        line,
                        id: (*id).clone(),
                        parent: parent.clone(),
                    });
                }
            }
        }
        Self::assemble(concepts).map_err(|id| Error::OntologyCycle {
            line: lines[&id],
            id,
        })
    }

    /// Indexes children and roots; on a cycle returns the id of the first
    /// concept (in id order) that lies on it.
    fn assemble(concepts: BTreeMap<String, Concept>) -> std::result::Result<Self, String> {
        let mut children: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut roots = BTreeSet::new();
        for concept in concepts.values() {
            match &concept.parent {
                Some(parent) => {
                    children
                        .entry(parent.clone())
                        .or_default()
                        .insert(concept.id.clone());
                }
                None => {
                    roots.insert(concept.id.clone());
                }
            }
        }
        let ontology = Ontology {
            concepts,
            children,
            roots,
        };
        let reachable = ontology.topological_order().len();
        if reachable != ontology.concepts.len() {
            let seen: BTreeSet<&str> = ontology
                .topological_order()
                .into_iter()
                .map(|c| c.id.as_str())
                .collect();
            let first = ontology
                .concepts
                .keys()
                .find(|id| !seen.contains(id.as_str()) && ontology.on_cycle(id))
                .or_else(|| ontology.concepts.keys().find(|id| !seen.contains(id.as_str())))
                .cloned()
                .unwrap_or_default();
            return Err(first);
        }
        Ok(ontology)
    }

    fn on_cycle(&self, id: &str) -> bool {
        let mut current = self.concepts[id].parent.as_deref();
        let mut steps = 0;
        while let Some(p) = current {
            if p == id {
                return true;
            }
            steps += 1;
            if steps > self.concepts.len() {
                return false;
            }
            current = self.concepts.get(p).and_then(|c| c.parent.as_deref());
        }
        false
    }

    pub fn parse(text: &str) -> Result<Self> {
        load_ontology(text.as_bytes())
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        load_ontology(std::io::BufReader::new(file))
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Concept> {
        self.concepts.get(id)
    }

    pub fn concepts(&self) -> impl Iterator<Item = &Concept> {
        self.concepts.values()
    }

    pub fn roots(&self) -> impl Iterator<Item = &str> {
        self.roots.iter().map(String::as_str)
    }

    pub fn children(&self, id: &str) -> impl Iterator<Item = &str> {
        self.children
            .get(id)
            .into_iter()
            .flat_map(|c| c.iter().map(String::as_str))
    }

    pub fn is_leaf(&self, id: &str) -> bool {
        self.children.get(id).is_none_or(BTreeSet::is_empty)
    }

    /// Tag of the concept itself or of its nearest tagged ancestor.
    pub fn resolved_tag(&self, id: &str) -> Option<BlockTag> {
        let mut current = self.concepts.get(id);
        while let Some(concept) = current {
            if concept.block_tag.is_some() {
                return concept.block_tag;
            }
            current = concept.parent.as_ref().and_then(|p| self.concepts.get(p));
        }
        None
    }

    /// Labels from the root down to `id`, joined with ` > `.
    pub fn lineage(&self, id: &str) -> String {
        let mut labels = Vec::new();
        let mut current = self.concepts.get(id);
        while let Some(concept) = current {
            labels.push(concept.label.as_str());
            current = concept.parent.as_ref().and_then(|p| self.concepts.get(p));
        }
        labels.reverse();
        labels.join(" > ")
    }

    /// Breadth-first order from the roots; parents always precede children.
    pub fn topological_order(&self) -> Vec<&Concept> {
        let mut order = Vec::with_capacity(self.concepts.len());
        let mut queue: VecDeque<&str> = self.roots.iter().map(String::as_str).collect();
        while let Some(id) = queue.pop_front() {
            order.push(&self.concepts[id]);
            queue.extend(self.children(id));
        }
        order
    }

    pub fn leaf_concepts(&self) -> LeafConceptSets {
        let mut sets = LeafConceptSets::default();
        for concept in self.concepts.values() {
            if !self.is_leaf(&concept.id) {
                continue;
            }
            if let Some(block) = self.resolved_tag(&concept.id).and_then(BlockTag::core) {
                sets.get_mut(block).insert(concept.label.clone());
            }
        }
        sets
    }

    /// Serializes in the line format accepted by [`load_ontology`].
    pub fn to_text(&self) -> String {
        let mut out = String::from("# id\tlabel\tparent\tblock_tag\n");
        for concept in self.topological_order() {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                concept.id,
                concept.label,
                concept.parent.as_deref().unwrap_or("-"),
                concept.block_tag.map_or("-", BlockTag::as_str),
            ));
        }
        out
    }
}

pub fn leaf_concepts(o: &Ontology) -> LeafConceptSets {
    o.leaf_concepts()
}

/// Parses the tab-separated ontology format. Lines starting with `#` and
/// blank lines are skipped.
pub fn load_ontology(source: impl BufRead) -> Result<Ontology> {
    let mut numbered = Vec::new();
    for (index, line) in source.lines().enumerate() {
        let line_no = index + 1;
        let line = line.map_err(|e| Error::MalformedOntology {
            line: line_no,
            message: e.to_string(),
        })?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(Error::MalformedOntology {
                line: line_no,
                message: format!("expected 4 tab-separated fields, found {}", fields.len()),
            });
        }
        let (id, label) = (fields[0].trim(), fields[1].trim());
        if id.is_empty() || label.is_empty() {
            return Err(Error::MalformedOntology {
                line: line_no,
                message: "empty id or label".into(),
            });
        }
        let parent = match fields[2].trim() {
            "-" | "" => None,
            p => Some(p),
        };
        let block_tag = match fields[3].trim() {
            "-" | "" => None,
            t => Some(t.parse::<BlockTag>().map_err(|tag| Error::UnknownBlockTag {
                line: line_no,
                tag,
            })?),
        };
        numbered.push((line_no, Concept::new(id, label, parent, block_tag)));
    }
    Ontology::from_numbered(numbered)
}

type ConceptKey = (String, Option<BlockTag>);

/// Merges `b` into `a`. Concepts are identified by their label together with
/// their resolved block tag; an identified concept keeps `a`'s id. A root of
/// either side that matches a parented concept of the other is attached under
/// that parent.
pub fn merge_ontologies(a: &Ontology, b: &Ontology) -> Result<Ontology> {
    let mut merged = a.concepts.clone();
    let mut by_key: HashMap<ConceptKey, Vec<String>> = HashMap::new();
    for id in a.concepts.keys() {
        let key = (a.concepts[id].label.clone(), a.resolved_tag(id));
        by_key.entry(key).or_default().push(id.clone());
    }

    let mut mapped: HashMap<&str, String> = HashMap::new();
    let mut used: HashSet<String> = HashSet::new();
    for concept in b.topological_order() {
        let parent = concept.parent.as_deref().map(|p| mapped[p].clone());
        let key = (concept.label.clone(), b.resolved_tag(&concept.id));
        let candidates = by_key.get(&key).map(Vec::as_slice).unwrap_or_default();

        // each concept of `a` absorbs at most one concept of `b`
        let free: Vec<&String> = candidates.iter().filter(|id| !used.contains(*id)).collect();
        let same_parent = free.iter().find(|id| merged[id.as_str()].parent == parent);
        let target = match (same_parent, &parent) {
            (Some(id), _) => Some((*id).clone()),
            (None, None) => free.first().map(|id| (*id).clone()),
            (None, Some(_)) => {
                if let Some(id) = free.iter().find(|id| merged[id.as_str()].parent.is_none()) {
                    merged.get_mut(id.as_str()).expect("candidate exists").parent = parent.clone();
                    Some((*id).clone())
                } else if let Some(existing) = free.first() {
                    return Err(Error::MergeConflict {
                        label: concept.label.clone(),
                        existing: lineage_in(&merged, existing),
                        incoming: b.lineage(&concept.id),
                    });
                } else {
                    None
                }
            }
        };
        if let Some(id) = &target {
            used.insert(id.clone());
        }

        let id = match target {
            Some(id) => {
                let existing = merged.get_mut(&id).expect("candidate exists");
                if existing.block_tag.is_none() {
                    existing.block_tag = concept.block_tag;
                }
                id
            }
            None => {
                let id = fresh_id(&merged, &concept.id);
                merged.insert(
                    id.clone(),
                    Concept {
                        id: id.clone(),
                        label: concept.label.clone(),
                        parent,
                        block_tag: concept.block_tag,
                    },
                );
                // only concepts of `a` are identification targets, so
                // duplicates inside `b` stay distinct just as they do in `a`
                id
            }
        };
        mapped.insert(&concept.id, id);
    }

    let labels: HashMap<String, String> = merged
        .values()
        .map(|c| (c.id.clone(), c.label.clone()))
        .collect();
    Ontology::assemble(merged).map_err(|id| Error::MergeCycle {
        label: labels.get(&id).cloned().unwrap_or(id),
    })
}

fn fresh_id(concepts: &BTreeMap<String, Concept>, wanted: &str) -> String {
    if !concepts.contains_key(wanted) {
        return wanted.to_string();
    }
    (2..)
        .map(|n| format!("{wanted}~{n}"))
        .find(|id| !concepts.contains_key(id))
        .expect("unbounded suffix search")
}

fn lineage_in(concepts: &BTreeMap<String, Concept>, id: &str) -> String {
    let mut labels = Vec::new();
    let mut current = concepts.get(id);
    while let Some(concept) = current {
        labels.push(concept.label.as_str());
        if labels.len() > concepts.len() {
            break;
        }
        current = concept.parent.as_ref().and_then(|p| concepts.get(p));
    }
    labels.reverse();
    labels.join(" > ")
}
