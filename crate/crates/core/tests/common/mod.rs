//! Brute-force reference implementations shared by the integration tests.
//! None of them reuse the library's algorithms.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

use ndarray::Array2;

/// Every string over `alphabet` with length at most `max_len`, shortest
/// first.
pub fn all_strings(alphabet: &[u8], max_len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &frontier {
            for &c in alphabet {
                let mut t: Vec<u8> = s.clone();
                t.push(c);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Edit distances between all strings over `alphabet` of length at most
/// `max_len`, found by breadth-first search over single-character edits.
///
/// The search never leaves the bounded string set. That loses nothing: an
/// optimal edit sequence can perform its deletions first and its insertions
/// last, so no intermediate string is longer than both endpoints.
pub struct EditGraph {
    pub strings: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    neighbors: Vec<Vec<u32>>,
}

impl EditGraph {
    pub fn new(alphabet: &[u8], max_len: usize) -> Self {
        let strings = all_strings(alphabet, max_len);
        let index: HashMap<Vec<u8>, usize> =
            strings.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let neighbors = strings
            .iter()
            .map(|s| {
                let mut adj = Vec::new();
                for pos in 0..s.len() {
                    let mut t = s.clone();
                    t.remove(pos);
                    adj.push(index[&t] as u32);
                    for &c in alphabet {
                        if c != s[pos] {
                            let mut t = s.clone();
                            t[pos] = c;
                            adj.push(index[&t] as u32);
                        }
                    }
                }
                if s.len() < max_len {
                    for pos in 0..=s.len() {
                        for &c in alphabet {
                            let mut t = s.clone();
                            t.insert(pos, c);
                            adj.push(index[&t] as u32);
                        }
                    }
                }
                adj.sort_unstable();
                adj.dedup();
                adj
            })
            .collect();
        EditGraph {
            strings,
            index,
            neighbors,
        }
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    /// Distances from string `source` to every string, indexed like
    /// `strings`.
    pub fn distances_from(&self, source: usize) -> Vec<u8> {
        let mut dist = vec![u8::MAX; self.strings.len()];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.neighbors[u] {
                let v = v as usize;
                if dist[v] == u8::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

/// Edit distance by iterative deepening over edit scripts: the smallest `d`
/// such that some sequence of `d` single-character edits, each using a
/// character of `b`, turns `a` into `b`. Exponential; for short words only.
pub fn edit_distance_search(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let mut alphabet = b.clone();
    alphabet.sort_unstable();
    alphabet.dedup();
    fn reach(s: &[char], b: &[char], alphabet: &[char], depth: usize) -> bool {
        if s == b {
            return true;
        }
        if depth == 0 || s.len().abs_diff(b.len()) > depth {
            return false;
        }
        for pos in 0..=s.len() {
            for &c in alphabet {
                let mut t = s.to_vec();
                t.insert(pos, c);
                if reach(&t, b, alphabet, depth - 1) {
                    return true;
                }
            }
            if pos < s.len() {
                let mut t = s.to_vec();
                t.remove(pos);
                if reach(&t, b, alphabet, depth - 1) {
                    return true;
                }
                for &c in alphabet {
                    if c != s[pos] {
                        let mut t = s.to_vec();
                        t[pos] = c;
                        if reach(&t, b, alphabet, depth - 1) {
                            return true;
                        }
                    }
                }
            }
        }
        false
    }
    (0..).find(|&d| reach(&a, &b, &alphabet, d)).unwrap()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        r
    }
}

/// Flows on a spanning tree of the complete bipartite graph that meet the
/// marginals, found by repeatedly settling a leaf edge. Rows are nodes
/// `0..n`, columns `n..n+m`.
fn tree_flows(edges: &[(usize, usize)], src: &[f64], dst: &[f64]) -> Vec<f64> {
    let n = src.len();
    let mut remaining: Vec<f64> = src.iter().chain(dst).copied().collect();
    let mut degree = vec![0usize; remaining.len()];
    for &(i, j) in edges {
        degree[i] += 1;
        degree[n + j] += 1;
    }
    let mut flow = vec![f64::NAN; edges.len()];
    for _ in 0..edges.len() {
        let (e, leaf) = edges
            .iter()
            .enumerate()
            .filter(|(e, _)| flow[*e].is_nan())
            .find_map(|(e, &(i, j))| {
                if degree[i] == 1 {
                    Some((e, i))
                } else if degree[n + j] == 1 {
                    Some((e, n + j))
                } else {
                    None
                }
            })
            .expect("a tree always has a leaf");
        let (i, j) = edges[e];
        let other = if leaf == i { n + j } else { i };
        flow[e] = remaining[leaf];
        remaining[other] -= remaining[leaf];
        remaining[leaf] = 0.0;
        degree[i] -= 1;
        degree[n + j] -= 1;
    }
    flow
}

/// Minimum transport cost by enumerating every basic solution: each
/// spanning tree of the bipartite row/column graph determines one, and the
/// optimum is the cheapest one with non-negative flows.
pub fn transport_by_enumeration(src: &[f64], dst: &[f64], cost: &Array2<f64>) -> f64 {
    let (n, m) = (src.len(), dst.len());
    let all: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    let need = n + m - 1;
    let mut best = f64::INFINITY;
    let mut chosen = Vec::with_capacity(need);

    fn search(
        start: usize,
        all: &[(usize, usize)],
        need: usize,
        n: usize,
        chosen: &mut Vec<(usize, usize)>,
        parents: &UnionFind,
        visit: &mut dyn FnMut(&[(usize, usize)]),
    ) {
        if chosen.len() == need {
            visit(chosen);
            return;
        }
        if all.len() - start < need - chosen.len() {
            return;
        }
        for e in start..all.len() {
            let (i, j) = all[e];
            let mut uf = UnionFind(parents.0.clone());
            let (a, b) = (uf.find(i), uf.find(n + j));
            if a == b {
                continue;
            }
            uf.0[a] = b;
            chosen.push((i, j));
            search(e + 1, all, need, n, chosen, &uf, visit);
            chosen.pop();
        }
    }

    let mut visit = |tree: &[(usize, usize)]| {
        let flows = tree_flows(tree, src, dst);
        if flows.iter().all(|&f| f >= -1e-12) {
            let value: f64 = tree
                .iter()
                .zip(&flows)
                .map(|(&(i, j), f)| f * cost[[i, j]])
                .sum();
            best = best.min(value);
        }
    };
    let start = UnionFind((0..n + m).collect());
    search(0, &all, need, n, &mut chosen, &start, &mut visit);
    best
}

/// Edit distance by memoized recursion on suffixes, used by the summarizer
/// oracle.
pub fn edit_distance_recursive(a: &[char], b: &[char]) -> usize {
    fn go(a: &[char], b: &[char], memo: &mut HashMap<(usize, usize), usize>) -> usize {
        if a.is_empty() {
            return b.len();
        }
        if b.is_empty() {
            return a.len();
        }
        if let Some(&d) = memo.get(&(a.len(), b.len())) {
            return d;
        }
        let d = if a[0] == b[0] {
            go(&a[1..], &b[1..], memo)
        } else {
            1 + go(&a[1..], b, memo)
                .min(go(a, &b[1..], memo))
                .min(go(&a[1..], &b[1..], memo))
        };
        memo.insert((a.len(), b.len()), d);
        d
    }
    go(a, b, &mut HashMap::new())
}

/// Whether `word` is within normalized edit distance `delta` of a concept.
pub fn oracle_matches(word: &str, concepts: &[String], delta: f64) -> bool {
    let w: Vec<char> = word.chars().collect();
    concepts.iter().any(|c| {
        let c: Vec<char> = c.chars().collect();
        let longest = w.len().max(c.len());
        longest > 0 && edit_distance_recursive(&w, &c) as f64 / longest as f64 <= delta
    })
}

/// Paragraphs whose match count is maximal and positive, by explicit scan.
pub fn oracle_argmax(paragraphs: &[Vec<String>], concepts: &[String], delta: f64) -> Vec<usize> {
    let counts: Vec<usize> = paragraphs
        .iter()
        .map(|p| p.iter().filter(|w| oracle_matches(w, concepts, delta)).count())
        .collect();
    let mut best = 0;
    let mut winners = Vec::new();
    for (i, &c) in counts.iter().enumerate() {
        if c > best {
            best = c;
            winners = vec![i];
        } else if c == best && c > 0 {
            winners.push(i);
        }
    }
    winners
}
