//! Symmetric graphs over `n` vertices stored as a packed upper triangle.
//!
//! Simple graphs hold entries in `{0, 1}`; censored graphs hold edge labels in
//! `{-1, 0, +1}` where `0` means "no observation".

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alphabet {
    Simple,
    Censored,
}

impl Alphabet {
    pub fn contains(self, v: i8) -> bool {
        match self {
            Alphabet::Simple => v == 0 || v == 1,
            Alphabet::Censored => (-1..=1).contains(&v),
        }
    }

    /// Values an entry can take, in enumeration order.
    pub fn values(self) -> &'static [i8] {
        match self {
            Alphabet::Simple => &[0, 1],
            Alphabet::Censored => &[-1, 0, 1],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Alphabet::Simple => "simple",
            Alphabet::Censored => "censored",
        }
    }
}

impl FromStr for Alphabet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simple" => Ok(Alphabet::Simple),
            "censored" => Ok(Alphabet::Censored),
            other => Err(Error::Config(format!("unknown alphabet `{other}`"))),
        }
    }
}

/// Undirected graph with an implicit zero diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    alphabet: Alphabet,
    entries: Vec<i8>,
}

/// Index of pair `(i, j)` with `i < j` in the packed upper triangle.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Inverse of [`pair_index`].
pub fn pair_from_index(n: usize, mut idx: usize) -> (usize, usize) {
    let mut i = 0;
    loop {
        let row = n - i - 1;
        if idx < row {
            return (i, i + 1 + idx);
        }
        idx -= row;
        i += 1;
    }
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

impl Graph {
    pub fn empty(n: usize, alphabet: Alphabet) -> Self {
        Graph {
            n,
            alphabet,
            entries: vec![0; pair_count(n)],
        }
    }

    /// Builds a graph from a packed upper triangle.
    pub fn from_packed(n: usize, alphabet: Alphabet, entries: Vec<i8>) -> Result<Self> {
        if entries.len() != pair_count(n) {
            return Err(Error::ShapeMismatch(format!(
                "expected {} packed entries, got {}",
                pair_count(n),
                entries.len()
            )));
        }
        if let Some(&v) = entries.iter().find(|&&v| !alphabet.contains(v)) {
            return Err(Error::AlphabetViolation {
                value: v,
                alphabet: alphabet.name(),
            });
        }
        Ok(Graph {
            n,
            alphabet,
            entries,
        })
    }

    pub fn complete(n: usize) -> Self {
        Graph {
            n,
            alphabet: Alphabet::Simple,
            entries: vec![1; pair_count(n)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn packed(&self) -> &[i8] {
        &self.entries
    }

    /// Entry `{i, j}`; the diagonal reads as zero.
    pub fn get(&self, i: usize, j: usize) -> i8 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.entries[pair_index(self.n, i, j)],
            std::cmp::Ordering::Greater => self.entries[pair_index(self.n, j, i)],
            std::cmp::Ordering::Equal => 0,
        }
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<(usize, usize)> {
        if i >= self.n || j >= self.n || i == j {
            return Err(Error::IndexOutOfRange { i, j, n: self.n });
        }
        Ok((i.min(j), i.max(j)))
    }

    fn check_value(&self, v: i8) -> Result<()> {
        if self.alphabet.contains(v) {
            Ok(())
        } else {
            Err(Error::AlphabetViolation {
                value: v,
                alphabet: self.alphabet.name(),
            })
        }
    }

    /// Returns a copy with entry `{i, j}` replaced by `v`.
    pub fn set_entry(&self, i: usize, j: usize, v: i8) -> Result<Graph> {
        let mut g = self.clone();
        g.set_in_place(i, j, v)?;
        Ok(g)
    }

    pub(crate) fn set_in_place(&mut self, i: usize, j: usize, v: i8) -> Result<()> {
        let (i, j) = self.check_pair(i, j)?;
        self.check_value(v)?;
        let idx = pair_index(self.n, i, j);
        self.entries[idx] = v;
        Ok(())
    }

    pub fn apply(&self, delta: &GraphDelta) -> Result<Graph> {
        let mut g = self.clone();
        for &(i, j, v) in &delta.flips {
            g.set_in_place(i, j, v)?;
        }
        Ok(g)
    }

    pub fn hamming_distance(&self, other: &Graph) -> Result<usize> {
        if self.n != other.n || self.alphabet != other.alphabet {
            return Err(Error::ShapeMismatch(format!(
                "graphs ({}, {}) and ({}, {})",
                self.n,
                self.alphabet.name(),
                other.n,
                other.alphabet.name()
            )));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .filter(|(a, b)| a != b)
            .count())
    }

    /// Number of nonzero entries in row `i`.
    pub fn degree(&self, i: usize) -> usize {
        (0..self.n).filter(|&j| self.get(i, j) != 0).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for (idx, &v) in self.entries.iter().enumerate() {
            if v != 0 {
                let (i, j) = pair_from_index(self.n, idx);
                deg[i] += 1;
                deg[j] += 1;
            }
        }
        deg
    }

    pub fn edge_count(&self) -> usize {
        self.entries.iter().filter(|&&v| v != 0).count()
    }

    /// Nonzero entries as `(i, j, value)` with `i < j`, row-major.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, i8)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |i| {
            (i + 1..n).filter_map(move |j| {
                let v = self.entries[pair_index(n, i, j)];
                (v != 0).then_some((i, j, v))
            })
        })
    }

    /// Graphs at Hamming distance exactly `k`, each once.
    pub fn neighbors_at(&self, k: usize) -> NeighborsAt<'_> {
        NeighborsAt::new(self, k)
    }

    /// Every graph at distance `1..=radius`, in nondecreasing distance order.
    pub fn neighbors_within(&self, radius: usize) -> impl Iterator<Item = Graph> + '_ {
        (1..=radius).flat_map(move |k| self.neighbors_at(k))
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {} {}\n", self.n, self.alphabet.name());
        for (i, j, v) in self.edges() {
            match self.alphabet {
                Alphabet::Simple => writeln!(out, "{i} {j}").unwrap(),
                Alphabet::Censored => writeln!(out, "{i} {j} {v}").unwrap(),
            }
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 || parts[0] != "n" {
            return Err(Error::Parse {
                line: hline,
                msg: "header must be `n <count> <simple|censored>`".into(),
            });
        }
        let n: usize = parts[1].parse().map_err(|_| Error::Parse {
            line: hline,
            msg: format!("bad vertex count `{}`", parts[1]),
        })?;
        let alphabet: Alphabet = parts[2].parse().map_err(|_| Error::Parse {
            line: hline,
            msg: format!("bad alphabet `{}`", parts[2]),
        })?;

        let mut g = Graph::empty(n, alphabet);
        let mut seen = vec![false; pair_count(n)];
        for (line, body) in lines {
            let fields: Vec<&str> = body.split_whitespace().collect();
            let parse_err = |msg: String| Error::Parse { line, msg };
            let (i, j, v) = match (alphabet, fields.as_slice()) {
                (Alphabet::Simple, [i, j]) => (*i, *j, "1"),
                (_, [i, j, v]) => (*i, *j, *v),
                _ => return Err(parse_err(format!("malformed edge line `{body}`"))),
            };
            let i: usize = i.parse().map_err(|_| parse_err(format!("bad index `{i}`")))?;
            let j: usize = j.parse().map_err(|_| parse_err(format!("bad index `{j}`")))?;
            let v: i8 = v.parse().map_err(|_| parse_err(format!("bad label `{v}`")))?;
            if i >= n || j >= n || i == j {
                return Err(Error::IndexOutOfRange { i, j, n });
            }
            let (lo, hi) = (i.min(j), i.max(j));
            let idx = pair_index(n, lo, hi);
            if seen[idx] {
                return Err(Error::DuplicateEdge { line, i: lo, j: hi });
            }
            seen[idx] = true;
            if !alphabet.contains(v) {
                return Err(parse_err(format!(
                    "label {v} outside the {} alphabet",
                    alphabet.name()
                )));
            }
            g.entries[idx] = v;
        }
        Ok(g)
    }
}

/// A set of entry overwrites with distinct positions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphDelta {
    pub flips: Vec<(usize, usize, i8)>,
}

impl GraphDelta {
    pub fn new(flips: Vec<(usize, usize, i8)>) -> Result<Self> {
        let mut keys: Vec<(usize, usize)> = flips.iter().map(|&(i, j, _)| (i.min(j), i.max(j))).collect();
        keys.sort_unstable();
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams("delta positions must be distinct".into()));
        }
        Ok(GraphDelta { flips })
    }

    pub fn len(&self) -> usize {
        self.flips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }
}

/// Lazy enumeration of all graphs at one fixed Hamming distance.
///
/// Positions are visited as lexicographic `k`-combinations of packed pair
/// indices; for each combination every choice of alternative values is
/// produced before advancing.
pub struct NeighborsAt<'a> {
    base: &'a Graph,
    positions: Vec<usize>,
    choice: Vec<usize>,
    alternatives: Vec<Vec<i8>>,
    done: bool,
}

impl<'a> NeighborsAt<'a> {
    fn new(base: &'a Graph, k: usize) -> Self {
        let m = base.entries.len();
        let alternatives = (0..m)
            .map(|idx| {
                base.alphabet
                    .values()
                    .iter()
                    .copied()
                    .filter(|&v| v != base.entries[idx])
                    .collect()
            })
            .collect();
        NeighborsAt {
            base,
            positions: (0..k).collect(),
            choice: vec![0; k],
            alternatives,
            done: k == 0 || k > m,
        }
    }

    fn advance(&mut self) {
        // odometer over value choices first
        for slot in (0..self.choice.len()).rev() {
            let alts = self.alternatives[self.positions[slot]].len();
            if self.choice[slot] + 1 < alts {
                self.choice[slot] += 1;
                return;
            }
            self.choice[slot] = 0;
        }
        // then next combination of positions
        let k = self.positions.len();
        let m = self.base.entries.len();
        let mut s = k;
        while s > 0 {
            s -= 1;
            if self.positions[s] < m - k + s {
                self.positions[s] += 1;
                for t in s + 1..k {
                    self.positions[t] = self.positions[t - 1] + 1;
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for NeighborsAt<'_> {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        if self.done {
            return None;
        }
        let mut g = self.base.clone();
        for (&pos, &c) in self.positions.iter().zip(&self.choice) {
            g.entries[pos] = self.alternatives[pos][c];
        }
        self.advance();
        Some(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_roundtrip() {
        let n = 7;
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                assert_eq!(pair_index(n, i, j), k);
                assert_eq!(pair_from_index(n, k), (i, j));
                k += 1;
            }
        }
        assert_eq!(k, pair_count(n));
    }

    #[test]
    fn set_entry_on_empty() {
        let g = Graph::empty(3, Alphabet::Simple).set_entry(0, 1, 1).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1, 1)]);
        assert_eq!(g.get(1, 0), 1);
    }

    #[test]
    fn set_entry_idempotent() {
        let g = Graph::empty(4, Alphabet::Simple).set_entry(2, 3, 1).unwrap();
        assert_eq!(g.set_entry(3, 2, 1).unwrap(), g);
    }

    #[test]
    fn set_entry_errors() {
        let g = Graph::empty(3, Alphabet::Simple);
        assert!(matches!(g.set_entry(0, 3, 1), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(g.set_entry(1, 1, 1), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(g.set_entry(0, 1, -1), Err(Error::AlphabetViolation { .. })));
    }

    #[test]
    fn censored_label_flip_is_one_step() {
        let g = Graph::empty(3, Alphabet::Censored).set_entry(0, 1, 1).unwrap();
        let h = g.set_entry(0, 1, -1).unwrap();
        assert_eq!(g.hamming_distance(&h).unwrap(), 1);
    }

    #[test]
    fn hamming_examples() {
        let empty = Graph::empty(4, Alphabet::Simple);
        assert_eq!(empty.hamming_distance(&empty).unwrap(), 0);
        assert_eq!(empty.hamming_distance(&Graph::complete(4)).unwrap(), 6);
        let other = Graph::empty(4, Alphabet::Censored);
        assert!(matches!(empty.hamming_distance(&other), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn neighbor_counts() {
        assert_eq!(Graph::empty(3, Alphabet::Simple).neighbors_within(0).count(), 0);
        assert_eq!(Graph::empty(3, Alphabet::Simple).neighbors_within(1).count(), 3);
        assert_eq!(Graph::empty(3, Alphabet::Censored).neighbors_within(1).count(), 6);
        // 3 pairs: C(3,1) + C(3,2) + C(3,3)
        assert_eq!(Graph::empty(3, Alphabet::Simple).neighbors_within(5).count(), 7);
    }

    #[test]
    fn neighbors_are_distinct_and_ordered() {
        let g = Graph::empty(4, Alphabet::Censored).set_entry(0, 2, -1).unwrap();
        let all: Vec<Graph> = g.neighbors_within(2).collect();
        // 6 positions, 2 alternatives each: 6*2 + C(6,2)*4
        assert_eq!(all.len(), 12 + 15 * 4);
        let dists: Vec<usize> = all.iter().map(|h| g.hamming_distance(h).unwrap()).collect();
        assert!(dists.windows(2).all(|w| w[0] <= w[1]));
        let set: std::collections::HashSet<&Graph> = all.iter().collect();
        assert_eq!(set.len(), all.len());
    }

    #[test]
    fn edge_list_examples() {
        assert_eq!(Graph::empty(2, Alphabet::Simple).to_edge_list(), "n 2 simple\n");
        let g = Graph::from_edge_list("n 3 simple\n0 1").unwrap();
        assert_eq!(g.to_edge_list(), "n 3 simple\n0 1\n");
        let c = Graph::from_edge_list("n 3 censored\n0 2 -1\n").unwrap();
        assert_eq!(c.get(0, 2), -1);
        assert_eq!(c.get(2, 0), -1);
    }

    #[test]
    fn edge_list_errors() {
        assert!(matches!(
            Graph::from_edge_list("n 3 simple\n0 1\n1 0\n"),
            Err(Error::DuplicateEdge { line: 3, .. })
        ));
        assert!(matches!(
            Graph::from_edge_list("n 3 simple\n0 5\n"),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            Graph::from_edge_list("n 3 simple\n0 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Graph::from_edge_list("graph 3\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            Graph::from_edge_list("n 3 simple\n0 1 -1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
