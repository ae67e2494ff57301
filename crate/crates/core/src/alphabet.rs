//! Dependence alphabets: letters, letter sets and the dependence graph.
//!
//! Letters are small indices into the declared alphabet order. Subsets of the
//! alphabet are stored as 64-bit masks, which caps alphabets at 64 letters.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported alphabet.
pub const MAX_LETTERS: usize = 64;

/// Index of a letter in the declared alphabet order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

impl Letter {
    pub fn new(index: usize) -> Self {
        assert!(index < MAX_LETTERS, "letter index {index} out of range");
        Letter(index as u8)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A subset of the alphabet as a bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LetterSet(u64);

impl LetterSet {
    pub const EMPTY: LetterSet = LetterSet(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        LetterSet(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The first `n` letters `{a_1, ..., a_n}`.
    pub fn first_n(n: usize) -> Self {
        if n >= 64 {
            LetterSet(u64::MAX)
        } else {
            LetterSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(a: Letter) -> Self {
        LetterSet(1u64 << a.index())
    }

    #[inline]
    pub fn contains(self, a: Letter) -> bool {
        self.0 >> a.index() & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, a: Letter) {
        self.0 |= 1u64 << a.index();
    }

    #[inline]
    pub fn with(self, a: Letter) -> Self {
        LetterSet(self.0 | 1u64 << a.index())
    }

    #[inline]
    pub fn without(self, a: Letter) -> Self {
        LetterSet(self.0 & !(1u64 << a.index()))
    }

    #[inline]
    pub fn union(self, other: LetterSet) -> Self {
        LetterSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: LetterSet) -> Self {
        LetterSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: LetterSet) -> Self {
        LetterSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: LetterSet) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn intersects(self, other: LetterSet) -> bool {
        self.0 & other.0 != 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Least letter of the set.
    #[inline]
    pub fn first(self) -> Option<Letter> {
        (self.0 != 0).then(|| Letter(self.0.trailing_zeros() as u8))
    }

    /// Letters in ascending index order.
    pub fn iter(self) -> impl Iterator<Item = Letter> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros();
            bits &= bits - 1;
            Some(Letter(i as u8))
        })
    }
}

impl FromIterator<Letter> for LetterSet {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        let mut s = LetterSet::EMPTY;
        for a in iter {
            s.insert(a);
        }
        s
    }
}

impl fmt::Debug for LetterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.index())).finish()
    }
}

/// JSON document describing an alphabet and its dependence relation.
///
/// Reflexive pairs are implicit and the symmetric closure is taken on load.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphDocument {
    pub letters: Vec<String>,
    #[serde(default)]
    pub dependence: Vec<[String; 2]>,
}

/// An alphabet together with a reflexive and symmetric dependence relation.
///
/// Letters that are not related commute in the trace monoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependenceGraph {
    names: Vec<String>,
    links: Vec<LetterSet>,
}

impl DependenceGraph {
    /// Builds a graph from letter names and dependent pairs of names.
    pub fn new<S: AsRef<str>>(letters: &[S], dependence: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = letters.iter().map(|s| s.as_ref().to_string()).collect();
        let mut graph = Self::with_names(names)?;
        for (x, y) in dependence {
            let a = graph.letter(x.as_ref())?;
            let b = graph.letter(y.as_ref())?;
            graph.add_dependence(a, b);
        }
        Ok(graph)
    }

    /// Builds a graph on `n` letters named `a`, `b`, ... (or `a1`, `a2`, ...
    /// past 26 letters) from index pairs.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let names = (0..n).map(default_name).collect();
        let mut graph = Self::with_names(names)?;
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::input(format!("edge ({i}, {j}) out of range for {n} letters")));
            }
            graph.add_dependence(Letter::new(i), Letter::new(j));
        }
        Ok(graph)
    }

    fn with_names(names: Vec<String>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::input("alphabet must contain at least one letter"));
        }
        if names.len() > MAX_LETTERS {
            return Err(Error::input(format!(
                "alphabet has {} letters, at most {MAX_LETTERS} are supported",
                names.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.contains(['.', ' ', '[', ']', ',']) {
                return Err(Error::input(format!("invalid letter name {name:?}")));
            }
            if names[..i].contains(name) {
                return Err(Error::input(format!("duplicate letter {name:?}")));
            }
        }
        let links = (0..names.len()).map(|i| LetterSet::singleton(Letter::new(i))).collect();
        Ok(DependenceGraph { names, links })
    }

    fn add_dependence(&mut self, a: Letter, b: Letter) {
        self.links[a.index()].insert(b);
        self.links[b.index()].insert(a);
    }

    pub fn from_document(doc: &GraphDocument) -> Result<Self> {
        let pairs: Vec<(&str, &str)> =
            doc.dependence.iter().map(|[x, y]| (x.as_str(), y.as_str())).collect();
        let letters: Vec<&str> = doc.letters.iter().map(String::as_str).collect();
        Self::new(&letters, &pairs)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDocument = serde_json::from_str(text)?;
        Self::from_document(&doc)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_document(&self) -> GraphDocument {
        let mut dependence = Vec::new();
        for a in self.letters() {
            for b in self.link(a).iter().filter(|b| *b > a) {
                dependence.push([self.name(a).to_string(), self.name(b).to_string()]);
            }
        }
        GraphDocument { letters: self.names.clone(), dependence }
    }

    /// Path graph `a_1 - a_2 - ... - a_n`, the dependence graph of the dimer monoid.
    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges)
    }

    /// Cycle `a_1 - ... - a_n - a_1`.
    pub fn cycle(n: usize) -> Result<Self> {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        if n > 2 {
            edges.push((n - 1, 0));
        }
        Self::from_edges(n, &edges)
    }

    /// All letters dependent: the free monoid.
    pub fn complete(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::from_edges(n, &edges)
    }

    /// No two distinct letters dependent: the free commutative monoid.
    pub fn edgeless(n: usize) -> Result<Self> {
        Self::from_edges(n, &[])
    }

    /// The four-letter running example: `a - b - c - d`.
    pub fn running_example() -> Self {
        Self::path(4).expect("four letters are valid")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn alphabet(&self) -> LetterSet {
        LetterSet::first_n(self.len())
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).map(Letter::new)
    }

    pub fn name(&self, a: Letter) -> &str {
        &self.names[a.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn letter(&self, name: &str) -> Result<Letter> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(Letter::new)
            .ok_or_else(|| Error::input(format!("unknown letter {name:?}")))
    }

    /// Parses a comma separated list of letter names into a set.
    pub fn parse_set(&self, text: &str) -> Result<LetterSet> {
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|name| self.letter(name))
            .collect()
    }

    /// Parses a comma separated ordering that must be a permutation of the alphabet.
    pub fn parse_ordering(&self, text: &str) -> Result<Vec<Letter>> {
        let order: Vec<Letter> = text
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|name| self.letter(name))
            .collect::<Result<_>>()?;
        self.check_ordering(&order)?;
        Ok(order)
    }

    pub fn check_ordering(&self, order: &[Letter]) -> Result<()> {
        let set: LetterSet = order.iter().copied().collect();
        if order.len() != self.len() || set != self.alphabet() {
            return Err(Error::input("ordering must list every letter exactly once"));
        }
        Ok(())
    }

    pub fn format_set(&self, s: LetterSet) -> String {
        s.iter().map(|a| self.name(a)).collect::<Vec<_>>().join(",")
    }

    /// The link of `a`: every letter dependent on `a`, including `a` itself.
    #[inline]
    pub fn link(&self, a: Letter) -> LetterSet {
        self.links[a.index()]
    }

    /// Link of a letter given by name.
    pub fn link_of(&self, name: &str) -> Result<LetterSet> {
        self.letter(name).map(|a| self.link(a))
    }

    /// Union of the links of every letter of `s`.
    pub fn link_of_set(&self, s: LetterSet) -> LetterSet {
        s.iter().fold(LetterSet::EMPTY, |acc, a| acc.union(self.link(a)))
    }

    #[inline]
    pub fn depends(&self, a: Letter, b: Letter) -> bool {
        self.links[a.index()].contains(b)
    }

    /// Connected component of `a` in the subgraph induced on `within`.
    pub fn connected_component(&self, within: LetterSet, a: Letter) -> Result<LetterSet> {
        if a.index() >= self.len() || !within.contains(a) {
            return Err(Error::input("letter is not in the subset"));
        }
        Ok(self.component_unchecked(within, a))
    }

    pub(crate) fn component_unchecked(&self, within: LetterSet, a: Letter) -> LetterSet {
        let mut seen = LetterSet::singleton(a);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let next = self.link_of_set(frontier).intersection(within).difference(seen);
            seen = seen.union(next);
            frontier = next;
        }
        seen
    }

    /// Connected components of the subgraph induced on `within`, ordered by least letter.
    pub fn components(&self, within: LetterSet) -> Vec<LetterSet> {
        let mut rest = within.intersection(self.alphabet());
        let mut out = Vec::new();
        while let Some(a) = rest.first() {
            let c = self.component_unchecked(rest, a);
            rest = rest.difference(c);
            out.push(c);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components(self.alphabet()).len() == 1
    }

    /// True when the letters of `s` pairwise commute.
    pub fn is_clique(&self, s: LetterSet) -> bool {
        s.iter().all(|a| self.link(a).intersection(s) == LetterSet::singleton(a))
    }

    /// Every subset of `s` whose letters pairwise commute, including the
    /// empty set, in ascending bit-mask order.
    pub fn cliques(&self, s: LetterSet) -> Vec<LetterSet> {
        let mut out = Vec::new();
        self.extend_cliques(s.intersection(self.alphabet()), LetterSet::EMPTY, &mut out);
        out.sort_unstable();
        out
    }

    fn extend_cliques(&self, candidates: LetterSet, current: LetterSet, out: &mut Vec<LetterSet>) {
        out.push(current);
        let mut rest = candidates;
        while let Some(a) = rest.first() {
            rest = rest.without(a);
            // only letters above `a` so each clique is produced once
            self.extend_cliques(rest.difference(self.link(a)), current.with(a), out);
        }
    }

    /// Graph induced by relabelling letters so that `order[i]` becomes letter `i`.
    pub fn reordered(&self, order: &[Letter]) -> Result<Self> {
        self.check_ordering(order)?;
        let names = order.iter().map(|&a| self.names[a.index()].clone()).collect();
        let mut g = Self::with_names(names)?;
        for (i, &a) in order.iter().enumerate() {
            for (j, &b) in order.iter().enumerate() {
                if self.depends(a, b) {
                    g.links[i].insert(Letter::new(j));
                }
            }
        }
        Ok(g)
    }
}

fn default_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("a{}", i + 1)
    }
}
