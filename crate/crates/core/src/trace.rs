//! Traces as heaps of pieces: normal forms, maximal letters, divisibility and
//! the pyramidal factorization.

use std::fmt;

use crate::alphabet::{DependenceGraph, Letter, LetterSet};
use crate::error::{Error, Result};

/// A trace held as one of its representative words.
///
/// Two `Trace` values may hold different words for the same monoid element;
/// compare them with [`DependenceGraph::traces_equal`] or through their
/// [`NormalForm`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Trace {
    word: Vec<Letter>,
}

impl Trace {
    /// The unit element.
    pub fn empty() -> Self {
        Trace { word: Vec::new() }
    }

    pub fn from_word(word: Vec<Letter>) -> Self {
        Trace { word }
    }

    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn into_word(self) -> Vec<Letter> {
        self.word
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.word.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn push(&mut self, a: Letter) {
        self.word.push(a);
    }

    pub fn append(&mut self, other: &Trace) {
        self.word.extend_from_slice(&other.word);
    }

    pub fn concat(&self, other: &Trace) -> Trace {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Trace { word }
    }

    /// Number of occurrences of `a`.
    pub fn count(&self, a: Letter) -> usize {
        self.word.iter().filter(|&&b| b == a).count()
    }

    /// Set of letters occurring in the trace.
    pub fn alphabet(&self) -> LetterSet {
        self.word.iter().copied().collect()
    }
}

impl FromIterator<Letter> for Trace {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Trace { word: iter.into_iter().collect() }
    }
}

/// Cartier-Foata normal form: the sequence of non-empty cliques obtained by
/// repeatedly peeling off the minimal pieces of the heap.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NormalForm(pub Vec<LetterSet>);

impl NormalForm {
    pub fn cliques(&self) -> &[LetterSet] {
        &self.0
    }

    /// Length of the trace (total number of letters).
    pub fn trace_len(&self) -> usize {
        self.0.iter().map(|c| c.len()).sum()
    }

    /// The canonical representative: cliques in order, letters of each clique ascending.
    pub fn to_trace(&self) -> Trace {
        self.0.iter().flat_map(|c| c.iter()).collect()
    }
}

/// The factorization `u_0 ... u_{k-1} u_k` of a trace into pyramids for a
/// fixed anchor letter followed by an anchor-free tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PyramidalFactorization {
    pub anchor: Letter,
    pub pyramids: Vec<Trace>,
    pub tail: Trace,
}

impl PyramidalFactorization {
    pub fn concatenation(&self) -> Trace {
        let mut out = Trace::empty();
        for u in &self.pyramids {
            out.append(u);
        }
        out.append(&self.tail);
        out
    }
}

impl DependenceGraph {
    /// Parses `"b.a.b"` into a trace; the empty string is the unit.
    pub fn parse_trace(&self, text: &str) -> Result<Trace> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Trace::empty());
        }
        text.split('.').map(|name| self.letter(name.trim())).collect()
    }

    /// Serializes a trace as letter names joined by `.`.
    pub fn format_trace(&self, x: &Trace) -> String {
        x.word().iter().map(|&a| self.name(a)).collect::<Vec<_>>().join(".")
    }

    /// Serializes a normal form as `[b d][a d][b][c]`.
    pub fn format_normal_form(&self, nf: &NormalForm) -> String {
        nf.0.iter()
            .map(|c| format!("[{}]", c.iter().map(|a| self.name(a)).collect::<Vec<_>>().join(" ")))
            .collect()
    }

    pub fn display_trace<'a>(&'a self, x: &'a Trace) -> impl fmt::Display + 'a {
        DisplayTrace { graph: self, trace: x }
    }

    /// Level of every piece in the heap: one more than the highest dependent
    /// piece placed before it.
    fn levels(&self, x: &Trace) -> Vec<usize> {
        let mut top = vec![0usize; self.len()];
        x.word()
            .iter()
            .map(|&a| {
                let level = 1 + self.link(a).iter().map(|b| top[b.index()]).max().unwrap_or(0);
                top[a.index()] = level;
                level
            })
            .collect()
    }

    pub fn normal_form(&self, x: &Trace) -> NormalForm {
        let levels = self.levels(x);
        let height = levels.iter().copied().max().unwrap_or(0);
        let mut cliques = vec![LetterSet::EMPTY; height];
        for (&a, &lvl) in x.word().iter().zip(&levels) {
            cliques[lvl - 1].insert(a);
        }
        NormalForm(cliques)
    }

    pub fn traces_equal(&self, x: &Trace, y: &Trace) -> bool {
        x.len() == y.len() && self.normal_form(x) == self.normal_form(y)
    }

    /// Canonical representative of the trace.
    pub fn canonical(&self, x: &Trace) -> Trace {
        self.normal_form(x).to_trace()
    }

    /// Labels of the maximal pieces: the letters `x` can end with.
    pub fn max_letters(&self, x: &Trace) -> LetterSet {
        let mut covered = LetterSet::EMPTY;
        let mut max = LetterSet::EMPTY;
        for &a in x.word().iter().rev() {
            if !covered.contains(a) {
                max.insert(a);
            }
            covered = covered.union(self.link(a));
        }
        max
    }

    /// Labels of the minimal pieces: the letters `x` can start with.
    pub fn min_letters(&self, x: &Trace) -> LetterSet {
        let mut covered = LetterSet::EMPTY;
        let mut min = LetterSet::EMPTY;
        for &a in x.word() {
            if !covered.contains(a) {
                min.insert(a);
            }
            covered = covered.union(self.link(a));
        }
        min
    }

    /// Returns `z` such that `y = x . z`, or `None` when `x` is not a left divisor of `y`.
    ///
    /// Cancels the letters of `x` one at a time against minimal pieces of `y`.
    pub fn left_quotient(&self, x: &Trace, y: &Trace) -> Option<Trace> {
        if x.len() > y.len() {
            return None;
        }
        let mut rest: Vec<Letter> = y.word().to_vec();
        for &a in x.word() {
            let link = self.link(a);
            let pos = rest.iter().position(|&b| link.contains(b))?;
            if rest[pos] != a {
                return None;
            }
            rest.remove(pos);
        }
        Some(Trace::from_word(rest))
    }

    /// Left divisibility `x <= y`.
    pub fn left_divides(&self, x: &Trace, y: &Trace) -> bool {
        self.left_quotient(x, y).is_some()
    }

    /// Unique factorization of `x` into `anchor`-pyramidal traces followed by
    /// an anchor-free tail.
    ///
    /// A piece belongs to the pyramid of the earliest anchor occurrence lying
    /// above it in the heap, and to the tail when no anchor lies above it.
    pub fn pyramidal_decompose(&self, x: &Trace, anchor: Letter) -> PyramidalFactorization {
        const NONE: usize = usize::MAX;
        let k = x.count(anchor);
        let mut owner = vec![NONE; x.len()];
        // best[b]: smallest owner among already scanned (later) pieces labelled b
        let mut best = vec![NONE; self.len()];
        let mut occurrence = k;
        for (i, &a) in x.word().iter().enumerate().rev() {
            let mut o = self.link(a).iter().map(|b| best[b.index()]).min().unwrap_or(NONE);
            if a == anchor {
                occurrence -= 1;
                o = occurrence;
            }
            owner[i] = o;
            let slot = &mut best[a.index()];
            *slot = (*slot).min(o);
        }
        let mut pyramids = vec![Trace::empty(); k];
        let mut tail = Trace::empty();
        for (&a, &o) in x.word().iter().zip(&owner) {
            if o == NONE {
                tail.push(a);
            } else {
                pyramids[o].push(a);
            }
        }
        PyramidalFactorization { anchor, pyramids, tail }
    }

    /// One occurrence of `anchor` and `max(x) = {anchor}`.
    pub fn is_pyramidal(&self, x: &Trace, anchor: Letter) -> bool {
        x.count(anchor) == 1 && self.max_letters(x) == LetterSet::singleton(anchor)
    }

    /// Checks that every letter of `x` belongs to this graph.
    pub fn check_trace(&self, x: &Trace) -> Result<()> {
        match x.word().iter().find(|a| a.index() >= self.len()) {
            Some(a) => Err(Error::input(format!("letter index {} not in alphabet", a.index()))),
            None => Ok(()),
        }
    }
}

struct DisplayTrace<'a> {
    graph: &'a DependenceGraph,
    trace: &'a Trace,
}

impl fmt::Display for DisplayTrace<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.graph.format_trace(self.trace))
    }
}
