use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::alphabet::{Letter, LetterSet};
use crate::error::{Error, Result};
use crate::mobius::MobiusTable;
use crate::sampler::random::{sample_bernoulli, sample_geometric};
use crate::trace::Trace;

/// Counters of the repeat loop of the rejection sampler.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RejectionStats {
    /// Iterations of the repeat loop.
    pub attempts: u64,
    /// Discarded tail draws.
    pub rejections: u64,
    /// Letters emitted.
    pub letters: u64,
}

impl RejectionStats {
    pub fn accepted(&self) -> u64 {
        self.attempts - self.rejections
    }

    pub fn merge(&mut self, other: &RejectionStats) {
        self.attempts += other.attempts;
        self.rejections += other.rejections;
        self.letters += other.letters;
    }
}

/// Sampler of `D_{Sigma_k, L(a_l)}` for an enumeration `a_1, ..., a_n`,
/// where `Sigma_k = {a_1, ..., a_k}`.
///
/// Only the prefix values `mu_{Sigma_k}(p)` are ever evaluated.
#[derive(Clone, Debug)]
pub struct RejectionSampler {
    table: Arc<MobiusTable>,
    ordering: Vec<Letter>,
    /// `prefixes[k] = Sigma_k`
    prefixes: Vec<LetterSet>,
    /// `components[k]` is the component of `a_k` in `Sigma_k` (unused at 0)
    components: Vec<LetterSet>,
    /// `ratios[k] = 1 - mu_{Sigma_k}(p) / mu_{Sigma_{k-1}}(p)`
    ratios: Vec<f64>,
}

impl RejectionSampler {
    /// `ordering` defaults to the declared letter order.
    pub fn new(table: Arc<MobiusTable>, ordering: Option<Vec<Letter>>) -> Result<Self> {
        let g = table.graph();
        let ordering = ordering.unwrap_or_else(|| g.letters().collect());
        g.check_ordering(&ordering)?;
        let n = ordering.len();
        let mut prefixes = Vec::with_capacity(n + 1);
        let mut acc = LetterSet::EMPTY;
        prefixes.push(acc);
        for &a in &ordering {
            acc.insert(a);
            prefixes.push(acc);
        }
        let mut components = vec![LetterSet::EMPTY];
        let mut ratios = vec![0.0];
        for k in 1..=n {
            components.push(g.component_unchecked(prefixes[k], ordering[k - 1]));
            let below = table.value(prefixes[k - 1]);
            ratios.push(1.0 - table.value(prefixes[k]).max(0.0) / below);
        }
        Ok(RejectionSampler { table, ordering, prefixes, components, ratios })
    }

    pub fn ordering(&self) -> &[Letter] {
        &self.ordering
    }

    pub fn table(&self) -> &MobiusTable {
        &self.table
    }

    /// `Sigma_k`.
    pub fn prefix(&self, k: usize) -> LetterSet {
        self.prefixes[k]
    }

    /// Letter `a_l` for `1 <= l <= n`.
    pub fn letter(&self, l: usize) -> Letter {
        self.ordering[l - 1]
    }

    /// Draws a trace of `D_{Sigma_k, L(a_l)}` for `0 <= k < l <= n`; requires `p < p_{Sigma_k}`.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        k: usize,
        l: usize,
        rng: &mut R,
        stats: &mut RejectionStats,
    ) -> Result<Trace> {
        let n = self.ordering.len();
        if !(k < l && l <= n) {
            return Err(Error::input(format!("need 0 <= k < l <= {n}, got k = {k}, l = {l}")));
        }
        self.table.ensure_subcritical(self.prefixes[k])?;
        let mut word = Vec::new();
        self.fill(k, l, rng, &mut word, stats)?;
        stats.letters += word.len() as u64;
        Ok(Trace::from_word(word))
    }

    pub(crate) fn fill<R: Rng + ?Sized>(
        &self,
        k: usize,
        l: usize,
        rng: &mut R,
        out: &mut Vec<Letter>,
        stats: &mut RejectionStats,
    ) -> Result<()> {
        let g = self.table.graph();
        let target = g.link(self.letter(l));
        if !self.prefixes[k].intersects(target) {
            return Ok(());
        }
        let ak = self.letter(k);
        let r = if self.components[k].intersects(target) { self.ratios[k] } else { 0.0 };
        if !(0.0..1.0).contains(&r) {
            return Err(Error::domain(format!("geometric parameter {r} outside [0, 1)")));
        }
        let ak_in_target = target.contains(ak);
        let ak_link = g.link(ak);
        let start = out.len();
        let pyramids = loop {
            stats.attempts += 1;
            let pyramids = sample_bernoulli(r, rng);
            self.fill(k - 1, l, rng, out, stats)?;
            // v_inf fails only when it commutes with a_k while a_k is not in L(a_l)
            if !pyramids || ak_in_target || out[start..].iter().any(|&b| ak_link.contains(b)) {
                break pyramids;
            }
            stats.rejections += 1;
            out.truncate(start);
        };
        if pyramids {
            let tail = out.split_off(start);
            let count = 1 + sample_geometric(r, rng)?;
            for _ in 0..count {
                self.fill(k - 1, k, rng, out, stats)?;
                out.push(ak);
            }
            out.extend_from_slice(&tail);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::DependenceGraph;
    use crate::sampler::random::seeded;

    fn sampler(g: DependenceGraph, p: f64, order: Option<&str>) -> RejectionSampler {
        let order = order.map(|o| g.parse_ordering(o).unwrap());
        let t = MobiusTable::new(Arc::new(g), p).unwrap();
        RejectionSampler::new(Arc::new(t), order).unwrap()
    }

    #[test]
    fn empty_prefix_gives_unit() {
        let s = sampler(DependenceGraph::running_example(), 0.2, None);
        let mut stats = RejectionStats::default();
        let x = s.sample(0, 4, &mut seeded(0), &mut stats).unwrap();
        assert!(x.is_empty());
        assert_eq!(stats.attempts, 0);
    }

    #[test]
    fn natural_path_order_never_rejects() {
        let s = sampler(DependenceGraph::running_example(), 0.3, None);
        let mut stats = RejectionStats::default();
        let mut rng = seeded(4);
        for _ in 0..20_000 {
            s.sample(3, 4, &mut rng, &mut stats).unwrap();
        }
        assert_eq!(stats.rejections, 0);
        assert!(stats.attempts > 0);
    }

    #[test]
    fn cycle_rejects() {
        let s = sampler(DependenceGraph::cycle(4).unwrap(), 0.3, None);
        let mut stats = RejectionStats::default();
        let mut rng = seeded(4);
        for _ in 0..20_000 {
            s.sample(3, 4, &mut rng, &mut stats).unwrap();
        }
        assert!(stats.rejections > 0);
        assert_eq!(stats.accepted() + stats.rejections, stats.attempts);
    }

    #[test]
    fn support() {
        let s = sampler(DependenceGraph::cycle(5).unwrap(), 0.25, Some("c,a,e,b,d"));
        let g = s.table().graph().clone();
        let mut stats = RejectionStats::default();
        let mut rng = seeded(8);
        for k in 0..5 {
            for l in k + 1..=5 {
                for _ in 0..300 {
                    let x = s.sample(k, l, &mut rng, &mut stats).unwrap();
                    assert!(x.alphabet().is_subset(s.prefix(k)));
                    assert!(g.max_letters(&x).is_subset(g.link(s.letter(l))));
                }
            }
        }
    }

    #[test]
    fn argument_checks() {
        let s = sampler(DependenceGraph::running_example(), 0.2, None);
        let mut stats = RejectionStats::default();
        let mut rng = seeded(0);
        assert!(s.sample(2, 2, &mut rng, &mut stats).is_err());
        assert!(s.sample(2, 5, &mut rng, &mut stats).is_err());
        // p_{abc} is about 0.382
        let hot = sampler(DependenceGraph::running_example(), 0.39, None);
        assert!(matches!(hot.sample(3, 4, &mut rng, &mut stats), Err(Error::Domain(_))));
    }
}
