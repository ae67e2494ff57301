use std::sync::Arc;

use rand::Rng;

use crate::alphabet::{Letter, LetterSet};
use crate::error::Result;
use crate::laws::geometric_param;
use crate::mobius::MobiusTable;
use crate::sampler::random::sample_geometric;
use crate::trace::Trace;

/// Work done by one call of [`DirectSampler::sample_counted`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SampleCost {
    /// Recursive invocations, the first one included.
    pub calls: u64,
    /// Letters appended to the output.
    pub letters: u64,
}

impl SampleCost {
    /// Calls plus letters, a proxy for the number of elementary steps.
    pub fn steps(&self) -> u64 {
        self.calls + self.letters
    }
}

/// Exact sampler of `D_{S,T}` by recursion on the alphabet.
///
/// With `a1` the least letter of `S ∩ T`, the number of `a1`-pyramids is
/// geometric; each pyramid is a sample of `D_{S\{a1}, L(a1)}` followed by
/// `a1`, and the tail is a sample of `D_{S\{a1}, T}`.
#[derive(Clone, Debug)]
pub struct DirectSampler {
    table: Arc<MobiusTable>,
}

impl DirectSampler {
    pub fn new(table: Arc<MobiusTable>) -> Self {
        DirectSampler { table }
    }

    pub fn table(&self) -> &MobiusTable {
        &self.table
    }

    /// Draws a trace of `D_{S,T}`; requires `p < p_S`.
    pub fn sample<R: Rng + ?Sized>(&self, s: LetterSet, t: LetterSet, rng: &mut R) -> Result<Trace> {
        self.sample_counted(s, t, rng).map(|(x, _)| x)
    }

    pub fn sample_counted<R: Rng + ?Sized>(
        &self,
        s: LetterSet,
        t: LetterSet,
        rng: &mut R,
    ) -> Result<(Trace, SampleCost)> {
        self.table.ensure_subcritical(s)?;
        let mut word = Vec::new();
        let mut cost = SampleCost::default();
        self.fill(s, t, rng, &mut word, &mut cost)?;
        cost.letters = word.len() as u64;
        Ok((Trace::from_word(word), cost))
    }

    /// Appends a sample to `out`, skipping the subcriticality check.
    pub(crate) fn fill<R: Rng + ?Sized>(
        &self,
        s: LetterSet,
        t: LetterSet,
        rng: &mut R,
        out: &mut Vec<Letter>,
        cost: &mut SampleCost,
    ) -> Result<()> {
        cost.calls += 1;
        let Some(a1) = s.intersection(t).first() else {
            return Ok(());
        };
        let r = geometric_param(&self.table, s, a1)?;
        let k = sample_geometric(r, rng)?;
        let rest = s.without(a1);
        let link = self.table.graph().link(a1);
        for _ in 0..k {
            self.fill(rest, link, rng, out, cost)?;
            out.push(a1);
        }
        self.fill(rest, t, rng, out, cost)
    }
}
