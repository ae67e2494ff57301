use std::sync::Arc;

use serde::Serialize;

use crate::alphabet::{DependenceGraph, Letter};
use crate::error::{Error, Result};
use crate::mobius::MobiusTable;
use crate::sampler::direct::{DirectSampler, SampleCost};
use crate::sampler::random::{seeded, SeededRng};
use crate::sampler::rejection::{RejectionSampler, RejectionStats};
use crate::trace::Trace;

/// Sampling parameter: a value in `(0, 1]` or the critical root `p_Sigma`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Parameter {
    Value(f64),
    Critical,
}

impl Parameter {
    pub fn resolve(self, graph: &DependenceGraph) -> Result<f64> {
        match self {
            Parameter::Value(p) => Ok(p),
            Parameter::Critical => Ok(graph.critical_root(graph.alphabet(), crate::mobius::DEFAULT_ROOT_TOLERANCE)?.value),
        }
    }
}

/// Which endless sampler to run and with what anchor or ordering.
#[derive(Clone, Debug)]
pub struct SamplerConfig {
    pub graph: Arc<DependenceGraph>,
    pub parameter: Parameter,
    /// Anchor of the direct stream, the last letter when absent.
    pub anchor: Option<Letter>,
    /// Enumeration for the rejection samplers, the declared order when absent.
    pub ordering: Option<Vec<Letter>>,
    pub seed: u64,
}

impl SamplerConfig {
    pub fn new(graph: Arc<DependenceGraph>, seed: u64) -> Self {
        SamplerConfig { graph, parameter: Parameter::Critical, anchor: None, ordering: None, seed }
    }

    pub fn table(&self) -> Result<Arc<MobiusTable>> {
        let p = self.parameter.resolve(&self.graph)?;
        Ok(Arc::new(MobiusTable::new(Arc::clone(&self.graph), p)?))
    }
}

#[derive(Clone, Debug)]
enum Engine {
    Direct { sampler: DirectSampler, anchor: Letter },
    Rejection { sampler: RejectionSampler },
}

/// Factory of prefix streams for the uniform measure at infinity.
///
/// All streams created from one factory share its Möbius table.
#[derive(Clone, Debug)]
pub struct UniformSampler {
    engine: Engine,
}

impl UniformSampler {
    /// Pyramids of the anchor drawn by the recursive sampler.
    pub fn direct(graph: Arc<DependenceGraph>, anchor: Option<Letter>) -> Result<Self> {
        let table = critical_table(graph)?;
        let g = table.graph();
        let anchor = anchor.unwrap_or_else(|| Letter::new(g.len() - 1));
        if anchor.index() >= g.len() {
            return Err(Error::input("anchor letter is not in the alphabet"));
        }
        table.ensure_subcritical(g.alphabet().without(anchor))?;
        Ok(UniformSampler { engine: Engine::Direct { sampler: DirectSampler::new(table), anchor } })
    }

    /// Pyramids of the last letter of `ordering` drawn by the rejection sampler.
    pub fn rejection(graph: Arc<DependenceGraph>, ordering: Option<Vec<Letter>>) -> Result<Self> {
        let table = critical_table(graph)?;
        let sampler = RejectionSampler::new(table, ordering)?;
        let n = sampler.ordering().len();
        sampler.table().ensure_subcritical(sampler.prefix(n - 1))?;
        Ok(UniformSampler { engine: Engine::Rejection { sampler } })
    }

    pub fn from_config(config: &SamplerConfig, rejection: bool) -> Result<Self> {
        if config.parameter != Parameter::Critical {
            return Err(Error::input("streams always run at the critical parameter"));
        }
        if rejection {
            UniformSampler::rejection(Arc::clone(&config.graph), config.ordering.clone())
        } else {
            UniformSampler::direct(Arc::clone(&config.graph), config.anchor)
        }
    }

    pub fn table(&self) -> &MobiusTable {
        match &self.engine {
            Engine::Direct { sampler, .. } => sampler.table(),
            Engine::Rejection { sampler } => sampler.table(),
        }
    }

    pub fn graph(&self) -> &DependenceGraph {
        self.table().graph()
    }

    /// The letter closing every increment.
    pub fn anchor(&self) -> Letter {
        match &self.engine {
            Engine::Direct { anchor, .. } => *anchor,
            Engine::Rejection { sampler } => sampler.letter(sampler.ordering().len()),
        }
    }

    pub fn is_rejection(&self) -> bool {
        matches!(self.engine, Engine::Rejection { .. })
    }

    pub fn stream(&self, seed: u64) -> PrefixStream {
        PrefixStream {
            sampler: self.clone(),
            prefix: Trace::empty(),
            loops: 0,
            rng: seeded(seed),
            stats: RejectionStats::default(),
        }
    }

    /// Appends one increment `v a` to `out`.
    fn increment(&self, rng: &mut SeededRng, out: &mut Vec<Letter>, stats: &mut RejectionStats) -> Result<()> {
        match &self.engine {
            Engine::Direct { sampler, anchor } => {
                let g = sampler.table().graph();
                let mut cost = SampleCost::default();
                sampler.fill(g.alphabet().without(*anchor), g.link(*anchor), rng, out, &mut cost)?;
                out.push(*anchor);
            }
            Engine::Rejection { sampler } => {
                let n = sampler.ordering().len();
                sampler.fill(n - 1, n, rng, out, stats)?;
                out.push(sampler.letter(n));
            }
        }
        Ok(())
    }
}

fn critical_table(graph: Arc<DependenceGraph>) -> Result<Arc<MobiusTable>> {
    if !graph.is_connected() {
        return Err(Error::domain("streaming needs a connected dependence graph"));
    }
    let config = SamplerConfig::new(graph, 0);
    config.table()
}

/// One loop of a prefix stream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamStep {
    /// Loop counter, starting at 1.
    pub loop_index: u64,
    /// The anchor-pyramidal trace appended in this loop.
    pub increment: Trace,
    /// Length of the prefix after this loop.
    pub total_length: usize,
    /// Cumulative rejections, always 0 for the direct stream.
    pub rejections: u64,
}

/// Endless sequence of growing prefixes `xi_1 <= xi_2 <= ...` of an infinite
/// trace under the uniform measure.
#[derive(Clone, Debug)]
pub struct PrefixStream {
    sampler: UniformSampler,
    prefix: Trace,
    loops: u64,
    rng: SeededRng,
    stats: RejectionStats,
}

impl PrefixStream {
    pub fn step(&mut self) -> Result<StreamStep> {
        let mut word = std::mem::take(&mut self.prefix).into_word();
        let start = word.len();
        let outcome = self.sampler.increment(&mut self.rng, &mut word, &mut self.stats);
        if outcome.is_err() {
            word.truncate(start);
        }
        let increment = Trace::from_word(word[start..].to_vec());
        self.stats.letters += increment.len() as u64;
        self.prefix = Trace::from_word(word);
        outcome?;
        self.loops += 1;
        Ok(StreamStep {
            loop_index: self.loops,
            increment,
            total_length: self.prefix.len(),
            rejections: self.stats.rejections,
        })
    }

    /// Runs loops until the prefix is longer than `letters`.
    pub fn run_past(&mut self, letters: usize) -> Result<()> {
        while self.prefix.len() <= letters {
            self.step()?;
        }
        Ok(())
    }

    pub fn prefix(&self) -> &Trace {
        &self.prefix
    }

    pub fn loops(&self) -> u64 {
        self.loops
    }

    pub fn stats(&self) -> &RejectionStats {
        &self.stats
    }

    pub fn sampler(&self) -> &UniformSampler {
        &self.sampler
    }
}

impl Iterator for PrefixStream {
    type Item = Result<StreamStep>;

    fn next(&mut self) -> Option<Self::Item> {
        Some(self.step())
    }
}
