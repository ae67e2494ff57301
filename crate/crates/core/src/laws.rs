//! Exact laws on traces: the weights `mu_S(p) p^|x|`, their conditioning on
//! the set of maximal letters, the geometric parameter of the pyramidal
//! decomposition, and a brute-force enumeration oracle.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::alphabet::{DependenceGraph, Letter, LetterSet};
use crate::error::{Error, Result};
use crate::mobius::{MobiusTable, DEFAULT_ROOT_TOLERANCE};
use crate::stats::{geometric_fit, GoodnessOfFit};
use crate::trace::{NormalForm, Trace};

/// Largest sub-alphabet the enumeration oracle accepts.
pub const ORACLE_MAX_LETTERS: usize = 5;
/// Longest traces the enumeration oracle enumerates.
pub const ORACLE_MAX_HORIZON: usize = 10;

/// Tolerated gap between the two closed forms of the geometric parameter.
const GEOMETRIC_FORMS_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LawMode {
    /// `B_{Sigma,p}`.
    Unconditioned,
    /// `D_{Sigma,T}`: `B_{Sigma,p}` conditioned on `max(x)` being inside `T`.
    Conditioned(LetterSet),
}

/// A law on the whole trace monoid at a parameter strictly below the critical root.
#[derive(Clone, Debug)]
pub struct TraceLaw {
    table: Arc<MobiusTable>,
    mode: LawMode,
    critical: f64,
}

impl TraceLaw {
    pub fn new(table: Arc<MobiusTable>, mode: LawMode) -> Result<Self> {
        let g = table.graph();
        let critical = g.critical_root(g.alphabet(), DEFAULT_ROOT_TOLERANCE)?.value;
        if table.p() >= critical {
            return Err(Error::domain(format!(
                "p = {} is not below the critical root {critical}",
                table.p()
            )));
        }
        if let LawMode::Conditioned(t) = mode {
            if !t.is_subset(g.alphabet()) {
                return Err(Error::input("conditioning set outside the alphabet"));
            }
        }
        Ok(TraceLaw { table, mode, critical })
    }

    pub fn unconditioned(table: Arc<MobiusTable>) -> Result<Self> {
        Self::new(table, LawMode::Unconditioned)
    }

    pub fn conditioned(table: Arc<MobiusTable>, max_set: LetterSet) -> Result<Self> {
        Self::new(table, LawMode::Conditioned(max_set))
    }

    pub fn mode(&self) -> LawMode {
        self.mode
    }

    pub fn critical(&self) -> f64 {
        self.critical
    }

    pub fn table(&self) -> &MobiusTable {
        &self.table
    }

    /// `mu_Sigma(p) p^|x|`.
    pub fn b_weight(&self, x: &Trace) -> f64 {
        let g = self.table.graph();
        self.table.value(g.alphabet()) * self.table.p().powi(x.len() as i32)
    }

    /// Mass of `{x : max(x) in T}` under `B_{Sigma,p}`, which equals `mu_{Sigma \ T}(p)`.
    pub fn normalizer(&self) -> f64 {
        match self.mode {
            LawMode::Unconditioned => 1.0,
            LawMode::Conditioned(t) => {
                self.table.value(self.table.graph().alphabet().difference(t))
            }
        }
    }

    /// Probability of `x` under the law.
    pub fn conditional_weight(&self, x: &Trace) -> Result<f64> {
        let t = match self.mode {
            LawMode::Unconditioned => return Ok(self.b_weight(x)),
            LawMode::Conditioned(t) => t,
        };
        if !self.table.graph().max_letters(x).is_subset(t) {
            return Ok(0.0);
        }
        let z = self.normalizer();
        if z <= 0.0 {
            return Err(Error::domain("conditioning event has no mass"));
        }
        Ok(self.b_weight(x) / z)
    }
}

/// Parameter `r` of the geometric law of the number of occurrences of `a1`
/// under `D_{S,T}` for any `T` containing `a1`.
///
/// Both closed forms `p mu_{S\L(a1)} / mu_{S\{a1}}` and
/// `1 - mu_S / mu_{S\{a1}}` are computed and must agree.
pub fn geometric_param(table: &MobiusTable, s: LetterSet, a1: Letter) -> Result<f64> {
    if !s.contains(a1) {
        return Err(Error::input("anchor letter is not in the sub-alphabet"));
    }
    let g = table.graph();
    let without = table.value(s.without(a1));
    if without <= 0.0 {
        return Err(Error::domain(format!(
            "mu of the sub-alphabet without the anchor is {without} at p = {}",
            table.p()
        )));
    }
    let through_link = table.p() * table.value(s.difference(g.link(a1))) / without;
    let whole = table.value(s).max(0.0);
    let through_whole = 1.0 - whole / without;
    if (through_link - through_whole).abs() > GEOMETRIC_FORMS_TOLERANCE {
        return Err(Error::Internal(format!(
            "geometric parameter forms disagree: {through_link} vs {through_whole}"
        )));
    }
    if !(0.0..1.0).contains(&through_whole) {
        return Err(Error::domain(format!("geometric parameter {through_whole} outside [0, 1)")));
    }
    Ok(through_whole)
}

/// Chi-square test of anchor-occurrence counts against the geometric law.
pub fn k_law_check(samples: &[u64], r: f64) -> Result<GoodnessOfFit> {
    geometric_fit(samples, r)
}

/// All traces over `s` of each length up to `max_len`, by brute-force
/// extension and deduplication of normal forms.
pub fn enumerate_traces(g: &DependenceGraph, s: LetterSet, max_len: usize) -> Vec<Vec<NormalForm>> {
    let mut levels = vec![vec![NormalForm::default()]];
    for _ in 0..max_len {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for nf in levels.last().expect("at least the unit level") {
            let base = nf.to_trace();
            for a in s.iter() {
                let mut x = base.clone();
                x.push(a);
                let y = g.normal_form(&x);
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        next.sort();
        levels.push(next);
    }
    levels
}

/// Exact probabilities of every trace up to a horizon under `D_{S,T}` at a rational `p`.
#[derive(Clone, Debug)]
pub struct ExactTable {
    pub entries: BTreeMap<NormalForm, BigRational>,
    pub horizon: usize,
    /// Upper bound on the mass of traces longer than the horizon.
    pub tail_bound: f64,
}

impl ExactTable {
    pub fn total(&self) -> BigRational {
        self.entries.values().fold(BigRational::zero(), |acc, w| acc + w)
    }

    pub fn probability(&self, nf: &NormalForm) -> f64 {
        self.entries.get(nf).map_or(0.0, ratio_to_f64)
    }

    /// Entries as floating point probabilities.
    pub fn to_f64(&self) -> BTreeMap<NormalForm, f64> {
        self.entries.iter().map(|(k, v)| (k.clone(), ratio_to_f64(v))).collect()
    }

    /// Entries restricted to traces of length at most `len`.
    pub fn up_to_length(&self, len: usize) -> BTreeMap<NormalForm, f64> {
        self.entries
            .iter()
            .filter(|(k, _)| k.trace_len() <= len)
            .map(|(k, v)| (k.clone(), ratio_to_f64(v)))
            .collect()
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"1/5"` or `"0.2"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::input(format!("cannot parse {text:?} as a rational number"));
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !frac.chars().all(|c| c.is_ascii_digit()) || frac.len() > 30 {
        return Err(bad());
    }
    let digits: BigInt = format!("{}{frac}", if int.is_empty() { "0" } else { int })
        .parse()
        .map_err(|_| bad())?;
    Ok(BigRational::new(digits, BigInt::from(10u8).pow(frac.len() as u32)))
}

/// Exact table of `D_{S,T}` at rational `p` over traces of length up to `horizon`.
///
/// The weight of `x` is `mu_S(p) p^|x| / mu_{S \ T}(p)` when `max(x)` lies in `T`.
pub fn exact_distribution(
    g: &DependenceGraph,
    p: &BigRational,
    s: LetterSet,
    t: LetterSet,
    horizon: usize,
) -> Result<ExactTable> {
    if s.len() > ORACLE_MAX_LETTERS || horizon > ORACLE_MAX_HORIZON {
        return Err(Error::input(format!(
            "enumeration oracle limited to {ORACLE_MAX_LETTERS} letters and horizon {ORACLE_MAX_HORIZON}"
        )));
    }
    if !s.is_subset(g.alphabet()) || !t.is_subset(g.alphabet()) {
        return Err(Error::input("subset outside the alphabet"));
    }
    if !p.is_positive() || p >= &BigRational::one() {
        return Err(Error::domain("p must lie in (0, 1)"));
    }
    let pf = ratio_to_f64(p);
    if !s.is_empty() && pf >= g.critical_root(s, DEFAULT_ROOT_TOLERANCE)?.value {
        return Err(Error::domain(format!("p = {pf} is not below the critical root of S")));
    }
    let mu_s = g.mobius_poly(s).eval_rational(p);
    let z = g.mobius_poly(s.difference(t)).eval_rational(p);
    if !z.is_positive() || !mu_s.is_positive() {
        return Err(Error::domain("normalizer is not positive"));
    }
    let scale = &mu_s / &z;
    let mut entries = BTreeMap::new();
    let mut power = BigRational::one();
    for level in enumerate_traces(g, s, horizon) {
        for nf in level {
            if g.max_letters(&nf.to_trace()).is_subset(t) {
                entries.insert(nf, &scale * &power);
            }
        }
        power *= p;
    }
    let tail_bound = series_tail(g, s, t, pf, horizon) * ratio_to_f64(&scale);
    Ok(ExactTable { entries, horizon, tail_bound })
}

/// `sum_{j > h} g_j p^j` for the coefficients of `G_{S,T}`, by the floating
/// point recurrence on `a_j = g_j p^j`, stopped once terms fall below 1e-15.
fn series_tail(g: &DependenceGraph, s: LetterSet, t: LetterSet, p: f64, horizon: usize) -> f64 {
    let num = g.mobius_poly(s.difference(t));
    let den = g.mobius_poly(s);
    let scaled_den: Vec<f64> =
        den.coefficients().iter().enumerate().map(|(i, &c)| c as f64 * p.powi(i as i32)).collect();
    let mut terms: Vec<f64> = Vec::new();
    let mut tail = 0.0;
    for j in 0..1_000_000usize {
        let mut a = num.coefficients().get(j).map_or(0.0, |&c| c as f64 * p.powi(j as i32));
        for i in 1..=j.min(scaled_den.len() - 1) {
            a -= scaled_den[i] * terms[j - i];
        }
        terms.push(a);
        if j > horizon {
            tail += a;
            if a.abs() < 1e-15 && j > horizon + den.degree() {
                break;
            }
        }
    }
    tail.max(0.0)
}
