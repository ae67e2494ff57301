//! Graph diagnostics for the rejection sampler and Monte-Carlo estimation of
//! Möbius values.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::alphabet::{DependenceGraph, Letter, LetterSet};
use crate::error::{Error, Result};
use crate::mobius::{MobiusTable, DEFAULT_ROOT_TOLERANCE};
use crate::sampler::{DirectSampler, PrefixStream};

/// Orderings are searched exhaustively only up to this many letters.
pub const EXHAUSTIVE_MAX_LETTERS: usize = 8;

/// Chordality and rejection-freeness of an enumeration `a_1, ..., a_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderingReport {
    pub ordering: Vec<String>,
    pub chordal: bool,
    pub rejection_free: bool,
    /// A perfect elimination ordering, present exactly when the graph is chordal.
    pub peo_found: Option<Vec<String>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateReport {
    pub tau: f64,
    pub expected_pyramid_length: f64,
    pub p_critical: f64,
}

/// Lexicographic breadth-first search; ties go to the least letter.
///
/// Returns the visit order. Its reverse is a perfect elimination ordering
/// exactly when the graph is chordal.
pub fn lex_bfs(g: &DependenceGraph) -> Vec<Letter> {
    let n = g.len();
    // labels[v] lists visit ranks of visited neighbours, largest first
    let mut labels: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut visited = LetterSet::EMPTY;
    let mut order = Vec::with_capacity(n);
    for rank in 0..n {
        let v = g
            .alphabet()
            .difference(visited)
            .iter()
            .max_by(|x, y| labels[x.index()].cmp(&labels[y.index()]).then(y.cmp(x)))
            .expect("unvisited letter remains");
        visited.insert(v);
        order.push(v);
        for w in g.link(v).difference(visited).iter() {
            // ranks decrease along the label, so appending keeps lexicographic order
            labels[w.index()].push(n - rank);
        }
    }
    order
}

/// True when each letter's neighbours later in `order` pairwise depend.
pub fn is_perfect_elimination(g: &DependenceGraph, order: &[Letter]) -> bool {
    let mut later = g.alphabet();
    for &v in order {
        later = later.without(v);
        let nbrs = g.link(v).intersection(later);
        if !nbrs.iter().all(|w| nbrs.is_subset(g.link(w))) {
            return false;
        }
    }
    true
}

/// Lex-BFS certificate: a perfect elimination ordering, or `None` when the
/// dependence graph is not chordal.
pub fn perfect_elimination_ordering(g: &DependenceGraph) -> Option<Vec<Letter>> {
    let mut order = lex_bfs(g);
    order.reverse();
    is_perfect_elimination(g, &order).then_some(order)
}

/// True when the rejection sampler never rejects under `ordering`: for all
/// `k < l`, either `a_k` depends on `a_l` or the component of `a_k` in
/// `Sigma_k` avoids `L(a_l)`.
pub fn is_rejection_free(g: &DependenceGraph, ordering: &[Letter]) -> bool {
    let mut prefix = LetterSet::EMPTY;
    for (k, &ak) in ordering.iter().enumerate() {
        prefix.insert(ak);
        let component = g.component_unchecked(prefix, ak);
        for &al in &ordering[k + 1..] {
            if !g.depends(ak, al) && component.intersects(g.link(al)) {
                return false;
            }
        }
    }
    true
}

/// Report for the Lex-BFS certificate; the reported ordering is the
/// perfect elimination ordering when there is one.
pub fn find_peo(g: &DependenceGraph) -> OrderingReport {
    match perfect_elimination_ordering(g) {
        Some(peo) => report(g, &peo, Some(&peo)),
        None => {
            let mut order = lex_bfs(g);
            order.reverse();
            report(g, &order, None)
        }
    }
}

/// Report for a caller-chosen ordering.
pub fn analyze_ordering(g: &DependenceGraph, ordering: &[Letter]) -> Result<OrderingReport> {
    g.check_ordering(ordering)?;
    Ok(report(g, ordering, perfect_elimination_ordering(g).as_deref()))
}

fn report(g: &DependenceGraph, ordering: &[Letter], peo: Option<&[Letter]>) -> OrderingReport {
    let names = |o: &[Letter]| o.iter().map(|&a| g.name(a).to_string()).collect::<Vec<_>>();
    OrderingReport {
        ordering: names(ordering),
        chordal: peo.is_some(),
        rejection_free: is_rejection_free(g, ordering),
        peo_found: peo.map(names),
    }
}

/// First rejection-free ordering in lexicographic order of permutations.
pub fn search_rejection_free(g: &DependenceGraph) -> Result<Option<Vec<Letter>>> {
    if g.len() > EXHAUSTIVE_MAX_LETTERS {
        return Err(Error::input(format!(
            "exhaustive search is limited to {EXHAUSTIVE_MAX_LETTERS} letters"
        )));
    }
    let mut current = Vec::with_capacity(g.len());
    Ok(search(g, LetterSet::EMPTY, &mut current))
}

fn search(g: &DependenceGraph, used: LetterSet, current: &mut Vec<Letter>) -> Option<Vec<Letter>> {
    if current.len() == g.len() {
        return is_rejection_free(g, current).then(|| current.clone());
    }
    for a in g.alphabet().difference(used).iter() {
        current.push(a);
        if let Some(found) = search(g, used.with(a), current) {
            return Some(found);
        }
        current.pop();
    }
    None
}

/// Rate constant `tau` and mean pyramid length of the rejection stream
/// closing on `a_n`.
pub fn rate_bound(g: &DependenceGraph, ordering: &[Letter]) -> Result<RateReport> {
    g.check_ordering(ordering)?;
    if !g.is_connected() {
        return Err(Error::domain("rate bound needs a connected dependence graph"));
    }
    let n = g.len();
    let p = g.critical_root(g.alphabet(), DEFAULT_ROOT_TOLERANCE)?.value;
    let table = MobiusTable::new(Arc::new(g.clone()), p)?;
    let below: LetterSet = ordering[..n - 1].iter().copied().collect();
    let mu_below = table.value(below);
    let slope = p * table.derivative(g.alphabet());
    let tau = ((mu_below + slope) / n as f64).abs();
    let mean_tail = (-mu_below - slope) / mu_below;
    Ok(RateReport { tau, expected_pyramid_length: 1.0 + mean_tail, p_critical: p })
}

/// Outcome of [`estimate_mobius`].
#[derive(Clone, Debug, Serialize)]
pub struct MobiusEstimate {
    pub estimate: f64,
    pub interval: (f64, f64),
    pub confidence: f64,
    /// Estimated ratios `mu_{Sigma_{k-1}} / mu_{Sigma_{k-1} \ L(a_k)}`.
    pub ratios: Vec<f64>,
    /// Samples drawn per estimated ratio.
    pub samples_per_ratio: u64,
    /// Samples drawn for the chained estimate.
    pub samples: u64,
    /// Frequency of the empty trace under `B_{Sigma,p}`.
    pub naive: f64,
}

/// Chained Monte-Carlo estimate of `mu_Sigma(p)` with an asymptotic
/// `alpha`-confidence interval.
///
/// With `Sigma_k = {a_1, ..., a_k}`, the recurrence on `a_k` gives
/// `mu_{Sigma_k} / mu_{Sigma_{k-1}} = 1 - p / rho_k` where `rho_k` is the
/// probability under `B_{Sigma_{k-1},p}` that a trace avoids `L(a_k)`. Each
/// `rho_k` is the frequency of that event among exact samples. The sample
/// size doubles until the half-width is at most `epsilon min(p, 1-p) / 2`.
pub fn estimate_mobius<R: Rng + ?Sized>(
    g: &DependenceGraph,
    p: f64,
    epsilon: f64,
    alpha: f64,
    rng: &mut R,
) -> Result<MobiusEstimate> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::input("epsilon must be positive"));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::input("confidence level must lie in (0, 1)"));
    }
    let table = Arc::new(MobiusTable::new(Arc::new(g.clone()), p)?);
    table.ensure_subcritical(g.alphabet())?;
    let sampler = DirectSampler::new(Arc::clone(&table));
    let n = g.len() as f64;
    let lambda = Normal::new(0.0, 1.0).expect("standard normal").inverse_cdf((1.0 + alpha) / 2.0);
    let scale = p.min(1.0 - p);
    let mut per_ratio = (n * n * lambda * lambda / (epsilon * epsilon * scale)).ceil() as u64;
    let mut samples = 0;
    let mut letters = g.letters();
    let first = letters.next().expect("non-empty alphabet");
    let mut prefixes = vec![(LetterSet::singleton(first), first)];
    for a in letters {
        let below = prefixes.last().expect("non-empty").0;
        prefixes.push((below.with(a), a));
    }
    loop {
        let mut ratios = Vec::with_capacity(prefixes.len());
        let mut log_estimate = 0.0;
        let mut log_variance = 0.0;
        let mut below = LetterSet::EMPTY;
        for &(prefix, a) in &prefixes {
            let avoid = g.link(a);
            let rho = if below.intersects(avoid) {
                let mut hits = 0u64;
                for _ in 0..per_ratio {
                    let x = sampler.sample(below, below, rng)?;
                    hits += u64::from(!x.alphabet().intersects(avoid));
                }
                samples += per_ratio;
                let rho = hits as f64 / per_ratio as f64;
                // d log(1 - p / rho) / d rho
                let grad = p / (rho * (rho - p));
                log_variance += grad * grad * rho * (1.0 - rho) / per_ratio as f64;
                rho
            } else {
                1.0
            };
            if rho <= p {
                return Err(Error::domain("estimated ratio fell below p; increase the sample size"));
            }
            ratios.push(rho);
            log_estimate += (1.0 - p / rho).ln();
            below = prefix;
        }
        let estimate = log_estimate.exp();
        let half = lambda * estimate * log_variance.sqrt();
        if half <= epsilon * scale / 2.0 || per_ratio >= 1 << 40 {
            let mut empty = 0u64;
            for _ in 0..per_ratio {
                empty += u64::from(sampler.sample(g.alphabet(), g.alphabet(), rng)?.is_empty());
            }
            return Ok(MobiusEstimate {
                estimate,
                interval: (estimate - half, estimate + half),
                confidence: alpha,
                ratios,
                samples_per_ratio: per_ratio,
                samples,
                naive: empty as f64 / per_ratio as f64,
            });
        }
        per_ratio *= 2;
    }
}

/// Frequency of `a` in the first prefix of `stream` longer than `budget`.
pub fn letter_density(stream: &mut PrefixStream, a: Letter, budget: usize) -> Result<f64> {
    if budget == 0 {
        return Err(Error::input("letter budget must be positive"));
    }
    stream.run_past(budget)?;
    let x = stream.prefix();
    Ok(x.count(a) as f64 / x.len() as f64)
}
