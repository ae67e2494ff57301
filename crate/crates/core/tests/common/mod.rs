#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::Rng;
use tracegen::{DependenceGraph, NormalForm, Trace};

/// Every labelled graph on `n` letters.
pub fn all_graphs(n: usize) -> Vec<DependenceGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    (0u32..1 << pairs.len())
        .map(|mask| {
            let edges: Vec<_> = pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e).collect();
            DependenceGraph::from_edges(n, &edges).unwrap()
        })
        .collect()
}

pub fn random_graph<R: Rng>(n: usize, density: f64, rng: &mut R) -> DependenceGraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < density {
                edges.push((i, j));
            }
        }
    }
    DependenceGraph::from_edges(n, &edges).unwrap()
}

/// Empirical law over canonical forms of length at most `horizon`, each
/// trace weighted by `1 / total`.
pub fn empirical<I: IntoIterator<Item = Trace>>(g: &DependenceGraph, traces: I, horizon: usize) -> BTreeMap<NormalForm, f64> {
    let mut counts: BTreeMap<NormalForm, u64> = BTreeMap::new();
    let mut total = 0u64;
    for x in traces {
        total += 1;
        if x.len() <= horizon {
            *counts.entry(g.normal_form(&x)).or_default() += 1;
        }
    }
    counts.into_iter().map(|(k, c)| (k, c as f64 / total as f64)).collect()
}

/// Same as [`empirical`] with traces longer than the horizon pooled under
/// the key `None`.
pub fn pooled<I: IntoIterator<Item = Trace>>(g: &DependenceGraph, traces: I, horizon: usize) -> BTreeMap<Option<NormalForm>, f64> {
    let mut counts: BTreeMap<Option<NormalForm>, u64> = BTreeMap::new();
    let mut total = 0u64;
    for x in traces {
        total += 1;
        let key = (x.len() <= horizon).then(|| g.normal_form(&x));
        *counts.entry(key).or_default() += 1;
    }
    counts.into_iter().map(|(k, c)| (k, c as f64 / total as f64)).collect()
}

/// All words of length `len` over the first `n` letters.
pub fn words(n: usize, len: usize) -> Vec<Vec<tracegen::Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..n).map(move |a| {
                    let mut w = w.clone();
                    w.push(tracegen::Letter::new(a));
                    w
                })
            })
            .collect();
    }
    out
}

/// Chi-square fit of samples against an exact table; cells with fewer than
/// five expected hits are pooled with the traces beyond the horizon.
pub fn fit_exact(g: &DependenceGraph, exact: &tracegen::ExactTable, samples: &[Trace]) -> tracegen::stats::GoodnessOfFit {
    let n = samples.len() as f64;
    let mut counts: BTreeMap<NormalForm, u64> = BTreeMap::new();
    for x in samples.iter().filter(|x| x.len() <= exact.horizon) {
        *counts.entry(g.normal_form(x)).or_default() += 1;
    }
    assert!(counts.keys().all(|k| exact.entries.contains_key(k)), "sample outside the support");
    let (mut observed, mut probs, mut labels) = (Vec::new(), Vec::new(), Vec::new());
    let (mut rest_obs, mut rest_prob) = (samples.len() as u64, 1.0);
    for (nf, w) in &exact.entries {
        let q = tracegen::laws::ratio_to_f64(w);
        if q * n < 5.0 {
            continue;
        }
        let o = counts.get(nf).copied().unwrap_or(0);
        observed.push(o);
        probs.push(q);
        labels.push(g.format_normal_form(nf));
        rest_obs -= o;
        rest_prob -= q;
    }
    if rest_prob * n >= 1e-9 || rest_obs > 0 {
        observed.push(rest_obs);
        probs.push(rest_prob.max(0.0));
        labels.push("rest".into());
    }
    tracegen::stats::chi_square(&observed, &probs, labels)
}
