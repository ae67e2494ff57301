//! Goodness-of-fit helpers used by the verification oracles.

use std::collections::BTreeMap;

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Outcome of a chi-square goodness-of-fit test.
#[derive(Clone, Debug, Serialize)]
pub struct GoodnessOfFit {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    pub samples: usize,
    /// `(label, observed, expected)` for every bin after pooling.
    pub bins: Vec<(String, u64, f64)>,
}

impl GoodnessOfFit {
    pub fn rejects_at(&self, level: f64) -> bool {
        self.p_value < level
    }
}

/// Pearson statistic for observed counts against probabilities summing to one.
///
/// A bin with zero expected mass but positive count makes the fit impossible
/// and yields `p_value = 0`.
pub fn chi_square(observed: &[u64], probabilities: &[f64], labels: Vec<String>) -> GoodnessOfFit {
    assert_eq!(observed.len(), probabilities.len());
    let n: u64 = observed.iter().sum();
    let nf = n as f64;
    let mut statistic = 0.0;
    let mut impossible = false;
    let mut bins = Vec::with_capacity(observed.len());
    for ((&o, &q), label) in observed.iter().zip(probabilities).zip(labels) {
        let e = q * nf;
        if e > 0.0 {
            statistic += (o as f64 - e).powi(2) / e;
        } else if o > 0 {
            impossible = true;
        }
        bins.push((label, o, e));
    }
    let dof = observed.len().saturating_sub(1);
    let p_value = if impossible {
        0.0
    } else if dof == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
        1.0 - dist.cdf(statistic)
    };
    GoodnessOfFit { statistic, degrees_of_freedom: dof, p_value, samples: n as usize, bins }
}

/// Chi-square test of integer samples against the geometric law `(1 - r) r^k`.
///
/// Bins with expected count below five are pooled into a single upper tail.
pub fn geometric_fit(samples: &[u64], r: f64) -> Result<GoodnessOfFit> {
    if samples.is_empty() {
        return Err(Error::input("no samples to test"));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain(format!("geometric parameter {r} outside [0, 1)")));
    }
    let n = samples.len() as f64;
    // cells 0..cut are individual, cut.. is pooled; cell 0 is always kept
    let mut cut = 1usize;
    while (1.0 - r) * r.powi(cut as i32) * n >= 5.0 && r.powi(cut as i32 + 1) * n >= 5.0 {
        cut += 1;
    }
    let cells = cut + 1;
    let mut observed = vec![0u64; cells];
    for &k in samples {
        observed[(k as usize).min(cut)] += 1;
    }
    let mut probabilities: Vec<f64> = (0..cut).map(|k| (1.0 - r) * r.powi(k as i32)).collect();
    probabilities.push(r.powi(cut as i32));
    let labels = (0..cells)
        .map(|k| if k == cut { format!(">={k}") } else { k.to_string() })
        .collect();
    Ok(chi_square(&observed, &probabilities, labels))
}

/// Total variation distance between two distributions given as maps,
/// missing keys having mass zero.
pub fn total_variation<K: Ord>(p: &BTreeMap<K, f64>, q: &BTreeMap<K, f64>) -> f64 {
    let mut sum = 0.0;
    for (k, &a) in p {
        sum += (a - q.get(k).copied().unwrap_or(0.0)).abs();
    }
    for (k, &b) in q {
        if !p.contains_key(k) {
            sum += b.abs();
        }
    }
    0.5 * sum
}

/// Normalizes counts into frequencies.
pub fn frequencies<K: Ord + Clone>(counts: &BTreeMap<K, u64>) -> BTreeMap<K, f64> {
    let total: u64 = counts.values().sum();
    counts.iter().map(|(k, &c)| (k.clone(), c as f64 / total as f64)).collect()
}
