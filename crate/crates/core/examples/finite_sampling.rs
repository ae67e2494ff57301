//! Exact sampling of finite traces under `B_{S,p}` and `D_{S,T}`, checked
//! against the enumeration oracle.

use std::collections::BTreeMap;
use std::sync::Arc;

use tracegen::laws::{exact_distribution, parse_rational};
use tracegen::sampler::seeded;
use tracegen::stats::{frequencies, total_variation};
use tracegen::{DependenceGraph, DirectSampler, MobiusTable, Result};

pub fn run_example() -> Result<()> {
    let g = Arc::new(DependenceGraph::running_example());
    let table = Arc::new(MobiusTable::new(Arc::clone(&g), 0.2)?);
    let sampler = DirectSampler::new(table);
    let mut rng = seeded(7);

    let all = g.alphabet();
    for _ in 0..5 {
        let x = sampler.sample(all, all, &mut rng)?;
        println!("{:>12}  {}", g.format_trace(&x), g.format_normal_form(&g.normal_form(&x)));
    }

    // only traces ending with c
    let c = g.parse_set("c")?;
    let x = sampler.sample(all, c, &mut rng)?;
    println!("ends in c: {}", g.format_trace(&x));

    let n = 20_000;
    let mut counts = BTreeMap::new();
    for _ in 0..n {
        let x = sampler.sample(all, all, &mut rng)?;
        if x.len() <= 2 {
            *counts.entry(g.normal_form(&x)).or_insert(0u64) += 1;
        }
    }
    let mut empirical = frequencies(&counts);
    let kept: u64 = counts.values().sum();
    for v in empirical.values_mut() {
        *v *= kept as f64 / n as f64;
    }
    let exact = exact_distribution(&g, &parse_rational("1/5")?, all, all, 2)?.to_f64();
    println!("P(e) = {:.4} (exact {})", empirical.values().next().copied().unwrap_or(0.0), exact.values().next().unwrap());
    println!("TV on traces of length <= 2: {:.4}", total_variation(&exact, &empirical));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("finite sampling example");
}
