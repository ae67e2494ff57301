//! Monte-Carlo estimate of a Möbius value from exact samples, compared with
//! the naive frequency of the empty trace.

use tracegen::analysis::estimate_mobius;
use tracegen::sampler::seeded;
use tracegen::{DependenceGraph, Result};

pub fn run_example() -> Result<()> {
    let g = DependenceGraph::running_example();
    let p = 0.2;
    let exact = g.mobius_poly(g.alphabet()).eval(p);
    let est = estimate_mobius(&g, p, 0.2, 0.95, &mut seeded(19))?;
    println!("exact     {exact:.5}");
    println!("chained   {:.5}  [{:.5}, {:.5}]", est.estimate, est.interval.0, est.interval.1);
    println!("naive     {:.5}", est.naive);
    println!("{} samples per ratio, ratios {:?}", est.samples_per_ratio, est.ratios);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("estimator example");
}
