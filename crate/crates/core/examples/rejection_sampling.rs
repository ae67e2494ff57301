//! The rejection sampler only needs Möbius values of the prefixes of an
//! enumeration; on a non-chordal graph it sometimes rejects.

use std::sync::Arc;

use tracegen::sampler::{seeded, RejectionStats};
use tracegen::{DependenceGraph, MobiusTable, RejectionSampler, Result};

fn run(g: DependenceGraph, p: f64, ordering: &str) -> Result<RejectionStats> {
    let ordering = g.parse_ordering(ordering)?;
    let g = Arc::new(g);
    let sampler = RejectionSampler::new(Arc::new(MobiusTable::new(Arc::clone(&g), p)?), Some(ordering))?;
    let n = g.len();
    let mut stats = RejectionStats::default();
    let mut rng = seeded(3);
    for i in 0..10_000 {
        let x = sampler.sample(n - 1, n, &mut rng, &mut stats)?;
        if i < 3 {
            println!("  {}", g.format_trace(&x));
        }
    }
    Ok(stats)
}

pub fn run_example() -> Result<()> {
    let path = run(DependenceGraph::running_example(), 0.3, "a,b,c,d")?;
    println!("path a-b-c-d: {path:?}");
    let cycle = run(DependenceGraph::cycle(4)?, 0.25, "a,b,c,d")?;
    println!("4-cycle:      {cycle:?}");
    assert_eq!(path.rejections, 0);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("rejection sampling example");
}
