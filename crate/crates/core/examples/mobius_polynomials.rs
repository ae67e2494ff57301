//! Möbius polynomials, their critical roots and the trace counting series
//! they invert.

use tracegen::{DependenceGraph, LetterSet, Result};

pub fn run_example() -> Result<()> {
    let g = DependenceGraph::running_example();
    let all = g.alphabet();
    let mu = g.mobius_poly(all);
    println!("mu = {}", mu.pretty());
    println!("mu(1/5) = {}", mu.eval(0.2));

    let root = g.critical_root(all, 1e-12)?;
    println!("critical root {:.12} in [{:.3e}, {:.3e}]", root.value, root.bracket.0, root.bracket.1);

    // 1 / mu counts traces by length
    let counts = g.series_expand(all, 6);
    println!("traces by length: {counts:?}");

    for k in 1..=4 {
        let free = DependenceGraph::complete(k)?;
        let r = free.critical_root(LetterSet::first_n(k), 1e-12)?;
        println!("free monoid on {k} letters: p = {:.6}", r.value);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("mobius example");
}
