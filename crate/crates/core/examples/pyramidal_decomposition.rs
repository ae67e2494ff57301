//! Every trace splits uniquely into pyramids of a chosen letter followed by
//! a trace avoiding that letter.

use tracegen::{DependenceGraph, Result};

pub fn run_example() -> Result<()> {
    let g = DependenceGraph::running_example();
    let x = g.parse_trace("b.a.b.d.d.c.b.d.a.c")?;
    let c = g.letter("c")?;

    let split = g.pyramidal_decompose(&x, c);
    for (i, p) in split.pyramids.iter().enumerate() {
        println!("pyramid {}: {}", i + 1, g.format_trace(p));
        assert!(g.is_pyramidal(p, c));
    }
    println!("tail: {}", g.format_trace(&split.tail));
    assert!(g.traces_equal(&split.concatenation(), &x));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("pyramidal decomposition example");
}
