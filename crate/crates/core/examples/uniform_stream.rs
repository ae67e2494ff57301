//! Endless prefixes of a uniformly random infinite trace. Each loop appends
//! one pyramid of the anchor letter.

use std::sync::Arc;

use tracegen::analysis::letter_density;
use tracegen::{DependenceGraph, Result, UniformSampler};

pub fn run_example() -> Result<()> {
    let g = Arc::new(DependenceGraph::running_example());
    let direct = UniformSampler::direct(Arc::clone(&g), Some(g.letter("c")?))?;
    let mut stream = direct.stream(11);
    for step in stream.by_ref().take(5) {
        let step = step?;
        println!("loop {:>2}  +{:<16} |xi| = {}", step.loop_index, g.format_trace(&step.increment), step.total_length);
    }

    let rejection = UniformSampler::rejection(Arc::clone(&g), None)?;
    let mut stream = rejection.stream(11);
    let loops = 2_000;
    for _ in 0..loops {
        stream.step()?;
    }
    println!(
        "rejection stream: {:.3} letters per loop, {} rejections",
        stream.prefix().len() as f64 / loops as f64,
        stream.stats().rejections
    );

    let a = g.letter("a")?;
    let density = letter_density(&mut direct.stream(5), a, 50_000)?;
    println!("density of a: {density:.3}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("uniform stream example");
}
