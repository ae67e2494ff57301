//! Traces as words modulo commutation: equality, Cartier-Foata normal form,
//! maximal letters and left division.

use tracegen::{DependenceGraph, Result};

pub fn run_example() -> Result<()> {
    // a - b - c - d: only neighbours fail to commute
    let g = DependenceGraph::running_example();
    let x = g.parse_trace("b.d.a.d.c.b")?;
    let y = g.parse_trace("d.b.d.a.c.b")?;

    println!("x = {}", g.display_trace(&x));
    println!("normal form  {}", g.format_normal_form(&g.normal_form(&x)));
    println!("x == y       {}", g.traces_equal(&x, &y));
    println!("max(x)       {{{}}}", g.format_set(g.max_letters(&x)));
    println!("min(x)       {{{}}}", g.format_set(g.min_letters(&x)));

    let d = g.parse_trace("d.b")?;
    match g.left_quotient(&d, &x) {
        Some(q) => println!("x = d.b . {}", g.format_trace(&q)),
        None => println!("d.b does not divide x"),
    }
    assert!(g.traces_equal(&x, &y));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("normal forms example");
}
