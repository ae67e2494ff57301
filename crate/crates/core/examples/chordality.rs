//! Chordal dependence graphs are exactly those admitting an enumeration on
//! which the rejection sampler never rejects.

use tracegen::analysis::{find_peo, rate_bound, search_rejection_free};
use tracegen::{DependenceGraph, Result};

pub fn run_example() -> Result<()> {
    let graphs = [
        ("path", DependenceGraph::path(5)?),
        ("4-cycle", DependenceGraph::cycle(4)?),
        ("triangle with tail", DependenceGraph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)])?),
    ];
    for (name, g) in &graphs {
        let report = find_peo(g);
        let exhaustive = search_rejection_free(g)?;
        println!(
            "{name:<20} chordal {:<5} rejection-free ordering {:?}",
            report.chordal,
            exhaustive.map(|o| o.iter().map(|&a| g.name(a).to_string()).collect::<Vec<_>>())
        );
        let ordering = g.parse_ordering(&report.ordering.join(","))?;
        let rate = rate_bound(g, &ordering)?;
        println!("{:<20} tau {:.4}  mean pyramid length {:.3}", "", rate.tau, rate.expected_pyramid_length);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("chordality example");
}
