mod common;

use std::sync::Arc;

use rand::SeedableRng;
use tracegen::analysis::{
    estimate_mobius, find_peo, is_perfect_elimination, is_rejection_free, perfect_elimination_ordering, rate_bound,
    search_rejection_free,
};
use tracegen::sampler::seeded;
use tracegen::{DependenceGraph, Letter, UniformSampler};

use common::{all_graphs, random_graph};

fn instances() -> Vec<DependenceGraph> {
    let mut out: Vec<DependenceGraph> = (1..=4).flat_map(all_graphs).collect();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
    for i in 0..200 {
        let n = 2 + i % 5;
        out.push(random_graph(n, 0.5, &mut rng));
    }
    out
}

#[test]
fn rejection_free_orderings_exist_exactly_on_chordal_graphs() {
    for g in instances() {
        let report = find_peo(&g);
        let found = search_rejection_free(&g).unwrap();
        assert_eq!(found.is_some(), report.chordal, "{:?}", g.to_document());
        if let Some(order) = found {
            assert!(is_rejection_free(&g, &order));
        }
        match perfect_elimination_ordering(&g) {
            Some(peo) => {
                assert!(is_perfect_elimination(&g, &peo));
                assert!(is_rejection_free(&g, &peo));
            }
            None => assert!(!report.chordal),
        }
    }
}

#[test]
fn chordal_streams_never_reject() {
    let mut checked = 0;
    for g in instances().into_iter().filter(|g| g.is_connected() && g.len() >= 2) {
        let Some(peo) = perfect_elimination_ordering(&g) else { continue };
        let g = Arc::new(g);
        let mut stream = UniformSampler::rejection(g, Some(peo)).unwrap().stream(7);
        for _ in 0..200 {
            stream.step().unwrap();
        }
        assert_eq!(stream.stats().rejections, 0);
        checked += 1;
    }
    assert!(checked > 50);
}

#[test]
fn square_rejects_under_every_ordering() {
    let g = Arc::new(DependenceGraph::cycle(4).unwrap());
    let mut order: Vec<Letter> = g.letters().collect();
    let mut orderings = Vec::new();
    permutations(&mut order, 0, &mut orderings);
    assert_eq!(orderings.len(), 24);
    for order in orderings {
        assert!(!is_rejection_free(&g, &order));
        let mut stream = UniformSampler::rejection(Arc::clone(&g), Some(order)).unwrap().stream(8);
        for _ in 0..2000 {
            stream.step().unwrap();
        }
        assert!(stream.stats().rejections > 0);
    }
}

fn permutations(items: &mut Vec<Letter>, k: usize, out: &mut Vec<Vec<Letter>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

#[test]
fn pyramid_length_on_the_path() {
    // mu_abc(1/3) = 1/9 and p mu'(1/3) = -2/3 give a mean of 1 + 5
    let g = DependenceGraph::running_example();
    let order: Vec<Letter> = g.letters().collect();
    let report = rate_bound(&g, &order).unwrap();
    assert!((report.expected_pyramid_length - 6.0).abs() < 1e-9);
    assert!((report.p_critical - 1.0 / 3.0).abs() < 1e-9);
}

#[test]
fn dimer_rate_against_the_asymptotic_shape() {
    // ratio of tau to n^2 / (2^(n+2) pi^2), computed once and kept as a regression
    let frozen = [(4, 5.4831), (6, 3.7200), (8, 2.9007), (10, 2.4448)];
    let mut last = f64::INFINITY;
    for (n, ratio) in frozen {
        let g = DependenceGraph::path(n).unwrap();
        let order: Vec<Letter> = g.letters().collect();
        let tau = rate_bound(&g, &order).unwrap().tau;
        let shape = (n * n) as f64 / (2f64.powi(n as i32 + 2) * std::f64::consts::PI.powi(2));
        let seen = tau / shape;
        assert!((seen - ratio).abs() < 1e-3, "n = {n}: {seen}");
        assert!(seen < last);
        last = seen;
    }
}

#[test]
fn estimator_is_exact_without_dependencies_between_blocks() {
    // every ratio is 1 on a free commutative monoid
    let g = DependenceGraph::edgeless(3).unwrap();
    let est = estimate_mobius(&g, 0.2, 0.05, 0.95, &mut seeded(9)).unwrap();
    assert!((est.estimate - 0.8f64.powi(3)).abs() < 1e-12);
    assert_eq!(est.samples, 0);
}

#[test]
fn estimator_interval_covers_the_path_value() {
    let g = DependenceGraph::running_example();
    let mut hits = 0;
    for seed in 0..20 {
        let est = estimate_mobius(&g, 0.2, 0.2, 0.95, &mut seeded(100 + seed)).unwrap();
        assert!(est.interval.0 <= est.estimate && est.estimate <= est.interval.1);
        assert!(est.interval.1 - est.interval.0 <= 0.2 * 0.2 + 1e-12);
        hits += u32::from(est.interval.0 <= 0.32 && 0.32 <= est.interval.1);
    }
    // 20 draws at 95 % coverage fall below 15 hits with probability under 1e-3
    assert!(hits >= 15, "{hits}");
}
