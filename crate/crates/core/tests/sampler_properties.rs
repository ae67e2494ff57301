mod common;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use tracegen::laws::{exact_distribution, ratio_to_f64};
use tracegen::sampler::{sample_bernoulli, sample_geometric, seeded, RejectionStats, SampleCost};
use tracegen::{DependenceGraph, DirectSampler, Letter, LetterSet, MobiusTable, RejectionSampler, Trace, UniformSampler};

use common::fit_exact;

fn graphs() -> Vec<(&'static str, DependenceGraph)> {
    vec![
        ("path", DependenceGraph::running_example()),
        ("cycle", DependenceGraph::cycle(4).unwrap()),
        ("star", DependenceGraph::from_edges(4, &[(1, 0), (1, 2), (1, 3)]).unwrap()),
        ("paw", DependenceGraph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap()),
        ("split", DependenceGraph::from_edges(4, &[(0, 1), (2, 3)]).unwrap()),
        ("free", DependenceGraph::edgeless(3).unwrap()),
    ]
}

/// A rational parameter comfortably below the critical root.
fn parameter(g: &DependenceGraph) -> BigRational {
    let pc = g.critical_root(g.alphabet(), 1e-12).unwrap().value;
    BigRational::new(BigInt::from((60.0 * pc).floor() as i64), BigInt::from(100))
}

fn prefix(k: usize) -> LetterSet {
    LetterSet::first_n(k)
}

/// The inefficient variant of the rejection sampler: the whole trace is
/// rebuilt on every round and kept only if its maximal letters lie in
/// `L(a_l)`. Written against polynomials directly, sharing no code with the
/// library samplers.
fn oracle<R: Rng>(g: &DependenceGraph, p: f64, k: usize, l: usize, rng: &mut R) -> Trace {
    let target = g.link(Letter::new(l - 1));
    if !prefix(k).intersects(target) {
        return Trace::empty();
    }
    let ak = Letter::new(k - 1);
    let component = g.connected_component(prefix(k), ak).unwrap();
    let r = if component.intersects(target) {
        1.0 - g.mobius_poly(prefix(k)).eval(p) / g.mobius_poly(prefix(k - 1)).eval(p)
    } else {
        0.0
    };
    loop {
        let big_r = sample_bernoulli(r, rng);
        let tail = oracle(g, p, k - 1, l, rng);
        let copies = if big_r { 1 + sample_geometric(r, rng).unwrap() } else { 0 };
        let mut xi = Trace::empty();
        for _ in 0..copies {
            xi.append(&oracle(g, p, k - 1, k, rng));
            xi.push(ak);
        }
        xi.append(&tail);
        if g.max_letters(&xi).is_subset(target) {
            return xi;
        }
    }
}

#[test]
fn oracle_matches_enumeration() {
    let mut rng = seeded(11);
    for (name, g) in graphs() {
        let p = parameter(&g);
        let n = g.len();
        for k in 1..n {
            let exact = exact_distribution(&g, &p, prefix(k), g.link(Letter::new(n - 1)), 4).unwrap();
            let samples: Vec<Trace> = (0..20_000).map(|_| oracle(&g, ratio_to_f64(&p), k, n, &mut rng)).collect();
            let fit = fit_exact(&g, &exact, &samples);
            assert!(fit.p_value > 1e-3, "{name} k = {k}: {fit:?}");
        }
    }
}

#[test]
fn direct_sampler_matches_enumeration() {
    let mut rng = seeded(12);
    for (name, g) in graphs() {
        let p = parameter(&g);
        let table = Arc::new(MobiusTable::new(Arc::new(g.clone()), ratio_to_f64(&p)).unwrap());
        let sampler = DirectSampler::new(table);
        let all = g.alphabet();
        let last = Letter::new(g.len() - 1);
        for (s, t) in [(all, all), (all.without(last), g.link(last)), (all, LetterSet::singleton(Letter::new(0)))] {
            let exact = exact_distribution(&g, &p, s, t, 4).unwrap();
            let samples: Vec<Trace> = (0..20_000).map(|_| sampler.sample(s, t, &mut rng).unwrap()).collect();
            for x in &samples {
                assert!(x.alphabet().is_subset(s) && g.max_letters(x).is_subset(t));
            }
            let fit = fit_exact(&g, &exact, &samples);
            assert!(fit.p_value > 1e-3, "{name} {s:?} {t:?}: {fit:?}");
        }
    }
}

#[test]
fn rejection_sampler_matches_enumeration() {
    let mut rng = seeded(13);
    for (name, g) in graphs() {
        let p = parameter(&g);
        let table = Arc::new(MobiusTable::new(Arc::new(g.clone()), ratio_to_f64(&p)).unwrap());
        let sampler = RejectionSampler::new(table, None).unwrap();
        let n = g.len();
        for l in 1..=n {
            for k in 0..l {
                let exact = exact_distribution(&g, &p, prefix(k), g.link(Letter::new(l - 1)), 4).unwrap();
                let mut stats = RejectionStats::default();
                let samples: Vec<Trace> = (0..10_000).map(|_| sampler.sample(k, l, &mut rng, &mut stats).unwrap()).collect();
                let fit = fit_exact(&g, &exact, &samples);
                assert!(fit.p_value > 1e-3, "{name} k = {k} l = {l}: {fit:?}");
            }
        }
    }
}

#[test]
fn samplers_agree_on_the_mean_length() {
    // E[L(k, l)] = p (mu'_{S\L}/mu_{S\L} - mu'_S/mu_S) with S = Sigma_k, L = L(a_l)
    let mut rng = seeded(14);
    for (name, g) in graphs() {
        let p = ratio_to_f64(&parameter(&g));
        let table = Arc::new(MobiusTable::new(Arc::new(g.clone()), p).unwrap());
        let direct = DirectSampler::new(Arc::clone(&table));
        let rejection = RejectionSampler::new(Arc::clone(&table), None).unwrap();
        let n = g.len();
        let (s, t) = (prefix(n - 1), g.link(Letter::new(n - 1)));
        let free = s.difference(t);
        let expected = p * (table.derivative(free) / table.value(free) - table.derivative(s) / table.value(s));
        let draws = 40_000;
        let mut stats = RejectionStats::default();
        let lengths: [Vec<f64>; 2] = [
            (0..draws).map(|_| direct.sample(s, t, &mut rng).unwrap().len() as f64).collect(),
            (0..draws).map(|_| rejection.sample(n - 1, n, &mut rng, &mut stats).unwrap().len() as f64).collect(),
        ];
        for sample in &lengths {
            let mean = sample.iter().sum::<f64>() / draws as f64;
            let var = sample.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
            let se = (var / draws as f64).sqrt().max(1e-9);
            assert!((mean - expected).abs() < 5.0 * se, "{name}: mean {mean} vs {expected}");
        }
    }
}

#[test]
fn direct_cost_is_bounded_by_length() {
    // letters are counted exactly and the step count stays proportionate
    let g = Arc::new(DependenceGraph::running_example());
    let table = Arc::new(MobiusTable::new(Arc::clone(&g), 0.2).unwrap());
    let sampler = DirectSampler::new(table);
    let mut rng = seeded(15);
    let mut total = SampleCost::default();
    let mut letters = 0u64;
    for _ in 0..20_000 {
        let (x, cost) = sampler.sample_counted(g.alphabet(), g.alphabet(), &mut rng).unwrap();
        letters += x.len() as u64;
        total.calls += cost.calls;
        total.letters += cost.letters;
    }
    assert_eq!(total.letters, letters);
    let mean_steps = total.steps() as f64 / 20_000.0;
    // E|xi| = -p mu'/mu = 1.75 at p = 1/5 on the path
    assert!(mean_steps < 40.0, "{mean_steps}");
}

#[test]
fn fixed_seeds_reproduce_samples() {
    let g = Arc::new(DependenceGraph::running_example());
    let table = Arc::new(MobiusTable::new(Arc::clone(&g), 0.2).unwrap());
    let direct = DirectSampler::new(Arc::clone(&table));
    let rejection = RejectionSampler::new(table, None).unwrap();
    let draw = |seed| {
        let mut rng = seeded(seed);
        let mut stats = RejectionStats::default();
        (0..200)
            .map(|i| {
                if i % 2 == 0 {
                    direct.sample(g.alphabet(), g.alphabet(), &mut rng).unwrap()
                } else {
                    rejection.sample(3, 4, &mut rng, &mut stats).unwrap()
                }
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(draw(5), draw(5));
    assert_ne!(draw(5), draw(6));
}

#[test]
fn streams_grow_by_left_division() {
    let g = Arc::new(DependenceGraph::running_example());
    for sampler in [UniformSampler::direct(Arc::clone(&g), None).unwrap(), UniformSampler::rejection(Arc::clone(&g), None).unwrap()] {
        let mut stream = sampler.stream(3);
        let mut previous = Trace::empty();
        for i in 0..500 {
            let step = stream.step().unwrap();
            let current = stream.prefix().clone();
            assert_eq!(step.loop_index, i + 1);
            assert_eq!(step.total_length, current.len());
            assert_eq!(step.increment.word().last(), Some(&sampler.anchor()));
            assert!(g.is_pyramidal(&step.increment, sampler.anchor()));
            let quotient = g.left_quotient(&previous, &current).expect("prefix divides its successor");
            assert!(g.traces_equal(&quotient, &step.increment));
            previous = current;
        }
        assert_eq!(stream.stats().rejections, 0, "natural order on the path is rejection-free");
    }
}

#[test]
fn free_letters_have_equal_density() {
    let g = Arc::new(DependenceGraph::complete(2).unwrap());
    let mut stream = UniformSampler::direct(Arc::clone(&g), None).unwrap().stream(16);
    let d = tracegen::analysis::letter_density(&mut stream, Letter::new(0), 100_000).unwrap();
    assert!((d - 0.5).abs() < 0.02, "{d}");
}

#[test]
fn density_does_not_depend_on_the_anchor() {
    let g = Arc::new(DependenceGraph::running_example());
    let a = g.letter("a").unwrap();
    let c = g.letter("c").unwrap();
    let density = |anchor: Letter, seed| {
        let mut stream = UniformSampler::direct(Arc::clone(&g), Some(anchor)).unwrap().stream(seed);
        tracegen::analysis::letter_density(&mut stream, a, 1_000_000).unwrap()
    };
    let (da, dc) = (density(a, 17), density(c, 18));
    assert!((da - dc).abs() < 0.02, "{da} vs {dc}");
}
