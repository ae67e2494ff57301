//! Möbius polynomials of sub-alphabets, their evaluation at a fixed
//! parameter, their smallest positive root, and the exact expansion of the
//! trace-counting generating series.

use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;

use crate::alphabet::{DependenceGraph, LetterSet};
use crate::error::{Error, Result};

/// `mu_S(X) = sum over cliques g of S of (-1)^|g| X^|g|`, stored by coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusPolynomial {
    coefficients: Vec<i64>,
}

impl MobiusPolynomial {
    pub fn from_coefficients(mut coefficients: Vec<i64>) -> Self {
        while coefficients.len() > 1 && coefficients.last() == Some(&0) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(0);
        }
        MobiusPolynomial { coefficients }
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c as f64)
    }

    /// Value of the formal derivative at `x`.
    pub fn eval_derivative(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (j, &c)| acc * x + (j as i64 * c) as f64)
    }

    /// Exact value at a rational point.
    pub fn eval_rational(&self, x: &num_rational::BigRational) -> num_rational::BigRational {
        self.coefficients.iter().rev().fold(num_rational::BigRational::zero(), |acc, &c| {
            acc * x + num_rational::BigRational::from_integer(BigInt::from(c))
        })
    }

    pub fn to_bigint(&self) -> Vec<BigInt> {
        self.coefficients.iter().map(|&c| BigInt::from(c)).collect()
    }

    pub fn mul(&self, other: &MobiusPolynomial) -> MobiusPolynomial {
        let mut out = vec![0i64; self.coefficients.len() + other.coefficients.len() - 1];
        for (i, &a) in self.coefficients.iter().enumerate() {
            for (j, &b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        MobiusPolynomial::from_coefficients(out)
    }

    /// Human readable form such as `1 - 4X + 3X^2`.
    pub fn pretty(&self) -> String {
        let mut out = String::new();
        for (j, &c) in self.coefficients.iter().enumerate() {
            if c == 0 && j > 0 {
                continue;
            }
            let mag = c.unsigned_abs();
            if out.is_empty() {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0 { " - " } else { " + " });
            }
            match j {
                0 => out.push_str(&mag.to_string()),
                _ => {
                    if mag != 1 {
                        out.push_str(&mag.to_string());
                    }
                    out.push('X');
                    if j > 1 {
                        out.push_str(&format!("^{j}"));
                    }
                }
            }
        }
        out
    }
}

impl DependenceGraph {
    /// Möbius polynomial of the sub-alphabet `s`, by clique census.
    pub fn mobius_poly(&self, s: LetterSet) -> MobiusPolynomial {
        let mut counts = vec![0i64; s.len() + 1];
        for clique in self.cliques(s) {
            counts[clique.len()] += 1;
        }
        let coefficients =
            counts.iter().enumerate().map(|(j, &c)| if j % 2 == 0 { c } else { -c }).collect();
        MobiusPolynomial::from_coefficients(coefficients)
    }
}

/// Value and derivative of a Möbius polynomial at the table's parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MobiusValue {
    pub value: f64,
    pub derivative: f64,
}

/// Lazily filled memo of `mu_S(p)` and `mu'_S(p)` keyed by sub-alphabet.
///
/// Lookups are safe from several threads. Two threads missing on the same
/// key both compute it; the stored values are identical either way.
#[derive(Debug)]
pub struct MobiusTable {
    graph: Arc<DependenceGraph>,
    p: f64,
    memo: RwLock<FxHashMap<LetterSet, MobiusValue>>,
    roots: RwLock<FxHashMap<LetterSet, f64>>,
}

impl MobiusTable {
    pub fn new(graph: Arc<DependenceGraph>, p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::domain(format!("parameter p = {p} must lie in (0, 1]")));
        }
        Ok(MobiusTable {
            graph,
            p,
            memo: RwLock::new(FxHashMap::default()),
            roots: RwLock::new(FxHashMap::default()),
        })
    }

    pub fn graph(&self) -> &DependenceGraph {
        &self.graph
    }

    pub fn shared_graph(&self) -> Arc<DependenceGraph> {
        Arc::clone(&self.graph)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn lookup(&self, s: LetterSet) -> MobiusValue {
        if s.is_empty() {
            return MobiusValue { value: 1.0, derivative: 0.0 };
        }
        if let Some(v) = self.memo.read().expect("memo lock poisoned").get(&s) {
            return *v;
        }
        let poly = self.graph.mobius_poly(s);
        let v = MobiusValue { value: poly.eval(self.p), derivative: poly.eval_derivative(self.p) };
        self.memo.write().expect("memo lock poisoned").insert(s, v);
        v
    }

    /// `mu_S(p)`.
    #[inline]
    pub fn value(&self, s: LetterSet) -> f64 {
        self.lookup(s).value
    }

    /// `mu'_S(p)`.
    #[inline]
    pub fn derivative(&self, s: LetterSet) -> f64 {
        self.lookup(s).derivative
    }

    /// Memoized critical root `p_S` at the default tolerance.
    pub fn critical_root(&self, s: LetterSet) -> Result<f64> {
        if let Some(&v) = self.roots.read().expect("memo lock poisoned").get(&s) {
            return Ok(v);
        }
        let v = self.graph.critical_root(s, DEFAULT_ROOT_TOLERANCE)?.value;
        self.roots.write().expect("memo lock poisoned").insert(s, v);
        Ok(v)
    }

    /// Fails with a domain error unless `p < p_S`.
    pub fn ensure_subcritical(&self, s: LetterSet) -> Result<()> {
        if s.is_empty() {
            return Ok(());
        }
        let root = self.critical_root(s)?;
        if self.p < root {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "p = {} is not below the critical root {root} of {{{}}}",
                self.p,
                self.graph.format_set(s)
            )))
        }
    }

    /// Number of sub-alphabets evaluated so far.
    pub fn memoized(&self) -> usize {
        self.memo.read().expect("memo lock poisoned").len()
    }
}

/// Smallest positive root of a Möbius polynomial together with a bracket.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalRoot {
    pub value: f64,
    pub tolerance: f64,
    /// `mu(lo) > 0 >= mu(hi)` for the connected component realizing the root.
    pub bracket: (f64, f64),
    /// No sign change found; the value is then exactly 1.
    pub degenerate: bool,
}

pub const DEFAULT_ROOT_TOLERANCE: f64 = 1e-12;

/// Halvings of the scan step tried below a candidate bracket.
const REFINE_DEPTH: u32 = 6;

impl DependenceGraph {
    /// Smallest positive root `p_S` of `mu_S`.
    ///
    /// `mu_S` is the product of the Möbius polynomials of the connected
    /// components of `s`, so the root is the least component root. On each
    /// component a grid scan from 0 finds the first sign change, finer grids
    /// look for an earlier one, and bisection narrows the bracket to `tol`.
    pub fn critical_root(&self, s: LetterSet, tol: f64) -> Result<CriticalRoot> {
        if s.is_empty() {
            return Err(Error::input("critical root of the empty alphabet is undefined"));
        }
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::input("tolerance must be positive"));
        }
        let mut best: Option<CriticalRoot> = None;
        for component in self.components(s) {
            let poly = self.mobius_poly(component);
            let root = smallest_positive_root(&poly, component.len(), tol);
            if best.is_none_or(|b| root.value < b.value) {
                best = Some(root);
            }
        }
        Ok(best.expect("non-empty alphabet has a component"))
    }
}

/// Grid scan and bisection on a polynomial with `poly(0) = 1`.
pub fn smallest_positive_root(poly: &MobiusPolynomial, letters: usize, tol: f64) -> CriticalRoot {
    let initial = 1.0 / (4.0 * letters.max(1) as f64);
    let Some(mut bracket) = scan(poly, 0.0, 1.0, initial) else {
        return CriticalRoot { value: 1.0, tolerance: tol, bracket: (1.0, 1.0), degenerate: true };
    };
    let mut step = initial;
    for _ in 0..REFINE_DEPTH {
        step /= 2.0;
        match scan(poly, 0.0, bracket.0, step) {
            Some(earlier) => bracket = earlier,
            None => break,
        }
    }
    let (mut lo, mut hi) = bracket;
    if poly.eval(hi) == 0.0 && hi - lo <= tol {
        return CriticalRoot { value: hi, tolerance: tol, bracket: (lo, hi), degenerate: false };
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if poly.eval(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // an exact zero on the grid is returned as is
    let value = if poly.eval(hi) == 0.0 { hi } else { 0.5 * (lo + hi) };
    CriticalRoot { value, tolerance: tol, bracket: (lo, hi), degenerate: false }
}

/// First grid interval `[x - step, x]` in `(from, to]` with `poly > 0` on the
/// left end and `poly <= 0` on the right end.
fn scan(poly: &MobiusPolynomial, from: f64, to: f64, step: f64) -> Option<(f64, f64)> {
    let mut i = 1u64;
    let mut prev = from;
    loop {
        let x = (from + i as f64 * step).min(to);
        if poly.eval(x) <= 0.0 {
            return (poly.eval(prev) > 0.0).then_some((prev, x));
        }
        if x >= to {
            return None;
        }
        prev = x;
        i += 1;
    }
}

/// Power-series division `num / den` up to `degree`, with `den(0) = 1`.
pub fn divide_series(num: &[BigInt], den: &[BigInt], degree: usize) -> Vec<BigInt> {
    assert!(den.first().is_some_and(|c| c.is_one()), "denominator must have constant term 1");
    let mut out: Vec<BigInt> = Vec::with_capacity(degree + 1);
    for j in 0..=degree {
        let mut c = num.get(j).cloned().unwrap_or_default();
        for i in 1..=j.min(den.len() - 1) {
            c -= &den[i] * &out[j - i];
        }
        out.push(c);
    }
    out
}

impl DependenceGraph {
    /// Coefficients of `G_{S,U}(X) = mu_{S \ U}(X) / mu_S(X)`: the number of
    /// traces over `s` of each length whose maximal letters lie in `u`.
    pub fn series_expand_within(&self, s: LetterSet, u: LetterSet, degree: usize) -> Vec<BigInt> {
        let num = self.mobius_poly(s.difference(u)).to_bigint();
        let den = self.mobius_poly(s).to_bigint();
        divide_series(&num, &den, degree)
    }

    /// `series_expand_within` over the whole alphabet.
    pub fn series_expand(&self, u: LetterSet, degree: usize) -> Vec<BigInt> {
        self.series_expand_within(self.alphabet(), u, degree)
    }
}
