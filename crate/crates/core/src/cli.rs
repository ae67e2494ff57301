//! Command-line front end.
//!
//! Every subcommand loads and validates the graph and its arguments before
//! writing anything, so a failing run leaves no partial output. Output is a
//! pure function of the arguments and the seed.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::json;

use crate::alphabet::{DependenceGraph, Letter, LetterSet};
use crate::analysis::{analyze_ordering, estimate_mobius, find_peo, rate_bound};
use crate::error::{Error, Result};
use crate::laws::{exact_distribution, geometric_param, parse_rational, ratio_to_f64, ORACLE_MAX_HORIZON};
use crate::mobius::{MobiusTable, DEFAULT_ROOT_TOLERANCE};
use crate::sampler::{seeded, DirectSampler, Parameter, RejectionSampler, RejectionStats, UniformSampler};
use crate::stats::{geometric_fit, total_variation};
use crate::trace::{NormalForm, Trace};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Parser)]
#[command(name = "tracegen", version, about = "Exact random generation of traces in trace monoids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Möbius polynomial, its value, critical root or series coefficients.
    Mobius(MobiusArgs),
    /// Independent finite traces, one per line.
    Sample(SampleArgs),
    /// Growing prefixes of a uniform infinite trace as NDJSON.
    Stream(StreamArgs),
    /// Chordality, rejection-freeness, rate bound and Möbius estimate as JSON.
    Analyze(AnalyzeArgs),
    /// Exact table against empirical frequencies as JSON.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct GraphArg {
    /// JSON graph file, or a built-in family `path:N`, `cycle:N`, `complete:N`, `edgeless:N`.
    #[arg(long)]
    pub graph: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Direct,
    Rejection,
}

#[derive(Debug, Args)]
pub struct MobiusArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    /// Sub-alphabet, comma separated; the whole alphabet by default.
    #[arg(long)]
    pub subset: Option<String>,
    /// Evaluation point, decimal or fraction.
    #[arg(long, conflicts_with = "critical")]
    pub p: Option<String>,
    /// Smallest positive root.
    #[arg(long)]
    pub critical: bool,
    /// Coefficients of the trace counting series up to this degree.
    #[arg(long)]
    pub series_degree: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    /// Parameter p, decimal or fraction.
    #[arg(long)]
    pub p: String,
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    #[arg(long, value_enum, default_value = "direct")]
    pub algorithm: Algorithm,
    /// Sub-alphabet S of the direct sampler.
    #[arg(long)]
    pub subset: Option<String>,
    /// Allowed maximal letters T of the direct sampler.
    #[arg(long)]
    pub max_set: Option<String>,
    /// Enumeration a_1,...,a_n of the rejection sampler.
    #[arg(long)]
    pub ordering: Option<String>,
    /// Prefix size k of the rejection sampler, n-1 by default.
    #[arg(long)]
    pub prefix: Option<usize>,
    /// Target index l of the rejection sampler, n by default.
    #[arg(long)]
    pub target: Option<usize>,
    /// Print Cartier-Foata normal forms instead of words.
    #[arg(long)]
    pub normal_form: bool,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct StreamArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[arg(long, value_enum, default_value = "direct")]
    pub algorithm: Algorithm,
    #[arg(long)]
    pub loops: u64,
    /// Stop once the prefix has at least this many letters.
    #[arg(long)]
    pub budget_letters: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Anchor letter of the direct stream, the last letter by default.
    #[arg(long, conflicts_with = "ordering")]
    pub anchor: Option<String>,
    /// Enumeration of the rejection stream.
    #[arg(long)]
    pub ordering: Option<String>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    #[arg(long)]
    pub ordering: Option<String>,
    /// `p,epsilon,alpha` for the Monte-Carlo Möbius estimate.
    #[arg(long)]
    pub estimate: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    /// Parameter p, decimal or fraction.
    #[arg(long)]
    pub p: String,
    #[arg(long)]
    pub subset: Option<String>,
    #[arg(long)]
    pub max_set: Option<String>,
    /// Longest trace listed in the table.
    #[arg(long, default_value_t = 4)]
    pub horizon: usize,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Letter whose occurrence count is tested against its geometric law,
    /// the least letter of S and T by default.
    #[arg(long)]
    pub anchor: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

/// Loads a graph file or builds a named family.
pub fn load_graph(spec: &str) -> Result<DependenceGraph> {
    if let Some((family, size)) = spec.split_once(':') {
        if !Path::new(spec).exists() {
            let n: usize = size.parse().map_err(|_| Error::input(format!("bad family size in {spec:?}")))?;
            return match family {
                "path" => DependenceGraph::path(n),
                "cycle" => DependenceGraph::cycle(n),
                "complete" => DependenceGraph::complete(n),
                "edgeless" => DependenceGraph::edgeless(n),
                _ => Err(Error::input(format!("unknown graph family {family:?}"))),
            };
        }
    }
    DependenceGraph::from_json_file(spec)
}

/// How the text given for `p` relates to the exact table and the float samplers.
fn rounding_note(input: &str, exact: &BigRational, float: f64) -> String {
    let decimal = if input.contains('/') { "" } else { "decimal read exactly as a fraction; " };
    let same = BigRational::from_float(float).is_some_and(|f| &f == exact);
    if same {
        format!("{decimal}samplers use p exactly")
    } else {
        format!("{decimal}samplers use the nearest double {float:?}")
    }
}

/// Parses `p` as an exact rational in `(0, 1]`.
pub fn parse_probability(text: &str) -> Result<BigRational> {
    let p = parse_rational(text)?;
    let f = ratio_to_f64(&p);
    if !(f > 0.0 && f <= 1.0) {
        return Err(Error::input(format!("p = {text} must lie in (0, 1]")));
    }
    Ok(p)
}

/// Parses `p` or the token `critical`.
pub fn parse_parameter(text: &str) -> Result<Parameter> {
    if text.trim() == "critical" {
        Ok(Parameter::Critical)
    } else {
        Ok(Parameter::Value(ratio_to_f64(&parse_probability(text)?)))
    }
}

fn subset_or_all(g: &DependenceGraph, text: Option<&str>) -> Result<LetterSet> {
    text.map_or(Ok(g.alphabet()), |s| g.parse_set(s))
}

/// Runs a parsed command, writing its output to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Mobius(args) => mobius(args, out),
        Command::Sample(args) => sample(args, out),
        Command::Stream(args) => stream(args, out),
        Command::Analyze(args) => analyze(args, out),
        Command::Verify(args) => verify(args, out),
    }
}

fn mobius(args: &MobiusArgs, out: &mut dyn Write) -> Result<()> {
    let g = load_graph(&args.graph.graph)?;
    let s = subset_or_all(&g, args.subset.as_deref())?;
    let p = args.p.as_deref().map(parse_probability).transpose()?;
    let poly = g.mobius_poly(s);
    let root = if args.critical {
        if s.is_empty() {
            return Err(Error::input("the empty alphabet has no critical root"));
        }
        Some(g.critical_root(s, DEFAULT_ROOT_TOLERANCE)?)
    } else {
        None
    };
    let series = args.series_degree.map(|d| g.series_expand_within(s, s, d));
    match args.format {
        Format::Text => {
            if let Some(r) = &root {
                writeln!(out, "{:.12}", r.value)?;
            }
            if let Some(p) = &p {
                writeln!(out, "{:.12}", ratio_to_f64(&poly.eval_rational(p)))?;
            }
            if let Some(c) = &series {
                let c: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                writeln!(out, "{}", c.join(" "))?;
            }
            if root.is_none() && p.is_none() && series.is_none() {
                writeln!(out, "{}", poly.pretty())?;
            }
        }
        Format::Json => {
            let doc = json!({
                "subset": g.format_set(s),
                "polynomial": poly.pretty(),
                "coefficients": poly.coefficients(),
                "p": p.as_ref().map(|p| p.to_string()),
                "value": p.as_ref().map(|p| ratio_to_f64(&poly.eval_rational(p))),
                "value_exact": p.as_ref().map(|p| poly.eval_rational(p).to_string()),
                "critical_root": root.map(|r| r.value),
                "series": series.map(|c| c.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
            });
            writeln!(out, "{doc}")?;
        }
    }
    Ok(())
}

fn sample(args: &SampleArgs, out: &mut dyn Write) -> Result<()> {
    let g = Arc::new(load_graph(&args.graph.graph)?);
    let p = parse_parameter(&args.p)?.resolve(&g)?;
    let table = Arc::new(MobiusTable::new(Arc::clone(&g), p)?);
    let mut rng = seeded(args.seed);
    let emit = |x: &Trace, out: &mut dyn Write| -> Result<()> {
        if args.normal_form {
            writeln!(out, "{}", g.format_normal_form(&g.normal_form(x)))?;
        } else {
            writeln!(out, "{}", g.format_trace(x))?;
        }
        Ok(())
    };
    match args.algorithm {
        Algorithm::Direct => {
            if args.ordering.is_some() || args.prefix.is_some() || args.target.is_some() {
                return Err(Error::input("--ordering, --prefix and --target need --algorithm rejection"));
            }
            let s = subset_or_all(&g, args.subset.as_deref())?;
            let t = subset_or_all(&g, args.max_set.as_deref())?;
            table.ensure_subcritical(s)?;
            let sampler = DirectSampler::new(table);
            for _ in 0..args.count {
                emit(&sampler.sample(s, t, &mut rng)?, out)?;
            }
        }
        Algorithm::Rejection => {
            if args.subset.is_some() || args.max_set.is_some() {
                return Err(Error::input("--subset and --max-set need --algorithm direct"));
            }
            let ordering = args.ordering.as_deref().map(|o| g.parse_ordering(o)).transpose()?;
            let sampler = RejectionSampler::new(table, ordering)?;
            let n = g.len();
            let l = args.target.unwrap_or(n);
            let k = args.prefix.unwrap_or(l.saturating_sub(1));
            let mut stats = RejectionStats::default();
            if args.count > 0 {
                // validates k, l and p before any output
                let first = sampler.sample(k, l, &mut rng, &mut stats)?;
                emit(&first, out)?;
            }
            for _ in 1..args.count {
                emit(&sampler.sample(k, l, &mut rng, &mut stats)?, out)?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct StreamRecord<'a> {
    #[serde(rename = "loop")]
    loop_index: u64,
    increment: &'a str,
    total_length: usize,
    rejections: u64,
}

fn stream(args: &StreamArgs, out: &mut dyn Write) -> Result<()> {
    let g = Arc::new(load_graph(&args.graph.graph)?);
    let sampler = match args.algorithm {
        Algorithm::Direct => {
            if args.ordering.is_some() {
                return Err(Error::input("--ordering needs --algorithm rejection"));
            }
            let anchor = args.anchor.as_deref().map(|a| g.letter(a)).transpose()?;
            UniformSampler::direct(Arc::clone(&g), anchor)?
        }
        Algorithm::Rejection => {
            if args.anchor.is_some() {
                return Err(Error::input("--anchor needs --algorithm direct"));
            }
            let ordering = args.ordering.as_deref().map(|o| g.parse_ordering(o)).transpose()?;
            UniformSampler::rejection(Arc::clone(&g), ordering)?
        }
    };
    let mut stream = sampler.stream(args.seed);
    for _ in 0..args.loops {
        if args.budget_letters.is_some_and(|b| stream.prefix().len() >= b) {
            break;
        }
        let step = stream.step()?;
        let record = StreamRecord {
            loop_index: step.loop_index,
            increment: &g.format_trace(&step.increment),
            total_length: step.total_length,
            rejections: step.rejections,
        };
        writeln!(out, "{}", serde_json::to_string(&record)?)?;
    }
    Ok(())
}

fn parse_estimate(text: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let [p, eps, alpha] = parts[..] else {
        return Err(Error::input("--estimate expects p,epsilon,alpha"));
    };
    let p = ratio_to_f64(&parse_probability(p)?);
    let num = |s: &str| s.parse::<f64>().map_err(|_| Error::input(format!("cannot parse {s:?} as a number")));
    Ok((p, num(eps)?, num(alpha)?))
}

fn analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<()> {
    let g = load_graph(&args.graph.graph)?;
    let estimate_args = args.estimate.as_deref().map(parse_estimate).transpose()?;
    let (ordering, report) = match args.ordering.as_deref() {
        Some(o) => {
            let ordering = g.parse_ordering(o)?;
            let report = analyze_ordering(&g, &ordering)?;
            (ordering, report)
        }
        None => {
            let report = find_peo(&g);
            let ordering = report.ordering.iter().map(|a| g.letter(a)).collect::<Result<Vec<_>>>()?;
            (ordering, report)
        }
    };
    let rate = if g.is_connected() { Some(rate_bound(&g, &ordering)?) } else { None };
    let estimate = match estimate_args {
        Some((p, eps, alpha)) => Some(estimate_mobius(&g, p, eps, alpha, &mut seeded(args.seed))?),
        None => None,
    };
    let doc = json!({ "ordering": report, "rate": rate, "estimate": estimate });
    writeln!(out, "{doc}")?;
    Ok(())
}

#[derive(Serialize)]
struct VerifyRow {
    trace: String,
    exact: String,
    probability: f64,
    empirical: f64,
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<()> {
    let g = Arc::new(load_graph(&args.graph.graph)?);
    let p_exact = parse_probability(&args.p)?;
    let s = subset_or_all(&g, args.subset.as_deref())?;
    let t = subset_or_all(&g, args.max_set.as_deref())?;
    if args.samples == 0 {
        return Err(Error::input("--samples must be positive"));
    }
    let horizon = args.horizon.min(ORACLE_MAX_HORIZON);
    let table = exact_distribution(&g, &p_exact, s, t, horizon)?;
    let p = ratio_to_f64(&p_exact);
    let mobius = Arc::new(MobiusTable::new(Arc::clone(&g), p)?);
    let anchor: Option<Letter> = match args.anchor.as_deref() {
        Some(a) => {
            let a = g.letter(a)?;
            if !s.intersection(t).contains(a) {
                return Err(Error::input("anchor must lie in both the subset and the max-set"));
            }
            Some(a)
        }
        None => s.intersection(t).first(),
    };
    let r = anchor.map(|a| geometric_param(&mobius, s, a)).transpose()?;

    let sampler = DirectSampler::new(mobius);
    let mut rng = seeded(args.seed);
    let mut counts: BTreeMap<NormalForm, u64> = BTreeMap::new();
    let mut anchor_counts = Vec::new();
    let mut long = 0u64;
    for _ in 0..args.samples {
        let x = sampler.sample(s, t, &mut rng)?;
        if let Some(a) = anchor {
            anchor_counts.push(x.count(a) as u64);
        }
        if x.len() <= horizon {
            *counts.entry(g.normal_form(&x)).or_default() += 1;
        } else {
            long += 1;
        }
    }
    let n = args.samples as f64;
    let empirical: BTreeMap<NormalForm, f64> = counts.iter().map(|(k, &c)| (k.clone(), c as f64 / n)).collect();
    let exact = table.to_f64();
    let rows: Vec<VerifyRow> = table
        .entries
        .iter()
        .map(|(nf, w)| VerifyRow {
            trace: g.format_trace(&nf.to_trace()),
            exact: w.to_string(),
            probability: ratio_to_f64(w),
            empirical: empirical.get(nf).copied().unwrap_or(0.0),
        })
        .collect();
    let unit = NormalForm(Vec::new());
    let fit = match (anchor, r) {
        (Some(a), Some(r)) => Some(json!({
            "anchor": g.name(a),
            "r": r,
            "report": geometric_fit(&anchor_counts, r)?,
        })),
        _ => None,
    };
    let doc = json!({
        "p": p_exact.to_string(),
        "p_input": args.p,
        "p_float": p,
        "p_rounding": rounding_note(&args.p, &p_exact, p),
        "subset": g.format_set(s),
        "max_set": g.format_set(t),
        "horizon": horizon,
        "samples": args.samples,
        "seed": args.seed,
        "tail_bound": table.tail_bound,
        "longer_than_horizon": long as f64 / n,
        "empty": { "exact": table.probability(&unit), "empirical": empirical.get(&unit).copied().unwrap_or(0.0) },
        "total_variation": total_variation(&exact, &empirical),
        "geometric": fit,
        "table": rows,
    });
    writeln!(out, "{doc}")?;
    Ok(())
}
