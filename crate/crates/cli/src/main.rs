//! `capax`: capacities, equilibrium measures and totally real algebraic
//! integers from the command line.

mod config;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use capax::capacity::{
    capacity_closed_form, chebyshev_constant, fekete_points, transfinite_diameter, CompactDescriptor, FeketeOptions,
    IntervalUnion,
};
use capax::enumerate::{enumerate_naive, enumerate_pruned, minimal_filter, EnumerationResult, SegmentSearchSpec};
use capax::equilibrium::{
    arcsine_measure, frostman_check, minimize_energy, DiscreteMeasure, MinimizeOptions,
};
use capax::lemniscate::{lemniscate_shrink, Lemniscate, DEFAULT_DEGREE_CAP};
use capax::pellabel::{
    equidistribution_report, periods, robinson_sequence, RobinsonOptions, Schedule, DEFAULT_DEGREE_BUDGET,
    DEFAULT_QUAD_NODES,
};
use capax::plotdata;
use capax::poly::{format_rational, parse_rational, MonicRatPolynomial};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use config::{merge, tolerance, Command, Format, RunConfig};

/// Failure carrying its exit code: 2 for rejected input, 3 for numerical
/// trouble.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<capax::Error> for Failure {
    fn from(e: capax::Error) -> Self {
        Failure { code: if e.is_numerical() { 3 } else { 2 }, message: e.to_string() }
    }
}

type Outcome<T> = Result<T, Failure>;

#[derive(Parser, Debug)]
#[command(name = "capax", version, about = "Capacities of compact sets and algebraic integers totally in real segments")]
struct Cli {
    /// JSON run configuration: {"command", "params", "seed", "tolerances", "output"}.
    /// Flags given on the command line override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "CAPAX_THREADS")]
    threads: Option<usize>,

    /// Seed for every randomised step (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Write the result here (atomically) instead of to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Result format.
    #[arg(long, global = true, value_enum)]
    emit: Option<Format>,

    /// Tolerance override, `name=value`; may be repeated.
    #[arg(long = "tol", global = true, value_parser = parse_tol)]
    tolerances: Vec<(String, f64)>,

    /// Also write a CSV table for plotting.
    #[arg(long, global = true, value_enum, requires = "plot_out")]
    plot: Option<PlotKind>,

    #[arg(long, global = true)]
    plot_out: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PlotKind {
    DegreeHistogram,
    CdfPair,
    FeketeScatter,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Capacity of a compact set by closed form, Fekete points or Remez.
    Capacity(CapacityArgs),
    /// Monic integer polynomials with every root in a segment.
    Enumerate(EnumerateArgs),
    /// Fekete points of a compact set.
    Fekete(FeketeArgs),
    /// Discretised equilibrium measure and Frostman check.
    Equilibrium(EquilibriumArgs),
    /// Chebyshev constant of an interval union.
    Chebyshev(ChebyshevArgs),
    /// Integer lemniscate inside a rational one.
    Lemniscate(LemniscateArgs),
    /// Integer polynomials with all roots in P^{-1}([-M, M]).
    Robinson(RobinsonArgs),
    /// Periods of the canonical differential on D's bands.
    Pellabel(PellabelArgs),
}

fn parse_json(s: &str) -> Result<Value, String> {
    serde_json::from_str(s).map_err(|e| format!("invalid JSON: {e}"))
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected name=value")?;
    let v: f64 = v.parse().map_err(|_| format!("bad number {v:?}"))?;
    Ok((k.to_string(), v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
enum Method {
    Closed,
    Fekete,
    Remez,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CapacityArgs {
    /// Compact set, e.g. '{"interval_union":[-2,2]}' or '{"circle":1}'.
    #[arg(long, value_parser = parse_json)]
    set: Option<Value>,
    /// closed (default), fekete or remez.
    #[arg(long, value_enum)]
    method: Option<Method>,
    /// Largest n for the fekete and remez routes (default 20 and 24).
    #[arg(long)]
    n_max: Option<usize>,
    /// Fekete multistarts (default 20).
    #[arg(long)]
    multistarts: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
enum Algo {
    Naive,
    Pruned,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EnumerateArgs {
    /// Segment `a,b` with rational ends, e.g. `-2,2` or `-19/10,19/10`.
    #[arg(long, allow_hyphen_values = true)]
    segment: Option<String>,
    #[arg(long)]
    max_degree: Option<usize>,
    /// pruned (default) or naive.
    #[arg(long, value_enum)]
    algo: Option<Algo>,
    /// Node budget of the naive search (default 1e8).
    #[arg(long)]
    budget: Option<f64>,
    /// Keep only minimal polynomials.
    #[arg(long)]
    minimal: Option<bool>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FeketeArgs {
    #[arg(long, value_parser = parse_json)]
    set: Option<Value>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    multistarts: Option<usize>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EquilibriumArgs {
    /// Interval union, circle or disk.
    #[arg(long, value_parser = parse_json)]
    set: Option<Value>,
    /// Grid nodes (default 400).
    #[arg(long)]
    grid: Option<usize>,
    /// Iteration cap (default 20000).
    #[arg(long)]
    iters: Option<usize>,
    /// Initial step (default 1).
    #[arg(long)]
    step: Option<f64>,
    /// Frostman probes (default 500).
    #[arg(long)]
    probes: Option<usize>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChebyshevArgs {
    /// Interval union.
    #[arg(long, value_parser = parse_json)]
    set: Option<Value>,
    /// Largest degree (default 24).
    #[arg(long)]
    n_max: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
enum LemniscateAction {
    Shrink,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LemniscateArgs {
    #[arg(value_enum)]
    action: Option<LemniscateAction>,
    /// Monic rational polynomial, '{"coeffs":["-1/2","1"]}'.
    #[arg(long, value_parser = parse_json)]
    p: Option<Value>,
    /// `p/q` with rho > 1.
    #[arg(long)]
    rho: Option<String>,
    /// Largest admissible degree of Gamma (default 5000).
    #[arg(long)]
    degree_cap: Option<usize>,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RobinsonArgs {
    /// Monic rational polynomial P.
    #[arg(long, value_parser = parse_json)]
    p: Option<Value>,
    /// Level M = p/q > 2.
    #[arg(long)]
    m: Option<String>,
    /// Degree budget (default 600).
    #[arg(long)]
    budget: Option<usize>,
    /// doubling (default) or every.
    #[arg(long, value_enum)]
    schedule: Option<ScheduleArg>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
enum ScheduleArg {
    Doubling,
    Every,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
enum PellabelAction {
    Periods,
}

#[derive(Args, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PellabelArgs {
    #[arg(value_enum)]
    action: Option<PellabelAction>,
    /// Monic rational D of even degree with real simple roots.
    #[arg(long, value_parser = parse_json)]
    d: Option<Value>,
    /// Starting quadrature nodes (default 2048).
    #[arg(long)]
    quad_nodes: Option<usize>,
}

/// Everything a command needs besides its own parameters.
struct Ctx {
    seed: u64,
    tolerances: BTreeMap<String, f64>,
    format: Format,
    plot: Option<PlotKind>,
}

/// A finished command: the artifact, the one-line summary, and the plot
/// table if one was asked for.
struct Artifact {
    body: String,
    summary: String,
    plot: Option<String>,
}

fn need<T>(v: Option<T>, flag: &str) -> Outcome<T> {
    v.ok_or_else(|| Failure::usage(format!("missing required --{flag}")))
}

fn descriptor(v: Value) -> Outcome<CompactDescriptor> {
    let d: CompactDescriptor = serde_json::from_value(v).map_err(|e| Failure::usage(format!("--set: {e}")))?;
    d.validate()?;
    Ok(d)
}

fn interval_union(v: Value) -> Outcome<IntervalUnion> {
    match descriptor(v)? {
        CompactDescriptor::IntervalUnion(u) => Ok(u),
        _ => Err(Failure::usage("this command needs an interval_union set")),
    }
}

fn rat_poly(v: Value, flag: &str) -> Outcome<MonicRatPolynomial> {
    serde_json::from_value(v).map_err(|e| Failure::usage(format!("--{flag}: {e}")))
}

fn rational(s: &str, flag: &str) -> Outcome<BigRational> {
    parse_rational(s).map_err(|e| Failure::usage(format!("--{flag}: {e}")))
}

fn to_json<T: Serialize>(v: &T) -> Outcome<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Failure::usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn no_csv(ctx: &Ctx, what: &str) -> Outcome<()> {
    if ctx.format == Format::Csv {
        return Err(Failure::usage(format!("{what} has no CSV form; use --emit json")));
    }
    Ok(())
}

fn wrong_plot(kind: PlotKind, what: &str) -> Failure {
    Failure::usage(format!("plot {kind:?} is not available for {what}"))
}

fn run_capacity(a: CapacityArgs, ctx: &Ctx) -> Outcome<Artifact> {
    no_csv(ctx, "capacity")?;
    let set = descriptor(need(a.set, "set")?)?;
    let tol = tolerance(&ctx.tolerances, &["remez"], "remez", 1e-12)?;
    let method = a.method.unwrap_or(Method::Closed);
    let (value, detail) = match method {
        Method::Closed => {
            let v = capacity_closed_form(&set).ok_or_else(|| Failure::usage("no closed form for this set"))?;
            (v, Value::Null)
        }
        Method::Fekete => {
            let opt = FeketeOptions { multistarts: a.multistarts.unwrap_or(20), seed: ctx.seed, ..Default::default() };
            let seq = transfinite_diameter(&set, a.n_max.unwrap_or(20), &opt)?;
            let v = seq.last().map(|c| c.delta_n).unwrap_or(f64::NAN);
            (v, json!({ "delta_n": seq.iter().map(|c| (c.n, c.delta_n)).collect::<Vec<_>>() }))
        }
        Method::Remez => {
            let u = match set {
                CompactDescriptor::IntervalUnion(u) => u,
                _ => return Err(Failure::usage("--method remez needs an interval_union set")),
            };
            let c = chebyshev_constant(&u, a.n_max.unwrap_or(24), tol)?;
            (c.extrapolated, serde_json::to_value(&c).map_err(|e| Failure::usage(e.to_string()))?)
        }
    };
    if let Some(k) = ctx.plot {
        return Err(wrong_plot(k, "capacity"));
    }
    let body = to_json(&json!({ "method": method, "capacity": value, "detail": detail }))?;
    Ok(Artifact { body, summary: format!("{value}"), plot: None })
}

fn segment(s: &str) -> Outcome<(BigRational, BigRational)> {
    let (a, b) = s.split_once(',').ok_or_else(|| Failure::usage("--segment expects a,b"))?;
    Ok((rational(a, "segment")?, rational(b, "segment")?))
}

fn enumerate_csv(r: &EnumerationResult, max_degree: usize) -> Outcome<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["degree".to_string()];
    header.extend((0..=max_degree).map(|i| format!("c{i}")));
    header.extend((1..=max_degree).map(|i| format!("root{i}")));
    let csv_err = |e: csv::Error| Failure::usage(format!("csv: {e}"));
    w.write_record(&header).map_err(csv_err)?;
    for p in r.all_polys() {
        let d = p.degree();
        let mut row = vec![d.to_string()];
        let coeffs: Vec<String> = p.poly().coeffs().iter().map(|c| c.to_string()).collect();
        row.extend((0..=max_degree).map(|i| coeffs.get(i).cloned().unwrap_or_default()));
        let roots = capax::poly::roots(p, 1e-8)?.real_parts_sorted();
        row.extend((0..max_degree).map(|i| roots.get(i).map(|x| x.to_string()).unwrap_or_default()));
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::usage(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Failure::usage(e.to_string()))
}

fn run_enumerate(a: EnumerateArgs, ctx: &Ctx) -> Outcome<Artifact> {
    let (lo, hi) = segment(&need(a.segment, "segment")?)?;
    let max_degree = need(a.max_degree, "max-degree")?;
    let tol = tolerance(&ctx.tolerances, &["root"], "root", 1e-9)?;
    let spec = SegmentSearchSpec::new(lo, hi, max_degree)?.with_tol(tol);
    let mut r = match a.algo.unwrap_or(Algo::Pruned) {
        Algo::Pruned => enumerate_pruned(&spec)?,
        Algo::Naive => enumerate_naive(&spec, a.budget.unwrap_or(1e8))?,
    };
    if a.minimal.unwrap_or(false) {
        r = minimal_filter(&r);
    }
    let body = match ctx.format {
        Format::Json => to_json(&r)?,
        Format::Csv => enumerate_csv(&r, max_degree)?,
    };
    let plot = match ctx.plot {
        None => None,
        Some(PlotKind::DegreeHistogram) => Some(plotdata::degree_histogram(&r, max_degree)?),
        Some(k) => return Err(wrong_plot(k, "enumerate")),
    };
    let summary = format!("{} polynomials of degree <= {max_degree}", r.len());
    Ok(Artifact { body, summary, plot })
}

fn run_fekete(a: FeketeArgs, ctx: &Ctx) -> Outcome<Artifact> {
    let set = descriptor(need(a.set, "set")?)?;
    let n = need(a.n, "n")?;
    let opt = FeketeOptions { multistarts: a.multistarts.unwrap_or(20), seed: ctx.seed, ..Default::default() };
    let conf = fekete_points(&set, n, &opt)?;
    let scatter = plotdata::fekete_scatter(&conf.points)?;
    let body = match ctx.format {
        Format::Json => to_json(&conf)?,
        Format::Csv => scatter.clone(),
    };
    let plot = match ctx.plot {
        None => None,
        Some(PlotKind::FeketeScatter) => Some(scatter),
        Some(k) => return Err(wrong_plot(k, "fekete")),
    };
    Ok(Artifact { body, summary: format!("delta_{n} = {}", conf.delta_n), plot })
}

fn run_equilibrium(a: EquilibriumArgs, ctx: &Ctx) -> Outcome<Artifact> {
    no_csv(ctx, "equilibrium")?;
    let set = descriptor(need(a.set, "set")?)?;
    let ftol = tolerance(&ctx.tolerances, &["frostman"], "frostman", 0.05)?;
    let defaults = MinimizeOptions::default();
    let opt = MinimizeOptions {
        iters: a.iters.unwrap_or(defaults.iters),
        step: a.step.unwrap_or(defaults.step),
        seed: ctx.seed,
    };
    let m = minimize_energy(&set, a.grid.unwrap_or(400), &opt)?;
    let f = frostman_check(&m.measure, &set, m.report.robin_constant, a.probes.unwrap_or(500), ftol)?;
    let plot = match (ctx.plot, &set) {
        (None, _) => None,
        (Some(PlotKind::CdfPair), CompactDescriptor::IntervalUnion(u)) if u.num_bands() == 1 => {
            let (lo, hi) = u.hull();
            Some(plotdata::cdf_pair(&arcsine_measure(lo, hi, 4096)?, &m.measure, 201)?)
        }
        (Some(k), _) => return Err(wrong_plot(k, "equilibrium on this set")),
    };
    let body = to_json(&json!({
        "measure": m.measure,
        "report": m.report,
        "iterations": m.iterations,
        "converged": m.converged,
        "frostman": f,
        "frostman_passed": f.passed(),
    }))?;
    let summary = format!("robin_constant = {}, frostman {}", m.report.robin_constant, if f.passed() { "pass" } else { "fail" });
    Ok(Artifact { body, summary, plot })
}

fn run_chebyshev(a: ChebyshevArgs, ctx: &Ctx) -> Outcome<Artifact> {
    no_csv(ctx, "chebyshev")?;
    let u = interval_union(need(a.set, "set")?)?;
    let tol = tolerance(&ctx.tolerances, &["remez"], "remez", 1e-12)?;
    let c = chebyshev_constant(&u, a.n_max.unwrap_or(24), tol)?;
    if let Some(k) = ctx.plot {
        return Err(wrong_plot(k, "chebyshev"));
    }
    Ok(Artifact { body: to_json(&c)?, summary: format!("{}", c.extrapolated), plot: None })
}

fn run_lemniscate(a: LemniscateArgs, ctx: &Ctx) -> Outcome<Artifact> {
    no_csv(ctx, "lemniscate")?;
    need(a.action, "action (shrink)")?;
    let p = rat_poly(need(a.p, "p")?, "p")?;
    let rho = rational(&need(a.rho, "rho")?, "rho")?;
    let l = Lemniscate::new(p, rho)?;
    let s = lemniscate_shrink(&l, a.degree_cap.unwrap_or(DEFAULT_DEGREE_CAP))?;
    if let Some(k) = ctx.plot {
        return Err(wrong_plot(k, "lemniscate"));
    }
    let body = to_json(&json!({
        "gamma": s.gamma(),
        "mu": s.integerized.mu,
        "nu": s.integerized.nu,
        "certificate": s.certificate,
    }))?;
    Ok(Artifact { body, summary: format!("Gamma of degree {}", s.gamma().degree()), plot: None })
}

fn run_robinson(a: RobinsonArgs, ctx: &Ctx) -> Outcome<Artifact> {
    no_csv(ctx, "robinson")?;
    let p = rat_poly(need(a.p, "p")?, "p")?;
    let m = rational(&need(a.m, "m")?, "m")?;
    let schedule = match a.schedule.unwrap_or(ScheduleArg::Doubling) {
        ScheduleArg::Doubling => Schedule::Doubling,
        ScheduleArg::Every => Schedule::Every,
    };
    let opt = RobinsonOptions { degree_budget: a.budget.unwrap_or(DEFAULT_DEGREE_BUDGET), schedule };
    let s = robinson_sequence(&p, &m, &opt)?;
    let (_, e) = capax::pellabel::pell_abel_from_chebyshev(&p, &m)?;
    let roots: Vec<Vec<f64>> = s.accepted.iter().map(|x| x.roots.clone()).collect();
    let dist = equidistribution_report(&roots, &e)?;
    let items: Vec<Value> = s
        .accepted
        .iter()
        .zip(&dist)
        .map(|(x, d)| json!({ "n": x.n, "degree": x.poly.degree(), "coeffs": x.poly, "roots": x.roots, "ratio": x.ratio, "distance": d.1 }))
        .collect();
    let plot = match ctx.plot {
        None => None,
        Some(PlotKind::CdfPair) if e.num_bands() == 1 => {
            let (lo, hi) = e.hull();
            let last = roots.last().cloned().unwrap_or_default();
            Some(plotdata::cdf_pair(&arcsine_measure(lo, hi, 4096)?, &DiscreteMeasure::counting_real(&last)?, 201)?)
        }
        Some(k) => return Err(wrong_plot(k, "robinson on this set")),
    };
    let body = to_json(&json!({ "m": format_rational(&m), "accepted": items, "rejected": s.rejected }))?;
    let degrees: Vec<String> = s.accepted.iter().map(|x| x.poly.degree().to_string()).collect();
    Ok(Artifact { body, summary: format!("accepted degrees {}", degrees.join(",")), plot })
}

fn run_pellabel(a: PellabelArgs, ctx: &Ctx) -> Outcome<Artifact> {
    no_csv(ctx, "pellabel")?;
    need(a.action, "action (periods)")?;
    let d = rat_poly(need(a.d, "d")?, "d")?;
    let rep = periods(&d, a.quad_nodes.unwrap_or(DEFAULT_QUAD_NODES))?;
    if let Some(k) = ctx.plot {
        return Err(wrong_plot(k, "pellabel"));
    }
    Ok(Artifact { body: to_json(&rep)?, summary: format!("|eta| = {:?}", rep.eta_abs), plot: None })
}

/// Write via a temporary file in the target directory, then rename, so a
/// failed run leaves nothing behind.
fn write_atomic(path: &Path, contents: &str) -> Outcome<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let io = |e: std::io::Error| Failure::usage(format!("cannot write {}: {e}", path.display()));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// The flag struct of subcommand `$v`, or its defaults when the command came
/// from the config file.
macro_rules! pick {
    ($s:expr, $v:ident) => {
        match $s {
            Some(Sub::$v(a)) => a,
            _ => Default::default(),
        }
    };
}

fn dispatch(cli: Cli) -> Outcome<()> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let command = match (&cli.command, cfg.command) {
        (Some(s), c) => {
            let from_flags = sub_command(s);
            if c.is_some_and(|c| c != from_flags) {
                return Err(Failure::usage("config command differs from the subcommand given"));
            }
            from_flags
        }
        (None, Some(c)) => c,
        (None, None) => return Err(Failure::usage("no command given; see capax --help")),
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(e.to_string()))?;
    }
    let mut tolerances = cfg.tolerances.clone();
    tolerances.extend(cli.tolerances.iter().cloned());
    let ctx = Ctx {
        seed: cli.seed.or(cfg.seed).unwrap_or(0),
        tolerances,
        format: cli.emit.or(cfg.output.format).unwrap_or(Format::Json),
        plot: cli.plot,
    };
    let out = cli.out.clone().or(cfg.output.path.clone());
    let p = &cfg.params;
    let artifact = match (command, cli.command) {
        (Command::Capacity, s) => run_capacity(merge(&pick!(s, Capacity), p)?, &ctx)?,
        (Command::Enumerate, s) => run_enumerate(merge(&pick!(s, Enumerate), p)?, &ctx)?,
        (Command::Fekete, s) => run_fekete(merge(&pick!(s, Fekete), p)?, &ctx)?,
        (Command::Equilibrium, s) => run_equilibrium(merge(&pick!(s, Equilibrium), p)?, &ctx)?,
        (Command::Chebyshev, s) => run_chebyshev(merge(&pick!(s, Chebyshev), p)?, &ctx)?,
        (Command::Lemniscate, s) => run_lemniscate(merge(&pick!(s, Lemniscate), p)?, &ctx)?,
        (Command::Robinson, s) => run_robinson(merge(&pick!(s, Robinson), p)?, &ctx)?,
        (Command::Pellabel, s) => run_pellabel(merge(&pick!(s, Pellabel), p)?, &ctx)?,
    };
    if let (Some(text), Some(path)) = (&artifact.plot, &cli.plot_out) {
        write_atomic(path, text)?;
    }
    let text = match out {
        Some(path) => {
            write_atomic(&path, &artifact.body)?;
            format!("{}\n", artifact.summary)
        }
        None => artifact.body,
    };
    emit(&text)
}

/// Write to stdout; a reader that hung up early is not an error.
fn emit(text: &str) -> Outcome<()> {
    let mut w = std::io::stdout().lock();
    match w.write_all(text.as_bytes()).and_then(|_| w.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(Failure::usage(format!("writing stdout: {e}")))
        }
        _ => Ok(()),
    }
}

fn sub_command(s: &Sub) -> Command {
    match s {
        Sub::Capacity(_) => Command::Capacity,
        Sub::Enumerate(_) => Command::Enumerate,
        Sub::Fekete(_) => Command::Fekete,
        Sub::Equilibrium(_) => Command::Equilibrium,
        Sub::Chebyshev(_) => Command::Chebyshev,
        Sub::Lemniscate(_) => Command::Lemniscate,
        Sub::Robinson(_) => Command::Robinson,
        Sub::Pellabel(_) => Command::Pellabel,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("capax: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
