use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};
use mwsieve_core::heuristic::{is_smooth, smooth_fraction_with, summarize, trial_hit, SubsetModel};
use mwsieve_core::sieve::{
    certify, local_data_with_order, run_sieve, GeneratorSet, PrimeLocalData, SieveConfig, SieveReport, Verdict,
};
use mwsieve_core::{CurveSpec, Error as CoreError};
use rayon::prelude::*;

use crate::cache::{self, Cache};
use crate::certificate::Certificate;
use crate::error::{CliError, Result};
use crate::format::{load_generators, parse_curve_file};
use crate::record::{join, Record};

#[derive(Debug, Parser)]
#[command(
    name = "mwsieve",
    version,
    about = "Mordell-Weil sieve for odd-degree hyperelliptic curves"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Point counts and Jacobian orders over a range of primes.
    Count(RangeArgs),
    /// Invariant factors of J(F_p) over a range of primes.
    Structure(RangeArgs),
    /// Run the sieve over S(B) or an explicit prime list.
    Sieve(SieveArgs),
    /// Re-verify a certificate, or brute-force an explicit instance.
    Certify(CertifyArgs),
    /// Fraction of primes p <= B with B^u-smooth #J(F_p).
    Smoothness(SmoothnessArgs),
    /// Monte Carlo estimates of the random-subset survival probability.
    Heuristic(HeuristicArgs),
    /// Inspect or clear a cache file.
    Cache(CacheArgs),
}

#[derive(Debug, Args)]
struct RangeArgs {
    #[arg(long)]
    curve: PathBuf,
    #[arg(long)]
    pmax: u64,
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("selection").required(true).args(["b", "primes"])))]
struct SieveArgs {
    #[arg(long)]
    curve: PathBuf,
    #[arg(long)]
    gens: PathBuf,
    #[arg(long = "B")]
    b: Option<f64>,
    /// Comma-separated primes, used in the given order.
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    /// Largest number of primes taken from S(B).
    #[arg(long, default_value_t = 100)]
    cap: usize,
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Where to write a certificate when the run is obstructed.
    #[arg(long)]
    cert: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    #[arg(long, conflicts_with_all = ["curve", "gens", "primes"])]
    cert: Option<PathBuf>,
    #[arg(long, requires_all = ["gens", "primes"])]
    curve: Option<PathBuf>,
    #[arg(long)]
    gens: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
}

#[derive(Debug, Args)]
struct SmoothnessArgs {
    #[arg(long)]
    curve: PathBuf,
    #[arg(long = "B")]
    b: f64,
    #[arg(long)]
    u: f64,
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct HeuristicArgs {
    #[arg(long)]
    curve: PathBuf,
    #[arg(long)]
    gens: PathBuf,
    /// Comma-separated schedule of bounds.
    #[arg(long = "B", value_delimiter = ',', required = true)]
    b: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    cap: usize,
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CacheArgs {
    #[arg(long)]
    cache: PathBuf,
    #[arg(long)]
    clear: bool,
}

/// Parse `argv`, run the command, and return the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return e.exit_code();
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Count(a) => count(a, out, err),
        Command::Structure(a) => structure(a, out, err),
        Command::Sieve(a) => sieve(a, out, err),
        Command::Certify(a) => certify_cmd(a, out),
        Command::Smoothness(a) => smoothness(a, out, err),
        Command::Heuristic(a) => heuristic(a, out, err),
        Command::Cache(a) => cache_cmd(a, out, err),
    }
}

fn first_failure(failed: Vec<(u64, CoreError)>) -> Result<()> {
    match failed.into_iter().next() {
        Some((_, e)) => Err(e.into()),
        None => Ok(()),
    }
}

fn count(a: RangeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let curve = parse_curve_file(&a.curve)?;
    let mut cache = Cache::open(a.cache.as_deref(), &curve, err)?;
    let primes = curve.good_primes(3, a.pmax);
    let failed = cache.ensure(&primes, false);
    cache.flush()?;
    first_failure(failed)?;
    for &p in &primes {
        let r = cache.get(p).expect("ensured");
        let rec = Record::new("count")
            .with("p", p)
            .with("n1", r.n1)
            .with("n2", r.n2)
            .with("order", r.order)
            .with("factors", &r.factorization);
        writeln!(out, "{rec}")?;
    }
    Ok(())
}

fn structure(a: RangeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let curve = parse_curve_file(&a.curve)?;
    let mut cache = Cache::open(a.cache.as_deref(), &curve, err)?;
    let primes = curve.good_primes(3, a.pmax);
    let failed = cache.ensure(&primes, true);
    cache.flush()?;
    first_failure(failed)?;
    for &p in &primes {
        let r = cache.get(p).expect("ensured");
        let inv = r.invariant_factors.as_deref().expect("ensured");
        let rec = Record::new("structure")
            .with("p", p)
            .with("order", r.order)
            .with("inv", join(inv))
            .with("rank", inv.len())
            .with("exponent", inv.last().copied().unwrap_or(1));
        writeln!(out, "{rec}")?;
    }
    Ok(())
}

/// Good primes `p <= B^2` with B-smooth group order, ascending, at most `cap`.
fn select_cached(curve: &CurveSpec, cache: &mut Cache, b: f64, cap: usize) -> Vec<u64> {
    if b.is_nan() || b < 2.0 {
        return Vec::new();
    }
    let candidates = curve.good_primes(3, (b * b).floor() as u64);
    cache.ensure(&candidates, false);
    candidates
        .into_iter()
        .filter(|&p| cache.get(p).is_some_and(|r| is_smooth(r.order, b).unwrap_or(false)))
        .take(cap)
        .collect()
}

/// Local data for each prime, in parallel, with orders from the cache.
fn local_data_cached(
    curve: &CurveSpec,
    gens: &GeneratorSet,
    cache: &mut Cache,
    primes: &[u64],
) -> Vec<mwsieve_core::Result<PrimeLocalData>> {
    let failed = cache.ensure(primes, false);
    primes
        .par_iter()
        .map(|&p| match cache.get(p) {
            Some(r) => local_data_with_order(curve, gens, p, r.order),
            None => {
                let reason = failed
                    .iter()
                    .find(|(q, _)| *q == p)
                    .map_or(CoreError::BadPrime(p), |(_, e)| e.clone());
                Err(CoreError::SkipPrime {
                    p,
                    reason: Box::new(reason),
                })
            }
        })
        .collect()
}

fn write_sieve_report(out: &mut dyn Write, report: &SieveReport) -> Result<()> {
    for s in &report.per_prime {
        let rec = Record::new("prime")
            .with("p", s.p)
            .with("order", s.order)
            .with("inv", join(&s.invariant_factors))
            .with("exponent", s.exponent)
            .with("n1", s.n1)
            .with("candidates", s.candidates)
            .with("survivors", s.survivors)
            .with("elimination", s.elimination);
        writeln!(out, "{rec}")?;
    }
    for (p, e) in &report.skipped {
        writeln!(out, "{}", Record::new("skip").with("p", p).with("reason", e))?;
    }
    Ok(())
}

fn verdict_record(verdict: &Verdict) -> Record {
    match verdict {
        Verdict::Obstructed { primes } => Record::new("verdict")
            .with("result", "obstructed")
            .with("primes", join(primes))
            .with("survivors", 0),
        Verdict::Inconclusive { survivors, modulus } => Record::new("verdict")
            .with("result", "inconclusive")
            .with("survivors", survivors)
            .with("modulus", modulus),
    }
}

fn sieve(a: SieveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let curve = parse_curve_file(&a.curve)?;
    let (lines, gens) = load_generators(&a.gens, &curve)?;
    let mut cache = Cache::open(a.cache.as_deref(), &curve, err)?;
    let primes = match (&a.primes, a.b) {
        (Some(list), _) => list.clone(),
        (None, Some(b)) => select_cached(&curve, &mut cache, b, a.cap),
        (None, None) => return Err(CliError::Usage("one of --B or --primes is required".into())),
    };
    let local = local_data_cached(&curve, &gens, &mut cache, &primes);
    cache.flush()?;
    let header = Record::new("sieve")
        .with("curve", join(curve.coeffs()))
        .with("rank", gens.rank())
        .with("torsion", gens.torsion_elements().len())
        .with("coset", gens.offset().is_some())
        .with("primes", join(&primes));
    writeln!(out, "{header}")?;
    let config = SieveConfig::default();
    let report = match run_sieve(gens.rank(), gens.torsion_elements().len(), local, &config, |_| {}) {
        Ok(r) => r,
        Err(aborted) => {
            write_sieve_report(out, &aborted.partial)?;
            return Err(aborted.into());
        }
    };
    write_sieve_report(out, &report)?;
    writeln!(out, "{}", verdict_record(&report.verdict))?;
    if let Some(path) = &a.cert {
        if let Some(cert) = Certificate::from_report(&curve, &lines, &report) {
            fs::write(path, cert.to_text()).map_err(|e| CliError::io(path, e))?;
            writeln!(err, "certificate written to {}", path.display())?;
        }
    }
    Ok(())
}

fn brute_force_label(result: Option<bool>) -> &'static str {
    match result {
        Some(true) => "disjoint",
        Some(false) => "intersecting",
        None => "skipped",
    }
}

fn certify_cmd(a: CertifyArgs, out: &mut dyn Write) -> Result<()> {
    if let Some(path) = &a.cert {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let cert = Certificate::parse(&text, path)?;
        let v = cert.verify()?;
        let rec = Record::new("certify")
            .with("valid", v.valid)
            .with("primes", join(&cert.primes.iter().map(|e| e.p).collect::<Vec<_>>()))
            .with("brute_force", brute_force_label(v.brute_force));
        writeln!(out, "{rec}")?;
        for msg in &v.problems {
            writeln!(out, "{}", Record::new("problem").with("message", msg))?;
        }
        return Ok(());
    }
    let (Some(curve_path), Some(gens_path), Some(primes)) = (&a.curve, &a.gens, &a.primes) else {
        return Err(CliError::Usage(
            "either --cert or all of --curve, --gens, --primes".into(),
        ));
    };
    let curve = parse_curve_file(curve_path)?;
    let (_, gens) = load_generators(gens_path, &curve)?;
    let brute = match certify(&curve, &gens, primes) {
        Ok(d) => Some(d),
        Err(CoreError::TooLarge { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let local = primes
        .iter()
        .map(|&p| mwsieve_core::sieve::local_data(&curve, &gens, p));
    let report = run_sieve(
        gens.rank(),
        gens.torsion_elements().len(),
        local,
        &SieveConfig::default(),
        |_| {},
    )?;
    let sieve_result = if report.verdict.is_obstructed() {
        "obstructed"
    } else {
        "inconclusive"
    };
    let rec = Record::new("certify")
        .with("primes", join(primes))
        .with("sieve", sieve_result)
        .with("brute_force", brute_force_label(brute))
        .with(
            "agree",
            brute.map_or("unknown".to_string(), |d| {
                (d == report.verdict.is_obstructed()).to_string()
            }),
        );
    writeln!(out, "{rec}")?;
    Ok(())
}

fn smoothness(a: SmoothnessArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let curve = parse_curve_file(&a.curve)?;
    let mut cache = Cache::open(a.cache.as_deref(), &curve, err)?;
    if a.b >= 3.0 {
        cache.ensure(&curve.good_primes(3, a.b.floor() as u64), false);
    }
    let stats = smooth_fraction_with(&curve, a.b, a.u, |p| cache.order(p))?;
    cache.flush()?;
    let rec = Record::new("smoothness")
        .with("curve", join(curve.coeffs()))
        .with("B", stats.b)
        .with("u", stats.u)
        .with("total", stats.total)
        .with("smooth", stats.smooth)
        .with("skipped", stats.skipped)
        .with("fraction", stats.fraction)
        .with("rho", stats.rho_baseline);
    writeln!(out, "{rec}")?;
    Ok(())
}

fn heuristic(a: HeuristicArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let curve = parse_curve_file(&a.curve)?;
    let (_, gens) = load_generators(&a.gens, &curve)?;
    let mut cache = Cache::open(a.cache.as_deref(), &curve, err)?;
    let config = SieveConfig::default();
    let torsion = gens.torsion_elements().len();
    for &b in &a.b {
        let primes = select_cached(&curve, &mut cache, b, a.cap);
        let local: Vec<PrimeLocalData> = local_data_cached(&curve, &gens, &mut cache, &primes)
            .into_iter()
            .filter_map(|d| d.ok())
            .collect();
        cache.flush()?;
        if local.is_empty() {
            let rec = Record::new("heuristic")
                .with("B", b)
                .with("primes", "-")
                .with("status", "no-primes");
            writeln!(out, "{rec}")?;
            continue;
        }
        let hits: Vec<bool> = (0..a.trials)
            .into_par_iter()
            .map(|t| trial_hit(&local, gens.rank(), torsion, t, a.seed, &SubsetModel::Uniform, &config))
            .collect::<mwsieve_core::Result<_>>()?;
        let est = summarize(
            b,
            &local,
            gens.rank(),
            a.trials,
            hits.iter().filter(|&&h| h).count() as u64,
        )?;
        let rec = Record::new("heuristic")
            .with("B", b)
            .with("primes", join(&est.primes))
            .with("seed", a.seed)
            .with("trials", est.trials)
            .with("hits", est.hits)
            .with("estimate", est.estimate)
            .with("std_error", est.std_error)
            .with("log_image_bound", est.log_image_bound)
            .with("log_p", est.log_p);
        writeln!(out, "{rec}")?;
    }
    Ok(())
}

fn cache_cmd(a: CacheArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let path: &Path = &a.cache;
    if a.clear {
        cache::clear(path)?;
    }
    let summary = cache::inspect(path, err)?;
    let rec = Record::new("cache")
        .with("path", path.display())
        .with("records", summary.records)
        .with("curves", summary.per_curve.len());
    writeln!(out, "{rec}")?;
    for (hash, n) in &summary.per_curve {
        writeln!(
            out,
            "{}",
            Record::new("cache-curve").with("curve", hash).with("records", n)
        )?;
    }
    Ok(())
}
