//! Obstruction certificates: the curve, the generators, the primes with
//! their local invariants, and the claim that no class survives.

use std::path::Path;

use mwsieve_core::sieve::{certify, run_scharaschkin, PrimeSelection, SieveConfig, SieveReport, Verdict};
use mwsieve_core::{CurveSpec, Error as CoreError};
use rayon::prelude::*;

use crate::cache::CacheRecord;
use crate::error::{CliError, Result};
use crate::format::{format_generator, generator_set, parse_generators, GeneratorLine};
use crate::record::{join, split, Record};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeEntry {
    pub p: u64,
    pub order: u64,
    pub invariant_factors: Vec<u64>,
    pub n1: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    pub curve: CurveSpec,
    pub generators: Vec<GeneratorLine>,
    pub primes: Vec<PrimeEntry>,
    pub survivors: u64,
}

/// Outcome of re-checking a certificate from scratch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub valid: bool,
    pub problems: Vec<String>,
    /// `None` when the brute-force check exceeds its size limit.
    pub brute_force: Option<bool>,
}

impl Certificate {
    /// `None` unless the report is an obstruction.
    pub fn from_report(curve: &CurveSpec, generators: &[GeneratorLine], report: &SieveReport) -> Option<Self> {
        let Verdict::Obstructed { primes } = &report.verdict else {
            return None;
        };
        let entries = report
            .per_prime
            .iter()
            .filter(|s| primes.contains(&s.p))
            .map(|s| PrimeEntry {
                p: s.p,
                order: s.order,
                invariant_factors: s.invariant_factors.clone(),
                n1: s.n1,
            })
            .collect();
        Some(Certificate {
            curve: curve.clone(),
            generators: generators.to_vec(),
            primes: entries,
            survivors: 0,
        })
    }

    pub fn to_text(&self) -> String {
        let mut lines = vec![Record::new("certificate")
            .with("curve", join(self.curve.coeffs()))
            .with("primes", join(&self.primes.iter().map(|e| e.p).collect::<Vec<_>>()))];
        for g in &self.generators {
            lines.push(Record::new("generator").with("line", format_generator(g)));
        }
        for e in &self.primes {
            lines.push(
                Record::new("prime")
                    .with("p", e.p)
                    .with("order", e.order)
                    .with("inv", join(&e.invariant_factors))
                    .with("n1", e.n1),
            );
        }
        lines.push(Record::new("assertion").with("survivors", self.survivors));
        lines.iter().map(|r| format!("{r}\n")).collect()
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let err = |line, message: String| CliError::Parse {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut curve = None;
        let mut listed: Vec<u64> = Vec::new();
        let mut generator_text = String::new();
        let mut primes = Vec::new();
        let mut survivors = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let r = Record::parse(raw).map_err(|m| err(line, m))?;
            let parsed: std::result::Result<(), String> = (|| {
                match r.require("kind")? {
                    "certificate" => {
                        let coeffs = split(r.require("curve")?)?;
                        curve = Some(CurveSpec::new(coeffs).map_err(|e| e.to_string())?);
                        listed = split(r.require("primes")?)?;
                    }
                    "generator" => {
                        generator_text.push_str(r.require("line")?);
                        generator_text.push('\n');
                    }
                    "prime" => primes.push(PrimeEntry {
                        p: r.parse_field("p")?,
                        order: r.parse_field("order")?,
                        invariant_factors: split(r.require("inv")?)?,
                        n1: r.parse_field("n1")?,
                    }),
                    "assertion" => survivors = Some(r.parse_field("survivors")?),
                    other => return Err(format!("unknown record kind `{other}`")),
                }
                Ok(())
            })();
            parsed.map_err(|m| err(line, m))?;
        }
        let curve = curve.ok_or_else(|| CliError::Certificate("missing certificate header".into()))?;
        let survivors = survivors.ok_or_else(|| CliError::Certificate("missing assertion".into()))?;
        if listed != primes.iter().map(|e| e.p).collect::<Vec<_>>() {
            return Err(CliError::Certificate(
                "prime list does not match the prime records".into(),
            ));
        }
        let generators = parse_generators(&generator_text, &curve, path)?;
        Ok(Certificate {
            curve,
            generators,
            primes,
            survivors,
        })
    }

    /// Recompute every local invariant, rerun the sieve, and run the
    /// brute-force disjointness check when it fits.
    pub fn verify(&self) -> Result<Verification> {
        let mut problems = Vec::new();
        if self.survivors != 0 {
            problems.push(format!("asserted survivors = {}", self.survivors));
        }
        let gens = generator_set(&self.curve, &self.generators)?;
        let recomputed: Vec<mwsieve_core::Result<CacheRecord>> = self
            .primes
            .par_iter()
            .map(|e| CacheRecord::compute(&self.curve, e.p, true))
            .collect();
        for (e, rec) in self.primes.iter().zip(recomputed) {
            let rec = rec?;
            if rec.order != e.order {
                problems.push(format!("p = {}: order {} but recomputed {}", e.p, e.order, rec.order));
            }
            if rec.n1 != e.n1 {
                problems.push(format!("p = {}: N1 {} but recomputed {}", e.p, e.n1, rec.n1));
            }
            if rec.invariant_factors.as_deref() != Some(&e.invariant_factors[..]) {
                problems.push(format!("p = {}: invariant factors differ", e.p));
            }
        }
        let primes: Vec<u64> = self.primes.iter().map(|e| e.p).collect();
        let rerun = run_scharaschkin(
            &self.curve,
            &gens,
            &PrimeSelection::Explicit(primes.clone()),
            &SieveConfig::default(),
        )?;
        if !rerun.verdict.is_obstructed() {
            problems.push("sieve over the listed primes leaves survivors".into());
        }
        let brute_force = match certify(&self.curve, &gens, &primes) {
            Ok(disjoint) => {
                if !disjoint {
                    problems.push("brute force finds a common element".into());
                }
                Some(disjoint)
            }
            Err(CoreError::TooLarge { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        Ok(Verification {
            valid: problems.is_empty(),
            problems,
            brute_force,
        })
    }
}
