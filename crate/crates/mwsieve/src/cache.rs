//! Per-prime cache of point counts, group orders and group structures,
//! stored as one record per line and appended under an exclusive lock.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use mwsieve_core::heuristic::{factorize, Factorization};
use mwsieve_core::jacobian::{jacobian_order, order_via_zeta, within_hasse_weil};
use mwsieve_core::{CurveSpec, GroupStructure, JacobianFp, PointCounts};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};
use crate::record::{join, split, Record};

pub const SCHEMA_VERSION: u32 = 1;

/// First 16 hex digits of the SHA-256 of the coefficient list.
pub fn curve_hash(curve: &CurveSpec) -> String {
    let digest = Sha256::digest(join(curve.coeffs()).as_bytes());
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheRecord {
    pub curve: String,
    pub p: u64,
    pub n1: u64,
    pub n2: u64,
    pub order: u64,
    pub factorization: Factorization,
    /// Filled in once a command needs the group structure.
    pub invariant_factors: Option<Vec<u64>>,
}

fn parse_factorization(raw: &str, n: u64) -> std::result::Result<Factorization, String> {
    let mut factors = Vec::new();
    if raw != "1" {
        for part in raw.split('*') {
            let (q, e) = match part.split_once('^') {
                Some((q, e)) => (q, e),
                None => (part, "1"),
            };
            let q = q.parse().map_err(|_| format!("bad factor `{part}`"))?;
            let e = e.parse().map_err(|_| format!("bad factor `{part}`"))?;
            factors.push((q, e));
        }
    }
    Ok(Factorization { n, factors })
}

impl CacheRecord {
    pub fn compute(curve: &CurveSpec, p: u64, with_structure: bool) -> mwsieve_core::Result<Self> {
        let counts = curve.point_counts(p)?;
        let order = if curve.genus() <= 2 {
            order_via_zeta(&counts, curve.genus())?
        } else {
            jacobian_order(curve, p)?
        };
        let mut rec = CacheRecord {
            curve: curve_hash(curve),
            p,
            n1: counts.n1,
            n2: counts.n2,
            order,
            factorization: factorize(order)?,
            invariant_factors: None,
        };
        if with_structure {
            rec.add_structure(curve)?;
        }
        Ok(rec)
    }

    pub fn add_structure(&mut self, curve: &CurveSpec) -> mwsieve_core::Result<()> {
        let jac = JacobianFp::over_prime(curve, self.p)?;
        let gs = GroupStructure::compute(&jac, self.order)?;
        self.invariant_factors = Some(gs.invariant_factors().to_vec());
        Ok(())
    }

    pub fn to_record(&self) -> Record {
        Record::new("cache")
            .with("schema", SCHEMA_VERSION)
            .with("curve", &self.curve)
            .with("p", self.p)
            .with("n1", self.n1)
            .with("n2", self.n2)
            .with("order", self.order)
            .with("factors", &self.factorization)
            .with(
                "inv",
                self.invariant_factors.as_deref().map_or_else(|| "?".to_string(), join),
            )
    }

    pub fn from_record(r: &Record) -> std::result::Result<Self, String> {
        if r.get("kind") != Some("cache") {
            return Err("not a cache record".into());
        }
        let schema: u32 = r.parse_field("schema")?;
        if schema != SCHEMA_VERSION {
            return Err(format!("schema version {schema}, expected {SCHEMA_VERSION}"));
        }
        let order = r.parse_field("order")?;
        let inv = r.require("inv")?;
        Ok(CacheRecord {
            curve: r.require("curve")?.to_string(),
            p: r.parse_field("p")?,
            n1: r.parse_field("n1")?,
            n2: r.parse_field("n2")?,
            order,
            factorization: parse_factorization(r.require("factors")?, order)?,
            invariant_factors: if inv == "?" { None } else { Some(split(inv)?) },
        })
    }

    /// Re-check everything that can be checked without recounting.
    pub fn validate(&self, curve: &CurveSpec) -> std::result::Result<(), String> {
        let g = curve.genus();
        if self.curve != curve_hash(curve) {
            return Err("curve hash mismatch".into());
        }
        if !curve.good_reduction(self.p) {
            return Err(format!("p = {} is not a good prime", self.p));
        }
        let counts = PointCounts {
            p: self.p,
            n1: self.n1,
            n2: self.n2,
        };
        if !counts.satisfies_weil(g) {
            return Err("point counts violate the Weil bounds".into());
        }
        if !within_hasse_weil(self.order, self.p, g) {
            return Err("order violates the Hasse-Weil bounds".into());
        }
        if g <= 2 && order_via_zeta(&counts, g).ok() != Some(self.order) {
            return Err("order disagrees with the point counts".into());
        }
        if self.factorization.n != self.order || !self.factorization.is_valid() {
            return Err("factorization does not multiply to the order".into());
        }
        if let Some(inv) = &self.invariant_factors {
            let product = inv.iter().try_fold(1u64, |a, &d| a.checked_mul(d));
            let chain = inv.windows(2).all(|w| w[1] % w[0] == 0) && inv.iter().all(|&d| d > 1);
            if product != Some(self.order) || !chain {
                return Err("invariant factors do not match the order".into());
            }
        }
        Ok(())
    }
}

/// Records for one curve; new ones are held until [`Cache::flush`].
#[derive(Debug)]
pub struct Cache {
    path: Option<PathBuf>,
    curve: CurveSpec,
    entries: BTreeMap<u64, CacheRecord>,
    pending: Vec<CacheRecord>,
}

/// Every parseable line of a cache file with its line number; the rest are
/// reported to `warn`.
fn read_lines(path: &Path, warn: &mut dyn Write) -> Result<Vec<(usize, CacheRecord)>> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(CliError::io(path, e)),
    };
    file.lock_shared().map_err(|e| CliError::io(path, e))?;
    let text = io::read_to_string(&file).map_err(|e| CliError::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match Record::parse(line).and_then(|r| CacheRecord::from_record(&r)) {
            Ok(rec) => out.push((i + 1, rec)),
            Err(msg) => writeln!(warn, "warning: {}:{}: {msg}; line skipped", path.display(), i + 1)?,
        }
    }
    Ok(out)
}

impl Cache {
    pub fn open(path: Option<&Path>, curve: &CurveSpec, warn: &mut dyn Write) -> Result<Self> {
        let mut cache = Cache {
            path: path.map(Path::to_path_buf),
            curve: curve.clone(),
            entries: BTreeMap::new(),
            pending: Vec::new(),
        };
        let Some(path) = path else {
            return Ok(cache);
        };
        let hash = curve_hash(curve);
        for (line, rec) in read_lines(path, warn)? {
            if rec.curve != hash {
                continue;
            }
            match rec.validate(curve) {
                Ok(()) => {
                    cache.entries.insert(rec.p, rec);
                }
                Err(msg) => writeln!(warn, "warning: {}:{line}: {msg}; record discarded", path.display())?,
            }
        }
        Ok(cache)
    }

    pub fn get(&self, p: u64) -> Option<&CacheRecord> {
        self.entries.get(&p)
    }

    /// Compute the missing records in parallel. Returns the primes that
    /// failed, with their errors.
    pub fn ensure(&mut self, primes: &[u64], with_structure: bool) -> Vec<(u64, mwsieve_core::Error)> {
        let curve = &self.curve;
        let work: Vec<(u64, Option<CacheRecord>)> = primes
            .iter()
            .filter_map(|&p| match self.entries.get(&p) {
                None => Some((p, None)),
                Some(r) if with_structure && r.invariant_factors.is_none() => Some((p, Some(r.clone()))),
                Some(_) => None,
            })
            .collect();
        let results: Vec<(u64, mwsieve_core::Result<CacheRecord>)> = work
            .into_par_iter()
            .map(|(p, existing)| {
                let rec = match existing {
                    Some(mut r) => r.add_structure(curve).map(|()| r),
                    None => CacheRecord::compute(curve, p, with_structure),
                };
                (p, rec)
            })
            .collect();
        let mut failed = Vec::new();
        for (p, rec) in results {
            match rec {
                Ok(rec) => {
                    self.pending.push(rec.clone());
                    self.entries.insert(p, rec);
                }
                Err(e) => failed.push((p, e)),
            }
        }
        failed
    }

    pub fn order(&mut self, p: u64) -> mwsieve_core::Result<u64> {
        if let Some((_, e)) = self.ensure(&[p], false).pop() {
            return Err(e);
        }
        Ok(self.entries[&p].order)
    }

    pub fn flush(&mut self) -> Result<()> {
        let Some(path) = &self.path else {
            self.pending.clear();
            return Ok(());
        };
        if self.pending.is_empty() {
            return Ok(());
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| CliError::io(path, e))?;
        file.lock().map_err(|e| CliError::io(path, e))?;
        let mut text = String::new();
        for rec in self.pending.drain(..) {
            text.push_str(&rec.to_record().to_string());
            text.push('\n');
        }
        file.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))?;
        Ok(())
    }
}

/// Totals for `cache` inspection.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CacheSummary {
    pub records: usize,
    pub per_curve: BTreeMap<String, usize>,
}

pub fn inspect(path: &Path, warn: &mut dyn Write) -> Result<CacheSummary> {
    let mut summary = CacheSummary::default();
    for (_, rec) in read_lines(path, warn)? {
        summary.records += 1;
        *summary.per_curve.entry(rec.curve).or_default() += 1;
    }
    Ok(summary)
}

pub fn clear(path: &Path) -> Result<()> {
    if !path.exists() {
        return Ok(());
    }
    let file = OpenOptions::new()
        .write(true)
        .open(path)
        .map_err(|e| CliError::io(path, e))?;
    file.lock().map_err(|e| CliError::io(path, e))?;
    file.set_len(0).map_err(|e| CliError::io(path, e))
}
