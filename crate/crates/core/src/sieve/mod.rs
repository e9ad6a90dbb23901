//! The Mordell-Weil sieve. Classes `a in (Z/M)^r` of coefficient vectors
//! on the free generators are lifted prime by prime and kept only when the
//! corresponding point of `J(F_p)` lies on the image of `C(F_p)`. An empty
//! state after a finite set of primes proves that no rational point of the
//! curve maps into the given coset of `J(Q)`.

mod certify;
mod generators;
mod local;
mod state;

pub use certify::{certify, certify_local, images_disjoint, BruteForceGroup, LocalInstance, CERTIFY_LIMIT};
pub use generators::{GeneratorSet, TORSION_GROUP_LIMIT, TORSION_ORDER_BOUND};
pub use local::{
    local_data, local_data_with_order, subgroup_closure, AbstractGroup, Bitset, PrimeLocalData, LOCAL_ORDER_LIMIT,
};
pub use state::{sieve_step, sieve_step_with, SieveConfig, SieveState, StepStats};

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;

use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::heuristic::is_smooth;
use crate::jacobian::jacobian_order;

/// Good primes `p <= B^2` with `#J(F_p)` B-smooth, ascending, at most `cap`.
/// Primes whose order cannot be computed are left out.
pub fn select_primes(curve: &CurveSpec, b: f64, cap: usize) -> Vec<u64> {
    select_primes_with(curve, b, cap, |p| jacobian_order(curve, p))
}

pub fn select_primes_with<O>(curve: &CurveSpec, b: f64, cap: usize, mut order: O) -> Vec<u64>
where
    O: FnMut(u64) -> Result<u64>,
{
    if b.is_nan() || b < 2.0 {
        return Vec::new();
    }
    let top = libm::floor(b * b) as u64;
    let mut out = Vec::new();
    for p in curve.good_primes(3, top) {
        if out.len() >= cap {
            break;
        }
        if order(p).and_then(|n| is_smooth(n, b)).unwrap_or(false) {
            out.push(p);
        }
    }
    out
}

/// Which primes to sieve with.
#[derive(Clone, Debug, PartialEq)]
pub enum PrimeSelection {
    /// `select_primes(curve, B, cap)`.
    Bound {
        b: f64,
        cap: usize,
    },
    Explicit(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The images are disjoint over these primes.
    Obstructed {
        primes: Vec<u64>,
    },
    Inconclusive {
        survivors: u64,
        modulus: BigUint,
    },
}

impl Verdict {
    pub fn is_obstructed(&self) -> bool {
        matches!(self, Verdict::Obstructed { .. })
    }
}

/// Per-prime counts recorded by the sieve.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeStats {
    pub p: u64,
    pub order: u64,
    pub exponent: u64,
    pub n1: u64,
    pub invariant_factors: Vec<u64>,
    pub candidates: u128,
    pub survivors: u64,
    /// Fraction of lifted candidates removed at this prime.
    pub elimination: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SieveReport {
    pub verdict: Verdict,
    pub per_prime: Vec<PrimeStats>,
    /// Primes left out, with the reason.
    pub skipped: Vec<(u64, Error)>,
    pub state: SieveState,
}

/// A run stopped by an error, with everything computed before it.
#[derive(Clone, Debug, PartialEq)]
pub struct SieveAborted {
    pub error: Error,
    pub partial: Box<SieveReport>,
}

impl fmt::Display for SieveAborted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} after {} primes",
            self.error,
            self.partial.state.primes_used().len()
        )
    }
}

impl core::error::Error for SieveAborted {}

/// Builds local data sequentially and runs the sieve.
pub fn run_scharaschkin(
    curve: &CurveSpec,
    gens: &GeneratorSet,
    primes: &PrimeSelection,
    config: &SieveConfig,
) -> core::result::Result<SieveReport, SieveAborted> {
    let list = match primes {
        PrimeSelection::Bound { b, cap } => select_primes(curve, *b, *cap),
        PrimeSelection::Explicit(list) => list.clone(),
    };
    let local = list.iter().map(|&p| local_data(curve, gens, p));
    run_sieve(gens.rank(), gens.torsion_elements().len(), local, config, |_| {})
}

/// Fold [`sieve_step`] over precomputed local data. `Err(SkipPrime)` entries
/// are recorded and passed over; `observe` sees the state after each step.
pub fn run_sieve<I, O>(
    rank: usize,
    torsion_count: usize,
    local: I,
    config: &SieveConfig,
    mut observe: O,
) -> core::result::Result<SieveReport, SieveAborted>
where
    I: IntoIterator<Item = Result<PrimeLocalData>>,
    O: FnMut(&SieveState),
{
    let mut report = SieveReport {
        verdict: Verdict::Inconclusive {
            survivors: torsion_count as u64,
            modulus: BigUint::from(1u32),
        },
        per_prime: Vec::new(),
        skipped: Vec::new(),
        state: SieveState::new(rank, torsion_count),
    };
    for item in local {
        let data = match item {
            Ok(d) => d,
            Err(Error::SkipPrime { p, reason }) => {
                report.skipped.push((p, *reason));
                continue;
            }
            Err(error) => return Err(abort(error, report)),
        };
        let (next, stats) = match sieve_step(&report.state, &data, config) {
            Ok(x) => x,
            Err(error) => return Err(abort(error, report)),
        };
        report.per_prime.push(PrimeStats {
            p: data.p(),
            order: data.order(),
            exponent: data.exponent(),
            n1: data.n1(),
            invariant_factors: data.invariant_factors().to_vec(),
            candidates: stats.candidates,
            survivors: stats.survivors,
            elimination: if stats.candidates == 0 {
                0.0
            } else {
                1.0 - stats.survivors as f64 / stats.candidates as f64
            },
        });
        report.state = next;
        observe(&report.state);
        if report.state.is_empty() && config.stop_at_obstruction {
            break;
        }
    }
    report.verdict = verdict_of(&report.state);
    Ok(report)
}

fn verdict_of(state: &SieveState) -> Verdict {
    if state.is_empty() {
        Verdict::Obstructed {
            primes: state.primes_used().to_vec(),
        }
    } else {
        Verdict::Inconclusive {
            survivors: state.survivor_count() as u64,
            modulus: state.modulus(),
        }
    }
}

fn abort(error: Error, mut partial: SieveReport) -> SieveAborted {
    partial.verdict = verdict_of(&partial.state);
    SieveAborted {
        error,
        partial: Box::new(partial),
    }
}
