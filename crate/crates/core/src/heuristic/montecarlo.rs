//! The random-subset model: replace each `C(F_p)` by a uniform random
//! subset of `J(F_p)` of the same size and ask whether the image of the
//! generators still meets the product of the subsets.
//!
//! Each `(trial, p)` pair draws from its own ChaCha stream of the master
//! seed, so estimates do not depend on evaluation order and runs over
//! nested prime sets share their random subsets.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::stats::lcm_of_orders;
use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::sieve::{local_data, select_primes, sieve_step_with, GeneratorSet, PrimeLocalData, SieveConfig, SieveState};

/// How the stand-in for `C(F_p)` is drawn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetModel {
    /// Uniform subset of size `#C(F_p)`.
    Uniform,
    /// The whole group, so every trial hits.
    FullGroup,
    /// Uniform subset of size `#C(F_p)` conditioned to contain the listed
    /// linear indices (one list per prime, in the same order as the data).
    Constrained(Vec<Vec<u64>>),
}

/// Monte Carlo estimate at one bound `B`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialEstimate {
    pub b: f64,
    pub primes: Vec<u64>,
    pub trials: u64,
    pub hits: u64,
    pub estimate: f64,
    /// `sqrt(estimate (1 - estimate) / trials)`.
    pub std_error: f64,
    /// `r log L` with `L` the lcm of the group orders.
    pub log_image_bound: f64,
    /// `sum log(#C(F_p) / #J(F_p))`.
    pub log_p: f64,
}

/// Generator for one `(trial, p)` pair.
pub fn stream_rng(seed: u64, trial: u64, p: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((trial << 32) | (p & 0xffff_ffff));
    rng
}

/// `m` distinct values of `[0, n)`, uniformly, by a partial Fisher-Yates
/// shuffle of a virtual array.
pub fn random_subset<R: Rng>(n: u64, m: u64, rng: &mut R) -> Vec<u64> {
    let m = m.min(n);
    let mut moved: BTreeMap<u64, u64> = BTreeMap::new();
    let mut out = Vec::with_capacity(m as usize);
    for i in 0..m {
        let j = rng.random_range(i..n);
        let at_j = *moved.get(&j).unwrap_or(&j);
        let at_i = *moved.get(&i).unwrap_or(&i);
        moved.insert(j, at_i);
        out.push(at_j);
    }
    out
}

fn constrained_subset<R: Rng>(n: u64, m: u64, known: &[u64], rng: &mut R) -> Vec<u64> {
    let mut known: Vec<u64> = known.iter().copied().filter(|&k| k < n).collect();
    known.sort_unstable();
    known.dedup();
    let free = n - known.len() as u64;
    let extra = m.saturating_sub(known.len() as u64);
    let mut out = known.clone();
    for mut x in random_subset(free, extra, rng) {
        // map into the complement of `known`
        for &k in &known {
            if x >= k {
                x += 1;
            }
        }
        out.push(x);
    }
    out
}

/// Whether trial `trial` hits: the sieve over `local` with every curve
/// image replaced by a random subset leaves a survivor.
pub fn trial_hit(
    local: &[PrimeLocalData],
    rank: usize,
    torsion_count: usize,
    trial: u64,
    seed: u64,
    model: &SubsetModel,
    config: &SieveConfig,
) -> Result<bool> {
    let mut state = SieveState::new(rank, torsion_count);
    for (k, data) in local.iter().enumerate() {
        let mut rng = stream_rng(seed, trial, data.p());
        let n = data.order();
        let subset = match model {
            SubsetModel::Uniform => random_subset(n, data.n1(), &mut rng),
            SubsetModel::FullGroup => (0..n).collect(),
            SubsetModel::Constrained(known) => {
                let list = known.get(k).ok_or(Error::DimensionMismatch("constraint lists"))?;
                constrained_subset(n, data.n1(), list, &mut rng)
            }
        };
        let admissible = data.admissible_sets(&subset);
        state = sieve_step_with(&state, data, &admissible, config)?.0;
        if state.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Log-bound components for a list of local data.
pub fn log_bounds(local: &[PrimeLocalData], rank: usize, b: f64) -> Result<(f64, f64)> {
    let orders: Vec<u64> = local.iter().map(|d| d.order()).collect();
    let lcm = lcm_of_orders(&orders, b)?;
    let log_p = local.iter().map(|d| libm::log(d.n1() as f64 / d.order() as f64)).sum();
    Ok((rank as f64 * lcm.log_lcm, log_p))
}

/// Aggregate hit counts into an estimate.
pub fn summarize(b: f64, local: &[PrimeLocalData], rank: usize, trials: u64, hits: u64) -> Result<TrialEstimate> {
    let (log_image_bound, log_p) = log_bounds(local, rank, b)?;
    let estimate = if trials == 0 { 0.0 } else { hits as f64 / trials as f64 };
    Ok(TrialEstimate {
        b,
        primes: local.iter().map(|d| d.p()).collect(),
        trials,
        hits,
        estimate,
        std_error: libm::sqrt(estimate * (1.0 - estimate) / trials.max(1) as f64),
        log_image_bound,
        log_p,
    })
}

/// Sequential estimate over precomputed local data.
#[allow(clippy::too_many_arguments)]
pub fn estimate_with_local_data(
    b: f64,
    local: &[PrimeLocalData],
    rank: usize,
    torsion_count: usize,
    trials: u64,
    seed: u64,
    model: &SubsetModel,
    config: &SieveConfig,
) -> Result<TrialEstimate> {
    if local.is_empty() || trials == 0 {
        return Err(Error::InsufficientPrimes);
    }
    let mut hits = 0;
    for t in 0..trials {
        hits += u64::from(trial_hit(local, rank, torsion_count, t, seed, model, config)?);
    }
    summarize(b, local, rank, trials, hits)
}

/// Estimate over `S(B) = select_primes(curve, B, cap)`; primes whose local
/// data cannot be built are left out.
pub fn estimate_intersection_prob(
    curve: &CurveSpec,
    gens: &GeneratorSet,
    b: f64,
    cap: usize,
    trials: u64,
    seed: u64,
    config: &SieveConfig,
) -> Result<TrialEstimate> {
    let local: Vec<PrimeLocalData> = select_primes(curve, b, cap)
        .into_iter()
        .filter_map(|p| local_data(curve, gens, p).ok())
        .collect();
    estimate_with_local_data(
        b,
        &local,
        gens.rank(),
        gens.torsion_elements().len(),
        trials,
        seed,
        &SubsetModel::Uniform,
        config,
    )
}

/// Result of the one-element model.
#[derive(Clone, Debug, PartialEq)]
pub struct FixedElementEstimate {
    pub trials: u64,
    pub hits: u64,
    pub estimate: f64,
    /// `prod m_p / n_p`.
    pub expected: f64,
    /// Binomial standard deviation of the estimate under `expected`.
    pub sigma: f64,
}

/// The image at each prime is the single element `0` of a group of order
/// `n_p`; a trial hits when every random subset of size `m_p` contains it.
/// `groups` lists `(p, n_p, m_p)`.
pub fn estimate_fixed_element(groups: &[(u64, u64, u64)], trials: u64, seed: u64) -> Result<FixedElementEstimate> {
    if groups.is_empty() || trials == 0 {
        return Err(Error::InsufficientPrimes);
    }
    let mut hits = 0;
    for t in 0..trials {
        let hit = groups.iter().all(|&(p, n, m)| {
            let mut rng = stream_rng(seed, t, p);
            random_subset(n, m, &mut rng).contains(&0)
        });
        hits += u64::from(hit);
    }
    let expected: f64 = groups.iter().map(|&(_, n, m)| m.min(n) as f64 / n as f64).product();
    Ok(FixedElementEstimate {
        trials,
        hits,
        estimate: hits as f64 / trials as f64,
        expected,
        sigma: libm::sqrt(expected * (1.0 - expected) / trials as f64),
    })
}
