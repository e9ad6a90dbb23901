use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use super::local::{Bitset, PrimeLocalData};
use crate::arith::inv_mod;
use crate::error::{Error, Result};
use crate::heuristic::factorize;

/// Caps on the sieve's state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SieveConfig {
    /// Largest number of surviving classes kept after a step.
    pub survivor_cap: u64,
    /// Largest number of lifted candidates examined in one step.
    pub work_cap: u128,
    /// Stop at the first prime that empties the state.
    pub stop_at_obstruction: bool,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            survivor_cap: 1_000_000,
            work_cap: 200_000_000,
            stop_at_obstruction: true,
        }
    }
}

/// Surviving pairs `(t, a)` of a global torsion index `t` and a class
/// `a in (Z/M)^r`. Classes are stored in CRT form: for each prime power
/// `q^k || M` (ascending `q`) the `r` residues mod `q^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveState {
    rank: usize,
    torsion_count: usize,
    components: Vec<(u64, u32)>,
    data: Vec<u64>,
    count: usize,
    primes_used: Vec<u64>,
}

/// Counts for one application of [`sieve_step`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StepStats {
    pub candidates: u128,
    pub survivors: u64,
}

impl SieveState {
    /// `M = 1`: every torsion element with the single class of `(Z/1)^r`.
    pub fn new(rank: usize, torsion_count: usize) -> Self {
        SieveState {
            rank,
            torsion_count,
            components: Vec::new(),
            data: (0..torsion_count as u64).collect(),
            count: torsion_count,
            primes_used: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion_count(&self) -> usize {
        self.torsion_count
    }

    /// `M` as prime powers, ascending.
    pub fn modulus_factors(&self) -> &[(u64, u32)] {
        &self.components
    }

    pub fn modulus(&self) -> BigUint {
        self.components
            .iter()
            .fold(BigUint::one(), |acc, &(q, k)| acc * BigUint::from(q).pow(k))
    }

    pub fn primes_used(&self) -> &[u64] {
        &self.primes_used
    }

    /// Number of surviving `(t, a)` pairs.
    pub fn survivor_count(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    fn stride(&self) -> usize {
        1 + self.rank * self.components.len()
    }

    fn chunk(&self, i: usize) -> &[u64] {
        let s = self.stride();
        &self.data[i * s..(i + 1) * s]
    }

    /// CRT form of an integer vector: `[component][generator]`.
    fn crt_form(&self, a: &[i64]) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.rank * self.components.len());
        for &(q, k) in &self.components {
            let m = q.pow(k) as i128;
            out.extend(a.iter().map(|&x| (x as i128).rem_euclid(m) as u64));
        }
        out
    }

    /// Whether the class of `a in Z^r` survives with some torsion element.
    pub fn contains(&self, a: &[i64]) -> bool {
        a.len() == self.rank && {
            let key = self.crt_form(a);
            (0..self.count).any(|i| self.chunk(i)[1..] == key[..])
        }
    }

    /// Whether `(t, a)` survives.
    pub fn contains_pair(&self, torsion_index: usize, a: &[i64]) -> bool {
        a.len() == self.rank && {
            let key = self.crt_form(a);
            (0..self.count).any(|i| {
                let c = self.chunk(i);
                c[0] == torsion_index as u64 && c[1..] == key[..]
            })
        }
    }

    /// Surviving classes in CRT form, with the torsion tag dropped.
    pub fn classes(&self) -> BTreeSet<Vec<u64>> {
        (0..self.count).map(|i| self.chunk(i)[1..].to_vec()).collect()
    }

    /// Surviving `(t, class)` pairs in CRT form.
    pub fn pairs(&self) -> BTreeSet<Vec<u64>> {
        (0..self.count).map(|i| self.chunk(i).to_vec()).collect()
    }

    /// Surviving classes reduced to a divisor `M0 | M`, as `(t, class)`
    /// pairs in the CRT layout of `M0`.
    pub fn project(&self, target: &[(u64, u32)]) -> Result<BTreeSet<Vec<u64>>> {
        let mut map = Vec::with_capacity(target.len());
        for &(q, k) in target {
            let pos = self
                .components
                .iter()
                .position(|&(q2, k2)| q2 == q && k2 >= k)
                .ok_or(Error::DimensionMismatch("projection target does not divide M"))?;
            map.push((pos, q.pow(k)));
        }
        let r = self.rank;
        Ok((0..self.count)
            .map(|i| {
                let c = self.chunk(i);
                let mut out = vec![c[0]];
                for &(pos, m) in &map {
                    out.extend(c[1 + pos * r..1 + (pos + 1) * r].iter().map(|x| x % m));
                }
                out
            })
            .collect())
    }

    /// Combined residues `a mod M` of every surviving class, as big integers.
    pub fn class_vectors(&self) -> BTreeSet<Vec<BigUint>> {
        let r = self.rank;
        let mut out = BTreeSet::new();
        for i in 0..self.count {
            let c = &self.chunk(i)[1..];
            let mut v = vec![BigUint::from(0u32); r];
            let mut m = BigUint::one();
            for (idx, &(q, k)) in self.components.iter().enumerate() {
                let qk = BigUint::from(q.pow(k));
                for (g, slot) in v.iter_mut().enumerate() {
                    *slot = crt_big(slot, &m, c[idx * r + g], q.pow(k));
                }
                m *= qk;
            }
            out.insert(v);
        }
        out
    }
}

fn crt_big(a: &BigUint, m: &BigUint, b: u64, n: u64) -> BigUint {
    let a_mod = (a % n).iter_u64_digits().next().unwrap_or(0);
    let m_mod = (m % n).iter_u64_digits().next().unwrap_or(0);
    let inv = inv_mod(m_mod, n).unwrap_or(0) as u128;
    let t = ((b as u128 + n as u128 - a_mod as u128) % n as u128) * inv % n as u128;
    a + m * BigUint::from(t as u64)
}

/// Refine the state by one prime, using the prime's own curve image.
pub fn sieve_step(state: &SieveState, data: &PrimeLocalData, config: &SieveConfig) -> Result<(SieveState, StepStats)> {
    sieve_step_with(state, data, data.admissible(), config)
}

/// Refine the state by one prime with admissible sets supplied per torsion
/// element: `(t, a)` survives iff `phi a` lies in `admissible[t]`.
pub fn sieve_step_with(
    state: &SieveState,
    data: &PrimeLocalData,
    admissible: &[Bitset],
    config: &SieveConfig,
) -> Result<(SieveState, StepStats)> {
    let r = state.rank;
    if data.rank() != r {
        return Err(Error::DimensionMismatch("generator count"));
    }
    if admissible.len() != state.torsion_count {
        return Err(Error::DimensionMismatch("torsion count"));
    }
    let factors = data.invariant_factors();
    let s = factors.len();
    // new modulus M' = lcm(M, e)
    let mut components = state.components.clone();
    for (q, f) in factorize(data.exponent())?.factors {
        match components.iter_mut().find(|(q2, _)| *q2 == q) {
            Some(slot) => slot.1 = slot.1.max(f),
            None => components.push((q, f)),
        }
    }
    components.sort_unstable();
    let m = components.len();
    // per new component: position in the old layout, lift step, lift range
    let mut old_pos = Vec::with_capacity(m);
    let mut lift_step = Vec::with_capacity(m);
    let mut lift_range = Vec::with_capacity(m);
    for &(q, k) in &components {
        let old = state.components.iter().position(|&(q2, _)| q2 == q);
        let k0 = old.map_or(0, |i| state.components[i].1);
        old_pos.push(old);
        lift_step.push(q.pow(k0));
        lift_range.push(q.pow(k - k0));
    }
    let lifts: u128 = lift_range.iter().map(|&x| (x as u128).pow(r as u32)).product();
    let candidates = lifts * state.count as u128;
    if candidates > config.work_cap {
        return Err(Error::StateExplosion {
            size: candidates,
            cap: config.work_cap,
        });
    }
    // weights[c][i][j] = phi_i[j] * E_cj mod n_j, where E_cj is the CRT
    // idempotent of the q_c-part of n_j; reduce[c][j] = q_c^v_q(n_j).
    let mut weights = vec![vec![vec![0u64; s]; r]; m];
    let mut reduce = vec![vec![1u64; s]; m];
    for (c, &(q, _)) in components.iter().enumerate() {
        for (j, &n) in factors.iter().enumerate() {
            let mut qv = 1u64;
            while n % (qv * q) == 0 {
                qv *= q;
            }
            if qv == 1 {
                continue;
            }
            let rest = n / qv;
            let e = (rest as u128 * inv_mod(rest % qv, qv).expect("coprime") as u128 % n as u128) as u64;
            reduce[c][j] = qv;
            for (w, col) in weights[c].iter_mut().zip(data.phi()) {
                w[j] = (col[j] as u128 * e as u128 % n as u128) as u64;
            }
        }
    }
    let mut strides = Vec::with_capacity(s);
    let mut acc = 1u64;
    for &n in factors {
        strides.push(acc);
        acc *= n;
    }
    let stride = 1 + r * m;
    let mut out = SieveState {
        rank: r,
        torsion_count: state.torsion_count,
        components,
        data: Vec::new(),
        count: 0,
        primes_used: state.primes_used.clone(),
    };
    out.primes_used.push(data.p());
    let mut total = 0u64;
    let mut cand = vec![0u64; stride];
    let digits = r * m;
    let mut digit = vec![0u64; digits];
    for i in 0..state.count {
        let old = state.chunk(i);
        let t = old[0] as usize;
        cand[0] = old[0];
        let base: Vec<u64> = (0..digits)
            .map(|d| {
                let (c, g) = (d / r.max(1), d % r.max(1));
                old_pos[c].map_or(0, |p| old[1 + p * r + g])
            })
            .collect();
        digit.iter_mut().for_each(|x| *x = 0);
        loop {
            for d in 0..digits {
                let c = d / r;
                cand[1 + d] = base[d] + lift_step[c] * digit[d];
            }
            let mut idx = 0u64;
            for (j, &n) in factors.iter().enumerate() {
                let mut sum = 0u128;
                for c in 0..m {
                    let qv = reduce[c][j];
                    if qv == 1 {
                        continue;
                    }
                    for g in 0..r {
                        sum += weights[c][g][j] as u128 * (cand[1 + c * r + g] % qv) as u128;
                    }
                }
                idx += strides[j] * (sum % n as u128) as u64;
            }
            if admissible[t].contains(idx as usize) {
                total += 1;
                if total <= config.survivor_cap {
                    out.data.extend_from_slice(&cand);
                }
            }
            // odometer over the lift digits
            let mut d = 0;
            while d < digits {
                digit[d] += 1;
                if digit[d] < lift_range[d / r] {
                    break;
                }
                digit[d] = 0;
                d += 1;
            }
            if d == digits {
                break;
            }
        }
    }
    if total > config.survivor_cap {
        return Err(Error::StateExplosion {
            size: total as u128,
            cap: config.survivor_cap as u128,
        });
    }
    out.count = total as usize;
    Ok((
        out,
        StepStats {
            candidates,
            survivors: total,
        },
    ))
}
