//! Abelian group structure of `J(F_p)` and discrete logarithms.
//!
//! The group order is factored and each `l`-primary part is handled on its
//! own. A basis of the `l`-part is grown one cyclic summand at a time: take
//! the element of largest order modulo the current subgroup `H` (found by
//! sampling), correct it by an element of `H` so that its order equals its
//! order modulo `H`, and adjoin it. Discrete logs in an `l`-group are peeled
//! off one `l`-adic digit at a time, each digit being a log in the
//! `l`-torsion, solved by baby-step giant-step on the last summand.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::order::square_roots_mod;
use super::{JacobianFp, MumfordDivisor};
use crate::arith::{inv_mod, mul_mod};
use crate::error::{Error, Result};
use crate::field::{Field, Fp};
use crate::heuristic::{factorize, Factorization};
use crate::poly::Poly;

type Divisor = MumfordDivisor<Fp>;

const SAMPLES_PER_ROUND: usize = 24;
const MAX_RESTARTS: usize = 16;
const MAX_STALLED_ROUNDS: usize = 32;
const STRUCTURE_SEED: u64 = 0x6d77_7369_6576_6531;

/// Logs in the `l`-torsion span of `h_1, ..., h_s` (each of order `l`).
#[derive(Clone, Debug)]
struct TorsionSolver {
    ell: u64,
    /// `multiples[i][d] = d h_i` for all but the last generator.
    multiples: Vec<Vec<Divisor>>,
    baby: BTreeMap<u64, u64>,
    giant: Divisor,
    step: u64,
}

impl TorsionSolver {
    fn new(jac: &JacobianFp, ell: u64, gens: &[Divisor]) -> Result<Self> {
        let mut multiples = Vec::new();
        if gens.len() > 1 {
            let work = (ell as u128).pow(gens.len() as u32 - 1);
            if work > super::ENUMERATION_LIMIT as u128 {
                return Err(Error::TooLarge {
                    what: "l-torsion search",
                    size: work,
                    limit: super::ENUMERATION_LIMIT as u128,
                });
            }
        }
        for h in gens.iter().take(gens.len().saturating_sub(1)) {
            let mut row = Vec::with_capacity(ell as usize);
            let mut acc = jac.identity();
            for _ in 0..ell {
                row.push(acc.clone());
                acc = jac.add(&acc, h)?;
            }
            multiples.push(row);
        }
        let mut baby = BTreeMap::new();
        let mut step = 1;
        let mut giant = jac.identity();
        if let Some(last) = gens.last() {
            step = if ell <= 64 {
                ell
            } else {
                (libm::sqrt(ell as f64) as u64) + 1
            };
            let mut acc = jac.identity();
            for j in 0..step {
                baby.entry(jac.key(&acc)).or_insert(j);
                acc = jac.add(&acc, last)?;
            }
            giant = jac.neg(&acc);
        }
        Ok(TorsionSolver {
            ell,
            multiples,
            baby,
            giant,
            step,
        })
    }

    fn solve(&self, jac: &JacobianFp, w: &Divisor) -> Result<Option<Vec<u64>>> {
        let s = self.multiples.len() + usize::from(!self.baby.is_empty());
        if s == 0 {
            return Ok(jac.is_identity(w).then(Vec::new));
        }
        let head = s - 1;
        let combos = self.ell.pow(head as u32);
        let giants = self.ell.div_ceil(self.step);
        let mut digits = vec![0u64; s];
        for combo in 0..combos {
            let mut rest = combo;
            let mut z = w.clone();
            for (i, row) in self.multiples.iter().enumerate() {
                digits[i] = rest % self.ell;
                rest /= self.ell;
                z = jac.sub(&z, &row[digits[i] as usize])?;
            }
            for g in 0..giants {
                if let Some(&j) = self.baby.get(&jac.key(&z)) {
                    let d = g * self.step + j;
                    if d < self.ell {
                        digits[head] = d;
                        return Ok(Some(digits));
                    }
                }
                z = jac.add(&z, &self.giant)?;
            }
        }
        Ok(None)
    }
}

/// The `l`-primary part of `J(F_p)` with a basis `b_i` of orders
/// `l^e_i`, `e_1 >= e_2 >= ...`.
#[derive(Clone, Debug)]
pub struct PrimaryComponent {
    ell: u64,
    exponents: Vec<u32>,
    basis: Vec<Divisor>,
    solver: TorsionSolver,
}

impl PrimaryComponent {
    fn from_basis(jac: &JacobianFp, ell: u64, basis: Vec<Divisor>, exponents: Vec<u32>) -> Result<Self> {
        let heads = basis
            .iter()
            .zip(&exponents)
            .map(|(b, &e)| jac.scalar_mul_u64(ell.pow(e - 1), b))
            .collect::<Result<Vec<_>>>()?;
        let solver = TorsionSolver::new(jac, ell, &heads)?;
        Ok(PrimaryComponent {
            ell,
            exponents,
            basis,
            solver,
        })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn basis(&self) -> &[MumfordDivisor<Fp>] {
        &self.basis
    }

    pub fn size(&self) -> u64 {
        self.exponents.iter().map(|&e| self.ell.pow(e)).product()
    }

    /// Coefficients `c_i mod l^e_i` with `y = sum c_i b_i`, or `None` when
    /// `y` lies outside the span of the basis.
    pub fn dlog(&self, jac: &JacobianFp, y: &MumfordDivisor<Fp>) -> Result<Option<Vec<u64>>> {
        let s = self.basis.len();
        let top = self.exponents.iter().copied().max().unwrap_or(0);
        let mut powers = Vec::with_capacity(top as usize + 1);
        powers.push(y.clone());
        for t in 0..top as usize {
            powers.push(jac.scalar_mul_u64(self.ell, &powers[t])?);
        }
        if !jac.is_identity(&powers[top as usize]) {
            return Ok(None);
        }
        let mut coeffs = vec![0u64; s];
        let mut scaled_basis = self.basis.clone();
        for _ in 0..top.saturating_sub(1) {
            for b in scaled_basis.iter_mut() {
                *b = jac.scalar_mul_u64(self.ell, b)?;
            }
        }
        for t in (0..top).rev() {
            // scaled_basis[i] = l^t b_i here
            let mut w = powers[t as usize].clone();
            for (c, b) in coeffs.iter().zip(&scaled_basis) {
                if *c != 0 {
                    w = jac.sub(&w, &jac.scalar_mul_u64(*c, b)?)?;
                }
            }
            let Some(delta) = self.solver.solve(jac, &w)? else {
                return Ok(None);
            };
            for i in 0..s {
                if delta[i] == 0 {
                    continue;
                }
                let e = self.exponents[i];
                if e <= t {
                    return Ok(None);
                }
                coeffs[i] += delta[i] * self.ell.pow(e - 1 - t);
            }
            if t > 0 {
                // l^(t-1) b_i from l^t b_i is not available by division, so
                // recompute from the basis.
                for (sb, b) in scaled_basis.iter_mut().zip(&self.basis) {
                    *sb = jac.scalar_mul_u64(self.ell.pow(t - 1), b)?;
                }
            }
        }
        Ok(Some(coeffs))
    }

    fn compute(jac: &JacobianFp, ell: u64, k: u32, cofactor: u64, rng: &mut ChaCha8Rng) -> Result<Self> {
        let p = jac.p();
        let target = ell.pow(k);
        'restart: for _ in 0..MAX_RESTARTS {
            let mut h = PrimaryComponent::from_basis(jac, ell, Vec::new(), Vec::new())?;
            let mut stalled = 0;
            while h.size() < target {
                let mut best: Option<(u32, Divisor)> = None;
                for _ in 0..SAMPLES_PER_ROUND {
                    let x = jac.scalar_mul_u64(cofactor, &random_element(jac, rng)?)?;
                    let e = order_modulo(jac, &h, &x, k)?.ok_or(Error::StructureFailure {
                        p,
                        reason: "element order exceeds the l-part of the group order",
                    })?;
                    if best.as_ref().is_none_or(|(be, _)| e > *be) {
                        best = Some((e, x));
                    }
                }
                let (e, x) = best.expect("at least one sample");
                if e == 0 {
                    stalled += 1;
                    if stalled > MAX_STALLED_ROUNDS {
                        return Err(Error::StructureFailure {
                            p,
                            reason: "group smaller than the claimed order",
                        });
                    }
                    continue;
                }
                let z = jac.scalar_mul_u64(ell.pow(e), &x)?;
                let Some(c) = h.dlog(jac, &z)? else {
                    continue 'restart;
                };
                let le = ell.pow(e);
                let mut corrected = x;
                for (i, ci) in c.iter().enumerate() {
                    let k_i = if e <= h.exponents[i] {
                        if ci % le != 0 {
                            continue 'restart;
                        }
                        ci / le
                    } else if *ci != 0 {
                        continue 'restart;
                    } else {
                        0
                    };
                    corrected = jac.sub(&corrected, &jac.scalar_mul_u64(k_i, &h.basis[i])?)?;
                }
                let mut basis = h.basis.clone();
                let mut exps = h.exponents.clone();
                basis.push(corrected);
                exps.push(e);
                h = PrimaryComponent::from_basis(jac, ell, basis, exps)?;
            }
            let mut order: Vec<usize> = (0..h.basis.len()).collect();
            order.sort_by(|&a, &b| h.exponents[b].cmp(&h.exponents[a]));
            let basis = order.iter().map(|&i| h.basis[i].clone()).collect();
            let exps = order.iter().map(|&i| h.exponents[i]).collect();
            return PrimaryComponent::from_basis(jac, ell, basis, exps);
        }
        Err(Error::StructureFailure {
            p,
            reason: "basis construction did not converge",
        })
    }
}

/// Smallest `e <= k` with `l^e x` in the span of `h`.
fn order_modulo(jac: &JacobianFp, h: &PrimaryComponent, x: &Divisor, k: u32) -> Result<Option<u32>> {
    let mut z = x.clone();
    for e in 0..=k {
        if h.dlog(jac, &z)?.is_some() {
            return Ok(Some(e));
        }
        z = jac.scalar_mul_u64(h.ell, &z)?;
    }
    Ok(None)
}

/// A random element of `J(F_p)`: pick a monic `u` of degree at most `g`
/// uniformly and a random square root of `f` modulo it, retrying when there
/// is none. Every element has positive probability.
pub(crate) fn random_element(jac: &JacobianFp, rng: &mut ChaCha8Rng) -> Result<Divisor> {
    let p = jac.p() as u128;
    let g = jac.genus();
    let total: u128 = (0..=g).map(|d| p.pow(d as u32)).sum();
    let field = jac.field();
    loop {
        let mut idx = rng.random_range(0..total);
        let mut deg = 0;
        while idx >= p.pow(deg as u32) {
            idx -= p.pow(deg as u32);
            deg += 1;
        }
        let mut coeffs: Vec<Fp> = (0..deg)
            .map(|_| {
                let c = field.elem_u64((idx % p) as u64);
                idx /= p;
                c
            })
            .collect();
        coeffs.push(field.one());
        let u = Poly::from_coeffs(field, coeffs);
        let roots = square_roots_mod(jac, &u)?;
        if roots.is_empty() {
            continue;
        }
        let v = roots[rng.random_range(0..roots.len())].clone();
        return Ok(MumfordDivisor { u, v });
    }
}

/// `J(F_p) = Z/n_1 + ... + Z/n_s` with `n_1 | n_2 | ... | n_s`, a basis
/// `g_j` of orders `n_j`, and discrete logs with respect to it.
#[derive(Clone, Debug)]
pub struct GroupStructure {
    p: u64,
    order: u64,
    factorization: Factorization,
    invariant_factors: Vec<u64>,
    basis: Vec<Divisor>,
    components: Vec<PrimaryComponent>,
    /// For component `c`: `cofactor = order / l^k` and its inverse mod `l^k`.
    cofactors: Vec<(u64, u64)>,
}

impl GroupStructure {
    /// The order must be exact; it is cross-checked while the basis is built.
    pub fn compute(jac: &JacobianFp, order: u64) -> Result<Self> {
        let p = jac.p();
        let factorization = factorize(order)?;
        let mut rng = ChaCha8Rng::seed_from_u64(STRUCTURE_SEED ^ p.rotate_left(17));
        let mut components = Vec::new();
        let mut cofactors = Vec::new();
        for &(ell, k) in &factorization.factors {
            let lk = ell.pow(k);
            let cofactor = order / lk;
            let inv = inv_mod(cofactor % lk, lk).expect("cofactor is prime to l");
            components.push(PrimaryComponent::compute(jac, ell, k, cofactor, &mut rng)?);
            cofactors.push((cofactor, inv));
        }
        let rank = components.iter().map(|c| c.basis.len()).max().unwrap_or(0);
        // descending position i pairs the i-th largest summand of every l-part
        let mut factors_desc = Vec::with_capacity(rank);
        let mut basis_desc = Vec::with_capacity(rank);
        for i in 0..rank {
            let mut n = 1u64;
            let mut g = jac.identity();
            for c in &components {
                if let Some(&e) = c.exponents.get(i) {
                    n *= c.ell.pow(e);
                    g = jac.add(&g, &c.basis[i])?;
                }
            }
            factors_desc.push(n);
            basis_desc.push(g);
        }
        factors_desc.reverse();
        basis_desc.reverse();
        Ok(GroupStructure {
            p,
            order,
            factorization,
            invariant_factors: factors_desc,
            basis: basis_desc,
            components,
            cofactors,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn factorization(&self) -> &Factorization {
        &self.factorization
    }

    /// `n_1 | n_2 | ... | n_s`, ascending.
    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn basis(&self) -> &[MumfordDivisor<Fp>] {
        &self.basis
    }

    pub fn components(&self) -> &[PrimaryComponent] {
        &self.components
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// `(e_1, ..., e_s)` with `x = sum e_j g_j`, `0 <= e_j < n_j`.
    pub fn dlog(&self, jac: &JacobianFp, x: &MumfordDivisor<Fp>) -> Result<Vec<u64>> {
        let s = self.rank();
        // position in the descending layout -> (value, modulus)
        let mut crt: Vec<(u64, u64)> = vec![(0, 1); s];
        for (c, &(cofactor, inv)) in self.components.iter().zip(&self.cofactors) {
            let y = jac.scalar_mul_u64(cofactor, x)?;
            let coeffs = c.dlog(jac, &y)?.ok_or(Error::StructureFailure {
                p: self.p,
                reason: "element outside the computed group",
            })?;
            for (i, (&ci, &e)) in coeffs.iter().zip(&c.exponents).enumerate() {
                let m = c.ell.pow(e);
                let coef = mul_mod(ci % m, inv % m, m);
                let (a, n) = crt[i];
                crt[i] = (crt_pair(a, n, coef, m), n * m);
            }
        }
        Ok(crt.into_iter().rev().map(|(a, _)| a).collect())
    }

    /// `sum e_j g_j`.
    pub fn element(&self, jac: &JacobianFp, coords: &[u64]) -> Result<MumfordDivisor<Fp>> {
        if coords.len() != self.rank() {
            return Err(Error::DimensionMismatch("coordinate count"));
        }
        let mut acc = jac.identity();
        for (c, g) in coords.iter().zip(&self.basis) {
            acc = jac.add(&acc, &jac.scalar_mul_u64(*c, g)?)?;
        }
        Ok(acc)
    }

    /// Mixed-radix index of a coordinate vector in `[0, order)`.
    pub fn linear_index(&self, coords: &[u64]) -> u64 {
        let mut idx = 0u64;
        for (c, n) in coords.iter().zip(&self.invariant_factors).rev() {
            idx = idx * n + c % n;
        }
        idx
    }

    pub fn coords_of_index(&self, mut idx: u64) -> Vec<u64> {
        self.invariant_factors
            .iter()
            .map(|n| {
                let c = idx % n;
                idx /= n;
                c
            })
            .collect()
    }

    /// Order of an element, by stripping prime factors from the group order.
    pub fn element_order(&self, jac: &JacobianFp, x: &MumfordDivisor<Fp>) -> Result<u64> {
        let mut t = self.order;
        for &(ell, _) in &self.factorization.factors {
            while t.is_multiple_of(ell) && jac.is_identity(&jac.scalar_mul_u64(t / ell, x)?) {
                t /= ell;
            }
        }
        Ok(t)
    }
}

/// `x = a (mod n)`, `x = b (mod m)` for coprime `n`, `m`; result mod `n m`.
fn crt_pair(a: u64, n: u64, b: u64, m: u64) -> u64 {
    if n == 1 {
        return b % m;
    }
    let nm = n as u128 * m as u128;
    let inv = inv_mod(n % m, m).expect("coprime moduli") as u128;
    let diff = (b as u128 + m as u128 - (a as u128 % m as u128)) % m as u128;
    let t = diff * inv % m as u128;
    ((a as u128 + n as u128 * t) % nm) as u64
}
