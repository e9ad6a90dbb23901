#![allow(dead_code)]

use mwsieve_core::jacobian::rational_poly;
use mwsieve_core::sieve::{AbstractGroup, PrimeLocalData};
use mwsieve_core::{CurveSpec, JacobianFp, JacobianQ, MumfordDivisor, Point};
use num_rational::BigRational;
use rand::Rng;

pub type DivisorQ = MumfordDivisor<BigRational>;

/// `(P) - (oo)` for an integral point `P = (x, y)`.
pub fn point(x: i64, y: i64) -> DivisorQ {
    MumfordDivisor {
        u: rational_poly(&[(-x, 1), (1, 1)]),
        v: rational_poly(&[(y, 1)]),
    }
}

/// Known rational points with their coefficient vectors on `gens`, found
/// by searching `|k_i| <= bound`.
pub fn known_vectors(curve: &CurveSpec, gens: &[DivisorQ], height: i64, bound: i64) -> Vec<Vec<i64>> {
    let jq = JacobianQ::over_rationals(curve);
    let images: Vec<DivisorQ> = curve
        .rational_points_up_to(height)
        .iter()
        .map(|p| jq.albanese(p).unwrap())
        .collect();
    let r = gens.len();
    let mut out = Vec::new();
    let width = (2 * bound + 1) as usize;
    for idx in 0..width.pow(r as u32) {
        let mut rest = idx;
        let k: Vec<i64> = (0..r)
            .map(|_| {
                let d = (rest % width) as i64 - bound;
                rest /= width;
                d
            })
            .collect();
        let d = jq.linear_combination(&k, gens).unwrap();
        if images.contains(&d) {
            out.push(k);
        }
    }
    out
}

/// The curve points as divisors over F_p.
pub fn local_points(curve: &CurveSpec, p: u64) -> Vec<MumfordDivisor<mwsieve_core::Fp>> {
    let jac = JacobianFp::over_prime(curve, p).unwrap();
    curve
        .enumerate_points(p)
        .unwrap()
        .iter()
        .map(|pt: &Point<_>| jac.albanese(pt).unwrap())
        .collect()
}

/// Random synthetic local data with `r` generators over a small group.
pub fn random_synthetic<R: Rng>(rng: &mut R, p: u64, r: usize, image_fraction: f64) -> PrimeLocalData {
    let s = rng.random_range(1..=2);
    let mut factors = Vec::new();
    let mut n = 1u64;
    for _ in 0..s {
        let base = n.max(1) * rng.random_range(2..=6);
        factors.push(base);
        n = base;
    }
    let group = AbstractGroup::new(factors.clone()).unwrap();
    let phi: Vec<Vec<u64>> = (0..r)
        .map(|_| factors.iter().map(|&m| rng.random_range(0..m)).collect())
        .collect();
    let image: Vec<Vec<u64>> = (0..group.order() as usize)
        .filter(|_| rng.random_bool(image_fraction))
        .map(|i| group.coords(i))
        .collect();
    PrimeLocalData::synthetic(p, factors, phi, Vec::new(), None, image).unwrap()
}
