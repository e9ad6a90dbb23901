//! Smoothness frequencies of `#J(F_p)` and the LCM of group orders.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::One;

use super::dickman::dickman_rho;
use super::factor::{factorize, is_smooth};
use crate::arith::{floor_log, primes_in};
use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::jacobian::jacobian_order;

/// Counts of good `p <= B` and of those with `#J(F_p)` being `B^u`-smooth.
#[derive(Clone, Debug, PartialEq)]
pub struct SmoothnessStats {
    pub curve: Vec<i64>,
    pub b: f64,
    pub u: f64,
    pub total: u64,
    pub smooth: u64,
    /// Primes whose order could not be computed or factored.
    pub skipped: u64,
    pub fraction: f64,
    /// `rho(g / u)`.
    pub rho_baseline: f64,
}

pub fn smooth_fraction(curve: &CurveSpec, b: f64, u: f64) -> Result<SmoothnessStats> {
    smooth_fraction_with(curve, b, u, |p| jacobian_order(curve, p))
}

/// As [`smooth_fraction`], with the group orders supplied by `order`.
pub fn smooth_fraction_with<O>(curve: &CurveSpec, b: f64, u: f64, mut order: O) -> Result<SmoothnessStats>
where
    O: FnMut(u64) -> Result<u64>,
{
    if b.is_nan() || b < 3.0 {
        return Err(Error::OutOfRange(alloc::format!("B = {b}")));
    }
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::OutOfRange(alloc::format!("u = {u}")));
    }
    let bound = libm::pow(b, u);
    let (mut total, mut smooth, mut skipped) = (0, 0, 0);
    for p in curve.good_primes(3, libm::floor(b) as u64) {
        let verdict = order(p).and_then(|n| is_smooth(n, bound));
        match verdict {
            Ok(s) => {
                total += 1;
                smooth += u64::from(s);
            }
            Err(_) => skipped += 1,
        }
    }
    let g = curve.genus() as f64;
    let fraction = if total == 0 { 0.0 } else { smooth as f64 / total as f64 };
    Ok(SmoothnessStats {
        curve: curve.coeffs().to_vec(),
        b,
        u,
        total,
        smooth,
        skipped,
        fraction,
        rho_baseline: dickman_rho(g / u)?,
    })
}

/// The exact LCM of a list of orders with the factorization-based bound.
#[derive(Clone, Debug, PartialEq)]
pub struct LcmReport {
    pub lcm: BigUint,
    pub log_lcm: f64,
    /// `prod_{q <= B} q^floor(log_q M_max)`.
    pub bound: BigUint,
    pub divides: bool,
    /// Number of primes `q <= B`.
    pub pi_b: u64,
    pub max_order: u64,
    /// `pi(B) log M_max`.
    pub log_bound: f64,
}

pub fn lcm_of_orders(orders: &[u64], b: f64) -> Result<LcmReport> {
    let mut exponents: BTreeMap<u64, u32> = BTreeMap::new();
    for &n in orders {
        for (q, e) in factorize(n)?.factors {
            let slot = exponents.entry(q).or_insert(0);
            *slot = (*slot).max(e);
        }
    }
    let mut lcm = BigUint::one();
    let mut log_lcm = 0.0;
    for (&q, &e) in &exponents {
        lcm *= BigUint::from(q).pow(e);
        log_lcm += e as f64 * libm::log(q as f64);
    }
    let max_order = orders.iter().copied().max().unwrap_or(1);
    let small = primes_in(2, libm::floor(b.max(0.0)) as u64);
    let mut bound = BigUint::one();
    for &q in &small {
        bound *= BigUint::from(q).pow(floor_log(q, max_order));
    }
    let divides = (&bound % &lcm) == BigUint::from(0u32);
    Ok(LcmReport {
        divides,
        lcm,
        log_lcm,
        bound,
        pi_b: small.len() as u64,
        max_order,
        log_bound: small.len() as f64 * libm::log(max_order as f64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lcm_examples() {
        let r = lcm_of_orders(&[6, 4], 3.0).unwrap();
        assert_eq!(r.lcm, BigUint::from(12u32));
        assert!(r.divides);
        let r = lcm_of_orders(&[35], 7.0).unwrap();
        assert_eq!(r.lcm, BigUint::from(35u32));
        // 7 is not 5-smooth, so the bound cannot absorb it
        assert!(!lcm_of_orders(&[35], 5.0).unwrap().divides);
        assert_eq!(lcm_of_orders(&[], 10.0).unwrap().lcm, BigUint::one());
    }

    #[test]
    fn fraction_extremes() {
        let c = CurveSpec::new(alloc::vec![1, 0, 0, 0, 0, 1]).unwrap();
        let all = smooth_fraction(&c, 60.0, 0.99).unwrap();
        let max = c
            .good_primes(3, 60)
            .iter()
            .map(|&p| jacobian_order(&c, p).unwrap())
            .max()
            .unwrap();
        assert!(libm::pow(60.0, 0.99) < max as f64 || all.fraction == 1.0);
        let none = smooth_fraction(&c, 3.0, 0.1).unwrap();
        assert_eq!(none.fraction, 0.0);
        assert!(smooth_fraction(&c, 100.0, 1.5).is_err());
    }
}
