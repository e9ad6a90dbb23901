//! Trial division followed by Brent's variant of Pollard rho.

use alloc::vec::Vec;
use core::fmt;

use crate::arith::{gcd, is_prime, mul_mod};
use crate::error::{Error, Result};

const TRIAL_BOUND: u64 = 10_000;
const RHO_ATTEMPTS: u64 = 64;
const RHO_ITERATIONS: u64 = 1 << 22;

/// `n = prod p_i^e_i` with strictly increasing primes.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn largest_prime(&self) -> Option<u64> {
        self.factors.last().map(|&(p, _)| p)
    }

    pub fn product(&self) -> Option<u64> {
        self.factors
            .iter()
            .try_fold(1u64, |acc, &(p, e)| acc.checked_mul(p.checked_pow(e)?))
    }

    pub fn is_valid(&self) -> bool {
        self.product() == Some(self.n)
            && self.factors.windows(2).all(|w| w[0].0 < w[1].0)
            && self.factors.iter().all(|&(p, e)| e > 0 && is_prime(p))
    }

    pub fn prime_power(&self, p: u64) -> u32 {
        self.factors.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e)
    }
}

impl fmt::Display for Factorization {
    /// `2^2*3`, with `1` for the empty factorization.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::OutOfRange("factorize(0)".into()));
    }
    let mut primes = Vec::new();
    let mut rest = n;
    let mut d = 2u64;
    while d <= TRIAL_BOUND && d * d <= rest {
        while rest.is_multiple_of(d) {
            primes.push(d);
            rest /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        let mut stack = alloc::vec![rest];
        while let Some(m) = stack.pop() {
            if is_prime(m) {
                primes.push(m);
                continue;
            }
            let d = find_divisor(m).ok_or(Error::FactorizationFailure(n))?;
            stack.push(d);
            stack.push(m / d);
        }
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { n, factors })
}

/// A nontrivial divisor of composite `n`, or `None` once the budget is spent.
fn find_divisor(n: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let r = integer_sqrt(n);
    if r * r == n {
        return Some(r);
    }
    (1..=RHO_ATTEMPTS).find_map(|c| brent(n, c))
}

fn integer_sqrt(n: u64) -> u64 {
    let n = n as u128;
    let mut r = libm::sqrt(n as f64) as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r as u64
}

fn brent(n: u64, c: u64) -> Option<u64> {
    let step = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let mut x;
    let mut ys;
    let m = 128;
    let mut spent = 0u64;
    loop {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0;
        loop {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = step(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            let g = gcd(q, n);
            k += m;
            spent += m;
            if g != 1 {
                if g != n {
                    return Some(g);
                }
                // backtrack one step at a time
                loop {
                    ys = step(ys);
                    let g = gcd(x.abs_diff(ys), n);
                    if g != 1 {
                        return (g != n).then_some(g);
                    }
                }
            }
            if k >= r {
                break;
            }
        }
        r *= 2;
        if spent > RHO_ITERATIONS {
            return None;
        }
    }
}

/// All prime factors of `n` are at most `bound`; `1` is smooth for any bound.
pub fn is_smooth(n: u64, bound: f64) -> Result<bool> {
    if n == 0 {
        return Err(Error::OutOfRange("is_smooth(0)".into()));
    }
    let fac = factorize(n)?;
    Ok(fac.largest_prime().is_none_or(|q| q as f64 <= bound))
}
