use alloc::vec;
use alloc::vec::Vec;

use libm::sqrt;

use super::{JacobianFp, MumfordDivisor};
use crate::curve::{CurveSpec, PointCounts};
use crate::error::{Error, Result};
use crate::field::{Field, Fp};
use crate::poly::Poly;

/// Largest group the exhaustive routines will touch.
pub const ENUMERATION_LIMIT: u64 = 1_000_000;

/// All `v` with `deg v < deg u` and `v^2 = f (mod u)`, for monic `u`.
pub fn square_roots_mod(jac: &JacobianFp, u: &Poly<Fp>) -> Result<Vec<Poly<Fp>>> {
    let field = jac.field();
    let deg = u.degree().ok_or(Error::InvalidDivisor("u is zero"))?;
    let fr = jac.f().rem(u, field)?;
    match deg {
        0 => Ok(vec![Poly::zero()]),
        1 => {
            let a = -u.coeff(field, 0);
            let fa = fr.coeff(field, 0);
            debug_assert_eq!(fa, jac.f().eval(&a, field));
            Ok(match fa.sqrt() {
                None => vec![],
                Some(b) if b.is_zero() => vec![Poly::zero()],
                Some(b) => vec![Poly::constant(field, b), Poly::constant(field, -b)],
            })
        }
        2 => {
            // u = x^2 + a x + b, v = c x + e:
            // v^2 = (2ce - a c^2) x + (e^2 - b c^2) mod u.
            let a = u.coeff(field, 1);
            let b = u.coeff(field, 0);
            let f1 = fr.coeff(field, 1);
            let f0 = fr.coeff(field, 0);
            let mut out = Vec::new();
            if f1.is_zero() {
                if let Some(e) = f0.sqrt() {
                    out.push(Poly::constant(field, e));
                    if !e.is_zero() {
                        out.push(Poly::constant(field, -e));
                    }
                }
            }
            let two_inv = field.elem(2).inv()?;
            for c in field.elements().skip(1) {
                let c2 = c * c;
                let e = (f1 + a * c2) * (c.inv()? * two_inv);
                if e * e - b * c2 == f0 {
                    out.push(Poly::from_coeffs(field, vec![e, c]));
                }
            }
            Ok(out)
        }
        _ => {
            let p = jac.p();
            let total = (p as u128).pow(deg as u32);
            if total > ENUMERATION_LIMIT as u128 {
                return Err(Error::TooLarge {
                    what: "square-root search",
                    size: total,
                    limit: ENUMERATION_LIMIT as u128,
                });
            }
            let mut out = Vec::new();
            for idx in 0..total as u64 {
                let mut rest = idx;
                let coeffs = (0..deg)
                    .map(|_| {
                        let c = field.elem_u64(rest % p);
                        rest /= p;
                        c
                    })
                    .collect();
                let v = Poly::from_coeffs(field, coeffs);
                if v.mul(&v, field).sub(jac.f(), field).rem(u, field)?.is_zero() {
                    out.push(v);
                }
            }
            Ok(out)
        }
    }
}

/// Hasse-Weil upper estimate `(sqrt p + 1)^(2g)` for `#J(F_p)`.
pub(crate) fn order_upper_estimate(p: u64, genus: usize) -> f64 {
    let mut acc = 1.0;
    for _ in 0..2 * genus {
        acc *= sqrt(p as f64) + 1.0;
    }
    acc
}

/// Every reduced divisor over `F_p`, by running over all monic `u` of degree
/// at most `g` and solving `v^2 = f (mod u)`.
pub fn enumerate_jacobian(jac: &JacobianFp) -> Result<Vec<MumfordDivisor<Fp>>> {
    let p = jac.p();
    let g = jac.genus();
    let estimate = order_upper_estimate(p, g);
    if estimate > ENUMERATION_LIMIT as f64 {
        return Err(Error::TooLarge {
            what: "Jacobian enumeration",
            size: estimate as u128,
            limit: ENUMERATION_LIMIT as u128,
        });
    }
    let field = jac.field();
    let mut out = Vec::new();
    for deg in 0..=g {
        let count = p.pow(deg as u32);
        for idx in 0..count {
            let mut rest = idx;
            let mut coeffs: Vec<Fp> = (0..deg)
                .map(|_| {
                    let c = field.elem_u64(rest % p);
                    rest /= p;
                    c
                })
                .collect();
            coeffs.push(field.one());
            let u = Poly::from_coeffs(field, coeffs);
            for v in square_roots_mod(jac, &u)? {
                out.push(MumfordDivisor { u: u.clone(), v });
            }
        }
    }
    Ok(out)
}

/// `#J(F_p) = L(1)` from `#C(F_p)` and `#C(F_{p^2})`, for genus 1 and 2.
pub fn order_via_zeta(counts: &PointCounts, genus: usize) -> Result<u64> {
    let p = counts.p as i128;
    match genus {
        1 => Ok(counts.n1),
        2 => {
            let s1 = p + 1 - counts.n1 as i128;
            let s2 = p * p + 1 - counts.n2 as i128;
            let twice_e2 = s1 * s1 - s2;
            if twice_e2 % 2 != 0 {
                return Err(Error::InconsistentCounts(counts.p));
            }
            let e1 = s1;
            let e2 = twice_e2 / 2;
            let order = 1 - e1 + e2 - p * e1 + p * p;
            if order <= 0 {
                return Err(Error::InconsistentCounts(counts.p));
            }
            Ok(order as u64)
        }
        g => Err(Error::UnsupportedGenus(g)),
    }
}

/// `#J(F_p)`, from point counts in genus 1 and 2 and by enumeration above.
pub fn jacobian_order(curve: &CurveSpec, p: u64) -> Result<u64> {
    if curve.genus() <= 2 {
        order_via_zeta(&curve.point_counts(p)?, curve.genus())
    } else {
        Ok(enumerate_jacobian(&JacobianFp::over_prime(curve, p)?)?.len() as u64)
    }
}

/// `(sqrt p - 1)^(2g) <= n <= (sqrt p + 1)^(2g)`. Exact in genus 1; in
/// higher genus compared in floating point with a relative slack of `1e-12`.
pub fn within_hasse_weil(n: u64, p: u64, genus: usize) -> bool {
    if genus == 1 {
        let t = n as i128 - p as i128 - 1;
        return t * t <= 4 * p as i128;
    }
    let root = sqrt(p as f64);
    let lo = libm::pow(root - 1.0, 2.0 * genus as f64);
    let hi = libm::pow(root + 1.0, 2.0 * genus as f64);
    let n = n as f64;
    n >= lo * (1.0 - 1e-12) && n <= hi * (1.0 + 1e-12)
}
