//! Jacobians of `y^2 = f(x)` in Mumford representation, with the group law
//! given by Cantor's composition and reduction.

mod order;
mod structure;

#[cfg(test)]
pub(crate) use structure::random_element;

pub use order::{
    enumerate_jacobian, jacobian_order, order_via_zeta, square_roots_mod, within_hasse_weil, ENUMERATION_LIMIT,
};
pub use structure::{GroupStructure, PrimaryComponent};

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

use crate::curve::{CurveSpec, Point};
use crate::error::{Error, Result};
use crate::field::{Field, Fp, PrimeField, Rationals};
use crate::poly::Poly;

/// A divisor class `(u, v)`: `u` monic, `deg v < deg u`, `u | v^2 - f`.
/// The identity is `(1, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MumfordDivisor<E> {
    pub u: Poly<E>,
    pub v: Poly<E>,
}

impl<E: Clone + PartialEq> MumfordDivisor<E> {
    pub fn degree(&self) -> usize {
        self.u.deg0()
    }
}

/// The Jacobian of a curve over a particular coefficient field.
#[derive(Clone, Debug)]
pub struct Jacobian<F: Field> {
    field: F,
    f: Poly<F::Elem>,
    genus: usize,
}

pub type JacobianFp = Jacobian<PrimeField>;
pub type JacobianQ = Jacobian<Rationals>;

impl<F: Field> Jacobian<F> {
    pub fn new(curve: &CurveSpec, field: F) -> Self {
        Jacobian {
            f: curve.f_over(&field),
            genus: curve.genus(),
            field,
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn f(&self) -> &Poly<F::Elem> {
        &self.f
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn identity(&self) -> MumfordDivisor<F::Elem> {
        MumfordDivisor {
            u: Poly::one(&self.field),
            v: Poly::zero(),
        }
    }

    pub fn is_identity(&self, d: &MumfordDivisor<F::Elem>) -> bool {
        d.u.degree() == Some(0)
    }

    /// Checks the Mumford conditions, without requiring `deg u <= g`.
    pub fn validate(&self, d: &MumfordDivisor<F::Elem>) -> Result<()> {
        let fd = &self.field;
        if !d.u.is_monic(fd) {
            return Err(Error::InvalidDivisor("u is not monic"));
        }
        if !d.v.is_zero() && d.v.degree() >= d.u.degree() {
            return Err(Error::InvalidDivisor("deg v >= deg u"));
        }
        let w = d.v.mul(&d.v, fd).sub(&self.f, fd);
        if !w.rem(&d.u, fd)?.is_zero() {
            return Err(Error::InvalidDivisor("u does not divide v^2 - f"));
        }
        Ok(())
    }

    /// Validate and reduce arbitrary input.
    pub fn divisor(&self, u: Poly<F::Elem>, v: Poly<F::Elem>) -> Result<MumfordDivisor<F::Elem>> {
        let v = v.rem(&u, &self.field)?;
        let d = MumfordDivisor { u, v };
        self.validate(&d)?;
        self.reduce(d)
    }

    /// Class of `(P) - (oo)`.
    pub fn albanese(&self, pt: &Point<F::Elem>) -> Result<MumfordDivisor<F::Elem>> {
        match pt {
            Point::Infinity => Ok(self.identity()),
            Point::Affine { x, y } => {
                let fd = &self.field;
                if self.f.eval(x, fd) != fd.mul(y, y) {
                    return Err(Error::NotOnCurve);
                }
                Ok(MumfordDivisor {
                    u: Poly::linear_root(fd, x),
                    v: Poly::constant(fd, y.clone()),
                })
            }
        }
    }

    pub fn neg(&self, d: &MumfordDivisor<F::Elem>) -> MumfordDivisor<F::Elem> {
        MumfordDivisor {
            u: d.u.clone(),
            v: d.v.neg(&self.field),
        }
    }

    /// Cantor composition followed by reduction.
    pub fn add(&self, d1: &MumfordDivisor<F::Elem>, d2: &MumfordDivisor<F::Elem>) -> Result<MumfordDivisor<F::Elem>> {
        let fd = &self.field;
        if self.is_identity(d1) {
            return Ok(d2.clone());
        }
        if self.is_identity(d2) {
            return Ok(d1.clone());
        }
        let (d0, e1, e2) = Poly::xgcd(&d1.u, &d2.u, fd)?;
        let vsum = d1.v.add(&d2.v, fd);
        let (d, c1, c2) = Poly::xgcd(&d0, &vsum, fd)?;
        let s1 = c1.mul(&e1, fd);
        let s2 = c1.mul(&e2, fd);
        let s3 = c2;
        let u = d1.u.mul(&d2.u, fd).div_exact(&d.mul(&d, fd), fd)?;
        let num = s1
            .mul(&d1.u, fd)
            .mul(&d2.v, fd)
            .add(&s2.mul(&d2.u, fd).mul(&d1.v, fd), fd)
            .add(&s3.mul(&d1.v.mul(&d2.v, fd).add(&self.f, fd), fd), fd);
        let v = num.div_exact(&d, fd)?.rem(&u, fd)?;
        self.reduce(MumfordDivisor { u, v })
    }

    pub fn double(&self, d: &MumfordDivisor<F::Elem>) -> Result<MumfordDivisor<F::Elem>> {
        self.add(d, d)
    }

    pub fn sub(&self, d1: &MumfordDivisor<F::Elem>, d2: &MumfordDivisor<F::Elem>) -> Result<MumfordDivisor<F::Elem>> {
        self.add(d1, &self.neg(d2))
    }

    /// Reduce a semi-reduced divisor until `deg u <= g`.
    pub fn reduce(&self, mut d: MumfordDivisor<F::Elem>) -> Result<MumfordDivisor<F::Elem>> {
        let fd = &self.field;
        while d.u.deg0() > self.genus {
            let u_next = self.f.sub(&d.v.mul(&d.v, fd), fd).div_exact(&d.u, fd)?;
            let u_next = u_next.monic(fd)?;
            let v_next = d.v.neg(fd).rem(&u_next, fd)?;
            d = MumfordDivisor { u: u_next, v: v_next };
        }
        let u = d.u.monic(fd)?;
        let v = d.v.rem(&u, fd)?;
        Ok(MumfordDivisor { u, v })
    }

    /// `n D` by double-and-add; negative `n` uses the inverse.
    pub fn scalar_mul(&self, n: i64, d: &MumfordDivisor<F::Elem>) -> Result<MumfordDivisor<F::Elem>> {
        let base = if n < 0 { self.neg(d) } else { d.clone() };
        self.scalar_mul_u64(n.unsigned_abs(), &base)
    }

    pub fn scalar_mul_u64(&self, mut n: u64, d: &MumfordDivisor<F::Elem>) -> Result<MumfordDivisor<F::Elem>> {
        let mut acc = self.identity();
        let mut base = d.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add(&acc, &base)?;
            }
            n >>= 1;
            if n > 0 {
                base = self.double(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn scalar_mul_big(&self, n: &BigInt, d: &MumfordDivisor<F::Elem>) -> Result<MumfordDivisor<F::Elem>> {
        let base = if n.is_negative() { self.neg(d) } else { d.clone() };
        let mut acc = self.identity();
        for i in (0..n.bits()).rev() {
            acc = self.double(&acc)?;
            if n.magnitude().bit(i) {
                acc = self.add(&acc, &base)?;
            }
        }
        Ok(acc)
    }

    /// Sum of `coeffs[i] * elems[i]`.
    pub fn linear_combination(
        &self,
        coeffs: &[i64],
        elems: &[MumfordDivisor<F::Elem>],
    ) -> Result<MumfordDivisor<F::Elem>> {
        if coeffs.len() != elems.len() {
            return Err(Error::DimensionMismatch("coefficient count"));
        }
        let mut acc = self.identity();
        for (c, e) in coeffs.iter().zip(elems) {
            acc = self.add(&acc, &self.scalar_mul(*c, e)?)?;
        }
        Ok(acc)
    }

    /// Order of `d` if it is at most `bound`.
    pub fn torsion_order(&self, d: &MumfordDivisor<F::Elem>, bound: u64) -> Option<u64> {
        let mut acc = d.clone();
        for k in 1..=bound {
            if self.is_identity(&acc) {
                return Some(k);
            }
            acc = self.add(&acc, d).ok()?;
        }
        None
    }
}

impl JacobianFp {
    pub fn over_prime(curve: &CurveSpec, p: u64) -> Result<Self> {
        let field = curve.check_good(p)?;
        Ok(Jacobian::new(curve, field))
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    /// Injective packing of a reduced divisor into a `u64`: the degree and
    /// the non-leading coefficients of `u` and `v` as base-`p` digits.
    pub fn key(&self, d: &MumfordDivisor<Fp>) -> u64 {
        let p = self.p();
        let deg = d.u.deg0();
        let mut key = 0u64;
        for i in 0..deg {
            key = key * p + d.u.coeff(&self.field, i).value();
        }
        for i in 0..deg {
            key = key * p + d.v.coeff(&self.field, i).value();
        }
        key * (self.genus as u64 + 1) + deg as u64
    }

    /// Whether [`Self::key`] is injective for this field and genus.
    pub fn key_fits(&self) -> bool {
        let p = self.p() as u128;
        let mut bound = self.genus as u128 + 1;
        for _ in 0..2 * self.genus {
            bound = bound.saturating_mul(p);
        }
        bound <= u64::MAX as u128
    }

    /// Reduce a divisor over Q coefficient-wise modulo `p`.
    pub fn reduce_generator(&self, d: &MumfordDivisor<BigRational>) -> Result<MumfordDivisor<Fp>> {
        let field = self.field;
        let u = d.u.try_map(&field, |c| field.reduce_rational(c))?;
        let v = d.v.try_map(&field, |c| field.reduce_rational(c))?;
        let red = MumfordDivisor { u, v };
        if self.validate(&red).is_err() {
            return Err(Error::InvalidReduction(self.p()));
        }
        self.reduce(red)
    }
}

impl JacobianQ {
    pub fn over_rationals(curve: &CurveSpec) -> Self {
        Jacobian::new(curve, Rationals)
    }

    /// Build a divisor from integer coordinates of a rational point sum,
    /// mostly for tests and examples.
    pub fn point_divisor(&self, x: &BigRational, y: &BigRational) -> Result<MumfordDivisor<BigRational>> {
        self.albanese(&Point::Affine {
            x: x.clone(),
            y: y.clone(),
        })
    }
}

/// Integer-coefficient convenience constructor used by tests.
pub fn rational_poly(coeffs: &[(i64, i64)]) -> Poly<BigRational> {
    let q = Rationals;
    Poly::from_coeffs(
        &q,
        coeffs
            .iter()
            .map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
            .collect::<Vec<_>>(),
    )
}

#[cfg(test)]
mod tests;
