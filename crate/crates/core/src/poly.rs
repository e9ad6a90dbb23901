//! Dense univariate polynomials over a [`Field`] context.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;

/// Coefficients from the constant term upward, with no trailing zeros.
/// The zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> Poly<E> {
    pub fn from_coeffs<F: Field<Elem = E>>(field: &F, mut coeffs: Vec<E>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant<F: Field<Elem = E>>(field: &F, c: E) -> Self {
        Self::from_coeffs(field, vec![c])
    }

    pub fn one<F: Field<Elem = E>>(field: &F) -> Self {
        Self::constant(field, field.one())
    }

    /// `x - a`.
    pub fn linear_root<F: Field<Elem = E>>(field: &F, a: &E) -> Self {
        Poly {
            coeffs: vec![field.neg(a), field.one()],
        }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn coeff<F: Field<Elem = E>>(&self, field: &F, i: usize) -> E {
        self.coeffs.get(i).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as degree 0; convenient in
    /// size comparisons where zero never needs to be distinguished.
    pub fn deg0(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn is_monic<F: Field<Elem = E>>(&self, field: &F) -> bool {
        self.leading().is_some_and(|c| *c == field.one())
    }

    pub fn add<F: Field<Elem = E>>(&self, other: &Self, field: &F) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| field.add(&self.coeff(field, i), &other.coeff(field, i)))
            .collect();
        Self::from_coeffs(field, coeffs)
    }

    pub fn sub<F: Field<Elem = E>>(&self, other: &Self, field: &F) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| field.sub(&self.coeff(field, i), &other.coeff(field, i)))
            .collect();
        Self::from_coeffs(field, coeffs)
    }

    pub fn neg<F: Field<Elem = E>>(&self, field: &F) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| field.neg(c)).collect(),
        }
    }

    pub fn scale<F: Field<Elem = E>>(&self, c: &E, field: &F) -> Self {
        if field.is_zero(c) {
            return Self::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| field.mul(a, c)).collect(),
        }
    }

    pub fn mul<F: Field<Elem = E>>(&self, other: &Self, field: &F) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if field.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = field.add(&coeffs[i + j], &field.mul(a, b));
            }
        }
        Self::from_coeffs(field, coeffs)
    }

    /// Euclidean division; `divisor` must be nonzero.
    pub fn div_rem<F: Field<Elem = E>>(&self, divisor: &Self, field: &F) -> Result<(Self, Self)> {
        let lead = divisor
            .leading()
            .ok_or(Error::DimensionMismatch("division by the zero polynomial"))?;
        let lead_inv = field.inv(lead)?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![field.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = field.mul(&rem[k + dd], &lead_inv);
            if field.is_zero(&c) {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = field.sub(&rem[k + j], &field.mul(&c, d));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::from_coeffs(field, quot), Self::from_coeffs(field, rem)))
    }

    pub fn rem<F: Field<Elem = E>>(&self, divisor: &Self, field: &F) -> Result<Self> {
        Ok(self.div_rem(divisor, field)?.1)
    }

    /// Quotient of an exact division; errors if the remainder is nonzero.
    pub fn div_exact<F: Field<Elem = E>>(&self, divisor: &Self, field: &F) -> Result<Self> {
        let (q, r) = self.div_rem(divisor, field)?;
        if !r.is_zero() {
            return Err(Error::InvalidDivisor("inexact polynomial division"));
        }
        Ok(q)
    }

    pub fn monic<F: Field<Elem = E>>(&self, field: &F) -> Result<Self> {
        match self.leading() {
            None => Ok(Self::zero()),
            Some(l) => Ok(self.scale(&field.inv(l)?, field)),
        }
    }

    pub fn eval<F: Field<Elem = E>>(&self, x: &E, field: &F) -> E {
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.add(&field.mul(&acc, x), c);
        }
        acc
    }

    pub fn derivative<F: Field<Elem = E>>(&self, field: &F) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| field.mul(&field.from_i64(i as i64), c))
            .collect();
        Self::from_coeffs(field, coeffs)
    }

    /// Extended gcd: `(d, s, t)` with `d = s a + t b` and `d` monic
    /// (or zero when both inputs are zero).
    pub fn xgcd<F: Field<Elem = E>>(a: &Self, b: &Self, field: &F) -> Result<(Self, Self, Self)> {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Self::one(field), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one(field));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1, field)?;
            let s2 = s0.sub(&q.mul(&s1, field), field);
            let t2 = t0.sub(&q.mul(&t1, field), field);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.leading() {
            None => Ok((r0, s0, t0)),
            Some(l) => {
                let li = field.inv(l)?;
                Ok((r0.scale(&li, field), s0.scale(&li, field), t0.scale(&li, field)))
            }
        }
    }

    pub fn gcd<F: Field<Elem = E>>(a: &Self, b: &Self, field: &F) -> Result<Self> {
        Ok(Self::xgcd(a, b, field)?.0)
    }

    /// Apply a coefficient map, e.g. reduction from Q to F_p.
    pub fn try_map<G: Field, M>(&self, target: &G, mut map: M) -> Result<Poly<G::Elem>>
    where
        M: FnMut(&E) -> Result<G::Elem>,
    {
        let coeffs = self.coeffs.iter().map(&mut map).collect::<Result<Vec<_>>>()?;
        Ok(Poly::from_coeffs(target, coeffs))
    }
}
