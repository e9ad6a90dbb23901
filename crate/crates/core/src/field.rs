//! Prime fields `F_p`, their quadratic extensions, and the rationals, behind
//! one [`Field`] context trait so polynomial and Jacobian code is written
//! once.

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// Arithmetic context for a field. Elements do not need to know their field;
/// every operation goes through the context.
pub trait Field: Clone + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + Ord + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
}

/// An element of `F_p`. Always reduced into `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fp {
    value: u32,
    modulus: u32,
}

impl Fp {
    #[inline]
    pub fn value(self) -> u64 {
        self.value as u64
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.modulus as u64
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    #[inline]
    fn with(self, value: u64) -> Fp {
        Fp {
            value: value as u32,
            modulus: self.modulus,
        }
    }

    pub fn pow(self, exp: u64) -> Fp {
        self.with(arith::pow_mod(self.value(), exp, self.modulus()))
    }

    pub fn inv(self) -> Result<Fp> {
        if self.value == 0 {
            return Err(Error::ZeroInverse);
        }
        // p is prime, so Fermat's little theorem applies.
        Ok(self.pow(self.modulus() - 2))
    }

    /// Legendre symbol: 0 for zero, 1 for nonzero squares, -1 otherwise.
    pub fn legendre(self) -> i32 {
        if self.value == 0 {
            return 0;
        }
        if self.pow((self.modulus() - 1) / 2).value == 1 {
            1
        } else {
            -1
        }
    }

    /// Square root by Tonelli-Shanks; returns the smaller of the two roots.
    pub fn sqrt(self) -> Option<Fp> {
        let p = self.modulus();
        if self.value == 0 {
            return Some(self);
        }
        if self.legendre() != 1 {
            return None;
        }
        let root = if p % 4 == 3 {
            self.pow((p + 1) / 4)
        } else {
            let mut q = p - 1;
            let mut s = 0u32;
            while q.is_multiple_of(2) {
                q /= 2;
                s += 1;
            }
            let z = self.with(smallest_nonresidue(p));
            let mut m = s;
            let mut c = z.pow(q);
            let mut t = self.pow(q);
            let mut r = self.pow(q.div_ceil(2));
            while t.value != 1 {
                let mut i = 0u32;
                let mut t2 = t;
                while t2.value != 1 {
                    t2 = t2 * t2;
                    i += 1;
                }
                let b = c.pow(1u64 << (m - i - 1));
                m = i;
                c = b * b;
                t = t * c;
                r = r * b;
            }
            r
        };
        let other = -root;
        Some(if other.value < root.value { other } else { root })
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    #[inline]
    fn add(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let s = self.value as u64 + rhs.value as u64;
        let m = self.modulus as u64;
        self.with(if s >= m { s - m } else { s })
    }
}

impl Sub for Fp {
    type Output = Fp;
    #[inline]
    fn sub(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let m = self.modulus as u64;
        self.with((self.value as u64 + m - rhs.value as u64) % m)
    }
}

impl Mul for Fp {
    type Output = Fp;
    #[inline]
    fn mul(self, rhs: Fp) -> Fp {
        debug_assert_eq!(self.modulus, rhs.modulus);
        self.with(self.value as u64 * rhs.value as u64 % self.modulus as u64)
    }
}

impl Neg for Fp {
    type Output = Fp;
    #[inline]
    fn neg(self) -> Fp {
        if self.value == 0 {
            self
        } else {
            self.with(self.modulus as u64 - self.value as u64)
        }
    }
}

fn smallest_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&n| arith::pow_mod(n, (p - 1) / 2, p) == p - 1)
        .expect("odd prime has a nonresidue")
}

/// The prime field `F_p` for an odd prime `p < 2^31`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !(3..1 << 31).contains(&p) || !arith::is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn elem(&self, n: i64) -> Fp {
        Fp {
            value: arith::reduce_i64(n, self.p) as u32,
            modulus: self.p as u32,
        }
    }

    #[inline]
    pub fn elem_u64(&self, n: u64) -> Fp {
        Fp {
            value: (n % self.p) as u32,
            modulus: self.p as u32,
        }
    }

    /// Reduce a rational number; fails when `p` divides the denominator.
    pub fn reduce_rational(&self, q: &BigRational) -> Result<Fp> {
        let p = BigInt::from(self.p);
        let num = q.numer().mod_floor(&p).to_u64().unwrap_or(0);
        let den = q.denom().mod_floor(&p).to_u64().unwrap_or(0);
        if den == 0 {
            return Err(Error::DenominatorAtP(self.p));
        }
        Ok(self.elem_u64(num) * self.elem_u64(den).inv()?)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fp> + '_ {
        (0..self.p).map(move |v| self.elem_u64(v))
    }

    pub fn smallest_nonresidue(&self) -> Fp {
        self.elem_u64(smallest_nonresidue(self.p))
    }
}

impl Field for PrimeField {
    type Elem = Fp;

    fn zero(&self) -> Fp {
        self.elem_u64(0)
    }
    fn one(&self) -> Fp {
        self.elem_u64(1)
    }
    fn from_i64(&self, n: i64) -> Fp {
        self.elem(n)
    }
    fn is_zero(&self, a: &Fp) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Fp, b: &Fp) -> Fp {
        *a + *b
    }
    fn sub(&self, a: &Fp, b: &Fp) -> Fp {
        *a - *b
    }
    fn mul(&self, a: &Fp, b: &Fp) -> Fp {
        *a * *b
    }
    fn neg(&self, a: &Fp) -> Fp {
        -*a
    }
    fn inv(&self, a: &Fp) -> Result<Fp> {
        a.inv()
    }
}

/// `a + b t` in `F_p[t] / (t^2 - n)` with `n` the smallest nonresidue.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Fp2 {
    pub a: Fp,
    pub b: Fp,
}

/// The field `F_{p^2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadraticExtension {
    base: PrimeField,
    nonresidue: Fp,
}

impl QuadraticExtension {
    pub fn new(base: PrimeField) -> Self {
        QuadraticExtension {
            base,
            nonresidue: base.smallest_nonresidue(),
        }
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn nonresidue(&self) -> Fp {
        self.nonresidue
    }

    pub fn elem(&self, a: Fp, b: Fp) -> Fp2 {
        Fp2 { a, b }
    }

    pub fn embed(&self, a: Fp) -> Fp2 {
        Fp2 { a, b: self.base.zero() }
    }

    /// `(a + bt)(a - bt) = a^2 - n b^2`.
    pub fn norm(&self, x: &Fp2) -> Fp {
        x.a * x.a - self.nonresidue * x.b * x.b
    }

    /// Nonzero `x` is a square in `F_{p^2}` iff its norm is a square in `F_p`.
    pub fn is_square(&self, x: &Fp2) -> bool {
        self.norm(x).legendre() >= 0
    }

    pub fn elements(&self) -> impl Iterator<Item = Fp2> + '_ {
        let p = self.base.p();
        (0..p * p).map(move |i| Fp2 {
            a: self.base.elem_u64(i % p),
            b: self.base.elem_u64(i / p),
        })
    }
}

impl Field for QuadraticExtension {
    type Elem = Fp2;

    fn zero(&self) -> Fp2 {
        self.embed(self.base.zero())
    }
    fn one(&self) -> Fp2 {
        self.embed(self.base.one())
    }
    fn from_i64(&self, n: i64) -> Fp2 {
        self.embed(self.base.elem(n))
    }
    fn is_zero(&self, x: &Fp2) -> bool {
        x.a.is_zero() && x.b.is_zero()
    }
    fn add(&self, x: &Fp2, y: &Fp2) -> Fp2 {
        Fp2 {
            a: x.a + y.a,
            b: x.b + y.b,
        }
    }
    fn sub(&self, x: &Fp2, y: &Fp2) -> Fp2 {
        Fp2 {
            a: x.a - y.a,
            b: x.b - y.b,
        }
    }
    fn mul(&self, x: &Fp2, y: &Fp2) -> Fp2 {
        Fp2 {
            a: x.a * y.a + self.nonresidue * x.b * y.b,
            b: x.a * y.b + x.b * y.a,
        }
    }
    fn neg(&self, x: &Fp2) -> Fp2 {
        Fp2 { a: -x.a, b: -x.b }
    }
    fn inv(&self, x: &Fp2) -> Result<Fp2> {
        let n_inv = self.norm(x).inv()?;
        Ok(Fp2 {
            a: x.a * n_inv,
            b: -x.b * n_inv,
        })
    }
}

/// The rational numbers with arbitrary-precision numerator and denominator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(a.recip())
    }
}
