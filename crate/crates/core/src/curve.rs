//! Odd-degree hyperelliptic curves `y^2 = f(x)` over Q and their points over
//! `F_p` and `F_{p^2}`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{Field, Fp, PrimeField, QuadraticExtension, Rationals};
use crate::poly::Poly;

/// A point of the curve: the unique point at infinity or an affine point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point<E> {
    Infinity,
    Affine { x: E, y: E },
}

/// `y^2 = f(x)` with `f` monic, squarefree, of degree `2g + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSpec {
    coeffs: Vec<i64>,
    genus: usize,
    discriminant: BigInt,
}

impl CurveSpec {
    /// `coeffs` run from the constant term upward.
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        let degree = coeffs.len().checked_sub(1).ok_or(Error::DegreeTooSmall(0))?;
        if coeffs[degree] != 1 {
            return Err(Error::NotMonic);
        }
        if degree % 2 == 0 {
            return Err(Error::EvenDegree(degree));
        }
        if degree < 3 {
            return Err(Error::DegreeTooSmall(degree));
        }
        let discriminant = discriminant(&coeffs);
        if discriminant.is_zero() {
            return Err(Error::NotSquarefree);
        }
        Ok(CurveSpec {
            genus: (degree - 1) / 2,
            coeffs,
            discriminant,
        })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn degree(&self) -> usize {
        2 * self.genus + 1
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    /// `p` odd prime with `p` not dividing `disc(f)`.
    pub fn good_reduction(&self, p: u64) -> bool {
        if p < 3 || !arith::is_prime(p) {
            return false;
        }
        !self.discriminant.mod_floor(&BigInt::from(p)).is_zero()
    }

    pub(crate) fn check_good(&self, p: u64) -> Result<PrimeField> {
        if !self.good_reduction(p) {
            return Err(Error::BadPrime(p));
        }
        PrimeField::new(p)
    }

    /// Good primes in `[lo, hi]`, ascending.
    pub fn good_primes(&self, lo: u64, hi: u64) -> Vec<u64> {
        arith::primes_in(lo.max(3), hi)
            .into_iter()
            .filter(|&p| self.good_reduction(p))
            .collect()
    }

    pub fn f_over<F: Field>(&self, field: &F) -> Poly<F::Elem> {
        Poly::from_coeffs(field, self.coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn f_mod(&self, field: &PrimeField) -> Poly<Fp> {
        self.f_over(field)
    }

    pub fn f_rational(&self) -> Poly<BigRational> {
        self.f_over(&Rationals)
    }

    pub fn is_on_curve_rational(&self, pt: &Point<BigRational>) -> bool {
        match pt {
            Point::Infinity => true,
            Point::Affine { x, y } => self.f_rational().eval(x, &Rationals) == y * y,
        }
    }

    /// All `F_p`-points, the point at infinity first, then affine points by
    /// increasing `x` and `y`.
    pub fn enumerate_points(&self, p: u64) -> Result<Vec<Point<Fp>>> {
        let field = self.check_good(p)?;
        let f = self.f_mod(&field);
        let mut pts = vec![Point::Infinity];
        for x in field.elements() {
            let fx = f.eval(&x, &field);
            if let Some(y) = fx.sqrt() {
                pts.push(Point::Affine { x, y });
                if !y.is_zero() {
                    pts.push(Point::Affine { x, y: -y });
                }
            }
        }
        Ok(pts)
    }

    /// `#C(F_p)` from the quadratic character of `f(x)`.
    pub fn count_points(&self, p: u64) -> Result<u64> {
        let field = self.check_good(p)?;
        let f = self.f_mod(&field);
        let table = square_table(p);
        let affine: u64 = field
            .elements()
            .map(|x| column_count(&table, f.eval(&x, &field).value()))
            .sum();
        Ok(affine + 1)
    }

    /// `#C(F_{p^2})`: one point at infinity plus, for each `x` in `F_{p^2}`,
    /// the number of square roots of `f(x)`.
    pub fn count_points_ext(&self, p: u64) -> Result<u64> {
        let field = self.check_good(p)?;
        let ext = QuadraticExtension::new(field);
        let f = self.f_over(&ext);
        let table = square_table(p);
        let mut total = 1u64;
        for x in ext.elements() {
            let fx = f.eval(&x, &ext);
            total += if ext.is_zero(&fx) {
                1
            } else if table[ext.norm(&fx).value() as usize] {
                2
            } else {
                0
            };
        }
        Ok(total)
    }

    pub fn point_counts(&self, p: u64) -> Result<PointCounts> {
        Ok(PointCounts {
            p,
            n1: self.count_points(p)?,
            n2: self.count_points_ext(p)?,
        })
    }

    /// Rational points with `x = a/b`, `|a|, b <= height`, found by
    /// testing `b^(2g+2) f(a/b)` for being a perfect square.
    pub fn rational_points_up_to(&self, height: i64) -> Vec<Point<BigRational>> {
        let mut out = vec![Point::Infinity];
        let top = 2 * self.genus + 2;
        for b in 1..=height {
            for a in -height..=height {
                if a.gcd(&b) != 1 {
                    continue;
                }
                let (ab, bb) = (BigInt::from(a), BigInt::from(b));
                let mut value = BigInt::zero();
                for (i, &c) in self.coeffs.iter().enumerate() {
                    value += BigInt::from(c) * ab.pow(i as u32) * bb.pow((top - i) as u32);
                }
                if value.is_negative() {
                    continue;
                }
                let root = value.sqrt();
                if &root * &root != value {
                    continue;
                }
                let x = BigRational::new(ab.clone(), bb.clone());
                let den = bb.pow((self.genus + 1) as u32);
                let y = BigRational::new(root.clone(), den.clone());
                out.push(Point::Affine {
                    x: x.clone(),
                    y: y.clone(),
                });
                if !root.is_zero() {
                    out.push(Point::Affine { x, y: -y });
                }
            }
        }
        out
    }
}

fn square_table(p: u64) -> Vec<bool> {
    let mut table = vec![false; p as usize];
    for y in 0..p {
        table[(y * y % p) as usize] = true;
    }
    table
}

#[inline]
fn column_count(table: &[bool], v: u64) -> u64 {
    if v == 0 {
        1
    } else if table[v as usize] {
        2
    } else {
        0
    }
}

/// `#C(F_p)` and `#C(F_{p^2})` at one prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PointCounts {
    pub p: u64,
    pub n1: u64,
    pub n2: u64,
}

impl PointCounts {
    /// `|p + 1 - N1| <= 2g sqrt(p)` and `|p^2 + 1 - N2| <= 2g p`, checked in
    /// integers.
    pub fn satisfies_weil(&self, genus: usize) -> bool {
        let p = self.p as i128;
        let g = genus as i128;
        let t1 = p + 1 - self.n1 as i128;
        let t2 = p * p + 1 - self.n2 as i128;
        self.n1 >= 1 && t1 * t1 <= 4 * g * g * p && t2.abs() <= 2 * g * p
    }
}

/// `disc(f) = (-1)^(n(n-1)/2) Res(f, f')` for monic `f` of degree `n`.
pub fn discriminant(coeffs: &[i64]) -> BigInt {
    let f: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    let df: Vec<BigInt> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i as i64))
        .collect();
    let n = f.len() - 1;
    let res = resultant(&f, &df);
    if (n * (n - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

/// Resultant via the Sylvester determinant, computed with fraction-free
/// Bareiss elimination.
fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let (m, n) = (a.len() - 1, b.len() - 1);
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for i in 0..n {
        for (j, c) in a.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in b.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    bareiss_det(mat)
}

fn bareiss_det(mut mat: Vec<Vec<BigInt>>) -> BigInt {
    let n = mat.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                mat[i][j] = v / &prev;
            }
        }
        prev = mat[k][k].clone();
    }
    sign * &mat[n - 1][n - 1]
}
