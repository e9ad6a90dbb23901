//! Mordell-Weil sieve for odd-degree hyperelliptic curves `y^2 = f(x)` over
//! Q, with Jacobian arithmetic over `F_p` and the smoothness heuristics that
//! govern which primes are useful.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arith;
pub mod curve;
pub mod error;
pub mod field;
pub mod heuristic;
pub mod jacobian;
pub mod poly;
pub mod sieve;

pub use curve::{CurveSpec, Point, PointCounts};
pub use error::{Error, Result};
pub use field::{Field, Fp, Fp2, PrimeField, QuadraticExtension, Rationals};
pub use jacobian::{GroupStructure, Jacobian, JacobianFp, JacobianQ, MumfordDivisor};
pub use poly::Poly;
