//! Brute-force check of a sieve verdict: enumerate the image of the
//! generators in the product of the local groups and intersect it with the
//! product of the curve images, without discrete logarithms.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::local::AbstractGroup;
use super::{GeneratorSet, PrimeLocalData};
use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::field::Fp;
use crate::jacobian::{JacobianFp, MumfordDivisor};

/// Largest image subgroup enumerated.
pub const CERTIFY_LIMIT: usize = 1_000_000;

/// A finite abelian group whose elements have injective `u64` keys.
pub trait BruteForceGroup {
    type Elem: Clone;
    fn identity(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn key(&self, a: &Self::Elem) -> u64;
}

impl BruteForceGroup for JacobianFp {
    type Elem = MumfordDivisor<Fp>;

    fn identity(&self) -> Self::Elem {
        JacobianFp::identity(self)
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        JacobianFp::add(self, a, b)
    }

    fn key(&self, a: &Self::Elem) -> u64 {
        JacobianFp::key(self, a)
    }
}

impl BruteForceGroup for AbstractGroup {
    type Elem = Vec<u64>;

    fn identity(&self) -> Self::Elem {
        vec![0; self.factors().len()]
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(AbstractGroup::add(self, a, b))
    }

    fn key(&self, a: &Self::Elem) -> u64 {
        self.index(a) as u64
    }
}

/// One prime: the group, the images of all generators (free and torsion),
/// the image of the offset, and the keys of the curve image.
pub struct LocalInstance<G: BruteForceGroup> {
    pub group: G,
    pub generators: Vec<G::Elem>,
    pub offset: G::Elem,
    pub curve_keys: BTreeSet<u64>,
}

/// Whether `offset + <generators>` misses the product of curve images.
/// The empty product is a one-point set, so no primes means `false`.
pub fn images_disjoint<G: BruteForceGroup>(instances: &[LocalInstance<G>], limit: usize) -> Result<bool> {
    let rank = instances.first().map_or(0, |i| i.generators.len());
    if instances.iter().any(|i| i.generators.len() != rank) {
        return Err(Error::DimensionMismatch("generator count"));
    }
    let keys = |x: &[G::Elem]| -> Vec<u64> { instances.iter().zip(x).map(|(i, e)| i.group.key(e)).collect() };
    let zero: Vec<G::Elem> = instances.iter().map(|i| i.group.identity()).collect();
    let mut seen = BTreeSet::new();
    seen.insert(keys(&zero));
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        let shifted = instances
            .iter()
            .zip(&x)
            .map(|(i, e)| i.group.add(e, &i.offset))
            .collect::<Result<Vec<_>>>()?;
        if instances
            .iter()
            .zip(&shifted)
            .all(|(i, e)| i.curve_keys.contains(&i.group.key(e)))
        {
            return Ok(false);
        }
        for g in 0..rank {
            let y = instances
                .iter()
                .zip(&x)
                .map(|(i, e)| i.group.add(e, &i.generators[g]))
                .collect::<Result<Vec<_>>>()?;
            if seen.insert(keys(&y)) {
                if seen.len() > limit {
                    return Err(Error::TooLarge {
                        what: "image subgroup",
                        size: seen.len() as u128,
                        limit: limit as u128,
                    });
                }
                queue.push_back(y);
            }
        }
    }
    Ok(true)
}

/// Brute-force verdict for a curve: `true` iff no element of the coset
/// described by `gens` reduces onto the curve image at every prime of `primes`.
/// Uses only Cantor arithmetic and point enumeration.
pub fn certify(curve: &CurveSpec, gens: &GeneratorSet, primes: &[u64]) -> Result<bool> {
    let mut instances = Vec::with_capacity(primes.len());
    for &p in primes {
        let jac = JacobianFp::over_prime(curve, p)?;
        let generators = gens
            .generators()
            .iter()
            .chain(gens.torsion_generators())
            .map(|d| jac.reduce_generator(d))
            .collect::<Result<Vec<_>>>()?;
        let offset = match gens.offset() {
            Some(d) => jac.reduce_generator(d)?,
            None => jac.identity(),
        };
        let curve_keys = curve
            .enumerate_points(p)?
            .iter()
            .map(|pt| jac.albanese(pt).map(|d| jac.key(&d)))
            .collect::<Result<BTreeSet<_>>>()?;
        if !jac.key_fits() {
            return Err(Error::TooLarge {
                what: "divisor key",
                size: p as u128,
                limit: 0,
            });
        }
        instances.push(LocalInstance {
            group: jac,
            generators,
            offset,
            curve_keys,
        });
    }
    images_disjoint(&instances, CERTIFY_LIMIT)
}

/// Brute-force verdict on precomputed (typically synthetic) local data,
/// enumerating in coordinates with the subgroup generated by the free and
/// torsion images.
pub fn certify_local(data: &[PrimeLocalData]) -> Result<bool> {
    let instances: Vec<LocalInstance<AbstractGroup>> = data
        .iter()
        .map(|d| LocalInstance {
            group: d.group().clone(),
            generators: d.phi().iter().chain(d.torsion_image()).cloned().collect(),
            offset: d.offset_image().to_vec(),
            curve_keys: d.curve_image().iter().copied().collect(),
        })
        .collect();
    images_disjoint(&instances, CERTIFY_LIMIT)
}
