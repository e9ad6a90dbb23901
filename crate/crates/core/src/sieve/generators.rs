use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;

use num_rational::BigRational;

use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::jacobian::{JacobianQ, MumfordDivisor};

/// Largest order accepted for a listed torsion generator.
pub const TORSION_ORDER_BOUND: u64 = 64;
/// Largest torsion subgroup that is enumerated.
pub const TORSION_GROUP_LIMIT: usize = 4096;

type DivisorQ = MumfordDivisor<BigRational>;

/// Generators of (a subgroup of) `J(Q)`: `r` free generators, torsion
/// generators, and an optional offset `D0`. The set described is the coset
/// `D0 + <free, torsion>`; without an offset it is the subgroup itself.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    free: Vec<DivisorQ>,
    torsion_generators: Vec<DivisorQ>,
    /// All elements of the torsion subgroup, identity first.
    torsion: Vec<DivisorQ>,
    offset: Option<DivisorQ>,
}

impl GeneratorSet {
    /// Validate all divisors on the curve and enumerate the subgroup spanned
    /// by the torsion generators, after checking each has order at most
    /// [`TORSION_ORDER_BOUND`].
    pub fn new(
        curve: &CurveSpec,
        free: Vec<DivisorQ>,
        torsion_generators: Vec<DivisorQ>,
        offset: Option<DivisorQ>,
    ) -> Result<Self> {
        let jac = JacobianQ::over_rationals(curve);
        let canon = |d: &DivisorQ| -> Result<DivisorQ> { jac.divisor(d.u.clone(), d.v.clone()) };
        let free = free.iter().map(&canon).collect::<Result<Vec<_>>>()?;
        let torsion_generators = torsion_generators.iter().map(&canon).collect::<Result<Vec<_>>>()?;
        let offset = offset.as_ref().map(&canon).transpose()?;
        for t in &torsion_generators {
            if jac.torsion_order(t, TORSION_ORDER_BOUND).is_none() {
                return Err(Error::NotTorsion(TORSION_ORDER_BOUND));
            }
        }
        let identity = jac.identity();
        let mut seen = BTreeSet::new();
        seen.insert(identity.clone());
        let mut torsion = alloc::vec![identity];
        let mut queue: VecDeque<DivisorQ> = torsion.iter().cloned().collect();
        while let Some(x) = queue.pop_front() {
            for t in &torsion_generators {
                let y = jac.add(&x, t)?;
                if seen.insert(y.clone()) {
                    if torsion.len() >= TORSION_GROUP_LIMIT {
                        return Err(Error::TooLarge {
                            what: "torsion subgroup",
                            size: torsion.len() as u128 + 1,
                            limit: TORSION_GROUP_LIMIT as u128,
                        });
                    }
                    torsion.push(y.clone());
                    queue.push_back(y);
                }
            }
        }
        Ok(GeneratorSet {
            free,
            torsion_generators,
            torsion,
            offset,
        })
    }

    /// Free generators only.
    pub fn free(curve: &CurveSpec, free: Vec<DivisorQ>) -> Result<Self> {
        GeneratorSet::new(curve, free, Vec::new(), None)
    }

    /// Free rank `r`.
    pub fn rank(&self) -> usize {
        self.free.len()
    }

    pub fn generators(&self) -> &[MumfordDivisor<BigRational>] {
        &self.free
    }

    pub fn torsion_generators(&self) -> &[MumfordDivisor<BigRational>] {
        &self.torsion_generators
    }

    /// Every element of the torsion subgroup, identity first.
    pub fn torsion_elements(&self) -> &[MumfordDivisor<BigRational>] {
        &self.torsion
    }

    pub fn offset(&self) -> Option<&MumfordDivisor<BigRational>> {
        self.offset.as_ref()
    }
}
