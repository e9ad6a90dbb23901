use alloc::boxed::Box;
use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::GeneratorSet;
use crate::arith::lcm;
use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::jacobian::{jacobian_order, GroupStructure, JacobianFp};

/// Largest `#J(F_p)` for which local data is built.
pub const LOCAL_ORDER_LIMIT: u64 = 1 << 24;

/// A fixed-length bit set over `[0, len)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitset {
    words: Vec<u64>,
    len: usize,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut b = Bitset::new(len);
        for i in 0..len {
            b.insert(i);
        }
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Coordinate arithmetic in `Z/n_1 + ... + Z/n_s` with mixed-radix indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractGroup {
    factors: Vec<u64>,
}

impl AbstractGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.contains(&0) {
            return Err(Error::DimensionMismatch("invariant factor zero"));
        }
        let order = factors.iter().try_fold(1u64, |a, &n| a.checked_mul(n));
        if order.is_none_or(|n| n > LOCAL_ORDER_LIMIT) {
            return Err(Error::TooLarge {
                what: "local group",
                size: factors.iter().map(|&n| n as u128).product(),
                limit: LOCAL_ORDER_LIMIT as u128,
            });
        }
        Ok(AbstractGroup { factors })
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.iter().copied().fold(1, lcm)
    }

    pub fn index(&self, coords: &[u64]) -> usize {
        let mut idx = 0u64;
        for (c, n) in coords.iter().zip(&self.factors).rev() {
            idx = idx * n + c % n;
        }
        idx as usize
    }

    pub fn coords(&self, mut idx: usize) -> Vec<u64> {
        self.factors
            .iter()
            .map(|&n| {
                let c = idx as u64 % n;
                idx /= n as usize;
                c
            })
            .collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((x, y), n)| (x + y) % n)
            .collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(&self.factors)
            .map(|((x, y), n)| (x % n + n - y % n) % n)
            .collect()
    }

    fn check(&self, coords: &[u64]) -> Result<()> {
        if coords.len() != self.factors.len() {
            return Err(Error::DimensionMismatch("coordinate vector length"));
        }
        Ok(())
    }
}

/// Everything the sieve uses at one prime, in discrete-log coordinates with
/// respect to the invariant-factor basis of `J(F_p)`.
#[derive(Clone, Debug)]
pub struct PrimeLocalData {
    p: u64,
    n1: u64,
    group: AbstractGroup,
    structure: Option<GroupStructure>,
    phi: Vec<Vec<u64>>,
    torsion: Vec<Vec<u64>>,
    offset: Vec<u64>,
    curve_image: Vec<u64>,
    /// `admissible[t]` is the set of `x` with `x + torsion[t] + offset` on
    /// the curve image.
    admissible: Vec<Bitset>,
}

impl PrimeLocalData {
    /// Local data for an abstract group: `phi[i]` is the image of free
    /// generator `i`, `torsion[t]` the image of global torsion element `t`
    /// (identity first), and `curve_image` a list of coordinate vectors.
    pub fn synthetic(
        p: u64,
        invariant_factors: Vec<u64>,
        phi: Vec<Vec<u64>>,
        torsion: Vec<Vec<u64>>,
        offset: Option<Vec<u64>>,
        curve_image: Vec<Vec<u64>>,
    ) -> Result<Self> {
        let group = AbstractGroup::new(invariant_factors)?;
        let curve_image: BTreeSet<u64> = curve_image
            .iter()
            .map(|c| group.check(c).map(|_| group.index(c) as u64))
            .collect::<Result<_>>()?;
        PrimeLocalData::assemble(p, group, None, phi, torsion, offset, curve_image.into_iter().collect())
    }

    fn assemble(
        p: u64,
        group: AbstractGroup,
        structure: Option<GroupStructure>,
        phi: Vec<Vec<u64>>,
        torsion: Vec<Vec<u64>>,
        offset: Option<Vec<u64>>,
        curve_image: Vec<u64>,
    ) -> Result<Self> {
        let s = group.factors.len();
        for c in phi.iter().chain(&torsion) {
            group.check(c)?;
        }
        let torsion = if torsion.is_empty() { vec![vec![0; s]] } else { torsion };
        let offset = offset.unwrap_or_else(|| vec![0; s]);
        group.check(&offset)?;
        let mut data = PrimeLocalData {
            p,
            n1: curve_image.len() as u64,
            group,
            structure,
            phi,
            torsion,
            offset,
            curve_image,
            admissible: Vec::new(),
        };
        data.admissible = data.admissible_sets(&data.curve_image);
        Ok(data)
    }

    /// For each torsion element `t`, the set `{c - t - offset : c in image}`.
    pub fn admissible_sets(&self, image: &[u64]) -> Vec<Bitset> {
        let n = self.group.order() as usize;
        self.torsion
            .iter()
            .map(|t| {
                let shift = self.group.add(t, &self.offset);
                let mut set = Bitset::new(n);
                for &c in image {
                    let x = self.group.sub(&self.group.coords(c as usize), &shift);
                    set.insert(self.group.index(&x));
                }
                set
            })
            .collect()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `#C(F_p)`, the size of the curve image.
    pub fn n1(&self) -> u64 {
        self.n1
    }

    pub fn order(&self) -> u64 {
        self.group.order()
    }

    pub fn exponent(&self) -> u64 {
        self.group.exponent()
    }

    pub fn invariant_factors(&self) -> &[u64] {
        self.group.factors()
    }

    pub fn group(&self) -> &AbstractGroup {
        &self.group
    }

    /// `None` for synthetic data.
    pub fn structure(&self) -> Option<&GroupStructure> {
        self.structure.as_ref()
    }

    /// `phi()[i]` = coordinates of the image of free generator `i`.
    pub fn phi(&self) -> &[Vec<u64>] {
        &self.phi
    }

    pub fn rank(&self) -> usize {
        self.phi.len()
    }

    pub fn torsion_image(&self) -> &[Vec<u64>] {
        &self.torsion
    }

    pub fn offset_image(&self) -> &[u64] {
        &self.offset
    }

    /// Sorted linear indices of the curve image.
    pub fn curve_image(&self) -> &[u64] {
        &self.curve_image
    }

    pub fn curve_image_coords(&self) -> Vec<Vec<u64>> {
        self.curve_image
            .iter()
            .map(|&i| self.group.coords(i as usize))
            .collect()
    }

    pub fn admissible(&self) -> &[Bitset] {
        &self.admissible
    }
}

/// Local data at `p`, computing `#J(F_p)` from point counts.
pub fn local_data(curve: &CurveSpec, gens: &GeneratorSet, p: u64) -> Result<PrimeLocalData> {
    let order = jacobian_order(curve, p).map_err(|e| skip(p, e))?;
    local_data_with_order(curve, gens, p, order)
}

fn skip(p: u64, e: Error) -> Error {
    match e {
        Error::SkipPrime { .. } => e,
        other => Error::SkipPrime {
            p,
            reason: Box::new(other),
        },
    }
}

/// Local data at `p` for a known group order. Every failure is reported as
/// [`Error::SkipPrime`].
pub fn local_data_with_order(curve: &CurveSpec, gens: &GeneratorSet, p: u64, order: u64) -> Result<PrimeLocalData> {
    build(curve, gens, p, order).map_err(|e| skip(p, e))
}

fn build(curve: &CurveSpec, gens: &GeneratorSet, p: u64, order: u64) -> Result<PrimeLocalData> {
    if order > LOCAL_ORDER_LIMIT {
        return Err(Error::TooLarge {
            what: "local group",
            size: order as u128,
            limit: LOCAL_ORDER_LIMIT as u128,
        });
    }
    let jac = JacobianFp::over_prime(curve, p)?;
    let structure = GroupStructure::compute(&jac, order)?;
    let group = AbstractGroup::new(structure.invariant_factors().to_vec())?;
    let image_of = |d| -> Result<Vec<u64>> {
        let red = jac.reduce_generator(d)?;
        structure.dlog(&jac, &red)
    };
    let phi = gens.generators().iter().map(image_of).collect::<Result<Vec<_>>>()?;
    let torsion = gens
        .torsion_elements()
        .iter()
        .map(image_of)
        .collect::<Result<Vec<_>>>()?;
    let offset = gens.offset().map(image_of).transpose()?;
    let mut curve_image = Vec::new();
    for pt in curve.enumerate_points(p)? {
        let d = jac.albanese(&pt)?;
        curve_image.push(group.index(&structure.dlog(&jac, &d)?) as u64);
    }
    let n1 = curve_image.len();
    curve_image.sort_unstable();
    curve_image.dedup();
    if curve_image.len() != n1 {
        return Err(Error::StructureFailure {
            p,
            reason: "curve image has repeated discrete logs",
        });
    }
    PrimeLocalData::assemble(p, group, Some(structure), phi, torsion, offset, curve_image)
}

/// The subgroup generated by `gens` inside `group`, by breadth-first closure.
pub fn subgroup_closure(group: &AbstractGroup, gens: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let zero = vec![0; group.factors().len()];
    let mut seen = BTreeSet::new();
    seen.insert(zero.clone());
    let mut out = vec![zero.clone()];
    let mut queue = VecDeque::from([zero]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = group.add(&x, g);
            if seen.insert(y.clone()) {
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    out
}
