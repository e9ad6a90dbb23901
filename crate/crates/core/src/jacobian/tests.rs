use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::curve::PointCounts;
use crate::heuristic::factorize;

fn curves() -> Vec<CurveSpec> {
    [
        vec![1, 0, 0, 1],
        vec![1, -1, 0, 1],
        vec![5, 3, 0, 1],
        vec![1, 0, 0, 0, 0, 1],
        vec![1, -1, 0, 0, 0, 1],
        vec![1, 3, 0, 0, 0, 1],
        vec![2, 0, -1, 1, 0, 1],
    ]
    .into_iter()
    .map(|c| CurveSpec::new(c).unwrap())
    .collect()
}

fn brute_points(curve: &CurveSpec, p: u64) -> Vec<Point<Fp>> {
    let field = PrimeField::new(p).unwrap();
    let f = curve.f_mod(&field);
    let mut out = vec![Point::Infinity];
    for x in field.elements() {
        for y in field.elements() {
            if f.eval(&x, &field) == y * y {
                out.push(Point::Affine { x, y });
            }
        }
    }
    out
}

#[test]
fn cantor_examples_on_cubic() {
    let c = CurveSpec::new(vec![1, 0, 0, 1]).unwrap();
    let jac = JacobianFp::over_prime(&c, 5).unwrap();
    let f = *jac.field();
    let p = jac
        .albanese(&Point::Affine {
            x: f.elem(0),
            y: f.elem(1),
        })
        .unwrap();
    assert_eq!(p.u, Poly::linear_root(&f, &f.zero()));
    let q = jac
        .albanese(&Point::Affine {
            x: f.elem(0),
            y: f.elem(4),
        })
        .unwrap();
    assert_eq!(jac.double(&p).unwrap(), q);
    assert!(jac.is_identity(&jac.scalar_mul(3, &p).unwrap()));
    assert!(jac.is_identity(&jac.scalar_mul(0, &p).unwrap()));
    assert_eq!(jac.add(&p, &jac.identity()).unwrap(), p);
    assert!(jac.is_identity(&jac.add(&p, &jac.neg(&p)).unwrap()));
    assert_eq!(enumerate_jacobian(&jac).unwrap().len(), 6);
    assert_eq!(jacobian_order(&c, 5).unwrap(), 6);
    assert_eq!(jac.albanese(&Point::Infinity).unwrap(), jac.identity());
    assert_eq!(
        jac.albanese(&Point::Affine {
            x: f.elem(1),
            y: f.elem(1)
        }),
        Err(Error::NotOnCurve)
    );
}

#[test]
fn group_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for curve in curves() {
        for p in [7u64, 11, 13] {
            if !curve.good_reduction(p) {
                continue;
            }
            let jac = JacobianFp::over_prime(&curve, p).unwrap();
            let e = jac.identity();
            for _ in 0..1000 {
                let a = random_element(&jac, &mut rng).unwrap();
                let b = random_element(&jac, &mut rng).unwrap();
                let c = random_element(&jac, &mut rng).unwrap();
                jac.validate(&a).unwrap();
                let ab = jac.add(&a, &b).unwrap();
                jac.validate(&ab).unwrap();
                assert!(ab.degree() <= jac.genus());
                assert_eq!(ab, jac.add(&b, &a).unwrap());
                assert_eq!(
                    jac.add(&ab, &c).unwrap(),
                    jac.add(&a, &jac.add(&b, &c).unwrap()).unwrap()
                );
                assert_eq!(jac.add(&a, &e).unwrap(), a);
                assert!(jac.is_identity(&jac.sub(&a, &a).unwrap()));
            }
        }
    }
}

#[test]
fn lagrange() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for curve in curves() {
        for p in [17u64, 23] {
            if !curve.good_reduction(p) {
                continue;
            }
            let jac = JacobianFp::over_prime(&curve, p).unwrap();
            let n = jacobian_order(&curve, p).unwrap();
            for _ in 0..100 {
                let d = random_element(&jac, &mut rng).unwrap();
                assert!(jac.is_identity(&jac.scalar_mul_u64(n, &d).unwrap()));
            }
        }
    }
}

#[test]
fn zeta_matches_enumeration() {
    for curve in curves() {
        for p in curve.good_primes(3, 50) {
            let counts = curve.point_counts(p).unwrap();
            assert!(counts.satisfies_weil(curve.genus()));
            let zeta = order_via_zeta(&counts, curve.genus()).unwrap();
            let jac = JacobianFp::over_prime(&curve, p).unwrap();
            let all = enumerate_jacobian(&jac).unwrap();
            assert_eq!(zeta, all.len() as u64, "curve {:?}, p = {p}", curve.coeffs());
            assert!(within_hasse_weil(zeta, p, curve.genus()));
            assert!(all.contains(&jac.identity()));
            let distinct: BTreeSet<_> = all.iter().map(|d| jac.key(d)).collect();
            assert_eq!(distinct.len(), all.len());
        }
    }
}

#[test]
fn zeta_trivial_counts() {
    let counts = PointCounts { p: 7, n1: 8, n2: 50 };
    assert_eq!(order_via_zeta(&counts, 2).unwrap(), 50);
    assert_eq!(order_via_zeta(&counts, 3), Err(Error::UnsupportedGenus(3)));
    let odd = PointCounts { p: 7, n1: 8, n2: 51 };
    assert_eq!(order_via_zeta(&odd, 2), Err(Error::InconsistentCounts(7)));
}

#[test]
fn albanese_injective() {
    for curve in curves() {
        for p in curve.good_primes(3, 20) {
            let jac = JacobianFp::over_prime(&curve, p).unwrap();
            let pts = brute_points(&curve, p);
            let images: BTreeSet<_> = pts.iter().map(|pt| jac.albanese(pt).unwrap()).collect();
            assert_eq!(images.len(), pts.len());
        }
    }
}

#[test]
fn reduction_is_a_homomorphism() {
    let curve = CurveSpec::new(vec![1, 0, 0, 0, 0, 1]).unwrap();
    let jq = JacobianQ::over_rationals(&curve);
    let pts: Vec<_> = curve
        .rational_points_up_to(3)
        .into_iter()
        .map(|pt| jq.albanese(&pt).unwrap())
        .collect();
    assert!(pts.len() >= 3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let coeffs: Vec<i64> = pts.iter().map(|_| rng.random_range(-2..=2)).collect();
        let d1 = jq.linear_combination(&coeffs, &pts).unwrap();
        let coeffs: Vec<i64> = pts.iter().map(|_| rng.random_range(-2..=2)).collect();
        let d2 = jq.linear_combination(&coeffs, &pts).unwrap();
        let sum = jq.add(&d1, &d2).unwrap();
        for p in [3u64, 7, 11, 13] {
            let jp = JacobianFp::over_prime(&curve, p).unwrap();
            let (Ok(r1), Ok(r2), Ok(rs)) = (
                jp.reduce_generator(&d1),
                jp.reduce_generator(&d2),
                jp.reduce_generator(&sum),
            ) else {
                continue;
            };
            assert_eq!(jp.add(&r1, &r2).unwrap(), rs);
        }
    }
    let jp = JacobianFp::over_prime(&curve, 7).unwrap();
    assert_eq!(jp.reduce_generator(&jq.identity()).unwrap(), jp.identity());
}

#[test]
fn rational_point_reduction_commutes_with_albanese() {
    let curve = CurveSpec::new(vec![1, 0, 0, 0, 0, 1]).unwrap();
    let jq = JacobianQ::over_rationals(&curve);
    let jp = JacobianFp::over_prime(&curve, 7).unwrap();
    let f = *jp.field();
    let d = jq
        .albanese(&Point::Affine {
            x: BigRational::from_integer(0.into()),
            y: BigRational::from_integer((-1).into()),
        })
        .unwrap();
    let expected = jp
        .albanese(&Point::Affine {
            x: f.elem(0),
            y: f.elem(-1),
        })
        .unwrap();
    assert_eq!(jp.reduce_generator(&d).unwrap(), expected);
    let half = MumfordDivisor {
        u: rational_poly(&[(-1, 7), (1, 1)]),
        v: rational_poly(&[(1, 1)]),
    };
    assert_eq!(jp.reduce_generator(&half), Err(Error::DenominatorAtP(7)));
}

#[test]
fn structure_small_examples() {
    let c = CurveSpec::new(vec![1, 0, 0, 1]).unwrap();
    let jac = JacobianFp::over_prime(&c, 5).unwrap();
    let gs = GroupStructure::compute(&jac, 6).unwrap();
    assert_eq!(gs.invariant_factors(), [6]);
    // a wrong order is detected rather than accepted
    assert!(GroupStructure::compute(&jac, 12).is_err());
    assert!(GroupStructure::compute(&jac, 3).is_err());
}

fn check_structure(curve: &CurveSpec, p: u64, rng: &mut ChaCha8Rng) {
    let jac = JacobianFp::over_prime(curve, p).unwrap();
    let n = jacobian_order(curve, p).unwrap();
    let gs = GroupStructure::compute(&jac, n).unwrap();
    let inv = gs.invariant_factors();
    assert_eq!(inv.iter().product::<u64>(), n);
    assert!(inv.windows(2).all(|w| w[1] % w[0] == 0));
    assert!(inv.len() <= 2 * curve.genus());
    assert!(inv.iter().all(|&m| m > 1));
    for (g, &m) in gs.basis().iter().zip(inv) {
        assert_eq!(gs.element_order(&jac, g).unwrap(), m);
    }
    for _ in 0..100 {
        let e: Vec<u64> = inv.iter().map(|&m| rng.random_range(0..m)).collect();
        let x = gs.element(&jac, &e).unwrap();
        assert_eq!(gs.dlog(&jac, &x).unwrap(), e);
        assert_eq!(gs.coords_of_index(gs.linear_index(&e)), e);
    }
    if n <= 1_000 {
        // element-order statistics against those of the claimed abstract group
        let all = enumerate_jacobian(&jac).unwrap();
        let mut seen = BTreeSet::new();
        let mut counts = alloc::collections::BTreeMap::new();
        for d in &all {
            let c = gs.dlog(&jac, d).unwrap();
            assert_eq!(gs.element(&jac, &c).unwrap(), *d);
            assert!(seen.insert(gs.linear_index(&c)));
            *counts.entry(gs.element_order(&jac, d).unwrap()).or_insert(0u64) += 1;
            assert!(jac.is_identity(&jac.scalar_mul_u64(gs.exponent(), d).unwrap()));
        }
        let mut expected = alloc::collections::BTreeMap::new();
        for idx in 0..n {
            let c = gs.coords_of_index(idx);
            let ord = c
                .iter()
                .zip(inv)
                .map(|(&ci, &m)| m / crate::arith::gcd(ci, m))
                .fold(1, crate::arith::lcm);
            *expected.entry(ord).or_insert(0u64) += 1;
        }
        assert_eq!(counts, expected);
    }
    assert_eq!(gs.factorization(), &factorize(n).unwrap());
}

#[test]
fn structure_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for curve in curves() {
        for p in curve.good_primes(3, 60) {
            check_structure(&curve, p, &mut rng);
        }
    }
}

#[test]
fn structure_noncyclic() {
    // y^2 = x^3 - x has full 2-torsion, so J(F_p) is never cyclic
    let curve = CurveSpec::new(vec![0, -1, 0, 1]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for p in curve.good_primes(3, 60) {
        let jac = JacobianFp::over_prime(&curve, p).unwrap();
        let gs = GroupStructure::compute(&jac, jacobian_order(&curve, p).unwrap()).unwrap();
        assert_eq!(gs.rank(), 2);
        assert_eq!(gs.invariant_factors()[0] % 2, 0);
        check_structure(&curve, p, &mut rng);
    }
    // genus 2 with a rank-4 2-torsion subgroup: f splits completely
    let curve = CurveSpec::new(vec![0, 4, 0, -5, 0, 1]).unwrap();
    for p in curve.good_primes(3, 40) {
        check_structure(&curve, p, &mut rng);
    }
}

#[test]
fn large_prime_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let curve = CurveSpec::new(vec![1, -1, 0, 0, 0, 1]).unwrap();
    for p in [1009u64, 2003, 4001] {
        check_structure(&curve, p, &mut rng);
    }
}

#[test]
fn genus_three_enumeration_order() {
    let curve = CurveSpec::new(vec![1, 0, 0, 0, 0, 0, 0, 1]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for p in [5u64, 11] {
        let n = jacobian_order(&curve, p).unwrap();
        assert!(within_hasse_weil(n, p, 3));
        check_structure(&curve, p, &mut rng);
    }
}
