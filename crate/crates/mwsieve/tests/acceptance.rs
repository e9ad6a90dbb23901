//! Acceptance checks. Prints one line per criterion and exits nonzero when a
//! criterion that is expected to hold fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use mwsieve::certificate::Certificate;
use mwsieve::format::{GeneratorLine, GeneratorTag};
use mwsieve_core::heuristic::{
    dickman_rho, estimate_fixed_element, lcm_of_orders, smooth_fraction, summarize, trial_hit, DickmanTable,
    SubsetModel, DEFAULT_STEP,
};
use mwsieve_core::jacobian::{enumerate_jacobian, jacobian_order, order_via_zeta, rational_poly, within_hasse_weil};
use mwsieve_core::sieve::{
    certify, certify_local, local_data, run_scharaschkin, run_sieve, select_primes, AbstractGroup, GeneratorSet,
    PrimeLocalData, PrimeSelection, SieveConfig,
};
use mwsieve_core::{CurveSpec, Error, JacobianFp, JacobianQ, MumfordDivisor, Point};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type DivisorQ = MumfordDivisor<BigRational>;

const GENUS_ONE: [&[i64]; 6] = [
    &[1, 0, 0, 1],
    &[-2, 0, 0, 1],
    &[1, -1, 0, 1],
    &[5, 3, 0, 1],
    &[0, -1, 0, 1],
    &[3, 2, 1, 1],
];

const GENUS_TWO: [&[i64]; 6] = [
    &[1, 0, 0, 0, 0, 1],
    &[1, -1, 0, 0, 0, 1],
    &[1, 1, 1, 0, 0, 1],
    &[1, 0, 1, 0, 0, 1],
    &[2, 0, -1, 1, 0, 1],
    &[0, 4, 0, -5, 0, 1],
];

const GENUS_THREE: &[i64] = &[1, 0, 0, 0, 0, 0, 0, 1];

struct Outcome {
    label: &'static str,
    pass: bool,
    detail: String,
    /// Failure is expected and documented; does not fail the run.
    known_unattainable: bool,
}

fn outcome(label: &'static str, pass: bool, detail: String) -> Outcome {
    Outcome {
        label,
        pass,
        detail,
        known_unattainable: false,
    }
}

fn curve(c: &[i64]) -> CurveSpec {
    CurveSpec::new(c.to_vec()).unwrap()
}

fn point(x: i64, y: i64) -> DivisorQ {
    MumfordDivisor {
        u: rational_poly(&[(-x, 1), (1, 1)]),
        v: rational_poly(&[(y, 1)]),
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let curves: Vec<&[i64]> = GENUS_ONE.iter().chain(GENUS_TWO.iter()).copied().collect();
    let checks: Vec<(usize, usize)> = curves
        .par_iter()
        .map(|&c| {
            let c = curve(c);
            let mut bad = 0;
            let mut total = 0;
            for p in c.good_primes(3, 50) {
                let zeta = order_via_zeta(&c.point_counts(p).unwrap(), c.genus()).unwrap();
                let jac = JacobianFp::over_prime(&c, p).unwrap();
                let brute = enumerate_jacobian(&jac).unwrap().len() as u64;
                total += 1;
                bad += usize::from(zeta != brute);
            }
            (total, bad)
        })
        .collect();
    let total: usize = checks.iter().map(|c| c.0).sum();
    let bad: usize = checks.iter().map(|c| c.1).sum();
    let secs = start.elapsed().as_secs_f64();
    outcome(
        "1",
        bad == 0 && secs <= 60.0,
        format!(
            "{} genus-1 and {} genus-2 curves, {total} curve-prime pairs with p <= 50, {bad} mismatches, {secs:.1}s",
            GENUS_ONE.len(),
            GENUS_TWO.len()
        ),
    )
}

fn criterion_2() -> Outcome {
    let pairs: Vec<(&[i64], u64)> = vec![
        (GENUS_ONE[0], 7),
        (GENUS_ONE[2], 13),
        (GENUS_TWO[0], 7),
        (GENUS_TWO[0], 13),
        (GENUS_TWO[1], 11),
        (GENUS_TWO[2], 17),
        (GENUS_TWO[5], 11),
        (GENUS_THREE, 3),
        (GENUS_THREE, 5),
    ];
    let failures: Vec<usize> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, &(c, p))| {
            let c = curve(c);
            let jac = JacobianFp::over_prime(&c, p).unwrap();
            let all = enumerate_jacobian(&jac).unwrap();
            let n = all.len() as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + i as u64);
            let mut pick = || all[rng.random_range(0..all.len())].clone();
            let zero = jac.identity();
            let mut bad = 0;
            for _ in 0..1000 {
                let (a, b, d) = (pick(), pick(), pick());
                let ab_d = jac.add(&jac.add(&a, &b).unwrap(), &d).unwrap();
                let a_bd = jac.add(&a, &jac.add(&b, &d).unwrap()).unwrap();
                let ok = ab_d == a_bd
                    && jac.add(&a, &zero).unwrap() == a
                    && jac.is_identity(&jac.add(&a, &jac.neg(&a)).unwrap())
                    && jac.add(&a, &b).unwrap() == jac.add(&b, &a).unwrap();
                bad += usize::from(!ok);
            }
            for _ in 0..100 {
                bad += usize::from(!jac.is_identity(&jac.scalar_mul_u64(n, &pick()).unwrap()));
            }
            bad
        })
        .collect();
    let bad: usize = failures.iter().sum();
    outcome(
        "2",
        bad == 0,
        format!(
            "{} curve-prime pairs (genus 1 to 3), 1000 triples and 100 scalar checks each, {bad} failures",
            pairs.len()
        ),
    )
}

fn criterion_3() -> Outcome {
    let mut jobs: Vec<(&[i64], u64)> = Vec::new();
    for &c in GENUS_ONE.iter().chain(GENUS_TWO.iter()) {
        for p in curve(c).good_primes(3, 200) {
            jobs.push((c, p));
        }
    }
    for p in curve(GENUS_THREE).good_primes(3, 11) {
        jobs.push((GENUS_THREE, p));
    }
    let bad: usize = jobs
        .par_iter()
        .map(|&(c, p)| {
            let c = curve(c);
            let counts = c.point_counts(p).unwrap();
            let order = jacobian_order(&c, p).unwrap();
            usize::from(!(counts.satisfies_weil(c.genus()) && within_hasse_weil(order, p, c.genus())))
        })
        .sum();
    outcome(
        "3",
        bad == 0,
        format!(
            "{} (p, N1, N2, #J) tuples over genus 1 to 3, {bad} violations",
            jobs.len()
        ),
    )
}

/// Coefficient vectors of the known rational points on the free generators,
/// found with `|k_i| <= bound`, and the torsion index of each.
fn known_pairs(c: &CurveSpec, gens: &GeneratorSet, bound: i64) -> Vec<(usize, Vec<i64>)> {
    let jq = JacobianQ::over_rationals(c);
    let images: Vec<DivisorQ> = c
        .rational_points_up_to(6)
        .iter()
        .map(|p| jq.albanese(p).unwrap())
        .collect();
    let r = gens.rank();
    let width = 2 * bound + 1;
    let mut out = Vec::new();
    for idx in 0..width.pow(r as u32) {
        let mut rest = idx;
        let k: Vec<i64> = (0..r)
            .map(|_| {
                let d = rest % width - bound;
                rest /= width;
                d
            })
            .collect();
        let base = jq.linear_combination(&k, gens.generators()).unwrap();
        for (t, tor) in gens.torsion_elements().iter().enumerate() {
            if images.contains(&jq.add(&base, tor).unwrap()) {
                out.push((t, k.clone()));
            }
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let cases: Vec<(&[i64], Vec<DivisorQ>, Vec<DivisorQ>)> = vec![
        (&[1, -1, 0, 0, 0, 1], vec![point(0, 1)], vec![]),
        (&[1, 1, 1, 0, 0, 1], vec![point(0, 1)], vec![]),
        (&[1, 0, 1, 0, 0, 1], vec![point(0, 1)], vec![]),
        (&[1, 0, 0, 0, 0, 1], vec![], vec![point(0, 1), point(-1, 0)]),
    ];
    let results: Vec<Result<(usize, usize, usize), String>> = cases
        .into_par_iter()
        .map(|(coeffs, free, torsion)| {
            let c = curve(coeffs);
            let gens = GeneratorSet::new(&c, free, torsion, None).unwrap();
            let known = known_pairs(&c, &gens, 8);
            if known.len() < 3 {
                return Err(format!("{coeffs:?}: only {} known points", known.len()));
            }
            // S(B) for B in [n, n + 1) is a prefix of the list for p < (n + 1)^2
            let all: Vec<u64> = c.good_primes(3, 31 * 31);
            let orders: BTreeMap<u64, u64> = all.par_iter().map(|&p| (p, jacobian_order(&c, p).unwrap())).collect();
            let lists: Vec<Vec<u64>> = (2..=30u64)
                .map(|n| {
                    all.iter()
                        .copied()
                        .filter(|&p| p < (n + 1) * (n + 1))
                        .filter(|p| mwsieve_core::heuristic::is_smooth(orders[p], n as f64).unwrap())
                        .collect()
                })
                .collect();
            let mut needed: Vec<u64> = lists.iter().flatten().copied().collect();
            needed.sort_unstable();
            needed.dedup();
            let data: BTreeMap<u64, mwsieve_core::Result<PrimeLocalData>> =
                needed.par_iter().map(|&p| (p, local_data(&c, &gens, p))).collect();
            let mut steps = 0;
            let mut max_survivors = 0;
            for list in &lists {
                let mut lost = None;
                let report = run_sieve(
                    gens.rank(),
                    gens.torsion_elements().len(),
                    list.iter().map(|p| data[p].clone()),
                    &SieveConfig::default(),
                    |state| {
                        steps += 1;
                        max_survivors = max_survivors.max(state.survivor_count());
                        for (t, k) in &known {
                            if !state.contains_pair(*t, k) {
                                lost.get_or_insert((t, k.clone()));
                            }
                        }
                    },
                )
                .map_err(|e| format!("{coeffs:?}: {e}"))?;
                if let Some((t, k)) = lost {
                    return Err(format!("{coeffs:?}: point ({t}, {k:?}) lost"));
                }
                if report.verdict.is_obstructed() {
                    return Err(format!("{coeffs:?}: obstructed"));
                }
            }
            Ok((known.len(), steps, max_survivors))
        })
        .collect();
    let mut detail = Vec::new();
    let mut pass = true;
    for r in &results {
        match r {
            Ok((k, s, m)) => detail.push(format!("{k} points/{s} steps/max {m} survivors")),
            Err(e) => {
                pass = false;
                detail.push(e.clone());
            }
        }
    }
    outcome(
        "4",
        pass,
        format!(
            "4 curves, every B <= 30, never obstructed, known classes kept: {}",
            detail.join("; ")
        ),
    )
}

fn random_synthetic(rng: &mut ChaCha8Rng, p: u64, r: usize) -> PrimeLocalData {
    let mut factors = vec![rng.random_range(2..=6u64)];
    if rng.random_bool(0.5) {
        factors.push(factors[0] * rng.random_range(1..=3u64));
    }
    let group = AbstractGroup::new(factors.clone()).unwrap();
    let phi: Vec<Vec<u64>> = (0..r)
        .map(|_| factors.iter().map(|&m| rng.random_range(0..m)).collect())
        .collect();
    let image: Vec<Vec<u64>> = (0..group.order() as usize)
        .filter(|_| rng.random_bool(0.3))
        .map(|i| group.coords(i))
        .collect();
    PrimeLocalData::synthetic(p, factors, phi, Vec::new(), None, image).unwrap()
}

/// The coset family `kG + <mG>` on `y^2 = x^5 + x^2 + x + 1`.
fn coset_family() -> (CurveSpec, DivisorQ, Vec<u64>) {
    let c = curve(&[1, 1, 1, 0, 0, 1]);
    let g = point(0, 1);
    let primes: Vec<u64> = c
        .good_primes(3, 200)
        .into_iter()
        .filter(|&p| {
            let jac = JacobianFp::over_prime(&c, p).unwrap();
            let d = jac.reduce_generator(&g).unwrap();
            jac.is_identity(&jac.scalar_mul_u64(840, &d).unwrap())
        })
        .collect();
    (c, g, primes)
}

fn criterion_5() -> (Outcome, Outcome) {
    let mut agree = 0;
    let mut disagree = Vec::new();
    let mut out_of_cap = 0;
    let mut real_obstructed = 0;
    let mut synthetic_r0 = 0;

    let (c, g, primes) = coset_family();
    let jq = JacobianQ::over_rationals(&c);
    let mut certificate_ok = false;
    for m in 2..=8i64 {
        let mg = jq.scalar_mul(m, &g).unwrap();
        for k in 0..m {
            let kg = jq.scalar_mul(k, &g).unwrap();
            let gens = GeneratorSet::new(&c, vec![mg.clone()], vec![], Some(kg.clone())).unwrap();
            let report = run_scharaschkin(
                &c,
                &gens,
                &PrimeSelection::Explicit(primes.clone()),
                &SieveConfig::default(),
            )
            .unwrap();
            match certify(&c, &gens, report.state.primes_used()) {
                Ok(brute) if brute == report.verdict.is_obstructed() => agree += 1,
                Ok(_) => disagree.push(format!("coset m={m} k={k}")),
                Err(Error::TooLarge { .. }) => out_of_cap += 1,
                Err(e) => disagree.push(format!("coset m={m} k={k}: {e}")),
            }
            real_obstructed += usize::from(report.verdict.is_obstructed());
            if (m, k) == (4, 2) {
                let lines = [
                    GeneratorLine {
                        tag: GeneratorTag::Free,
                        divisor: mg.clone(),
                    },
                    GeneratorLine {
                        tag: GeneratorTag::Offset,
                        divisor: kg,
                    },
                ];
                if let Some(cert) = Certificate::from_report(&c, &lines, &report) {
                    let text = cert.to_text();
                    let parsed = Certificate::parse(&text, std::path::Path::new("cert")).unwrap();
                    let v = parsed.verify().unwrap();
                    certificate_ok = v.valid && v.brute_force == Some(true);
                }
            }
        }
    }

    // plain subgroups on curves with points, and torsion only on x^5 + 1
    let plain: Vec<(&[i64], Vec<DivisorQ>, Vec<DivisorQ>)> = vec![
        (&[1, -1, 0, 0, 0, 1], vec![point(0, 1)], vec![]),
        (&[1, 0, 1, 0, 0, 1], vec![point(0, 1)], vec![]),
        (&[1, 0, 0, 0, 0, 1], vec![], vec![point(0, 1), point(-1, 0)]),
    ];
    for (coeffs, free, torsion) in plain {
        let c = curve(coeffs);
        let gens = GeneratorSet::new(&c, free, torsion, None).unwrap();
        for b in [6.0, 10.0] {
            let report = run_scharaschkin(
                &c,
                &gens,
                &PrimeSelection::Bound { b, cap: 100 },
                &SieveConfig::default(),
            )
            .unwrap();
            match certify(&c, &gens, report.state.primes_used()) {
                Ok(brute) if brute == report.verdict.is_obstructed() => agree += 1,
                Ok(_) => disagree.push(format!("{coeffs:?} B={b}")),
                Err(Error::TooLarge { .. }) => out_of_cap += 1,
                Err(e) => disagree.push(format!("{coeffs:?} B={b}: {e}")),
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut synthetic_obstructed = 0;
    for case in 0..120 {
        let r = case % 3;
        let data: Vec<PrimeLocalData> = (0..1 + case % 4)
            .map(|i| random_synthetic(&mut rng, [3, 5, 7, 11][i], r))
            .collect();
        let config = SieveConfig {
            stop_at_obstruction: false,
            ..SieveConfig::default()
        };
        let sieve = run_sieve(r, 1, data.iter().cloned().map(Ok), &config, |_| {}).unwrap();
        let brute = certify_local(&data).unwrap();
        if brute == sieve.verdict.is_obstructed() {
            agree += 1;
            synthetic_r0 += usize::from(r == 0);
            synthetic_obstructed += usize::from(brute);
        } else {
            disagree.push(format!("synthetic case {case}"));
        }
    }

    let a = outcome(
        "5a",
        disagree.is_empty() && agree >= 20 && synthetic_r0 > 0 && certificate_ok,
        format!(
            "{agree} instances agree ({synthetic_r0} synthetic r = 0, {synthetic_obstructed} synthetic obstructed), \
             {} disagree, {out_of_cap} beyond the brute-force cap; {real_obstructed} obstructed cosets kG + <mG> on \
             y^2 = x^5 + x^2 + x + 1, certificate for 2G + <4G> re-verified: {certificate_ok}",
            disagree.len()
        ),
    );

    // A curve with no rational point at all. Every model searched here has
    // odd degree, so the point at infinity is always rational.
    let mut searched = 0;
    let mut pointless = 0;
    let mut affine_free = 0;
    let range = -1i64..=1;
    for a0 in range.clone() {
        for a1 in range.clone() {
            for a2 in range.clone() {
                for a3 in range.clone() {
                    for a4 in range.clone() {
                        let Ok(c) = CurveSpec::new(vec![a0, a1, a2, a3, a4, 1]) else {
                            continue;
                        };
                        searched += 1;
                        let pts = c.rational_points_up_to(10);
                        pointless += usize::from(pts.is_empty());
                        affine_free += usize::from(pts.iter().all(|p| matches!(p, Point::Infinity)));
                    }
                }
            }
        }
    }
    let b = Outcome {
        label: "5b",
        pass: pointless > 0,
        detail: format!(
            "{pointless} of {searched} small-coefficient genus-2 models have no rational point \
             ({affine_free} have none besides infinity); a pointless curve cannot be given in this model"
        ),
        known_unattainable: true,
    };
    (a, b)
}

fn criterion_6() -> Outcome {
    let c = curve(&[1, -1, 0, 0, 0, 1]);
    let data = |p: u64| (p, jacobian_order(&c, p).unwrap(), c.count_points(p).unwrap());
    let configs: Vec<Vec<(u64, u64, u64)>> = vec![
        vec![data(17)],
        vec![data(7), data(17)],
        vec![data(7), data(17), data(41)],
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (i, groups) in configs.iter().enumerate() {
        let est = estimate_fixed_element(groups, 20_000, 60 + i as u64).unwrap();
        let z = (est.estimate - est.expected) / est.sigma;
        pass &= z.abs() <= 3.0;
        detail.push(format!(
            "S={:?} estimate {:.5} vs {:.5} ({z:+.2} sigma)",
            groups.iter().map(|g| g.0).collect::<Vec<_>>(),
            est.estimate,
            est.expected
        ));
    }
    outcome("6", pass, format!("20000 trials each: {}", detail.join("; ")))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let c = curve(&[1, -1, 0, 0, 0, 1]);
    let gens = GeneratorSet::free(&c, vec![point(0, 1)]).unwrap();
    let trials = 2000;
    let seed = 42;
    let config = SieveConfig::default();
    let mut estimates = Vec::new();
    for b in [6.0, 10.0, 14.0, 18.0] {
        let local: Vec<PrimeLocalData> = select_primes(&c, b, 100)
            .par_iter()
            .filter_map(|&p| local_data(&c, &gens, p).ok())
            .collect();
        let hits = (0..trials)
            .into_par_iter()
            .filter(|&t| trial_hit(&local, 1, 1, t, seed, &SubsetModel::Uniform, &config).unwrap())
            .count();
        estimates.push(summarize(b, &local, 1, trials, hits as u64).unwrap());
    }
    let monotone = estimates
        .windows(2)
        .all(|w| w[1].estimate <= w[0].estimate + 3.0 * (w[0].std_error.powi(2) + w[1].std_error.powi(2)).sqrt());
    let (first, last) = (estimates[0].estimate, estimates[3].estimate);
    let decay = first == 0.0 || last == 0.0 || last <= 0.1 * first;
    let secs = start.elapsed().as_secs_f64();
    let series: Vec<String> = estimates
        .iter()
        .map(|e| format!("B={} |S|={} {:.4}", e.b, e.primes.len(), e.estimate))
        .collect();
    outcome(
        "7",
        monotone && decay && secs <= 600.0,
        format!(
            "y^2 = x^5 - x + 1, r = 1, {trials} coupled trials: {}; non-increasing within 3 sigma: {monotone}, {secs:.1}s",
            series.join(", ")
        ),
    )
}

fn criterion_8() -> Outcome {
    let c = curve(&[1, 0, 0, 0, 0, 1]);
    let s = smooth_fraction(&c, 1000.0, 0.5).unwrap();
    outcome(
        "8",
        s.fraction > 0.0,
        format!(
            "y^2 = x^5 + 1, B = 1000, u = 1/2: {} of {} good primes smooth, fraction {:.4}, rho(4) = {:.6} (informational)",
            s.smooth, s.total, s.fraction, s.rho_baseline
        ),
    )
}

fn criterion_9() -> Outcome {
    let rho2 = dickman_rho(2.0).unwrap();
    let err2 = (rho2 - (1.0 - std::f64::consts::LN_2)).abs();
    let per_unit = (1.0 / DEFAULT_STEP).round() as usize;
    let coarse = DickmanTable::new(per_unit, 5.0).unwrap();
    let fine = DickmanTable::new(2 * per_unit, 5.0).unwrap();
    let max_diff = (0..=500)
        .map(|i| {
            let u = i as f64 / 100.0;
            (coarse.value(u).unwrap() - fine.value(u).unwrap()).abs()
        })
        .fold(0.0, f64::max);
    outcome(
        "9",
        err2 < 1e-6 && max_diff < 1e-6,
        format!("|rho(2) - (1 - ln 2)| = {err2:.2e}, max grid-halving change on [0, 5] = {max_diff:.2e}"),
    )
}

fn criterion_10() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for coeffs in [&[1i64, 0, 0, 0, 0, 1][..], &[1, -1, 0, 0, 0, 1], &[1, 0, 0, 1]] {
        let c = curve(coeffs);
        for b in [10.0, 20.0] {
            let orders: Vec<u64> = select_primes(&c, b, 1000)
                .iter()
                .map(|&p| jacobian_order(&c, p).unwrap())
                .collect();
            let r = lcm_of_orders(&orders, b).unwrap();
            pass &= r.divides;
            detail.push(format!(
                "{coeffs:?} B={b}: |S|={} log L={:.1} divides={}",
                orders.len(),
                r.log_lcm,
                r.divides
            ));
        }
    }
    outcome("10", pass, detail.join("; "))
}

fn main() -> ExitCode {
    let (c5a, c5b) = criterion_5();
    let checks: Vec<Box<dyn Fn() -> Outcome>> = vec![
        Box::new(criterion_1),
        Box::new(criterion_2),
        Box::new(criterion_3),
        Box::new(criterion_4),
    ];
    let mut results: Vec<Outcome> = checks.iter().map(|f| f()).collect();
    results.push(c5a);
    results.push(c5b);
    for f in [criterion_6, criterion_7, criterion_8, criterion_9, criterion_10] {
        results.push(f());
    }
    let mut failed = 0;
    for r in &results {
        let status = match (r.pass, r.known_unattainable) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known unattainable, see decisions ledger)",
            (false, false) => "FAIL",
        };
        println!("criterion {}: {status}: {}", r.label, r.detail);
        failed += usize::from(!r.pass && !r.known_unattainable);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
