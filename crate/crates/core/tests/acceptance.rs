//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num::{BigInt, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use relhyp::constants::{
    bound_hyperbolic, bound_parabolic, bound_relative, estimate_bcp, estimate_delta, estimate_epsilon,
    fit_quadratic_nonneg, parse_rational, rat, ExtNat, HypConstants, Rational,
};
use relhyp::experiment::{experiment_growth, with_workers, write_csv, ExperimentParams, ExperimentReport};
use relhyp::solver::{parabolic_csp, verify_conjugation, CspOutcome};
use relhyp::{
    ball_x, classify, free_product_conjugacy, parse_element, ClassKind, GroupSpec, NormalForm, Syllable,
    DEFAULT_ENUMERATION_CAP,
};

const SEED: u64 = 20_240_601;
const CAP: usize = DEFAULT_ENUMERATION_CAP;

struct Shared {
    consts: HypConstants,
    report: ExperimentReport,
}

fn params() -> ExperimentParams {
    ExperimentParams { trials: 200, l_max: 6, x_max: 4, cap: 8, seed: SEED, timing: false }
}

fn measured_constants() -> HypConstants {
    let g = GroupSpec::z2_star_z();
    let delta = estimate_delta(&g, 4, 8, CAP).unwrap();
    let samples: Vec<(u64, Rational)> =
        (0..=4u64).map(|k| (k, estimate_epsilon(&g, k as usize, 2, CAP).unwrap())).collect();
    let eps = fit_quadratic_nonneg(&samples);
    let mut c = HypConstants::configured(delta, eps, rat(2), vec![]).unwrap();
    c.c_bcp = estimate_bcp(&g, 4, 4, CAP).unwrap();
    println!("  measured on Z^2*Z: delta={} eps=({}, {}, {}) c_bcp={}", c.delta, c.eps_coeffs[0], c.eps_coeffs[1], c.eps_coeffs[2], c.c_bcp);
    c
}

fn c1_word_problem() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = 0;
    for spec in [GroupSpec::free_group(), GroupSpec::z2_star_z(), GroupSpec::z2_star_z2()] {
        for _ in 0..100_000 {
            let w = random_word(&spec, &mut rng, 30);
            let nf = w.normalize(&spec);
            assert_eq!(blocks_of(&nf), naive_reduce(&spec, &w), "normal form disagrees on {w:?}");
            let other = if rng.gen_bool(0.5) {
                let k = rng.gen_range(0..=w.len());
                let filler = random_word(&spec, &mut rng, 4);
                let mut letters = w.letters.clone();
                let inserted = concat(&[&filler, &inverse_word(&filler)]);
                letters.splice(k..k, inserted.letters);
                relhyp::Word::new(letters)
            } else {
                random_word(&spec, &mut rng, 30)
            };
            let same_nf = nf == other.normalize(&spec);
            let same_naive = naive_reduce(&spec, &w) == naive_reduce(&spec, &other);
            assert_eq!(same_nf, same_naive, "equality disagrees on {w:?} / {other:?}");
            checked += 1;
        }
    }
    format!("{checked} words agree with the naive reducer")
}

fn c2_metrics() -> String {
    let g = GroupSpec::z2_star_z();
    let xs = bfs(&x_step_blocks(&g), 6, |_| true);
    let ball = ball_x(&g, 6, CAP).unwrap();
    assert_eq!(ball.len(), xs.len());
    for (blocks, &d) in &xs {
        let nf = from_blocks(blocks);
        assert_eq!(nf.x_length() as usize, d, "x_length of {blocks:?}");
        assert!(ball.contains(&nf));
    }
    let rel = bfs(&rel_step_blocks(&g, 12), 6, |h| x_len(h) <= 6);
    assert_eq!(rel.len(), xs.len());
    for (blocks, &d) in &rel {
        assert_eq!(from_blocks(blocks).rel_length(&g) as usize, d, "rel_length of {blocks:?}");
    }
    format!("{} elements checked in both metrics", xs.len())
}

fn c3_tree() -> String {
    let f = GroupSpec::free_group();
    for r in 2..=4 {
        assert_eq!(estimate_delta(&f, r, 8, CAP).unwrap(), rat(0), "radius {r}");
    }
    "delta = 0 at radii 2, 3, 4".into()
}

fn c4_solver(shared: &Shared) -> String {
    let g = GroupSpec::z2_star_z();
    let mut lens = [0usize; 5];
    for r in &shared.report.records {
        assert_eq!(r.solver, "found", "trial {} solver outcome", r.trial);
        assert_eq!(r.solver_len, r.x_min_len, "trial {}", r.trial);
        let (a, b) = (parse_element(&r.a, &g).unwrap(), parse_element(&r.b, &g).unwrap());
        let x = parse_element(r.x_min.as_ref().unwrap(), &g).unwrap();
        let w = concat(&[&x.inverse().to_word(), &a.to_word(), &x.to_word(), &b.inverse().to_word()]);
        assert!(naive_reduce(&g, &w).is_empty(), "trial {} conjugator fails", r.trial);
        assert!(r.x_min_len.unwrap() <= r.x_planted_len);
        lens[r.x_min_len.unwrap() as usize] += 1;
    }
    format!("200/200 solver minima equal oracle minima; minimal lengths 0..4: {lens:?}")
}

fn c5_middle(shared: &Shared) -> String {
    let total: usize = shared.report.records.iter().map(|r| r.middle_violations).sum();
    assert_eq!(total, 0);
    format!("0 violations with delta = {}", shared.consts.delta)
}

fn c6_components(shared: &Shared) -> String {
    let hyperbolic: Vec<_> = shared.report.records.iter().filter(|r| r.class == ClassKind::Hyperbolic).collect();
    let total: usize = hyperbolic.iter().map(|r| r.component_violations).sum();
    assert_eq!(total, 0);
    format!("0 violations over {} hyperbolic diagrams", hyperbolic.len())
}

fn random_parabolic(spec: &GroupSpec, rng: &mut ChaCha8Rng) -> NormalForm {
    let peripheral: Vec<usize> = spec.peripheral_factors().collect();
    let f = peripheral[rng.gen_range(0..peripheral.len())];
    let v: Vec<i64> = loop {
        let v: Vec<i64> = (0..spec.rank(f)).map(|_| rng.gen_range(-2..=2)).collect();
        if v.iter().any(|&e| e != 0) {
            break v;
        }
    };
    let c = random_word(spec, rng, 3).normalize(spec);
    NormalForm::from_syllables([Syllable::new(f, &v)]).conjugate_by(&c)
}

fn c7_parabolic() -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut found = 0;
    let mut pairs = 0;
    for spec in [GroupSpec::z2_star_z(), GroupSpec::z2_star_z2()] {
        for i in 0..100 {
            let a = random_parabolic(&spec, &mut rng);
            let b = if i % 2 == 0 {
                a.conjugate_by(&random_word(&spec, &mut rng, 4).normalize(&spec))
            } else {
                random_parabolic(&spec, &mut rng)
            };
            assert_eq!(classify(&spec, &a).kind(), ClassKind::Parabolic);
            let out = parabolic_csp(&spec, &a, &b).unwrap();
            let criterion = free_product_conjugacy(&a, &b);
            assert_eq!(out.conjugator().is_some(), criterion.is_some(), "verdicts differ");
            if let CspOutcome::Found { x, .. } = &out {
                assert!(verify_conjugation(&a, x, &b));
                found += 1;
            }
            pairs += 1;
        }
    }
    for delta in ["0", "1/16"] {
        let c = HypConstants::configured(parse_rational(delta).unwrap(), [rat(1), rat(2), rat(3)], rat(2), vec![])
            .unwrap();
        for l in 0..=10 {
            assert_eq!(bound_parabolic(l, &c, 3), bound_hyperbolic(l, &c, 3), "L = {l}");
        }
    }
    format!("{pairs} pairs ({found} conjugate) agree with the free-product criterion; parabolic = hyperbolic bound on L = 0..10")
}

fn to_int(e: ExtNat) -> BigInt {
    match e {
        ExtNat::Finite(n) => BigInt::from(n),
        ExtNat::Infinite => panic!("bound overflowed"),
    }
}

fn degree(values: &[BigInt]) -> usize {
    (0..values.len()).find(|&k| differences(values, k + 1).iter().all(Zero::is_zero)).expect("polynomial")
}

fn c8_bounds() -> String {
    for x_count in 1..=8 {
        let c = HypConstants::configured(rat(0), [rat(0), rat(0), rat(0)], rat(2), vec![]).unwrap();
        for l in 0..=10u64 {
            assert_eq!(bound_relative(l, &c, x_count), ExtNat::from_u64(2 * l + 1));
        }
    }
    let mut degrees = Vec::new();
    for delta in ["0", "1/4"] {
        let d = parse_rational(delta).unwrap();
        let hyper = HypConstants::configured(d.clone(), [rat(1), rat(1), rat(1)], rat(2), vec![]).unwrap();
        let values: Vec<BigInt> = (0..=12).map(|l| to_int(bound_hyperbolic(l, &hyper, 3))).collect();
        assert_eq!(degree(&values), 3, "hyperbolic degree at delta {delta}");
        let polys: [(usize, Vec<i64>); 3] = [(0, vec![0]), (1, vec![1, 2]), (2, vec![0, 1, 1])];
        for (n, poly) in polys {
            let c = HypConstants::configured(d.clone(), [rat(1), rat(1), rat(1)], rat(2), poly.into_iter().map(rat).collect())
                .unwrap();
            let values: Vec<BigInt> = (0..=12).map(|l| to_int(bound_parabolic(l, &c, 3))).collect();
            let deg = degree(&values);
            assert_eq!(deg, 3.max(2 * n + 1), "parabolic degree for n = {n} at delta {delta}");
            degrees.push((n, deg));
        }
    }
    format!("2L+1 collapse holds for |X| = 1..8; hyperbolic degree 3; parabolic (n, degree) = {degrees:?}")
}

fn c9_bcp() -> String {
    let g = GroupSpec::z2_star_z();
    let small = estimate_bcp(&g, 5, 6, CAP).unwrap();
    let large = estimate_bcp(&g, 6, 8, CAP).unwrap();
    assert_eq!(small, large);
    format!("c(1) = {small} at (5, 6) and (6, 8)")
}

fn c10_determinism(shared: &Shared) -> String {
    let g = GroupSpec::z2_star_z();
    let mut one = Vec::new();
    write_csv(&shared.report.records, &mut one).unwrap();
    let four = with_workers(4, || experiment_growth(&g, &shared.consts, &params(), CAP)).unwrap().unwrap();
    let mut other = Vec::new();
    write_csv(&four.records, &mut other).unwrap();
    assert_eq!(one, other);
    format!("{} CSV bytes identical for 1 and 4 workers", one.len())
}

fn run(id: &str, results: &mut Vec<bool>, f: impl FnOnce() -> String) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f));
    let secs = start.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!("PASS criterion {id} ({secs:.1}s): {detail}");
            results.push(true);
        }
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            println!("FAIL criterion {id} ({secs:.1}s): {msg}");
            results.push(false);
        }
    }
}

fn main() {
    std::panic::set_hook(Box::new(|_| {}));
    let mut results = Vec::new();
    run("1 word problem", &mut results, c1_word_problem);
    run("2 metrics", &mut results, c2_metrics);
    run("3 tree delta", &mut results, c3_tree);

    let consts = measured_constants();
    let g = GroupSpec::z2_star_z();
    let report = with_workers(1, || experiment_growth(&g, &consts, &params(), CAP)).unwrap().unwrap();
    let shared = Shared { consts, report };
    run("4 solver = oracle", &mut results, || c4_solver(&shared));
    run("5 middle closeness", &mut results, || c5_middle(&shared));
    run("6 component bounds", &mut results, || c6_components(&shared));
    run("7 parabolic", &mut results, c7_parabolic);
    run("8 bound formulas", &mut results, c8_bounds);
    run("9 bcp stabilisation", &mut results, c9_bcp);
    run("10 determinism", &mut results, || c10_determinism(&shared));

    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
