//! Acceptance suite: one test per shipped guarantee, each printing a
//! PASS line (run with `--nocapture` to see them) and holding to its stated
//! time budget.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use diffseq_core::analysis::{
    is_mono_diffsequence, longest_mono, max_gap_count, verify_avoidance, VerifyOutcome,
};
use diffseq_core::bits::Bits;
use diffseq_core::bounds::{
    best_params, certify_bound, closed_form_params, decimal_string, refined_bound, theorem_bound,
    CertifyOutcome,
};
use diffseq_core::coloring::{stretch_block, thue_morse_block, Coloring};
use diffseq_core::dividing::{build_intervals, dividing_coloring, nested_alpha};
use diffseq_core::exactreal::{factorial_alpha, DEFAULT_REFINE_CAP};
use diffseq_core::gapset::{mod2, GapSet};
use diffseq_core::solver::{
    delta, exists_valid_coloring, ExistsOutcome, SolverConfig, SolverStatus,
};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn finish(name: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    assert!(
        elapsed <= budget,
        "{name}: took {elapsed:?}, budget {budget:?}"
    );
    println!("acceptance {name}: PASS ({elapsed:?})");
}

#[test]
fn a1_block_construction() {
    let start = Instant::now();
    assert_eq!(thue_morse_block(1).unwrap().to_string(), "10");
    assert_eq!(thue_morse_block(2).unwrap().to_string(), "1001");
    assert_eq!(stretch_block(3, 1).unwrap().to_string(), "1100001100111100");
    assert_eq!(stretch_block(2, 2).unwrap().to_string(), "1111000000001111");
    finish("block-construction", start, Duration::from_secs(1));
}

#[test]
fn a2_worked_diffsequence() {
    let start = Instant::now();
    let positions = [5u64, 6, 10, 11, 12, 28];
    let stretched = Coloring::stretched_thue_morse(2, 2).unwrap();
    assert!(is_mono_diffsequence(&positions, &GapSet::PowersOfTwo, &stretched).unwrap());
    for &p in &positions {
        assert_eq!(stretched.color_of(p).unwrap(), 0, "position {p}");
    }
    // collapse each position to its run of 2^2 identical bits and drop
    // repeats: the projected sequence must validate under the base block
    let projected: Vec<u64> = positions
        .iter()
        .map(|&p| p.div_ceil(4))
        .scan(0u64, |last, s| {
            let keep = (s != *last).then_some(s);
            *last = s;
            Some(keep)
        })
        .flatten()
        .collect();
    assert_eq!(projected, vec![2, 3, 7]);
    let base = Coloring::thue_morse(2).unwrap();
    assert!(is_mono_diffsequence(&projected, &GapSet::PowersOfTwo, &base).unwrap());
    assert_eq!(base.color_of(2).unwrap(), 0);
    finish("worked-diffsequence", start, Duration::from_secs(1));
}

#[test]
fn a3_gap_count_bounds() {
    let start = Instant::now();
    for t in 2..=8u32 {
        let c = Coloring::thue_morse(t).unwrap();
        let n = 1u64 << (t + 2);
        for m in 0..=(t - 2) {
            let count = max_gap_count(&c, &GapSet::PowersOfTwo, 1 << m, n).unwrap();
            assert!(count <= m as u64 + 1, "t={t} m={m}: {count} gaps");
        }
        let half = max_gap_count(&c, &GapSet::PowersOfTwo, 1 << (t - 1), n).unwrap();
        assert_eq!(half, 0, "t={t}: half-period gaps must never occur");
    }
    // the stretched blocks exclude the scaled half-period gap just the same
    for t in 2..=6u32 {
        for u in 0..=3u32 {
            let c = Coloring::stretched_thue_morse(t, u).unwrap();
            let n = 1u64 << (t + u + 2);
            let gap = 1u64 << (t - 1 + u);
            assert_eq!(
                max_gap_count(&c, &GapSet::PowersOfTwo, gap, n).unwrap(),
                0,
                "t={t} u={u}"
            );
        }
    }
    finish("gap-count-bounds", start, Duration::from_secs(30));
}

#[test]
fn a4_certified_bounds() {
    let start = Instant::now();
    // formula values recomputed by independent integer arithmetic
    assert_eq!(
        refined_bound(8, 4, 0),
        BigInt::from((1i64 << 4) * (8 - 2 - 8 + 4) + 2)
    );
    assert_eq!(
        refined_bound(32, 8, 1),
        BigInt::from((1i64 << 9) * (32 - 4 - 32 + 8) + 4)
    );
    for (k, t, u, expect) in [(8u64, 4u32, 0u32, 34u64), (32, 8, 1, 2052)] {
        match certify_bound(k, t, u).unwrap() {
            CertifyOutcome::Certified(cert) => {
                assert_eq!(cert.delta_lower_bound, expect, "k={k}");
                assert_eq!(cert.n, expect - 1);
                assert!(cert.longest_found < k);
                // independent revalidation from the stored descriptor
                let coloring = cert.coloring.reconstruct().unwrap();
                let (len, witness) = longest_mono(&coloring, &GapSet::PowersOfTwo, cert.n).unwrap();
                assert_eq!(len, cert.longest_found);
                assert!(
                    is_mono_diffsequence(&witness.positions, &GapSet::PowersOfTwo, &coloring)
                        .unwrap()
                );
            }
            CertifyOutcome::Discrepancy { counterexample, .. } => {
                panic!("k={k}: formula refuted by {counterexample:?}")
            }
        }
    }
    finish("certified-bounds", start, Duration::from_secs(10));
}

#[test]
fn a5_exact_delta_values() {
    let start = Instant::now();
    let config = SolverConfig::default();

    // solver agrees with exhaustive enumeration over all 2^n colorings
    let pow2_gaps = |n: u64| GapSet::PowersOfTwo.members_up_to(n);
    for k in 2..=4u64 {
        for n in 1..=20usize {
            let brute = common::brute_exists_valid(&pow2_gaps(n as u64 - 1), k, n).is_some();
            let got = exists_valid_coloring(&GapSet::PowersOfTwo, k, 2, n as u64, &config);
            let found = matches!(got.outcome, ExistsOutcome::Found(_));
            assert_eq!(found, brute, "k={k} n={n}");
        }
    }

    let mut previous = 0u64;
    for k in 1..=5u64 {
        let k_start = Instant::now();
        let result = delta(&GapSet::PowersOfTwo, k, 2, 1 << k, &config);
        let SolverStatus::Found {
            delta: value,
            extremal_coloring,
        } = &result.status
        else {
            panic!("k={k}: expected an exact value, got {:?}", result.status);
        };
        match k {
            1 => assert_eq!(*value, 1),
            2 => {
                // brute-force oracle pins the small case
                let oracle = common::brute_delta(pow2_gaps, 2, 10).unwrap();
                assert_eq!(oracle, 3);
                assert_eq!(*value, 3);
            }
            _ => assert!(
                *value < (1 << k),
                "k={k}: {value} exceeds the doubling upper bound"
            ),
        }
        assert!(*value > previous, "k={k}: not strictly increasing");
        previous = *value;

        // the extremal coloring is genuine evidence
        if *value > 1 {
            let bits = Bits::from_bitstring(extremal_coloring).unwrap();
            match verify_avoidance(
                &Coloring::explicit(bits),
                &GapSet::PowersOfTwo,
                k,
                value - 1,
            )
            .unwrap()
            {
                VerifyOutcome::Certified(cert) => assert_eq!(cert.delta_lower_bound, *value),
                VerifyOutcome::Counterexample(w) => panic!("k={k}: bad evidence {w:?}"),
            }
        }
        assert!(
            k_start.elapsed() <= Duration::from_secs(60),
            "k={k} exceeded its per-value budget"
        );

        // sandwich against the certified analytic bound
        if (3..=5).contains(&k) {
            let (t, u, bound) = best_params(k);
            if bound >= BigInt::from(2) {
                if let CertifyOutcome::Certified(cert) = certify_bound(k, t, u).unwrap() {
                    assert!(
                        cert.delta_lower_bound <= *value,
                        "k={k}: certified {} vs exact {value}",
                        cert.delta_lower_bound
                    );
                }
            }
        }
    }
    finish("exact-delta-values", start, Duration::from_secs(180));
}

#[test]
fn a6_factorial_beatty_coloring() {
    let start = Instant::now();
    // localization of the slope
    for terms in 3..=8u64 {
        let (lo, hi) = factorial_alpha(terms).interval();
        assert!(lo >= rat(7, 16) && hi < rat(1, 2), "terms={terms}");
    }
    // every factorial lands in the avoidance window mod 2
    let alpha = factorial_alpha(3);
    let mut f = 1u64;
    for k in 1..=20u64 {
        f *= k;
        let (x, y) = alpha.scaled_mod2_range(f, DEFAULT_REFINE_CAP).unwrap();
        assert!(
            x >= rat(1, 3) && y < BigRational::one(),
            "k={k}: {f}! * alpha mod 2 in [{x}, {y}]"
        );
    }
    // no monochromatic factorial-diffsequence of length 4 up to a million
    let coloring = Coloring::beatty(factorial_alpha(8), 1);
    match verify_avoidance(&coloring, &GapSet::Factorials, 4, 1_000_000).unwrap() {
        VerifyOutcome::Certified(cert) => {
            assert_eq!(cert.delta_lower_bound, 1_000_001);
            assert!(cert.longest_found < 4);
        }
        VerifyOutcome::Counterexample(w) => panic!("length-4 sequence found: {w:?}"),
    }
    finish("factorial-beatty-coloring", start, Duration::from_secs(60));
}

#[test]
fn a7_dividing_construction() {
    let start = Instant::now();
    let cases: [(GapSet, u32); 2] = [
        (GapSet::Factorials, 2),
        (GapSet::dividing(vec![1], vec![3]).unwrap(), 1),
    ];
    for (g, expect_k) in cases {
        let gen = g.generator().unwrap();
        let na = nested_alpha(&gen, 100_000).unwrap();
        assert_eq!(na.run_bound, expect_k, "{g}");

        // interval bounds hold at every level of the table actually used
        let table = build_intervals(&na.a).unwrap();
        let floor = table.window_floor();
        let one = BigRational::one();
        for b in 1..=table.depth() {
            let (c, d) = table.level(b);
            assert!(*c >= floor && c < d && *d <= one, "{g} level {b}");
        }

        // the chosen slope satisfies every window, exactly
        for &dt in &na.d {
            let v = mod2(&(&na.alpha * BigRational::from_integer(BigInt::from(dt))));
            assert!(
                v >= na.window_floor && v <= one,
                "{g}: d={dt} escapes the window"
            );
        }

        // end to end: the materialized coloring avoids length 2^k + 1
        let dc = dividing_coloring(&g, 100_000).unwrap();
        assert_eq!(dc.run_bound, expect_k);
        assert_eq!(dc.avoid_length, (1u64 << expect_k) + 1);
        match verify_avoidance(&dc.coloring, &g, dc.avoid_length, 100_000).unwrap() {
            VerifyOutcome::Certified(cert) => {
                assert!(cert.longest_found < dc.avoid_length);
                assert_eq!(cert.delta_lower_bound, 100_001);
            }
            VerifyOutcome::Counterexample(w) => {
                panic!("{g}: construction failed with witness {w:?}")
            }
        }
    }
    finish("dividing-construction", start, Duration::from_secs(60));
}

#[test]
fn a8_window_propagation() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let one = BigRational::one();
    for _ in 0..10 {
        let t = rng.gen_range(3..=8usize);
        let mut a = vec![1u64];
        for _ in 1..t {
            a.push(rng.gen_range(2..=9));
        }
        let table = build_intervals(&a).unwrap();
        let products = table.products();
        for _ in 0..10 {
            // sample gamma with d_b * gamma mod 2 inside the level-b interval
            let b = rng.gen_range(1..=t);
            let (c_b, d_b) = table.level(b);
            let j = rng.gen_range(0..=16u64);
            let v = c_b + (d_b - c_b) * rat(j as i64, 16);
            let offset = BigInt::from(rng.gen_range(0..50u32)) * 2;
            let gamma = (BigRational::from_integer(offset) + &v)
                / BigRational::from_integer(products[b - 1].clone());
            let back = mod2(&(&gamma * BigRational::from_integer(products[b - 1].clone())));
            assert!(back >= *c_b && back <= *d_b, "sampling broke");
            // every deeper level keeps its window
            for h in (b + 1)..=t {
                let (c_h, d_h) = table.level(h);
                let v_h = mod2(&(&gamma * BigRational::from_integer(products[h - 1].clone())));
                assert!(
                    v_h >= *c_h && v_h <= *d_h,
                    "a={a:?} b={b} h={h}: {v_h} outside [{c_h}, {d_h}]"
                );
                assert!(*c_h >= table.window_floor() && *d_h <= one);
            }
        }
    }
    finish("window-propagation", start, Duration::from_secs(10));
}

#[test]
fn a9_closed_form_bound() {
    let start = Instant::now();
    // independently computed high-precision reference values
    let tb32 = theorem_bound(32);
    assert!((&tb32.value - rat(24597, 100)).abs() <= rat(1, 100));
    assert_eq!(decimal_string(&tb32.value, 8), "245.96377901");
    let tb50 = theorem_bound(50);
    assert!((&tb50.value - rat(17494, 10)).abs() <= rat(1, 10));
    assert_eq!(decimal_string(&tb50.value, 8), "1749.40565317");
    let million = BigRational::new(BigInt::one(), BigInt::from(1_000_000));
    assert!(tb32.width <= million && tb50.width <= million);

    // the exact optimizer dominates the closed form's parameter point
    for k in 2..=200u64 {
        let (_, _, best) = best_params(k);
        if let Some((t, u)) = closed_form_params(k) {
            assert!(best >= refined_bound(k, t, u), "k={k}");
        }
    }
    finish("closed-form-bound", start, Duration::from_secs(10));
}
