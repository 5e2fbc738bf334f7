use ellprim_core::arith::primes_up_to;
use ellprim_core::bounds::{main_theorem_log_bound, phin_log_check, stewart_quad_bound, stewart_rat_bound};
use ellprim_core::sunit::count_bounded_compositions;
use ellprim_core::{theta_bound, theta_exact, FrobeniusParams, Interval, IteratedLog, SUnitInstance, ThetaVariant, Verdict};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Integer};

/// Θ(x, S) by marking S-smooth integers in [1, x].
fn sieve_theta(x: u64, primes: &[u64]) -> u64 {
    let mut rest: Vec<u64> = (0..=x).collect();
    for &p in primes {
        let mut m = p;
        while m <= x {
            while rest[m as usize] % p == 0 {
                rest[m as usize] /= p;
            }
            m += p;
        }
    }
    (1..=x).filter(|&n| rest[n as usize] == 1).count() as u64
}

fn inst(x: f64, primes: &[u64]) -> SUnitInstance {
    SUnitInstance::new(x, primes.to_vec()).unwrap()
}

#[test]
fn theta_matches_the_sieve() {
    let first = primes_up_to(71);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..40 {
        let x: u64 = rng.gen_range(1..=200_000);
        let k = rng.gen_range(0..=first.len());
        let s: Vec<u64> = first.choose_multiple(&mut rng, k).copied().collect();
        assert_eq!(theta_exact(&inst(x as f64, &s)).unwrap(), sieve_theta(x, &s), "x={x} S={s:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn theta_is_monotone(x in 1u64..10_000_000, extra in 0usize..30, picks in proptest::collection::vec(0usize..30, 0..8)) {
        let first = primes_up_to(113);
        let mut s: Vec<u64> = picks.iter().map(|&i| first[i]).collect();
        s.sort_unstable();
        s.dedup();
        let base = theta_exact(&inst(x as f64, &s)).unwrap();
        prop_assert!(theta_exact(&inst((x + 1) as f64, &s)).unwrap() >= base);
        prop_assert!(theta_exact(&inst(2.0 * x as f64, &s)).unwrap() >= base);
        let mut bigger = s.clone();
        bigger.push(first[extra]);
        prop_assert!(theta_exact(&inst(x as f64, &bigger)).unwrap() >= base);
    }

    #[test]
    fn theta_is_dominated_by_each_applicable_bound(log_x in 1.1f64..27.6, picks in proptest::collection::vec(0usize..200, 0..12)) {
        let first = primes_up_to(1223);
        let x = log_x.exp().floor();
        let s: Vec<u64> = picks.iter().map(|&i| first[i]).collect();
        let instance = inst(x, &s);
        let exact = theta_exact(&instance).unwrap();
        for variant in ThetaVariant::ALL {
            if variant.applies_to(&instance) {
                let bound = ellprim_core::sunit::theta_bound_interval(&instance, variant, 128).unwrap();
                prop_assert_eq!(Interval::from_int(&Integer::from(exact), 128).le(&bound), Verdict::Holds);
            }
        }
    }

    #[test]
    fn iterated_log_order_is_total_and_transitive(
        a in (0u32..4, -1e6f64..1e12), b in (0u32..4, -1e6f64..1e12), c in (0u32..4, -1e6f64..1e12),
    ) {
        let (a, b, c) = (IteratedLog::new(a.0, a.1), IteratedLog::new(b.0, b.1), IteratedLog::new(c.0, c.1));
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
        prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        if let (Some(x), Some(y)) = (a.to_f64(), b.to_f64()) {
            prop_assert_eq!(a.partial_cmp(&b), x.partial_cmp(&y));
        }
    }

    #[test]
    fn stewart_bounds_agree_with_a_direct_evaluation(
        log_norm in 1.1f64..200.0, d in 1u32..6, h in 0.0f64..50.0, n in 1u64..1_000_000, p in 3u64..1_000_000_000,
    ) {
        let prec = 256;
        let f = |x: f64| Float::with_val(prec, x);
        let norm = f(log_norm).exp();
        let log_star_n = f(n as f64).ln().max(&f(1.0));
        let oracle = {
            let ln = Float::with_val(prec, norm.ln_ref());
            let damp = (Float::with_val(prec, -2) / (1000 * d) * &ln / Float::with_val(prec, ln.ln_ref())).exp();
            Float::with_val(prec, &norm * damp) * f(h) * &log_star_n
        };
        let norm_iv = Interval::from_f64(norm.to_f64(), 128);
        let got = stewart_rat_bound(&norm_iv, d, &Interval::from_f64(h, 128), n).unwrap();
        // the interval used the f64 rounding of the norm; redo the oracle there
        let oracle_at = {
            let nf = f(norm.to_f64());
            let ln = Float::with_val(prec, nf.ln_ref());
            let damp = (Float::with_val(prec, -2) / (1000 * d) * &ln / Float::with_val(prec, ln.ln_ref())).exp();
            nf * damp * f(h) * &log_star_n
        };
        let mid = got.mid_f64();
        prop_assert!((mid - oracle_at.to_f64()).abs() <= 1e-12 * oracle_at.to_f64().abs() + 1e-300);
        prop_assert!(got.lo() <= &oracle_at && &oracle_at <= got.hi());
        prop_assert!((oracle.to_f64() - mid).abs() <= 1e-12 * mid.abs() + 1e-300);
        let doubled = stewart_rat_bound(&norm_iv, d, &Interval::from_f64(2.0 * h, 128), n).unwrap();
        prop_assert!(got.le(&doubled) != Verdict::Violated);

        let pz = Integer::from(p);
        let quad = stewart_quad_bound(&pz, &Interval::from_f64(h, 128), n).unwrap();
        let quad_oracle = {
            let pf = f(p as f64);
            let ln = Float::with_val(prec, pf.ln_ref());
            let damp = (Float::with_val(prec, -1) / 1000u32 * &ln / Float::with_val(prec, ln.ln_ref())).exp();
            pf * damp * f(h) * &log_star_n
        };
        prop_assert!(quad.lo() <= &quad_oracle && &quad_oracle <= quad.hi());
        let more = stewart_quad_bound(&pz, &Interval::from_f64(h + 1.0, 128), n).unwrap();
        prop_assert_eq!(quad.le(&more), Verdict::Holds);
    }
}

#[test]
fn main_bound_exceeds_log_n_and_is_monotone() {
    let mut prev = main_theorem_log_bound(16, 128).unwrap();
    for n in 17..5000u64 {
        let cur = main_theorem_log_bound(n, 128).unwrap();
        assert_eq!(prev.lt(&cur), Verdict::Holds, "n={n}");
        let log_n = Interval::from_int(&Integer::from(n), 128).ln();
        assert_eq!(log_n.lt(&cur), Verdict::Holds);
        prev = cur;
    }
    assert!(main_theorem_log_bound(15, 128).is_err());
}

#[test]
fn cyclotomic_log_deviation_is_small_on_the_grid() {
    for q in 2..=25u64 {
        for a in FrobeniusParams::admissible_traces(q) {
            let params = FrobeniusParams::new(q, a).unwrap();
            for n in 1..=40 {
                let r = phin_log_check(&params, n, 128).unwrap();
                assert_eq!(r.verdict, Verdict::Holds, "{params} n={n}: {r:?}");
            }
        }
    }
}

#[test]
fn composition_counts_match_enumeration() {
    fn enumerate(k: u32, ell: u32) -> u64 {
        if k == 0 {
            return 1;
        }
        (0..=ell).map(|a| enumerate(k - 1, ell - a)).sum()
    }
    for k in 1..=6 {
        for ell in 0..=8 {
            let c = count_bounded_compositions(k, ell).unwrap();
            assert_eq!(c.exact, enumerate(k, ell), "k={k} ell={ell}");
            assert!(c.exact <= c.stated);
        }
    }
}

#[test]
fn theta_bound_reference_values() {
    let b = theta_bound(&inst(10.0, &[2, 3]), ThetaVariant::Trivial).unwrap();
    assert!((b - 10f64.ln().powi(4)).abs() < 1e-9);
    let g = theta_bound(&inst(3.0, &[]), ThetaVariant::General).unwrap();
    assert!((g - (20.0 * 3f64.ln()).exp()).abs() < 1e-6 * g);
}
