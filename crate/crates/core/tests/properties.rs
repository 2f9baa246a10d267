//! Randomized structural properties of the angle/entropy machinery.
//!
//! Everything here is a law the implementation promises for *all* inputs in
//! the stated domain, exercised over random rationals rather than the pinned
//! fixtures of the unit tests.

use core_entropy::{
    build_pair_matrix, char_poly, core_entropy, is_real_admissible, itinerary, kneading_lambda,
    kneading_sequence, largest_real_root, parse_angle, real_tree_survivors, tune_angle, Angle,
    IntPolynomial, SparseMatrix, SCAN_LIMIT,
};
use num_bigint::BigInt;
use proptest::prelude::*;

/// Arbitrary reduced rational in (0, 1) with denominator at most `max_den`.
fn angle(max_den: u64) -> impl Strategy<Value = Angle> {
    (2..=max_den)
        .prop_flat_map(|den| (1..den, Just(den)))
        .prop_map(|(num, den)| Angle::new(num, den).expect("in range"))
}

/// Arbitrary angle in (0, 1/2] (the real slice, where kneading theory lives).
fn real_slice_angle(max_den: u64) -> impl Strategy<Value = Angle> {
    angle(max_den).prop_map(|a| {
        if 2 * a.numer() > a.denom() {
            a.mirror()
        } else {
            a
        }
    })
}

/// Real-slice angle whose kneading sequence is realized by a real map.
fn admissible_angle(max_den: u64) -> impl Strategy<Value = Angle> {
    real_slice_angle(max_den)
        .prop_filter("not real-admissible", |a| {
            is_real_admissible(&kneading_sequence(*a).unwrap())
        })
}

/// Integer determinant by fraction-free (Bareiss) elimination — an
/// independent oracle for the characteristic polynomial.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if m[k][k] == BigInt::from(0) {
            let Some(swap) = (k + 1..n).find(|&r| m[r][k] != BigInt::from(0)) else {
                return BigInt::from(0);
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev; // divides exactly in Bareiss elimination
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

fn eval_bigint(p: &IntPolynomial, x: i64) -> BigInt {
    let x = BigInt::from(x);
    let mut acc = BigInt::from(0);
    for c in p.coeffs().iter().rev() {
        acc = acc * &x + c;
    }
    acc
}

proptest! {
    #[test]
    fn parse_render_roundtrip(a in angle(100_000)) {
        prop_assert_eq!(parse_angle(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn binary_roundtrip(pre in proptest::collection::vec(any::<bool>(), 0..=6),
                        per in proptest::collection::vec(any::<bool>(), 1..=10)) {
        prop_assume!(per.iter().any(|&b| !b)); // all-ones periodic word is non-canonical
        let bit = |v: &[bool]| v.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>();
        let a = Angle::from_binary(&bit(&pre), &bit(&per)).unwrap();
        let (p2, q2) = a.to_binary().unwrap();
        prop_assert_eq!(Angle::from_binary(&p2, &q2).unwrap(), a);
    }

    #[test]
    fn orbit_structure_is_minimal(a in angle(20_000)) {
        let st = a.orbit_structure().unwrap();
        let advance = |mut x: Angle, n: u32| { for _ in 0..n { x = x.double(); } x };
        let entry = advance(a, st.preperiod);
        prop_assert_eq!(advance(entry, st.period), entry);
        if st.preperiod > 0 {
            // one step earlier the angle is not yet on the cycle
            let early = advance(a, st.preperiod - 1);
            prop_assert_ne!(advance(early, st.period), early);
        }
        for q in 1..st.period {
            if st.period % q == 0 {
                prop_assert_ne!(advance(entry, q), entry, "period not minimal");
            }
        }
    }

    #[test]
    fn mirror_commutes_with_doubling(a in angle(100_000)) {
        prop_assert_eq!(a.mirror().double(), a.double().mirror());
    }

    #[test]
    fn itinerary_is_mirror_invariant(phi in angle(5_000), theta in angle(5_000), n in 1usize..40) {
        let lhs = itinerary(phi, theta, n);
        let rhs = itinerary(phi.mirror(), theta.mirror(), n);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kneading_word_is_mirror_invariant(theta in angle(20_000)) {
        let nu = kneading_sequence(theta).unwrap();
        let mirrored = kneading_sequence(theta.mirror()).unwrap();
        prop_assert_eq!(nu.render(), mirrored.render());
        prop_assert_eq!((nu.preperiod(), nu.period()), (mirrored.preperiod(), mirrored.period()));
    }

    #[test]
    fn pair_matrix_column_sums_are_one_or_two(theta in angle(400)) {
        let pm = build_pair_matrix(theta).unwrap();
        for s in pm.matrix().column_sums() {
            prop_assert!(s == 1 || s == 2, "column sum {s}");
        }
        let m = pm.orbit_len();
        prop_assert_eq!(pm.matrix().dim(), m * (m - 1) / 2);
    }

    #[test]
    fn char_poly_matches_bareiss_oracle(dim in 1usize..=5,
                                        seed in proptest::collection::vec(0u64..=3, 25)) {
        let rows: Vec<Vec<u64>> = (0..dim)
            .map(|i| (0..dim).map(|j| seed[i * 5 + j]).collect())
            .collect();
        let m = SparseMatrix::from_rows(&rows).unwrap();
        let p = char_poly(&m).unwrap();
        for x in [-2i64, -1, 0, 1, 2, 5] {
            // det(xI − M), expanded by fraction-free elimination
            let shifted: Vec<Vec<BigInt>> = (0..dim)
                .map(|i| (0..dim)
                    .map(|j| {
                        let d = if i == j { BigInt::from(x) } else { BigInt::from(0) };
                        d - BigInt::from(rows[i][j])
                    })
                    .collect())
                .collect();
            prop_assert_eq!(eval_bigint(&p, x), bareiss_det(shifted));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn survivor_counts_obey_word_symmetries(theta in admissible_angle(64), d in 1u32..=14) {
        let s = real_tree_survivors(theta, d).unwrap();
        // the all-zeros and all-ones words always survive (both are the fixed
        // angle 0), every other survivor pairs with its bit-complement (the
        // mirror angle), and no word has itself as complement — so the count
        // is an even number between 2 and 2^d
        prop_assert!(s >= 2 && s <= 1 << d, "count {s} out of range at depth {d}");
        prop_assert_eq!(s % 2, 0, "count {} not complement-paired", s);
    }

    #[test]
    fn survivor_counts_are_monotone_in_theta(a in admissible_angle(64),
                                             b in admissible_angle(64), d in 1u32..=14) {
        // the survivor set is an intersection of conditions ‖F^n(φ)‖ ≤ ‖θ‖,
        // so it only grows as θ moves up the real slice
        let (lo, hi) = if a.to_f64() <= b.to_f64() { (a, b) } else { (b, a) };
        prop_assert!(
            real_tree_survivors(lo, d).unwrap() <= real_tree_survivors(hi, d).unwrap()
        );
    }

    #[test]
    fn growth_rate_is_mirror_invariant(theta in angle(150)) {
        let a = core_entropy(theta).unwrap();
        let b = core_entropy(theta.mirror()).unwrap();
        prop_assert!((a.lambda - b.lambda).abs() < 1e-8,
                     "λ({}) = {} vs λ({}) = {}", theta, a.lambda, theta.mirror(), b.lambda);
    }

    #[test]
    fn entropy_report_is_internally_consistent(theta in angle(200)) {
        let r = core_entropy(theta).unwrap();
        prop_assert!(r.lambda >= 1.0 - 1e-12 && r.lambda <= 2.0 + 1e-12);
        prop_assert!((r.entropy - r.lambda.ln()).abs() < 1e-15);
        prop_assert!((r.dimension - r.lambda.log2()).abs() < 1e-15);
        let st = theta.orbit_structure().unwrap();
        prop_assert_eq!((r.preperiod, r.period), (st.preperiod, st.period));
    }

    #[test]
    fn kneading_route_matches_matrix_route(theta in admissible_angle(150)) {
        // 600 terms covers every angle this strategy can produce: it exceeds the
        // 4x-orbit validity floor (orbits here are at most ~148), and truncation
        // moves any root inside the scan window by < 1e-12 (0.95^600 ~ 4e-14).
        let kv = kneading_lambda(theta, 600).unwrap();
        prop_assert!(kv.admissible);
        let mv = core_entropy(theta).unwrap().lambda;
        if kv.t_star.is_some() {
            prop_assert!((kv.lambda - mv).abs() < 1e-6, "kneading {} vs matrix {}", kv.lambda, mv);
        } else {
            // No root in (0, SCAN_LIMIT]: only growth rates below 1/SCAN_LIMIT
            // can hide there (angles just past the period-doubling cascade).
            prop_assert!(mv <= 1.0 / SCAN_LIMIT + 1e-9,
                         "matrix {} but kneading series has no root in scan window", mv);
        }
    }

    #[test]
    fn satellite_tuning_halves_dimension(eta in angle(60)) {
        // skip expansions longer than the exact-arithmetic budget
        let tuned = tune_angle("01", "10", eta);
        prop_assume!(tuned.is_ok());
        let tuned = tuned.unwrap();
        let half = core_entropy(eta).unwrap().dimension / 2.0;
        let got = core_entropy(tuned).unwrap().dimension;
        prop_assert!((got - half).abs() < 1e-6, "tuned {} got {} want {}", tuned, got, half);
    }

    #[test]
    fn primitive_tuning_pins_window_dimension(eta in angle(40)) {
        let tuned = tune_angle("0011", "0100", eta);
        prop_assume!(tuned.is_ok());
        let tuned = tuned.unwrap();
        let window = core_entropy(parse_angle("3/15").unwrap()).unwrap().dimension;
        let got = core_entropy(tuned).unwrap().dimension;
        prop_assert!((got - window).abs() < 1e-6, "tuned {} got {} want {}", tuned, got, window);
    }

    #[test]
    fn constructed_root_is_recovered(s in 0u32..=6, odd in 0u64..64, c in 0i64..=3) {
        // p(x) = (2^s·x − a)(x + c) with a odd: the only root in [0.5, 3] is a/2^s
        let a = ((odd * 2 + 1) | (1 << s)) & ((1 << (s + 1)) - 1);
        let a = a.max((1 << s) + 1); // force a/2^s into (1, 2]
        let root = a as f64 / (1u64 << s) as f64;
        let p = IntPolynomial::from_i64(&[-(a as i64) * c, (c << s) - a as i64, 1 << s]);
        let found = largest_real_root(&p, 0.5, 3.0, 1e-12).unwrap();
        prop_assert!((found - root).abs() < 1e-9, "found {found}, constructed {root}");
    }
}
