use hasse_core::arith::{self, factorize, kronecker, pow_mod, sqrt_mod};
use hasse_core::criteria::pd_member;
use hasse_core::ideals::{cube_decompose, factor_principal, factored_norm, PrimeKind};
use hasse_core::quadratic::{is_cube_in_order, QuadElem};
use hasse_core::splitting::{find_represented_primes, witness_at};
use hasse_core::{classify_sd, fundamental_unit};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

const DS: [u64; 12] = [2, 3, 5, 6, 7, 13, 21, 33, 79, 142, 229, 235];

fn elem() -> impl Strategy<Value = QuadElem> {
    (prop::sample::select(DS.to_vec()), -400i64..=400, -400i64..=400, prop::bool::ANY).prop_filter_map(
        "valid element",
        |(d, x, y, half)| {
            let den = if half { 2 } else { 1 };
            QuadElem::new(d, x, y, den).ok().filter(|u| !u.is_zero())
        },
    )
}

fn pair() -> impl Strategy<Value = (QuadElem, QuadElem)> {
    (elem(), -300i64..=300, -300i64..=300).prop_filter_map("same field", |(u, x, y)| {
        QuadElem::new(u.d(), x, y, 1).ok().filter(|v| !v.is_zero()).map(|v| (u, v))
    })
}

fn naive_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| n % k != 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn norm_is_multiplicative((u, v) in pair()) {
        prop_assert_eq!((&u * &v).norm(), u.norm() * v.norm());
        prop_assert_eq!((&u * &u.conj()).y().clone(), BigInt::zero());
    }

    #[test]
    fn factorization_recomposes(n in 1i64..1_000_000_000_000, sign in prop::bool::ANY) {
        let n = if sign { -n } else { n };
        let f = factorize(&BigInt::from(n));
        prop_assert_eq!(f.recompose(), BigInt::from(n));
        for (p, e) in &f.factors {
            prop_assert!(arith::is_prime(p));
            prop_assert!(*e >= 1);
        }
        prop_assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn primality_matches_trial_division(n in 0u64..2_000_000) {
        prop_assert_eq!(arith::is_prime_u64(n), naive_prime(n));
    }

    #[test]
    fn kronecker_matches_euler(a in -10_000i64..10_000, idx in 1usize..200) {
        let p = (3u64..).filter(|&p| naive_prime(p)).nth(idx).unwrap();
        let euler = pow_mod(a.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
        let expected = match euler { 0 => 0, 1 => 1, _ => -1 };
        prop_assert_eq!(kronecker(a, p as i64), expected);
    }

    #[test]
    fn square_roots_square(a in -100_000i64..100_000, idx in 1usize..500) {
        let p = (3u64..).filter(|&p| naive_prime(p)).nth(idx).unwrap();
        match sqrt_mod(a, p) {
            Some(r) => {
                prop_assert!(r <= p - r || r == 0);
                prop_assert_eq!((r as u128 * r as u128 % p as u128) as i64, a.rem_euclid(p as i64));
            }
            None => prop_assert_eq!(kronecker(a, p as i64), -1),
        }
    }

    #[test]
    fn cubes_are_detected(u in elem()) {
        let c = u.pow(3);
        let root = is_cube_in_order(&c).expect("a cube");
        prop_assert_eq!(root.pow(3), c);
    }

    #[test]
    fn unit_times_cube_is_not_a_cube(u in elem()) {
        let fu = fundamental_unit(u.d()).unwrap().elem;
        prop_assert!(is_cube_in_order(&(&fu * &u.pow(3))).is_none());
        prop_assert!(is_cube_in_order(&(&fu.pow(2) * &u.pow(3))).is_none());
    }

    #[test]
    fn residues_multiply((u, v) in pair()) {
        let (a1, b1) = u.half_residue(27).unwrap();
        let (a2, b2) = v.half_residue(27).unwrap();
        let (a, b) = (&u * &v).half_residue(27).unwrap();
        let d = u.d() % 27;
        prop_assert_eq!(a, (a1 * a2 + d * b1 * b2) % 27);
        prop_assert_eq!(b, (a1 * b2 + a2 * b1) % 27);
    }

    #[test]
    fn ideal_norms_multiply_out(u in elem()) {
        let fs = factor_principal(&u).unwrap();
        prop_assert_eq!(factored_norm(&fs), u.norm().abs());
        for f in &fs {
            prop_assert!(f.exponent > 0);
            if f.kind == PrimeKind::Inert {
                prop_assert!(f.root.is_none());
            }
        }
    }

    #[test]
    fn factorization_is_multiplicative((u, v) in pair()) {
        // exponents of uv are the sums of those of u and v
        let mut expected = std::collections::BTreeMap::new();
        for w in [&u, &v] {
            for f in factor_principal(w).unwrap() {
                *expected.entry((f.p.clone(), f.root.clone())).or_insert(0u32) += f.exponent;
            }
        }
        let got: std::collections::BTreeMap<_, _> = factor_principal(&(&u * &v))
            .unwrap()
            .into_iter()
            .map(|f| ((f.p, f.root), f.exponent))
            .collect();
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn pd_is_stable_under_cubes((u, mu) in pair()) {
        // u·μ³ with 3 ∤ N(μ) lies in P_d exactly when u does
        prop_assume!(!(mu.norm() % 3u32).is_zero());
        let beta = QuadElem::new(u.d(), u.norm() * u.x(), u.norm() * u.y(), u.den()).unwrap();
        let twisted = &beta * &mu.pow(3);
        prop_assert_eq!(pd_member(&twisted).unwrap(), pd_member(&beta).unwrap());
    }

    #[test]
    fn residuacity_ignores_cube_factors((u, mu) in pair(), k in 0usize..20) {
        let twisted = &u * &mu.pow(3);
        let (p, x, y) = find_represented_primes(u.d(), 1, k + 1, 10_000_000).unwrap()[k];
        let pb = BigInt::from(p);
        prop_assume!(!(u.norm() % &pb).is_zero() && !(mu.norm() % &pb).is_zero());
        let a = witness_at(&u, p, x, y).unwrap();
        let b = witness_at(&twisted, p, x, y).unwrap();
        prop_assert_eq!(a.cubic, b.cubic);
    }
}

#[test]
fn decompositions_reassemble() {
    let mut seen = 0;
    for d in [5u64, 7, 13, 21, 79, 142, 229, 235] {
        for u in hasse_core::verifier::sd_samples(d, 60) {
            let dec = cube_decompose(&u).unwrap();
            assert_eq!(dec.reassemble(), factor_principal(&u).unwrap(), "u = {u}");
            assert!(arith::is_squarefree(u64::try_from(&dec.q).unwrap()));
            assert!(dec.q_part.iter().all(|f| f.kind == PrimeKind::Split));
            let n = classify_sd(&u).n.unwrap().abs();
            // (u) = 𝔄³·(q)·𝔔 has norm (N(𝔄)·q)³
            assert_eq!(dec.cube_root_norm() * &dec.q, n);
            if classify_sd(&u).in_sd_star {
                assert!(dec.q.is_one());
            }
            seen += 1;
        }
    }
    assert!(seen > 100, "only {seen} samples");
}
