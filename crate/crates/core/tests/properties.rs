use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use cubforge_core::analysis::{
    builtin_identity, identity_check, verify_exactness, verify_invariants, SymmetricIdentity, BUILTIN_IDENTITIES,
};
use cubforge_core::combinatorics::compositions;
use cubforge_core::constructor::{p4_certificate, solve_degree4, solve_degree5, Degree4Problem, Degree5Problem};
use cubforge_core::reduction::{design_4_11_5_1, parity_array, validate_design, validate_oa, ReductionError};
use cubforge_core::rule::{CubatureRule, Exactness};
use cubforge_core::scalar::{rational_from_i64, ExactScalar, Rational};
use cubforge_core::symmetry::{partitions_of, s_value_at_u, s_value_at_vk, symmetric_function_value, Partition, WeightExponent};

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| rational_from_i64(n, d))
}

/// Three elements of one field ℚ(√D).
fn triple() -> impl Strategy<Value = (ExactScalar, ExactScalar, ExactScalar)> {
    prop_oneof![Just(0u64), Just(2), Just(3), Just(5), Just(6), Just(12)].prop_flat_map(|disc| {
        let x = move || (rational(), rational()).prop_map(move |(a, b)| ExactScalar::new(a, b, disc));
        (x(), x(), x())
    })
}

/// Sign of `a + b√D` from integer comparisons only.
fn oracle_sign(a: &Rational, b: &Rational, disc: u64) -> i8 {
    let sgn = |q: &Rational| if q.is_zero() { 0 } else if q.is_positive() { 1 } else { -1 };
    let (sa, sb) = (sgn(a), if disc == 0 { 0 } else { sgn(b) });
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    let lhs = a * a;
    let rhs = b * b * Rational::from_integer(BigInt::from(disc));
    if lhs > rhs {
        sa
    } else if lhs < rhs {
        sb
    } else {
        0
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn field_axioms((x, y, z) in triple()) {
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&(&x - &y) + &y, x.clone());
        prop_assert!((&x + &(-&x)).is_zero());
        if !y.is_zero() {
            prop_assert_eq!(&(&x / &y) * &y, x.clone());
            prop_assert!((&y * &y.inverse().unwrap()).is_one());
        }
    }

    #[test]
    fn sign_matches_oracle(a in rational(), b in rational(), disc in prop_oneof![Just(0u64), Just(2), Just(3), Just(7), Just(10)]) {
        let x = ExactScalar::new(a.clone(), b.clone(), disc);
        prop_assert_eq!(x.signum(), oracle_sign(&a, &b, disc));
        prop_assert_eq!((-&x).signum(), -x.signum());
    }

    #[test]
    fn text_round_trip((x, _, _) in triple()) {
        prop_assert_eq!(x.to_string().parse::<ExactScalar>().unwrap(), x);
    }
}

/// `S_ℓ(x)` summed monomial by monomial.
fn brute_symmetric(part: &Partition, point: &[ExactScalar]) -> ExactScalar {
    let mut want = part.parts().to_vec();
    want.sort_unstable();
    let mut total = ExactScalar::zero();
    for e in compositions(part.weight(), point.len()) {
        let mut nz: Vec<u32> = e.iter().copied().filter(|&k| k > 0).collect();
        nz.sort_unstable();
        if nz == want {
            total += &e.iter().zip(point).fold(ExactScalar::one(), |acc, (&k, x)| acc * x.pow(k));
        }
    }
    total
}

#[test]
fn symmetric_values_against_expansion() {
    let a = ExactScalar::new(rational_from_i64(5, 2), rational_from_i64(1, 3), 2);
    for t in 1..=5 {
        for part in partitions_of(t) {
            for d in 1..=6usize {
                let n = d + 1;
                for k in 1..=n {
                    let v: Vec<ExactScalar> = (0..n).map(|i| ExactScalar::from_integer(i64::from(i < k))).collect();
                    let formula = ExactScalar::from(BigInt::from(s_value_at_vk(&part, k)));
                    assert_eq!(formula, brute_symmetric(&part, &v), "S_{part}(v_{k}), d={d}");
                }
                for p in 1..=d {
                    let mut u = vec![a.clone()];
                    u.extend((0..p).map(|_| ExactScalar::one()));
                    u.resize(n, ExactScalar::zero());
                    let formula = s_value_at_u(&part, &a, p);
                    assert_eq!(formula, brute_symmetric(&part, &u), "S_{part}(u), p={p}, d={d}");
                    assert_eq!(formula, symmetric_function_value(&part, &u));
                }
            }
        }
    }
}

fn small_rule(d: usize, a: &Rational, gamma: WeightExponent) -> Option<CubatureRule> {
    let problem = Degree4Problem { d, gamma, ks: vec![d + 1, 1, 2, 3], p: d, a: ExactScalar::from(a.clone()) };
    solve_degree4(&problem).ok().map(|s| s.rule)
}

fn gamma() -> impl Strategy<Value = WeightExponent> {
    prop_oneof![Just(WeightExponent::uniform()), Just(WeightExponent::chebyshev())]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sobolev_and_monomial_paths_agree(d in 2usize..=7, n in 2i64..=30, den in 1i64..=4, g in gamma(), perturb in any::<bool>()) {
        let a = rational_from_i64(n, den);
        prop_assume!(a != rational_from_i64(1, 1));
        let Some(rule) = small_rule(d, &a, g) else { return Ok(()) };
        let rule = if perturb {
            // Shift weight between orbits; exactness must break on both paths.
            let text = rule.to_json().unwrap();
            let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
            let orbits = v["orbits"].as_array_mut().unwrap();
            let w0: ExactScalar = serde_json::from_value(orbits[0]["weight"].clone()).unwrap();
            let w1: ExactScalar = serde_json::from_value(orbits[1]["weight"].clone()).unwrap();
            let delta = ExactScalar::from_ratio(1, 97);
            orbits[0]["weight"] = serde_json::to_value(&w0 + &delta).unwrap();
            orbits[1]["weight"] = serde_json::to_value(&w1 - &delta).unwrap();
            CubatureRule::from_json(&v.to_string()).unwrap()
        } else {
            rule
        };
        for target in [Exactness::Index(2), Exactness::Index(3), Exactness::Index(4), Exactness::Index(5), Exactness::Degree(4)] {
            let m = verify_exactness(&rule, target).unwrap();
            let s = verify_invariants(&rule, target).unwrap();
            prop_assert_eq!(m.passed, s.passed, "{} at {}", d, target);
        }
    }

    #[test]
    fn weights_sum_to_one(d in 3usize..=9, n in 2i64..=40, den in 1i64..=5) {
        let a = rational_from_i64(n, den);
        prop_assume!(a != rational_from_i64(1, 1));
        let problem = Degree4Problem { d, gamma: WeightExponent::uniform(), ks: vec![d + 1, 1, 2, 3], p: d, a: ExactScalar::from(a) };
        if let Ok(sol) = solve_degree4(&problem) {
            let total: ExactScalar = sol.weights.iter().sum();
            prop_assert!(total.is_one());
            if sol.is_positive() {
                prop_assert!(sol.rule.total_weight().is_one());
            }
        }
    }

    #[test]
    fn rule_file_round_trip(d in 2usize..=8, n in 2i64..=30, g in gamma()) {
        let Some(rule) = small_rule(d, &rational_from_i64(n, 1), g) else { return Ok(()) };
        let back = CubatureRule::from_json(&rule.to_json().unwrap()).unwrap();
        prop_assert_eq!(back, rule);
    }

    #[test]
    fn antipodal_halving(d in 2usize..=6, n in 2i64..=20) {
        let Some(rule) = small_rule(d, &rational_from_i64(n, 1), WeightExponent::chebyshev()) else { return Ok(()) };
        let sphere = rule.simplex_to_sphere().unwrap();
        let half = sphere.antipodal_reduce().unwrap();
        prop_assert_eq!(half.node_count() * 2u32, sphere.node_count());
        prop_assert_eq!(half.exactness(), Exactness::Index(8));
        prop_assert!(verify_exactness(&half, Exactness::Index(8)).unwrap().passed);
    }

    #[test]
    fn relabelled_design_stays_valid(shift in 0usize..11, mult in prop_oneof![Just(1usize), Just(2), Just(3), Just(7)], drop in 0usize..66) {
        let design = design_4_11_5_1();
        let relabel = |x: usize| (x * mult + shift) % 11;
        let blocks: Vec<Vec<usize>> = design.blocks().iter().map(|b| b.iter().map(|&x| relabel(x)).collect()).collect();
        prop_assert!(validate_design(blocks.clone(), 11, 5, 4).is_ok());
        let mut short = blocks;
        short.remove(drop);
        let invalid = matches!(validate_design(short, 11, 5, 4), Err(ReductionError::InvalidDesign { .. }) | Err(ReductionError::Mismatch(_)));
        prop_assert!(invalid);
    }

    #[test]
    fn shuffled_array_stays_orthogonal(cols in 3usize..=7, rot in 0usize..64, flip_col in 0usize..7, flip_row in 0usize..64) {
        let oa = parity_array(cols);
        let mut rows = oa.rows().to_vec();
        let len = rows.len();
        rows.rotate_left(rot % len);
        for r in rows.iter_mut() {
            r.rotate_left(rot % cols);
        }
        prop_assert!(validate_oa(rows.clone(), cols - 1).is_ok());
        let c = flip_col % cols;
        rows[flip_row % len][c] = -rows[flip_row % len][c];
        prop_assert!(validate_oa(rows, cols - 1).is_err());
    }
}

#[test]
fn positivity_certificate_up_to_30() {
    for gamma in [WeightExponent::uniform(), WeightExponent::chebyshev()] {
        for d in 1..=30 {
            let c = p4_certificate(d, &gamma);
            assert!(c.integral.is_zero(), "d={d}");
            assert!(c.values.iter().all(|v| v.is_positive()), "d={d}");
        }
    }
}

#[test]
fn degree5_rules_are_normalised() {
    for d in 3..=8usize {
        for p in 2..=d {
            for m in 4..=d + 1 {
                let problem = Degree5Problem { d, gamma: WeightExponent::uniform(), ks: vec![d + 1, 1, 2, 3, m], p };
                if let Ok(sol) = solve_degree5(&problem) {
                    let total: ExactScalar = sol.weights.iter().sum();
                    assert!(total.is_one(), "({d},{p},{m})");
                }
            }
        }
    }
}

#[test]
fn identity_files_round_trip() {
    for name in BUILTIN_IDENTITIES {
        let id = builtin_identity(name).unwrap();
        let text: SymmetricIdentity = id.to_string().parse().unwrap();
        assert_eq!(text, id, "{name}");
        let json = SymmetricIdentity::from_json(&id.to_json().unwrap()).unwrap();
        assert_eq!(json, id, "{name}");
        assert_eq!(identity_check(&text).passed, identity_check(&id).passed);
    }
}
