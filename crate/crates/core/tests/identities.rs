use cubforge_core::analysis::{
    builtin_identity, embedding_constant, extract_embedding, identity_check, rule_to_identity, IdentityError,
    SymmetricIdentity,
};
use cubforge_core::constructor::{solve_degree4, solve_degree5, Degree4Problem, Degree5Problem};
use cubforge_core::rule::CubatureRule;
use cubforge_core::scalar::ExactScalar;
use cubforge_core::symmetry::WeightExponent;
use num_bigint::BigInt;

fn sphere4(d: usize, ks: &[usize], p: usize, a: ExactScalar) -> CubatureRule {
    let problem = Degree4Problem { d, gamma: WeightExponent::chebyshev(), ks: ks.to_vec(), p, a };
    solve_degree4(&problem).unwrap().rule.simplex_to_sphere().unwrap()
}

fn coefs(id: &SymmetricIdentity) -> Vec<(Vec<i64>, i64)> {
    id.terms.iter().map(|t| (t.pattern.clone(), i64::try_from(&t.coefficient).unwrap())).collect()
}

#[test]
fn bundled_verdicts() {
    let verdict = |name: &str| identity_check(&builtin_identity(name).unwrap()).passed;
    assert!(verdict("hurwitz"));
    assert!(verdict("315"));
    assert!(verdict("schur"));
    assert!(verdict("161280"));
    assert!(!verdict("schur-as-printed"));
    let printed = identity_check(&builtin_identity("161280-as-printed").unwrap());
    assert_eq!(printed.first_difference.unwrap().0, vec![0, 0, 0, 0, 8]);
    assert_eq!(builtin_identity("hurwitz").unwrap().power_count(), BigInt::from(840));
}

#[test]
fn hurwitz_from_rule() {
    let rule = sphere4(3, &[4, 1, 2, 3], 2, ExactScalar::from_integer(4));
    assert_eq!(rule.node_count_u64(), 144);
    let half = rule.antipodal_reduce().unwrap();
    assert_eq!(half.node_count_u64(), 72);
    let id = rule_to_identity(&half, 4).unwrap();
    assert_eq!(id.multiplier, BigInt::from(5040));
    assert_eq!(coefs(&id), vec![(vec![1], 1536), (vec![1, 1], 60), (vec![2, 1, 1], 1), (vec![1, 1, 1, 1], 6)]);
    // The full orbit gives the same identity.
    assert_eq!(rule_to_identity(&rule, 4).unwrap(), id);
    let emb = extract_embedding(&half, 4).unwrap();
    assert_eq!(emb.len(), 72);
    assert!(emb.certify().unwrap().passed);
    assert_eq!(emb.constant, embedding_constant(4, 4).unwrap());
}

#[test]
fn identities_161280_and_315_from_rules() {
    let nine = ExactScalar::from_integer(9);
    let r144 = sphere4(3, &[4, 1, 2, 3], 3, nine.clone());
    assert_eq!(r144.node_count_u64(), 144);
    let id315 = rule_to_identity(&r144.antipodal_reduce().unwrap(), 4).unwrap();
    assert_eq!(id315.multiplier, BigInt::from(315 * 256));

    let r322 = sphere4(4, &[5, 1, 2, 3], 4, nine);
    assert_eq!(r322.node_count_u64(), 322);
    let half = r322.antipodal_reduce().unwrap();
    let id = rule_to_identity(&half, 4).unwrap();
    assert_eq!(id.multiplier, BigInt::from(161280));
    let bundled = builtin_identity("161280").unwrap();
    let mut a = coefs(&id);
    let mut b = coefs(&bundled);
    a.sort();
    b.sort();
    assert_eq!(a, b);
    assert_eq!(extract_embedding(&half, 4).unwrap().len(), 161);
}

#[test]
fn schur_from_degree11_rule() {
    let problem = Degree5Problem { d: 3, gamma: WeightExponent::chebyshev(), ks: vec![4, 1, 2, 3, 4], p: 2 };
    let sol = solve_degree5(&problem).unwrap();
    let sphere = sol.rule.simplex_to_sphere().unwrap().antipodal_reduce().unwrap();
    let id = rule_to_identity(&sphere, 5).unwrap();
    assert_eq!(id.multiplier, BigInt::from(22680));
    assert_eq!(coefs(&id), vec![(vec![1], 9216), (vec![1, 1], 180), (vec![2, 1, 1], 1), (vec![1, 1, 1, 1], 9)]);
}

#[test]
fn irrational_rules_are_refused() {
    // a = 3 + √2 gives irrational nodes on the sphere.
    let a = ExactScalar::new(cubforge_core::scalar::rational_from_i64(3, 1), cubforge_core::scalar::rational_from_i64(1, 1), 2);
    let problem = Degree4Problem { d: 3, gamma: WeightExponent::chebyshev(), ks: vec![4, 1, 2, 3], p: 3, a };
    let rule = solve_degree4(&problem).unwrap().rule.simplex_to_sphere().unwrap();
    assert!(matches!(rule_to_identity(&rule, 4), Err(IdentityError::Irrational(_) | IdentityError::Invalid(_))));
}

#[test]
fn one_point_rule_rejected() {
    use cubforge_core::rule::{Domain, Exactness, Group, OrbitPoint, WeightedOrbit};
    let mut q = vec![ExactScalar::zero(); 3];
    q[0] = ExactScalar::one();
    let point = OrbitPoint::sphere(Group::SignedPoint(vec![1, 1, 1]), q).unwrap();
    let rule = CubatureRule::new(
        Domain::Sphere,
        2,
        WeightExponent::chebyshev(),
        Exactness::Index(2),
        vec![WeightedOrbit { point, weight: ExactScalar::one() }],
    )
    .unwrap();
    assert!(extract_embedding(&rule, 1).is_err());
    assert_eq!(extract_embedding(&rule, 0).unwrap().len(), 1);
}
