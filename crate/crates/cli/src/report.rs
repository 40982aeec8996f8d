//! Reproduction claims: every published value the library should recompute,
//! with the exact comparison that decides it.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use cubforge_core::analysis::{
    builtin_identity, identity_check, rule_to_identity, sharpness, verify_exactness, verify_invariants, MultiPoly,
};
use cubforge_core::combinatorics::compositions;
use cubforge_core::constructor::{
    index6_obstruction, p4_certificate, search_positive, solve_degree4, solve_degree5, Degree4Problem, Degree5Problem,
    Family, RuleSolution, SearchConfig, Verdict,
};
use cubforge_core::reduction::{
    design_4_11_5_1, reduced_node_count, victoir_simplex, Assignment, DesignSpec, OaSpec, SpecAssignment,
};
use cubforge_core::rule::{assemble_orbits, CubatureRule, Domain, Exactness};
use cubforge_core::scalar::{rational_from_i64, ExactScalar, Rational};
use cubforge_core::symmetry::{
    partitions_of, s_value_at_u, s_value_at_vk, symmetric_function_value, Partition, WeightExponent,
};

/// Criteria numbered as in the acceptance list.
pub const CRITERIA: [u8; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

#[derive(Debug, Clone, Serialize)]
pub struct Claim {
    pub criterion: u8,
    pub id: String,
    /// Where the published value comes from, in words.
    pub reference: String,
    pub expected: String,
    pub computed: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ReproductionReport {
    pub claims: Vec<Claim>,
}

impl ReproductionReport {
    /// `(criterion, all of its claims passed)`, in criterion order.
    pub fn criteria(&self) -> Vec<(u8, bool)> {
        let ids: BTreeSet<u8> = self.claims.iter().map(|c| c.criterion).collect();
        ids.into_iter()
            .map(|n| (n, self.claims.iter().filter(|c| c.criterion == n).all(|c| c.passed)))
            .collect()
    }

    pub fn passed(&self) -> usize {
        self.claims.iter().filter(|c| c.passed).count()
    }

    pub fn failed(&self) -> usize {
        self.claims.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }
}

impl fmt::Display for ReproductionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.claims {
            let verdict = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "[{verdict}] {}.{} ({})", c.criterion, c.id, c.reference)?;
            writeln!(f, "    expected: {}", c.expected)?;
            writeln!(f, "    computed: {}", c.computed)?;
        }
        writeln!(f)?;
        for (n, ok) in self.criteria() {
            writeln!(f, "criterion {n}: {}", if ok { "PASS" } else { "FAIL" })?;
        }
        write!(f, "{} claims, {} passed, {} failed", self.claims.len(), self.passed(), self.failed())
    }
}

/// Run the given criteria (an empty slice means all of them).
pub fn run(criteria: &[u8]) -> ReproductionReport {
    let wanted: Vec<u8> = if criteria.is_empty() { CRITERIA.to_vec() } else { criteria.to_vec() };
    let mut report = ReproductionReport::default();
    for n in wanted {
        let claims = match n {
            1 => degree4_weights(),
            2 => degree5_weights(),
            3 => sphere_weights(),
            4 => sharpness_claims(),
            5 => surveys(),
            6 => obstructions(),
            7 => reductions(),
            8 => identities(),
            9 => properties(),
            _ => Vec::new(),
        };
        report.claims.extend(claims);
    }
    report
}

fn claim(criterion: u8, id: &str, reference: &str, expected: impl Into<String>, computed: impl Into<String>, passed: bool) -> Claim {
    Claim {
        criterion,
        id: id.to_string(),
        reference: reference.to_string(),
        expected: expected.into(),
        computed: computed.into(),
        passed,
    }
}

fn error_claim(criterion: u8, id: &str, reference: &str, expected: impl Into<String>, err: impl fmt::Display) -> Claim {
    claim(criterion, id, reference, expected, format!("error: {err}"), false)
}

fn q(s: &str) -> ExactScalar {
    s.parse().expect("literal scalar")
}

fn list(values: &[ExactScalar]) -> String {
    let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// One of the rules whose weights are published.
pub struct Case {
    pub id: &'static str,
    pub reference: &'static str,
    pub degree: u32,
    pub gamma: WeightExponent,
    pub d: usize,
    pub ks: Vec<usize>,
    pub p: usize,
    /// `None` for index 5, where `a` is forced.
    pub a: Option<ExactScalar>,
    /// Published weights by position; `None` where none is printed.
    pub weights: Vec<Option<&'static str>>,
    pub nodes: Option<u64>,
}

impl Case {
    pub fn solve(&self) -> Result<RuleSolution, cubforge_core::constructor::ConstructError> {
        match &self.a {
            Some(a) => solve_degree4(&Degree4Problem {
                d: self.d,
                gamma: self.gamma.clone(),
                ks: self.ks.clone(),
                p: self.p,
                a: a.clone(),
            }),
            None => solve_degree5(&Degree5Problem { d: self.d, gamma: self.gamma.clone(), ks: self.ks.clone(), p: self.p }),
        }
    }
}

fn all(ws: &[&'static str]) -> Vec<Option<&'static str>> {
    ws.iter().map(|w| Some(*w)).collect()
}

pub fn degree4_cases() -> Vec<Case> {
    let u = WeightExponent::uniform;
    vec![
        Case {
            id: "d5",
            reference: "degree-4 simplex, ks (d+1,1,2,3), d=5",
            degree: 4,
            gamma: u(),
            d: 5,
            ks: vec![6, 1, 2, 3],
            p: 5,
            a: Some(q("4")),
            weights: all(&["0", "1/112", "0", "15/56", "81/112"]),
            nodes: Some(32),
        },
        Case {
            id: "d4m4",
            reference: "degree-4 simplex, ks (d+1,1,2,m), d=4, m=4, a=6",
            degree: 4,
            gamma: u(),
            d: 4,
            ks: vec![5, 1, 2, 4],
            p: 4,
            a: Some(q("6")),
            weights: all(&["0", "0", "2/21", "32/63", "25/63"]),
            nodes: None,
        },
        Case {
            id: "d12m6",
            reference: "degree-4 simplex, ks (d+1,1,2,m), d=12, m=6",
            degree: 4,
            gamma: u(),
            d: 12,
            ks: vec![13, 1, 2, 6],
            p: 12,
            a: Some(q("6")),
            weights: vec![Some("2197/12250"), None, None, Some("99/245"), Some("729/1750")],
            nodes: None,
        },
    ]
}

pub fn degree5_cases() -> Vec<Case> {
    let u = WeightExponent::uniform;
    vec![
        Case {
            id: "d3p3m4",
            reference: "degree-5 simplex, (d,p,m) = (3,3,4)",
            degree: 5,
            gamma: u(),
            d: 3,
            ks: vec![4, 1, 2, 3, 4],
            p: 3,
            a: None,
            weights: all(&["16/105", "1/70", "4/35", "81/350", "0", "256/525"]),
            nodes: Some(19),
        },
        Case {
            id: "d11p11m6",
            reference: "degree-5 simplex, (d,p,m) = (11,11,6)",
            degree: 5,
            gamma: u(),
            d: 11,
            ks: vec![12, 1, 2, 3, 6],
            p: 11,
            a: None,
            weights: all(&["0", "1/6825", "11/1365", "0", "891/2275", "4096/6825"]),
            nodes: Some(1014),
        },
    ]
}

pub fn sphere_cases() -> Vec<Case> {
    let c = WeightExponent::chebyshev;
    let d5 = |id, reference, d: usize, p: usize, m: usize, weights: Vec<Option<&'static str>>| Case {
        id,
        reference,
        degree: 5,
        gamma: c(),
        d,
        ks: vec![d + 1, 1, 2, 3, m],
        p,
        a: None,
        weights,
        nodes: None,
    };
    vec![
        Case {
            id: "d3m3p2",
            reference: "degree-9 sphere, ks (d+1,1,2,m), d=3, m=3, p=2, a=4",
            degree: 4,
            gamma: c(),
            d: 3,
            ks: vec![4, 1, 2, 3],
            p: 2,
            a: Some(q("4")),
            weights: all(&["2/15", "1/15", "1/8", "0", "27/40"]),
            nodes: None,
        },
        d5("d3p2m4", "degree-11 sphere, (d,p,m) = (3,2,4)", 3, 2, 4, all(&["2/15", "1/15", "1/8", "0", "0", "27/40"])),
        d5("d7p4m4", "degree-11 sphere, (d,p,m) = (7,4,4)", 7, 4, 4, all(&["32/315", "1/105", "2/45", "0", "2/15", "32/45"])),
        d5(
            "d21p11m5",
            "degree-11 sphere, (d,p,m) = (21,11,5)",
            21,
            11,
            5,
            all(&["14641/705432", "61/192192", "0", "405/31616", "2625/1414415", "16875/18304"]),
        ),
        d5(
            "d23p12m4",
            "degree-11 sphere, (d,p,m) = (23,12,4)",
            23,
            12,
            4,
            all(&["0", "1/4095", "0", "0", "506/12285", "11776/12285"]),
        ),
    ]
}

fn weight_claims(criterion: u8, case: &Case) -> Vec<Claim> {
    let expected: Vec<String> = case.weights.iter().map(|w| w.unwrap_or("*").to_string()).collect();
    let expected = format!("({})", expected.join(", "));
    let sol = match case.solve() {
        Ok(s) => s,
        Err(e) => return vec![error_claim(criterion, case.id, case.reference, expected, e)],
    };
    let mut out = Vec::new();
    let mismatched: Vec<usize> = case
        .weights
        .iter()
        .enumerate()
        .filter(|(i, w)| w.is_some_and(|w| sol.weights.get(*i) != Some(&q(w))))
        .map(|(i, _)| i + 1)
        .collect();
    let mut computed = list(&sol.weights);
    if !mismatched.is_empty() {
        computed.push_str(&format!("; differs at λ{mismatched:?}"));
    }
    out.push(claim(criterion, &format!("{}.weights", case.id), case.reference, expected, computed, mismatched.is_empty()));
    if let Some(n) = case.nodes {
        let got = sol.rule.node_count_u64();
        out.push(claim(criterion, &format!("{}.nodes", case.id), case.reference, n.to_string(), got.to_string(), got == n));
    }
    out
}

fn degree4_weights() -> Vec<Claim> {
    degree4_cases().iter().flat_map(|c| weight_claims(1, c)).collect()
}

fn degree5_weights() -> Vec<Claim> {
    degree5_cases().iter().flat_map(|c| weight_claims(2, c)).collect()
}

fn sphere_weights() -> Vec<Claim> {
    sphere_cases().iter().flat_map(|c| weight_claims(3, c)).collect()
}

fn sharp_claim(id: &str, reference: &str, rule: &CubatureRule) -> Claim {
    let expected = format!("exact at {}, not at the next level", rule.exactness());
    match sharpness(rule) {
        Ok(r) => {
            let computed = format!(
                "{} at {} ({} monomials), {} at {}",
                if r.stated.passed { "exact" } else { "not exact" },
                r.stated.target,
                r.stated.monomials_covered,
                if r.next.passed { "exact" } else { "not exact" },
                r.next.target,
            );
            claim(4, id, reference, expected, computed, r.is_sharp())
        }
        Err(e) => error_claim(4, id, reference, expected, e),
    }
}

fn sharpness_claims() -> Vec<Claim> {
    let mut out = Vec::new();
    for case in degree4_cases().iter().chain(&degree5_cases()).chain(&sphere_cases()) {
        match case.solve() {
            Ok(sol) => {
                out.push(sharp_claim(&format!("{}.simplex", case.id), case.reference, &sol.rule));
                if case.gamma == WeightExponent::chebyshev() {
                    match sol.rule.simplex_to_sphere() {
                        Ok(sphere) => out.push(sharp_claim(&format!("{}.sphere", case.id), case.reference, &sphere)),
                        Err(e) => out.push(error_claim(4, &format!("{}.sphere", case.id), case.reference, "lift", e)),
                    }
                }
            }
            Err(e) => out.push(error_claim(4, case.id, case.reference, "solvable", e)),
        }
    }
    out
}

fn set_string<T: fmt::Debug>(items: &BTreeSet<T>) -> String {
    let parts: Vec<String> = items.iter().map(|x| format!("{x:?}")).collect();
    parts.join(" ")
}

fn set_claim<T: Ord + fmt::Debug>(id: &str, reference: &str, expected: &BTreeSet<T>, computed: &BTreeSet<T>) -> Claim {
    let mut text = set_string(computed);
    let extra: BTreeSet<&T> = computed.difference(expected).collect();
    let missing: BTreeSet<&T> = expected.difference(computed).collect();
    if !extra.is_empty() {
        text.push_str(&format!("; extra {}", set_string(&extra)));
    }
    if !missing.is_empty() {
        text.push_str(&format!("; missing {}", set_string(&missing)));
    }
    claim(5, id, reference, set_string(expected), text, expected == computed)
}

/// Rule weights are all non-negative and sum to one.
fn normalised(sol: &RuleSolution) -> bool {
    let total = sol.weights.iter().fold(ExactScalar::zero(), |acc, w| acc + w.clone());
    sol.is_positive() && total.is_one()
}

fn surveys() -> Vec<Claim> {
    let mut out = Vec::new();

    let cfg = SearchConfig::new(4, WeightExponent::uniform(), 3..=17, Family::simplex_degree4());
    let hits = search_positive(&cfg);
    let ds: BTreeSet<usize> = hits.iter().filter(|h| normalised(&h.solution)).map(|h| h.d).collect();
    out.push(set_claim("degree4.dims", "degree-4 simplex survey, uniform weight", &(3..=17).collect(), &ds));

    let mut cfg = SearchConfig::new(5, WeightExponent::uniform(), 3..=11, vec![Family::Degree5]);
    cfg.use_zero_weight_roots = false;
    let hits = search_positive(&cfg);
    let triples: BTreeSet<(usize, usize, usize)> =
        hits.iter().filter(|h| normalised(&h.solution)).map(|h| (h.d, h.p, h.m)).collect();
    let nine: BTreeSet<(usize, usize, usize)> =
        [(3, 3, 4), (4, 4, 4), (5, 4, 4), (6, 5, 4), (7, 6, 5), (8, 6, 5), (9, 7, 5), (10, 8, 5), (11, 11, 6)].into();
    out.push(set_claim("degree5.triples", "degree-5 simplex survey, (d,p,m)", &nine, &triples));

    let mut cfg = SearchConfig::new(4, WeightExponent::chebyshev(), 3..=17, vec![Family::SphereVertexFree]);
    cfg.max_m = Some(6);
    cfg.use_zero_weight_roots = false;
    let hits = search_positive(&cfg);
    let pairs: BTreeSet<(usize, usize)> = hits.iter().filter(|h| normalised(&h.solution)).map(|h| (h.d, h.m)).collect();
    let listed: BTreeSet<(usize, usize)> = (3..=5)
        .map(|d| (d, 3))
        .chain((5..=9).map(|d| (d, 4)))
        .chain((9..=14).map(|d| (d, 5)))
        .chain((13..=17).map(|d| (d, 6)))
        .collect();
    out.push(set_claim("sphere.vertex-free.pairs", "sphere survey with vertex weight zero, (d,m), m ≤ 6", &listed, &pairs));
    out
}

fn quadratic_is(report: &cubforge_core::constructor::ObstructionReport, coeffs: &[i64]) -> bool {
    let want: Vec<Rational> = coeffs.iter().map(|&c| rational_from_i64(c, 1)).collect();
    report.quadratic.coeffs() == want.as_slice()
}

fn obstructions() -> Vec<Claim> {
    let mut out = Vec::new();
    let r0 = index6_obstruction(&WeightExponent::uniform());
    let ok0 = r0.verdict == Verdict::NoRealRoot && quadratic_is(&r0, &[1, 1, 1]);
    out.push(claim(6, "index6.uniform", "index-6 relations, uniform weight", "a² + a + 1 = 0: no real root", r0.to_string(), ok0));
    let r1 = index6_obstruction(&WeightExponent::chebyshev());
    let ok1 = r1.verdict == Verdict::Inconsistent
        && r1.forced_a == Some(rational_from_i64(7, 3))
        && quadratic_is(&r1, &[1, -6, 1]);
    out.push(claim(6, "index6.chebyshev", "index-6 relations, Chebyshev weight", "a = 7/3 vs a² − 6a + 1 = 0: inconsistent", r1.to_string(), ok1));
    for (name, gamma) in [("uniform", WeightExponent::uniform()), ("chebyshev", WeightExponent::chebyshev())] {
        let failures: Vec<usize> = (1..=30).filter(|&d| !p4_certificate(d, &gamma).holds()).collect();
        let computed = if failures.is_empty() { "holds for d = 1..30".to_string() } else { format!("fails for d in {failures:?}") };
        out.push(claim(
            6,
            &format!("p4.{name}"),
            "degree-4 positivity certificate",
            "zero integral, positive at every v_k, d ≤ 30",
            computed,
            failures.is_empty(),
        ));
    }
    out
}

/// A rule with the orbit shapes of a table row: `ks` orbits plus `u_{2,d}`,
/// unit coefficients. Only the shapes matter for node counting.
pub fn scaffold_rule(d: usize, t: u32, ks: &[usize]) -> CubatureRule {
    let ones = vec![ExactScalar::one(); ks.len() + 1];
    let orbits = assemble_orbits(d, t, ks, d, &ExactScalar::from_integer(2), &ones).expect("scaffold orbits");
    CubatureRule::new(Domain::Simplex, d, WeightExponent::uniform(), Exactness::Index(t), orbits).expect("scaffold rule")
}

/// `(label, d, index, ks with the designed orbit last, design, Ñ)`.
pub fn table_rows() -> Vec<(&'static str, usize, u32, Vec<usize>, DesignSpec, u64)> {
    let ds = DesignSpec::new;
    vec![
        ("t1.d11m6", 11, 4, vec![12, 2, 6], ds(4, 12, 6, 4), 211),
        ("t1.d12m6", 12, 4, vec![13, 6], ds(4, 13, 6, 12), 586),
        ("t1.d14m7", 14, 4, vec![15, 2, 7], ds(4, 15, 7, 20), 901),
        ("t1.d10m5", 10, 4, vec![11, 1, 5], ds(4, 11, 5, 1), 89),
        ("t1.d15m6", 15, 4, vec![16, 1, 6], ds(4, 16, 6, 6), 761),
        ("t2.d11m5", 11, 4, vec![12, 3, 5], ds(4, 12, 5, 4), 629),
        ("t2.d13m7", 13, 4, vec![14, 3, 7], ds(4, 14, 7, 20), 951),
        ("t2.d14m8", 14, 4, vec![15, 3, 8], ds(4, 15, 8, 40), 1251),
        ("t2.d16m8", 16, 4, vec![17, 3, 8], ds(4, 17, 8, 15), 1208),
        ("t2.d15m8", 15, 4, vec![16, 1, 8], ds(4, 16, 8, 60), 1593),
        ("t2.d17m8", 17, 4, vec![1, 8], ds(4, 18, 8, 21), 954),
        ("t3.d11m6", 11, 5, vec![1, 2, 6], ds(5, 12, 6, 1), 222),
    ]
}

/// The d = 14, m = 5, a = 9 sphere rule and its design and array assignments.
pub fn sphere_d14_count() -> Result<BigUint, String> {
    let problem = Degree4Problem {
        d: 14,
        gamma: WeightExponent::chebyshev(),
        ks: vec![15, 1, 2, 5],
        p: 14,
        a: ExactScalar::from_integer(9),
    };
    let sol = solve_degree4(&problem).map_err(|e| e.to_string())?;
    let sphere = sol.rule.simplex_to_sphere().map_err(|e| e.to_string())?;
    let find = |support: usize, equal: bool| {
        sphere.orbits().iter().position(|o| {
            let c = o.point.coords();
            o.point.support() == support && (c.iter().filter(|x| !x.is_zero()).all(|x| *x == c[0]) == equal)
        })
    };
    let (Some(centroid), Some(v5), Some(u)) = (find(15, true), find(5, true), find(15, false)) else {
        return Err("orbit shapes not found".into());
    };
    let oa = OaSpec::new(8192, 15, 8, true);
    let assignments = [
        SpecAssignment::design(v5, DesignSpec::new(4, 15, 5, 2)),
        SpecAssignment { orbit: centroid, design: None, oa: Some(oa) },
        SpecAssignment { orbit: u, design: None, oa: Some(oa) },
    ];
    reduced_node_count(&sphere, &assignments).map_err(|e| e.to_string())
}

fn reductions() -> Vec<Claim> {
    let mut out = Vec::new();
    let reference = "design reduction of the d=10, m=5 rule";
    let problem = Degree4Problem {
        d: 10,
        gamma: WeightExponent::uniform(),
        ks: vec![11, 1, 2, 5],
        p: 10,
        a: ExactScalar::from_integer(5),
    };
    let expected = "89 nodes, weights {1331/17472, 1/12012, 125/24024, 3375/64064}, exact over 1001 monomials";
    let result = solve_degree4(&problem).map_err(|e| e.to_string()).and_then(|sol| {
        let rule = sol.rule;
        let v5 = rule.orbits().iter().position(|o| o.point.support() == 5).ok_or("no v5 orbit")?;
        let design = design_4_11_5_1();
        let reduced = victoir_simplex(&rule, &[Assignment::design(v5, &design)]).map_err(|e| e.to_string())?;
        let check = verify_exactness(&reduced, Exactness::Index(4)).map_err(|e| e.to_string())?;
        Ok((rule.node_count_u64(), reduced, check))
    });
    match result {
        Ok((before, reduced, check)) => {
            let weights: BTreeSet<String> = reduced.orbits().iter().map(|o| o.node_weight().to_string()).collect();
            let want: BTreeSet<String> =
                ["1331/17472", "1/12012", "125/24024", "3375/64064"].iter().map(|s| s.to_string()).collect();
            let computed = format!(
                "{before} → {} nodes, weights {{{}}}, {} over {} monomials",
                reduced.node_count_u64(),
                weights.iter().cloned().collect::<Vec<_>>().join(", "),
                if check.passed { "exact" } else { "not exact" },
                check.monomials_covered
            );
            let ok = reduced.node_count_u64() == 89
                && weights == want
                && check.passed
                && check.monomials_covered == BigUint::from(1001u32);
            out.push(claim(7, "example.d10", reference, expected, computed, ok));
        }
        Err(e) => out.push(error_claim(7, "example.d10", reference, expected, e)),
    }
    for (label, d, t, ks, design, want) in table_rows() {
        let rule = scaffold_rule(d, t, &ks);
        let m = *ks.last().expect("designed orbit");
        let reference = "reduced node count from orbit shapes and design parameters";
        let orbit = rule.orbits().iter().position(|o| {
            let c = o.point.coords();
            o.point.support() == m && c.iter().filter(|x| !x.is_zero()).all(|x| *x == c[0])
        });
        let Some(orbit) = orbit else {
            out.push(error_claim(7, label, reference, want.to_string(), "designed orbit missing"));
            continue;
        };
        match reduced_node_count(&rule, &[SpecAssignment::design(orbit, design)]) {
            Ok(n) => {
                let computed = format!("{n} ({} before, {design})", rule.node_count());
                out.push(claim(7, label, reference, want.to_string(), computed, n == BigUint::from(want)));
            }
            Err(e) => out.push(error_claim(7, label, reference, want.to_string(), e)),
        }
    }
    let reference = "d=14 sphere rule with a design and antipodal arrays";
    match sphere_d14_count() {
        Ok(n) => out.push(claim(7, "sphere.d14", reference, "148574", n.to_string(), n == BigUint::from(148574u32))),
        Err(e) => out.push(error_claim(7, "sphere.d14", reference, "148574", e)),
    }
    out
}

fn identity_verdict(name: &str, reference: &str) -> Claim {
    let id = builtin_identity(name).expect("bundled identity");
    let report = identity_check(&id);
    let computed = match &report.first_difference {
        None => format!("holds over {} monomials", report.monomials),
        Some((e, l, r)) => format!("fails at exponent {e:?}: left {l}, right {r}"),
    };
    claim(8, name, reference, "holds", computed, report.passed)
}

fn identity_from_rule(id: &str, reference: &str, rule: Result<CubatureRule, String>, t: u32, multiplier: i64) -> Claim {
    let expected = format!("{multiplier}(Σx²)^{t} as a sum of {}-th powers", 2 * t);
    let result = rule.and_then(|r| rule_to_identity(&r, t).map_err(|e| e.to_string()));
    match result {
        Ok(identity) => {
            let lhs = MultiPoly::sum_of_squares_power(identity.n, t, 1).scale(&BigInt::from(multiplier));
            let ok = identity.multiplier == BigInt::from(multiplier) && identity.rhs() == lhs && identity_check(&identity).passed;
            claim(8, id, reference, expected, identity.to_string().lines().next().unwrap_or_default().to_string(), ok)
        }
        Err(e) => error_claim(8, id, reference, expected, e),
    }
}

fn lifted_half(case: &Case) -> Result<CubatureRule, String> {
    let sol = case.solve().map_err(|e| e.to_string())?;
    let sphere = sol.rule.simplex_to_sphere().map_err(|e| e.to_string())?;
    sphere.antipodal_reduce().map_err(|e| e.to_string())
}

fn identities() -> Vec<Claim> {
    let cases = sphere_cases();
    vec![
        identity_verdict("hurwitz", "Hurwitz identity"),
        identity_from_rule("rule.d3m3p2", "identity from the d=3, m=3, p=2 sphere rule", lifted_half(&cases[0]), 4, 5040),
        identity_from_rule("rule.d3p2m4", "identity from the (3,2,4) sphere rule", lifted_half(&cases[1]), 5, 22680),
        identity_verdict("schur-as-printed", "Schur identity as printed"),
        identity_verdict("161280-as-printed", "161280 identity as printed"),
    ]
}

/// Deterministic sample of scalars in ℚ(√2).
fn scalar_grid() -> Vec<ExactScalar> {
    let mut out = Vec::new();
    for (a, b) in [(0, 0), (1, 0), (-3, 2), (5, -1), (1, 1), (-2, -7), (7, 3), (0, 1), (2, 5), (-1, 4)] {
        for (num, den) in [(1, 1), (-2, 3)] {
            out.push(ExactScalar::new(rational_from_i64(a * num, den), rational_from_i64(b, den), 2));
        }
    }
    out.push(ExactScalar::new(rational_from_i64(3, 2), rational_from_i64(-1, 1), 2));
    out.push(ExactScalar::new(rational_from_i64(-99, 70), rational_from_i64(1, 1), 2));
    out
}

fn field_axioms() -> (usize, Option<String>) {
    let grid = scalar_grid();
    let mut cases = 0;
    for x in &grid {
        for y in &grid {
            for z in &grid {
                cases += 1;
                let assoc = (x.clone() + y.clone()) + z.clone() == x.clone() + (y.clone() + z.clone());
                let distrib = x * &(y.clone() + z.clone()) == x * y + x * z;
                let mul_assoc = &(x * y) * z == x * &(y * z);
                if !(assoc && distrib && mul_assoc) {
                    return (cases, Some(format!("{x}, {y}, {z}")));
                }
            }
            let sub = (x.clone() + y.clone()) - y.clone() == *x;
            let gap = x.to_f64() - y.to_f64();
            let diff = (x.clone() - y.clone()).signum();
            let sign_ok = if x == y { diff == 0 } else { (gap > 0.0) == (diff > 0) && diff != 0 };
            let div = y.is_zero() || x.try_div(y).map(|r| &r * y == *x).unwrap_or(false);
            if !(sub && sign_ok && div) {
                return (cases, Some(format!("{x}, {y}")));
            }
        }
    }
    (cases, None)
}

/// `S_ℓ(x)` by summing every monomial with exponent multiset `ℓ`.
fn brute_symmetric(part: &Partition, point: &[ExactScalar]) -> ExactScalar {
    let mut want = part.parts().to_vec();
    want.sort_unstable();
    compositions(part.weight(), point.len())
        .into_iter()
        .filter(|e| {
            let mut nz: Vec<u32> = e.iter().copied().filter(|&x| x > 0).collect();
            nz.sort_unstable();
            nz == want
        })
        .fold(ExactScalar::zero(), |acc, e| {
            acc + e.iter().zip(point).fold(ExactScalar::one(), |p, (&k, x)| p * x.pow(k))
        })
}

fn lemma_values() -> (usize, Option<String>) {
    let mut checked = 0;
    let a = q("7/3");
    for t in 1..=5 {
        for part in partitions_of(t) {
            for d in 1..=6usize {
                let n = d + 1;
                for k in 1..=n {
                    let point: Vec<ExactScalar> = (0..n).map(|i| if i < k { ExactScalar::one() } else { ExactScalar::zero() }).collect();
                    checked += 1;
                    if ExactScalar::from(BigInt::from(s_value_at_vk(&part, k))) != brute_symmetric(&part, &point) {
                        return (checked, Some(format!("S_{part} at v_{k}, d={d}")));
                    }
                }
                for p in 1..=d {
                    let mut point = vec![a.clone()];
                    point.extend((0..p).map(|_| ExactScalar::one()));
                    point.resize(n, ExactScalar::zero());
                    checked += 1;
                    let formula = s_value_at_u(&part, &a, p);
                    if formula != brute_symmetric(&part, &point) || formula != symmetric_function_value(&part, &point) {
                        return (checked, Some(format!("S_{part} at u, p={p}, d={d}")));
                    }
                }
            }
        }
    }
    (checked, None)
}

fn sobolev_agreement() -> (usize, Option<String>) {
    let mut checked = 0;
    let cases: Vec<Case> = degree4_cases()
        .into_iter()
        .chain(degree5_cases())
        .chain(sphere_cases())
        .filter(|c| c.d < 8)
        .collect();
    for case in cases {
        let Ok(sol) = case.solve() else {
            return (checked, Some(format!("{} does not solve", case.id)));
        };
        let t = sol.rule.exactness().value();
        for target in [Exactness::Index(t - 1), Exactness::Index(t), Exactness::Index(t + 1), Exactness::Degree(t)] {
            checked += 1;
            let (Ok(m), Ok(s)) = (verify_exactness(&sol.rule, target), verify_invariants(&sol.rule, target)) else {
                return (checked, Some(format!("{} at {target}: verifier error", case.id)));
            };
            if m.passed != s.passed {
                return (checked, Some(format!("{} at {target}: monomial {} vs invariant {}", case.id, m.passed, s.passed)));
            }
        }
    }
    (checked, None)
}

fn weight_sums() -> (usize, Option<String>) {
    let mut cfg = SearchConfig::new(4, WeightExponent::uniform(), 3..=8, Family::simplex_degree4());
    cfg.use_zero_weight_roots = true;
    let mut hits = search_positive(&cfg);
    hits.extend(search_positive(&SearchConfig::new(5, WeightExponent::uniform(), 3..=6, vec![Family::Degree5])));
    for (i, h) in hits.iter().enumerate() {
        let total = h.solution.rule.total_weight();
        if !total.is_one() {
            return (i + 1, Some(format!("{} d={} m={} p={}: Σλ = {total}", h.family, h.d, h.m, h.p)));
        }
    }
    (hits.len(), None)
}

fn antipodal_halving() -> (usize, Option<String>) {
    let mut checked = 0;
    for case in sphere_cases().iter().filter(|c| c.d <= 7) {
        checked += 1;
        let Ok(sol) = case.solve() else {
            return (checked, Some(format!("{} does not solve", case.id)));
        };
        let sphere = sol.rule.simplex_to_sphere().expect("lift");
        let half = match sphere.antipodal_reduce() {
            Ok(h) => h,
            Err(e) => return (checked, Some(format!("{}: {e}", case.id))),
        };
        let halved = sphere.node_count() == half.node_count() * 2u32;
        let exact = verify_exactness(&half, half.exactness()).map(|r| r.passed).unwrap_or(false);
        if !(halved && exact) {
            return (checked, Some(format!("{}: halved {halved}, exact {exact}", case.id)));
        }
    }
    (checked, None)
}

fn properties() -> Vec<Claim> {
    let suites: [(&str, &str, fn() -> (usize, Option<String>)); 5] = [
        ("field-axioms", "ExactScalar field axioms and sign, fixed sample", field_axioms),
        ("symmetric-values", "S_ℓ at v_k and u against monomial expansion, t ≤ 5, d ≤ 6", lemma_values),
        ("sobolev", "invariant and monomial verification agree, d+1 ≤ 8", sobolev_agreement),
        ("weight-sum", "Σλ = 1 for positive rules", weight_sums),
        ("antipodal", "antipodal halving keeps even-index exactness", antipodal_halving),
    ];
    suites
        .iter()
        .map(|(id, reference, f)| {
            let (n, failure) = f();
            let computed = match &failure {
                None => format!("{n} cases passed"),
                Some(w) => format!("counterexample after {n} cases: {w}"),
            };
            claim(9, id, reference, "no counterexample", computed, failure.is_none())
        })
        .collect()
}
