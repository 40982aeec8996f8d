//! One line per acceptance criterion. Criteria whose published values do not
//! reproduce are expected to stay red; see the claim details for why.

use std::io::Write;

use cubforge_cli::report;

const KNOWN_RED: [u8; 5] = [3, 4, 5, 6, 8];

#[test]
fn acceptance() {
    let r = report::run(&[]);
    let criteria = r.criteria();
    // Written to the raw handle so the lines show without --nocapture.
    let mut out = std::io::stdout().lock();
    for (n, ok) in &criteria {
        writeln!(out, "criterion {n}: {}", if *ok { "PASS" } else { "FAIL" }).unwrap();
        for c in r.claims.iter().filter(|c| c.criterion == *n && !c.passed) {
            writeln!(out, "    {}: expected {} / computed {}", c.id, c.expected, c.computed).unwrap();
        }
    }
    out.flush().unwrap();
    drop(out);
    assert_eq!(criteria.len(), report::CRITERIA.len());
    for (n, ok) in criteria {
        assert_eq!(ok, !KNOWN_RED.contains(&n), "criterion {n} changed state");
    }
    let mut failing: Vec<String> = r.claims.iter().filter(|c| !c.passed).map(|c| format!("{}.{}", c.criterion, c.id)).collect();
    failing.sort();
    assert_eq!(
        failing,
        [
            "3.d21p11m5.weights",
            "4.d3m3p2.simplex",
            "4.d3m3p2.sphere",
            "5.degree5.triples",
            "5.sphere.vertex-free.pairs",
            "6.index6.uniform",
            "8.161280-as-printed",
            "8.schur-as-printed",
        ]
    );
}
