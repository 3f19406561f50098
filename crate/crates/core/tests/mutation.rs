//! Negative controls: every mutant of a certified derivation is rejected.

mod common;

#[test]
fn every_mutant_is_killed() {
    let t = common::run_mutation_suite();
    assert!(t.total >= 20, "only {} mutants", t.total);
    assert!(
        t.survivors.is_empty(),
        "{} of {} mutants survived:\n{}",
        t.survivors.len(),
        t.total,
        t.survivors.join("\n")
    );
}
