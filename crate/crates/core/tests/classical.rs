mod common;

use common::{atoms, entails, formulas};
use hqcl::semantics::check_classical_consequence;
use hqcl::{parse, Formula};

fn agrees(a: &Formula, b: &Formula, k: usize) {
    let verdict = check_classical_consequence(a, b).unwrap();
    assert_eq!(
        !verdict.is_counterexample(),
        entails(a, b, k),
        "{a} |= {b}: {verdict}"
    );
}

#[test]
fn register_models_match_truth_tables_up_to_two_connectives() {
    let leaves = atoms(3);
    let all: Vec<Vec<Formula>> = (0..=2).map(|n| formulas(&leaves, n)).collect();
    for na in 0..=2 {
        for nb in 0..=2 - na {
            for a in &all[na] {
                for b in &all[nb] {
                    agrees(a, b, 3);
                }
            }
        }
    }
}

#[test]
fn constants_in_the_classical_fragment() {
    let mut leaves = atoms(2);
    leaves.extend([Formula::True, Formula::False]);
    let all: Vec<Formula> = (0..=1).flat_map(|n| formulas(&leaves, n)).collect();
    for a in &all {
        for b in &all {
            agrees(a, b, 2);
        }
    }
}

#[test]
fn quantum_failures_hold_classically() {
    for (a, b) in [
        ("q1", "q1 & q1"),
        ("q1 & q2", "q2 & q1"),
        ("q1 & (q2 & q3)", "(q1 & q2) & q3"),
        ("q1 & (q2 | q3)", "(q1 & q2) | (q1 & q3)"),
        ("q1 (+) q2", "q2 (+) q1"),
    ] {
        let v = check_classical_consequence(&parse(a).unwrap(), &parse(b).unwrap()).unwrap();
        assert!(!v.is_counterexample(), "{a} |= {b}");
    }
    let v =
        check_classical_consequence(&parse("q1 & ~q1").unwrap(), &parse("q2").unwrap()).unwrap();
    assert!(!v.is_counterexample());
}

#[test]
fn register_counterexamples_replay() {
    let a = parse("q1 | q2").unwrap();
    let b = parse("q1 (+) q2").unwrap();
    let hqcl::Verdict::Counterexample(c) = check_classical_consequence(&a, &b).unwrap() else {
        panic!("q1 | q2 does not entail q1 (+) q2");
    };
    let m = c.model.build().unwrap();
    assert!(m.validate().is_model());
    assert_eq!(m.probability_of(&a).unwrap(), c.prob_alpha);
    assert_eq!(m.probability_of(&b).unwrap(), c.prob_beta);
}
