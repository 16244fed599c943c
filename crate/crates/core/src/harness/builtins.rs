//! Built-in counterexample models for classically valid arguments that fail
//! for the holistic connectives. Each model is a bottom-level qumix
//! expression lifted through the inverse gates of its context.

use serde::Serialize;

use crate::perspective::TruthPerspective;
use crate::spec::{ApplyExpr, Assign, GateSpec, LevelRef, ModelSpec, QumixExpr};

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    /// Stated alongside the published construction.
    Published,
    /// Obtained by evaluating the constructed model directly.
    Derived,
}

#[derive(Clone, Debug, Serialize)]
pub struct Target {
    pub formula: String,
    pub expected: f64,
    pub origin: Origin,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteCase {
    pub id: &'static str,
    /// The argument the model refutes, in formula syntax.
    pub argument: &'static str,
    pub spec: ModelSpec,
    pub targets: Vec<Target>,
    /// Pairs `(premise, conclusion)` of target indices with `p(premise) > p(conclusion)`.
    pub failures: Vec<(usize, usize)>,
}

fn h() -> QumixExpr {
    QumixExpr::MixedId(1)
}

fn p0() -> QumixExpr {
    QumixExpr::Proj("0".into())
}

fn tensor(parts: Vec<QumixExpr>) -> QumixExpr {
    QumixExpr::Tensor(parts)
}

fn gate(name: &str, args: &[usize], to: QumixExpr) -> QumixExpr {
    QumixExpr::Apply(Box::new(ApplyExpr {
        gate: GateSpec::new(name, args),
        to,
        at: None,
    }))
}

fn gate_at(name: &str, args: &[usize], at: usize, to: QumixExpr) -> QumixExpr {
    QumixExpr::Apply(Box::new(ApplyExpr {
        gate: GateSpec::new(name, args),
        to,
        at: Some(at),
    }))
}

fn t(m: usize, n: usize, p: usize, to: QumixExpr) -> QumixExpr {
    gate("T", &[m, n, p], to)
}

fn not(n: usize, to: QumixExpr) -> QumixExpr {
    gate("NOT", &[n], to)
}

/// `(|a> - |b>)/sqrt(2)` on `n` qubits, basis labels written as bit strings.
fn antisym(a: &str, b: &str) -> QumixExpr {
    let n = a.len();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![[0.0, 0.0]; 1 << n];
    amps[usize::from_str_radix(a, 2).expect("bit string")] = [s, 0.0];
    amps[usize::from_str_radix(b, 2).expect("bit string")] = [-s, 0.0];
    QumixExpr::Pure(amps)
}

fn singlet() -> QumixExpr {
    antisym("01", "10")
}

/// `T(1,1,1)(I/2 x I/2 x P0)`: the conjunction of two fair atoms.
fn fair_and() -> QumixExpr {
    t(1, 1, 1, tensor(vec![h(), h(), p0()]))
}

fn spec(formula: &str, expr: QumixExpr) -> ModelSpec {
    ModelSpec {
        truth_perspective: TruthPerspective::identity(),
        formula: formula.into(),
        assign: Assign {
            level: LevelRef::Named("bottom".into()),
            expr,
        },
    }
}

fn published(formula: &str, expected: f64) -> Target {
    Target {
        formula: formula.into(),
        expected,
        origin: Origin::Published,
    }
}

fn derived(formula: &str, expected: f64) -> Target {
    Target {
        formula: formula.into(),
        expected,
        origin: Origin::Derived,
    }
}

/// The ten cases, in order.
pub fn builtin_cases() -> Vec<SuiteCase> {
    let distributive = "(q1 & (q2 | q3)) & ((q1 & q2) | (q1 & q3))";
    let or_of_fair = || not(3, fair_and());
    vec![
        SuiteCase {
            id: "nval-1",
            argument: "q1 |= q1 & q1",
            spec: spec("q1 & q1", fair_and()),
            targets: vec![published("q1", 0.5), published("q1 & q1", 0.25)],
            failures: vec![(0, 1)],
        },
        SuiteCase {
            id: "nval-2",
            argument: "q1 & q2 |= q2 & q1",
            spec: spec(
                "(q1 & q2) & (q2 & q1)",
                t(
                    3,
                    3,
                    1,
                    tensor(vec![
                        fair_and(),
                        t(1, 1, 1, tensor(vec![singlet(), p0()])),
                        p0(),
                    ]),
                ),
            ),
            targets: vec![published("q1 & q2", 0.25), published("q2 & q1", 0.0)],
            failures: vec![(0, 1)],
        },
        SuiteCase {
            id: "nval-3",
            argument: "q1 & (q2 & q3) |= (q1 & q2) & q3",
            spec: spec(
                "(q1 & (q2 & q3)) & ((q1 & q2) & q3)",
                t(
                    5,
                    5,
                    1,
                    tensor(vec![
                        t(1, 3, 1, tensor(vec![h(), fair_and(), p0()])),
                        t(
                            3,
                            1,
                            1,
                            gate_at("T", &[1, 1, 1], 0, antisym("01010", "10000")),
                        ),
                        p0(),
                    ]),
                ),
            ),
            targets: vec![
                published("q1 & (q2 & q3)", 0.125),
                published("(q1 & q2) & q3", 0.0),
            ],
            failures: vec![(0, 1)],
        },
        SuiteCase {
            id: "nval-4",
            argument: "(q1 & q2) & q3 |= q1 & (q2 & q3)",
            spec: spec(
                "((q1 & q2) & q3) & (q1 & (q2 & q3))",
                t(
                    5,
                    5,
                    1,
                    tensor(vec![
                        t(3, 1, 1, tensor(vec![fair_and(), h(), p0()])),
                        t(
                            1,
                            3,
                            1,
                            gate_at("T", &[1, 1, 1], 1, antisym("01000", "10100")),
                        ),
                        p0(),
                    ]),
                ),
            ),
            targets: vec![
                derived("(q1 & q2) & q3", 0.125),
                derived("q1 & (q2 & q3)", 0.0),
            ],
            failures: vec![(0, 1)],
        },
        SuiteCase {
            id: "nval-5",
            argument: "q1 & (q2 | q3) |= (q1 & q2) | (q1 & q3)",
            spec: spec(
                distributive,
                t(
                    5,
                    7,
                    1,
                    tensor(vec![
                        t(
                            1,
                            3,
                            1,
                            tensor(vec![
                                h(),
                                not(3, t(1, 1, 1, tensor(vec![singlet(), p0()]))),
                                p0(),
                            ]),
                        ),
                        not(
                            7,
                            t(3, 3, 1, tensor(vec![or_of_fair(), or_of_fair(), p0()])),
                        ),
                        p0(),
                    ]),
                ),
            ),
            targets: vec![
                published("q1 & (q2 | q3)", 0.5),
                published("(q1 & q2) | (q1 & q3)", 0.4375),
            ],
            failures: vec![(0, 1)],
        },
        SuiteCase {
            id: "nval-6",
            argument: "(q1 & q2) | (q1 & q3) |= q1 & (q2 | q3)",
            spec: spec(
                distributive,
                t(
                    5,
                    7,
                    1,
                    tensor(vec![
                        t(1, 3, 1, tensor(vec![h(), or_of_fair(), p0()])),
                        not(
                            7,
                            t(3, 3, 1, tensor(vec![or_of_fair(), or_of_fair(), p0()])),
                        ),
                        p0(),
                    ]),
                ),
            ),
            targets: vec![
                published("(q1 & q2) | (q1 & q3)", 0.4375),
                published("q1 & (q2 | q3)", 0.375),
            ],
            failures: vec![(0, 1)],
        },
        SuiteCase {
            id: "nval-7",
            argument: "q3 |= q1, q3 |= q2 but not q3 |= q1 & q2",
            spec: spec(
                "(q1 & q2) & q3",
                t(3, 1, 1, tensor(vec![fair_and(), h(), p0()])),
            ),
            targets: vec![
                published("q1", 0.5),
                published("q2", 0.5),
                published("q3", 0.5),
                published("q1 & q2", 0.25),
            ],
            failures: vec![(2, 3)],
        },
        SuiteCase {
            id: "nval-8",
            argument: "q1 & ~q1 |= q2",
            spec: spec(
                "(q1 & ~q1) & q2",
                t(3, 1, 1, tensor(vec![fair_and(), p0(), p0()])),
            ),
            targets: vec![published("q1 & ~q1", 0.25), published("q2", 0.0)],
            failures: vec![(0, 1)],
        },
        SuiteCase {
            id: "nval-9",
            argument: "q1 (+) q2 |= q2 (+) q1",
            spec: spec(
                "(q1 (+) q2) & (q2 (+) q1)",
                t(
                    2,
                    2,
                    1,
                    tensor(vec![
                        gate("XOR", &[1, 1], singlet()),
                        gate("XOR", &[1, 1], tensor(vec![h(), h()])),
                        p0(),
                    ]),
                ),
            ),
            targets: vec![published("q1 (+) q2", 1.0), published("q2 (+) q1", 0.5)],
            failures: vec![(0, 1)],
        },
        SuiteCase {
            id: "nval-10",
            argument: "q1 (+) q2 |= q1 | q2",
            spec: spec(
                "(q1 (+) q2) & (q1 | q2)",
                t(
                    2,
                    3,
                    1,
                    tensor(vec![
                        gate("XOR", &[1, 1], singlet()),
                        not(
                            3,
                            t(
                                1,
                                1,
                                1,
                                gate_at(
                                    "NOT",
                                    &[1],
                                    1,
                                    gate_at("NOT", &[1], 0, tensor(vec![h(), h(), p0()])),
                                ),
                            ),
                        ),
                        p0(),
                    ]),
                ),
            ),
            targets: vec![published("q1 (+) q2", 1.0), published("q1 | q2", 0.75)],
            failures: vec![(0, 1)],
        },
    ]
}

pub fn builtin(id: &str) -> Option<SuiteCase> {
    builtin_cases().into_iter().find(|c| c.id == id)
}
