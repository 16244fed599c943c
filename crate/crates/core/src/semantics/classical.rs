//! Consequence restricted to register models of Boolean formulas.

use super::consequence::{Counterexample, Verdict};
use super::ScopedModel;
use crate::error::{Error, Result};
use crate::formula::{Formula, SyntacticalTree};
use crate::perspective::TruthPerspective;
use crate::spec::ModelSpec;
use crate::tensor::{Qumix, StateVector};

/// Checks `alpha |= beta` over every register model of the context
/// `alpha & beta` at the canonical perspective: each atom is `|0>` or `|1>`.
///
/// Level gates of Boolean formulas are basis permutations, so each model is
/// evaluated by tracking a single basis index down the tree.
pub fn check_classical_consequence(alpha: &Formula, beta: &Formula) -> Result<Verdict> {
    for f in [alpha, beta] {
        if !f.is_boolean() {
            return Err(Error::NonBoolean(f.to_string()));
        }
    }
    let context = Formula::and(alpha.clone(), beta.clone());
    let tree = SyntacticalTree::new(&context);
    let gates = tree.gate_tree(&TruthPerspective::identity());
    let n = tree.n_qubits();
    let h = tree.height();
    let atoms: Vec<u32> = context.atoms().into_iter().collect();
    let k = atoms.len();
    let leaves = tree.leaves();
    // alpha and beta are the first two blocks of level 2.
    let a_bit = tree.node_span(tree.level(2)?[0]);
    let b_bit = tree.node_span(tree.level(2)?[1]);
    let last = |span: (usize, usize)| 1usize << (n - span.0 - span.1);

    for x in 0..1usize << k {
        let mut index = 0usize;
        for (q, leaf) in leaves.iter().enumerate() {
            let bit = match tree.node_formula(leaf.node) {
                Formula::Atom(a) => {
                    let j = atoms.iter().position(|b| b == a).expect("known atom");
                    (x >> (k - 1 - j)) & 1
                }
                Formula::True => 1,
                _ => 0,
            };
            index |= bit << (n - 1 - q);
        }
        let top = index;
        for i in (2..h).rev() {
            index = gates.gate(i).permute_index(index, n);
        }
        let pa = f64::from(u8::from(index & last(a_bit) != 0));
        let pb = f64::from(u8::from(index & last(b_bit) != 0));
        if pa > pb {
            let seed = Qumix::pure(StateVector::basis(n, top));
            let model = ScopedModel::build(&TruthPerspective::identity(), &context, h, seed)?;
            return Ok(Verdict::Counterexample(Box::new(Counterexample {
                context: context.to_string(),
                generator: "register".into(),
                trial: x,
                prob_alpha: pa,
                prob_beta: pb,
                model: ModelSpec::from_model(&model),
            })));
        }
    }
    Ok(Verdict::HoldsExhaustively {
        models: 1 << k,
        context: context.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn holds(a: &str, b: &str) -> bool {
        let v = check_classical_consequence(&parse(a).unwrap(), &parse(b).unwrap()).unwrap();
        !v.is_counterexample()
    }

    #[test]
    fn classical_examples() {
        assert!(holds("q1 & q2", "q1"));
        assert!(holds("q1 & q2", "q2 & q1"));
        assert!(holds("q1", "q1 & q1"));
        assert!(holds("f", "q1"));
        assert!(holds("q1", "q1 | q2"));
        assert!(!holds("q1", "q2"));
        assert!(!holds("q1 | q2", "q1 & q2"));
        assert!(!holds("t", "q1 (+) q1"));
    }

    #[test]
    fn counterexample_replays() {
        let v =
            check_classical_consequence(&parse("q1 | q2").unwrap(), &parse("q1").unwrap()).unwrap();
        let Verdict::Counterexample(c) = v else {
            panic!("expected counterexample");
        };
        let model = c.model.build().unwrap();
        assert_eq!(
            model.probability_of(&parse("q1 | q2").unwrap()).unwrap(),
            1.0
        );
        assert_eq!(model.probability_of(&parse("q1").unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn rejects_quantum_connectives() {
        assert!(matches!(
            check_classical_consequence(&parse("sid q1").unwrap(), &parse("q1").unwrap()),
            Err(Error::NonBoolean(_))
        ));
    }
}
