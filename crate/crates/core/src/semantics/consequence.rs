//! Counterexample search for logical consequence.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{random_atom_meanings, sample_entangled_model, ScopedModel};
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::perspective::TruthPerspective;
use crate::spec::ModelSpec;
use crate::tensor::Qumix;
use crate::tol;

/// Which random models a search draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Products of one-qubit atom meanings, preceded by an exhaustive pass
    /// over the corner states `I/2`, falsity and truth.
    Comp,
    /// Entangled seeds that satisfy the model conditions.
    Ent,
    /// Alternates the two.
    Both,
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "comp" => Ok(Strategy::Comp),
            "ent" => Ok(Strategy::Ent),
            "both" => Ok(Strategy::Both),
            other => Err(format!(
                "unknown strategy `{other}` (expected comp, ent or both)"
            )),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Comp => "comp",
            Strategy::Ent => "ent",
            Strategy::Both => "both",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub context: String,
    pub generator: String,
    /// Index of the model within the search (vertices first, then random trials).
    pub trial: usize,
    pub prob_alpha: f64,
    pub prob_beta: f64,
    /// Replayable model specification.
    pub model: ModelSpec,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Verdict {
    /// No counterexample among the models tried in the listed contexts.
    NotFalsified {
        trials: usize,
        contexts: Vec<String>,
        /// Entangled trials that found no valid seed within the attempt cap.
        starved: usize,
    },
    Counterexample(Box<Counterexample>),
    /// Classical fragment only: every register model was checked.
    HoldsExhaustively {
        models: usize,
        context: String,
    },
}

impl Verdict {
    pub fn is_counterexample(&self) -> bool {
        matches!(self, Verdict::Counterexample(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NotFalsified {
                trials,
                contexts,
                starved,
            } => {
                write!(
                    f,
                    "not falsified after {trials} models in context(s) {}",
                    contexts.join("; ")
                )?;
                if *starved > 0 {
                    write!(f, " ({starved} entangled trials starved)")?;
                }
                Ok(())
            }
            Verdict::Counterexample(c) => write!(
                f,
                "counterexample in context {} ({} model #{}): p(alpha) = {} > p(beta) = {}",
                c.context, c.generator, c.trial, c.prob_alpha, c.prob_beta
            ),
            Verdict::HoldsExhaustively { models, context } => {
                write!(f, "holds in all {models} register models of {context}")
            }
        }
    }
}

/// Corner enumeration is skipped above this many atoms.
const MAX_VERTEX_ATOMS: usize = 6;
const BATCH: usize = 32;

fn check(
    model: &ScopedModel,
    alpha: &Formula,
    beta: &Formula,
    generator: &str,
    trial: usize,
) -> Result<Option<Counterexample>> {
    let pa = model.probability_of(alpha)?;
    let pb = model.probability_of(beta)?;
    if pa > pb + tol::semantic() {
        return Ok(Some(Counterexample {
            context: model.formula().to_string(),
            generator: generator.into(),
            trial,
            prob_alpha: pa,
            prob_beta: pb,
            model: ModelSpec::from_model(model),
        }));
    }
    Ok(None)
}

/// Looks for a model and context in which `alpha` is more probable than
/// `beta`. Contexts default to `alpha & beta`. Deterministic given `seed`.
pub fn search_counterexample(
    alpha: &Formula,
    beta: &Formula,
    contexts: &[Formula],
    strategy: Strategy,
    trials: usize,
    seed: u64,
) -> Result<Verdict> {
    let default = [Formula::and(alpha.clone(), beta.clone())];
    let contexts = if contexts.is_empty() {
        &default[..]
    } else {
        contexts
    };
    for ctx in contexts {
        for f in [alpha, beta] {
            if !f.is_subformula_of(ctx) {
                return Err(Error::NotSubformula {
                    formula: f.to_string(),
                    context: ctx.to_string(),
                });
            }
        }
    }
    let t = TruthPerspective::identity();
    let mut total = 0;
    let mut starved = 0;
    for (ci, ctx) in contexts.iter().enumerate() {
        let atoms: Vec<u32> = ctx.atoms().into_iter().collect();
        let mut index = 0;
        if strategy != Strategy::Ent && atoms.len() <= MAX_VERTEX_ATOMS {
            let corners = [
                Qumix::maximally_mixed(1),
                t.projector_state(0),
                t.projector_state(1),
            ];
            let count = 3usize.pow(atoms.len() as u32);
            for v in 0..count {
                let meanings: BTreeMap<u32, Qumix> = atoms
                    .iter()
                    .enumerate()
                    .map(|(j, &a)| {
                        let digit = v / 3usize.pow((atoms.len() - 1 - j) as u32) % 3;
                        (a, corners[digit].clone())
                    })
                    .collect();
                let model = ScopedModel::compositional(&t, ctx, &meanings)?;
                if let Some(c) = check(&model, alpha, beta, "compositional", index)? {
                    return Ok(Verdict::Counterexample(Box::new(c)));
                }
                index += 1;
            }
        }
        total += index;

        let run_trial = |i: usize| -> Result<(Option<Counterexample>, bool)> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(((ci as u64) << 32) | i as u64);
            let entangled = match strategy {
                Strategy::Comp => false,
                Strategy::Ent => true,
                Strategy::Both => i % 2 == 1,
            };
            if entangled {
                let (model, _) = sample_entangled_model(&t, ctx, &mut rng)?;
                match model {
                    Some(m) => Ok((check(&m, alpha, beta, "entangled", index + i)?, false)),
                    None => Ok((None, true)),
                }
            } else {
                let meanings = random_atom_meanings(&mut rng, atoms.iter().copied());
                let m = ScopedModel::compositional(&t, ctx, &meanings)?;
                Ok((check(&m, alpha, beta, "compositional", index + i)?, false))
            }
        };

        let mut start = 0;
        while start < trials {
            let end = (start + BATCH).min(trials);
            let results: Vec<Result<(Option<Counterexample>, bool)>> =
                (start..end).into_par_iter().map(run_trial).collect();
            for r in results {
                let (found, was_starved) = r?;
                if let Some(c) = found {
                    return Ok(Verdict::Counterexample(Box::new(c)));
                }
                starved += usize::from(was_starved);
            }
            start = end;
        }
        total += trials;
    }
    Ok(Verdict::NotFalsified {
        trials: total,
        contexts: contexts.iter().map(|c| c.to_string()).collect(),
        starved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn conjunction_entails_conjunct() {
        let v = search_counterexample(&p("q1 & q2"), &p("q1"), &[], Strategy::Both, 40, 1).unwrap();
        assert!(!v.is_counterexample(), "{v}");
    }

    #[test]
    fn atom_does_not_entail_its_self_conjunction() {
        let v = search_counterexample(&p("q1"), &p("q1 & q1"), &[], Strategy::Comp, 10, 1).unwrap();
        let Verdict::Counterexample(c) = v else {
            panic!("expected a counterexample");
        };
        assert!((c.prob_alpha - 0.5).abs() < 1e-12);
        assert!((c.prob_beta - 0.25).abs() < 1e-12);
        assert_eq!(c.trial, 0);
    }

    #[test]
    fn contradiction_does_not_entail_everything() {
        let v =
            search_counterexample(&p("q1 & ~q1"), &p("q2"), &[], Strategy::Comp, 10, 1).unwrap();
        let Verdict::Counterexample(c) = v else {
            panic!("expected a counterexample");
        };
        assert!((c.prob_alpha - 0.25).abs() < 1e-12);
        assert!(c.prob_beta.abs() < 1e-12);
    }

    #[test]
    fn search_is_deterministic() {
        let a =
            search_counterexample(&p("q1 & q2"), &p("q2 & q1"), &[], Strategy::Ent, 30, 9).unwrap();
        let b =
            search_counterexample(&p("q1 & q2"), &p("q2 & q1"), &[], Strategy::Ent, 30, 9).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn rejects_foreign_formulas() {
        let err = search_counterexample(&p("q1"), &p("q2"), &[p("q1 & q3")], Strategy::Comp, 1, 0);
        assert!(matches!(err, Err(Error::NotSubformula { .. })));
    }

    #[test]
    fn strategy_names() {
        assert_eq!("both".parse::<Strategy>().unwrap(), Strategy::Both);
        assert!("x".parse::<Strategy>().is_err());
    }
}
