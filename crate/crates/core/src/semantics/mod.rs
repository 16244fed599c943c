//! Holistic models scoped to one context formula.
//!
//! A model assigns a qumix to every level of the context's syntactical tree;
//! consecutive levels are linked by the level gates, and the meaning of an
//! occurrence is the reduced state of its block.

mod classical;
mod consequence;
mod generate;
mod validate;

use std::collections::BTreeMap;

pub use classical::check_classical_consequence;
pub use consequence::{search_counterexample, Counterexample, Strategy, Verdict};
pub use generate::{
    compositional_seed, copy_encoded_seed, paired_seed, random_atom_meanings, random_qubit_state,
    random_qumix, sample_entangled_model, ENTANGLED_ATTEMPTS,
};
pub use validate::{ConstantViolation, Diagnostics, NormalityViolation};

use crate::error::{Error, Result};
use crate::formula::{Formula, GateTree, Occurrence, SyntacticalTree};
use crate::perspective::TruthPerspective;
use crate::tensor::Qumix;

#[derive(Clone, Debug)]
pub struct ScopedModel {
    tree: SyntacticalTree,
    gates: GateTree,
    /// `levels[i]` is the meaning of level `i + 1`.
    levels: Vec<Qumix>,
}

impl ScopedModel {
    /// Fills every level from a seed placed at `seed_level` (1-based): lower
    /// levels by applying gates, higher levels by applying their inverses.
    /// Constants and normality are not checked here; see [`ScopedModel::validate`].
    pub fn build(
        perspective: &TruthPerspective,
        context: &Formula,
        seed_level: usize,
        seed: Qumix,
    ) -> Result<Self> {
        let tree = SyntacticalTree::new(context);
        let gates = tree.gate_tree(perspective);
        let h = tree.height();
        if seed_level == 0 || seed_level > h {
            return Err(Error::IndexOutOfRange {
                what: "level",
                index: seed_level,
                len: h,
            });
        }
        if seed.n_qubits() != tree.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: tree.n_qubits(),
                found: seed.n_qubits(),
            });
        }
        let mut levels: Vec<Option<Qumix>> = vec![None; h];
        levels[seed_level - 1] = Some(seed);
        for i in (1..seed_level).rev() {
            let above = levels[i].as_ref().expect("filled");
            levels[i - 1] = Some(gates.descend(i, above));
        }
        for i in seed_level..h {
            let below = levels[i - 1].as_ref().expect("filled");
            levels[i] = Some(gates.ascend(i, below));
        }
        Ok(Self {
            tree,
            gates,
            levels: levels.into_iter().map(|l| l.expect("filled")).collect(),
        })
    }

    /// Seeds the top level with the tensor product of one-qubit meanings per
    /// atomic occurrence; equal atoms share their meaning and constants get
    /// the truth-perspective's truth and falsity.
    pub fn compositional(
        perspective: &TruthPerspective,
        context: &Formula,
        atom_meanings: &BTreeMap<u32, Qumix>,
    ) -> Result<Self> {
        let seed = compositional_seed(perspective, context, atom_meanings)?;
        let tree = SyntacticalTree::new(context);
        Self::build(perspective, context, tree.height(), seed)
    }

    pub fn perspective(&self) -> &TruthPerspective {
        self.gates.perspective()
    }

    pub fn tree(&self) -> &SyntacticalTree {
        &self.tree
    }

    pub fn gate_tree(&self) -> &GateTree {
        &self.gates
    }

    pub fn formula(&self) -> &Formula {
        self.tree.formula()
    }

    pub fn height(&self) -> usize {
        self.tree.height()
    }

    pub fn n_qubits(&self) -> usize {
        self.tree.n_qubits()
    }

    /// Meaning of a 1-based level.
    pub fn level_meaning(&self, level: usize) -> Result<&Qumix> {
        self.levels
            .get(level.wrapping_sub(1))
            .ok_or(Error::IndexOutOfRange {
                what: "level",
                index: level,
                len: self.levels.len(),
            })
    }

    /// Meaning of the whole context; also its generalized truth-value.
    pub fn meaning(&self) -> &Qumix {
        &self.levels[0]
    }

    pub fn top_meaning(&self) -> &Qumix {
        self.levels.last().expect("at least one level")
    }

    /// Reduced state of the occurrence's level meaning on its block.
    pub fn contextual_meaning(&self, occ: &Occurrence) -> Result<Qumix> {
        self.tree.check(occ)?;
        let rho = &self.levels[occ.level - 1];
        if occ.width == self.n_qubits() {
            return Ok(rho.clone());
        }
        let kept: Vec<usize> = (occ.offset..occ.offset + occ.width).collect();
        rho.reduce(&kept)
    }

    /// Contextual meaning of the first occurrence of a subformula.
    pub fn meaning_of(&self, sub: &Formula) -> Result<Qumix> {
        let occ = self.first_occurrence(sub)?;
        self.contextual_meaning(&occ)
    }

    pub fn first_occurrence(&self, sub: &Formula) -> Result<Occurrence> {
        self.tree
            .node_occurrences(sub)
            .into_iter()
            .next()
            .ok_or_else(|| Error::NotSubformula {
                formula: sub.to_string(),
                context: self.formula().to_string(),
            })
    }

    /// Probability of an occurrence's contextual meaning, read from the last
    /// qubit of its block.
    pub fn probability_at(&self, occ: &Occurrence) -> Result<f64> {
        self.tree.check(occ)?;
        let last = self.levels[occ.level - 1].single_qubit_state(occ.offset + occ.width - 1);
        let p = (self.perspective().truth_projector_1q() * last).trace().re;
        Ok(p.clamp(0.0, 1.0))
    }

    pub fn probability_of(&self, sub: &Formula) -> Result<f64> {
        let occ = self.first_occurrence(sub)?;
        self.probability_at(&occ)
    }

    /// Probability of the whole context.
    pub fn probability(&self) -> f64 {
        self.perspective().probability(self.meaning())
    }

    /// The context is true in the model when its probability is 1.
    pub fn is_true(&self) -> bool {
        self.probability() >= 1.0 - crate::tol::semantic()
    }

    /// Whether the meaning of `alpha` precedes that of `beta` in this context.
    pub fn consequence_holds(&self, alpha: &Occurrence, beta: &Occurrence) -> Result<bool> {
        let pa = self.probability_at(alpha)?;
        let pb = self.probability_at(beta)?;
        Ok(pa <= pb + crate::tol::semantic())
    }

    /// Conjugates every level by `T^(n)`, giving a model for the perspective
    /// `T` composed with the current one.
    pub fn transport(&self, t: &TruthPerspective) -> Result<Self> {
        let composed = TruthPerspective::new(t.matrix() * self.perspective().matrix())?;
        let levels = self.levels.iter().map(|rho| t.transport(rho)).collect();
        Ok(Self {
            tree: self.tree.clone(),
            gates: self.tree.gate_tree(&composed),
            levels,
        })
    }

    /// Extends a model of `gamma` to `gamma & beta` for a `beta` whose atoms do
    /// not occur in `gamma`. The new top level is the old top level, then the
    /// product of `beta`'s atomic meanings, then the falsity ancilla.
    pub fn extend(&self, beta: &Formula, atom_meanings: &BTreeMap<u32, Qumix>) -> Result<Self> {
        let shared: Vec<u32> = self
            .formula()
            .atoms()
            .intersection(&beta.atoms())
            .copied()
            .collect();
        if !shared.is_empty() {
            return Err(Error::SharedAtoms(shared));
        }
        let t = self.perspective();
        let beta_seed = compositional_seed(t, beta, atom_meanings)?;
        let top = self
            .top_meaning()
            .tensor(&beta_seed)
            .tensor(&t.projector_state(0));
        let context = Formula::and(self.formula().clone(), beta.clone());
        let h = SyntacticalTree::new(&context).height();
        Self::build(t, &context, h, top)
    }

    /// Largest trace distance between a subformula's meaning here and at any
    /// of its occurrences in `extended`, over all subformulas of this context.
    pub fn extension_residual(&self, extended: &ScopedModel) -> Result<f64> {
        let mut worst = 0.0f64;
        for occ in self.tree.primary_occurrences() {
            let f = self.tree.node_formula(occ.node);
            let here = self.contextual_meaning(&occ)?;
            for other in extended.tree.occurrences(f) {
                let there = extended.contextual_meaning(&other)?;
                worst = worst.max(here.trace_distance(&there)?);
            }
        }
        Ok(worst)
    }

    pub fn validate(&self) -> Diagnostics {
        validate::validate(self)
    }

    pub(crate) fn levels(&self) -> &[Qumix] {
        &self.levels
    }
}
