//! Model diagnostics: gate linkage, constant meanings, normality and
//! compositionality.

use std::collections::BTreeMap;

use serde::Serialize;

use super::ScopedModel;
use crate::formula::{Formula, Occurrence};
use crate::tensor::{hermitian_trace_norm, Matrix, Matrix2c, Qumix, C64, DENSE_QUBIT_CAP};
use crate::tol;

#[derive(Clone, Debug, Serialize)]
pub struct ConstantViolation {
    pub constant: String,
    pub level: usize,
    pub position: usize,
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalityViolation {
    pub formula: String,
    /// `(level, position)` of the two disagreeing occurrences.
    pub first: (usize, usize),
    pub second: (usize, usize),
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostics {
    /// Trace distance between level `i` and the gate image of level `i + 1`.
    pub linkage: Vec<f64>,
    pub constant_violations: Vec<ConstantViolation>,
    pub normality_violations: Vec<NormalityViolation>,
    /// The top level is the product of its atomic occurrences' meanings.
    pub compositional: bool,
    pub errors: Vec<String>,
}

impl Diagnostics {
    pub fn max_linkage(&self) -> f64 {
        self.linkage.iter().copied().fold(0.0, f64::max)
    }

    pub fn linked(&self) -> bool {
        self.max_linkage() <= tol::semantic()
    }

    /// Linkage, constant meanings and normality all hold.
    pub fn is_model(&self) -> bool {
        self.linked()
            && self.constant_violations.is_empty()
            && self.normality_violations.is_empty()
            && self.errors.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut lines = Vec::new();
        if !self.linked() {
            lines.push(format!("linkage residual {:e}", self.max_linkage()));
        }
        for c in &self.constant_violations {
            lines.push(format!(
                "constant `{}` at level {} position {} is off by {:e}",
                c.constant,
                c.level,
                c.position + 1,
                c.distance
            ));
        }
        for v in &self.normality_violations {
            lines.push(format!(
                "occurrences of `{}` at (level {}, position {}) and (level {}, position {}) differ by {:e}",
                v.formula,
                v.first.0,
                v.first.1 + 1,
                v.second.0,
                v.second.1 + 1,
                v.distance
            ));
        }
        lines.extend(self.errors.iter().cloned());
        lines.join("\n")
    }
}

fn m2_distance(a: &Matrix2c, b: &Matrix2c) -> f64 {
    let d = a - b;
    hermitian_trace_norm(&Matrix::from_iterator(2, 2, d.iter().copied()))
}

pub(super) fn validate(model: &ScopedModel) -> Diagnostics {
    let tol = tol::semantic();
    let mut errors = Vec::new();
    let levels = model.levels();
    let gates = model.gate_tree();
    let mut linkage = Vec::new();
    for i in 1..levels.len() {
        let image = gates.descend(i, &levels[i]);
        match image.trace_distance(&levels[i - 1]) {
            Ok(d) => linkage.push(d),
            Err(e) => {
                errors.push(format!("linkage at level {i}: {e}"));
                linkage.push(f64::INFINITY);
            }
        }
    }

    let tree = model.tree();
    let t = model.perspective();
    let primary = tree.primary_occurrences();
    let mut constant_violations = Vec::new();
    for occ in &primary {
        let (target, name) = match tree.node_formula(occ.node) {
            Formula::True => (t.truth_projector_1q(), "t"),
            Formula::False => (t.falsity_projector_1q(), "f"),
            _ => continue,
        };
        let state = levels[occ.level - 1].single_qubit_state(occ.offset);
        let distance = m2_distance(&state, &target);
        if distance > tol {
            constant_violations.push(ConstantViolation {
                constant: name.into(),
                level: occ.level,
                position: occ.position,
                distance,
            });
        }
    }

    let mut groups: BTreeMap<&Formula, Vec<&Occurrence>> = BTreeMap::new();
    for occ in &primary {
        groups
            .entry(tree.node_formula(occ.node))
            .or_default()
            .push(occ);
    }
    let mut normality_violations = Vec::new();
    for (formula, occs) in groups {
        if occs.len() < 2 {
            continue;
        }
        let first = occs[0];
        let reference = model.contextual_meaning(first);
        for other in &occs[1..] {
            let d = reference.as_ref().map_err(|e| e.to_string()).and_then(|r| {
                let m = model.contextual_meaning(other).map_err(|e| e.to_string())?;
                r.trace_distance(&m).map_err(|e| e.to_string())
            });
            match d {
                Ok(distance) if distance > tol => normality_violations.push(NormalityViolation {
                    formula: formula.to_string(),
                    first: (first.level, first.position),
                    second: (other.level, other.position),
                    distance,
                }),
                Ok(_) => {}
                Err(e) => errors.push(format!("normality of `{formula}`: {e}")),
            }
        }
    }

    let compositional = factorizes(model.top_meaning(), tol);
    Diagnostics {
        linkage,
        constant_violations,
        normality_violations,
        compositional,
        errors,
    }
}

/// Whether `rho` equals the product of its one-qubit reduced states.
pub(crate) fn factorizes(rho: &Qumix, tol: f64) -> bool {
    let n = rho.n_qubits();
    let marginals: Vec<Matrix2c> = (0..n).map(|q| rho.single_qubit_state(q)).collect();
    if n <= DENSE_QUBIT_CAP {
        let mut product = Matrix::from_element(1, 1, C64::from(1.0));
        for m in &marginals {
            product = product.kronecker(&Matrix::from_iterator(2, 2, m.iter().copied()));
        }
        let Ok(d) = rho.to_dense() else {
            return false;
        };
        let diff = d - product;
        // ||X||_2 <= ||X||_1 <= sqrt(dim) ||X||_2; the eigensolver only
        // settles the band in between.
        let fro = diff.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if fro > tol {
            return false;
        }
        if fro * ((1usize << n) as f64).sqrt() <= tol {
            return true;
        }
        return hermitian_trace_norm(&diff) <= tol;
    }
    // Hilbert-Schmidt distance: tr(rho^2) - 2 tr(rho sigma) + tr(sigma^2).
    let Some(members) = rho.members() else {
        return false;
    };
    let sigma_sq: f64 = marginals
        .iter()
        .map(|m| m.iter().map(|z| z.norm_sqr()).sum::<f64>())
        .product();
    let mut cross = 0.0;
    for (w, v) in members {
        let mut image = v.clone();
        for (q, m) in marginals.iter().enumerate() {
            image.apply_single(q, m);
        }
        cross += w * v.inner(&image).re;
    }
    // The squared distance is a difference of order-one terms, so it is
    // compared against the tolerance itself rather than its square.
    let hs_sq = rho.purity() - 2.0 * cross + sigma_sq;
    hs_sq <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::perspective::TruthPerspective;
    use crate::tensor::StateVector;

    #[test]
    fn true_at_falsity_position_is_rejected() {
        let id = TruthPerspective::identity();
        let g = parse("q1 & q2").unwrap();
        let half = Qumix::maximally_mixed(1);
        let seed = half.tensor(&half).tensor(&id.projector_state(1));
        let m = ScopedModel::build(&id, &g, 2, seed).unwrap();
        let d = m.validate();
        assert!(!d.is_model());
        assert_eq!(d.constant_violations.len(), 1);
        assert_eq!(d.constant_violations[0].constant, "f");
        assert!(d.summary().contains("constant `f`"));
    }

    #[test]
    fn unequal_atom_occurrences_are_not_normal() {
        let id = TruthPerspective::identity();
        let g = parse("q1 & q1").unwrap();
        let seed = id
            .projector_state(1)
            .tensor(&Qumix::maximally_mixed(1))
            .tensor(&id.projector_state(0));
        let d = ScopedModel::build(&id, &g, 2, seed).unwrap().validate();
        assert_eq!(d.normality_violations.len(), 1);
        assert!((d.normality_violations[0].distance - 1.0).abs() < 1e-12);
        assert!(d.compositional);
    }

    #[test]
    fn factorization_above_dense_cap() {
        let id = TruthPerspective::identity();
        let mut rho = Qumix::maximally_mixed(1);
        for q in 0..11 {
            rho = rho.tensor(&id.projector_state((q % 2) as u8));
        }
        assert_eq!(rho.n_qubits(), 12);
        assert!(factorizes(&rho, 1e-9));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![C64::from(0.0); 1 << 12];
        amps[0] = C64::from(h);
        amps[(1 << 12) - 1] = C64::from(h);
        let ghz = Qumix::pure(StateVector::new(amps).unwrap());
        assert!(!factorizes(&ghz, 1e-9));
    }
}
