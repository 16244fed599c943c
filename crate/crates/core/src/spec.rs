//! JSON model specifications: a context formula plus a qumix expression
//! assigned to one level.
//!
//! ```json
//! {"truth_perspective": {"name": "identity"},
//!  "formula": "q1 & q1",
//!  "assign": {"level": "top",
//!             "expr": {"tensor": [{"mixed_id": 1}, {"mixed_id": 1}, {"proj": "0"}]}}}
//! ```
//!
//! Expressions: `{"pure": [[re, im], ...]}`, `{"mixed_id": n}`,
//! `{"proj": "0" | "1"}` (falsity/truth of the spec's perspective),
//! `{"tensor": [expr, ...]}`, `{"mix": [[w, expr], ...]}` and
//! `{"apply": {"gate": {"name": ..., "args": [...]}, "to": expr, "at": k}}`
//! where the optional `at` places the gate on qubits `k..` of a wider operand.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{parse, SyntacticalTree};
use crate::gates::{and_gate, Gate};
use crate::perspective::TruthPerspective;
use crate::semantics::ScopedModel;
use crate::tensor::{Qumix, StateVector, C64};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(default)]
    pub truth_perspective: TruthPerspective,
    pub formula: String,
    pub assign: Assign,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Assign {
    pub level: LevelRef,
    pub expr: QumixExpr,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LevelRef {
    Index(usize),
    Named(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QumixExpr {
    Pure(Vec<[f64; 2]>),
    MixedId(usize),
    Proj(String),
    Tensor(Vec<QumixExpr>),
    Mix(Vec<(f64, QumixExpr)>),
    Apply(Box<ApplyExpr>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ApplyExpr {
    pub gate: GateSpec,
    pub to: QumixExpr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GateSpec {
    pub name: String,
    pub args: Vec<usize>,
}

impl GateSpec {
    pub fn new(name: &str, args: &[usize]) -> Self {
        Self {
            name: name.into(),
            args: args.to_vec(),
        }
    }
}

fn arity(spec: &GateSpec, want: usize) -> Result<&[usize]> {
    if spec.args.len() != want || spec.args.contains(&0) {
        return Err(Error::InvalidGate(format!(
            "{} takes {want} positive argument(s), got {:?}",
            spec.name, spec.args
        )));
    }
    Ok(&spec.args)
}

impl QumixExpr {
    pub fn eval(&self, t: &TruthPerspective) -> Result<Qumix> {
        match self {
            QumixExpr::Pure(amps) => {
                let v = amps.iter().map(|[re, im]| C64::new(*re, *im)).collect();
                Ok(Qumix::pure(StateVector::quregister(v)?))
            }
            QumixExpr::MixedId(n) if *n > 0 => Ok(Qumix::maximally_mixed(*n)),
            QumixExpr::MixedId(_) => Err(Error::Spec("mixed_id needs n >= 1".into())),
            QumixExpr::Proj(bit) => match bit.as_str() {
                "0" => Ok(t.projector_state(0)),
                "1" => Ok(t.projector_state(1)),
                other => Err(Error::Spec(format!(
                    "proj must be \"0\" or \"1\", got {other:?}"
                ))),
            },
            QumixExpr::Tensor(parts) => {
                let mut acc: Option<Qumix> = None;
                for p in parts {
                    let q = p.eval(t)?;
                    acc = Some(match acc {
                        None => q,
                        Some(a) => a.tensor(&q),
                    });
                }
                acc.ok_or_else(|| Error::Spec("empty tensor".into()))
            }
            QumixExpr::Mix(parts) => {
                let parts = parts
                    .iter()
                    .map(|(w, e)| Ok((*w, e.eval(t)?)))
                    .collect::<Result<Vec<_>>>()?;
                Qumix::mix(parts)
            }
            QumixExpr::Apply(app) => app.eval(t),
        }
    }
}

impl ApplyExpr {
    fn eval(&self, t: &TruthPerspective) -> Result<Qumix> {
        let rho = self.to.eval(t)?;
        let n = rho.n_qubits();
        let name = self.gate.name.to_ascii_uppercase();
        if name == "AND" {
            let a = arity(&self.gate, 2)?;
            if self.at.is_some() {
                return Err(Error::Spec("AND cannot be placed with `at`".into()));
            }
            return and_gate(t, a[0], a[1], &rho);
        }
        let gate = match name.as_str() {
            "I" => Gate::Identity(arity(&self.gate, 1)?[0]),
            "NOT" => Gate::Not(arity(&self.gate, 1)?[0]),
            "SQI" => Gate::Hadamard(arity(&self.gate, 1)?[0]),
            "SQN" => Gate::SqrtNot(arity(&self.gate, 1)?[0]),
            "XOR" => {
                let a = arity(&self.gate, 2)?;
                Gate::Xor(a[0], a[1])
            }
            "T" => {
                let a = arity(&self.gate, 3)?;
                Gate::Toffoli(a[0], a[1], a[2])
            }
            other => return Err(Error::InvalidGate(format!("unknown gate `{other}`"))),
        };
        match self.at {
            None if gate.width() != n => Err(Error::DimensionMismatch {
                expected: gate.width(),
                found: n,
            }),
            None => gate.apply(t, &rho),
            Some(k) => gate.apply_at(t, &rho, k),
        }
    }
}

impl ModelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable spec")
    }

    pub fn level(&self, height: usize) -> Result<usize> {
        match &self.assign.level {
            LevelRef::Index(i) => Ok(*i),
            LevelRef::Named(s) if s == "top" => Ok(height),
            LevelRef::Named(s) if s == "bottom" => Ok(1),
            LevelRef::Named(s) => Err(Error::Spec(format!(
                "level must be an integer, \"top\" or \"bottom\", got {s:?}"
            ))),
        }
    }

    /// Parses the formula, evaluates the expression and fills every level.
    pub fn build(&self) -> Result<ScopedModel> {
        let formula = parse(&self.formula)?;
        let h = SyntacticalTree::new(&formula).height();
        let level = self.level(h)?;
        let seed = self.assign.expr.eval(&self.truth_perspective)?;
        ScopedModel::build(&self.truth_perspective, &formula, level, seed)
    }

    /// Spec that reproduces a model from its top level.
    pub fn from_model(model: &ScopedModel) -> Self {
        let top = model.top_meaning().to_ensemble();
        let members = top.members().expect("ensemble form");
        let pure = |v: &StateVector| {
            QumixExpr::Pure(v.amplitudes().iter().map(|a| [a.re, a.im]).collect())
        };
        let expr = if members.len() == 1 {
            pure(&members[0].1)
        } else {
            QumixExpr::Mix(members.iter().map(|(w, v)| (*w, pure(v))).collect())
        };
        Self {
            truth_perspective: model.perspective().clone(),
            formula: model.formula().to_string(),
            assign: Assign {
                level: LevelRef::Named("top".into()),
                expr,
            },
        }
    }
}
