//! Random seeds for models: compositional products and two families of
//! entangled seeds whose repeated atoms keep equal contextual meanings.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use super::ScopedModel;
use crate::error::{Error, Result};
use crate::formula::{Formula, SyntacticalTree};
use crate::perspective::TruthPerspective;
use crate::tensor::{Qumix, StateVector, C64};
use crate::tol::MIN_WEIGHT;

/// Seeds drawn per entangled trial before the trial counts as starved.
pub const ENTANGLED_ATTEMPTS: usize = 10;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn random_unit<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| gaussian(rng)).collect();
        let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return v.into_iter().map(|a| a / norm).collect();
        }
    }
}

/// Random one-qubit qumix: usually a Bloch vector uniform in the ball,
/// sometimes a pure state.
pub fn random_qubit_state<R: Rng + ?Sized>(rng: &mut R) -> Qumix {
    let radius: f64 = if rng.random_bool(0.15) {
        1.0
    } else {
        rng.random::<f64>().cbrt()
    };
    let up = random_unit(rng, 2);
    let down = vec![-up[1].conj(), up[0].conj()];
    let mut members = Vec::new();
    for (w, v) in [((1.0 + radius) / 2.0, up), ((1.0 - radius) / 2.0, down)] {
        if w > MIN_WEIGHT {
            members.push((w, StateVector::new(v).expect("two amplitudes")));
        }
    }
    let total: f64 = members.iter().map(|(w, _)| w).sum();
    members.iter_mut().for_each(|(w, _)| *w /= total);
    Qumix::ensemble(members).expect("valid one-qubit ensemble")
}

/// Random `n`-qubit qumix: a mixture of one to three Gaussian pure states.
pub fn random_qumix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Qumix {
    let rank = rng.random_range(1..=3usize);
    let mut weights: Vec<f64> = (0..rank).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let members = weights
        .into_iter()
        .map(|w| {
            (
                w,
                StateVector::new(random_unit(rng, 1 << n)).expect("power-of-two length"),
            )
        })
        .collect();
    Qumix::ensemble(members).expect("valid ensemble")
}

pub fn random_atom_meanings<R: Rng + ?Sized>(
    rng: &mut R,
    atoms: impl IntoIterator<Item = u32>,
) -> BTreeMap<u32, Qumix> {
    atoms
        .into_iter()
        .map(|a| (a, random_qubit_state(rng)))
        .collect()
}

/// Product of the meanings of the formula's atomic occurrences, left to right.
pub fn compositional_seed(
    t: &TruthPerspective,
    formula: &Formula,
    atom_meanings: &BTreeMap<u32, Qumix>,
) -> Result<Qumix> {
    let tree = SyntacticalTree::new(formula);
    let mut acc: Option<Qumix> = None;
    for leaf in tree.leaves() {
        let factor = match tree.node_formula(leaf.node) {
            Formula::Atom(a) => {
                let m = atom_meanings.get(a).ok_or(Error::MissingAtomMeaning(*a))?;
                if m.n_qubits() != 1 {
                    return Err(Error::DimensionMismatch {
                        expected: 1,
                        found: m.n_qubits(),
                    });
                }
                m.clone()
            }
            Formula::True => t.projector_state(1),
            Formula::False => t.projector_state(0),
            other => unreachable!("non-atomic leaf {other}"),
        };
        acc = Some(match acc {
            None => factor,
            Some(a) => a.tensor(&factor),
        });
    }
    Ok(acc.expect("at least one leaf"))
}

fn leaf_kinds(formula: &Formula) -> Vec<Formula> {
    let tree = SyntacticalTree::new(formula);
    tree.leaves()
        .iter()
        .map(|o| tree.node_formula(o.node).clone())
        .collect()
}

/// `sum_x c_x (x)_leaves U_atom |x_atom>`: every occurrence of an atom carries
/// a copy of the atom's value in a random basis, constants are fixed. Tracing
/// out one copy decoheres the others, so equal subformulas get equal meanings.
pub fn copy_encoded_seed<R: Rng + ?Sized>(
    t: &TruthPerspective,
    formula: &Formula,
    rng: &mut R,
) -> Qumix {
    let leaves = leaf_kinds(formula);
    let atoms: Vec<u32> = formula.atoms().into_iter().collect();
    let k = atoms.len();
    let bases: BTreeMap<u32, TruthPerspective> = atoms
        .iter()
        .map(|&a| {
            let basis = if rng.random_bool(0.25) {
                TruthPerspective::identity()
            } else {
                TruthPerspective::random(rng)
            };
            (a, basis)
        })
        .collect();
    let mut coeffs = random_unit(rng, 1 << k);
    if k > 0 && rng.random_bool(0.5) {
        // Sparse support gives sharper correlations.
        let keep = rng.random_range(1..=3usize).min(1 << k);
        let mut idx: Vec<usize> = (0..1 << k).collect();
        idx.shuffle(rng);
        let kept: Vec<usize> = idx.into_iter().take(keep).collect();
        for (x, c) in coeffs.iter_mut().enumerate() {
            if !kept.contains(&x) {
                *c = C64::from(0.0);
            }
        }
        let norm = coeffs.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        coeffs.iter_mut().for_each(|c| *c /= norm);
    }
    let n = leaves.len();
    let mut amps = vec![C64::from(0.0); 1 << n];
    for (x, c) in coeffs.iter().enumerate() {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let mut v = vec![*c];
        for leaf in &leaves {
            let local = match leaf {
                Formula::Atom(a) => {
                    let j = atoms.iter().position(|b| b == a).expect("known atom");
                    let bit = (x >> (k - 1 - j)) & 1;
                    let u = bases[a].matrix();
                    [u[(0, bit)], u[(1, bit)]]
                }
                Formula::True => [t.one()[0], t.one()[1]],
                _ => [t.zero()[0], t.zero()[1]],
            };
            v = v
                .iter()
                .flat_map(|a| [a * local[0], a * local[1]])
                .collect();
        }
        for (dst, src) in amps.iter_mut().zip(v) {
            *dst += src;
        }
    }
    Qumix::pure(StateVector::normalized(amps).expect("nonzero superposition"))
}

/// Random maximally entangled pairs `(I (x) U)|Phi+>` between atomic
/// occurrences, `I/2` on unpaired ones and fixed constants. Every atomic
/// occurrence has meaning `I/2`; molecular subformulas may still differ.
pub fn paired_seed<R: Rng + ?Sized>(t: &TruthPerspective, formula: &Formula, rng: &mut R) -> Qumix {
    let leaves = leaf_kinds(formula);
    let n = leaves.len();
    let mut atom_positions: Vec<usize> = (0..n)
        .filter(|&j| matches!(leaves[j], Formula::Atom(_)))
        .collect();
    atom_positions.shuffle(rng);
    let max_pairs = atom_positions.len() / 2;
    let pairs = if max_pairs == 0 {
        0
    } else {
        rng.random_range(1..=max_pairs)
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut factors: Vec<(Vec<usize>, Vec<C64>)> = Vec::new();
    for p in 0..pairs {
        let (a, b) = (atom_positions[2 * p], atom_positions[2 * p + 1]);
        let u = TruthPerspective::random(rng);
        let m = u.matrix();
        // (I (x) U)|Phi+> = (|0>U|0> + |1>U|1>)/sqrt2
        let amps = vec![m[(0, 0)] * h, m[(1, 0)] * h, m[(0, 1)] * h, m[(1, 1)] * h];
        factors.push((vec![a, b], amps));
    }
    for (j, leaf) in leaves.iter().enumerate() {
        match leaf {
            Formula::True => factors.push((vec![j], vec![t.one()[0], t.one()[1]])),
            Formula::False => factors.push((vec![j], vec![t.zero()[0], t.zero()[1]])),
            _ => {}
        }
    }
    let singles: Vec<usize> = atom_positions[2 * pairs..].to_vec();
    let s = singles.len();
    let w = 1.0 / (1usize << s) as f64;
    let mut members = Vec::with_capacity(1 << s);
    for choice in 0..1usize << s {
        let mut all = factors.clone();
        for (i, &j) in singles.iter().enumerate() {
            let bit = (choice >> i) & 1;
            let mut local = vec![C64::from(0.0); 2];
            local[bit] = C64::from(1.0);
            all.push((vec![j], local));
        }
        members.push((w, embed(n, &all)));
    }
    Qumix::ensemble(members).expect("valid paired ensemble")
}

/// Product state whose factors sit on arbitrary qubit positions.
fn embed(n: usize, factors: &[(Vec<usize>, Vec<C64>)]) -> StateVector {
    let amps = (0..1usize << n)
        .map(|i| {
            factors
                .iter()
                .map(|(pos, local)| {
                    let k = pos.len();
                    let idx = pos.iter().enumerate().fold(0usize, |acc, (j, &q)| {
                        acc | (((i >> (n - 1 - q)) & 1) << (k - 1 - j))
                    });
                    local[idx]
                })
                .product()
        })
        .collect();
    StateVector::new(amps).expect("power-of-two length")
}

/// Draws entangled seeds (copy-encoded or paired, occasionally a mixture of
/// two copy-encoded seeds) until one validates, up to [`ENTANGLED_ATTEMPTS`].
/// Returns the model and the number of seeds drawn; `None` when starved.
pub fn sample_entangled_model<R: Rng + ?Sized>(
    t: &TruthPerspective,
    context: &Formula,
    rng: &mut R,
) -> Result<(Option<ScopedModel>, usize)> {
    let h = SyntacticalTree::new(context).height();
    for attempt in 1..=ENTANGLED_ATTEMPTS {
        let seed = match rng.random_range(0..3) {
            0 => paired_seed(t, context, rng),
            1 => copy_encoded_seed(t, context, rng),
            _ => {
                let w: f64 = rng.random_range(0.1..0.9);
                Qumix::mix(vec![
                    (w, copy_encoded_seed(t, context, rng)),
                    (1.0 - w, copy_encoded_seed(t, context, rng)),
                ])?
            }
        };
        let model = ScopedModel::build(t, context, h, seed)?;
        if model.validate().is_model() {
            return Ok((Some(model), attempt));
        }
    }
    Ok((None, ENTANGLED_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_qubits_are_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let q = random_qubit_state(&mut rng);
            assert!((q.trace().re - 1.0).abs() < 1e-12);
            assert!(q.purity() <= 1.0 + 1e-12 && q.purity() >= 0.5 - 1e-12);
        }
    }

    #[test]
    fn copy_encoded_models_are_normal() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = TruthPerspective::identity();
        for text in [
            "q1 & q1",
            "(q1 & q2) & (q2 & q1)",
            "(q1 (+) q2) | ~(q1 (+) q2)",
            "T(q1, t, q1)",
        ] {
            let g = parse(text).unwrap();
            let h = SyntacticalTree::new(&g).height();
            for _ in 0..10 {
                let seed = copy_encoded_seed(&t, &g, &mut rng);
                let m = ScopedModel::build(&t, &g, h, seed).unwrap();
                let d = m.validate();
                assert!(d.is_model(), "{text}: {}", d.summary());
            }
        }
    }

    #[test]
    fn paired_seeds_have_mixed_atoms() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = TruthPerspective::identity();
        let g = parse("(q1 & q2) & (q3 | q1)").unwrap();
        let h = SyntacticalTree::new(&g).height();
        let seed = paired_seed(&t, &g, &mut rng);
        let m = ScopedModel::build(&t, &g, h, seed).unwrap();
        let d = m.validate();
        assert!(d.constant_violations.is_empty());
        for occ in m.tree().leaves() {
            if let Formula::Atom(_) = m.tree().node_formula(occ.node) {
                let red = m.contextual_meaning(&occ).unwrap();
                assert!((red.purity() - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sampler_finds_models() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let t = TruthPerspective::identity();
        let g = parse("(q1 & q2) & (q2 & q1)").unwrap();
        let (model, attempts) = sample_entangled_model(&t, &g, &mut rng).unwrap();
        assert!(model.is_some());
        assert!(attempts >= 1);
    }
}
