#![allow(dead_code)]

use hqcl::Formula;
use rand::Rng;

/// Two-valued evaluation; `bits[i]` is the value of atom `q(i+1)`.
pub fn truth(f: &Formula, bits: &[bool]) -> bool {
    match f {
        Formula::Atom(a) => bits[*a as usize - 1],
        Formula::True => true,
        Formula::False => false,
        Formula::Not(g) => !truth(g, bits),
        Formula::Toffoli(a, b, c) => truth(c, bits) ^ (truth(a, bits) && truth(b, bits)),
        Formula::Xor(a, b) => truth(a, bits) ^ truth(b, bits),
        Formula::SqrtId(_) | Formula::SqrtNot(_) => panic!("not a Boolean formula"),
    }
}

/// Whether every valuation of atoms `1..=k` making `a` true makes `b` true.
pub fn entails(a: &Formula, b: &Formula, k: usize) -> bool {
    (0..1usize << k).all(|x| {
        let bits: Vec<bool> = (0..k).map(|i| (x >> i) & 1 == 1).collect();
        !truth(a, &bits) || truth(b, &bits)
    })
}

/// Every Boolean formula with exactly `n` connectives over the given leaves.
pub fn formulas(leaves: &[Formula], n: usize) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![leaves.to_vec()];
    for k in 1..=n {
        let mut out = Vec::new();
        for f in &by_size[k - 1] {
            out.push(Formula::not(f.clone()));
        }
        for i in 0..k {
            let j = k - 1 - i;
            for a in &by_size[i] {
                for b in &by_size[j] {
                    out.push(Formula::and(a.clone(), b.clone()));
                    out.push(Formula::or(a.clone(), b.clone()));
                    out.push(Formula::xor(a.clone(), b.clone()));
                }
            }
        }
        by_size.push(out);
    }
    by_size.swap_remove(n)
}

pub fn atoms(k: u32) -> Vec<Formula> {
    (1..=k).map(Formula::atom).collect()
}

fn leaf<R: Rng + ?Sized>(rng: &mut R, atoms: &[u32]) -> Formula {
    match rng.random_range(0..12) {
        0 => Formula::True,
        1 => Formula::False,
        _ => Formula::atom(atoms[rng.random_range(0..atoms.len())]),
    }
}

/// Random formula with up to `depth` nested connectives, quantum ones included.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, atoms: &[u32], depth: usize) -> Formula {
    if depth == 0 || rng.random_bool(0.3) {
        return leaf(rng, atoms);
    }
    let sub = |rng: &mut R| random_formula(rng, atoms, depth - 1);
    match rng.random_range(0..7) {
        0 => Formula::not(sub(rng)),
        1 => Formula::sqrt_id(sub(rng)),
        2 => Formula::sqrt_not(sub(rng)),
        3 => Formula::and(sub(rng), sub(rng)),
        4 => Formula::or(sub(rng), sub(rng)),
        5 => Formula::xor(sub(rng), sub(rng)),
        _ => Formula::toffoli(sub(rng), sub(rng), sub(rng)),
    }
}
