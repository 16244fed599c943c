//! The gates NOT, Toffoli, XOR, Hadamard (square root of identity) and
//! square root of NOT, their twins under a truth-perspective, and the
//! holistic conjunction.

use std::fmt;

use crate::error::{Error, Result};
use crate::perspective::TruthPerspective;
use crate::tensor::{
    apply_single_qubit, check_dense, qubit_mask, Matrix, Matrix2c, Qumix, StateVector, C64,
};

/// A canonical gate acting on a contiguous block of qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Identity(usize),
    /// Flips the last qubit.
    Not(usize),
    /// `T(m,n,p)`: the last qubit becomes `x_m y_n xor z_p`.
    Toffoli(usize, usize, usize),
    /// `XOR(m,n)`: the last qubit becomes `x_m xor y_n`.
    Xor(usize, usize),
    /// Hadamard on the last qubit.
    Hadamard(usize),
    /// Square root of NOT on the last qubit.
    SqrtNot(usize),
}

pub fn hadamard_matrix() -> Matrix2c {
    let h = C64::from(std::f64::consts::FRAC_1_SQRT_2);
    Matrix2c::new(h, h, h, -h)
}

pub fn sqrt_not_matrix() -> Matrix2c {
    let a = C64::new(0.5, -0.5);
    let b = C64::new(0.5, 0.5);
    Matrix2c::new(a, b, b, a)
}

impl Gate {
    pub fn width(&self) -> usize {
        match *self {
            Gate::Identity(n) | Gate::Not(n) | Gate::Hadamard(n) | Gate::SqrtNot(n) => n,
            Gate::Toffoli(m, n, p) => m + n + p,
            Gate::Xor(m, n) => m + n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Gate::Identity(n) | Gate::Not(n) | Gate::Hadamard(n) | Gate::SqrtNot(n) => n > 0,
            Gate::Toffoli(m, n, p) => m > 0 && n > 0 && p > 0,
            Gate::Xor(m, n) => m > 0 && n > 0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidGate(format!("{self} has a zero arity")))
        }
    }

    /// Basis permutation gates (NOT, Toffoli, XOR, identity).
    pub fn is_permutation(&self) -> bool {
        !matches!(self, Gate::Hadamard(_) | Gate::SqrtNot(_))
    }

    /// Image of a basis index under a permutation gate placed at `offset` in an
    /// `n`-qubit register.
    pub fn permute_index(&self, index: usize, n: usize, offset: usize) -> usize {
        match *self {
            Gate::Identity(_) => index,
            Gate::Not(w) => index ^ qubit_mask(n, offset + w - 1),
            Gate::Toffoli(a, b, c) => {
                let c1 = qubit_mask(n, offset + a - 1);
                let c2 = qubit_mask(n, offset + a + b - 1);
                if index & c1 != 0 && index & c2 != 0 {
                    index ^ qubit_mask(n, offset + a + b + c - 1)
                } else {
                    index
                }
            }
            Gate::Xor(a, b) => {
                if index & qubit_mask(n, offset + a - 1) != 0 {
                    index ^ qubit_mask(n, offset + a + b - 1)
                } else {
                    index
                }
            }
            Gate::Hadamard(_) | Gate::SqrtNot(_) => {
                panic!("{self} is not a basis permutation")
            }
        }
    }

    /// Applies the canonical gate (or its adjoint) to the block starting at
    /// qubit `offset` of an `n`-qubit amplitude vector.
    pub fn apply_canonical(&self, amps: &mut [C64], n: usize, offset: usize, adjoint: bool) {
        debug_assert!(offset + self.width() <= n);
        match *self {
            Gate::Identity(_) => {}
            Gate::Not(w) => {
                let t = qubit_mask(n, offset + w - 1);
                swap_where(amps, t, 0);
            }
            Gate::Toffoli(a, b, c) => {
                let c1 = qubit_mask(n, offset + a - 1);
                let c2 = qubit_mask(n, offset + a + b - 1);
                let t = qubit_mask(n, offset + a + b + c - 1);
                swap_where(amps, t, c1 | c2);
            }
            Gate::Xor(a, b) => {
                let c1 = qubit_mask(n, offset + a - 1);
                let t = qubit_mask(n, offset + a + b - 1);
                swap_where(amps, t, c1);
            }
            Gate::Hadamard(w) => apply_single_qubit(amps, n, offset + w - 1, &hadamard_matrix()),
            Gate::SqrtNot(w) => {
                let m = if adjoint {
                    sqrt_not_matrix().adjoint()
                } else {
                    sqrt_not_matrix()
                };
                apply_single_qubit(amps, n, offset + w - 1, &m);
            }
        }
    }

    /// Applies the twin gate `T^(w) G T^(w)^dagger` (or its adjoint) on a block.
    pub fn apply_twin(
        &self,
        t: &TruthPerspective,
        amps: &mut [C64],
        n: usize,
        offset: usize,
        adjoint: bool,
    ) {
        if matches!(self, Gate::Identity(_)) {
            return;
        }
        if t.is_identity() {
            self.apply_canonical(amps, n, offset, adjoint);
            return;
        }
        let u = t.matrix();
        let ud = t.adjoint_matrix();
        let block = offset..offset + self.width();
        for q in block.clone() {
            apply_single_qubit(amps, n, q, &ud);
        }
        self.apply_canonical(amps, n, offset, adjoint);
        for q in block {
            apply_single_qubit(amps, n, q, u);
        }
    }

    /// Dense matrix of the twin gate on exactly `width()` qubits.
    pub fn matrix(&self, t: &TruthPerspective) -> Result<Matrix> {
        let w = self.width();
        check_dense(w)?;
        let dim = 1usize << w;
        let mut m = Matrix::zeros(dim, dim);
        for col in 0..dim {
            let mut v = StateVector::basis(w, col);
            self.apply_twin(t, v.amplitudes_mut(), w, 0, false);
            for (row, a) in v.amplitudes().iter().enumerate() {
                m[(row, col)] = *a;
            }
        }
        Ok(m)
    }

    /// `rho -> G_T rho G_T^dagger` for a qumix on exactly `width()` qubits.
    pub fn apply(&self, t: &TruthPerspective, rho: &Qumix) -> Result<Qumix> {
        self.apply_at(t, rho, 0)
    }

    /// Qumix application on the block starting at `offset`.
    pub fn apply_at(&self, t: &TruthPerspective, rho: &Qumix, offset: usize) -> Result<Qumix> {
        self.validate()?;
        let n = rho.n_qubits();
        if offset + self.width() > n {
            return Err(Error::DimensionMismatch {
                expected: offset + self.width(),
                found: n,
            });
        }
        Ok(rho.conjugate_by(|amps| self.apply_twin(t, amps, n, offset, false)))
    }
}

/// Swaps `amps[i]` and `amps[i | target]` for every `i` with the target bit
/// clear and all `controls` bits set.
fn swap_where(amps: &mut [C64], target: usize, controls: usize) {
    for i in 0..amps.len() {
        if i & target == 0 && i & controls == controls {
            amps.swap(i, i | target);
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Identity(n) => write!(f, "I({n})"),
            Gate::Not(n) => write!(f, "NOT({n})"),
            Gate::Toffoli(m, n, p) => write!(f, "T({m},{n},{p})"),
            Gate::Xor(m, n) => write!(f, "XOR({m},{n})"),
            Gate::Hadamard(n) => write!(f, "SQI({n})"),
            Gate::SqrtNot(n) => write!(f, "SQN({n})"),
        }
    }
}

/// Tensor product of block gates covering a whole register.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelGate {
    blocks: Vec<Gate>,
}

impl LevelGate {
    pub fn new(blocks: Vec<Gate>) -> Self {
        Self { blocks }
    }

    pub fn blocks(&self) -> &[Gate] {
        &self.blocks
    }

    pub fn width(&self) -> usize {
        self.blocks.iter().map(Gate::width).sum()
    }

    /// Applies every block (or its adjoint) in place; blocks act on disjoint qubits.
    pub fn apply_amplitudes(
        &self,
        t: &TruthPerspective,
        amps: &mut [C64],
        n: usize,
        adjoint: bool,
    ) {
        let mut offset = 0;
        for g in &self.blocks {
            g.apply_twin(t, amps, n, offset, adjoint);
            offset += g.width();
        }
    }

    pub fn apply(&self, t: &TruthPerspective, rho: &Qumix) -> Qumix {
        let n = rho.n_qubits();
        rho.conjugate_by(|amps| self.apply_amplitudes(t, amps, n, false))
    }

    pub fn apply_adjoint(&self, t: &TruthPerspective, rho: &Qumix) -> Qumix {
        let n = rho.n_qubits();
        rho.conjugate_by(|amps| self.apply_amplitudes(t, amps, n, true))
    }

    pub fn is_permutation(&self) -> bool {
        self.blocks.iter().all(Gate::is_permutation)
    }

    /// Image of a basis index when every block is a permutation gate.
    pub fn permute_index(&self, index: usize, n: usize) -> usize {
        let mut offset = 0;
        let mut idx = index;
        for g in &self.blocks {
            idx = g.permute_index(idx, n, offset);
            offset += g.width();
        }
        idx
    }
}

impl fmt::Display for LevelGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(" ⊗ ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// `AND_T^(m,n)(rho) = T_T^(m,n,1)(rho (x) |0_T><0_T|)`.
pub fn and_gate(t: &TruthPerspective, m: usize, n: usize, rho: &Qumix) -> Result<Qumix> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidGate("AND needs positive arities".into()));
    }
    if rho.n_qubits() != m + n {
        return Err(Error::DimensionMismatch {
            expected: m + n,
            found: rho.n_qubits(),
        });
    }
    let with_ancilla = rho.tensor(&t.projector_state(0));
    Gate::Toffoli(m, n, 1).apply(t, &with_ancilla)
}

/// `I^(k-1) (x) |1><1|` as a dense matrix.
fn p1_dense(k: usize) -> Matrix {
    let dim = 1usize << k;
    Matrix::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        (0..dim).map(|i| C64::from((i & 1) as f64)),
    ))
}

/// Checks `T(m,n,1) = (I - P1 (x) P1) (x) I + P1 (x) P1 (x) NOT` as a dense
/// identity and returns the largest entrywise residual.
pub fn toffoli_decomposition_residual(m: usize, n: usize) -> Result<f64> {
    check_dense(m + n + 1)?;
    let t = Gate::Toffoli(m, n, 1).matrix(&TruthPerspective::identity())?;
    let dim = 1usize << (m + n);
    let pp = p1_dense(m).kronecker(&p1_dense(n));
    let id2 = Matrix::identity(2, 2);
    let not = Gate::Not(1).matrix(&TruthPerspective::identity())?;
    let rhs = (Matrix::identity(dim, dim) - &pp).kronecker(&id2) + pp.kronecker(&not);
    Ok(crate::tensor::max_abs(&(t - rhs)))
}

pub fn toffoli_decomposition_check(m: usize, n: usize) -> Result<bool> {
    Ok(toffoli_decomposition_residual(m, n)? <= crate::tol::EXACT_TOL)
}
