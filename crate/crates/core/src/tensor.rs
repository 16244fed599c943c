//! Complex state vectors, qumixes (density operators), tensor products and
//! partial traces.
//!
//! Qubit ordering: in an `n`-qubit register the first tensor factor is the
//! most significant bit of the amplitude index, so `|x1,...,xn>` lives at
//! index `sum_i x_i * 2^(n-i)` and the last qubit varies fastest.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tol::{self, MIN_WEIGHT, PROPER_MIXTURE_GAP};

pub type C64 = Complex64;
pub type Matrix = DMatrix<C64>;
pub type Matrix2c = Matrix2<C64>;

/// Largest register for which a dense `2^n x 2^n` matrix is ever built.
pub const DENSE_QUBIT_CAP: usize = 10;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Bit mask selecting qubit `q` (0-based from the most significant factor)
/// inside an `n`-qubit basis index.
#[inline]
pub(crate) fn qubit_mask(n: usize, q: usize) -> usize {
    1usize << (n - 1 - q)
}

/// Applies a 2x2 matrix to qubit `q` of an `n`-qubit amplitude vector.
pub fn apply_single_qubit(amps: &mut [C64], n: usize, q: usize, m: &Matrix2c) {
    let stride = qubit_mask(n, q);
    let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    for i in 0..amps.len() {
        if i & stride == 0 {
            let j = i | stride;
            let (a0, a1) = (amps[i], amps[j]);
            amps[i] = m00 * a0 + m01 * a1;
            amps[j] = m10 * a0 + m11 * a1;
        }
    }
}

fn log2_exact(len: usize) -> Option<usize> {
    (len >= 2 && len.is_power_of_two()).then(|| len.trailing_zeros() as usize)
}

/// A vector of `2^n` complex amplitudes.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let n = log2_exact(amps.len()).ok_or_else(|| {
            Error::InvalidState(format!(
                "amplitude count {} is not a power of two >= 2",
                amps.len()
            ))
        })?;
        Ok(Self { n, amps })
    }

    /// A unit vector (quregister); the norm must be 1 within the semantic tolerance.
    pub fn quregister(amps: Vec<C64>) -> Result<Self> {
        let v = Self::new(amps)?;
        let norm = v.norm();
        if (norm - 1.0).abs() > tol::semantic() {
            return Err(Error::InvalidState(format!("quregister has norm {norm}")));
        }
        Ok(v)
    }

    /// Normalizes `amps` into a quregister; fails on the zero vector.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let mut v = Self::new(amps)?;
        let norm = v.norm();
        if norm < 1e-300 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        v.amps.iter_mut().for_each(|a| *a /= norm);
        Ok(v)
    }

    pub fn basis(n: usize, index: usize) -> Self {
        assert!(n >= 1 && index < (1usize << n), "basis index out of range");
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        Self { n, amps }
    }

    /// The register `|x1,...,xn>`.
    pub fn from_bits(bits: &[u8]) -> Self {
        let index = bits
            .iter()
            .fold(0usize, |acc, &b| (acc << 1) | usize::from(b != 0));
        Self::basis(bits.len(), index)
    }

    pub(crate) fn from_raw(n: usize, amps: Vec<C64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << n);
        Self { n, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn kron(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        StateVector::from_raw(self.n + other.n, amps)
    }

    pub fn apply_single(&mut self, q: usize, m: &Matrix2c) {
        apply_single_qubit(&mut self.amps, self.n, q, m);
    }

    /// Dense projector `|psi><psi|`.
    pub fn projector(&self) -> Result<Matrix> {
        check_dense(self.n)?;
        let v = DVector::from_column_slice(&self.amps);
        Ok(&v * v.adjoint())
    }

    fn distance(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

pub(crate) fn check_dense(n: usize) -> Result<()> {
    if n > DENSE_QUBIT_CAP {
        return Err(Error::TooLarge {
            n,
            limit: DENSE_QUBIT_CAP,
        });
    }
    Ok(())
}

/// Internal representation of a qumix.
#[derive(Clone, Debug)]
pub enum Repr {
    /// Weighted pure members, `sum_i w_i |psi_i><psi_i|`.
    Ensemble(Vec<(f64, StateVector)>),
    /// Dense `2^n x 2^n` density matrix (only for `n <= DENSE_QUBIT_CAP`).
    Dense(Matrix),
}

/// A density operator on `n` qubits.
#[derive(Clone, Debug)]
pub struct Qumix {
    n: usize,
    repr: Repr,
}

impl Qumix {
    pub fn pure(v: StateVector) -> Self {
        Self {
            n: v.n,
            repr: Repr::Ensemble(vec![(1.0, v)]),
        }
    }

    /// Validated ensemble: positive weights summing to 1 and unit members.
    pub fn ensemble(members: Vec<(f64, StateVector)>) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::InvalidState("empty ensemble".into()))?;
        let n = first.1.n;
        let tol = tol::semantic();
        let mut total = 0.0;
        for (w, v) in &members {
            if v.n != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.n,
                });
            }
            if w.is_nan() || *w <= MIN_WEIGHT {
                return Err(Error::InvalidState(format!(
                    "ensemble weight {w} too small"
                )));
            }
            if (v.norm() - 1.0).abs() > tol {
                return Err(Error::InvalidState(format!(
                    "ensemble member has norm {}",
                    v.norm()
                )));
            }
            total += w;
        }
        if (total - 1.0).abs() > tol {
            return Err(Error::InvalidState(format!(
                "ensemble weights sum to {total}"
            )));
        }
        Ok(Self {
            n,
            repr: Repr::Ensemble(members),
        })
    }

    pub(crate) fn ensemble_unchecked(n: usize, members: Vec<(f64, StateVector)>) -> Self {
        Self {
            n,
            repr: Repr::Ensemble(members),
        }
    }

    /// Validated dense density matrix: Hermitian, trace one, positive semidefinite.
    pub fn dense(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidState("density matrix is not square".into()));
        }
        let n = log2_exact(m.nrows())
            .ok_or_else(|| Error::InvalidState("dimension is not a power of two".into()))?;
        check_dense(n)?;
        let tol = tol::semantic();
        let herm = max_abs(&(&m - m.adjoint()));
        if herm > tol {
            return Err(Error::InvalidState(format!(
                "not Hermitian (residual {herm:e})"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        let min_eig = m.symmetric_eigenvalues().min();
        if min_eig < -tol {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (eigenvalue {min_eig:e})"
            )));
        }
        Ok(Self {
            n,
            repr: Repr::Dense(m),
        })
    }

    pub(crate) fn dense_unchecked(m: Matrix) -> Self {
        let n = log2_exact(m.nrows()).expect("power-of-two dimension");
        Self {
            n,
            repr: Repr::Dense(m),
        }
    }

    /// `(1/2^n) I^(n)` as a uniform ensemble over the canonical basis.
    pub fn maximally_mixed(n: usize) -> Self {
        let dim = 1usize << n;
        let w = 1.0 / dim as f64;
        let members = (0..dim).map(|i| (w, StateVector::basis(n, i))).collect();
        Self::ensemble_unchecked(n, members)
    }

    /// Convex combination of qumixes on the same number of qubits.
    pub fn mix(parts: Vec<(f64, Qumix)>) -> Result<Self> {
        let n = parts
            .first()
            .ok_or_else(|| Error::InvalidState("empty mixture".into()))?
            .1
            .n;
        let total: f64 = parts.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > tol::semantic() {
            return Err(Error::InvalidState(format!(
                "mixture weights sum to {total}"
            )));
        }
        for (w, q) in &parts {
            if q.n != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: q.n,
                });
            }
            if w.is_nan() || *w <= MIN_WEIGHT {
                return Err(Error::InvalidState(format!("mixture weight {w} too small")));
            }
        }
        let any_dense = parts.iter().any(|(_, q)| matches!(q.repr, Repr::Dense(_)));
        if any_dense {
            let dim = 1usize << n;
            let mut acc = Matrix::zeros(dim, dim);
            for (w, q) in &parts {
                acc += q.to_dense()? * C64::from(*w);
            }
            return Ok(Self::dense_unchecked(acc));
        }
        let mut members = Vec::new();
        for (w, q) in parts {
            if let Repr::Ensemble(ms) = q.repr {
                members.extend(ms.into_iter().map(|(u, v)| (w * u, v)));
            }
        }
        Ok(Self::ensemble_unchecked(n, members))
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn repr(&self) -> &Repr {
        &self.repr
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.repr, Repr::Dense(_))
    }

    /// Number of pure members (ensemble form) or the matrix dimension (dense form).
    pub fn members_len(&self) -> usize {
        match &self.repr {
            Repr::Ensemble(ms) => ms.len(),
            Repr::Dense(m) => m.nrows(),
        }
    }

    /// Dense density matrix; refused above `DENSE_QUBIT_CAP` qubits.
    pub fn to_dense(&self) -> Result<Matrix> {
        check_dense(self.n)?;
        Ok(match &self.repr {
            Repr::Dense(m) => m.clone(),
            Repr::Ensemble(ms) => {
                let dim = 1usize << self.n;
                let mut acc = Matrix::zeros(dim, dim);
                for (w, v) in ms {
                    for (c, b) in v.amps.iter().enumerate() {
                        let bc = b.conj() * *w;
                        if bc == ZERO {
                            continue;
                        }
                        for (r, a) in v.amps.iter().enumerate() {
                            acc[(r, c)] += a * bc;
                        }
                    }
                }
                acc
            }
        })
    }

    pub fn into_dense(self) -> Result<Self> {
        let m = self.to_dense()?;
        Ok(Self::dense_unchecked(m))
    }

    /// Ensemble form; dense input is spectrally decomposed.
    pub fn to_ensemble(&self) -> Qumix {
        match &self.repr {
            Repr::Ensemble(_) => self.clone(),
            Repr::Dense(m) => {
                let eig = m.clone().symmetric_eigen();
                let mut members = Vec::new();
                for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
                    if lambda > MIN_WEIGHT {
                        let col = eig.eigenvectors.column(k);
                        let v = StateVector::from_raw(self.n, col.iter().copied().collect());
                        members.push((lambda, v));
                    }
                }
                let total: f64 = members.iter().map(|(w, _)| w).sum();
                members.iter_mut().for_each(|(w, _)| *w /= total);
                Self::ensemble_unchecked(self.n, members)
            }
        }
    }

    pub fn trace(&self) -> C64 {
        match &self.repr {
            Repr::Ensemble(ms) => ms.iter().map(|(w, v)| C64::from(w * v.norm_sqr())).sum(),
            Repr::Dense(m) => m.trace(),
        }
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        match &self.repr {
            Repr::Dense(m) => m.iter().map(|z| z.norm_sqr()).sum(),
            Repr::Ensemble(ms) => {
                if self.n <= DENSE_QUBIT_CAP && ms.len() > (1usize << self.n) {
                    return self
                        .to_dense()
                        .map(|m| m.iter().map(|z| z.norm_sqr()).sum())
                        .unwrap_or(0.0);
                }
                let mut acc = 0.0;
                for (i, (wi, vi)) in ms.iter().enumerate() {
                    acc += wi * wi * vi.norm_sqr().powi(2);
                    for (wj, vj) in &ms[i + 1..] {
                        acc += 2.0 * wi * wj * vi.inner(vj).norm_sqr();
                    }
                }
                acc
            }
        }
    }

    /// `self (x) other`; the first operand supplies the most significant qubits.
    pub fn tensor(&self, other: &Qumix) -> Qumix {
        let n = self.n + other.n;
        match (&self.repr, &other.repr) {
            (Repr::Ensemble(a), Repr::Ensemble(b)) => {
                let mut members = Vec::with_capacity(a.len() * b.len());
                for (wa, va) in a {
                    for (wb, vb) in b {
                        members.push((wa * wb, va.kron(vb)));
                    }
                }
                Self::ensemble_unchecked(n, members)
            }
            _ if n <= DENSE_QUBIT_CAP => {
                let a = self.to_dense().expect("within dense cap");
                let b = other.to_dense().expect("within dense cap");
                Self::dense_unchecked(a.kronecker(&b))
            }
            _ => self.to_ensemble().tensor(&other.to_ensemble()),
        }
    }

    /// Applies `rho -> U rho U^dagger` given an in-place applier for `U` on
    /// amplitude vectors of this register.
    pub fn conjugate_by(&self, apply: impl Fn(&mut [C64])) -> Qumix {
        match &self.repr {
            Repr::Ensemble(ms) => {
                let members = ms
                    .iter()
                    .map(|(w, v)| {
                        let mut v = v.clone();
                        apply(&mut v.amps);
                        (*w, v)
                    })
                    .collect();
                Self::ensemble_unchecked(self.n, members)
            }
            Repr::Dense(m) => {
                // X = U rho, then U X^dagger = U rho U^dagger.
                let mut x = m.clone();
                apply_to_columns(&mut x, &apply);
                let mut y = x.adjoint();
                apply_to_columns(&mut y, &apply);
                Self::dense_unchecked(y)
            }
        }
    }

    /// `tr(A rho)`.
    pub fn expect(&self, a: &Matrix) -> Result<C64> {
        let dim = 1usize << self.n;
        if a.nrows() != dim || a.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: log2_exact(a.nrows()).unwrap_or(0),
            });
        }
        Ok(match &self.repr {
            Repr::Dense(m) => (a * m).trace(),
            Repr::Ensemble(ms) => ms
                .iter()
                .map(|(w, v)| {
                    let psi = DVector::from_column_slice(&v.amps);
                    psi.dotc(&(a * &psi)) * *w
                })
                .sum(),
        })
    }

    /// Reduced 2x2 state of qubit `q`.
    pub fn single_qubit_state(&self, q: usize) -> Matrix2c {
        let stride = qubit_mask(self.n, q);
        let mut out = Matrix2c::zeros();
        match &self.repr {
            Repr::Ensemble(ms) => {
                for (w, v) in ms {
                    let (mut p00, mut p11, mut p10) = (0.0, 0.0, ZERO);
                    for i in 0..v.amps.len() {
                        if i & stride == 0 {
                            let (a0, a1) = (v.amps[i], v.amps[i | stride]);
                            p00 += a0.norm_sqr();
                            p11 += a1.norm_sqr();
                            p10 += a1 * a0.conj();
                        }
                    }
                    out[(0, 0)] += C64::from(w * p00);
                    out[(1, 1)] += C64::from(w * p11);
                    out[(1, 0)] += p10 * *w;
                }
                out[(0, 1)] = out[(1, 0)].conj();
            }
            Repr::Dense(m) => {
                for i in 0..m.nrows() {
                    if i & stride == 0 {
                        let j = i | stride;
                        out[(0, 0)] += m[(i, i)];
                        out[(1, 1)] += m[(j, j)];
                        out[(1, 0)] += m[(j, i)];
                        out[(0, 1)] += m[(i, j)];
                    }
                }
            }
        }
        out
    }

    /// Reduced state on the given qubits, kept in the listed order.
    ///
    /// Returns a dense qumix when at most `DENSE_QUBIT_CAP` qubits are kept;
    /// otherwise (ensemble input only) an ensemble whose members are the
    /// normalized columns of each member's reshaped amplitude matrix.
    pub fn reduce(&self, kept: &[usize]) -> Result<Qumix> {
        let n = self.n;
        let mut seen = vec![false; n];
        for &q in kept {
            if q >= n || seen[q] {
                return Err(Error::IndexOutOfRange {
                    what: "qubit",
                    index: q + 1,
                    len: n,
                });
            }
            seen[q] = true;
        }
        if kept.is_empty() {
            return Err(Error::InvalidPartition("no qubits selected".into()));
        }
        let traced: Vec<usize> = (0..n).filter(|q| !seen[*q]).collect();
        let identity_order = traced.is_empty() && kept.iter().enumerate().all(|(i, q)| i == *q);
        if identity_order {
            return Ok(self.clone());
        }
        let k = kept.len();
        let rows = 1usize << k;
        let cols = 1usize << traced.len();
        // Full basis index for each (row, col) pair.
        let full = |r: usize, c: usize| -> usize {
            let mut idx = 0usize;
            for (j, &q) in kept.iter().enumerate() {
                if r >> (k - 1 - j) & 1 == 1 {
                    idx |= qubit_mask(n, q);
                }
            }
            for (j, &q) in traced.iter().enumerate() {
                if c >> (traced.len() - 1 - j) & 1 == 1 {
                    idx |= qubit_mask(n, q);
                }
            }
            idx
        };
        let table: Vec<usize> = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| (r, c)))
            .map(|(r, c)| full(r, c))
            .collect();
        let at = |r: usize, c: usize| table[r * cols + c];

        match &self.repr {
            Repr::Dense(m) => {
                let mut out = Matrix::zeros(rows, rows);
                for r1 in 0..rows {
                    for r2 in 0..rows {
                        let mut acc = ZERO;
                        for c in 0..cols {
                            acc += m[(at(r1, c), at(r2, c))];
                        }
                        out[(r1, r2)] = acc;
                    }
                }
                Ok(Self::dense_unchecked(out))
            }
            Repr::Ensemble(ms) if k <= DENSE_QUBIT_CAP => {
                let mut out = Matrix::zeros(rows, rows);
                let mut block = Matrix::zeros(rows, cols);
                for (w, v) in ms {
                    for r in 0..rows {
                        for c in 0..cols {
                            block[(r, c)] = v.amps[at(r, c)];
                        }
                    }
                    out += (&block * block.adjoint()) * C64::from(*w);
                }
                Ok(Self::dense_unchecked(out))
            }
            Repr::Ensemble(ms) => {
                let mut members = Vec::new();
                for (w, v) in ms {
                    for c in 0..cols {
                        let col: Vec<C64> = (0..rows).map(|r| v.amps[at(r, c)]).collect();
                        let mut sv = StateVector::from_raw(k, col);
                        let nsq = sv.norm_sqr();
                        if w * nsq > MIN_WEIGHT {
                            let norm = nsq.sqrt();
                            sv.amps.iter_mut().for_each(|a| *a /= norm);
                            members.push((w * nsq, sv));
                        }
                    }
                }
                Ok(Self::ensemble_unchecked(k, members))
            }
        }
    }

    /// `Red^{(indices)}_{[blocks]}`: the reduced state on the selected blocks
    /// (1-based, strictly increasing), tracing out all others.
    pub fn reduced_state(&self, part: &Partition, indices: &[usize]) -> Result<Qumix> {
        if part.total() != self.n {
            return Err(Error::PartitionMismatch {
                blocks: part.blocks().to_vec(),
                n: self.n,
            });
        }
        if indices.is_empty() {
            return Err(Error::InvalidPartition("no blocks selected".into()));
        }
        let t = part.len();
        let mut prev = 0;
        for &i in indices {
            if i == 0 || i > t {
                return Err(Error::IndexOutOfRange {
                    what: "block",
                    index: i,
                    len: t,
                });
            }
            if i <= prev {
                return Err(Error::InvalidPartition(
                    "block indices must be strictly increasing".into(),
                ));
            }
            prev = i;
        }
        let kept: Vec<usize> = indices.iter().flat_map(|&i| part.qubits(i)).collect();
        self.reduce(&kept)
    }

    /// Sum of singular values of `self - other`.
    pub fn trace_distance(&self, other: &Qumix) -> Result<f64> {
        trace_norm_distance(self, other)
    }

    pub(crate) fn members(&self) -> Option<&[(f64, StateVector)]> {
        match &self.repr {
            Repr::Ensemble(ms) => Some(ms),
            Repr::Dense(_) => None,
        }
    }
}

fn apply_to_columns(m: &mut Matrix, apply: &impl Fn(&mut [C64])) {
    for mut col in m.column_iter_mut() {
        let mut buf: Vec<C64> = col.iter().copied().collect();
        apply(&mut buf);
        col.iter_mut().zip(buf).for_each(|(dst, src)| *dst = src);
    }
}

/// Largest entry modulus.
pub fn max_abs(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Trace norm of a Hermitian matrix.
pub fn hermitian_trace_norm(m: &Matrix) -> f64 {
    // Symmetrize to suppress rounding asymmetry.
    let h = (m + m.adjoint()) * C64::from(0.5);
    h.symmetric_eigenvalues().iter().map(|l| l.abs()).sum()
}

/// `|| rho - sigma ||_1` without materializing matrices above the dense cap.
pub fn trace_norm_distance(a: &Qumix, b: &Qumix) -> Result<f64> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            expected: a.n,
            found: b.n,
        });
    }
    let n = a.n;
    if let (Repr::Ensemble(ma), Repr::Ensemble(mb)) = (&a.repr, &b.repr) {
        // Member-wise bound: ||P_u - P_v||_1 <= 2 ||u - v||.
        if ma.len() == mb.len() {
            let paired = ma.iter().zip(mb).all(|((wa, _), (wb, _))| wa == wb);
            if paired {
                let bound: f64 = ma
                    .iter()
                    .zip(mb)
                    .map(|((w, u), (_, v))| 2.0 * w * u.distance(v))
                    .sum();
                if bound <= tol::EXACT_TOL {
                    return Ok(bound);
                }
            }
        }
        let r = ma.len() + mb.len();
        if n > DENSE_QUBIT_CAP || r < (1usize << n) {
            return Ok(gram_trace_norm(ma, mb));
        }
    }
    let d = a.to_dense()? - b.to_dense()?;
    Ok(hermitian_trace_norm(&d))
}

/// Nonzero spectrum of `V D V^dagger` equals that of `G^{1/2} D G^{1/2}` with
/// `G = V^dagger V`.
fn gram_trace_norm(a: &[(f64, StateVector)], b: &[(f64, StateVector)]) -> f64 {
    let vecs: Vec<&StateVector> = a.iter().chain(b).map(|(_, v)| v).collect();
    let signs: Vec<f64> = a
        .iter()
        .map(|(w, _)| *w)
        .chain(b.iter().map(|(w, _)| -*w))
        .collect();
    let r = vecs.len();
    let mut gram = Matrix::zeros(r, r);
    for i in 0..r {
        for j in i..r {
            let g = vecs[i].inner(vecs[j]);
            gram[(i, j)] = g;
            gram[(j, i)] = g.conj();
        }
    }
    let eig = gram.symmetric_eigen();
    let sqrt_vals = eig.eigenvalues.map(|l| C64::from(l.max(0.0).sqrt()));
    let q = &eig.eigenvectors;
    let root = q * Matrix::from_diagonal(&sqrt_vals) * q.adjoint();
    let d = Matrix::from_diagonal(&DVector::from_iterator(
        r,
        signs.iter().map(|s| C64::from(*s)),
    ));
    let k = &root * d * &root;
    hermitian_trace_norm(&k)
}

/// Block sizes `[n_1, ..., n_t]` of a tensor decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<usize>,
}

impl Partition {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidPartition("empty partition".into()));
        }
        if blocks.contains(&0) {
            return Err(Error::InvalidPartition("zero-width block".into()));
        }
        Ok(Self { blocks })
    }

    /// One qubit per block.
    pub fn singletons(n: usize) -> Self {
        Self { blocks: vec![1; n] }
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn total(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Qubit positions of block `i` (1-based).
    pub fn qubits(&self, i: usize) -> std::ops::Range<usize> {
        let start: usize = self.blocks[..i - 1].iter().sum();
        start..start + self.blocks[i - 1]
    }
}

/// Outcome of [`classify_entanglement`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntanglementReport {
    pub purities: Vec<f64>,
    pub properly_mixed: Vec<bool>,
    pub t_partite_entangled: bool,
    pub maximally_entangled: bool,
    /// 1-based indices of the properly mixed blocks.
    pub entangled_wrt: Vec<usize>,
}

/// Classifies a quregister by the purity of its single-block reduced states.
pub fn classify_entanglement(psi: &StateVector, part: &Partition) -> Result<EntanglementReport> {
    let tol = tol::semantic();
    if (psi.norm() - 1.0).abs() > tol {
        return Err(Error::InvalidState(format!(
            "not a quregister (norm {})",
            psi.norm()
        )));
    }
    if part.total() != psi.n {
        return Err(Error::PartitionMismatch {
            blocks: part.blocks().to_vec(),
            n: psi.n,
        });
    }
    let rho = Qumix::pure(psi.clone());
    let mut purities = Vec::with_capacity(part.len());
    let mut maximal = true;
    for i in 1..=part.len() {
        let red = rho.reduced_state(part, &[i])?;
        purities.push(red.purity());
        let ni = part.blocks()[i - 1];
        let dim = 1usize << ni;
        let target = Matrix::identity(dim, dim) * C64::from(1.0 / dim as f64);
        let dist = hermitian_trace_norm(&(red.to_dense()? - target));
        maximal &= dist <= tol;
    }
    let properly_mixed: Vec<bool> = purities
        .iter()
        .map(|p| *p < 1.0 - PROPER_MIXTURE_GAP)
        .collect();
    let entangled_wrt = properly_mixed
        .iter()
        .enumerate()
        .filter(|(_, m)| **m)
        .map(|(i, _)| i + 1)
        .collect();
    Ok(EntanglementReport {
        t_partite_entangled: properly_mixed.iter().all(|m| *m),
        maximally_entangled: maximal,
        purities,
        properly_mixed,
        entangled_wrt,
    })
}

// JSON: vectors are arrays of [re, im]; qumixes are {"mix": [[w, vector], ...]}.

fn pairs(amps: &[C64]) -> Vec<[f64; 2]> {
    amps.iter().map(|a| [a.re, a.im]).collect()
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        pairs(&self.amps).serialize(s)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<[f64; 2]> = Vec::deserialize(d)?;
        let amps = raw.into_iter().map(|[re, im]| C64::new(re, im)).collect();
        StateVector::new(amps).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct MixWire {
    mix: Vec<(f64, StateVector)>,
}

impl Serialize for Qumix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let ens = self.to_ensemble();
        let mix = ens.members().expect("ensemble form").to_vec();
        MixWire { mix }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Qumix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let wire = MixWire::deserialize(d)?;
        Qumix::ensemble(wire.mix).map_err(serde::de::Error::custom)
    }
}
