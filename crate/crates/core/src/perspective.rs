//! Truth-perspectives: 2x2 unitaries that fix which qubit basis counts as
//! truth and falsity.

use nalgebra::Vector2;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::tensor::{
    apply_single_qubit, check_dense, Matrix, Matrix2c, Qumix, StateVector, C64, ONE,
};
use crate::tol;

#[derive(Clone, Debug, PartialEq)]
pub struct TruthPerspective {
    u: Matrix2c,
    name: Option<&'static str>,
}

impl TruthPerspective {
    pub fn new(u: Matrix2c) -> Result<Self> {
        let residual = (u.adjoint() * u - Matrix2c::identity())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if residual > tol::semantic() {
            return Err(Error::NotUnitary(residual));
        }
        Ok(Self { u, name: None })
    }

    /// The canonical perspective.
    pub fn identity() -> Self {
        Self {
            u: Matrix2c::identity(),
            name: Some("identity"),
        }
    }

    pub fn hadamard() -> Self {
        let h = C64::from(std::f64::consts::FRAC_1_SQRT_2);
        Self {
            u: Matrix2c::new(h, h, h, -h),
            name: Some("hadamard"),
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "identity" => Ok(Self::identity()),
            "hadamard" => Ok(Self::hadamard()),
            other => Err(Error::Spec(format!("unknown truth-perspective `{other}`"))),
        }
    }

    /// Haar-random perspective.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut g = || C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
        let (a, b) = (g(), g());
        let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (a, b) = (a / norm, b / norm);
        let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let phase = C64::from_polar(1.0, theta);
        let u = Matrix2c::new(a, -b.conj(), b, a.conj()) * phase;
        Self { u, name: None }
    }

    pub fn matrix(&self) -> &Matrix2c {
        &self.u
    }

    pub fn adjoint_matrix(&self) -> Matrix2c {
        self.u.adjoint()
    }

    pub fn is_identity(&self) -> bool {
        self.u == Matrix2c::identity()
    }

    /// `|1_T> = T|1>`.
    pub fn one(&self) -> Vector2<C64> {
        self.u.column(1).into_owned()
    }

    /// `|0_T> = T|0>`.
    pub fn zero(&self) -> Vector2<C64> {
        self.u.column(0).into_owned()
    }

    fn basis_state(&self, bit: u8) -> StateVector {
        let v = if bit == 0 { self.zero() } else { self.one() };
        StateVector::new(vec![v[0], v[1]]).expect("two amplitudes")
    }

    /// `|0_T><0_T|` or `|1_T><1_T|` as a one-qubit qumix.
    pub fn projector_state(&self, bit: u8) -> Qumix {
        Qumix::pure(self.basis_state(bit))
    }

    /// Applies `T^(n)` in place.
    pub fn apply_extended(&self, amps: &mut [C64], n: usize) {
        if self.is_identity() {
            return;
        }
        for q in 0..n {
            apply_single_qubit(amps, n, q, &self.u);
        }
    }

    /// Applies `T^(n)^dagger` in place.
    pub fn apply_extended_adjoint(&self, amps: &mut [C64], n: usize) {
        if self.is_identity() {
            return;
        }
        let ud = self.u.adjoint();
        for q in 0..n {
            apply_single_qubit(amps, n, q, &ud);
        }
    }

    /// Dense `T^(n)`, for registers within the dense cap.
    pub fn extend(&self, n: usize) -> Result<Matrix> {
        check_dense(n)?;
        let mut m = Matrix::from_element(1, 1, ONE);
        let u = Matrix::from_iterator(2, 2, self.u.iter().copied());
        for _ in 0..n {
            m = m.kronecker(&u);
        }
        Ok(m)
    }

    /// The T-register `T^(n)|x1,...,xn>`.
    pub fn t_register(&self, bits: &[u8]) -> StateVector {
        assert!(!bits.is_empty(), "t_register needs at least one bit");
        let mut v = StateVector::from_bits(bits);
        self.apply_extended(v.amplitudes_mut(), bits.len());
        v
    }

    /// `T|1><1|T^dagger`.
    pub fn truth_projector_1q(&self) -> Matrix2c {
        let one = self.one();
        one * one.adjoint()
    }

    /// `T|0><0|T^dagger`.
    pub fn falsity_projector_1q(&self) -> Matrix2c {
        let zero = self.zero();
        zero * zero.adjoint()
    }

    /// Dense `I^(n-1) (x) T|1><1|T^dagger`.
    pub fn truth_projector(&self, n: usize) -> Result<Matrix> {
        last_qubit_operator(&self.truth_projector_1q(), n)
    }

    /// Dense `I^(n-1) (x) T|0><0|T^dagger`.
    pub fn falsity_projector(&self, n: usize) -> Result<Matrix> {
        last_qubit_operator(&self.falsity_projector_1q(), n)
    }

    /// `Prob_T(rho) = tr(P1_T rho)`, read off the reduced state of the last qubit.
    pub fn probability(&self, rho: &Qumix) -> f64 {
        let last = rho.single_qubit_state(rho.n_qubits() - 1);
        let p = (self.truth_projector_1q() * last).trace().re;
        p.clamp(0.0, 1.0)
    }

    /// `rho <=_T sigma`: compares probabilities only, so the spaces may differ.
    pub fn preorder_le(&self, rho: &Qumix, sigma: &Qumix) -> bool {
        self.probability(rho) <= self.probability(sigma) + tol::semantic()
    }

    /// `T^(n) rho T^(n)^dagger`.
    pub fn transport(&self, rho: &Qumix) -> Qumix {
        let n = rho.n_qubits();
        rho.conjugate_by(|amps| self.apply_extended(amps, n))
    }
}

fn last_qubit_operator(op: &Matrix2c, n: usize) -> Result<Matrix> {
    check_dense(n)?;
    let dim = 1usize << (n - 1);
    let small = Matrix::from_iterator(2, 2, op.iter().copied());
    Ok(Matrix::identity(dim, dim).kronecker(&small))
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PerspectiveWire {
    Named { name: String },
    Matrix { matrix: [[[f64; 2]; 2]; 2] },
}

impl Serialize for TruthPerspective {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let wire = match self.name {
            Some(name) => PerspectiveWire::Named { name: name.into() },
            None => {
                let e = |r: usize, c: usize| [self.u[(r, c)].re, self.u[(r, c)].im];
                PerspectiveWire::Matrix {
                    matrix: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
                }
            }
        };
        wire.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruthPerspective {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match PerspectiveWire::deserialize(d)? {
            PerspectiveWire::Named { name } => {
                TruthPerspective::by_name(&name).map_err(serde::de::Error::custom)
            }
            PerspectiveWire::Matrix { matrix } => {
                let e = |r: usize, c: usize| C64::new(matrix[r][c][0], matrix[r][c][1]);
                let u = Matrix2c::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1));
                TruthPerspective::new(u).map_err(serde::de::Error::custom)
            }
        }
    }
}

impl Default for TruthPerspective {
    fn default() -> Self {
        Self::identity()
    }
}
