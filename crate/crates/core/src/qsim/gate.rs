//! Unitary gates on one or two qubits.

use std::fmt;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{CMatrix, SimError, SimResult};
use crate::Real;

/// Index of a qubit within a register. Qubit `q` is bit `q` of the
/// basis-state index, so qubit 0 is the least-significant bit.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QubitIndex(pub usize);

impl QubitIndex {
    #[inline]
    pub fn get(self) -> usize {
        self.0
    }
}

impl From<usize> for QubitIndex {
    fn from(q: usize) -> Self {
        Self(q)
    }
}

impl fmt::Display for QubitIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

/// Rotation axis for the parametrized single-qubit gates.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
}

/// What a [`Gate`] is, kept alongside its matrix so that noise models can
/// re-synthesize rotations with a perturbed angle.
#[derive(Clone, Debug, PartialEq)]
pub enum GateKind<T> {
    PauliX,
    PauliY,
    PauliZ,
    Hadamard,
    /// `exp(-i θ σ_axis / 2)`
    Rotation { axis: Axis, angle: T },
    Cnot,
    /// Rotation about `axis` on the second target, controlled by the first.
    ControlledRotation { axis: Axis, angle: T },
    Swap,
    Custom(String),
}

/// A unitary acting on one or two target qubits.
///
/// For two-qubit gates the first target is the high-order bit of the local
/// matrix index: `Gate::cnot(c, t)` uses the textbook CNOT matrix in the
/// `|c t⟩` basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate<T> {
    kind: GateKind<T>,
    matrix: CMatrix<T>,
    targets: Vec<QubitIndex>,
}

pub(crate) fn check_distinct(targets: &[QubitIndex]) -> SimResult<()> {
    for (i, a) in targets.iter().enumerate() {
        if targets[i + 1..].contains(a) {
            return Err(SimError::DuplicateTarget(a.0));
        }
    }
    Ok(())
}

fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

fn rotation_matrix<T: Real>(axis: Axis, angle: T) -> CMatrix<T> {
    let half = angle / T::lit(2.0);
    let (s, co) = half.sin_cos();
    let z = T::zero();
    match axis {
        Axis::Y => CMatrix::from_vec(vec![c(co, z), c(-s, z), c(s, z), c(co, z)]),
        Axis::X => CMatrix::from_vec(vec![c(co, z), c(z, -s), c(z, -s), c(co, z)]),
    }
}

fn controlled<T: Real>(u: &CMatrix<T>) -> CMatrix<T> {
    let mut m = CMatrix::identity(4);
    for r in 0..2 {
        for col in 0..2 {
            m.set(2 + r, 2 + col, u.get(r, col));
        }
    }
    m
}

impl<T: Real> Gate<T> {
    /// Builds a custom gate, validating arity, distinct targets and unitarity.
    pub fn new(matrix: CMatrix<T>, targets: Vec<QubitIndex>) -> SimResult<Self> {
        Self::with_kind(GateKind::Custom("custom".into()), matrix, targets)
    }

    pub fn named(name: &str, matrix: CMatrix<T>, targets: Vec<QubitIndex>) -> SimResult<Self> {
        Self::with_kind(GateKind::Custom(name.into()), matrix, targets)
    }

    fn with_kind(kind: GateKind<T>, matrix: CMatrix<T>, targets: Vec<QubitIndex>) -> SimResult<Self> {
        let k = targets.len();
        if !(1..=2).contains(&k) {
            return Err(SimError::UnsupportedArity(k));
        }
        if matrix.dim() != 1 << k {
            return Err(SimError::DimensionMismatch {
                expected: 1 << k,
                found: matrix.dim(),
            });
        }
        check_distinct(&targets)?;
        let deviation = matrix.unitarity_deviation();
        if deviation > T::unitary_tol() {
            return Err(SimError::NonUnitary {
                deviation: deviation.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { kind, matrix, targets })
    }

    /// Built-in gates are unitary by construction; distinctness of two-qubit
    /// targets is still enforced.
    fn builtin(kind: GateKind<T>, matrix: CMatrix<T>, targets: Vec<QubitIndex>) -> Self {
        Self { kind, matrix, targets }
    }

    pub fn x(q: QubitIndex) -> Self {
        Self::builtin(GateKind::PauliX, CMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]), vec![q])
    }

    pub fn y(q: QubitIndex) -> Self {
        let z = T::zero();
        let m = CMatrix::from_vec(vec![c(z, z), c(z, -T::one()), c(z, T::one()), c(z, z)]);
        Self::builtin(GateKind::PauliY, m, vec![q])
    }

    pub fn z(q: QubitIndex) -> Self {
        Self::builtin(GateKind::PauliZ, CMatrix::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]), vec![q])
    }

    pub fn hadamard(q: QubitIndex) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::builtin(GateKind::Hadamard, CMatrix::from_real(&[&[h, h], &[h, -h]]), vec![q])
    }

    /// `R_Y(θ) = exp(-i θ σ_y / 2)`.
    pub fn ry(angle: T, q: QubitIndex) -> Self {
        Self::rotation(Axis::Y, angle, q)
    }

    /// `R_X(θ) = exp(-i θ σ_x / 2)`.
    pub fn rx(angle: T, q: QubitIndex) -> Self {
        Self::rotation(Axis::X, angle, q)
    }

    pub fn rotation(axis: Axis, angle: T, q: QubitIndex) -> Self {
        Self::builtin(GateKind::Rotation { axis, angle }, rotation_matrix(axis, angle), vec![q])
    }

    pub fn cnot(control: QubitIndex, target: QubitIndex) -> SimResult<Self> {
        let targets = vec![control, target];
        check_distinct(&targets)?;
        let m = CMatrix::from_real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]);
        Ok(Self::builtin(GateKind::Cnot, m, targets))
    }

    pub fn controlled_rotation(axis: Axis, angle: T, control: QubitIndex, target: QubitIndex) -> SimResult<Self> {
        let targets = vec![control, target];
        check_distinct(&targets)?;
        let m = controlled(&rotation_matrix(axis, angle));
        Ok(Self::builtin(GateKind::ControlledRotation { axis, angle }, m, targets))
    }

    pub fn swap(a: QubitIndex, b: QubitIndex) -> SimResult<Self> {
        let targets = vec![a, b];
        check_distinct(&targets)?;
        let m = CMatrix::from_real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        Ok(Self::builtin(GateKind::Swap, m, targets))
    }

    /// Basis change `V` onto the singlet-triplet basis of qubits `(a, b)`:
    /// `V|00⟩ = |00⟩`, `V(|01⟩+|10⟩)/√2 = |01⟩`, `V(|01⟩−|10⟩)/√2 = −|10⟩`,
    /// `V|11⟩ = |11⟩`. Synthesized as `CNOT(a→b) · CR_Y(b→a, −π/2) · CNOT(a→b)`.
    pub fn singlet_triplet_basis_change(a: QubitIndex, b: QubitIndex) -> SimResult<Self> {
        let cx = Self::cnot(a, b)?;
        // The controlled rotation has control b and target a; in the (a, b)
        // local ordering that is the bit-swapped embedding.
        let cry = Self::controlled_rotation(Axis::Y, T::lit(-std::f64::consts::FRAC_PI_2), b, a)?;
        let swap = Self::swap(a, b)?;
        let cry_ab = swap.matrix.matmul(&cry.matrix).matmul(&swap.matrix);
        let m = cx.matrix.matmul(&cry_ab).matmul(&cx.matrix);
        Self::named("singlet-triplet", m, vec![a, b])
    }

    pub fn kind(&self) -> &GateKind<T> {
        &self.kind
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn targets(&self) -> &[QubitIndex] {
        &self.targets
    }

    pub fn arity(&self) -> usize {
        self.targets.len()
    }

    /// The inverse gate `G⁻¹ = G†` on the same targets.
    pub fn inverse(&self) -> Self {
        let kind = match &self.kind {
            GateKind::Rotation { axis, angle } => GateKind::Rotation { axis: *axis, angle: -*angle },
            GateKind::ControlledRotation { axis, angle } => {
                GateKind::ControlledRotation { axis: *axis, angle: -*angle }
            }
            GateKind::Custom(name) => GateKind::Custom(format!("{name}†")),
            other => other.clone(),
        };
        Self {
            kind,
            matrix: self.matrix.adjoint(),
            targets: self.targets.clone(),
        }
    }
}
