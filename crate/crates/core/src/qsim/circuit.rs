//! Circuit operations and the circuit container shared by both backends.

use super::gate::check_distinct;
use super::{CMatrix, Gate, QubitIndex, SimError, SimResult, MAX_QUBITS};
use crate::Real;

/// Projective measurement of the observable `Σ aₖ V†ΠₖV`, realized by applying
/// the basis change `V`, measuring the targets in `σ_z` and undoing `V`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementOp<T> {
    basis_change: Option<(Gate<T>, Gate<T>)>,
    targets: Vec<QubitIndex>,
    record: bool,
    readout_flip: T,
}

fn with_inverse<T: Real>(v: Gate<T>) -> (Gate<T>, Gate<T>) {
    let inv = v.inverse();
    (v, inv)
}

impl<T: Real> MeasurementOp<T> {
    /// Recorded `σ_z` measurement of a single qubit.
    pub fn z(target: QubitIndex) -> Self {
        Self {
            basis_change: None,
            targets: vec![target],
            record: true,
            readout_flip: T::zero(),
        }
    }

    /// Measurement in the basis defined by `basis_change`, whose targets must
    /// be a subset of `targets`. Outcome bits are reported in `targets` order.
    pub fn in_basis(basis_change: Gate<T>, targets: Vec<QubitIndex>) -> SimResult<Self> {
        if targets.is_empty() || targets.len() > 3 {
            return Err(SimError::UnsupportedArity(targets.len()));
        }
        check_distinct(&targets)?;
        if let Some(stray) = basis_change.targets().iter().find(|t| !targets.contains(t)) {
            return Err(SimError::BasisChangeOutsideTargets(stray.0));
        }
        Ok(Self {
            basis_change: Some(with_inverse(basis_change)),
            targets,
            record: true,
            readout_flip: T::zero(),
        })
    }

    /// `σ_x` measurement: Hadamard, `σ_z` readout, Hadamard.
    pub fn x(target: QubitIndex) -> Self {
        Self {
            basis_change: Some(with_inverse(Gate::hadamard(target))),
            targets: vec![target],
            record: true,
            readout_flip: T::zero(),
        }
    }

    /// Marks the outcome as discarded: sampled and dropped in the shot
    /// backend, summed over (full dephasing) in the density-matrix backend.
    pub fn discarded(mut self) -> Self {
        self.record = false;
        self
    }

    /// Classical readout error: each recorded bit flips with probability `p`.
    pub fn with_readout_flip(mut self, p: T) -> SimResult<Self> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(SimError::InvalidProbability(p.to_f64().unwrap_or(f64::NAN)));
        }
        self.readout_flip = p;
        Ok(self)
    }

    pub fn basis_change(&self) -> Option<&Gate<T>> {
        self.basis_change.as_ref().map(|(v, _)| v)
    }

    /// `V⁻¹`, precomputed.
    pub fn basis_change_inverse(&self) -> Option<&Gate<T>> {
        self.basis_change.as_ref().map(|(_, v_inv)| v_inv)
    }

    pub fn targets(&self) -> &[QubitIndex] {
        &self.targets
    }

    pub fn is_recorded(&self) -> bool {
        self.record
    }

    pub fn readout_flip(&self) -> T {
        self.readout_flip
    }
}

/// Completely positive trace-preserving map in operator-sum form.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel<T> {
    name: String,
    operators: Vec<CMatrix<T>>,
    targets: Vec<QubitIndex>,
}

impl<T: Real> KrausChannel<T> {
    pub fn new(name: &str, operators: Vec<CMatrix<T>>, targets: Vec<QubitIndex>) -> SimResult<Self> {
        let k = targets.len();
        if !(1..=2).contains(&k) {
            return Err(SimError::UnsupportedArity(k));
        }
        check_distinct(&targets)?;
        let dim = 1 << k;
        let mut completeness = CMatrix::zeros(dim);
        for op in &operators {
            if op.dim() != dim {
                return Err(SimError::DimensionMismatch { expected: dim, found: op.dim() });
            }
            completeness = completeness.add(&op.adjoint().matmul(op));
        }
        let deviation = completeness.max_abs_diff(&CMatrix::identity(dim));
        if deviation > T::unitary_tol() {
            return Err(SimError::NotTracePreserving {
                deviation: deviation.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self {
            name: name.into(),
            operators,
            targets,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn operators(&self) -> &[CMatrix<T>] {
        &self.operators
    }

    pub fn targets(&self) -> &[QubitIndex] {
        &self.targets
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CircuitOp<T> {
    Gate(Gate<T>),
    Measure(MeasurementOp<T>),
    Channel(KrausChannel<T>),
}

impl<T: Real> CircuitOp<T> {
    pub fn targets(&self) -> &[QubitIndex] {
        match self {
            CircuitOp::Gate(g) => g.targets(),
            CircuitOp::Measure(m) => m.targets(),
            CircuitOp::Channel(c) => c.targets(),
        }
    }

    /// Number of classical bits this op contributes to an outcome record.
    pub fn recorded_bits(&self) -> usize {
        match self {
            CircuitOp::Measure(m) if m.is_recorded() => m.targets().len(),
            _ => 0,
        }
    }
}

impl<T> From<Gate<T>> for CircuitOp<T> {
    fn from(g: Gate<T>) -> Self {
        CircuitOp::Gate(g)
    }
}

impl<T> From<MeasurementOp<T>> for CircuitOp<T> {
    fn from(m: MeasurementOp<T>) -> Self {
        CircuitOp::Measure(m)
    }
}

impl<T> From<KrausChannel<T>> for CircuitOp<T> {
    fn from(c: KrausChannel<T>) -> Self {
        CircuitOp::Channel(c)
    }
}

/// An ordered list of operations on a fixed-size register. Every pushed op
/// is checked against the register size, so a constructed circuit is always
/// well formed.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit<T> {
    n_qubits: usize,
    ops: Vec<CircuitOp<T>>,
}

impl<T: Real> Circuit<T> {
    pub fn new(n_qubits: usize) -> SimResult<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(SimError::TooManyQubits(n_qubits));
        }
        Ok(Self { n_qubits, ops: Vec::new() })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[CircuitOp<T>] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: impl Into<CircuitOp<T>>) -> SimResult<&mut Self> {
        let op = op.into();
        for t in op.targets() {
            if t.0 >= self.n_qubits {
                return Err(SimError::QubitOutOfRange { index: t.0, n_qubits: self.n_qubits });
            }
        }
        self.ops.push(op);
        Ok(self)
    }

    pub fn extend<I>(&mut self, ops: I) -> SimResult<&mut Self>
    where
        I: IntoIterator,
        I::Item: Into<CircuitOp<T>>,
    {
        for op in ops {
            self.push(op)?;
        }
        Ok(self)
    }

    /// Total number of recorded classical bits per shot.
    pub fn recorded_bits(&self) -> usize {
        self.ops.iter().map(CircuitOp::recorded_bits).sum()
    }
}
