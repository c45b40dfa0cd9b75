//! Density-matrix backend: exact channel composition, used as the oracle for
//! shot statistics.

use std::collections::BTreeMap;

use num_complex::Complex;

use super::matrix::apply_local;
use super::state::{bit_positions, check_targets};
use super::{CMatrix, Circuit, CircuitOp, Gate, KrausChannel, QubitIndex, SimError, SimResult, StateVector, MAX_QUBITS};
use crate::Real;

/// Full `2^n × 2^n` density matrix. Stored row-major, so in the flattened
/// buffer the column index occupies bits `0..n` and the row index bits `n..2n`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    n_qubits: usize,
    rho: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// `|0…0⟩⟨0…0|`.
    pub fn new(n_qubits: usize) -> SimResult<Self> {
        Ok(Self::from_pure(&StateVector::new(n_qubits)?))
    }

    pub fn from_pure(psi: &StateVector<T>) -> Self {
        let amps = psi.amplitudes();
        let dim = amps.len();
        let mut rho = CMatrix::zeros(dim);
        for (i, a) in amps.iter().enumerate() {
            for (j, b) in amps.iter().enumerate() {
                rho.set(i, j, a * b.conj());
            }
        }
        Self { n_qubits: psi.n_qubits(), rho }
    }

    /// Wraps an explicit matrix; it must be Hermitian with unit trace.
    pub fn from_matrix(n_qubits: usize, rho: CMatrix<T>) -> SimResult<Self> {
        if n_qubits > MAX_QUBITS {
            return Err(SimError::TooManyQubits(n_qubits));
        }
        if rho.dim() != 1 << n_qubits {
            return Err(SimError::DimensionMismatch { expected: 1 << n_qubits, found: rho.dim() });
        }
        let dm = Self { n_qubits, rho };
        let tr = dm.trace();
        if (tr - T::one()).abs() > T::unitary_tol() || dm.hermiticity_deviation() > T::unitary_tol() {
            return Err(SimError::NotNormalized { norm_sqr: tr.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(dm)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// Real part of the trace (the imaginary part vanishes for Hermitian ρ).
    pub fn trace(&self) -> T {
        self.rho.trace().re
    }

    pub fn hermiticity_deviation(&self) -> T {
        self.rho.max_abs_diff(&self.rho.adjoint())
    }

    /// Diagonal entries, i.e. computational-basis populations.
    pub fn populations(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.rho.get(i, i).re).collect()
    }

    /// Probability that `target` reads `1` in `σ_z`.
    pub fn probability_one(&self, target: QubitIndex) -> T {
        let bit = 1usize << target.0;
        self.populations()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, p)| p)
            .sum()
    }

    /// Reduced state of a single qubit, as a 2×2 matrix.
    pub fn reduced_qubit(&self, target: QubitIndex) -> CMatrix<T> {
        let bit = 1usize << target.0;
        let mut out = CMatrix::zeros(2);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if (i & !bit) != (j & !bit) {
                    continue;
                }
                let (a, b) = (((i & bit) != 0) as usize, ((j & bit) != 0) as usize);
                out.set(a, b, out.get(a, b) + self.rho.get(i, j));
            }
        }
        out
    }

    /// `ρ → K ρ K†` for an arbitrary (not necessarily unitary) local operator.
    fn conjugate(&mut self, op: &CMatrix<T>, targets: &[QubitIndex]) {
        let n = self.n_qubits;
        let data = self.rho.as_mut_slice();
        apply_local(data, &bit_positions(targets, n), op);
        apply_local(data, &bit_positions(targets, 0), &op.conj());
    }

    pub fn apply_gate(&mut self, gate: &Gate<T>) -> SimResult<()> {
        check_targets(gate.targets(), self.n_qubits)?;
        self.conjugate(gate.matrix(), gate.targets());
        Ok(())
    }

    /// `ρ → Σ_k K_k ρ K_k†`.
    pub fn apply_channel(&mut self, channel: &KrausChannel<T>) -> SimResult<()> {
        check_targets(channel.targets(), self.n_qubits)?;
        let mut acc = CMatrix::zeros(self.dim());
        for op in channel.operators() {
            let mut branch = self.clone();
            branch.conjugate(op, channel.targets());
            acc = acc.add(&branch.rho);
        }
        self.rho = acc;
        Ok(())
    }

    fn outcome_mask(targets: &[QubitIndex], outcome: usize) -> (usize, usize) {
        let k = targets.len();
        let mut mask = 0;
        let mut value = 0;
        for (j, t) in targets.iter().enumerate() {
            mask |= 1 << t.0;
            if (outcome >> (k - 1 - j)) & 1 == 1 {
                value |= 1 << t.0;
            }
        }
        (mask, value)
    }

    /// Unnormalized branch `Π_o ρ Π_o` for the computational-basis outcome
    /// `o` of `targets` (first target = most significant bit of `o`).
    pub fn project_z(&self, targets: &[QubitIndex], outcome: usize) -> Self {
        let (mask, value) = Self::outcome_mask(targets, outcome);
        let dim = self.dim();
        let mut out = self.clone();
        let zero = Complex::new(T::zero(), T::zero());
        for i in 0..dim {
            for j in 0..dim {
                if i & mask != value || j & mask != value {
                    out.rho.set(i, j, zero);
                }
            }
        }
        out
    }

    /// Non-selective `σ_z` measurement of `targets`: `Σ_o Π_o ρ Π_o`.
    pub fn dephase_z(&mut self, targets: &[QubitIndex]) {
        let mask = targets.iter().fold(0usize, |m, t| m | (1 << t.0));
        let dim = self.dim();
        let zero = Complex::new(T::zero(), T::zero());
        for i in 0..dim {
            for j in 0..dim {
                if i & mask != j & mask {
                    self.rho.set(i, j, zero);
                }
            }
        }
    }

    fn scale(&mut self, factor: T) {
        for z in self.rho.as_mut_slice() {
            *z = *z * factor;
        }
    }

    fn accumulate(&mut self, other: &Self) {
        for (a, b) in self.rho.as_mut_slice().iter_mut().zip(other.rho.as_slice()) {
            *a = *a + b;
        }
    }
}

fn outcome_bits(outcome: usize, k: usize) -> impl Iterator<Item = u8> {
    (0..k).map(move |j| ((outcome >> (k - 1 - j)) & 1) as u8)
}

/// Exact probability of every recorded bit string of `circuit` run on
/// `initial`. Recorded measurements split the state into conditional
/// branches; discarded ones dephase in place. Bit strings whose probability
/// vanishes (below `BRANCH_FLOOR²`) are omitted.
pub fn channel_probabilities<T: Real>(
    circuit: &Circuit<T>,
    initial: &DensityMatrix<T>,
) -> SimResult<BTreeMap<Vec<u8>, T>> {
    if circuit.n_qubits() != initial.n_qubits() {
        return Err(SimError::DimensionMismatch {
            expected: circuit.n_qubits(),
            found: initial.n_qubits(),
        });
    }
    let floor = T::branch_floor() * T::branch_floor();
    let mut branches: BTreeMap<Vec<u8>, DensityMatrix<T>> = BTreeMap::new();
    branches.insert(Vec::new(), initial.clone());

    for op in circuit.ops() {
        match op {
            CircuitOp::Gate(g) => {
                for rho in branches.values_mut() {
                    rho.apply_gate(g)?;
                }
            }
            CircuitOp::Channel(c) => {
                for rho in branches.values_mut() {
                    rho.apply_channel(c)?;
                }
            }
            CircuitOp::Measure(m) => {
                if let Some(v) = m.basis_change() {
                    for rho in branches.values_mut() {
                        rho.apply_gate(v)?;
                    }
                }
                let targets = m.targets();
                if m.is_recorded() {
                    let k = targets.len();
                    let flip = m.readout_flip();
                    let mut next: BTreeMap<Vec<u8>, DensityMatrix<T>> = BTreeMap::new();
                    for (key, rho) in &branches {
                        for outcome in 0..(1usize << k) {
                            let branch = rho.project_z(targets, outcome);
                            if branch.trace() <= floor {
                                continue;
                            }
                            for flips in 0..(1usize << k) {
                                let n_flips = flips.count_ones() as i32;
                                let weight = if flip > T::zero() {
                                    flip.powi(n_flips) * (T::one() - flip).powi(k as i32 - n_flips)
                                } else if flips == 0 {
                                    T::one()
                                } else {
                                    continue;
                                };
                                let mut new_key = key.clone();
                                new_key.extend(outcome_bits(outcome ^ flips, k));
                                let mut weighted = branch.clone();
                                if weight != T::one() {
                                    weighted.scale(weight);
                                }
                                match next.get_mut(&new_key) {
                                    Some(existing) => existing.accumulate(&weighted),
                                    None => {
                                        next.insert(new_key, weighted);
                                    }
                                }
                            }
                        }
                    }
                    branches = next;
                } else {
                    for rho in branches.values_mut() {
                        rho.dephase_z(targets);
                    }
                }
                if let Some(v) = m.basis_change() {
                    let inv = v.inverse();
                    for rho in branches.values_mut() {
                        rho.apply_gate(&inv)?;
                    }
                }
            }
        }
    }

    Ok(branches
        .into_iter()
        .map(|(key, rho)| (key, rho.trace()))
        .filter(|(_, p)| *p > floor)
        .collect())
}
