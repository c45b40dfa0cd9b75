//! Statevector backend: exact unitary evolution with stochastic collapse.

use std::collections::BTreeMap;

use num_complex::Complex;
use rand::Rng;

use super::matrix::apply_local;
use super::{
    Circuit, CircuitOp, Gate, KrausChannel, MeasurementOp, QubitIndex, RngSeed, SimError,
    SimResult, MAX_QUBITS,
};
use crate::Real;

/// Pure state of `n` qubits; amplitude `i` belongs to the basis state whose
/// bit `q` is the value of qubit `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    n_qubits: usize,
    amps: Vec<Complex<T>>,
}

/// One classical readout.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Readout {
    pub qubit: QubitIndex,
    pub bit: u8,
}

/// Recorded bits of one shot, in circuit order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OutcomeRecord {
    pub readouts: Vec<Readout>,
}

impl OutcomeRecord {
    pub fn bits(&self) -> Vec<u8> {
        self.readouts.iter().map(|r| r.bit).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.readouts.is_empty()
    }
}

fn check_register(n_qubits: usize) -> SimResult<()> {
    if n_qubits > MAX_QUBITS {
        Err(SimError::TooManyQubits(n_qubits))
    } else {
        Ok(())
    }
}

pub(crate) fn check_targets(targets: &[QubitIndex], n_qubits: usize) -> SimResult<()> {
    match targets.iter().find(|t| t.0 >= n_qubits) {
        Some(t) => Err(SimError::QubitOutOfRange { index: t.0, n_qubits }),
        None => Ok(()),
    }
}

/// Bit positions of up to three targets, shifted by `offset`.
pub(crate) struct BitPositions {
    bits: [usize; 3],
    len: usize,
}

impl std::ops::Deref for BitPositions {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.bits[..self.len]
    }
}

pub(crate) fn bit_positions(targets: &[QubitIndex], offset: usize) -> BitPositions {
    assert!(targets.len() <= 3, "operators act on at most three qubits");
    let mut bits = [0usize; 3];
    for (b, t) in bits.iter_mut().zip(targets) {
        *b = t.0 + offset;
    }
    BitPositions { bits, len: targets.len() }
}

impl<T: Real> StateVector<T> {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn new(n_qubits: usize) -> SimResult<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> SimResult<Self> {
        check_register(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(SimError::DimensionMismatch { expected: dim, found: index });
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(Self { n_qubits, amps })
    }

    /// Wraps explicit amplitudes; they must be normalized.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex<T>>) -> SimResult<Self> {
        check_register(n_qubits)?;
        if amps.len() != 1 << n_qubits {
            return Err(SimError::DimensionMismatch { expected: 1 << n_qubits, found: amps.len() });
        }
        let state = Self { n_qubits, amps };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - T::one()).abs() > T::unitary_tol() {
            return Err(SimError::NotNormalized { norm_sqr: norm_sqr.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex<T> {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_gate(&mut self, gate: &Gate<T>) -> SimResult<()> {
        check_targets(gate.targets(), self.n_qubits)?;
        apply_local(&mut self.amps, &bit_positions(gate.targets(), 0), gate.matrix());
        Ok(())
    }

    /// Born probability that `target` reads `1` in the computational basis.
    pub fn probability_one(&self, target: QubitIndex) -> T {
        let bit = 1usize << target.0;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Samples a `σ_z` outcome for `target` and collapses the state.
    pub fn measure_z<R: Rng + ?Sized>(&mut self, target: QubitIndex, rng: &mut R) -> SimResult<u8> {
        check_targets(&[target], self.n_qubits)?;
        let bit = 1usize << target.0;
        let (mut p0, mut p1) = (T::zero(), T::zero());
        for (i, a) in self.amps.iter().enumerate() {
            if i & bit == 0 {
                p0 = p0 + a.norm_sqr();
            } else {
                p1 = p1 + a.norm_sqr();
            }
        }
        let u = T::lit(rng.gen::<f64>());
        let outcome: u8 = if u * (p0 + p1) < p0 { 0 } else { 1 };
        let p = if outcome == 0 { p0 } else { p1 };
        let norm = p.sqrt();
        if norm < T::branch_floor() {
            return Err(SimError::NumericDegeneracy { norm: norm.to_f64().unwrap_or(0.0) });
        }
        let inv = T::one() / norm;
        let zero = Complex::new(T::zero(), T::zero());
        for (i, a) in self.amps.iter_mut().enumerate() {
            let keep = ((i & bit != 0) as u8) == outcome;
            *a = if keep { *a * inv } else { zero };
        }
        Ok(outcome)
    }

    /// Projective measurement in the basis of `m`: apply `V`, read the
    /// targets in `σ_z`, apply `V⁻¹`. Returns the physical outcome bits in
    /// target order (readout errors are applied by the circuit runner).
    pub fn measure<R: Rng + ?Sized>(&mut self, m: &MeasurementOp<T>, rng: &mut R) -> SimResult<Vec<u8>> {
        let mut bits = [0u8; 3];
        let len = self.measure_into(m, rng, &mut bits)?;
        Ok(bits[..len].to_vec())
    }

    fn measure_into<R: Rng + ?Sized>(&mut self, m: &MeasurementOp<T>, rng: &mut R, out: &mut [u8; 3]) -> SimResult<usize> {
        check_targets(m.targets(), self.n_qubits)?;
        if let Some(v) = m.basis_change() {
            self.apply_gate(v)?;
        }
        for (slot, &t) in out.iter_mut().zip(m.targets()) {
            *slot = self.measure_z(t, rng)?;
        }
        if let Some(v_inv) = m.basis_change_inverse() {
            self.apply_gate(v_inv)?;
        }
        Ok(m.targets().len())
    }

    /// Draws a computational-basis index with Born probabilities without
    /// collapsing the state.
    fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = self.norm_sqr();
        let u = T::lit(rng.gen::<f64>()) * total;
        let mut cumulative = T::zero();
        let mut last = 0;
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > T::zero() {
                cumulative = cumulative + p;
                last = i;
                if u < cumulative {
                    return i;
                }
            }
        }
        last
    }

    /// Applies a Kraus channel by sampling one branch with probability
    /// `‖K ψ‖²` (quantum trajectory). Returns the chosen operator index.
    pub fn apply_channel<R: Rng + ?Sized>(&mut self, channel: &KrausChannel<T>, rng: &mut R) -> SimResult<usize> {
        check_targets(channel.targets(), self.n_qubits)?;
        let bits = bit_positions(channel.targets(), 0);
        let ops = channel.operators();
        if ops.len() == 1 {
            apply_local(&mut self.amps, &bits, &ops[0]);
            return Ok(0);
        }
        let u = T::lit(rng.gen::<f64>());
        let mut cumulative = T::zero();
        let mut last = None;
        for (k, op) in ops.iter().enumerate() {
            let mut branch = self.amps.clone();
            apply_local(&mut branch, &bits, op);
            let p: T = branch.iter().map(|a| a.norm_sqr()).sum();
            if p <= T::zero() {
                continue;
            }
            cumulative = cumulative + p;
            last = Some((k, branch, p));
            if u < cumulative {
                break;
            }
        }
        let (k, branch, p) = last.ok_or(SimError::NumericDegeneracy { norm: 0.0 })?;
        let norm = p.sqrt();
        if norm < T::branch_floor() {
            return Err(SimError::NumericDegeneracy { norm: norm.to_f64().unwrap_or(0.0) });
        }
        let inv = T::one() / norm;
        self.amps = branch.into_iter().map(|a| a * inv).collect();
        Ok(k)
    }
}

/// Executes one shot of `circuit` from `initial`, returning every recorded
/// bit in circuit order.
pub fn run_shot<T: Real, R: Rng + ?Sized>(
    circuit: &Circuit<T>,
    initial: &StateVector<T>,
    rng: &mut R,
) -> SimResult<OutcomeRecord> {
    check_same_register(circuit, initial)?;
    let mut state = initial.clone();
    let mut record = OutcomeRecord::default();
    run_ops(circuit.ops(), &mut state, rng, &mut record)?;
    Ok(record)
}

fn check_same_register<T: Real>(circuit: &Circuit<T>, initial: &StateVector<T>) -> SimResult<()> {
    if circuit.n_qubits() != initial.n_qubits() {
        return Err(SimError::DimensionMismatch {
            expected: circuit.n_qubits(),
            found: initial.n_qubits(),
        });
    }
    Ok(())
}

fn push_readouts<T: Real, R: Rng + ?Sized>(m: &MeasurementOp<T>, bits: &[u8], rng: &mut R, record: &mut OutcomeRecord) {
    let flip = m.readout_flip();
    for (&qubit, &bit) in m.targets().iter().zip(bits) {
        let flipped = flip > T::zero() && T::lit(rng.gen::<f64>()) < flip;
        record.readouts.push(Readout {
            qubit,
            bit: bit ^ flipped as u8,
        });
    }
}

fn is_plain_z_readout<T: Real>(op: &CircuitOp<T>) -> bool {
    matches!(op, CircuitOp::Measure(m) if m.is_recorded() && m.basis_change().is_none() && m.targets().len() == 1)
}

fn run_ops<T: Real, R: Rng + ?Sized>(
    ops: &[CircuitOp<T>],
    state: &mut StateVector<T>,
    rng: &mut R,
    record: &mut OutcomeRecord,
) -> SimResult<()> {
    for op in ops {
        match op {
            CircuitOp::Gate(g) => state.apply_gate(g)?,
            CircuitOp::Channel(c) => {
                state.apply_channel(c, rng)?;
            }
            CircuitOp::Measure(m) => {
                let mut bits = [0u8; 3];
                let len = state.measure_into(m, rng, &mut bits)?;
                if m.is_recorded() {
                    push_readouts(m, &bits[..len], rng, record);
                }
            }
        }
    }
    Ok(())
}

/// Histogram of recorded bit strings over `shots` independent shots; shot
/// `i` draws from stream `i` of `seed`.
pub fn sample_counts<T: Real>(
    circuit: &Circuit<T>,
    initial: &StateVector<T>,
    shots: u64,
    seed: RngSeed,
) -> SimResult<BTreeMap<Vec<u8>, u64>> {
    check_same_register(circuit, initial)?;
    // Leading gates consume no randomness; evolve them once for all shots.
    // A trailing block of recorded single-qubit z-readouts on distinct qubits
    // is drawn as one joint Born sample.
    let ops = circuit.ops();
    let prefix = ops.iter().take_while(|op| matches!(op, CircuitOp::Gate(_))).count();
    let mut tail = ops[prefix..].iter().rev().take_while(|op| is_plain_z_readout(op)).count();
    let tail_qubits: Vec<usize> = ops[ops.len() - tail..].iter().map(|op| op.targets()[0].0).collect();
    if tail_qubits.iter().enumerate().any(|(i, q)| tail_qubits[..i].contains(q)) {
        tail = 0;
    }
    let body = &ops[prefix..ops.len() - tail];
    let readouts = &ops[ops.len() - tail..];
    let mut prepared = initial.clone();
    run_ops(&ops[..prefix], &mut prepared, &mut rand::rngs::mock::StepRng::new(0, 0), &mut OutcomeRecord::default())?;

    let mut counts = BTreeMap::new();
    let mut record = OutcomeRecord::default();
    let mut state = prepared.clone();
    let mut key: Vec<u8> = Vec::new();
    for shot in 0..shots {
        let mut rng = seed.shot_rng(shot);
        state.amps.copy_from_slice(&prepared.amps);
        record.readouts.clear();
        run_ops(body, &mut state, &mut rng, &mut record)?;
        if !readouts.is_empty() {
            let index = state.sample_index(&mut rng);
            for op in readouts {
                if let CircuitOp::Measure(m) = op {
                    let bit = ((index >> m.targets()[0].0) & 1) as u8;
                    push_readouts(m, &[bit], &mut rng, &mut record);
                }
            }
        }
        key.clear();
        key.extend(record.readouts.iter().map(|r| r.bit));
        match counts.get_mut(key.as_slice()) {
            Some(c) => *c += 1,
            None => {
                counts.insert(key.clone(), 1);
            }
        }
    }
    Ok(counts)
}
