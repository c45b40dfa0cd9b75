//! Imperfection channels: heating during the drive, rotation-angle
//! miscalibration and classical readout flips.
//!
//! Every channel is either a Kraus map (run exactly by the density-matrix
//! backend and by trajectory sampling in the shot backend) or a classical
//! readout error, so both backends see the same noise.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qsim::{
    channel_probabilities, sample_counts, Axis, CMatrix, Circuit, CircuitOp, DensityMatrix, Gate,
    GateKind, KrausChannel, MeasurementOp, QubitIndex, RngSeed, SimError, StateVector,
};
use crate::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NoiseError {
    #[error("heating probability must lie in [0, 1), got {0}")]
    Heating(f64),
    #[error("readout flip probability must lie in [0, 0.1], got {0}")]
    ReadoutFlip(f64),
    #[error("rotation bias must be finite with |bias| < 1, got {0}")]
    RotationBias(f64),
    #[error("rotation jitter must be finite and non-negative, got {0}")]
    RotationJitter(f64),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Relative rotation-angle error: a rotation by `α` is executed as
/// `α(1 + bias + jitter·ξ)` with `ξ` standard normal, drawn independently per
/// gate application.
#[derive(Copy, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, bound(deserialize = "T: Deserialize<'de> + Default"))]
pub struct RotationError<T> {
    pub bias: T,
    pub jitter: T,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, bound(deserialize = "T: Deserialize<'de> + Default"))]
pub struct NoiseConfig<T> {
    /// Probability per drive gate of a jump `|1⟩ → |0⟩` (toward the excited
    /// level), i.e. heat flowing into the qubit.
    pub heating: T,
    pub rotation: RotationError<T>,
    /// Probability that a recorded bit is reported flipped.
    pub readout_flip: T,
}

fn f(x: impl num_traits::ToPrimitive) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl<T: Real> NoiseConfig<T> {
    pub fn validate(&self) -> Result<(), NoiseError> {
        if !(self.heating >= T::zero() && self.heating < T::one()) {
            return Err(NoiseError::Heating(f(self.heating)));
        }
        if !(self.readout_flip >= T::zero() && self.readout_flip <= T::lit(0.1)) {
            return Err(NoiseError::ReadoutFlip(f(self.readout_flip)));
        }
        if !(self.rotation.bias.abs() < T::one()) {
            return Err(NoiseError::RotationBias(f(self.rotation.bias)));
        }
        if !(self.rotation.jitter >= T::zero() && self.rotation.jitter.is_finite()) {
            return Err(NoiseError::RotationJitter(f(self.rotation.jitter)));
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.heating == T::zero()
            && self.readout_flip == T::zero()
            && self.rotation.bias == T::zero()
            && self.rotation.jitter == T::zero()
    }

    /// Heating channel on `site`, or nothing when heating is off.
    pub fn heating_ops(&self, sites: &[QubitIndex]) -> Vec<CircuitOp<T>> {
        if self.heating == T::zero() {
            return Vec::new();
        }
        sites
            .iter()
            .map(|&q| heating_channel(self.heating, q).expect("validated heating probability").into())
            .collect()
    }

    /// The gate as executed on noisy hardware. Rotations pick up the
    /// relative bias and, when jitter is on, the averaged jitter channel;
    /// other gates pass through.
    pub fn gate_ops(&self, gate: Gate<T>) -> Vec<CircuitOp<T>> {
        match *gate.kind() {
            GateKind::Rotation { axis, angle } if self.rotation != RotationError::default() => {
                let q = gate.targets()[0];
                let mut ops = vec![Gate::rotation(axis, angle * (T::one() + self.rotation.bias), q).into()];
                if self.rotation.jitter > T::zero() {
                    ops.push(rotation_jitter_channel(axis, self.rotation.jitter * angle.abs(), q).into());
                }
                ops
            }
            _ => vec![gate.into()],
        }
    }

    /// Attaches the readout error to a recorded measurement.
    pub fn measurement(&self, m: MeasurementOp<T>) -> MeasurementOp<T> {
        if self.readout_flip == T::zero() || !m.is_recorded() {
            return m;
        }
        m.with_readout_flip(self.readout_flip).expect("validated readout probability")
    }
}

fn cr<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Inverse amplitude damping toward `|0⟩` (the `+ω/2` level):
/// `K₀ = |0⟩⟨0| + √(1−γ)|1⟩⟨1|`, `K₁ = √γ |0⟩⟨1|`.
pub fn heating_channel<T: Real>(gamma: T, site: QubitIndex) -> Result<KrausChannel<T>, SimError> {
    let z = T::zero();
    let k0 = CMatrix::from_vec(vec![cr(T::one()), cr(z), cr(z), cr((T::one() - gamma).sqrt())]);
    let k1 = CMatrix::from_vec(vec![cr(z), cr(gamma.sqrt()), cr(z), cr(z)]);
    KrausChannel::new("heating", vec![k0, k1], vec![site])
}

/// Average of `R_axis(δ) ρ R_axis(δ)†` over `δ ~ N(0, spread²)`:
/// `(1−p) ρ + p σ ρ σ` with `p = (1 − e^{−spread²/2})/2`.
pub fn rotation_jitter_channel<T: Real>(axis: Axis, spread: T, site: QubitIndex) -> KrausChannel<T> {
    let two = T::lit(2.0);
    let p = (T::one() - (-(spread * spread) / two).exp()) / two;
    let pauli = match axis {
        Axis::X => Gate::x(site),
        Axis::Y => Gate::y(site),
    };
    let k0 = CMatrix::identity(2).scale((T::one() - p).sqrt());
    let k1 = pauli.matrix().scale(p.sqrt());
    KrausChannel::new("rotation-jitter", vec![k0, k1], vec![site]).expect("mixed-unitary channel is trace preserving")
}

/// Applies the configured heating map to `site` of `state`.
pub fn apply_noise_channel<T: Real>(
    state: &DensityMatrix<T>,
    cfg: &NoiseConfig<T>,
    site: QubitIndex,
) -> Result<DensityMatrix<T>, NoiseError> {
    cfg.validate()?;
    let mut out = state.clone();
    for op in cfg.heating_ops(&[site]) {
        if let CircuitOp::Channel(c) = op {
            out.apply_channel(&c)?;
        }
    }
    Ok(out)
}

/// `⟨σ_z⟩` after `R_Y(α)` on `|0⟩` at one angle.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationPoint<T> {
    pub angle: T,
    /// `cos α`.
    pub ideal: T,
    /// Exact expectation under the noise model (density-matrix backend).
    pub exact: T,
    /// Shot estimate `(n₀ − n₁)/N`.
    pub sampled: T,
    /// `√((1 − ⟨σ_z⟩²)/N)`, evaluated at the sampled value.
    pub std_error: T,
}

/// Rotation-calibration curve: prepares `|0⟩`, applies `R_Y(α)` as executed
/// under `cfg`, and reads `σ_z`, for each angle. Angle `i` uses child seed
/// `seed.derive(i)`.
pub fn rotation_fidelity_curve<T: Real>(
    angles: &[T],
    cfg: &NoiseConfig<T>,
    shots: u64,
    seed: RngSeed,
) -> Result<Vec<RotationPoint<T>>, NoiseError> {
    cfg.validate()?;
    let q = QubitIndex(0);
    let mut points = Vec::with_capacity(angles.len());
    for (i, &angle) in angles.iter().enumerate() {
        let mut circuit = Circuit::new(1)?;
        circuit.extend(cfg.gate_ops(Gate::ry(angle, q)))?;
        circuit.push(cfg.measurement(MeasurementOp::z(q)))?;

        let exact_probs = channel_probabilities(&circuit, &DensityMatrix::new(1)?)?;
        let p = |bit: u8| exact_probs.get(&vec![bit]).copied().unwrap_or(T::zero());
        let exact = p(0) - p(1);

        let counts = sample_counts(&circuit, &StateVector::new(1)?, shots, seed.derive(i as u64))?;
        let n = |bit: u8| T::lit(counts.get(&vec![bit]).copied().unwrap_or(0) as f64);
        let total = T::lit(shots as f64);
        let sampled = (n(0) - n(1)) / total;
        let std_error = ((T::one() - sampled * sampled).max(T::zero()) / total).sqrt();

        points.push(RotationPoint {
            angle,
            ideal: angle.cos(),
            exact,
            sampled,
            std_error,
        });
    }
    Ok(points)
}
