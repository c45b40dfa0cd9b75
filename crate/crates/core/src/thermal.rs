//! Gibbs-state preparation by purification, and temperature read-off.
//!
//! Energy convention: `H = (ω/2) σ_z`, so `|0⟩` sits at `+ω/2` and `|1⟩` is
//! the ground level at `−ω/2`. At positive `β` the ground level `|1⟩` is the
//! more populated one.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qsim::{CMatrix, CircuitOp, DensityMatrix, Gate, QubitIndex};
use crate::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ThermalError {
    #[error("level spacing must be positive and finite, got {0}")]
    InvalidOmega(f64),
    #[error("inverse temperature must be finite, got {0}")]
    InvalidBeta(f64),
    #[error("system and ancilla must be distinct qubits (both are {0})")]
    SameQubit(QubitIndex),
    #[error("temperature undefined: population p{level} is zero (pure state)")]
    PureState { level: u8 },
    #[error("populations must be non-negative and sum to 1, got p0 = {p0}, p1 = {p1}")]
    InvalidPopulations { p0: f64, p1: f64 },
}

/// Level spacing `ω` (ħ = 1) and inverse temperature `β` of one qubit.
/// `β` may be negative.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitSpec<T> {
    omega: T,
    beta: T,
}

impl<T: Real> QubitSpec<T> {
    pub fn new(omega: T, beta: T) -> Result<Self, ThermalError> {
        if !(omega > T::zero() && omega.is_finite()) {
            return Err(ThermalError::InvalidOmega(omega.to_f64().unwrap_or(f64::NAN)));
        }
        if !beta.is_finite() {
            return Err(ThermalError::InvalidBeta(beta.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { omega, beta })
    }

    /// Spec with the given rescaled inverse temperature `βω`.
    pub fn from_beta_omega(beta_omega: T, omega: T) -> Result<Self, ThermalError> {
        if !(omega > T::zero()) {
            return Err(ThermalError::InvalidOmega(omega.to_f64().unwrap_or(f64::NAN)));
        }
        Self::new(omega, beta_omega / omega)
    }

    pub fn omega(&self) -> T {
        self.omega
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn beta_omega(&self) -> T {
        self.beta * self.omega
    }

    /// `(p₀, p₁)` of the Gibbs state.
    pub fn gibbs_populations(&self) -> (T, T) {
        gibbs_populations(self.beta_omega())
    }

    /// `e^{−βH}/Z` as a single-qubit density matrix.
    pub fn gibbs_state(&self) -> DensityMatrix<T> {
        let (p0, p1) = self.gibbs_populations();
        let mut m = CMatrix::zeros(2);
        m.set(0, 0, num_complex::Complex::new(p0, T::zero()));
        m.set(1, 1, num_complex::Complex::new(p1, T::zero()));
        DensityMatrix::from_matrix(1, m).expect("Gibbs populations are normalized")
    }
}

/// Gibbs populations `(p₀, p₁) = (1/(1+e^{βω}), 1/(1+e^{−βω}))`.
pub fn gibbs_populations<T: Real>(beta_omega: T) -> (T, T) {
    let one = T::one();
    (one / (one + beta_omega.exp()), one / (one + (-beta_omega).exp()))
}

/// Preparation angle `φ = 2 arctan(e^{βω/2})`, in `(0, π)`.
pub fn purification_angle<T: Real>(spec: &QubitSpec<T>) -> T {
    angle_for_beta_omega(spec.beta_omega())
}

pub fn angle_for_beta_omega<T: Real>(beta_omega: T) -> T {
    T::lit(2.0) * (beta_omega / T::lit(2.0)).exp().atan()
}

/// Nominal `βω = 2 ln tan(φ/2)` implied by a preparation angle; the inverse
/// of [`purification_angle`].
pub fn beta_omega_for_angle<T: Real>(angle: T) -> T {
    T::lit(2.0) * (angle / T::lit(2.0)).tan().ln()
}

/// System qubit, the ancilla that purifies it, and the target temperature.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct PurificationPair<T> {
    system: QubitIndex,
    ancilla: QubitIndex,
    spec: QubitSpec<T>,
}

impl<T: Real> PurificationPair<T> {
    pub fn new(system: QubitIndex, ancilla: QubitIndex, spec: QubitSpec<T>) -> Result<Self, ThermalError> {
        if system == ancilla {
            return Err(ThermalError::SameQubit(system));
        }
        Ok(Self { system, ancilla, spec })
    }

    pub fn system(&self) -> QubitIndex {
        self.system
    }

    pub fn ancilla(&self) -> QubitIndex {
        self.ancilla
    }

    pub fn spec(&self) -> &QubitSpec<T> {
        &self.spec
    }
}

/// `R_Y(φ)` on the ancilla followed by `CNOT(ancilla → system)`, preparing
///
/// `(e^{−βω/4}|0⟩_s|0⟩_a + e^{βω/4}|1⟩_s|1⟩_a) / √(2 cosh(βω/2))`,
///
/// whose system marginal is the Gibbs state and whose ancilla is a perfect
/// record of the system's energy eigenstate.
pub fn build_purification<T: Real>(pair: &PurificationPair<T>) -> Vec<CircuitOp<T>> {
    purification_from_angle(purification_angle(&pair.spec), pair.system, pair.ancilla)
        .expect("pair qubits are distinct")
}

/// Same circuit as [`build_purification`] for an explicit angle, which
/// reaches the `βω → ±∞` limits (`φ → π`, `φ → 0`).
pub fn purification_from_angle<T: Real>(
    angle: T,
    system: QubitIndex,
    ancilla: QubitIndex,
) -> Result<Vec<CircuitOp<T>>, ThermalError> {
    let cnot = Gate::cnot(ancilla, system).map_err(|_| ThermalError::SameQubit(system))?;
    Ok(vec![Gate::ry(angle, ancilla).into(), cnot.into()])
}

/// `β_m = ln(p₁/p₀)/ω` from measured populations.
pub fn measured_beta<T: Real>(p0: T, p1: T, omega: T) -> Result<T, ThermalError> {
    if !(omega > T::zero() && omega.is_finite()) {
        return Err(ThermalError::InvalidOmega(omega.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(measured_beta_omega(p0, p1)? / omega)
}

/// `β_m ω = ln(p₁/p₀)`.
pub fn measured_beta_omega<T: Real>(p0: T, p1: T) -> Result<T, ThermalError> {
    let invalid = || ThermalError::InvalidPopulations {
        p0: p0.to_f64().unwrap_or(f64::NAN),
        p1: p1.to_f64().unwrap_or(f64::NAN),
    };
    if !(p0 >= T::zero() && p1 >= T::zero()) || (p0 + p1 - T::one()).abs() > T::lit(1e-9).max(T::epsilon() * T::lit(8.0)) {
        return Err(invalid());
    }
    if p0 == T::zero() {
        return Err(ThermalError::PureState { level: 0 });
    }
    if p1 == T::zero() {
        return Err(ThermalError::PureState { level: 1 });
    }
    Ok((p1 / p0).ln())
}
