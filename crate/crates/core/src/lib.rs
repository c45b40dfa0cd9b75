//! Gate-level simulation of two-point-measurement thermodynamics
//! experiments on qubits: thermal-state preparation by purification, the
//! standard and ancilla-assisted measurement protocols, fluctuation-relation
//! estimators, two-qubit engines, noise channels and closed-form references.
//!
//! Everything numeric is generic over [`Real`] (`f64` or `f32`); the aliases
//! below fix the scalar to `f64`, with `…32` variants for `f32`.

pub mod noise;
pub mod oracle;
pub mod qsim;
mod real;
pub mod thermal;
pub mod tpm;

pub use real::Real;

pub type StateVector = qsim::StateVector<f64>;
pub type DensityMatrix = qsim::DensityMatrix<f64>;
pub type Gate = qsim::Gate<f64>;
pub type Circuit = qsim::Circuit<f64>;
pub type CircuitOp = qsim::CircuitOp<f64>;
pub type QubitSpec = thermal::QubitSpec<f64>;
pub type NoiseConfig = noise::NoiseConfig<f64>;
pub type ExperimentDef = tpm::ExperimentDef<f64>;
pub type JointDistribution = tpm::JointDistribution<f64>;

pub type StateVector32 = qsim::StateVector<f32>;
pub type DensityMatrix32 = qsim::DensityMatrix<f32>;
pub type Gate32 = qsim::Gate<f32>;
pub type Circuit32 = qsim::Circuit<f32>;
pub type CircuitOp32 = qsim::CircuitOp<f32>;
pub type QubitSpec32 = thermal::QubitSpec<f32>;
pub type NoiseConfig32 = noise::NoiseConfig<f32>;
pub type ExperimentDef32 = tpm::ExperimentDef<f32>;
pub type JointDistribution32 = tpm::JointDistribution<f32>;
