//! Exact few-qubit circuit simulation.
//!
//! Two interchangeable backends share one circuit representation:
//! [`StateVector`] samples shots with stochastic mid-circuit collapse, and
//! [`DensityMatrix`] composes channels exactly to give the probability of
//! every recorded outcome string ([`channel_probabilities`]).
//!
//! Qubit `q` is bit `q` of the basis-state index (qubit 0 least significant).
//! Inside a multi-qubit operator the first target is the most significant
//! local bit.

mod circuit;
mod density;
mod error;
mod gate;
mod matrix;
mod rng;
mod state;

pub use circuit::{Circuit, CircuitOp, KrausChannel, MeasurementOp};
pub use density::{channel_probabilities, DensityMatrix};
pub use error::{SimError, SimResult};
pub use gate::{Axis, Gate, GateKind, QubitIndex};
pub use matrix::CMatrix;
pub use rng::{RngSeed, ShotRng};
pub use state::{run_shot, sample_counts, OutcomeRecord, Readout, StateVector};

/// Largest register either backend accepts.
pub const MAX_QUBITS: usize = 8;
