//! Closed-form reference results and the engine mode classifier.
//!
//! Energy-change labels are integers `a = n − m` in units of the qubit
//! splitting, where `n` and `m` are the initial and final computational-basis
//! bits (bit 0 is the `+ω/2` level). A positive label means the qubit gained
//! energy.

use serde::{Deserialize, Serialize};

use crate::qsim::CMatrix;
use crate::Real;

/// Single-qubit energy-change distribution `(P₊, P₋, P₀)`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WorkDistribution<T> {
    pub plus: T,
    pub minus: T,
    pub zero: T,
}

impl<T: Real> WorkDistribution<T> {
    /// Builds the distribution from a thermal initial state and a
    /// conditional transition matrix `p[n][m] = p(m|n)`.
    pub fn from_transitions(beta_omega: T, p: &[[T; 2]; 2]) -> Self {
        let (p0, p1) = crate::thermal::gibbs_populations(beta_omega);
        Self {
            plus: p1 * p[1][0],
            minus: p0 * p[0][1],
            zero: p0 * p[0][0] + p1 * p[1][1],
        }
    }

    pub fn total(&self) -> T {
        self.plus + self.minus + self.zero
    }

    /// `⟨e^{−βΔE}⟩ = P₊e^{−βω} + P₋e^{βω} + P₀`.
    pub fn jarzynski(&self, beta_omega: T) -> T {
        self.plus * (-beta_omega).exp() + self.minus * beta_omega.exp() + self.zero
    }
}

/// Hadamard drive on a thermal qubit: every transition has probability 1/2.
pub fn hadamard_work_statistics<T: Real>(beta_omega: T) -> WorkDistribution<T> {
    let half = T::lit(0.5);
    WorkDistribution::from_transitions(beta_omega, &[[half, half], [half, half]])
}

/// `(p(0|0), p(0|1))` for `N` applications of `R_Y(π/N)` separated by `N − 1`
/// σ_x measurements. The remaining entries follow by symmetry:
/// `p(1|1) = p(0|0)`, `p(1|0) = p(0|1)`.
pub fn intermediate_pmn<T: Real>(n: u32) -> (T, T) {
    assert!(n >= 1, "at least one drive step is required");
    if n == 1 {
        return (T::zero(), T::one());
    }
    let x = T::PI() / T::lit(n as f64);
    let c = x.cos();
    let half = T::lit(0.5);
    let p00 = half * (T::one() - c.powi(n as i32 - 2) + c.powi(n as i32));
    let s_half = (x * half).sin();
    let p01 = s_half * s_half * (T::one() + c.powi(n as i32 - 2) * x.sin() * x.sin()) / (T::one() - c);
    (p00, p01)
}

/// The full 2×2 conditional matrix `p[n][m] = p(m|n)` of [`intermediate_pmn`].
pub fn intermediate_transitions<T: Real>(n: u32) -> [[T; 2]; 2] {
    let (p00, p01) = intermediate_pmn::<T>(n);
    [[p00, p01], [p01, p00]]
}

fn transition_matrix<T: Real>(from: &CMatrix<T>, u: &CMatrix<T>, to: &CMatrix<T>) -> [[T; 2]; 2] {
    // Columns of `from` and `to` are the basis vectors. Entry [i][j] is
    // |⟨to_j| U |from_i⟩|².
    let m = to.adjoint().matmul(&u.matmul(from));
    let mut out = [[T::zero(); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = m.get(j, i).norm_sqr();
        }
    }
    out
}

fn stochastic_product<T: Real>(a: &[[T; 2]; 2], b: &[[T; 2]; 2]) -> [[T; 2]; 2] {
    let mut out = [[T::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Conditional matrix `p[n][m] = p(m|n)` for `N` applications of the
/// single-qubit unitary `u`, separated by `N − 1` projective measurements in
/// the orthonormal basis given by the columns of `measurement_basis`. The
/// first and last measurements are in the computational basis.
pub fn chain_pmn<T: Real>(n: u32, u: &CMatrix<T>, measurement_basis: &CMatrix<T>) -> [[T; 2]; 2] {
    assert!(n >= 1, "at least one drive step is required");
    assert!(u.dim() == 2 && measurement_basis.dim() == 2, "single-qubit operators only");
    let z = CMatrix::identity(2);
    if n == 1 {
        return transition_matrix(&z, u, &z);
    }
    let first = transition_matrix(&z, u, measurement_basis);
    let middle = transition_matrix(measurement_basis, u, measurement_basis);
    let last = transition_matrix(measurement_basis, u, &z);
    let mut acc = first;
    for _ in 0..n - 2 {
        acc = stochastic_product(&acc, &middle);
    }
    stochastic_product(&acc, &last)
}

/// Joint energy-change distribution `P_ab` of two qubits, `a, b ∈ {−1, 0, 1}`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointGrid<T> {
    /// `cells[a + 1][b + 1]`.
    pub cells: [[T; 3]; 3],
}

pub const LABELS: [i8; 3] = [-1, 0, 1];

impl<T: Real> JointGrid<T> {
    pub fn zeros() -> Self {
        Self { cells: [[T::zero(); 3]; 3] }
    }

    pub fn get(&self, a: i8, b: i8) -> T {
        self.cells[(a + 1) as usize][(b + 1) as usize]
    }

    pub fn set(&mut self, a: i8, b: i8, value: T) {
        self.cells[(a + 1) as usize][(b + 1) as usize] = value;
    }

    pub fn total(&self) -> T {
        self.cells.iter().flatten().copied().sum()
    }

    /// `⟨e^{−β₁ΔE₁ − β₂ΔE₂}⟩` with `b1 = β₁ω₁`, `b2 = β₂ω₂`.
    pub fn multivariate_fr(&self, b1: T, b2: T) -> T {
        let mut acc = T::zero();
        for a in LABELS {
            for b in LABELS {
                acc = acc + self.get(a, b) * (-(T::lit(a as f64) * b1 + T::lit(b as f64) * b2)).exp();
            }
        }
        acc
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.cells
            .iter()
            .flatten()
            .zip(other.cells.iter().flatten())
            .map(|(x, y)| (*x - *y).abs())
            .fold(T::zero(), T::max)
    }
}

fn partition<T: Real>(b: T) -> T {
    T::lit(2.0) * (b / T::lit(2.0)).cosh()
}

/// SWAP engine joint distribution for `b1 = β₁ω₁`, `b2 = β₂ω₂`. Only
/// `P₀₀`, `P₊₋` and `P₋₊` are nonzero.
pub fn swap_joint_probabilities<T: Real>(b1: T, b2: T) -> JointGrid<T> {
    let half = T::lit(0.5);
    let z = partition(b1) * partition(b2);
    let mut g = JointGrid::zeros();
    g.set(0, 0, T::lit(2.0) * ((b1 + b2) * half).cosh() / z);
    g.set(-1, 1, (-(b1 - b2) * half).exp() / z);
    g.set(1, -1, ((b1 - b2) * half).exp() / z);
    g
}

/// Singlet-triplet measurement engine: the `±` cells are half the SWAP
/// values and `P₀₀` takes the remainder.
pub fn qmc_joint_probabilities<T: Real>(b1: T, b2: T) -> JointGrid<T> {
    let half = T::lit(0.5);
    let swap = swap_joint_probabilities(b1, b2);
    let mut g = JointGrid::zeros();
    g.set(-1, 1, swap.get(-1, 1) * half);
    g.set(1, -1, swap.get(1, -1) * half);
    g.set(0, 0, T::one() - g.get(-1, 1) - g.get(1, -1));
    g
}

/// Mean energy changes of both qubits and the work `⟨W⟩ = ⟨ΔE₁⟩ + ⟨ΔE₂⟩`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Energetics<T> {
    pub delta_e1: T,
    pub delta_e2: T,
    pub work: T,
}

impl<T: Real> Energetics<T> {
    pub fn scale(&self, k: T) -> Self {
        Self {
            delta_e1: self.delta_e1 * k,
            delta_e2: self.delta_e2 * k,
            work: self.work * k,
        }
    }
}

/// Population of the `+ω/2` level.
fn upper_population<T: Real>(b: T) -> T {
    T::one() / (T::one() + b.exp())
}

pub fn swap_energetics<T: Real>(b1: T, b2: T, omega1: T, omega2: T) -> Energetics<T> {
    let d = upper_population(b2) - upper_population(b1);
    Energetics {
        delta_e1: omega1 * d,
        delta_e2: -omega2 * d,
        work: d * (omega1 - omega2),
    }
}

pub fn qmc_energetics<T: Real>(b1: T, b2: T, omega1: T, omega2: T) -> Energetics<T> {
    swap_energetics(b1, b2, omega1, omega2).scale(T::lit(0.5))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModeLabel {
    Refrigerator,
    HeatEngine,
    ThermalAccelerator,
    Heater,
    Undetermined,
}

impl ModeLabel {
    pub fn short(&self) -> &'static str {
        match self {
            ModeLabel::Refrigerator => "R",
            ModeLabel::HeatEngine => "E",
            ModeLabel::ThermalAccelerator => "A",
            ModeLabel::Heater => "H",
            ModeLabel::Undetermined => "U",
        }
    }
}

impl std::fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.short())
    }
}

/// A mean and its one-sigma error.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
}

impl<T: Real> Estimate<T> {
    pub fn new(value: T, error: T) -> Self {
        Self { value, error }
    }

    pub fn exact(value: T) -> Self {
        Self { value, error: T::zero() }
    }

    /// `Some(±1)` when the value is farther than one sigma from zero.
    fn sign(&self) -> Option<i8> {
        if self.value.abs() <= self.error.abs() {
            None
        } else if self.value > T::zero() {
            Some(1)
        } else {
            Some(-1)
        }
    }
}

/// Sign-based mode classification. The hot qubit is the one with the
/// smaller inverse temperature.
pub fn classify_mode<T: Real>(
    delta_e1: Estimate<T>,
    delta_e2: Estimate<T>,
    work: Estimate<T>,
    beta1: T,
    beta2: T,
) -> ModeLabel {
    if beta1 == beta2 || !(beta1 == beta1 && beta2 == beta2) {
        return ModeLabel::Undetermined;
    }
    let (cold, hot) = if beta1 > beta2 { (delta_e1, delta_e2) } else { (delta_e2, delta_e1) };
    let (Some(cold), Some(hot)) = (cold.sign(), hot.sign()) else {
        return ModeLabel::Undetermined;
    };
    match (cold, hot, work.sign()) {
        (1, 1, _) => ModeLabel::Heater,
        (1, -1, Some(-1)) => ModeLabel::HeatEngine,
        (1, -1, Some(1)) => ModeLabel::ThermalAccelerator,
        (-1, 1, Some(1)) => ModeLabel::Refrigerator,
        _ => ModeLabel::Undetermined,
    }
}

/// Labels from the exact SWAP energetics with zero error bars.
/// `labels[i][j]` corresponds to `(b1_axis[i], b2_axis[j])`.
pub fn theoretical_phase_diagram<T: Real>(
    omega1: T,
    omega2: T,
    b1_axis: &[T],
    b2_axis: &[T],
) -> Vec<Vec<ModeLabel>> {
    b1_axis
        .iter()
        .map(|&b1| {
            b2_axis
                .iter()
                .map(|&b2| {
                    let e = swap_energetics(b1, b2, omega1, omega2);
                    classify_mode(
                        Estimate::exact(e.delta_e1),
                        Estimate::exact(e.delta_e2),
                        Estimate::exact(e.work),
                        b1 / omega1,
                        b2 / omega2,
                    )
                })
                .collect()
        })
        .collect()
}

/// First-order heat-leak prediction of `⟨e^{−βΔE}⟩`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatLeakPrediction<T> {
    /// `1 − β⟨Q e^{−βW}⟩`.
    pub value: T,
    /// Largest `|βQ|` among samples with nonzero weight.
    pub max_beta_q: T,
    /// Whether every `|βQ|` is below the expansion guard.
    pub valid: bool,
}

pub const HEAT_LEAK_GUARD: f64 = 0.3;

/// Weighted samples are `(W, Q, weight)`; weights are normalized internally.
pub fn heat_leak_expansion<T: Real>(beta: T, samples: &[(T, T, T)]) -> HeatLeakPrediction<T> {
    let total: T = samples.iter().map(|s| s.2).sum();
    let mut moment = T::zero();
    let mut max_beta_q = T::zero();
    for &(w, q, weight) in samples {
        if weight == T::zero() {
            continue;
        }
        moment = moment + weight * q * (-beta * w).exp();
        max_beta_q = max_beta_q.max((beta * q).abs());
    }
    if total > T::zero() {
        moment = moment / total;
    }
    let valid = max_beta_q < T::lit(HEAT_LEAK_GUARD);
    if !valid {
        log::warn!("heat-leak expansion outside its validity range: max |βQ| = {max_beta_q}");
    }
    HeatLeakPrediction {
        value: T::one() - beta * moment,
        max_beta_q,
        valid,
    }
}
