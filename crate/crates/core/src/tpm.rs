//! Two-point-measurement protocols for the four experiments, with
//! energy-change distributions and fluctuation-relation estimators.
//!
//! Qubit layout: single-qubit experiments use the system on `q0` and its
//! ancilla on `q1`. Engines place qubit 1 on `q1` (ancilla `q0`) and qubit 2
//! on `q2` (ancilla `q3`).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::noise::{NoiseConfig, NoiseError};
use crate::oracle::{Energetics, JointGrid, WorkDistribution, LABELS};
use crate::qsim::{
    channel_probabilities, sample_counts, Circuit, CircuitOp, DensityMatrix, Gate, MeasurementOp, QubitIndex,
    RngSeed, SimError, StateVector,
};
use crate::thermal::{build_purification, measured_beta, PurificationPair, QubitSpec, ThermalError};
use crate::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TpmError {
    #[error("{kind} needs {expected} qubit spec(s), got {found}")]
    SpecCount { kind: &'static str, expected: usize, found: usize },
    #[error("shot count must be at least 1")]
    NoShots,
    #[error("intermediate-measurement experiment needs at least one drive step")]
    NoSteps,
    #[error("at least {min} repetitions are required, got {found}")]
    TooFewRepetitions { min: usize, found: usize },
    #[error("distribution has {found} system qubit(s), expected {expected}")]
    WrongArity { expected: usize, found: usize },
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Thermal(#[from] ThermalError),
}

pub type TpmResult<T> = Result<T, TpmError>;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProtocolKind {
    /// Recorded z-measurement of the system before the drive.
    StandardTpm,
    /// Initial energy read from the purifying ancilla after the drive.
    Aatpm,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExperimentKind {
    /// Hadamard drive on one thermal qubit.
    JarzynskiHadamard,
    /// `steps` applications of `R_Y(π/steps)` with `steps − 1` discarded σ_x
    /// measurements in between.
    IntermediateMeasurements { steps: u32 },
    /// SWAP between two thermal qubits.
    SwapEngine,
    /// Discarded singlet-triplet measurement on two thermal qubits.
    QmcEngine,
}

impl ExperimentKind {
    pub fn n_systems(&self) -> usize {
        match self {
            ExperimentKind::JarzynskiHadamard | ExperimentKind::IntermediateMeasurements { .. } => 1,
            ExperimentKind::SwapEngine | ExperimentKind::QmcEngine => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::JarzynskiHadamard => "jarzynski",
            ExperimentKind::IntermediateMeasurements { .. } => "intermediate",
            ExperimentKind::SwapEngine => "swap",
            ExperimentKind::QmcEngine => "qmc",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Deserialize<'de> + Default"))]
pub struct ExperimentDef<T> {
    pub kind: ExperimentKind,
    pub protocol: ProtocolKind,
    pub specs: Vec<QubitSpec<T>>,
    pub shots: u64,
    pub seed: RngSeed,
    pub noise: Option<NoiseConfig<T>>,
}

impl<T: Real> ExperimentDef<T> {
    pub fn validate(&self) -> TpmResult<()> {
        let expected = self.kind.n_systems();
        if self.specs.len() != expected {
            return Err(TpmError::SpecCount {
                kind: self.kind.name(),
                expected,
                found: self.specs.len(),
            });
        }
        if self.shots == 0 {
            return Err(TpmError::NoShots);
        }
        if let ExperimentKind::IntermediateMeasurements { steps: 0 } = self.kind {
            return Err(TpmError::NoSteps);
        }
        if let Some(noise) = &self.noise {
            noise.validate()?;
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: RngSeed) -> Self {
        Self { seed, ..self.clone() }
    }
}

/// A circuit plus the positions of the initial and final energy labels in
/// its recorded bit string, one per system qubit.
#[derive(Clone, Debug)]
pub struct ExperimentCircuit<T> {
    pub circuit: Circuit<T>,
    pub initial_slots: Vec<usize>,
    pub final_slots: Vec<usize>,
}

impl<T: Real> ExperimentCircuit<T> {
    pub fn n_systems(&self) -> usize {
        self.final_slots.len()
    }

    fn split(&self, bits: &[u8]) -> (Vec<u8>, Vec<u8>) {
        let pick = |slots: &[usize]| slots.iter().map(|&s| bits[s]).collect();
        (pick(&self.initial_slots), pick(&self.final_slots))
    }

    /// Shot-sampled joint distribution starting from `|0…0⟩`.
    pub fn sample(&self, shots: u64, seed: RngSeed) -> TpmResult<JointDistribution<T>> {
        let initial = StateVector::new(self.circuit.n_qubits())?;
        let raw = sample_counts(&self.circuit, &initial, shots, seed)?;
        let mut counts = vec![0u64; 1 << (2 * self.n_systems())];
        for (bits, c) in raw {
            let (n, m) = self.split(&bits);
            counts[JointDistribution::<T>::index(&n, &m)] += c;
        }
        Ok(JointDistribution::from_counts(self.n_systems(), counts))
    }

    /// Exact joint distribution from the density-matrix backend.
    pub fn exact(&self) -> TpmResult<JointDistribution<T>> {
        let initial = DensityMatrix::new(self.circuit.n_qubits())?;
        let raw = channel_probabilities(&self.circuit, &initial)?;
        let mut probs = vec![T::zero(); 1 << (2 * self.n_systems())];
        for (bits, p) in raw {
            let (n, m) = self.split(&bits);
            let i = JointDistribution::<T>::index(&n, &m);
            probs[i] = probs[i] + p;
        }
        Ok(JointDistribution::exact(self.n_systems(), probs))
    }
}

struct Layout {
    pairs: Vec<(QubitIndex, QubitIndex)>,
    n_qubits: usize,
}

fn layout(n_systems: usize) -> Layout {
    if n_systems == 1 {
        Layout {
            pairs: vec![(QubitIndex(0), QubitIndex(1))],
            n_qubits: 2,
        }
    } else {
        Layout {
            pairs: vec![(QubitIndex(1), QubitIndex(0)), (QubitIndex(2), QubitIndex(3))],
            n_qubits: 4,
        }
    }
}

pub fn build_experiment_circuit<T: Real>(def: &ExperimentDef<T>) -> TpmResult<ExperimentCircuit<T>> {
    def.validate()?;
    let noise = def.noise.unwrap_or_default();
    let lay = layout(def.kind.n_systems());
    let systems: Vec<QubitIndex> = lay.pairs.iter().map(|p| p.0).collect();
    let mut c = Circuit::new(lay.n_qubits)?;
    let mut recorded = 0usize;

    for (spec, &(sys, anc)) in def.specs.iter().zip(&lay.pairs) {
        c.extend(build_purification(&PurificationPair::new(sys, anc, *spec)?))?;
    }

    let mut initial_slots = Vec::new();
    if def.protocol == ProtocolKind::StandardTpm {
        for &q in &systems {
            c.push(noise.measurement(MeasurementOp::z(q)))?;
            initial_slots.push(recorded);
            recorded += 1;
        }
    }

    let mut drive: Vec<CircuitOp<T>> = Vec::new();
    match def.kind {
        ExperimentKind::JarzynskiHadamard => {
            drive.push(Gate::hadamard(systems[0]).into());
            drive.extend(noise.heating_ops(&systems));
        }
        ExperimentKind::IntermediateMeasurements { steps } => {
            let angle = T::PI() / T::lit(steps as f64);
            for k in 0..steps {
                if k > 0 {
                    drive.push(MeasurementOp::x(systems[0]).discarded().into());
                    drive.extend(noise.heating_ops(&systems));
                }
                drive.extend(noise.gate_ops(Gate::ry(angle, systems[0])));
                drive.extend(noise.heating_ops(&systems));
            }
        }
        ExperimentKind::SwapEngine => {
            drive.push(Gate::swap(systems[0], systems[1])?.into());
            drive.extend(noise.heating_ops(&systems));
        }
        ExperimentKind::QmcEngine => {
            let v = Gate::singlet_triplet_basis_change(systems[0], systems[1])?;
            drive.push(MeasurementOp::in_basis(v, systems.clone())?.discarded().into());
            drive.extend(noise.heating_ops(&systems));
        }
    }
    c.extend(drive)?;

    if def.protocol == ProtocolKind::Aatpm {
        for &(_, anc) in &lay.pairs {
            c.push(noise.measurement(MeasurementOp::z(anc)))?;
            initial_slots.push(recorded);
            recorded += 1;
        }
    }
    let mut final_slots = Vec::new();
    for &q in &systems {
        c.push(noise.measurement(MeasurementOp::z(q)))?;
        final_slots.push(recorded);
        recorded += 1;
    }

    Ok(ExperimentCircuit {
        circuit: c,
        initial_slots,
        final_slots,
    })
}

/// Shot-sampled joint distribution of initial and final labels.
pub fn run_experiment<T: Real>(def: &ExperimentDef<T>) -> TpmResult<JointDistribution<T>> {
    build_experiment_circuit(def)?.sample(def.shots, def.seed)
}

/// Exact joint distribution of initial and final labels; `shots` and
/// `seed` are ignored.
pub fn exact_distribution<T: Real>(def: &ExperimentDef<T>) -> TpmResult<JointDistribution<T>> {
    build_experiment_circuit(def)?.exact()
}

/// Joint distribution of initial labels `n` and final labels `m` of one or
/// two system qubits. Entry index packs `n` in the high bits and `m` in the
/// low bits, each with system 1 as the more significant bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution<T> {
    n_systems: usize,
    probabilities: Vec<T>,
    counts: Option<Vec<u64>>,
}

fn pack(bits: &[u8]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

impl<T: Real> JointDistribution<T> {
    fn index(initial: &[u8], fin: &[u8]) -> usize {
        (pack(initial) << fin.len()) | pack(fin)
    }

    pub fn from_counts(n_systems: usize, counts: Vec<u64>) -> Self {
        assert_eq!(counts.len(), 1 << (2 * n_systems), "one count per joint outcome");
        let total: u64 = counts.iter().sum();
        let t = T::lit(total as f64);
        let probabilities = counts
            .iter()
            .map(|&c| if total == 0 { T::zero() } else { T::lit(c as f64) / t })
            .collect();
        Self {
            n_systems,
            probabilities,
            counts: Some(counts),
        }
    }

    pub fn exact(n_systems: usize, probabilities: Vec<T>) -> Self {
        assert_eq!(probabilities.len(), 1 << (2 * n_systems), "one probability per joint outcome");
        Self {
            n_systems,
            probabilities,
            counts: None,
        }
    }

    pub fn n_systems(&self) -> usize {
        self.n_systems
    }

    pub fn shots(&self) -> Option<u64> {
        self.counts.as_ref().map(|c| c.iter().sum())
    }

    pub fn counts(&self) -> Option<&[u64]> {
        self.counts.as_deref()
    }

    /// Probability of initial labels `initial` and final labels `fin`.
    pub fn probability(&self, initial: &[u8], fin: &[u8]) -> T {
        assert!(initial.len() == self.n_systems && fin.len() == self.n_systems);
        self.probabilities[Self::index(initial, fin)]
    }

    /// Single-qubit `Q_{mn}`: final `m`, initial `n`.
    pub fn q(&self, m: u8, n: u8) -> T {
        self.probability(&[n], &[m])
    }

    /// `1/√𝒩` for sampled distributions, zero for exact ones.
    pub fn entry_error(&self) -> T {
        match self.shots() {
            Some(n) if n > 0 => T::one() / T::lit(n as f64).sqrt(),
            _ => T::zero(),
        }
    }

    /// Iterates over `(initial, final, probability)`.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<u8>, Vec<u8>, T)> + '_ {
        let k = self.n_systems;
        let unpack = move |x: usize| (0..k).rev().map(|i| ((x >> i) & 1) as u8).collect::<Vec<u8>>();
        self.probabilities
            .iter()
            .enumerate()
            .map(move |(i, &p)| (unpack(i >> k), unpack(i & ((1 << k) - 1)), p))
    }

    pub fn total(&self) -> T {
        self.probabilities.iter().copied().sum()
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.probabilities
            .iter()
            .zip(&other.probabilities)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }

    /// `(p₀, p₁)` of the initial label of system `index`.
    pub fn initial_populations(&self, index: usize) -> (T, T) {
        self.marginal(index, true)
    }

    /// `(p₀, p₁)` of the final label of system `index`.
    pub fn final_populations(&self, index: usize) -> (T, T) {
        self.marginal(index, false)
    }

    fn marginal(&self, index: usize, initial: bool) -> (T, T) {
        let mut p = (T::zero(), T::zero());
        for (n, m, prob) in self.entries() {
            let bit = if initial { n[index] } else { m[index] };
            if bit == 0 {
                p.0 = p.0 + prob;
            } else {
                p.1 = p.1 + prob;
            }
        }
        p
    }

    /// Conditional `p(m|n)` of a single-qubit distribution, as `p[n][m]`.
    /// Rows with no weight are left at zero.
    pub fn conditional(&self) -> [[T; 2]; 2] {
        let mut out = [[T::zero(); 2]; 2];
        for n in 0..2u8 {
            let row = self.q(0, n) + self.q(1, n);
            if row > T::zero() {
                for m in 0..2u8 {
                    out[n as usize][m as usize] = self.q(m, n) / row;
                }
            }
        }
        out
    }

    /// Merges two sampled histograms of the same experiment.
    pub fn merge(&self, other: &Self) -> Option<Self> {
        let (a, b) = (self.counts.as_ref()?, other.counts.as_ref()?);
        if self.n_systems != other.n_systems {
            return None;
        }
        Some(Self::from_counts(self.n_systems, a.iter().zip(b).map(|(x, y)| x + y).collect()))
    }
}

/// Energy-change statistics derived from a joint distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum EnergyChangeDistribution<T> {
    Single {
        omega: T,
        probabilities: WorkDistribution<T>,
        errors: WorkDistribution<T>,
        shots: Option<u64>,
    },
    Pair {
        omegas: [T; 2],
        probabilities: JointGrid<T>,
        errors: JointGrid<T>,
        shots: Option<u64>,
    },
}

impl<T: Real> EnergyChangeDistribution<T> {
    /// Every support point as `(ΔE per qubit, probability, error)`.
    pub fn support(&self) -> Vec<(Vec<T>, T, T)> {
        match self {
            EnergyChangeDistribution::Single {
                omega,
                probabilities: p,
                errors: e,
                ..
            } => vec![
                (vec![*omega], p.plus, e.plus),
                (vec![T::zero()], p.zero, e.zero),
                (vec![-*omega], p.minus, e.minus),
            ],
            EnergyChangeDistribution::Pair {
                omegas,
                probabilities,
                errors,
                ..
            } => {
                let mut out = Vec::with_capacity(9);
                for a in LABELS {
                    for b in LABELS {
                        out.push((
                            vec![omegas[0] * T::lit(a as f64), omegas[1] * T::lit(b as f64)],
                            probabilities.get(a, b),
                            errors.get(a, b),
                        ));
                    }
                }
                out
            }
        }
    }

    pub fn shots(&self) -> Option<u64> {
        match self {
            EnergyChangeDistribution::Single { shots, .. } | EnergyChangeDistribution::Pair { shots, .. } => *shots,
        }
    }

    pub fn total(&self) -> T {
        self.support().iter().map(|s| s.1).sum()
    }
}

/// Marginalizes the joint labels onto energy changes `ΔE = ω(n − m)`.
/// Each probability carries `k/√𝒩` error, `k` being the number of joint
/// entries summed into it.
pub fn energy_change_distribution<T: Real>(
    jd: &JointDistribution<T>,
    specs: &[QubitSpec<T>],
) -> TpmResult<EnergyChangeDistribution<T>> {
    if specs.len() != jd.n_systems() {
        return Err(TpmError::WrongArity {
            expected: specs.len(),
            found: jd.n_systems(),
        });
    }
    let unit = jd.entry_error();
    let label = |n: u8, m: u8| n as i8 - m as i8;
    match jd.n_systems() {
        1 => {
            let mut p = WorkDistribution {
                plus: T::zero(),
                minus: T::zero(),
                zero: T::zero(),
            };
            let mut k = [0u32; 3];
            for (n, m, prob) in jd.entries() {
                let a = label(n[0], m[0]);
                k[(a + 1) as usize] += 1;
                match a {
                    1 => p.plus = p.plus + prob,
                    -1 => p.minus = p.minus + prob,
                    _ => p.zero = p.zero + prob,
                }
            }
            let e = |i: usize| unit * T::lit(k[i] as f64);
            Ok(EnergyChangeDistribution::Single {
                omega: specs[0].omega(),
                probabilities: p,
                errors: WorkDistribution {
                    plus: e(2),
                    minus: e(0),
                    zero: e(1),
                },
                shots: jd.shots(),
            })
        }
        _ => {
            let mut p = JointGrid::zeros();
            let mut k = JointGrid::<T>::zeros();
            for (n, m, prob) in jd.entries() {
                let (a, b) = (label(n[0], m[0]), label(n[1], m[1]));
                p.set(a, b, p.get(a, b) + prob);
                k.set(a, b, k.get(a, b) + T::one());
            }
            let mut errors = JointGrid::zeros();
            for a in LABELS {
                for b in LABELS {
                    errors.set(a, b, k.get(a, b) * unit);
                }
            }
            Ok(EnergyChangeDistribution::Pair {
                omegas: [specs[0].omega(), specs[1].omega()],
                probabilities: p,
                errors,
                shots: jd.shots(),
            })
        }
    }
}

/// A fluctuation-relation average with its statistical error.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrEstimate<T> {
    pub value: T,
    pub std_error: T,
    pub repetitions: usize,
}

/// Mean and `√(Var/𝒩)` of `e^{−x}` over the distribution's support, where
/// `x` is the exponent evaluated per support point.
fn exp_average<T: Real>(ecd: &EnergyChangeDistribution<T>, exponent: impl Fn(&[T]) -> T) -> FrEstimate<T> {
    let support = ecd.support();
    let mut mean = T::zero();
    let mut second = T::zero();
    for (de, p, _) in &support {
        let v = (-exponent(de)).exp();
        mean = mean + *p * v;
        second = second + *p * v * v;
    }
    let std_error = match ecd.shots() {
        Some(n) if n > 0 => ((second - mean * mean).max(T::zero()) / T::lit(n as f64)).sqrt(),
        _ => T::zero(),
    };
    FrEstimate {
        value: mean,
        std_error,
        repetitions: 1,
    }
}

/// `⟨e^{−β_m ΔE}⟩` for a single-qubit distribution.
pub fn jarzynski_estimator<T: Real>(ecd: &EnergyChangeDistribution<T>, beta_m: T) -> TpmResult<FrEstimate<T>> {
    match ecd {
        EnergyChangeDistribution::Single { .. } => Ok(exp_average(ecd, |de| beta_m * de[0])),
        EnergyChangeDistribution::Pair { .. } => Err(TpmError::WrongArity { expected: 1, found: 2 }),
    }
}

/// `⟨e^{−β₁ΔE₁ − β₂ΔE₂}⟩` for a two-qubit distribution.
pub fn multivariate_fr_estimator<T: Real>(
    ecd: &EnergyChangeDistribution<T>,
    beta_m1: T,
    beta_m2: T,
) -> TpmResult<FrEstimate<T>> {
    match ecd {
        EnergyChangeDistribution::Pair { .. } => Ok(exp_average(ecd, |de| beta_m1 * de[0] + beta_m2 * de[1])),
        EnergyChangeDistribution::Single { .. } => Err(TpmError::WrongArity { expected: 2, found: 1 }),
    }
}

/// Engine mean energy changes and their errors `2ω_j/√𝒩` and
/// `2(ω₁ + ω₂)/√𝒩`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineEnergetics<T> {
    pub mean: Energetics<T>,
    pub error: Energetics<T>,
}

/// Population-difference estimators:
/// `⟨ΔE_j⟩/ω_j = [(p⁰_final − p¹_final) − (p⁰_initial − p¹_initial)]/2`,
/// `⟨W⟩ = ⟨ΔE₁⟩ + ⟨ΔE₂⟩`.
pub fn engine_energetics<T: Real>(jd: &JointDistribution<T>, specs: &[QubitSpec<T>]) -> TpmResult<EngineEnergetics<T>> {
    if jd.n_systems() != 2 || specs.len() != 2 {
        return Err(TpmError::WrongArity {
            expected: 2,
            found: jd.n_systems(),
        });
    }
    let half = T::lit(0.5);
    let de = |j: usize| {
        let (i0, i1) = jd.initial_populations(j);
        let (f0, f1) = jd.final_populations(j);
        specs[j].omega() * ((f0 - f1) - (i0 - i1)) * half
    };
    let (de1, de2) = (de(0), de(1));
    let two_over_root_n = T::lit(2.0) * jd.entry_error();
    let (w1, w2) = (specs[0].omega(), specs[1].omega());
    Ok(EngineEnergetics {
        mean: Energetics {
            delta_e1: de1,
            delta_e2: de2,
            work: de1 + de2,
        },
        error: Energetics {
            delta_e1: two_over_root_n * w1,
            delta_e2: two_over_root_n * w2,
            work: two_over_root_n * (w1 + w2),
        },
    })
}

/// Inverse temperature of system `index` read from the initial labels;
/// falls back to the nominal value when a population is zero.
pub fn measured_or_nominal_beta<T: Real>(jd: &JointDistribution<T>, specs: &[QubitSpec<T>], index: usize) -> T {
    let (p0, p1) = jd.initial_populations(index);
    let total = p0 + p1;
    match measured_beta(p0 / total, p1 / total, specs[index].omega()) {
        Ok(b) => b,
        Err(e) => {
            log::warn!("measured beta unavailable for system {index} ({e}); using nominal beta");
            specs[index].beta()
        }
    }
}

/// The appropriate fluctuation-relation estimate for `jd`, using measured
/// inverse temperatures.
pub fn fr_estimate<T: Real>(jd: &JointDistribution<T>, specs: &[QubitSpec<T>]) -> TpmResult<FrEstimate<T>> {
    let ecd = energy_change_distribution(jd, specs)?;
    match jd.n_systems() {
        1 => jarzynski_estimator(&ecd, measured_or_nominal_beta(jd, specs, 0)),
        _ => multivariate_fr_estimator(
            &ecd,
            measured_or_nominal_beta(jd, specs, 0),
            measured_or_nominal_beta(jd, specs, 1),
        ),
    }
}

/// Runs `def` `k` times with seeds `def.seed.derive(i)` and returns the mean
/// and sample standard deviation of `estimator`.
pub fn repeat_for_error<T, F>(def: &ExperimentDef<T>, k: usize, estimator: F) -> TpmResult<FrEstimate<T>>
where
    T: Real,
    F: Fn(&JointDistribution<T>) -> TpmResult<T>,
{
    if k < 2 {
        return Err(TpmError::TooFewRepetitions { min: 2, found: k });
    }
    let circuit = build_experiment_circuit(def)?;
    let mut values = Vec::with_capacity(k);
    for i in 0..k {
        let jd = circuit.sample(def.shots, def.seed.derive(i as u64))?;
        values.push(estimator(&jd)?);
    }
    let n = T::lit(k as f64);
    let mean = values.iter().copied().sum::<T>() / n;
    let var = values.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>() / (n - T::one());
    Ok(FrEstimate {
        value: mean,
        std_error: var.sqrt(),
        repetitions: k,
    })
}

/// Exact `(W, Q, weight)` samples for the Hadamard drive followed by one
/// heating step of strength `gamma`: `W = ω(n − k)` from the drive and
/// `Q = ω(k − m)` from the heating jump, `k` being the post-drive level.
pub fn hadamard_heating_samples<T: Real>(spec: &QubitSpec<T>, gamma: T) -> Vec<(T, T, T)> {
    let (p0, p1) = spec.gibbs_populations();
    let half = T::lit(0.5);
    // heating transitions h[k][m]
    let h = [[T::one(), T::zero()], [gamma, T::one() - gamma]];
    let w = spec.omega();
    let mut out = Vec::with_capacity(8);
    for (n, pn) in [(0u8, p0), (1, p1)] {
        for k in 0..2u8 {
            for m in 0..2u8 {
                let weight = pn * half * h[k as usize][m as usize];
                let work = w * T::lit(n as f64 - k as f64);
                let heat = w * T::lit(k as f64 - m as f64);
                out.push((work, heat, weight));
            }
        }
    }
    out
}
