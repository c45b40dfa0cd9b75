use std::collections::BTreeMap;

use approx::assert_abs_diff_eq;
use num_complex::Complex;
use proptest::prelude::*;
use qthermo::qsim::{
    channel_probabilities, run_shot, sample_counts, Circuit, CircuitOp, DensityMatrix, Gate, MeasurementOp,
    QubitIndex, RngSeed, SimError, StateVector,
};
use qthermo::thermal::{build_purification, PurificationPair, QubitSpec};
use rand::SeedableRng;

const Q0: QubitIndex = QubitIndex(0);
const Q1: QubitIndex = QubitIndex(1);

fn amp_close(psi: &StateVector<f64>, expected: &[(f64, f64)]) {
    for (i, &(re, im)) in expected.iter().enumerate() {
        let a = psi.amplitude(i);
        assert_abs_diff_eq!(a.re, re, epsilon = 1e-12);
        assert_abs_diff_eq!(a.im, im, epsilon = 1e-12);
    }
}

#[test]
fn gate_examples() {
    let mut psi = StateVector::<f64>::new(1).unwrap();
    psi.apply_gate(&Gate::x(Q0)).unwrap();
    amp_close(&psi, &[(0.0, 0.0), (1.0, 0.0)]);

    let mut psi = StateVector::<f64>::new(1).unwrap();
    psi.apply_gate(&Gate::hadamard(Q0)).unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    amp_close(&psi, &[(r, 0.0), (r, 0.0)]);

    // |01⟩ with qubit 0 = 1 is index 1; after SWAP qubit 1 = 1 is index 2.
    let mut psi = StateVector::<f64>::basis(2, 1).unwrap();
    psi.apply_gate(&Gate::swap(Q0, Q1).unwrap()).unwrap();
    amp_close(&psi, &[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0), (0.0, 0.0)]);
}

#[test]
fn gate_errors() {
    let mut psi = StateVector::<f64>::new(1).unwrap();
    assert!(matches!(
        psi.apply_gate(&Gate::x(Q1)),
        Err(SimError::QubitOutOfRange { .. })
    ));
    let bad = qthermo::qsim::CMatrix::<f64>::from_real(&[&[1.0, 1.0], &[0.0, 1.0]]);
    assert!(matches!(Gate::new(bad, vec![Q0]), Err(SimError::NonUnitary { .. })));
    let wrong_dim = qthermo::qsim::CMatrix::<f64>::identity(4);
    assert!(Gate::new(wrong_dim, vec![Q0]).is_err());
}

#[test]
fn measure_z_on_eigenstate() {
    let mut rng = RngSeed(1).shot_rng(0);
    let mut psi = StateVector::<f64>::basis(1, 1).unwrap();
    for _ in 0..20 {
        assert_eq!(psi.measure_z(Q0, &mut rng).unwrap(), 1);
    }
    amp_close(&psi, &[(0.0, 0.0), (1.0, 0.0)]);
}

fn frequency_of_zero(prep: &[CircuitOp<f64>], target: QubitIndex, n_qubits: usize, shots: u64) -> f64 {
    let mut c = Circuit::new(n_qubits).unwrap();
    c.extend(prep.iter().cloned()).unwrap();
    c.push(MeasurementOp::z(target)).unwrap();
    let counts = sample_counts(&c, &StateVector::new(n_qubits).unwrap(), shots, RngSeed(42)).unwrap();
    counts.get(&vec![0]).copied().unwrap_or(0) as f64 / shots as f64
}

#[test]
fn measure_z_frequencies() {
    let n = 20_000u64;
    let tol = 3.0 / (n as f64).sqrt();
    let f = frequency_of_zero(&[Gate::hadamard(Q0).into()], Q0, 1, n);
    assert!((f - 0.5).abs() < tol, "{f}");

    let pair = PurificationPair::new(Q0, Q1, QubitSpec::from_beta_omega(0.0, 1.0).unwrap()).unwrap();
    let f = frequency_of_zero(&build_purification(&pair), Q0, 2, n);
    assert!((f - 0.5).abs() < tol, "{f}");
}

#[test]
fn sigma_x_measurement() {
    let mut rng = RngSeed(3).shot_rng(0);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for _ in 0..20 {
        let mut plus = StateVector::<f64>::new(1).unwrap();
        plus.apply_gate(&Gate::hadamard(Q0)).unwrap();
        assert_eq!(plus.measure(&MeasurementOp::x(Q0), &mut rng).unwrap(), vec![0]);
        amp_close(&plus, &[(r, 0.0), (r, 0.0)]);
    }

    let shots = 20_000;
    let mut zeros = 0;
    for s in 0..shots {
        let mut rng = RngSeed(4).shot_rng(s);
        let mut psi = StateVector::<f64>::new(1).unwrap();
        let bit = psi.measure(&MeasurementOp::x(Q0), &mut rng).unwrap()[0];
        let sign = if bit == 0 { 1.0 } else { -1.0 };
        amp_close(&psi, &[(r, 0.0), (sign * r, 0.0)]);
        zeros += (bit == 0) as u64;
    }
    assert!((zeros as f64 / shots as f64 - 0.5).abs() < 3.0 / (shots as f64).sqrt());
}

#[test]
fn singlet_triplet_measurement_on_01() {
    let v = Gate::singlet_triplet_basis_change(Q0, Q1).unwrap();
    let m = MeasurementOp::in_basis(v, vec![Q0, Q1]).unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let shots = 20_000;
    let mut sym = 0;
    for s in 0..shots {
        let mut rng = RngSeed(9).shot_rng(s);
        let mut psi = StateVector::<f64>::basis(2, 1).unwrap();
        psi.measure(&m, &mut rng).unwrap();
        let (a1, a2) = (psi.amplitude(1), psi.amplitude(2));
        assert_abs_diff_eq!(psi.amplitude(0).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(psi.amplitude(3).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a1.norm(), r, epsilon = 1e-12);
        assert_abs_diff_eq!(a2.norm(), r, epsilon = 1e-12);
        let relative = a2 / a1;
        if (relative - Complex::new(1.0, 0.0)).norm() < 1e-12 {
            sym += 1;
        } else {
            assert_abs_diff_eq!((relative + Complex::new(1.0, 0.0)).norm(), 0.0, epsilon = 1e-12);
        }
    }
    assert!((sym as f64 / shots as f64 - 0.5).abs() < 3.0 / (shots as f64).sqrt());
}

#[test]
fn empty_circuit_gives_empty_record() {
    let c = Circuit::<f64>::new(3).unwrap();
    let mut rng = RngSeed(0).shot_rng(0);
    assert!(run_shot(&c, &StateVector::new(3).unwrap(), &mut rng).unwrap().is_empty());
}

fn thermal_tpm_circuit(beta_omega: f64, drive: Option<Gate<f64>>) -> Circuit<f64> {
    let pair = PurificationPair::new(Q0, Q1, QubitSpec::from_beta_omega(beta_omega, 1.0).unwrap()).unwrap();
    let mut c = Circuit::new(2).unwrap();
    c.extend(build_purification(&pair)).unwrap();
    if let Some(g) = drive {
        c.push(g).unwrap();
    }
    c.push(MeasurementOp::z(Q1)).unwrap();
    c.push(MeasurementOp::z(Q0)).unwrap();
    c
}

fn frequencies(counts: &BTreeMap<Vec<u8>, u64>, shots: u64) -> BTreeMap<Vec<u8>, f64> {
    counts.iter().map(|(k, &v)| (k.clone(), v as f64 / shots as f64)).collect()
}

#[test]
fn identity_drive_at_infinite_temperature() {
    let c = thermal_tpm_circuit(0.0, None);
    let shots = 40_000;
    let freq = frequencies(&sample_counts(&c, &StateVector::new(2).unwrap(), shots, RngSeed(8)).unwrap(), shots);
    let tol = 4.0 / (shots as f64).sqrt();
    // Without a drive the ancilla and system agree.
    assert!((freq[&vec![0, 0]] - 0.5).abs() < tol);
    assert!((freq[&vec![1, 1]] - 0.5).abs() < tol);
    assert!(!freq.contains_key(&vec![0, 1]) && !freq.contains_key(&vec![1, 0]));

    // A Hadamard drive spreads each initial level evenly: all four records at 1/4.
    let c = thermal_tpm_circuit(0.0, Some(Gate::hadamard(Q0)));
    let freq = frequencies(&sample_counts(&c, &StateVector::new(2).unwrap(), shots, RngSeed(8)).unwrap(), shots);
    for v in freq.values() {
        assert!((v - 0.25).abs() < tol);
    }
}

#[test]
fn hadamard_drive_matches_oracle_table() {
    let bw = 1.0;
    let c = thermal_tpm_circuit(bw, Some(Gate::hadamard(Q0)));
    let exact = channel_probabilities(&c, &DensityMatrix::new(2).unwrap()).unwrap();
    let (p0, p1) = qthermo::thermal::gibbs_populations(bw);
    for (n, pn) in [(0u8, p0), (1, p1)] {
        for m in 0..2u8 {
            assert_abs_diff_eq!(exact[&vec![n, m]], pn / 2.0, epsilon = 1e-12);
        }
    }
    let shots = 20_000;
    let freq = frequencies(&sample_counts(&c, &StateVector::new(2).unwrap(), shots, RngSeed(21)).unwrap(), shots);
    for (k, p) in &exact {
        assert!((freq[k] - p).abs() < 4.0 / (shots as f64).sqrt());
    }
}

#[test]
fn channel_probability_examples() {
    let mut c = Circuit::<f64>::new(1).unwrap();
    c.push(MeasurementOp::z(Q0)).unwrap();
    let p = channel_probabilities(&c, &DensityMatrix::new(1).unwrap()).unwrap();
    assert_eq!(p.len(), 1);
    assert_abs_diff_eq!(p[&vec![0]], 1.0, epsilon = 1e-15);

    // N = 1 and N = 2 drive chains started from |0⟩.
    for steps in [1u32, 2] {
        let angle = std::f64::consts::PI / steps as f64;
        let mut c = Circuit::<f64>::new(1).unwrap();
        for k in 0..steps {
            if k > 0 {
                c.push(MeasurementOp::x(Q0).discarded()).unwrap();
            }
            c.push(Gate::ry(angle, Q0)).unwrap();
        }
        c.push(MeasurementOp::z(Q0)).unwrap();
        let p = channel_probabilities(&c, &DensityMatrix::new(1).unwrap()).unwrap();
        assert_abs_diff_eq!(p.get(&vec![0]).copied().unwrap_or(0.0), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p[&vec![1]], 1.0, epsilon = 1e-12);
    }
}

#[test]
fn channel_probabilities_rejects_large_registers() {
    assert!(matches!(Circuit::<f64>::new(9), Err(SimError::TooManyQubits(9))));
    assert!(matches!(DensityMatrix::<f64>::new(9), Err(SimError::TooManyQubits(9))));
}

#[test]
fn builtin_gates_are_unitary() {
    let gates = vec![
        Gate::<f64>::x(Q0),
        Gate::y(Q0),
        Gate::z(Q0),
        Gate::hadamard(Q0),
        Gate::ry(0.37, Q0),
        Gate::rx(-2.1, Q0),
        Gate::cnot(Q0, Q1).unwrap(),
        Gate::swap(Q0, Q1).unwrap(),
        Gate::controlled_rotation(qthermo::qsim::Axis::Y, 1.3, Q1, Q0).unwrap(),
        Gate::singlet_triplet_basis_change(Q0, Q1).unwrap(),
    ];
    for g in gates {
        assert!(g.matrix().unitarity_deviation() < 1e-12, "{:?}", g.kind());
    }
}

#[test]
fn norm_drift_over_a_thousand_ops() {
    use rand::Rng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
    let mut psi = StateVector::<f64>::new(4).unwrap();
    for _ in 0..1000 {
        let a = QubitIndex(rng.gen_range(0..4));
        let b = QubitIndex((a.0 + rng.gen_range(1..4)) % 4);
        let g = match rng.gen_range(0..5) {
            0 => Gate::hadamard(a),
            1 => Gate::ry(rng.gen_range(-3.0..3.0), a),
            2 => Gate::rx(rng.gen_range(-3.0..3.0), a),
            3 => Gate::cnot(a, b).unwrap(),
            _ => Gate::singlet_triplet_basis_change(a, b).unwrap(),
        };
        psi.apply_gate(&g).unwrap();
    }
    assert!((psi.norm_sqr() - 1.0).abs() < 1e-9);
}

#[test]
fn purification_projector_identity() {
    for bw in [-1.5, 0.0, 0.8, 2.5] {
        let pair = PurificationPair::new(Q0, Q1, QubitSpec::from_beta_omega(bw, 1.0).unwrap()).unwrap();
        let mut psi = StateVector::<f64>::new(2).unwrap();
        for op in build_purification(&pair) {
            if let CircuitOp::Gate(g) = op {
                psi.apply_gate(&g).unwrap();
            }
        }
        // Ancilla projector |n⟩⟨n| leaves only |n⟩_s|n⟩_a.
        let rho = DensityMatrix::from_pure(&psi);
        for n in 0..2usize {
            let projected = rho.project_z(&[Q1], n);
            let kept = if n == 0 { 0 } else { 3 };
            for i in 0..4 {
                for j in 0..4 {
                    if i != kept || j != kept {
                        assert!(projected.matrix().get(i, j).norm() < 1e-12);
                    }
                }
            }
        }
    }
}

#[test]
fn repeated_measurement_is_idempotent() {
    let v = Gate::singlet_triplet_basis_change(Q0, Q1).unwrap();
    let measurements = [
        MeasurementOp::z(Q0),
        MeasurementOp::x(Q1),
        MeasurementOp::in_basis(v, vec![Q0, Q1]).unwrap(),
    ];
    for (i, m) in measurements.iter().enumerate() {
        for shot in 0..200 {
            let mut rng = RngSeed(i as u64).shot_rng(shot);
            let mut psi = StateVector::<f64>::new(2).unwrap();
            psi.apply_gate(&Gate::ry(1.1, Q0)).unwrap();
            psi.apply_gate(&Gate::rx(0.4, Q1)).unwrap();
            psi.apply_gate(&Gate::cnot(Q0, Q1).unwrap()).unwrap();
            let first = psi.measure(m, &mut rng).unwrap();
            let second = psi.measure(m, &mut rng).unwrap();
            assert_eq!(first, second);
        }
    }
}

#[test]
fn identical_seeds_give_identical_records() {
    let c = thermal_tpm_circuit(0.7, Some(Gate::hadamard(Q0)));
    let init = StateVector::new(2).unwrap();
    for shot in 0..100 {
        let a = run_shot(&c, &init, &mut RngSeed(5).shot_rng(shot)).unwrap();
        let b = run_shot(&c, &init, &mut RngSeed(5).shot_rng(shot)).unwrap();
        assert_eq!(a, b);
    }
    assert_eq!(
        sample_counts(&c, &init, 1000, RngSeed(5)).unwrap(),
        sample_counts(&c, &init, 1000, RngSeed(5)).unwrap()
    );
}

fn random_circuit(n_qubits: usize, choices: &[(u8, usize, usize, f64)]) -> Circuit<f64> {
    let mut c = Circuit::new(n_qubits).unwrap();
    for &(kind, a, b, angle) in choices {
        let qa = QubitIndex(a % n_qubits);
        let qb = QubitIndex((a + 1 + b % (n_qubits - 1)) % n_qubits);
        let op: CircuitOp<f64> = match kind % 6 {
            0 => Gate::ry(angle, qa).into(),
            1 => Gate::rx(angle, qa).into(),
            2 => Gate::cnot(qa, qb).unwrap().into(),
            3 => MeasurementOp::z(qa).discarded().into(),
            4 => MeasurementOp::x(qa).discarded().into(),
            _ => MeasurementOp::z(qa).into(),
        };
        c.push(op).unwrap();
    }
    for q in 0..n_qubits {
        c.push(MeasurementOp::z(QubitIndex(q))).unwrap();
    }
    c
}

fn psd_min_eigenvalue(rho: &DensityMatrix<f64>) -> f64 {
    let d = rho.dim();
    let m = nalgebra::DMatrix::from_fn(d, d, |i, j| rho.matrix().get(i, j));
    m.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn backends_agree(
        n_qubits in 2usize..=4,
        choices in prop::collection::vec((0u8..6, 0usize..4, 0usize..4, -3.0f64..3.0), 1..8),
        seed in any::<u64>(),
    ) {
        let c = random_circuit(n_qubits, &choices);
        let exact = channel_probabilities(&c, &DensityMatrix::new(n_qubits).unwrap()).unwrap();
        let total: f64 = exact.values().sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        let shots = 100_000u64;
        let counts = sample_counts(&c, &StateVector::new(n_qubits).unwrap(), shots, RngSeed(seed)).unwrap();
        let tol = 5.0 / (shots as f64).sqrt();
        for (bits, p) in &exact {
            let f = counts.get(bits).copied().unwrap_or(0) as f64 / shots as f64;
            prop_assert!((f - p).abs() < tol, "{:?}: {} vs {}", bits, f, p);
        }
        for bits in counts.keys() {
            prop_assert!(exact.contains_key(bits));
        }
    }

    #[test]
    fn density_matrix_stays_physical(
        choices in prop::collection::vec((0u8..5, 0usize..3, 0usize..3, -3.0f64..3.0), 1..20),
    ) {
        let mut rho = DensityMatrix::<f64>::new(3).unwrap();
        for &(kind, a, b, angle) in &choices {
            let qa = QubitIndex(a % 3);
            let qb = QubitIndex((a + 1 + b % 2) % 3);
            match kind {
                0 => rho.apply_gate(&Gate::ry(angle, qa)).unwrap(),
                1 => rho.apply_gate(&Gate::rx(angle, qa)).unwrap(),
                2 => rho.apply_gate(&Gate::cnot(qa, qb).unwrap()).unwrap(),
                3 => rho.dephase_z(&[qa]),
                _ => rho.apply_channel(&qthermo::noise::heating_channel(0.3, qa).unwrap()).unwrap(),
            }
        }
        prop_assert!((rho.trace() - 1.0).abs() < 1e-10);
        prop_assert!(rho.hermiticity_deviation() < 1e-10);
        prop_assert!(psd_min_eigenvalue(&rho) >= -1e-8);
    }
}
