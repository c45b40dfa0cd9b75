use approx::assert_abs_diff_eq;
use qthermo::noise::{NoiseConfig, RotationError};
use qthermo::oracle::{
    hadamard_work_statistics, intermediate_transitions, qmc_energetics, qmc_joint_probabilities, swap_energetics,
    swap_joint_probabilities, JointGrid, WorkDistribution,
};
use qthermo::qsim::RngSeed;
use qthermo::thermal::QubitSpec;
use qthermo::tpm::{
    energy_change_distribution, engine_energetics, exact_distribution, fr_estimate, jarzynski_estimator,
    multivariate_fr_estimator, repeat_for_error, run_experiment, EnergyChangeDistribution, ExperimentDef,
    ExperimentKind, JointDistribution, ProtocolKind,
};

const GRID: [f64; 9] = [-2.5, -1.8, -1.1, -0.4, 0.0, 0.3, 1.0, 1.7, 2.5];
const ENGINE_GRID: [(f64, f64); 9] = [
    (0.1, 0.1),
    (0.1, 1.3),
    (0.1, 2.5),
    (1.3, 0.1),
    (1.3, 1.3),
    (1.3, 2.5),
    (2.5, 0.1),
    (2.5, 1.3),
    (0.5, 2.0),
];

fn spec(bw: f64, omega: f64) -> QubitSpec<f64> {
    QubitSpec::from_beta_omega(bw, omega).unwrap()
}

fn def(kind: ExperimentKind, protocol: ProtocolKind, specs: Vec<QubitSpec<f64>>) -> ExperimentDef<f64> {
    ExperimentDef {
        kind,
        protocol,
        specs,
        shots: 8192,
        seed: RngSeed(2024),
        noise: None,
    }
}

fn single(ecd: &EnergyChangeDistribution<f64>) -> WorkDistribution<f64> {
    match ecd {
        EnergyChangeDistribution::Single { probabilities, .. } => *probabilities,
        _ => panic!("expected single-qubit distribution"),
    }
}

fn pair(ecd: &EnergyChangeDistribution<f64>) -> JointGrid<f64> {
    match ecd {
        EnergyChangeDistribution::Pair { probabilities, .. } => *probabilities,
        _ => panic!("expected two-qubit distribution"),
    }
}

fn all_defs(protocol: ProtocolKind) -> Vec<ExperimentDef<f64>> {
    let mut out = Vec::new();
    for bw in GRID {
        out.push(def(ExperimentKind::JarzynskiHadamard, protocol, vec![spec(bw, 1.0)]));
        out.push(def(ExperimentKind::IntermediateMeasurements { steps: 5 }, protocol, vec![spec(bw, 1.0)]));
    }
    for (b1, b2) in ENGINE_GRID {
        out.push(def(ExperimentKind::SwapEngine, protocol, vec![spec(b1, 5.25), spec(b2, 5.17)]));
        out.push(def(ExperimentKind::QmcEngine, protocol, vec![spec(b1, 5.25), spec(b2, 5.17)]));
    }
    out
}

#[test]
fn aatpm_equals_standard_tpm() {
    for (a, s) in all_defs(ProtocolKind::Aatpm).iter().zip(all_defs(ProtocolKind::StandardTpm)) {
        let ja = exact_distribution(a).unwrap();
        let js = exact_distribution(&s).unwrap();
        assert!(ja.max_abs_diff(&js) < 1e-10, "{:?}", a.kind);
    }
}

#[test]
fn exact_fluctuation_relations_hold() {
    for d in all_defs(ProtocolKind::Aatpm) {
        let jd = exact_distribution(&d).unwrap();
        assert_abs_diff_eq!(jd.total(), 1.0, epsilon = 1e-10);
        let fr = fr_estimate(&jd, &d.specs).unwrap();
        assert_abs_diff_eq!(fr.value, 1.0, epsilon = 1e-10);
        assert_eq!(fr.std_error, 0.0);
    }
    for steps in [1, 2, 3, 5, 10, 25, 50] {
        for bw in [-2.0, 0.5, 2.5] {
            let d = def(ExperimentKind::IntermediateMeasurements { steps }, ProtocolKind::Aatpm, vec![spec(bw, 1.0)]);
            let fr = fr_estimate(&exact_distribution(&d).unwrap(), &d.specs).unwrap();
            assert_abs_diff_eq!(fr.value, 1.0, epsilon = 1e-10);
        }
    }
}

#[test]
fn hadamard_oracle_matches_backend() {
    for bw in GRID {
        let d = def(ExperimentKind::JarzynskiHadamard, ProtocolKind::Aatpm, vec![spec(bw, 1.0)]);
        let jd = exact_distribution(&d).unwrap();
        let got = single(&energy_change_distribution(&jd, &d.specs).unwrap());
        let want = hadamard_work_statistics(bw);
        assert_abs_diff_eq!(got.plus, want.plus, epsilon = 1e-10);
        assert_abs_diff_eq!(got.minus, want.minus, epsilon = 1e-10);
        assert_abs_diff_eq!(got.zero, want.zero, epsilon = 1e-10);
        let est = jarzynski_estimator(&energy_change_distribution(&jd, &d.specs).unwrap(), bw).unwrap();
        assert_abs_diff_eq!(est.value, 1.0, epsilon = 1e-12);
    }
}

#[test]
fn intermediate_oracle_matches_backend() {
    for steps in [1, 2, 3, 4, 5, 10, 25] {
        for bw in [-1.0, 0.0, 1.0] {
            let d = def(ExperimentKind::IntermediateMeasurements { steps }, ProtocolKind::Aatpm, vec![spec(bw, 1.0)]);
            let cond = exact_distribution(&d).unwrap().conditional();
            let want = intermediate_transitions::<f64>(steps);
            for n in 0..2 {
                for m in 0..2 {
                    assert_abs_diff_eq!(cond[n][m], want[n][m], epsilon = 1e-10);
                }
            }
        }
    }
}

#[test]
fn zeno_randomization() {
    let d = def(ExperimentKind::IntermediateMeasurements { steps: 200 }, ProtocolKind::Aatpm, vec![spec(1.0, 1.0)]);
    let cond = exact_distribution(&d).unwrap().conditional();
    for row in cond {
        for p in row {
            assert!((p - 0.5).abs() < 0.01, "{p}");
        }
    }
}

#[test]
fn engine_oracles_match_backend() {
    let (w1, w2) = (5.25, 5.17);
    for (b1, b2) in ENGINE_GRID {
        let specs = vec![spec(b1, w1), spec(b2, w2)];
        for (kind, grid, energetics) in [
            (ExperimentKind::SwapEngine, swap_joint_probabilities(b1, b2), swap_energetics(b1, b2, w1, w2)),
            (ExperimentKind::QmcEngine, qmc_joint_probabilities(b1, b2), qmc_energetics(b1, b2, w1, w2)),
        ] {
            let d = def(kind, ProtocolKind::Aatpm, specs.clone());
            let jd = exact_distribution(&d).unwrap();
            let ecd = energy_change_distribution(&jd, &specs).unwrap();
            assert!(pair(&ecd).max_abs_diff(&grid) < 1e-10, "{kind:?} at ({b1}, {b2})");
            let fr = multivariate_fr_estimator(&ecd, b1 / w1, b2 / w2).unwrap();
            assert_abs_diff_eq!(fr.value, 1.0, epsilon = 1e-10);
            let e = engine_energetics(&jd, &specs).unwrap().mean;
            assert_abs_diff_eq!(e.delta_e1, energetics.delta_e1, epsilon = 1e-10);
            assert_abs_diff_eq!(e.delta_e2, energetics.delta_e2, epsilon = 1e-10);
            assert_abs_diff_eq!(e.work, energetics.work, epsilon = 1e-10);
        }
    }
}

#[test]
fn qmc_channel_at_reference_point() {
    let specs = vec![spec(1.0, 1.0), spec(0.5, 1.0)];
    let jd = exact_distribution(&def(ExperimentKind::QmcEngine, ProtocolKind::Aatpm, specs.clone())).unwrap();
    let e = engine_energetics(&jd, &specs).unwrap().mean;
    let want = qmc_energetics(1.0, 0.5, 1.0, 1.0);
    assert_abs_diff_eq!(e.delta_e1, want.delta_e1, epsilon = 1e-12);
    assert_abs_diff_eq!(e.delta_e2, want.delta_e2, epsilon = 1e-12);
    let ecd = energy_change_distribution(&jd, &specs).unwrap();
    assert_abs_diff_eq!(multivariate_fr_estimator(&ecd, 1.0, 0.5).unwrap().value, 1.0, epsilon = 1e-12);
}

#[test]
fn swap_selection_rule_holds_in_samples() {
    let specs = vec![spec(0.7, 5.25), spec(1.9, 5.17)];
    for protocol in [ProtocolKind::Aatpm, ProtocolKind::StandardTpm] {
        let jd = run_experiment(&def(ExperimentKind::SwapEngine, protocol, specs.clone())).unwrap();
        for (n, m, p) in jd.entries() {
            if m[0] != n[1] || m[1] != n[0] {
                assert_eq!(p, 0.0);
            }
        }
        let g = pair(&energy_change_distribution(&jd, &specs).unwrap());
        for (a, b) in [(1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, -1)] {
            assert_eq!(g.get(a, b), 0.0);
        }
    }
}

#[test]
fn swap_distribution_at_equal_temperatures() {
    let specs = vec![spec(1.0, 1.0), spec(1.0, 1.0)];
    let jd = exact_distribution(&def(ExperimentKind::SwapEngine, ProtocolKind::Aatpm, specs.clone())).unwrap();
    let g = pair(&energy_change_distribution(&jd, &specs).unwrap());
    let want = 1.0 / (4.0 * 0.5f64.cosh().powi(2));
    assert_abs_diff_eq!(g.get(1, -1), want, epsilon = 1e-12);
    assert_abs_diff_eq!(g.get(-1, 1), want, epsilon = 1e-12);
    assert_abs_diff_eq!(want, 0.1966, epsilon = 1e-4);
}

#[test]
fn sampled_hadamard_at_infinite_temperature() {
    let d = def(ExperimentKind::JarzynskiHadamard, ProtocolKind::Aatpm, vec![spec(0.0, 1.0)]);
    let jd = run_experiment(&d).unwrap();
    assert_eq!(jd.shots(), Some(8192));
    let tol = 4.0 / 8192f64.sqrt();
    for (_, _, p) in jd.entries() {
        assert!((p - 0.25).abs() < tol);
    }
}

#[test]
fn sampled_distributions_converge_to_exact() {
    for d in all_defs(ProtocolKind::Aatpm).into_iter().step_by(3) {
        let exact = exact_distribution(&d).unwrap();
        let sampled = run_experiment(&d).unwrap();
        assert!(sampled.max_abs_diff(&exact) < 5.0 / (d.shots as f64).sqrt(), "{:?}", d.kind);
        let ecd = energy_change_distribution(&sampled, &d.specs).unwrap();
        assert!((ecd.total() - 1.0).abs() < 3.0 / (d.shots as f64).sqrt());
    }
}

#[test]
fn sampled_engine_energetics_within_error_bars() {
    let specs = vec![spec(0.5, 1.0), spec(2.0, 1.0)];
    let d = def(ExperimentKind::SwapEngine, ProtocolKind::Aatpm, specs.clone());
    let e = engine_energetics(&run_experiment(&d).unwrap(), &specs).unwrap();
    let want = swap_energetics(0.5, 2.0, 1.0, 1.0);
    assert!((e.mean.delta_e1 - want.delta_e1).abs() < 3.0 * e.error.delta_e1);
    assert!((e.mean.delta_e2 - want.delta_e2).abs() < 3.0 * e.error.delta_e2);
    assert!((e.mean.work - want.work).abs() < 3.0 * e.error.work);
    assert_abs_diff_eq!(want.delta_e1, -0.258337746776, epsilon = 1e-11);

    let specs = vec![spec(1.2, 1.0), spec(1.2, 1.0)];
    let d = def(ExperimentKind::QmcEngine, ProtocolKind::StandardTpm, specs.clone());
    let e = engine_energetics(&run_experiment(&d).unwrap(), &specs).unwrap();
    assert!(e.mean.delta_e1.abs() < 3.0 * e.error.delta_e1);
    assert!(e.mean.delta_e2.abs() < 3.0 * e.error.delta_e2);
    assert!(e.mean.work.abs() < 3.0 * e.error.work);
}

fn jarzynski_value(d: &ExperimentDef<f64>) -> impl Fn(&JointDistribution<f64>) -> qthermo::tpm::TpmResult<f64> + '_ {
    move |jd| Ok(fr_estimate(jd, &d.specs)?.value)
}

#[test]
fn repetition_errors() {
    let d0 = def(ExperimentKind::JarzynskiHadamard, ProtocolKind::Aatpm, vec![spec(0.0, 1.0)]);
    let e0 = repeat_for_error(&d0, 50, jarzynski_value(&d0)).unwrap();
    assert_eq!(e0.repetitions, 50);
    assert!(e0.std_error < 0.02, "{}", e0.std_error);
    assert!((e0.value - 1.0).abs() < 3.0 * e0.std_error);

    let d2 = def(ExperimentKind::JarzynskiHadamard, ProtocolKind::Aatpm, vec![spec(2.0, 1.0)]);
    let e2 = repeat_for_error(&d2, 50, jarzynski_value(&d2)).unwrap();
    assert!(e2.std_error > e0.std_error);

    // A deterministic estimator has no spread.
    let e = repeat_for_error(&d0, 5, |jd| Ok(jd.total())).unwrap();
    assert_abs_diff_eq!(e.std_error, 0.0, epsilon = 1e-15);
    assert!(repeat_for_error(&d0, 1, |_| Ok(1.0)).is_err());
}

#[test]
fn runs_are_deterministic() {
    let d = def(ExperimentKind::QmcEngine, ProtocolKind::Aatpm, vec![spec(0.3, 5.25), spec(2.2, 5.17)]);
    assert_eq!(run_experiment(&d).unwrap(), run_experiment(&d).unwrap());
    let other = run_experiment(&d.with_seed(RngSeed(7))).unwrap();
    assert_ne!(run_experiment(&d).unwrap(), other);
}

#[test]
fn zero_noise_config_changes_nothing() {
    for d in all_defs(ProtocolKind::Aatpm).into_iter().step_by(5) {
        let mut noisy = d.clone();
        noisy.noise = Some(NoiseConfig::default());
        assert_eq!(run_experiment(&d).unwrap(), run_experiment(&noisy).unwrap());
    }
}

#[test]
fn heating_breaks_jarzynski_by_the_expected_amount() {
    let gamma = 0.05;
    for bw in [0.5, 1.0, 2.0] {
        let mut d = def(ExperimentKind::JarzynskiHadamard, ProtocolKind::Aatpm, vec![spec(bw, 1.0)]);
        d.noise = Some(NoiseConfig {
            heating: gamma,
            ..Default::default()
        });
        let fr = fr_estimate(&exact_distribution(&d).unwrap(), &d.specs).unwrap();
        assert_abs_diff_eq!(fr.value, 1.0 - gamma * (bw / 2.0).tanh(), epsilon = 1e-12);
    }
}

#[test]
fn rotation_noise_enters_the_intermediate_drive() {
    let mut d = def(ExperimentKind::IntermediateMeasurements { steps: 1 }, ProtocolKind::Aatpm, vec![spec(1.0, 1.0)]);
    d.noise = Some(NoiseConfig {
        rotation: RotationError { bias: 0.1, jitter: 0.0 },
        ..Default::default()
    });
    let cond = exact_distribution(&d).unwrap().conditional();
    let expected_stay = (std::f64::consts::PI * 1.1 / 2.0).cos().powi(2);
    assert_abs_diff_eq!(cond[0][0], expected_stay, epsilon = 1e-12);
}

#[test]
fn readout_errors_mix_labels() {
    let mut d = def(ExperimentKind::JarzynskiHadamard, ProtocolKind::Aatpm, vec![spec(60.0, 1.0)]);
    d.noise = Some(NoiseConfig {
        readout_flip: 0.1,
        ..Default::default()
    });
    let jd = exact_distribution(&d).unwrap();
    // Ancilla reads 1 with probability 0.9 at zero temperature.
    let (p0, p1) = jd.initial_populations(0);
    assert_abs_diff_eq!(p0, 0.1, epsilon = 1e-12);
    assert_abs_diff_eq!(p1, 0.9, epsilon = 1e-12);
}

#[test]
fn single_precision_pipeline() {
    let d = ExperimentDef::<f32> {
        kind: ExperimentKind::SwapEngine,
        protocol: ProtocolKind::Aatpm,
        specs: vec![
            QubitSpec::from_beta_omega(0.5, 1.0).unwrap(),
            QubitSpec::from_beta_omega(2.0, 1.0).unwrap(),
        ],
        shots: 4096,
        seed: RngSeed(1),
        noise: None,
    };
    let jd = exact_distribution(&d).unwrap();
    let fr = fr_estimate(&jd, &d.specs).unwrap();
    assert!((fr.value - 1.0).abs() < 1e-5);
    let sampled = run_experiment(&d).unwrap();
    assert!(sampled.max_abs_diff(&jd) < 5.0 / 64.0);
}
