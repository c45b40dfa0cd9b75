//! Grid sweeps over inverse temperatures (or angles) for every experiment.

use qthermo::noise::rotation_fidelity_curve;
use qthermo::oracle::{
    classify_mode, hadamard_work_statistics, intermediate_transitions, qmc_energetics, qmc_joint_probabilities,
    swap_energetics, swap_joint_probabilities, theoretical_phase_diagram, Energetics, Estimate, JointGrid,
    WorkDistribution, LABELS,
};
use qthermo::qsim::RngSeed;
use qthermo::thermal::QubitSpec;
use qthermo::tpm::{
    energy_change_distribution, engine_energetics, exact_distribution, fr_estimate, measured_or_nominal_beta,
    repeat_for_error, run_experiment, EnergyChangeDistribution, ExperimentDef, ExperimentKind, FrEstimate,
    JointDistribution, TpmError, TpmResult,
};
use rayon::prelude::*;
use thiserror::Error;

use crate::config::{Experiment, RunConfig};
use crate::report::{
    round12, EngineRow, IntermediateRow, JarzynskiRow, PhaseRow, Report, ReportMeta, RotationRow, Rows,
};

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),
    #[error(transparent)]
    Experiment(#[from] TpmError),
    #[error(transparent)]
    Noise(#[from] qthermo::noise::NoiseError),
    #[error(transparent)]
    Thermal(#[from] qthermo::thermal::ThermalError),
}

struct Cell {
    def: ExperimentDef<f64>,
    jd: JointDistribution<f64>,
    fr: FrEstimate<f64>,
}

/// Runs one grid cell: the sampled (or exact) distribution, and the
/// fluctuation-relation estimate whose error is the spread over `k`
/// repetitions when `k ≥ 2`.
fn run_cell(cfg: &RunConfig, kind: ExperimentKind, specs: Vec<QubitSpec<f64>>, seed: RngSeed) -> TpmResult<Cell> {
    let def = ExperimentDef {
        kind,
        protocol: cfg.protocol.into(),
        specs,
        shots: cfg.shots,
        seed,
        noise: (!cfg.noise.is_noiseless()).then_some(cfg.noise),
    };
    if cfg.exact {
        let jd = exact_distribution(&def)?;
        let fr = fr_estimate(&jd, &def.specs)?;
        return Ok(Cell { def, jd, fr });
    }
    let jd = run_experiment(&def)?;
    let mut fr = fr_estimate(&jd, &def.specs)?;
    if cfg.repetitions >= 2 {
        let spread = repeat_for_error(&def, cfg.repetitions, |jd| Ok(fr_estimate(jd, &def.specs)?.value))?;
        fr.std_error = spread.std_error;
        fr.repetitions = spread.repetitions;
    }
    Ok(Cell { def, jd, fr })
}

fn single_row(cell: &Cell, oracle: WorkDistribution<f64>) -> TpmResult<JarzynskiRow> {
    let spec = &cell.def.specs[0];
    let p = match energy_change_distribution(&cell.jd, &cell.def.specs)? {
        EnergyChangeDistribution::Single { probabilities, .. } => probabilities,
        EnergyChangeDistribution::Pair { .. } => unreachable!("single-qubit experiment"),
    };
    Ok(JarzynskiRow {
        beta_omega_nominal: round12(spec.beta_omega()),
        beta_omega_measured: round12(measured_or_nominal_beta(&cell.jd, &cell.def.specs, 0) * spec.omega()),
        p_plus: round12(p.plus),
        p_minus: round12(p.minus),
        p_zero: round12(p.zero),
        err_p: round12(cell.jd.entry_error()),
        jarzynski_value: round12(cell.fr.value),
        jarzynski_err: round12(cell.fr.std_error),
        oracle_p_plus: round12(oracle.plus),
        oracle_p_minus: round12(oracle.minus),
        oracle_p_zero: round12(oracle.zero),
    })
}

fn engine_row(cfg: &RunConfig, cell: &Cell, b1: f64, b2: f64) -> TpmResult<EngineRow> {
    let specs = &cell.def.specs;
    let grid = match energy_change_distribution(&cell.jd, specs)? {
        EnergyChangeDistribution::Pair { probabilities, .. } => probabilities,
        EnergyChangeDistribution::Single { .. } => unreachable!("engine experiment"),
    };
    let e = engine_energetics(&cell.jd, specs)?;
    let beta1 = measured_or_nominal_beta(&cell.jd, specs, 0);
    let beta2 = measured_or_nominal_beta(&cell.jd, specs, 1);
    let (oracle_grid, oracle_e): (JointGrid<f64>, Energetics<f64>) = match cfg.experiment {
        Experiment::Qmc => (qmc_joint_probabilities(b1, b2), qmc_energetics(b1, b2, cfg.omega1, cfg.omega2)),
        _ => (swap_joint_probabilities(b1, b2), swap_energetics(b1, b2, cfg.omega1, cfg.omega2)),
    };
    let mode = classify_mode(
        Estimate::new(e.mean.delta_e1, e.error.delta_e1),
        Estimate::new(e.mean.delta_e2, e.error.delta_e2),
        Estimate::new(e.mean.work, e.error.work),
        beta1,
        beta2,
    );
    let oracle_mode = classify_mode(
        Estimate::exact(oracle_e.delta_e1),
        Estimate::exact(oracle_e.delta_e2),
        Estimate::exact(oracle_e.work),
        specs[0].beta(),
        specs[1].beta(),
    );
    let mut p = [0.0; 9];
    for (i, a) in LABELS.iter().enumerate() {
        for (j, b) in LABELS.iter().enumerate() {
            p[3 * i + j] = round12(grid.get(*a, *b));
        }
    }
    let r = round12;
    Ok(EngineRow {
        b1_nominal: r(b1),
        b2_nominal: r(b2),
        b1_measured: r(beta1 * cfg.omega1),
        b2_measured: r(beta2 * cfg.omega2),
        p_mm: p[0],
        p_m0: p[1],
        p_mp: p[2],
        p_0m: p[3],
        p_00: p[4],
        p_0p: p[5],
        p_pm: p[6],
        p_p0: p[7],
        p_pp: p[8],
        err_p: r(cell.jd.entry_error()),
        delta_e1: r(e.mean.delta_e1),
        delta_e1_err: r(e.error.delta_e1),
        delta_e2: r(e.mean.delta_e2),
        delta_e2_err: r(e.error.delta_e2),
        work: r(e.mean.work),
        work_err: r(e.error.work),
        fr_value: r(cell.fr.value),
        fr_err: r(cell.fr.std_error),
        mode,
        oracle_p_mp: r(oracle_grid.get(-1, 1)),
        oracle_p_00: r(oracle_grid.get(0, 0)),
        oracle_p_pm: r(oracle_grid.get(1, -1)),
        oracle_delta_e1: r(oracle_e.delta_e1),
        oracle_delta_e2: r(oracle_e.delta_e2),
        oracle_work: r(oracle_e.work),
        oracle_mode,
        dev_p_max: r(grid.max_abs_diff(&oracle_grid)),
        dev_delta_e1: r((e.mean.delta_e1 - oracle_e.delta_e1).abs()),
        dev_delta_e2: r((e.mean.delta_e2 - oracle_e.delta_e2).abs()),
        dev_work: r((e.mean.work - oracle_e.work).abs()),
    })
}

fn meta(cfg: &RunConfig) -> ReportMeta {
    ReportMeta {
        experiment: serde_plain_name(&cfg.experiment),
        protocol: serde_plain_name(&cfg.protocol),
        shots: cfg.shots,
        repetitions: cfg.repetitions,
        seed: cfg.seed,
        exact: cfg.exact,
        noiseless: cfg.is_noiseless(),
        omega1: cfg.omega1,
        omega2: cfg.omega2,
    }
}

fn serde_plain_name<S: serde::Serialize>(value: &S) -> String {
    match serde_json::to_value(value) {
        Ok(serde_json::Value::String(s)) => s,
        _ => String::new(),
    }
}

/// Runs every grid cell of `cfg`. Cell `i` (in grid order) uses the child
/// seed `RngSeed(cfg.seed).derive(i)`; cells run in parallel and are
/// collected in grid order, so the output does not depend on scheduling.
pub fn run_sweep(cfg: &RunConfig) -> Result<Report, SweepError> {
    cfg.validate()?;
    let root = RngSeed(cfg.seed);
    let axis = cfg.grid().values();
    let rows = match cfg.experiment {
        Experiment::Jarzynski => {
            let rows = axis
                .par_iter()
                .enumerate()
                .map(|(i, &bw)| {
                    let spec = QubitSpec::from_beta_omega(bw, cfg.omega1)?;
                    let cell = run_cell(cfg, ExperimentKind::JarzynskiHadamard, vec![spec], root.derive(i as u64))?;
                    single_row(&cell, hadamard_work_statistics(bw))
                })
                .collect::<TpmResult<Vec<_>>>()?;
            Rows::Jarzynski(rows)
        }
        Experiment::Intermediate => {
            let cells: Vec<(u32, f64)> = cfg
                .steps
                .iter()
                .flat_map(|&n| axis.iter().map(move |&bw| (n, bw)))
                .collect();
            let rows = cells
                .par_iter()
                .enumerate()
                .map(|(i, &(steps, bw))| {
                    let spec = QubitSpec::from_beta_omega(bw, cfg.omega1)?;
                    let kind = ExperimentKind::IntermediateMeasurements { steps };
                    let cell = run_cell(cfg, kind, vec![spec], root.derive(i as u64))?;
                    let oracle = WorkDistribution::from_transitions(bw, &intermediate_transitions(steps));
                    Ok(IntermediateRow {
                        steps,
                        stats: single_row(&cell, oracle)?,
                    })
                })
                .collect::<TpmResult<Vec<_>>>()?;
            Rows::Intermediate(rows)
        }
        Experiment::Swap | Experiment::Qmc => {
            let kind = if cfg.experiment == Experiment::Swap {
                ExperimentKind::SwapEngine
            } else {
                ExperimentKind::QmcEngine
            };
            let cells: Vec<(f64, f64)> = axis
                .iter()
                .flat_map(|&b1| axis.iter().map(move |&b2| (b1, b2)))
                .collect();
            let rows = cells
                .par_iter()
                .enumerate()
                .map(|(i, &(b1, b2))| {
                    let specs = vec![
                        QubitSpec::from_beta_omega(b1, cfg.omega1)?,
                        QubitSpec::from_beta_omega(b2, cfg.omega2)?,
                    ];
                    let cell = run_cell(cfg, kind, specs, root.derive(i as u64))?;
                    engine_row(cfg, &cell, b1, b2)
                })
                .collect::<TpmResult<Vec<_>>>()?;
            Rows::Engine(rows)
        }
        Experiment::Rotation => {
            let points = rotation_fidelity_curve(&axis, &cfg.noise, cfg.shots, root)?;
            Rows::Rotation(
                points
                    .into_iter()
                    .map(|p| {
                        let (sampled, std_error) = if cfg.exact { (p.exact, 0.0) } else { (p.sampled, p.std_error) };
                        RotationRow {
                            angle: round12(p.angle),
                            ideal: round12(p.ideal),
                            exact: round12(p.exact),
                            sampled: round12(sampled),
                            std_error: round12(std_error),
                        }
                    })
                    .collect(),
            )
        }
        Experiment::PhaseDiagram => {
            let labels = theoretical_phase_diagram(cfg.omega1, cfg.omega2, &axis, &axis);
            let mut rows = Vec::with_capacity(axis.len() * axis.len());
            for (i, &b1) in axis.iter().enumerate() {
                for (j, &b2) in axis.iter().enumerate() {
                    rows.push(PhaseRow {
                        b1: round12(b1),
                        b2: round12(b2),
                        mode: labels[i][j],
                    });
                }
            }
            Rows::PhaseDiagram(rows)
        }
    };
    Ok(Report { meta: meta(cfg), rows })
}
