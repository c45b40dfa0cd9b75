//! Deviation summary of a report against its closed-form references.

use serde::Serialize;

use crate::report::{EngineRow, JarzynskiRow, Report, Rows};

/// Tolerance for exact-mode comparisons.
pub const EXACT_TOLERANCE: f64 = 1e-10;
/// Deviation threshold quoted for sampled engine distributions.
pub const ENGINE_P_THRESHOLD: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantitySummary {
    pub quantity: String,
    pub cells: usize,
    pub max_abs_deviation: f64,
    pub mean_abs_deviation: f64,
    pub exceedances: usize,
    /// Whether exceedances of this quantity fail a noiseless run.
    pub gating: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonSummary {
    pub noiseless: bool,
    pub exact: bool,
    pub quantities: Vec<QuantitySummary>,
}

impl ComparisonSummary {
    /// A noiseless run whose deviations exceed the statistical tolerance.
    pub fn failed(&self) -> bool {
        self.noiseless && self.quantities.iter().any(|q| q.gating && q.exceedances > 0)
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "{:<22} {:>6} {:>14} {:>14} {:>11}\n",
            "quantity", "cells", "max |dev|", "mean |dev|", "exceedances"
        );
        for q in &self.quantities {
            out.push_str(&format!(
                "{:<22} {:>6} {:>14.6e} {:>14.6e} {:>11}\n",
                q.quantity, q.cells, q.max_abs_deviation, q.mean_abs_deviation, q.exceedances
            ));
        }
        out
    }
}

struct Accumulator {
    name: &'static str,
    gating: bool,
    devs: Vec<f64>,
    exceed: usize,
}

impl Accumulator {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            gating: true,
            devs: Vec::new(),
            exceed: 0,
        }
    }

    fn informational(name: &'static str) -> Self {
        Self {
            gating: false,
            ..Self::new(name)
        }
    }

    fn add(&mut self, deviation: f64, tolerance: f64) {
        let d = deviation.abs();
        self.devs.push(d);
        if !(d <= tolerance) {
            self.exceed += 1;
        }
    }

    fn finish(self) -> QuantitySummary {
        let n = self.devs.len();
        QuantitySummary {
            quantity: self.name.to_string(),
            cells: n,
            max_abs_deviation: self.devs.iter().copied().fold(0.0, f64::max),
            mean_abs_deviation: if n == 0 { 0.0 } else { self.devs.iter().sum::<f64>() / n as f64 },
            exceedances: self.exceed,
            gating: self.gating,
        }
    }
}

struct Tolerances {
    exact: bool,
    statistical: f64,
}

impl Tolerances {
    fn probability(&self) -> f64 {
        if self.exact {
            EXACT_TOLERANCE
        } else {
            self.statistical
        }
    }

    fn fr(&self, err: f64) -> f64 {
        if self.exact {
            EXACT_TOLERANCE
        } else {
            self.statistical.max(5.0 * err)
        }
    }
}

fn single_rows<'a>(rows: impl Iterator<Item = &'a JarzynskiRow>, tol: &Tolerances) -> Vec<QuantitySummary> {
    let mut p = Accumulator::new("P");
    let mut fr = Accumulator::new("jarzynski");
    for r in rows {
        for (x, o) in [(r.p_plus, r.oracle_p_plus), (r.p_minus, r.oracle_p_minus), (r.p_zero, r.oracle_p_zero)] {
            p.add(x - o, tol.probability());
        }
        fr.add(r.jarzynski_value - 1.0, tol.fr(r.jarzynski_err));
    }
    vec![p.finish(), fr.finish()]
}

fn engine_rows(rows: &[EngineRow], omega1: f64, omega2: f64, tol: &Tolerances) -> Vec<QuantitySummary> {
    let mut p = Accumulator::new("P_ab");
    let mut threshold = Accumulator::informational("P_ab (0.1 threshold)");
    let mut e1 = Accumulator::new("delta_E1 / omega1");
    let mut e2 = Accumulator::new("delta_E2 / omega2");
    let mut w = Accumulator::new("work / (omega1+omega2)");
    let mut fr = Accumulator::new("multivariate FR");
    let mut mode = Accumulator::informational("mode mismatch");
    for r in rows {
        p.add(r.dev_p_max, tol.probability());
        threshold.add(r.dev_p_max, ENGINE_P_THRESHOLD);
        e1.add(r.dev_delta_e1 / omega1, tol.probability());
        e2.add(r.dev_delta_e2 / omega2, tol.probability());
        w.add(r.dev_work / (omega1 + omega2), tol.probability());
        fr.add(r.fr_value - 1.0, tol.fr(r.fr_err));
        let undecided = matches!(r.mode, qthermo::oracle::ModeLabel::Undetermined);
        mode.add(if r.mode == r.oracle_mode || undecided { 0.0 } else { 1.0 }, 0.5);
    }
    vec![
        p.finish(),
        threshold.finish(),
        e1.finish(),
        e2.finish(),
        w.finish(),
        fr.finish(),
        mode.finish(),
    ]
}

/// Per-quantity maximum and mean absolute deviation from the oracle and
/// the number of cells beyond tolerance. Sampled runs use `5/√𝒩` (in units
/// of ω for energies; the larger of that and five repetition errors for
/// fluctuation-relation values); exact runs use `1e-10`.
pub fn compare_to_oracle(report: &Report) -> ComparisonSummary {
    let m = &report.meta;
    let tol = Tolerances {
        exact: m.exact,
        statistical: 5.0 / (m.shots as f64).sqrt(),
    };
    let quantities = match &report.rows {
        Rows::Jarzynski(rows) => single_rows(rows.iter(), &tol),
        Rows::Intermediate(rows) => single_rows(rows.iter().map(|r| &r.stats), &tol),
        Rows::Engine(rows) => engine_rows(rows, m.omega1, m.omega2, &tol),
        Rows::Rotation(rows) => {
            let mut s = Accumulator::new("sigma_z");
            for r in rows {
                s.add(r.sampled - r.exact, tol.probability());
            }
            vec![s.finish()]
        }
        Rows::PhaseDiagram(_) => Vec::new(),
    };
    ComparisonSummary {
        noiseless: m.noiseless,
        exact: m.exact,
        quantities,
    }
}
