//! Report rows and their CSV / JSON serialization.
//!
//! Every float stored in a report is rounded to 12 significant digits when
//! the row is built, so CSV (which prints 12 digits) and JSON (which prints
//! the shortest exact representation) carry identical values and a JSON
//! round trip reproduces the report exactly.

use std::io::Write;

use qthermo::oracle::ModeLabel;
use serde::{Deserialize, Serialize};

use crate::config::Format;

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub enum Cell {
    Float(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => format!("{x:.11e}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

pub trait Row {
    const HEADER: &'static [&'static str];
    fn cells(&self) -> Vec<Cell>;
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JarzynskiRow {
    pub beta_omega_nominal: f64,
    pub beta_omega_measured: f64,
    #[serde(rename = "P_plus")]
    pub p_plus: f64,
    #[serde(rename = "P_minus")]
    pub p_minus: f64,
    #[serde(rename = "P_zero")]
    pub p_zero: f64,
    #[serde(rename = "err_P")]
    pub err_p: f64,
    pub jarzynski_value: f64,
    pub jarzynski_err: f64,
    #[serde(rename = "oracle_P_plus")]
    pub oracle_p_plus: f64,
    #[serde(rename = "oracle_P_minus")]
    pub oracle_p_minus: f64,
    #[serde(rename = "oracle_P_zero")]
    pub oracle_p_zero: f64,
}

impl Row for JarzynskiRow {
    const HEADER: &'static [&'static str] = &[
        "beta_omega_nominal",
        "beta_omega_measured",
        "P_plus",
        "P_minus",
        "P_zero",
        "err_P",
        "jarzynski_value",
        "jarzynski_err",
        "oracle_P_plus",
        "oracle_P_minus",
        "oracle_P_zero",
    ];

    fn cells(&self) -> Vec<Cell> {
        [
            self.beta_omega_nominal,
            self.beta_omega_measured,
            self.p_plus,
            self.p_minus,
            self.p_zero,
            self.err_p,
            self.jarzynski_value,
            self.jarzynski_err,
            self.oracle_p_plus,
            self.oracle_p_minus,
            self.oracle_p_zero,
        ]
        .into_iter()
        .map(Cell::Float)
        .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntermediateRow {
    pub steps: u32,
    #[serde(flatten)]
    pub stats: JarzynskiRow,
}

impl Row for IntermediateRow {
    const HEADER: &'static [&'static str] = &[
        "steps",
        "beta_omega_nominal",
        "beta_omega_measured",
        "P_plus",
        "P_minus",
        "P_zero",
        "err_P",
        "jarzynski_value",
        "jarzynski_err",
        "oracle_P_plus",
        "oracle_P_minus",
        "oracle_P_zero",
    ];

    fn cells(&self) -> Vec<Cell> {
        let mut cells = vec![Cell::Int(self.steps as u64)];
        cells.extend(self.stats.cells());
        cells
    }
}

/// Joint energy-change probabilities `P_ab`; `m`, `0`, `p` stand for a
/// change of `−ω`, `0`, `+ω` of qubit 1 (first letter) and qubit 2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineRow {
    pub b1_nominal: f64,
    pub b2_nominal: f64,
    pub b1_measured: f64,
    pub b2_measured: f64,
    #[serde(rename = "P_mm")]
    pub p_mm: f64,
    #[serde(rename = "P_m0")]
    pub p_m0: f64,
    #[serde(rename = "P_mp")]
    pub p_mp: f64,
    #[serde(rename = "P_0m")]
    pub p_0m: f64,
    #[serde(rename = "P_00")]
    pub p_00: f64,
    #[serde(rename = "P_0p")]
    pub p_0p: f64,
    #[serde(rename = "P_pm")]
    pub p_pm: f64,
    #[serde(rename = "P_p0")]
    pub p_p0: f64,
    #[serde(rename = "P_pp")]
    pub p_pp: f64,
    #[serde(rename = "err_P")]
    pub err_p: f64,
    #[serde(rename = "delta_E1")]
    pub delta_e1: f64,
    #[serde(rename = "delta_E1_err")]
    pub delta_e1_err: f64,
    #[serde(rename = "delta_E2")]
    pub delta_e2: f64,
    #[serde(rename = "delta_E2_err")]
    pub delta_e2_err: f64,
    pub work: f64,
    pub work_err: f64,
    pub fr_value: f64,
    pub fr_err: f64,
    pub mode: ModeLabel,
    #[serde(rename = "oracle_P_mp")]
    pub oracle_p_mp: f64,
    #[serde(rename = "oracle_P_00")]
    pub oracle_p_00: f64,
    #[serde(rename = "oracle_P_pm")]
    pub oracle_p_pm: f64,
    #[serde(rename = "oracle_delta_E1")]
    pub oracle_delta_e1: f64,
    #[serde(rename = "oracle_delta_E2")]
    pub oracle_delta_e2: f64,
    pub oracle_work: f64,
    pub oracle_mode: ModeLabel,
    #[serde(rename = "dev_P_max")]
    pub dev_p_max: f64,
    #[serde(rename = "dev_delta_E1")]
    pub dev_delta_e1: f64,
    #[serde(rename = "dev_delta_E2")]
    pub dev_delta_e2: f64,
    pub dev_work: f64,
}

impl EngineRow {
    /// `P_ab` in `a`-major order over `{−1, 0, +1}`.
    pub fn p_grid(&self) -> [f64; 9] {
        [
            self.p_mm, self.p_m0, self.p_mp, self.p_0m, self.p_00, self.p_0p, self.p_pm, self.p_p0, self.p_pp,
        ]
    }
}

impl Row for EngineRow {
    const HEADER: &'static [&'static str] = &[
        "b1_nominal",
        "b2_nominal",
        "b1_measured",
        "b2_measured",
        "P_mm",
        "P_m0",
        "P_mp",
        "P_0m",
        "P_00",
        "P_0p",
        "P_pm",
        "P_p0",
        "P_pp",
        "err_P",
        "delta_E1",
        "delta_E1_err",
        "delta_E2",
        "delta_E2_err",
        "work",
        "work_err",
        "fr_value",
        "fr_err",
        "mode",
        "oracle_P_mp",
        "oracle_P_00",
        "oracle_P_pm",
        "oracle_delta_E1",
        "oracle_delta_E2",
        "oracle_work",
        "oracle_mode",
        "dev_P_max",
        "dev_delta_E1",
        "dev_delta_E2",
        "dev_work",
    ];

    fn cells(&self) -> Vec<Cell> {
        let f = Cell::Float;
        let mut cells = vec![f(self.b1_nominal), f(self.b2_nominal), f(self.b1_measured), f(self.b2_measured)];
        cells.extend(self.p_grid().into_iter().map(f));
        cells.extend(
            [
                self.err_p,
                self.delta_e1,
                self.delta_e1_err,
                self.delta_e2,
                self.delta_e2_err,
                self.work,
                self.work_err,
                self.fr_value,
                self.fr_err,
            ]
            .into_iter()
            .map(f),
        );
        cells.push(Cell::Text(format!("{:?}", self.mode)));
        cells.extend(
            [
                self.oracle_p_mp,
                self.oracle_p_00,
                self.oracle_p_pm,
                self.oracle_delta_e1,
                self.oracle_delta_e2,
                self.oracle_work,
            ]
            .into_iter()
            .map(f),
        );
        cells.push(Cell::Text(format!("{:?}", self.oracle_mode)));
        cells.extend(
            [self.dev_p_max, self.dev_delta_e1, self.dev_delta_e2, self.dev_work]
                .into_iter()
                .map(f),
        );
        cells
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationRow {
    pub angle: f64,
    pub ideal: f64,
    pub exact: f64,
    pub sampled: f64,
    pub std_error: f64,
}

impl Row for RotationRow {
    const HEADER: &'static [&'static str] = &["angle", "ideal", "exact", "sampled", "std_error"];

    fn cells(&self) -> Vec<Cell> {
        [self.angle, self.ideal, self.exact, self.sampled, self.std_error]
            .into_iter()
            .map(Cell::Float)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub b1: f64,
    pub b2: f64,
    pub mode: ModeLabel,
}

impl Row for PhaseRow {
    const HEADER: &'static [&'static str] = &["b1", "b2", "mode"];

    fn cells(&self) -> Vec<Cell> {
        vec![Cell::Float(self.b1), Cell::Float(self.b2), Cell::Text(format!("{:?}", self.mode))]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rows {
    Jarzynski(Vec<JarzynskiRow>),
    Intermediate(Vec<IntermediateRow>),
    Engine(Vec<EngineRow>),
    Rotation(Vec<RotationRow>),
    PhaseDiagram(Vec<PhaseRow>),
}

impl Rows {
    pub fn len(&self) -> usize {
        match self {
            Rows::Jarzynski(r) => r.len(),
            Rows::Intermediate(r) => r.len(),
            Rows::Engine(r) => r.len(),
            Rows::Rotation(r) => r.len(),
            Rows::PhaseDiagram(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub experiment: String,
    pub protocol: String,
    pub shots: u64,
    pub repetitions: usize,
    pub seed: u64,
    pub exact: bool,
    pub noiseless: bool,
    pub omega1: f64,
    pub omega2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: ReportMeta,
    pub rows: Rows,
}

fn write_csv<R: Row, W: Write>(rows: &[R], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(R::HEADER)?;
    for row in rows {
        w.write_record(row.cells().iter().map(Cell::render))?;
    }
    w.flush()
}

/// Writes the report rows as CSV (fixed header order) or the whole report
/// as JSON.
pub fn emit_report<W: Write>(report: &Report, format: Format, mut out: W) -> std::io::Result<()> {
    match format {
        Format::Csv => match &report.rows {
            Rows::Jarzynski(r) => write_csv(r, out),
            Rows::Intermediate(r) => write_csv(r, out),
            Rows::Engine(r) => write_csv(r, out),
            Rows::Rotation(r) => write_csv(r, out),
            Rows::PhaseDiagram(r) => write_csv(r, out),
        },
        Format::Json => {
            serde_json::to_writer_pretty(&mut out, report)?;
            out.write_all(b"\n")
        }
    }
}

pub fn parse_json(text: &str) -> serde_json::Result<Report> {
    serde_json::from_str(text)
}
