//! Parameter scans and per-trace reports built on the simulator.
//!
//! Grid cells are evaluated in parallel on the current rayon pool and always
//! returned in grid order (θ outer, φ inner).

use std::f64::consts::PI;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::{
    correlation_record, pearson, Bipartition, CorrelationRecord, DiscordSearch,
};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::model::{
    build_system_hamiltonian, gibbs_state, initial_state_from_parts, pure_state, DensityMatrix,
    QubitHamiltonian, STATE_TOL,
};
use crate::protocol::{
    parse_gate_sequence, CaseId, CompiledProtocol, ProtocolSpec, StateTrace, DEFAULT_ITERATIONS_2Q,
    DEFAULT_ITERATIONS_3Q, DEFAULT_ROOT,
};
use crate::report::{Cell, Table};
use crate::thermo::{delta_u, EnergyRecord, Regime, QUBIT_B};

pub const DEFAULT_KT: f64 = 40.0;

const LABELS: [&str; 3] = ["A", "B", "C"];

/// Inclusive, evenly spaced axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl AxisGrid {
    pub fn new(start: f64, stop: f64, count: usize) -> Self {
        AxisGrid { start, stop, count }
    }

    pub fn default_theta() -> Self {
        AxisGrid::new(0.0, PI, 101)
    }

    pub fn default_phi() -> Self {
        AxisGrid::new(0.0, 2.0 * PI, 201)
    }

    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i + 1 == self.count {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last
                }
            })
            .collect()
    }

    fn validate(&self, name: &str, lo: f64, hi: f64) -> Result<()> {
        let slack = 1e-9;
        if self.count == 0 {
            return Err(Error::Validation(format!("{name} grid is empty")));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start > self.stop {
            return Err(Error::Validation(format!(
                "{name} grid [{}, {}] is not an increasing range",
                self.start, self.stop
            )));
        }
        if self.start < lo - slack || self.stop > hi + slack {
            return Err(Error::Validation(format!(
                "{name} grid [{}, {}] leaves [{lo}, {hi}]",
                self.start, self.stop
            )));
        }
        Ok(())
    }
}

/// A single temperature or a list of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KtGrid {
    One(f64),
    Many(Vec<f64>),
}

impl KtGrid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            KtGrid::One(v) => vec![*v],
            KtGrid::Many(v) => v.clone(),
        }
    }
}

impl Default for KtGrid {
    fn default() -> Self {
        KtGrid::One(DEFAULT_KT)
    }
}

/// Preparation of qubit B across a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BPreparation {
    /// Pure state with coherence set by `(θ, φ)`.
    #[default]
    Pure,
    /// Populations of the pure state at `(θ, φ)`, coherences removed.
    Dephased,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    /// Standard output when absent.
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProtocolConfig {
    pub case: u8,
    pub qubits: usize,
    pub root: u32,
    /// Override such as `"A>B,B>A"`.
    pub gate_sequence: Option<String>,
    pub allow_custom: bool,
}

impl Default for ProtocolConfig {
    fn default() -> Self {
        ProtocolConfig {
            case: 1,
            qubits: 2,
            root: DEFAULT_ROOT,
            gate_sequence: None,
            allow_custom: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Defaults to 60 for two qubits and 150 for three.
    pub iterations: Option<usize>,
    pub kt_grid: KtGrid,
    pub qubit_b_mode: BPreparation,
    /// Single initialisation point for traces; defaults per protocol.
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    /// Compute correlation measures along traces.
    pub correlations: bool,
    /// Worker threads; all cores when absent.
    pub jobs: Option<usize>,
    pub eps1: f64,
    pub eps2: f64,
    pub protocol: ProtocolConfig,
    pub theta_grid: AxisGrid,
    pub phi_grid: AxisGrid,
    pub output: OutputConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let h = QubitHamiltonian::default();
        SweepConfig {
            iterations: None,
            kt_grid: KtGrid::default(),
            qubit_b_mode: BPreparation::Pure,
            theta: None,
            phi: None,
            correlations: false,
            jobs: None,
            eps1: h.eps1,
            eps2: h.eps2,
            protocol: ProtocolConfig::default(),
            theta_grid: AxisGrid::default_theta(),
            phi_grid: AxisGrid::default_phi(),
            output: OutputConfig::default(),
        }
    }
}

impl SweepConfig {
    pub fn for_protocol(case: u8, qubits: usize) -> Self {
        SweepConfig {
            protocol: ProtocolConfig {
                case,
                qubits,
                ..ProtocolConfig::default()
            },
            ..SweepConfig::default()
        }
    }

    pub fn case_id(&self) -> Result<CaseId> {
        CaseId::from_number(self.protocol.case).map_err(|e| Error::Validation(e.to_string()))
    }

    pub fn protocol_spec(&self) -> Result<ProtocolSpec> {
        let p = &self.protocol;
        if p.root == 0 {
            return Err(Error::Validation("root must be at least 1".into()));
        }
        let spec = ProtocolSpec::new(self.case_id()?, p.qubits, p.root)
            .map_err(|e| Error::Validation(e.to_string()))?;
        match &p.gate_sequence {
            Some(text) => {
                let pairs =
                    parse_gate_sequence(text).map_err(|e| Error::Validation(e.to_string()))?;
                spec.with_gate_sequence(&pairs, p.allow_custom)
                    .map_err(|e| Error::Validation(e.to_string()))
            }
            None => Ok(spec),
        }
    }

    pub fn iterations(&self) -> usize {
        self.iterations.unwrap_or(if self.protocol.qubits == 3 {
            DEFAULT_ITERATIONS_3Q
        } else {
            DEFAULT_ITERATIONS_2Q
        })
    }

    pub fn hamiltonian(&self) -> Result<QubitHamiltonian> {
        QubitHamiltonian::new(self.eps1, self.eps2).map_err(|e| Error::Validation(e.to_string()))
    }

    /// Initialisation point for single-trace commands.
    pub fn point(&self) -> (f64, f64) {
        let (theta, phi) = default_point(self.protocol.case, self.protocol.qubits);
        (self.theta.unwrap_or(theta), self.phi.unwrap_or(phi))
    }

    /// Copy with every defaulted value filled in.
    pub fn resolved(&self) -> SweepConfig {
        let (theta, phi) = self.point();
        SweepConfig {
            iterations: Some(self.iterations()),
            theta: Some(theta),
            phi: Some(phi),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.protocol_spec()?;
        self.hamiltonian()?;
        if self.iterations() == 0 {
            return Err(Error::Validation("iterations must be at least 1".into()));
        }
        let kts = self.kt_grid.values();
        if kts.is_empty() {
            return Err(Error::Validation("temperature grid is empty".into()));
        }
        if let Some(bad) = kts.iter().find(|k| !(k.is_finite() && **k > 0.0)) {
            return Err(Error::Validation(format!(
                "temperature must be positive, got {bad}"
            )));
        }
        self.theta_grid.validate("theta", 0.0, PI)?;
        self.phi_grid.validate("phi", 0.0, 2.0 * PI)?;
        let (theta, phi) = self.point();
        if !(0.0..=PI + 1e-9).contains(&theta) || !(0.0..=2.0 * PI + 1e-9).contains(&phi) {
            return Err(Error::Validation(format!(
                "initialisation point ({theta}, {phi}) outside [0, pi] x [0, 2pi]"
            )));
        }
        if self.jobs == Some(0) {
            return Err(Error::Validation("jobs must be at least 1".into()));
        }
        Ok(())
    }

    fn single_kt(&self) -> Result<f64> {
        match self.kt_grid.values().as_slice() {
            [kt] => Ok(*kt),
            other => Err(Error::Validation(format!(
                "expected a single temperature, got {}",
                other.len()
            ))),
        }
    }
}

/// Initialisation reported for peak work of each protocol, used for traces
/// (Case 1 with two qubits uses φ = 0.17π).
pub fn default_point(case: u8, qubits: usize) -> (f64, f64) {
    match (case, qubits) {
        (2, 2) => (0.83 * PI, 0.32 * PI),
        (1, 3) => (0.88 * PI, 0.24 * PI),
        (2, 3) => (0.79 * PI, 0.08 * PI),
        _ => (PI, 0.17 * PI),
    }
}

/// Runs `f` on a pool with `jobs` threads, or the global pool.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match jobs {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Validation(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Compiled protocol plus Hamiltonians, shared read-only by workers.
pub struct Simulator {
    compiled: CompiledProtocol,
    h_local: QubitHamiltonian,
    h_sys: ComplexMatrix,
    iterations: usize,
}

impl Simulator {
    pub fn new(cfg: &SweepConfig) -> Result<Self> {
        cfg.validate()?;
        let spec = cfg.protocol_spec()?;
        let h_local = cfg.hamiltonian()?;
        let h_sys = build_system_hamiltonian(&h_local, spec.n_qubits)?;
        Ok(Simulator {
            compiled: CompiledProtocol::new(spec)?,
            h_local,
            h_sys,
            iterations: cfg.iterations(),
        })
    }

    pub fn spec(&self) -> &ProtocolSpec {
        self.compiled.spec()
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn hamiltonian(&self) -> &QubitHamiltonian {
        &self.h_local
    }

    pub fn initial_state(
        &self,
        kt: f64,
        theta: f64,
        phi: f64,
        mode: BPreparation,
    ) -> Result<DensityMatrix> {
        let thermal = gibbs_state(&self.h_local, kt)?;
        let pure = pure_state(theta, phi)?;
        let b = match mode {
            BPreparation::Pure => pure,
            BPreparation::Dephased => pure.dephased(),
        };
        initial_state_from_parts(&thermal, &b, self.spec().n_qubits)
    }

    /// Evolves `init` and checks trace and Hermiticity after every step.
    pub fn run(&self, init: &DensityMatrix) -> Result<StateTrace> {
        let trace = self.compiled.run(init, self.iterations)?;
        for (k, rho) in trace.states.iter().enumerate() {
            let m = rho.matrix();
            let tr = m.trace();
            if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
                return Err(Error::Consistency(format!("trace {tr} at iteration {k}")));
            }
            if !m.is_hermitian(STATE_TOL) {
                return Err(Error::Consistency(format!(
                    "state lost Hermiticity at iteration {k}"
                )));
            }
        }
        Ok(trace)
    }

    pub fn energies(&self, trace: &StateTrace) -> Result<Vec<EnergyRecord>> {
        delta_u(trace, &self.h_sys, &self.h_local)
    }

    pub fn cell(&self, kt: f64, theta: f64, phi: f64, mode: BPreparation) -> Result<GridCell> {
        let init = self.initial_state(kt, theta, phi, mode)?;
        let records = self.energies(&self.run(&init)?)?;
        Ok(GridCell::from_records(theta, phi, &records))
    }

    pub fn grid(
        &self,
        kt: f64,
        thetas: &[f64],
        phis: &[f64],
        mode: BPreparation,
    ) -> Result<GridScan> {
        let points: Vec<(f64, f64)> = thetas
            .iter()
            .flat_map(|&t| phis.iter().map(move |&p| (t, p)))
            .collect();
        let cells = points
            .par_iter()
            .map(|&(t, p)| self.cell(kt, t, p, mode))
            .collect::<Result<Vec<_>>>()?;
        GridScan::new(kt, mode, cells)
    }
}

/// Peak work of one initialisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub theta: f64,
    pub phi: f64,
    pub max_work: f64,
    pub argmax_iteration: usize,
    pub regime_at_max: Regime,
}

impl GridCell {
    /// Maximum of the work over iterations `1..=M`; ties go to the earliest.
    pub fn from_records(theta: f64, phi: f64, records: &[EnergyRecord]) -> GridCell {
        let mut best: Option<&EnergyRecord> = None;
        for rec in records.iter().skip(1) {
            if best.is_none_or(|b| rec.work > b.work) {
                best = Some(rec);
            }
        }
        match best {
            Some(b) => GridCell {
                theta,
                phi,
                max_work: b.work,
                argmax_iteration: b.iteration,
                regime_at_max: b.regime,
            },
            None => GridCell {
                theta,
                phi,
                max_work: 0.0,
                argmax_iteration: 0,
                regime_at_max: Regime::Other,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridScan {
    pub kt: f64,
    pub mode: BPreparation,
    pub cells: Vec<GridCell>,
    /// First cell in grid order attaining the largest work.
    pub best: GridCell,
}

impl GridScan {
    fn new(kt: f64, mode: BPreparation, cells: Vec<GridCell>) -> Result<Self> {
        let mut best = *cells
            .first()
            .ok_or_else(|| Error::Validation("empty grid".into()))?;
        for c in &cells[1..] {
            if c.max_work > best.max_work {
                best = *c;
            }
        }
        Ok(GridScan {
            kt,
            mode,
            cells,
            best,
        })
    }

    pub fn to_table(&self) -> Table {
        let mut t = Table::new([
            "theta",
            "phi",
            "max_work",
            "argmax_iteration",
            "regime_at_max",
        ]);
        for c in &self.cells {
            t.push(vec![
                c.theta.into(),
                c.phi.into(),
                c.max_work.into(),
                c.argmax_iteration.into(),
                c.regime_at_max.as_str().into(),
            ]);
        }
        t.add_summary("kt", self.kt);
        t.add_summary("best_max_work", self.best.max_work);
        t.add_summary("best_theta", self.best.theta);
        t.add_summary("best_phi", self.best.phi);
        t.add_summary("best_iteration", self.best.argmax_iteration);
        t
    }
}

/// Full `(θ, φ)` scan at the configured (single) temperature.
pub fn grid_scan(cfg: &SweepConfig) -> Result<GridScan> {
    let sim = Simulator::new(cfg)?;
    let kt = cfg.single_kt()?;
    with_jobs(cfg.jobs, || {
        sim.grid(
            kt,
            &cfg.theta_grid.values(),
            &cfg.phi_grid.values(),
            cfg.qubit_b_mode,
        )
    })?
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TempRow {
    pub kt: f64,
    pub best: GridCell,
}

/// Peak work over the whole `(θ, φ)` grid for every temperature.
pub fn temp_scan(cfg: &SweepConfig) -> Result<Vec<TempRow>> {
    let sim = Simulator::new(cfg)?;
    let kts = cfg.kt_grid.values();
    if kts.len() < 2 {
        return Err(Error::Validation(
            "a temperature scan needs more than one temperature".into(),
        ));
    }
    let (thetas, phis) = (cfg.theta_grid.values(), cfg.phi_grid.values());
    with_jobs(cfg.jobs, || {
        kts.iter()
            .map(|&kt| {
                let scan = sim.grid(kt, &thetas, &phis, cfg.qubit_b_mode)?;
                Ok(TempRow {
                    kt,
                    best: scan.best,
                })
            })
            .collect()
    })?
}

pub fn temp_table(rows: &[TempRow]) -> Table {
    let mut t = Table::new(["kt", "max_work", "theta", "phi", "argmax_iteration"]);
    for r in rows {
        t.push(vec![
            r.kt.into(),
            r.best.max_work.into(),
            r.best.theta.into(),
            r.best.phi.into(),
            r.best.argmax_iteration.into(),
        ]);
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineReport {
    /// Scan with qubit B dephased.
    pub thermal: GridScan,
    /// Best cell of the same scan with coherence kept.
    pub pure_best: GridCell,
    /// `(pure - thermal) / thermal` in percent; absent when the thermal
    /// maximum is not positive.
    pub relative_change_percent: Option<f64>,
}

impl BaselineReport {
    pub fn to_table(&self) -> Table {
        let mut t = self.thermal.to_table();
        t.add_summary("pure_max_work", self.pure_best.max_work);
        t.add_summary(
            "relative_change_percent",
            Cell::opt(self.relative_change_percent),
        );
        t
    }
}

/// Dephased-B scan compared with the coherent scan on the same grid.
pub fn thermal_baseline_scan(cfg: &SweepConfig) -> Result<BaselineReport> {
    let sim = Simulator::new(cfg)?;
    let kt = cfg.single_kt()?;
    let (thetas, phis) = (cfg.theta_grid.values(), cfg.phi_grid.values());
    with_jobs(cfg.jobs, || {
        let thermal = sim.grid(kt, &thetas, &phis, BPreparation::Dephased)?;
        let pure = sim.grid(kt, &thetas, &phis, BPreparation::Pure)?;
        let base = thermal.best.max_work;
        let relative_change_percent =
            (base > 0.0).then(|| 100.0 * (pure.best.max_work - base) / base);
        Ok(BaselineReport {
            thermal,
            pure_best: pure.best,
            relative_change_percent,
        })
    })?
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceReport {
    pub n_qubits: usize,
    pub kt: f64,
    pub theta: f64,
    pub phi: f64,
    /// Ordered pair `(X:Y)` used for the correlation columns.
    pub bipartition: Bipartition,
    pub energies: Vec<EnergyRecord>,
    pub correlations: Option<Vec<CorrelationRecord>>,
}

impl TraceReport {
    pub fn work(&self) -> Vec<f64> {
        self.energies.iter().map(|r| r.work).collect()
    }

    pub fn du_b(&self) -> Vec<f64> {
        self.energies
            .iter()
            .map(|r| r.du_per_qubit[QUBIT_B])
            .collect()
    }

    pub fn to_table(&self) -> Table {
        let n = self.n_qubits;
        let mut cols: Vec<String> = (0..n).map(|q| format!("dU_{}", LABELS[q])).collect();
        cols.insert(0, "iteration".into());
        cols.extend(["dU_sys", "work", "regime", "eta"].map(String::from));
        if self.correlations.is_some() {
            cols.extend(["MI", "CC_xy", "CC_yx", "D_xy", "D_yx"].map(String::from));
            if n == 2 {
                cols.push("EOF".into());
            }
        }
        let mut t = Table::new(cols);
        for (k, e) in self.energies.iter().enumerate() {
            let mut row: Vec<Cell> = vec![e.iteration.into()];
            row.extend(e.du_per_qubit.iter().map(|&d| Cell::Num(d)));
            row.extend([
                e.du_sys.into(),
                e.work.into(),
                e.regime.as_str().into(),
                Cell::opt(e.efficiency),
            ]);
            if let Some(corr) = &self.correlations {
                let c = &corr[k];
                row.extend(
                    [c.mutual_info, c.cc_xy, c.cc_yx, c.discord_xy, c.discord_yx].map(Cell::Num),
                );
                if n == 2 {
                    row.push(Cell::opt(c.eof));
                }
            }
            t.push(row);
        }
        t.add_summary("bipartition_xy", self.bipartition.to_string());
        t.add_summary("kt", self.kt);
        t.add_summary("theta", self.theta);
        t.add_summary("phi", self.phi);
        t
    }
}

/// States along the trace at the configured point, each fully validated.
pub fn run_point(cfg: &SweepConfig) -> Result<StateTrace> {
    let sim = Simulator::new(cfg)?;
    let (theta, phi) = cfg.point();
    let init = sim.initial_state(cfg.single_kt()?, theta, phi, cfg.qubit_b_mode)?;
    let trace = sim.run(&init)?;
    for (k, rho) in trace.states.iter().enumerate() {
        rho.validate()
            .map_err(|e| Error::Consistency(format!("iteration {k}: {e}")))?;
    }
    Ok(trace)
}

/// Energy (and optionally correlation) record for every iteration.
pub fn trace_report(cfg: &SweepConfig) -> Result<TraceReport> {
    trace_report_with(cfg, &DiscordSearch::default())
}

pub fn trace_report_with(cfg: &SweepConfig, search: &DiscordSearch) -> Result<TraceReport> {
    let sim = Simulator::new(cfg)?;
    let trace = run_point(cfg)?;
    let energies = sim.energies(&trace)?;
    let n = sim.spec().n_qubits;
    let (bipartition, _) = Bipartition::defaults(n)?;
    let correlations = if cfg.correlations {
        let bp = &bipartition;
        let recs = with_jobs(cfg.jobs, || {
            trace
                .states
                .par_iter()
                .enumerate()
                .map(|(k, rho)| correlation_record(k, rho, bp, search))
                .collect::<Result<Vec<_>>>()
        })??;
        Some(recs)
    } else {
        None
    };
    let (theta, phi) = cfg.point();
    Ok(TraceReport {
        n_qubits: n,
        kt: cfg.single_kt()?,
        theta,
        phi,
        bipartition,
        energies,
        correlations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CycleBoundary {
    pub cycle: usize,
    /// Iteration of the root-gate run, `cycle * N`.
    pub iteration: usize,
    pub work_root: f64,
    pub work_cnot: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CnotComparison {
    pub n_root: u32,
    pub root_run: Vec<EnergyRecord>,
    /// Full-CNOT run over the same number of cycles.
    pub cnot_run: Vec<EnergyRecord>,
    pub boundaries: Vec<CycleBoundary>,
}

impl CnotComparison {
    pub fn max_boundary_diff(&self) -> f64 {
        self.boundaries
            .iter()
            .map(|b| (b.work_root - b.work_cnot).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_table(&self) -> Table {
        let n = self.n_root as usize;
        let mut t = Table::new(["iteration", "work_root", "cycle", "work_cnot", "abs_diff"]);
        for rec in &self.root_run {
            let boundary = (rec.iteration % n == 0)
                .then(|| self.cnot_run.get(rec.iteration / n))
                .flatten();
            let row = match boundary {
                Some(c) => vec![
                    rec.iteration.into(),
                    rec.work.into(),
                    (rec.iteration / n).into(),
                    c.work.into(),
                    (rec.work - c.work).abs().into(),
                ],
                None => vec![
                    rec.iteration.into(),
                    rec.work.into(),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                ],
            };
            t.push(row);
        }
        t.add_summary("n_root", self.n_root as usize);
        t.add_summary("max_boundary_diff", self.max_boundary_diff());
        t
    }
}

/// Same initialisation driven by root gates for `M` iterations and by full
/// CNOTs for `M / N` iterations.
pub fn cnot_compare(cfg: &SweepConfig) -> Result<CnotComparison> {
    let root_sim = Simulator::new(cfg)?;
    let n_root = cfg.protocol.root;
    let mut cnot_cfg = cfg.clone();
    cnot_cfg.protocol.root = 1;
    cnot_cfg.iterations = Some(cfg.iterations() / n_root as usize);
    if cnot_cfg.iterations == Some(0) {
        return Err(Error::Validation(format!(
            "{} iterations do not complete one cycle of {n_root}",
            cfg.iterations()
        )));
    }
    let cnot_sim = Simulator::new(&cnot_cfg)?;

    let (theta, phi) = cfg.point();
    let kt = cfg.single_kt()?;
    let init = root_sim.initial_state(kt, theta, phi, cfg.qubit_b_mode)?;
    let root_run = root_sim.energies(&root_sim.run(&init)?)?;
    let cnot_run = cnot_sim.energies(&cnot_sim.run(&init)?)?;
    let boundaries = cnot_run
        .iter()
        .skip(1)
        .map(|c| {
            let iteration = c.iteration * n_root as usize;
            CycleBoundary {
                cycle: c.iteration,
                iteration,
                work_root: root_run[iteration].work,
                work_cnot: c.work,
            }
        })
        .collect();
    Ok(CnotComparison {
        n_root,
        root_run,
        cnot_run,
        boundaries,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PccRow {
    pub measure: String,
    pub bipartition: String,
    pub target: String,
    /// Absent when either series is constant.
    pub pcc: Option<f64>,
    pub note: String,
}

/// Pearson coefficients of every correlation measure against work, `ΔU_B`
/// and (two qubits) entanglement of formation, over iterations `0..=M`.
pub fn pcc_report(report: &TraceReport) -> Result<Vec<PccRow>> {
    let corr = report
        .correlations
        .as_ref()
        .ok_or_else(|| Error::State("trace has no correlation data".into()))?;
    let xy = report.bipartition.to_string();
    let yx = report.bipartition.swapped().to_string();
    let series = |f: fn(&CorrelationRecord) -> f64| corr.iter().map(f).collect::<Vec<f64>>();

    let mut measures: Vec<(&str, String, Vec<f64>)> = vec![
        ("MI", xy.clone(), series(|c| c.mutual_info)),
        ("CC", xy.clone(), series(|c| c.cc_xy)),
        ("CC", yx.clone(), series(|c| c.cc_yx)),
        ("D", xy.clone(), series(|c| c.discord_xy)),
        ("D", yx.clone(), series(|c| c.discord_yx)),
    ];
    let eof: Option<Vec<f64>> = corr.iter().map(|c| c.eof).collect();
    let mut targets: Vec<(&str, Vec<f64>)> = vec![("work", report.work()), ("dU_B", report.du_b())];
    if let Some(e) = &eof {
        measures.push(("EOF", xy.clone(), e.clone()));
        targets.push(("EOF", e.clone()));
    }

    let mut rows = Vec::new();
    for (measure, bp, values) in &measures {
        for (target, t) in &targets {
            if *measure == "EOF" && *target == "EOF" {
                continue;
            }
            let (pcc, note) = match pearson(t, values) {
                Ok(r) => (Some(r), String::new()),
                Err(Error::UndefinedCorrelation(msg)) => (None, msg),
                Err(e) => return Err(e),
            };
            rows.push(PccRow {
                measure: measure.to_string(),
                bipartition: bp.clone(),
                target: target.to_string(),
                pcc,
                note,
            });
        }
    }
    Ok(rows)
}

pub fn pcc_table(rows: &[PccRow]) -> Table {
    let mut t = Table::new(["measure", "bipartition", "target", "pcc", "note"]);
    for r in rows {
        t.push(vec![
            r.measure.as_str().into(),
            r.bipartition.as_str().into(),
            r.target.as_str().into(),
            Cell::opt(r.pcc),
            r.note.as_str().into(),
        ]);
    }
    t
}

/// Looks up one coefficient of a report.
pub fn find_pcc<'a>(
    rows: &'a [PccRow],
    measure: &str,
    bipartition: &str,
    target: &str,
) -> Option<&'a PccRow> {
    rows.iter()
        .find(|r| r.measure == measure && r.bipartition == bipartition && r.target == target)
}
