//! Reproducible experiment runs behind the `qmpgrover` binary.
//!
//! Every command takes an [`ExperimentConfig`], writes its files into
//! `config.out` (each one atomically, via a temp file and rename) and
//! returns a structured outcome. Output depends only on the config.

mod config;
mod svg;

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

pub use config::{DepthSource, ExperimentConfig, Overrides, SuccessSource};
pub use svg::sweep_svg;

use crate::analytics::{self, AnalyticsError, SweepRow};
use crate::bits::format_bits;
use crate::ir::{build_grover_circuit, compose_qmp, IrError, QmpPlan, SearchProblem, Window};
use crate::layout::{self, load_builtin_map, CouplingMap, LayoutError, Placement};
use crate::sim::counts::Cdf;
use crate::sim::{
    marginalize_counts, measure_distribution, noisy_shots, run_noisy, sample, trajectory_rng, Counts,
    Distribution, NoiseSpec, SimError,
};

/// Probabilities at or below this are left out of distribution CSVs.
const CSV_FLOOR: f64 = 1e-15;
/// Widest composed QMP register whose joint distribution is written out.
const JOINT_CSV_MAX_WIDTH: usize = 20;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid `{field}`: {message}")]
    Validation { field: String, message: String },
    #[error("{}: {message}", path.display())]
    Config { path: PathBuf, message: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("capacity exceeded: {required} qubits required, {available} available")]
    Capacity { required: usize, available: usize },
    #[error("layout infeasible: {0}")]
    Infeasible(LayoutError),
    #[error(transparent)]
    Ir(IrError),
    #[error(transparent)]
    Sim(SimError),
    #[error(transparent)]
    Analytics(#[from] AnalyticsError),
    #[error(transparent)]
    Layout(LayoutError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl ExperimentError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation { .. } | Self::Config { .. } => 2,
            Self::Capacity { .. } => 3,
            Self::Infeasible(_) => 4,
            _ => 1,
        }
    }
}

impl From<IrError> for ExperimentError {
    fn from(e: IrError) -> Self {
        match e {
            IrError::Capacity { required, available } => Self::Capacity { required, available },
            e => Self::Ir(e),
        }
    }
}

impl From<SimError> for ExperimentError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Capacity { required, available } | SimError::Ir(IrError::Capacity { required, available }) => {
                Self::Capacity { required, available }
            }
            e => Self::Sim(e),
        }
    }
}

impl From<LayoutError> for ExperimentError {
    fn from(e: LayoutError) -> Self {
        match e {
            e @ LayoutError::Infeasible { .. } => Self::Infeasible(e),
            e => Self::Layout(e),
        }
    }
}

type Result<T> = std::result::Result<T, ExperimentError>;

/// Output directory writer; every file lands complete or not at all.
struct OutDir {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl OutDir {
    fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn write_with(&mut self, name: &str, fill: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
        let path = self.dir.join(name);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| io_err(&path, e))?;
        {
            let mut w = std::io::BufWriter::new(tmp.as_file_mut());
            fill(&mut w).and_then(|_| w.flush()).map_err(|e| io_err(&path, e))?;
        }
        tmp.persist(&path).map_err(|e| io_err(&path, e.error))?;
        self.written.push(path);
        Ok(())
    }

    fn write(&mut self, name: &str, text: &str) -> Result<()> {
        self.write_with(name, |w| w.write_all(text.as_bytes()))
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, &text)
    }

    fn write_distribution(&mut self, name: &str, dist: &Distribution) -> Result<()> {
        self.write_with(name, |w| dist.write_csv(w, CSV_FLOOR))
    }

    fn write_counts(&mut self, name: &str, counts: &Counts) -> Result<()> {
        let mut text = counts.to_json()?;
        text.push('\n');
        self.write(name, &text)
    }
}

fn io_err(path: &Path, source: std::io::Error) -> ExperimentError {
    ExperimentError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn invalid(field: &str, message: impl Into<String>) -> ExperimentError {
    ExperimentError::Validation {
        field: field.to_string(),
        message: message.into(),
    }
}

fn noise_for(config: &ExperimentConfig, stream: u64) -> Option<NoiseSpec> {
    config.noise.filter(|n| !n.is_noiseless()).map(|n| NoiseSpec {
        seed: block_seed(config.seed, stream),
        ..n
    })
}

/// Independent seed for block `i`; block 0 keeps the master seed.
fn block_seed(seed: u64, i: u64) -> u64 {
    seed ^ i.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockSummary {
    pub guess: String,
    /// Window outcomes that solve the problem in this block, MSB-left.
    pub solutions: Vec<String>,
    pub exact_success: f64,
    pub theory_success: f64,
    pub sampled_success: f64,
    pub shots: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateSummary {
    pub mode: &'static str,
    pub n: usize,
    pub b: Option<usize>,
    pub j: usize,
    pub targets: Vec<String>,
    pub shots: u64,
    pub seed: u64,
    pub noise: Option<NoiseSpec>,
    pub width: usize,
    /// Whole-register success; for QMP runs see `blocks`.
    pub exact_success: Option<f64>,
    pub theory_success: Option<f64>,
    pub sampled_success: Option<f64>,
    pub blocks: Vec<BlockSummary>,
}

#[derive(Debug)]
pub struct SimulateOutcome {
    pub summary: SimulateSummary,
    /// Full-register counts.
    pub counts: Counts,
    /// Per-block marginal counts over each block's measure window.
    pub block_counts: Vec<Counts>,
    pub files: Vec<PathBuf>,
}

/// Builds and runs the configured circuit.
///
/// Without `b` this is a plain Grover run. With `b` every guess block runs
/// as its own partial search; shot `s` of the full register concatenates
/// shot `s` of each block, which is exact because blocks share no qubits.
pub fn cmd_simulate(config: &ExperimentConfig) -> Result<SimulateOutcome> {
    let problem = config.problem()?;
    let b = config.guess_bits(problem.n())?;
    config.check_shots()?;
    config.check_noise()?;
    let mut out = OutDir::create(&config.out)?;
    let targets: Vec<String> = problem.targets().iter().map(|&t| format_bits(t, problem.n())).collect();
    let outcome = match b {
        None => simulate_grover(config, &problem, targets, &mut out)?,
        Some(b) => simulate_qmp(config, &problem, b, targets, &mut out)?,
    };
    out.write_json("summary.json", &outcome.summary)?;
    Ok(SimulateOutcome {
        files: out.written,
        ..outcome
    })
}

fn simulate_grover(
    config: &ExperimentConfig,
    problem: &SearchProblem,
    targets: Vec<String>,
    out: &mut OutDir,
) -> Result<SimulateOutcome> {
    let n = problem.n();
    let circuit = build_grover_circuit(problem, config.j)?;
    let dist = measure_distribution(&circuit)?;
    let counts = match noise_for(config, 0) {
        Some(noise) => run_noisy(&circuit, &noise, config.shots)?,
        None => sample(&dist, config.shots, config.seed)?,
    };
    out.write("circuit.json", &(circuit.to_json()? + "\n"))?;
    out.write_distribution("distribution.csv", &dist)?;
    out.write_counts("counts.json", &counts)?;
    let summary = SimulateSummary {
        mode: "gsa",
        n,
        b: None,
        j: config.j,
        targets,
        shots: config.shots,
        seed: config.seed,
        noise: config.noise,
        width: n,
        exact_success: Some(dist.mass(problem.targets())),
        theory_success: Some(analytics::p_gsa(1 << n, problem.target_count() as u64, config.j as u64)?),
        sampled_success: Some(counts.frequency(problem.targets())),
        blocks: Vec::new(),
    };
    Ok(SimulateOutcome {
        summary,
        counts,
        block_counts: Vec::new(),
        files: Vec::new(),
    })
}

fn simulate_qmp(
    config: &ExperimentConfig,
    problem: &SearchProblem,
    b: usize,
    targets: Vec<String>,
    out: &mut OutDir,
) -> Result<SimulateOutcome> {
    let n = problem.n();
    let plan = QmpPlan::new(n, b, config.j)?;
    let width = plan.width();
    if width > 64 {
        return Err(ExperimentError::Capacity {
            required: width,
            available: 64,
        });
    }
    if width <= JOINT_CSV_MAX_WIDTH {
        let (circuit, _) = compose_qmp(problem, b, config.j)?;
        out.write("circuit.json", &(circuit.to_json()? + "\n"))?;
        out.write_distribution("distribution.csv", &measure_distribution(&circuit)?)?;
    }

    let mut shots = vec![0u64; config.shots as usize];
    let mut windows = Vec::with_capacity(plan.block_count());
    for (i, block) in plan.blocks().iter().enumerate() {
        let circuit = plan.block_circuit(problem, i)?;
        let name = format!("block_{}", block.guess);
        if width > JOINT_CSV_MAX_WIDTH {
            out.write(&format!("{name}_circuit.json"), &(circuit.to_json()? + "\n"))?;
        }
        let window_dist = measure_distribution(&circuit)?;
        out.write_distribution(&format!("{name}_distribution.csv"), &window_dist)?;
        windows.push(window_dist);

        let whole = circuit.with_window(Window::full(n))?;
        let outcomes = match noise_for(config, i as u64) {
            Some(noise) => noisy_shots(&whole, &noise, config.shots)?,
            None => {
                let cdf = Cdf::new(&measure_distribution(&whole)?);
                let mut rng = trajectory_rng(config.seed, i as u64);
                (0..config.shots).map(|_| cdf.draw(&mut rng)).collect()
            }
        };
        for (acc, o) in shots.iter_mut().zip(outcomes) {
            *acc |= o << block.offset;
        }
    }
    let mut map = std::collections::BTreeMap::new();
    for s in shots {
        *map.entry(s).or_insert(0u64) += 1;
    }
    let counts = Counts::from_map(width, map)?;
    out.write_counts("counts.json", &counts)?;

    let mut blocks = Vec::with_capacity(plan.block_count());
    let mut block_counts = Vec::with_capacity(plan.block_count());
    for (i, block) in plan.blocks().iter().enumerate() {
        let window = plan.window(i);
        let marginal = marginalize_counts(&counts, width, window.least, window.length)?;
        out.write_counts(&format!("block_{}_counts.json", block.guess), &marginal)?;
        let solutions = problem.block_outcomes(b, block.guess.value());
        let theory = if solutions.is_empty() {
            0.0
        } else {
            analytics::p_qmp(1 << n, 1 << b, solutions.len() as u64, config.j as u64)?
        };
        blocks.push(BlockSummary {
            guess: block.guess.to_string(),
            solutions: solutions.iter().map(|&s| format_bits(s, plan.m())).collect(),
            exact_success: windows[i].mass(&solutions),
            theory_success: theory,
            sampled_success: marginal.frequency(&solutions),
            shots: marginal.shots(),
        });
        block_counts.push(marginal);
    }
    let summary = SimulateSummary {
        mode: "qmp",
        n,
        b: Some(b),
        j: config.j,
        targets,
        shots: config.shots,
        seed: config.seed,
        noise: config.noise,
        width,
        exact_success: None,
        theory_success: None,
        sampled_success: None,
        blocks,
    };
    Ok(SimulateOutcome {
        summary,
        counts,
        block_counts,
        files: Vec::new(),
    })
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub files: Vec<PathBuf>,
}

/// Closed-form success curves for every configured `b` and `j <= j_max`.
pub fn cmd_sweep(config: &ExperimentConfig) -> Result<SweepOutcome> {
    let n = config.width()?;
    if n >= 64 {
        return Err(invalid("n", format!("{n} qubits is too many for a sweep")));
    }
    let b_values = config.sweep_b_values();
    if let Some(&b) = b_values.iter().find(|&&b| b == 0 || b as usize >= n) {
        return Err(invalid("b_values", format!("need 1 <= b < n = {n}, got {b}")));
    }
    let rows = analytics::sweep_curves(1 << n, &b_values, config.j_max)?;
    let mut out = OutDir::create(&config.out)?;
    out.write_with("sweep.csv", |w| analytics::write_sweep_csv(&rows, w))?;
    if config.svg {
        out.write("sweep.svg", &sweep_svg(&rows))?;
    }
    Ok(SweepOutcome {
        rows,
        files: out.written,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LayoutFailure {
    pub block: usize,
    pub placed: Vec<Vec<usize>>,
    pub message: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LayoutSummary {
    pub map: String,
    pub qubit_count: usize,
    pub blocks: usize,
    /// Qubits per block: search qubits plus ancillas.
    pub k: usize,
    pub buffer: usize,
    pub feasible: bool,
    pub placement: Option<Placement>,
    pub failure: Option<LayoutFailure>,
    /// Qubits assigned to blocks.
    pub nq: Option<usize>,
    /// Logical depth of one block circuit.
    pub depth: Option<usize>,
}

#[derive(Debug)]
pub struct LayoutOutcome {
    pub summary: LayoutSummary,
    pub files: Vec<PathBuf>,
}

fn load_map(config: &ExperimentConfig) -> Result<CouplingMap> {
    if let Some(path) = &config.map_file {
        let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        return CouplingMap::from_json(&text).map_err(|e| ExperimentError::Config {
            path: path.clone(),
            message: e.to_string(),
        });
    }
    let name = config
        .map
        .as_deref()
        .ok_or_else(|| invalid("map", "a coupling map name or map_file is required"))?;
    load_builtin_map(name).map_err(|e| invalid("map", e.to_string()))
}

/// Places one block per guess on the configured device. Writes
/// `layout.json` either way; infeasibility is returned as an error after
/// the report is on disk.
pub fn cmd_layout(config: &ExperimentConfig) -> Result<LayoutOutcome> {
    let map = load_map(config)?;
    let n = config.width()?;
    let b = config.guess_bits(n)?;
    let blocks = b.map_or(1, |b| 1usize << b);
    let k = n + config.ancillas;
    let depth = match (b, config.targets.is_empty()) {
        (_, true) => None,
        (None, false) => Some(layout::logical_depth(&build_grover_circuit(&config.problem()?, config.j)?)),
        (Some(b), false) => {
            let plan = QmpPlan::new(n, b, config.j)?;
            Some(layout::logical_depth(&plan.block_circuit(&config.problem()?, 0)?))
        }
    };
    let mut out = OutDir::create(&config.out)?;
    let mut summary = LayoutSummary {
        map: map.name().to_string(),
        qubit_count: map.qubit_count(),
        blocks,
        k,
        buffer: config.buffer,
        feasible: false,
        placement: None,
        failure: None,
        nq: None,
        depth,
    };
    match layout::place_blocks(&map, blocks, k, config.buffer) {
        Ok(placement) => {
            placement.verify(&map, config.buffer)?;
            summary.feasible = true;
            summary.nq = Some(placement.assigned_qubits());
            out.write("placement.json", &(placement.to_json()? + "\n"))?;
            summary.placement = Some(placement);
            out.write_json("layout.json", &summary)?;
            Ok(LayoutOutcome {
                summary,
                files: out.written,
            })
        }
        Err(e) => {
            if let LayoutError::Infeasible { block, placed, .. } = &e {
                summary.failure = Some(LayoutFailure {
                    block: *block,
                    placed: placed.clone(),
                    message: e.to_string(),
                });
            }
            out.write_json("layout.json", &summary)?;
            Err(e.into())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportMode {
    Gsa,
    NoQmp,
    Qmp,
}

impl ReportMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Gsa => "gsa",
            Self::NoQmp => "no-qmp",
            Self::Qmp => "qmp",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub variant: String,
    pub mode: ReportMode,
    pub nq: u64,
    pub depth: Option<u64>,
    pub success: Option<f64>,
    pub qcv: Option<u64>,
    pub eqcv: Option<f64>,
    pub trf: u64,
}

#[derive(Debug)]
pub struct ReportOutcome {
    pub rows: Vec<ReportRow>,
    pub files: Vec<PathBuf>,
}

/// Circuit family behind one report row.
struct Variant {
    name: String,
    mode: ReportMode,
    /// Guess bits; 0 for canonical search.
    b: usize,
    j: usize,
}

fn variants(n: usize) -> Vec<Variant> {
    let v = |name: String, mode, b, j| Variant { name, mode, b, j };
    vec![
        v(format!("D{n}M{n}"), ReportMode::Gsa, 0, 1),
        v(format!("D{n}D{n}M{n}"), ReportMode::Gsa, 0, 2),
        v(format!("G2D{0}M{0}", n - 2), ReportMode::NoQmp, 2, 1),
        v(format!("G2D{0}M{0}", n - 2), ReportMode::Qmp, 2, 1),
        v(format!("G3D{0}M{0}", n - 3), ReportMode::NoQmp, 3, 1),
        v(format!("G3D{0}M{0}", n - 3), ReportMode::Qmp, 3, 1),
    ]
}

/// Hardware figures quoted for the five-qubit, single-target study:
/// `(variant, mode) -> (depth, success)`.
///
/// The canonical-search depth is not printed; 155 is the smallest value
/// consistent with "longest depth" next to the 154 of a QMP layout.
fn quoted_profile(variant: &str, mode: ReportMode) -> (Option<u64>, Option<f64>) {
    match (variant, mode) {
        ("D5M5", ReportMode::Gsa) => (Some(155), Some(0.023)),
        ("D5D5M5", ReportMode::Gsa) => (None, Some(0.031)),
        ("G2D3M3", ReportMode::Qmp) => (Some(86), Some(0.201)),
        ("G3D2M2", ReportMode::Qmp) => (Some(50), Some(0.701)),
        _ => (None, None),
    }
}

fn theory_success(n: usize, v: &Variant) -> Result<f64> {
    let n_items = 1u64 << n;
    let j = v.j as u64;
    Ok(match v.mode {
        ReportMode::Gsa => analytics::p_gsa(n_items, 1, j)?,
        ReportMode::NoQmp => analytics::p_partial(n_items, v.b as u32, 1, j)?,
        ReportMode::Qmp => analytics::p_qmp(n_items, 1 << v.b, 1, j)?,
    })
}

fn simulated_success(problem: &SearchProblem, v: &Variant) -> Result<f64> {
    let target = problem.targets()[0];
    if v.mode == ReportMode::Gsa {
        return Ok(measure_distribution(&build_grover_circuit(problem, v.j)?)?.probability(target));
    }
    let plan = QmpPlan::new(problem.n(), v.b, v.j)?;
    let block = plan.block_of(target);
    let hit = measure_distribution(&plan.block_circuit(problem, block)?)?.mass(&problem.block_outcomes(v.b, block as u64));
    Ok(match v.mode {
        ReportMode::NoQmp => hit / plan.block_count() as f64,
        _ => hit,
    })
}

fn logical_depth_of(problem: &SearchProblem, v: &Variant) -> Result<u64> {
    let circuit = if v.mode == ReportMode::Gsa {
        build_grover_circuit(problem, v.j)?
    } else {
        QmpPlan::new(problem.n(), v.b, v.j)?.block_circuit(problem, 0)?
    };
    Ok(layout::logical_depth(&circuit) as u64)
}

/// Resource and success table for the canonical, single-guess and
/// multi-programmed variants of a single-target problem.
pub fn cmd_report(config: &ExperimentConfig) -> Result<ReportOutcome> {
    let problem = config.problem()?;
    let n = problem.n();
    if problem.target_count() != 1 {
        return Err(invalid("targets", "the report compares single-target variants"));
    }
    if n < 4 {
        return Err(invalid("n", format!("variants need n >= 4, got {n}")));
    }
    let quoted_scale = n == 5;
    if !quoted_scale && (config.success == SuccessSource::Quoted || config.depth == DepthSource::Quoted) {
        return Err(invalid("success", "quoted hardware values exist only for n = 5"));
    }
    let mut rows = Vec::new();
    for v in variants(n) {
        let circuits = if v.mode == ReportMode::Qmp { 1u64 << v.b } else { 1 };
        let nq = (n + config.ancillas) as u64 * circuits;
        let (quoted_depth, quoted_success) = quoted_profile(&v.name, v.mode);
        let success = match config.success {
            SuccessSource::Theory => Some(theory_success(n, &v)?),
            SuccessSource::Simulated => Some(simulated_success(&problem, &v)?),
            SuccessSource::Quoted => quoted_success,
        };
        let depth = match config.depth {
            DepthSource::Logical => Some(logical_depth_of(&problem, &v)?),
            DepthSource::Quoted => quoted_depth,
        };
        let trf = circuits;
        let (qcv, eqcv) = match (depth, success) {
            (Some(d), Some(s)) => match analytics::metrics(nq, d, s, trf) {
                Ok(m) => (Some(m.qcv), Some(m.eqcv)),
                Err(_) => (Some(nq * d), None),
            },
            (Some(d), None) => (Some(nq * d), None),
            _ => (None, None),
        };
        rows.push(ReportRow {
            variant: v.name,
            mode: v.mode,
            nq,
            depth,
            success,
            qcv,
            eqcv,
            trf,
        });
    }
    let mut out = OutDir::create(&config.out)?;
    out.write_with("report.csv", |w| write_report_csv(&rows, w))?;
    out.write_json("report.json", &rows)?;
    Ok(ReportOutcome {
        rows,
        files: out.written,
    })
}

fn cell<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_report_csv<W: Write + ?Sized>(rows: &[ReportRow], w: &mut W) -> std::io::Result<()> {
    writeln!(w, "variant,mode,nq,depth,success,qcv,eqcv,trf")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.variant,
            r.mode.as_str(),
            r.nq,
            cell(r.depth),
            cell(r.success),
            cell(r.qcv),
            cell(r.eqcv),
            r.trf
        )?;
    }
    Ok(())
}
