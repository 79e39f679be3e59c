//! Command-line front end: parses an experiment, runs it and writes a CSV
//! (or JSON) table plus a metadata sidecar.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::anneal::{parallel_runs, AnnealMode};
use crate::error::{Error, Result};
use crate::metrics::{
    geometric_grid, linear_grid, power_law_fit, threshold_time, tts_opt, tts_opt_refined, wilson_se, CurvePoint,
    PerformanceCurve, ThresholdOptions, ThresholdOutcome, ThresholdRefinement,
};
use crate::ode::Integrator;
use crate::problems::{locality, make_problem, pauli_z_expansion, CostFunction, ProblemKind, XorMask};
use crate::sa::{
    hamming_descent_time, hitting_time_linear_solver, plateau_chain, sa_batch, stefanov_expected_time, SaConfig,
    Selection,
};
use crate::schrodinger::{evolve, ground_prob, EvolutionConfig};
use crate::semiclassical::{find_degeneracy, reichardt_gap_terms, sc_ground_state, v_sym};
use crate::sqa::{sqa_batch, JPerpConvention, SqaConfig};
use crate::svd::{svd_evolve, svd_ground_prob, svd_state_as_symstate};
use crate::symspace::{
    adiabatic_matrix_element, adiabatic_numerator, build_hamiltonian, eigen_spectrum, eigen_values,
    eigenpath_length, ground_state, hw_expectation, hw_expectation_real, min_gap, populations, trace_distance,
    SymState,
};

#[derive(Debug, Parser)]
#[command(name = "phwo", version, about = "Annealing experiments on Hamming-weight problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output file; stdout when absent. A `<out>.meta.json` sidecar is written next to it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Master seed for every stochastic solver.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Lowest eigenvalues of H(s) on a grid, or a one-row gap summary.
    Spectrum(SpectrumArgs),
    /// Schrödinger evolution: a trajectory at one t_f or p_GS over a t_f grid.
    EvolveQa(EvolveArgs),
    /// Spin-vector dynamics: a trajectory at one t_f or p_GS over a t_f grid.
    EvolveSvd(EvolveArgs),
    /// Spin-coherent potential analyses.
    Semiclassical(SemiclassicalArgs),
    /// Simulated annealing batches.
    Sa(SaArgs),
    /// Simulated quantum annealing batches.
    Sqa(SqaArgs),
    /// Threshold time τ_0 of one solver.
    Threshold(ThresholdArgs),
    /// Optimal time-to-solution of one solver.
    Tts(TtsArgs),
    /// A per-n quantity over a list of sizes, with a power-law fit.
    Scaling(ScalingArgs),
    /// Pauli-z expansion coefficients of the cost function.
    Pauli(PauliArgs),
    /// Runs a JSON experiment spec file.
    #[serde(skip)]
    Run(RunArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemName {
    PlainHw,
    FixedPlateau,
    Reichardt,
    MovingPlateau,
    Grover,
    Spike,
    Precipice,
    AlphaRectangle,
    ConvexBump,
    Custom,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ProblemArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemName,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub u: Option<usize>,
    /// Reichardt perturbation height.
    #[arg(long)]
    pub h: Option<f64>,
    /// Moving-plateau width u − l.
    #[arg(long)]
    pub span: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Comma-separated cost table for `custom`.
    #[arg(long)]
    pub table: Option<String>,
}

impl ProblemArgs {
    pub fn kind(&self) -> Result<ProblemKind> {
        let need = |v: Option<usize>, name: &str| {
            v.ok_or_else(|| Error::param(format!("--{name} is required for {:?}", self.problem)))
        };
        Ok(match self.problem {
            ProblemName::PlainHw => ProblemKind::PlainHw,
            ProblemName::FixedPlateau => ProblemKind::FixedPlateau { l: need(self.l, "l")?, u: need(self.u, "u")? },
            ProblemName::Reichardt => ProblemKind::Reichardt {
                l: need(self.l, "l")?,
                u: need(self.u, "u")?,
                h: self.h.ok_or_else(|| Error::param("--h is required for reichardt"))?,
            },
            ProblemName::MovingPlateau => ProblemKind::MovingPlateau { span: need(self.span, "span")? },
            ProblemName::Grover => ProblemKind::Grover,
            ProblemName::Spike => ProblemKind::Spike,
            ProblemName::Precipice => ProblemKind::Precipice,
            ProblemName::AlphaRectangle => ProblemKind::AlphaRectangle { alpha: self.alpha, c: self.c },
            ProblemName::ConvexBump => ProblemKind::ConvexBump,
            ProblemName::Custom => {
                let t = self.table.as_deref().ok_or_else(|| Error::param("--table is required for custom"))?;
                let table: std::result::Result<Vec<f64>, _> = t.split(',').map(|v| v.trim().parse::<f64>()).collect();
                ProblemKind::Custom { table: table.map_err(|e| Error::param(format!("bad --table entry: {e}")))? }
            }
        })
    }

    pub fn build_n(&self, n: usize) -> Result<CostFunction> {
        make_problem(self.kind()?, n)
    }

    pub fn build(&self) -> Result<CostFunction> {
        let n = self.n.ok_or_else(|| Error::param("--n is required"))?;
        self.build_n(n)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 12)]
    pub k: usize,
    /// `start:end:count`, inclusive; append `:log` for a geometric grid.
    #[arg(long, default_value = "0:1:401")]
    pub s_grid: String,
    /// One row: minimum gap, its location and the adiabatic-condition terms.
    #[arg(long)]
    pub summary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntegratorName {
    Dp,
    Ck,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OdeArgs {
    #[arg(long, default_value_t = 1e-8)]
    pub rtol: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub atol: f64,
    #[arg(long, value_enum, default_value_t = IntegratorName::Dp)]
    pub integrator: IntegratorName,
}

impl OdeArgs {
    fn config(&self, t_f: f64) -> EvolutionConfig {
        let integ = match self.integrator {
            IntegratorName::Dp => Integrator::DormandPrince,
            IntegratorName::Ck => Integrator::CashKarp,
        };
        EvolutionConfig::new(t_f).with_tolerances(self.rtol, self.atol).with_integrator(integ)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long)]
    pub tf: Option<f64>,
    /// p_GS curve over this grid instead of a trajectory.
    #[arg(long)]
    pub tf_grid: Option<String>,
    #[arg(long, default_value = "0:1:101")]
    pub samples: String,
    /// Instantaneous eigenstates whose populations are reported (QA only).
    #[arg(long, default_value_t = 9)]
    pub k: usize,
    /// Also report the trace distance to the Schrödinger state (SVD only).
    #[arg(long)]
    pub compare_qa: bool,
    #[command(flatten)]
    pub ode: OdeArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScAction {
    /// V(θ) at fixed s and φ.
    Landscape,
    /// The s where the two minima of V have equal depth.
    Degeneracy,
    /// Semiclassical and quantum ground states along s.
    Track,
    /// Perturbation-window energy shift and its Gaussian bound along s.
    Reichardt,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SemiclassicalArgs {
    #[arg(value_enum)]
    pub action: ScAction,
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    #[arg(long, default_value_t = 1001)]
    pub points: usize,
    #[arg(long, default_value = "0:1:101")]
    pub s_grid: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeName {
    Solver,
    Annealer,
}

impl From<ModeName> for AnnealMode {
    fn from(m: ModeName) -> Self {
        match m {
            ModeName::Solver => AnnealMode::Solver,
            ModeName::Annealer => AnnealMode::Annealer,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionName {
    Random,
    Sequential,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum JPerpName {
    PaperLiteral,
    Trotter,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct McArgs {
    #[arg(long, default_value_t = 1000)]
    pub runs: usize,
    #[arg(long, value_enum, default_value_t = ModeName::Solver)]
    pub mode: ModeName,
    /// XOR mask applied before the cost, as a 0/1 string of length n.
    #[arg(long)]
    pub mask: Option<String>,
    #[arg(long, default_value_t = 0.1)]
    pub beta_i: f64,
    #[arg(long, default_value_t = 20.0)]
    pub beta_f: f64,
    #[arg(long, value_enum, default_value_t = SelectionName::Random)]
    pub selection: SelectionName,
    #[arg(long, default_value_t = 64)]
    pub n_tau: usize,
    #[arg(long, default_value_t = 30.0)]
    pub beta: f64,
    #[arg(long, value_enum, default_value_t = JPerpName::PaperLiteral)]
    pub jperp: JPerpName,
}

impl McArgs {
    fn mask(&self) -> Result<Option<XorMask>> {
        self.mask.as_deref().map(XorMask::parse).transpose()
    }

    fn sa_config(&self, sweeps: usize, seed: u64) -> Result<SaConfig> {
        Ok(SaConfig {
            beta_i: self.beta_i,
            beta_f: self.beta_f,
            sweeps,
            selection: match self.selection {
                SelectionName::Random => Selection::Random,
                SelectionName::Sequential => Selection::Sequential,
            },
            mode: self.mode.into(),
            seed,
            mask: self.mask()?,
            ..Default::default()
        })
    }

    fn sqa_config(&self, sweeps: usize, seed: u64) -> Result<SqaConfig> {
        Ok(SqaConfig {
            n_tau: self.n_tau,
            beta: self.beta,
            sweeps,
            mode: self.mode.into(),
            jperp: match self.jperp {
                JPerpName::PaperLiteral => JPerpConvention::PaperLiteral,
                JPerpName::Trotter => JPerpConvention::Trotter,
            },
            seed,
            mask: self.mask()?,
            ..Default::default()
        })
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SaArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Comma-separated sweep counts, or a `start:end:count[:log]` grid.
    #[arg(long, default_value = "100")]
    pub sweeps: String,
    #[command(flatten)]
    pub mc: McArgs,
    /// Exact hitting times (plateau fall-off or Hamming descent at beta_f) instead of Monte Carlo.
    #[arg(long)]
    pub analytic: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SqaArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value = "100")]
    pub sweeps: String,
    #[command(flatten)]
    pub mc: McArgs,
    /// Mean slice Hamming weight along s (annealer mode, full schedule).
    #[arg(long)]
    pub hw_profile: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverName {
    Qa,
    Svd,
    Sa,
    Sqa,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefineName {
    Bisection,
    Illinois,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SolverArgs {
    #[arg(long, value_enum)]
    pub solver: SolverName,
    #[command(flatten)]
    pub ode: OdeArgs,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, default_value_t = 0.9)]
    pub p0: f64,
    /// First time (t_f, or sweeps for sa/sqa) of the geometric scan.
    #[arg(long, default_value_t = 1.0)]
    pub start: f64,
    #[arg(long, default_value_t = 1e6)]
    pub cap: f64,
    #[arg(long, value_enum, default_value_t = RefineName::Bisection)]
    pub refine: RefineName,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TtsArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Grid of t_f (qa/svd) or sweeps (sa/sqa).
    #[arg(long, default_value = "1:40:200")]
    pub tf_grid: String,
    #[arg(long, default_value_t = 0.7)]
    pub pd: f64,
    /// Golden-section refinement around the best grid point (qa/svd).
    #[arg(long)]
    pub refine: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Measure {
    MinGap,
    AdiabaticNumerator,
    AdiabaticMatrixElement,
    EigenpathLength,
    Degeneracy,
    FallOff,
    Descent,
    Threshold,
    Tts,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScalingArgs {
    #[arg(long, value_enum)]
    pub measure: Measure,
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Comma-separated sizes, or a `start:end:count[:log]` grid.
    #[arg(long)]
    pub ns: String,
    #[arg(long, value_enum)]
    pub solver: Option<SolverName>,
    #[command(flatten)]
    pub ode: OdeArgs,
    #[command(flatten)]
    pub mc: McArgs,
    #[arg(long, default_value_t = 0.9)]
    pub p0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub start: f64,
    #[arg(long, default_value_t = 1e6)]
    pub cap: f64,
    #[arg(long, default_value = "1:40:200")]
    pub tf_grid: String,
    #[arg(long, default_value_t = 0.7)]
    pub pd: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PauliArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// JSON file `{"command": ..., "args": {...}, "out": ..., "format": ..., "seed": ...}`.
    #[arg(long)]
    pub spec: PathBuf,
}

/// A fully resolved experiment: everything that determines the output.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentSpec {
    pub command: Command,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl ExperimentSpec {
    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canon = serde_json::to_string(&serde_json::to_value(self).unwrap_or(Value::Null)).unwrap_or_default();
        hex::encode(Sha256::digest(canon.as_bytes()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::F(v) if v.is_nan() => "nan".into(),
            Cell::F(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::F(v) => format!("{v:.16e}"),
            Cell::I(v) => v.to_string(),
            Cell::S(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::I(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::I(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.into())
    }
}

/// Result table; the first column is the swept variable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Extra facts for the sidecar (fits, grid definitions).
    #[serde(skip)]
    pub notes: serde_json::Map<String, Value>,
}

impl Table {
    fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new(), notes: Default::default() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn note(&mut self, key: &str, v: Value) {
        self.notes.insert(key.into(), v);
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.iter().map(Cell::csv).collect::<Vec<_>>().join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&json!({ "columns": self.columns, "rows": self.rows })).unwrap_or_default()
    }
}

/// Parses `start:end:count[:log]` or a comma-separated list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |what: &str| Error::param(format!("bad grid {spec:?}: {what}"));
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad("expected start:end:count[:log]"));
        }
        let a: f64 = parts[0].trim().parse().map_err(|_| bad("start"))?;
        let b: f64 = parts[1].trim().parse().map_err(|_| bad("end"))?;
        let m: usize = parts[2].trim().parse().map_err(|_| bad("count"))?;
        if m == 0 || !a.is_finite() || !b.is_finite() || b < a {
            return Err(bad("need count >= 1 and start <= end"));
        }
        match parts.get(3).map(|s| s.trim()) {
            None | Some("lin") => Ok(linear_grid(a, b, m)),
            Some("log") if a > 0.0 => Ok(geometric_grid(a, b, m)),
            _ => Err(bad("suffix must be lin, or log with start > 0")),
        }
    } else {
        let v: std::result::Result<Vec<f64>, _> = spec.split(',').map(|x| x.trim().parse::<f64>()).collect();
        let v = v.map_err(|_| bad("list entries must be numbers"))?;
        if v.is_empty() {
            return Err(bad("empty list"));
        }
        Ok(v)
    }
}

fn parse_counts(spec: &str) -> Result<Vec<usize>> {
    let mut out: Vec<usize> = Vec::new();
    for v in parse_grid(spec)? {
        if !(v >= 1.0) {
            return Err(Error::param(format!("counts in {spec:?} must be >= 1")));
        }
        let k = v.round() as usize;
        if out.last() != Some(&k) {
            out.push(k);
        }
    }
    Ok(out)
}

fn check_unit_grid(g: &[f64]) -> Result<()> {
    if g.iter().any(|s| !(0.0..=1.0).contains(s)) {
        return Err(Error::Range("s grid must lie in [0, 1]".into()));
    }
    Ok(())
}

/// Seed of sweep point `task` derived from the master seed (SplitMix64).
pub fn task_seed(master: u64, task: u64) -> u64 {
    let mut z = master.wrapping_add(task.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn collect<T>(v: Vec<Result<T>>) -> Result<Vec<T>> {
    v.into_iter().collect()
}

/// Success probability of `solver` at run length `t` (t_f, or sweeps for
/// the Monte Carlo solvers), with its standard error and cost in that
/// solver's time unit.
struct Provider<'a> {
    cf: &'a CostFunction,
    solver: SolverName,
    ode: &'a OdeArgs,
    mc: &'a McArgs,
    seed: u64,
}

impl Provider<'_> {
    fn eval(&self, t: f64, task: u64) -> Result<CurvePoint> {
        let n = self.cf.n();
        match self.solver {
            SolverName::Qa => {
                let p = ground_prob(&evolve(self.cf, &self.ode.config(t))?);
                Ok(CurvePoint { t, p: p.clamp(0.0, 1.0), se: 0.0 })
            }
            SolverName::Svd => {
                let tr = svd_evolve(self.cf, &self.ode.config(t))?;
                Ok(CurvePoint { t, p: svd_ground_prob(&tr.final_state, n, self.cf.w_opt())?, se: 0.0 })
            }
            SolverName::Sa => {
                let sweeps = t.round().max(1.0) as usize;
                let cfg = self.mc.sa_config(sweeps, task_seed(self.seed, task))?;
                let (sum, _) = sa_batch(self.cf, &cfg, self.mc.runs)?;
                Ok(CurvePoint { t: sum.updates_per_run as f64, p: sum.p_gs, se: wilson_se(sum.successes, sum.runs) })
            }
            SolverName::Sqa => {
                let sweeps = t.round().max(1.0) as usize;
                let cfg = self.mc.sqa_config(sweeps, task_seed(self.seed, task))?;
                let (sum, _) = sqa_batch(self.cf, &cfg, self.mc.runs)?;
                Ok(CurvePoint { t: sum.updates_per_run as f64, p: sum.p_gs, se: wilson_se(sum.successes, sum.runs) })
            }
        }
    }

    fn stochastic(&self) -> bool {
        matches!(self.solver, SolverName::Sa | SolverName::Sqa)
    }

    /// Single-spin updates per sweep for the Monte Carlo solvers.
    fn updates_per_sweep(&self) -> f64 {
        match self.solver {
            SolverName::Sa => self.cf.n() as f64,
            SolverName::Sqa => (self.cf.n() * self.mc.n_tau) as f64,
            _ => 1.0,
        }
    }

    fn curve(&self, grid: &[f64]) -> Result<PerformanceCurve> {
        let pts = if self.stochastic() {
            collect(grid.iter().enumerate().map(|(j, &t)| self.eval(t, j as u64)).collect())?
        } else {
            collect(parallel_runs(grid.len(), |j| self.eval(grid[j as usize], j)))?
        };
        let mut clean: Vec<CurvePoint> = Vec::with_capacity(pts.len());
        for q in pts {
            if clean.last().is_none_or(|l| q.t > l.t) {
                clean.push(q);
            }
        }
        PerformanceCurve::new(clean)
    }

    fn threshold(&self, p0: f64, start: f64, cap: f64, refine: RefineName) -> Result<ThresholdOutcome> {
        let opts = ThresholdOptions {
            start,
            cap,
            integer: self.stochastic(),
            refinement: match refine {
                RefineName::Bisection => ThresholdRefinement::Bisection,
                RefineName::Illinois => ThresholdRefinement::Illinois,
            },
            ..Default::default()
        };
        let mut task = 0u64;
        threshold_time(
            |t| {
                task += 1;
                self.eval(t, task).map(|q| q.p)
            },
            p0,
            &opts,
        )
    }
}

fn spectrum(a: &SpectrumArgs) -> Result<Table> {
    let cf = a.problem.build()?;
    if a.summary {
        let (s_star, g) = min_gap(&cf)?;
        let mut t = Table::new(&[
            "n",
            "s_min_gap",
            "min_gap",
            "adiabatic_numerator",
            "adiabatic_matrix_element",
            "eigenpath_length",
        ]);
        t.push(vec![
            cf.n().into(),
            s_star.into(),
            g.into(),
            adiabatic_numerator(&cf)?.into(),
            adiabatic_matrix_element(&cf)?.into(),
            eigenpath_length(&cf)?.into(),
        ]);
        return Ok(t);
    }
    if a.k == 0 || a.k > cf.n() + 1 {
        return Err(Error::param(format!("k must lie in 1..={}", cf.n() + 1)));
    }
    let grid = parse_grid(&a.s_grid)?;
    check_unit_grid(&grid)?;
    let cols: Vec<String> = std::iter::once("s".to_string()).chain((0..a.k).map(|i| format!("e{i}"))).collect();
    let mut t = Table::new(&cols.iter().map(String::as_str).collect::<Vec<_>>());
    let rows = collect(parallel_runs(grid.len(), |j| {
        let s = grid[j as usize];
        let spec = eigen_values(&build_hamiltonian(&cf, s)?, a.k)?;
        Ok(std::iter::once(Cell::F(s)).chain(spec.eigenvalues.into_iter().map(Cell::F)).collect::<Vec<_>>())
    }))?;
    rows.into_iter().for_each(|r| t.push(r));
    t.note("s_grid", json!(a.s_grid));
    Ok(t)
}

fn tf_curve(a: &EvolveArgs, solver: SolverName, seed: u64, grid: &str) -> Result<Table> {
    let cf = a.problem.build()?;
    let grid = parse_grid(grid)?;
    let mc = McArgs::defaults();
    let prov = Provider { cf: &cf, solver, ode: &a.ode, mc: &mc, seed };
    let curve = prov.curve(&grid)?;
    let mut t = Table::new(&["t_f", "p_gs"]);
    for q in curve.points() {
        t.push(vec![q.t.into(), q.p.into()]);
    }
    Ok(t)
}

fn evolve_qa(a: &EvolveArgs, seed: u64) -> Result<Table> {
    if let Some(g) = &a.tf_grid {
        return tf_curve(a, SolverName::Qa, seed, g);
    }
    let cf = a.problem.build()?;
    let tf = a.tf.ok_or_else(|| Error::param("give --tf or --tf-grid"))?;
    let samples = parse_grid(&a.samples)?;
    check_unit_grid(&samples)?;
    let k = a.k.min(cf.n() + 1);
    let tr = evolve(&cf, &a.ode.config(tf).with_samples(samples))?;
    let mut cols = vec!["s".to_string(), "hw".into(), "p_w_opt".into(), "gs_hw".into()];
    cols.extend((0..k).map(|i| format!("pop{i}")));
    let mut t = Table::new(&cols.iter().map(String::as_str).collect::<Vec<_>>());
    let rows = collect(parallel_runs(tr.samples.len(), |j| {
        let (s, psi) = &tr.samples[j as usize];
        let spec = eigen_spectrum(&build_hamiltonian(&cf, *s)?, k)?;
        let pops = populations(psi, &spec)?;
        let gs_hw = hw_expectation_real(&ground_state(&cf, *s)?);
        let mut row = vec![Cell::F(*s), hw_expectation(psi).into(), psi.amps[cf.w_opt()].norm_sqr().into(), gs_hw.into()];
        row.extend(pops.into_iter().map(Cell::F));
        Ok(row)
    }))?;
    rows.into_iter().for_each(|r| t.push(r));
    t.note("final_p_gs", json!(ground_prob(&tr)));
    t.note("ode_stats", json!({"accepted": tr.stats.accepted, "rejected": tr.stats.rejected}));
    Ok(t)
}

fn evolve_svd(a: &EvolveArgs, seed: u64) -> Result<Table> {
    if let Some(g) = &a.tf_grid {
        return tf_curve(a, SolverName::Svd, seed, g);
    }
    let cf = a.problem.build()?;
    let tf = a.tf.ok_or_else(|| Error::param("give --tf or --tf-grid"))?;
    let samples = parse_grid(&a.samples)?;
    check_unit_grid(&samples)?;
    let cfg = a.ode.config(tf).with_samples(samples);
    let tr = svd_evolve(&cf, &cfg)?;
    let qa = if a.compare_qa { Some(evolve(&cf, &cfg)?) } else { None };
    let mut cols = vec!["s", "theta", "phi", "hw", "p_w_opt"];
    if qa.is_some() {
        cols.push("trace_distance_qa");
    }
    let mut t = Table::new(&cols);
    for (j, (s, st)) in tr.samples.iter().enumerate() {
        let mut row = vec![
            Cell::F(*s),
            st.theta.into(),
            st.phi.into(),
            st.hw(cf.n()).into(),
            svd_ground_prob(st, cf.n(), cf.w_opt())?.into(),
        ];
        if let Some(q) = &qa {
            let d = trace_distance(&svd_state_as_symstate(st, cf.n()), &q.samples[j].1)?;
            row.push(d.into());
        }
        t.push(row);
    }
    t.note("final_p_gs", json!(svd_ground_prob(&tr.final_state, cf.n(), cf.w_opt())?));
    Ok(t)
}

fn semiclassical(a: &SemiclassicalArgs) -> Result<Table> {
    let cf = a.problem.build()?;
    match a.action {
        ScAction::Landscape => {
            if !(0.0..=1.0).contains(&a.s) {
                return Err(Error::Range(format!("s = {} outside [0, 1]", a.s)));
            }
            if a.points < 2 {
                return Err(Error::param("--points must be >= 2"));
            }
            let mut t = Table::new(&["theta", "v"]);
            for th in linear_grid(0.0, std::f64::consts::PI, a.points) {
                t.push(vec![th.into(), v_sym(&cf, th, a.phi, a.s).into()]);
            }
            Ok(t)
        }
        ScAction::Degeneracy => {
            let d = find_degeneracy(&cf)?;
            let (s_gap, _) = min_gap(&cf)?;
            let mut t = Table::new(&[
                "n",
                "s_star",
                "theta_left",
                "theta_right",
                "theta_barrier",
                "barrier_height",
                "s_min_gap",
            ]);
            t.push(vec![
                cf.n().into(),
                d.s_star.into(),
                d.theta_left.into(),
                d.theta_right.into(),
                d.theta_barrier.into(),
                d.barrier_height.into(),
                s_gap.into(),
            ]);
            Ok(t)
        }
        ScAction::Track => {
            let grid = parse_grid(&a.s_grid)?;
            check_unit_grid(&grid)?;
            let mut t = Table::new(&["s", "theta_sc", "hw_sc", "hw_gs", "trace_distance"]);
            let rows = collect(parallel_runs(grid.len(), |j| {
                let s = grid[j as usize];
                let (theta, sc) = sc_ground_state(&cf, s);
                let gs = SymState::from_real(&ground_state(&cf, s)?);
                Ok(vec![
                    Cell::F(s),
                    theta.into(),
                    hw_expectation(&sc).into(),
                    hw_expectation(&gs).into(),
                    trace_distance(&sc, &gs)?.into(),
                ])
            }))?;
            rows.into_iter().for_each(|r| t.push(r));
            Ok(t)
        }
        ScAction::Reichardt => {
            let grid = parse_grid(&a.s_grid)?;
            check_unit_grid(&grid)?;
            let mut t = Table::new(&["s", "partial_sum", "bound"]);
            for s in grid {
                let (p, b) = reichardt_gap_terms(&cf, s)?;
                t.push(vec![s.into(), p.into(), b.into()]);
            }
            Ok(t)
        }
    }
}

impl McArgs {
    fn defaults() -> Self {
        Self {
            runs: 1000,
            mode: ModeName::Solver,
            mask: None,
            beta_i: 0.1,
            beta_f: 20.0,
            selection: SelectionName::Random,
            n_tau: 64,
            beta: 30.0,
            jperp: JPerpName::PaperLiteral,
        }
    }
}

fn sa_cmd(a: &SaArgs, seed: u64) -> Result<Table> {
    let cf = a.problem.build()?;
    if a.analytic {
        let mut t = Table::new(&["n", "expected_time", "linear_solver"]);
        match cf.perturbation_window() {
            Some((l, u)) if matches!(cf.kind(), ProblemKind::FixedPlateau { .. }) => {
                let ch = plateau_chain(l, u, cf.n())?;
                t.push(vec![
                    cf.n().into(),
                    stefanov_expected_time(&ch)?.0.into(),
                    hitting_time_linear_solver(&ch)?.into(),
                ]);
                t.note("quantity", json!("plateau fall-off time E tau_{w,0}"));
            }
            _ if matches!(cf.kind(), ProblemKind::PlainHw) => {
                let v = hamming_descent_time(cf.n(), a.mc.beta_f)?;
                t.push(vec![cf.n().into(), v.into(), Cell::F(f64::NAN)]);
                t.note("quantity", json!(format!("Hamming descent E tau_(n,0) at beta = {}", a.mc.beta_f)));
            }
            _ => return Err(Error::Unsupported("--analytic needs plain-hw or fixed-plateau".into())),
        }
        return Ok(t);
    }
    let counts = parse_counts(&a.sweeps)?;
    a.mc.sa_config(1, seed)?.validate(cf.n())?;
    let mut t = Table::new(&["sweeps", "updates", "runs", "successes", "p_gs", "se", "mean_updates_to_gs"]);
    for (j, &sw) in counts.iter().enumerate() {
        let cfg = a.mc.sa_config(sw, task_seed(seed, j as u64))?;
        let (sum, _) = sa_batch(&cf, &cfg, a.mc.runs)?;
        t.push(vec![
            sw.into(),
            sum.updates_per_run.into(),
            sum.runs.into(),
            sum.successes.into(),
            sum.p_gs.into(),
            wilson_se(sum.successes, sum.runs).into(),
            sum.mean_updates_to_gs.unwrap_or(f64::NAN).into(),
        ]);
    }
    Ok(t)
}

fn sqa_cmd(a: &SqaArgs, seed: u64) -> Result<Table> {
    let cf = a.problem.build()?;
    let counts = parse_counts(&a.sweeps)?;
    a.mc.sqa_config(1, seed)?.validate(cf.n())?;
    if a.hw_profile {
        let sw = counts[0];
        let cfg = SqaConfig {
            mode: AnnealMode::Annealer,
            record_hw: true,
            stop_at_gs: false,
            ..a.mc.sqa_config(sw, task_seed(seed, 0))?
        };
        let (_, rs) = sqa_batch(&cf, &cfg, a.mc.runs)?;
        let mut t = Table::new(&["s", "mean_hw"]);
        for k in 0..sw {
            let s = rs[0].hw_samples[k].0;
            let m = rs.iter().map(|r| r.hw_samples[k].1).sum::<f64>() / rs.len() as f64;
            t.push(vec![s.into(), m.into()]);
        }
        return Ok(t);
    }
    let mut t = Table::new(&["sweeps", "updates", "runs", "successes", "p_gs", "se", "mean_updates_to_gs"]);
    for (j, &sw) in counts.iter().enumerate() {
        let cfg = a.mc.sqa_config(sw, task_seed(seed, j as u64))?;
        let (sum, _) = sqa_batch(&cf, &cfg, a.mc.runs)?;
        t.push(vec![
            sw.into(),
            sum.updates_per_run.into(),
            sum.runs.into(),
            sum.successes.into(),
            sum.p_gs.into(),
            wilson_se(sum.successes, sum.runs).into(),
            sum.mean_updates_to_gs.unwrap_or(f64::NAN).into(),
        ]);
    }
    Ok(t)
}

fn threshold_row(prov: &Provider, n: usize, p0: f64, start: f64, cap: f64, refine: RefineName) -> Result<Vec<Cell>> {
    let out = prov.threshold(p0, start, cap, refine)?;
    let scale = prov.updates_per_sweep();
    Ok(match out {
        ThresholdOutcome::Reached { tau0, evaluations } => {
            vec![n.into(), tau0.into(), (tau0 * scale).into(), evaluations.into(), "reached".into()]
        }
        ThresholdOutcome::CapExceeded { cap, evaluations } => {
            vec![n.into(), cap.into(), (cap * scale).into(), evaluations.into(), "cap-exceeded".into()]
        }
    })
}

const THRESHOLD_COLUMNS: [&str; 5] = ["n", "tau0", "tau0_updates", "evaluations", "status"];

fn threshold_cmd(a: &ThresholdArgs, seed: u64) -> Result<Table> {
    let cf = a.problem.build()?;
    if !(a.p0 > 0.0 && a.p0 < 1.0) {
        return Err(Error::param("--p0 must lie in (0, 1)"));
    }
    let prov = Provider { cf: &cf, solver: a.solver.solver, ode: &a.solver.ode, mc: &a.solver.mc, seed };
    let mut t = Table::new(&THRESHOLD_COLUMNS);
    t.push(threshold_row(&prov, cf.n(), a.p0, a.start, a.cap, a.refine)?);
    t.note("grid", json!({"ratio": 1.25, "rel_tol": 1e-3, "start": a.start, "cap": a.cap}));
    Ok(t)
}

fn tts_row(prov: &Provider, grid: &[f64], pd: f64, refine: bool) -> Result<(Vec<Cell>, PerformanceCurve)> {
    let curve = prov.curve(grid)?;
    let rep = if refine && !prov.stochastic() {
        tts_opt_refined(&curve, pd, |t| prov.eval(t, 0).map(|q| q.p), 1e-4)?
    } else {
        tts_opt(&curve, pd)?
    };
    let row = vec![
        prov.cf.n().into(),
        rep.tf_opt.into(),
        rep.tts_opt.into(),
        rep.p_at_opt.into(),
        (if rep.solved { "solved" } else { "no-solution" }).into(),
    ];
    Ok((row, curve))
}

const TTS_COLUMNS: [&str; 5] = ["n", "tf_opt", "tts_opt", "p_at_opt", "status"];

fn tts_cmd(a: &TtsArgs, seed: u64) -> Result<Table> {
    let cf = a.problem.build()?;
    if !(a.pd > 0.0 && a.pd < 1.0) {
        return Err(Error::param("--pd must lie in (0, 1)"));
    }
    let grid = parse_grid(&a.tf_grid)?;
    let prov = Provider { cf: &cf, solver: a.solver.solver, ode: &a.solver.ode, mc: &a.solver.mc, seed };
    let (row, curve) = tts_row(&prov, &grid, a.pd, a.refine)?;
    let mut t = Table::new(&TTS_COLUMNS);
    t.push(row);
    t.note("curve", serde_json::to_value(curve.points()).unwrap_or(Value::Null));
    t.note("tf_grid", json!(a.tf_grid));
    Ok(t)
}

fn scaling_cmd(a: &ScalingArgs, seed: u64) -> Result<Table> {
    let ns = parse_counts(&a.ns)?;
    let cfs: Vec<CostFunction> = ns.iter().map(|&n| a.problem.build_n(n)).collect::<Result<_>>()?;
    let need_solver = || a.solver.ok_or_else(|| Error::param("--solver is required for this measure"));
    let mut t = match a.measure {
        Measure::Threshold => Table::new(&THRESHOLD_COLUMNS),
        Measure::Tts => Table::new(&TTS_COLUMNS),
        Measure::Degeneracy => Table::new(&["n", "s_star", "s_min_gap", "abs_diff"]),
        _ => Table::new(&["n", "value"]),
    };
    let mut values = Vec::new();
    for (j, cf) in cfs.iter().enumerate() {
        let n = cf.n();
        let sub = task_seed(seed, j as u64);
        match a.measure {
            Measure::MinGap => values.push(min_gap(cf)?.1),
            Measure::AdiabaticNumerator => values.push(adiabatic_numerator(cf)?),
            Measure::AdiabaticMatrixElement => values.push(adiabatic_matrix_element(cf)?),
            Measure::EigenpathLength => values.push(eigenpath_length(cf)?),
            Measure::FallOff => {
                let (l, u) = cf
                    .perturbation_window()
                    .ok_or_else(|| Error::Unsupported("fall-off needs a plateau problem".into()))?;
                values.push(stefanov_expected_time(&plateau_chain(l, u, n)?)?.0);
            }
            Measure::Descent => values.push(hamming_descent_time(n, a.mc.beta_f)?),
            Measure::Degeneracy => {
                let d = find_degeneracy(cf)?;
                let (s_gap, _) = min_gap(cf)?;
                t.push(vec![n.into(), d.s_star.into(), s_gap.into(), (d.s_star - s_gap).abs().into()]);
                continue;
            }
            Measure::Threshold => {
                let prov = Provider { cf, solver: need_solver()?, ode: &a.ode, mc: &a.mc, seed: sub };
                let row = threshold_row(&prov, n, a.p0, a.start, a.cap, RefineName::Bisection)?;
                if let Cell::F(v) = row[2] {
                    if matches!(&row[4], Cell::S(s) if s == "reached") {
                        values.push(v);
                    }
                }
                t.push(row);
                continue;
            }
            Measure::Tts => {
                let prov = Provider { cf, solver: need_solver()?, ode: &a.ode, mc: &a.mc, seed: sub };
                let (row, _) = tts_row(&prov, &parse_grid(&a.tf_grid)?, a.pd, false)?;
                if let Cell::F(v) = row[2] {
                    values.push(v);
                }
                t.push(row);
                continue;
            }
        }
        t.push(vec![n.into(), (*values.last().unwrap()).into()]);
    }
    if values.len() == ns.len() && ns.len() >= 3 && values.iter().all(|v| *v > 0.0 && v.is_finite()) {
        let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
        let fit = power_law_fit(&xs, &values)?;
        t.note("power_law_fit", serde_json::to_value(fit).unwrap_or(Value::Null));
    }
    Ok(t)
}

fn pauli_cmd(a: &PauliArgs) -> Result<Table> {
    let cf = a.problem.build()?;
    let exp = pauli_z_expansion(&cf)?;
    let n = cf.n();
    let mut t = Table::new(&["r", "order", "coefficient"]);
    for (&r, &c) in &exp {
        let bits: String = (0..n).map(|i| if r >> i & 1 == 1 { '1' } else { '0' }).collect();
        t.push(vec![Cell::S(bits), (r.count_ones() as usize).into(), c.into()]);
    }
    t.note("locality", json!(locality(&exp)));
    Ok(t)
}

/// Runs the experiment and returns its table without writing anything.
pub fn execute(spec: &ExperimentSpec) -> Result<Table> {
    let seed = spec.seed;
    match &spec.command {
        Command::Spectrum(a) => spectrum(a),
        Command::EvolveQa(a) => evolve_qa(a, seed),
        Command::EvolveSvd(a) => evolve_svd(a, seed),
        Command::Semiclassical(a) => semiclassical(a),
        Command::Sa(a) => sa_cmd(a, seed),
        Command::Sqa(a) => sqa_cmd(a, seed),
        Command::Threshold(a) => threshold_cmd(a, seed),
        Command::Tts(a) => tts_cmd(a, seed),
        Command::Scaling(a) => scaling_cmd(a, seed),
        Command::Pauli(a) => pauli_cmd(a),
        Command::Run(_) => Err(Error::param("spec files cannot nest `run`")),
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn write_outputs(spec: &ExperimentSpec, table: &Table) -> Result<()> {
    let body = match spec.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match &spec.out {
        None => {
            std::io::stdout().write_all(body.as_bytes())?;
        }
        Some(path) => {
            std::fs::write(path, body)?;
            let meta = json!({
                "spec": spec,
                "spec_sha256": spec.hash(),
                "version": env!("CARGO_PKG_VERSION"),
                "columns": table.columns,
                "rows": table.rows.len(),
                "notes": table.notes,
            });
            std::fs::write(sidecar_path(path), serde_json::to_string_pretty(&meta).unwrap_or_default())?;
        }
    }
    Ok(())
}

/// Converts a spec file into the equivalent argument vector.
pub fn spec_file_args(text: &str) -> Result<Vec<String>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::param(format!("spec is not valid JSON: {e}")))?;
    let obj = v.as_object().ok_or_else(|| Error::param("spec must be a JSON object"))?;
    let cmd = obj
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::param("spec needs a string \"command\""))?;
    if cmd == "run" {
        return Err(Error::param("spec files cannot nest `run`"));
    }
    let mut argv = vec!["phwo".to_string(), cmd.to_string()];
    if let Some(action) = obj.get("action").and_then(Value::as_str) {
        argv.push(action.to_string());
    }
    let mut push_flag = |k: &str, val: &Value| -> Result<()> {
        let flag = format!("--{}", k.replace('_', "-"));
        match val {
            Value::Bool(true) => argv.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Number(x) => argv.extend([flag, x.to_string()]),
            Value::String(s) => argv.extend([flag, s.clone()]),
            Value::Array(items) => {
                let joined: Vec<String> = items
                    .iter()
                    .map(|i| match i {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                argv.extend([flag, joined.join(",")]);
            }
            Value::Object(_) => return Err(Error::param(format!("spec field {k:?} cannot be an object"))),
        }
        Ok(())
    };
    if let Some(args) = obj.get("args") {
        let args = args.as_object().ok_or_else(|| Error::param("\"args\" must be an object"))?;
        for (k, val) in args {
            push_flag(k, val)?;
        }
    }
    for key in ["out", "format", "seed"] {
        if let Some(val) = obj.get(key) {
            push_flag(key, val)?;
        }
    }
    Ok(argv)
}

fn exit_code(e: &Error) -> i32 {
    if e.is_validation() {
        2
    } else {
        3
    }
}

/// Parses, runs and writes one experiment. Returns the process exit code:
/// 0 on success, 2 for invalid input, 3 for numerical failures.
pub fn run_experiment(spec: &ExperimentSpec) -> i32 {
    match execute(spec).and_then(|t| write_outputs(spec, &t)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn parse_spec<I, T>(args: I) -> std::result::Result<ExperimentSpec, i32>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| {
        let _ = e.print();
        if e.use_stderr() {
            2
        } else {
            0
        }
    })?;
    if let Command::Run(r) = &cli.command {
        let text = std::fs::read_to_string(&r.spec).map_err(|e| {
            eprintln!("error: cannot read {}: {e}", r.spec.display());
            2
        })?;
        let argv = spec_file_args(&text).map_err(|e| {
            eprintln!("error: {e}");
            2
        })?;
        let mut spec = parse_spec(argv)?;
        // flags given next to `run` override the file
        if cli.out.is_some() {
            spec.out = cli.out;
        }
        return Ok(spec);
    }
    Ok(ExperimentSpec { command: cli.command, out: cli.out, format: cli.format, seed: cli.seed })
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match parse_spec(args) {
        Ok(spec) => run_experiment(&spec),
        Err(code) => code,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(args: &[&str]) -> ExperimentSpec {
        parse_spec(args.iter().copied()).expect("parses")
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("1, 2,4").unwrap(), vec![1.0, 2.0, 4.0]);
        let g = parse_grid("1:100:3:log").unwrap();
        assert!((g[1] - 10.0).abs() < 1e-12);
        assert!(parse_grid("1:0:3").is_err());
        assert!(parse_grid("a,b").is_err());
        assert_eq!(parse_counts("10:12:5").unwrap(), vec![10, 11, 12]);
    }

    #[test]
    fn csv_has_header_and_full_precision() {
        let s = spec(&["phwo", "spectrum", "--problem", "plain-hw", "--n", "4", "--k", "2", "--s-grid", "0.5:0.5:1"]);
        let t = execute(&s).unwrap();
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "s,e0,e1");
        let row: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
        let gap = row[2] - row[1];
        assert!((gap - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn spec_hash_is_stable() {
        let a = spec(&["phwo", "pauli", "--problem", "plain-hw", "--n", "3"]);
        let b = spec(&["phwo", "pauli", "--n", "3", "--problem", "plain-hw"]);
        assert_eq!(a.hash(), b.hash());
        let c = spec(&["phwo", "pauli", "--problem", "plain-hw", "--n", "4"]);
        assert_ne!(a.hash(), c.hash());
    }

    #[test]
    fn spec_file_translation() {
        let argv = spec_file_args(
            r#"{"command": "semiclassical", "action": "degeneracy",
                "args": {"problem": "fixed-plateau", "l": 0, "u": 6, "n": 64}, "seed": 3}"#,
        )
        .unwrap();
        let s = parse_spec(argv).unwrap();
        assert_eq!(s.seed, 3);
        assert!(matches!(s.command, Command::Semiclassical(SemiclassicalArgs { action: ScAction::Degeneracy, .. })));
        assert!(spec_file_args(r#"{"command": "run"}"#).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main_with_args(["phwo", "pauli", "--problem", "fixed-plateau", "--n", "4"]), 2);
        assert_eq!(main_with_args(["phwo", "spectrum", "--problem", "plain-hw", "--n", "4", "--s-grid", "0:2:3"]), 2);
        assert_eq!(main_with_args(["phwo", "nonsense"]), 2);
    }

    #[test]
    fn task_seeds_differ() {
        assert_ne!(task_seed(0, 0), task_seed(0, 1));
        assert_ne!(task_seed(1, 0), task_seed(0, 0));
    }
}
