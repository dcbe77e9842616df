//! Scenario orchestration: concurrence time series, (α/β, Jt) contour sweeps,
//! and exact-versus-no-ordering comparison reports.
//!
//! A scenario bundles an initial state, a field profile, the coupling, an
//! output time grid, and the method used to evolve: `analytic-kick` composes
//! closed-form propagators, `rk4-pulse` integrates numerically on an
//! internally refined grid, and `no-ordering` exponentiates the time-averaged
//! Hamiltonian. Sweeps parallelize over ratio rows; results land in
//! preallocated, index-addressed storage so output is bit-identical for any
//! worker count. `KICKDYN_THREADS` caps the worker pool (0 or unset = auto).

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::entanglement::{clamp_concurrence, ConcurrenceSeries, EntanglementError};
use crate::fields::{
    integrated_envelope, Coupling, FieldError, FieldProfile, FieldStrengths, Sign, Train,
};
use crate::integrator::{integrate_full, IntegrateError, SimGrid, StateVector};
use crate::propagators::{
    evolve, kick_sequence_propagator, no_ordering_propagator, BlockPropagator, PropagatorError,
};
use crate::tol;

/// Environment variable capping sweep parallelism (0 = auto).
pub const THREADS_ENV: &str = "KICKDYN_THREADS";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("method {method} cannot run on a {train}")]
    MethodTrainMismatch { method: &'static str, train: &'static str },
    #[error("initial state norm {norm} is not 1")]
    BadInitialState { norm: f64 },
    #[error("sweep needs at least 2 points per axis, got {points}")]
    TooFewPoints { points: usize },
    #[error("sweep ratio range [{lo}, {hi}] is not finite and increasing")]
    BadRatioRange { lo: f64, hi: f64 },
    #[error("comparison needs at least two variants")]
    TooFewVariants,
    #[error("sweep row {row} (ratio {ratio}) failed: {source}")]
    Cell { row: usize, ratio: f64, source: Box<ExperimentError> },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Propagator(#[from] PropagatorError),
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
    #[error(transparent)]
    Entanglement(#[from] EntanglementError),
}

/// How a scenario is evolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    /// Closed-form time-ordered kick propagators.
    AnalyticKick,
    /// Runge-Kutta integration of the pulse-driven Schrödinger system.
    Rk4Pulse,
    /// Exponential of the time-averaged Hamiltonian (time ordering dropped).
    NoOrdering,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::AnalyticKick => "analytic-kick",
            Method::Rk4Pulse => "rk4-pulse",
            Method::NoOrdering => "no-ordering",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "analytic-kick" => Some(Method::AnalyticKick),
            "rk4-pulse" => Some(Method::Rk4Pulse),
            "no-ordering" => Some(Method::NoOrdering),
            _ => None,
        }
    }
}

/// A fully specified run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub initial: StateVector,
    /// Label echoed into metadata; not interpreted.
    pub initial_name: String,
    pub profile: FieldProfile,
    pub coupling: Coupling,
    pub grid: SimGrid,
    pub method: Method,
}

impl Scenario {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let norm = self.initial.norm();
        if (norm - 1.0).abs() > tol::STATE_NORM {
            return Err(ExperimentError::BadInitialState { norm });
        }
        let ok = match (self.method, &self.profile.train) {
            (Method::AnalyticKick, Train::Kicks(_) | Train::Free) => true,
            (Method::Rk4Pulse, Train::Pulses(_) | Train::Free) => true,
            (Method::NoOrdering, _) => true,
            _ => false,
        };
        if !ok {
            return Err(ExperimentError::MethodTrainMismatch {
                method: self.method.name(),
                train: self.profile.train.kind_name(),
            });
        }
        Ok(())
    }

    fn with_strengths(&self, strengths: FieldStrengths) -> Self {
        let mut s = self.clone();
        s.profile.strengths = strengths;
        s
    }
}

/// Resolved parameters echoed into every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub tool_version: String,
    pub method: String,
    pub initial: String,
    pub j: f64,
    pub alpha: f64,
    pub beta: f64,
    pub train: String,
    /// Events as "time:sign" strings, in order.
    pub events: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    pub t0: f64,
    pub t1: f64,
    /// Output sample spacing.
    pub dt_sample: f64,
    /// Inner integration step, when the method integrates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt_integration: Option<f64>,
    pub health_warnings: usize,
}

impl RunMetadata {
    fn for_scenario(scenario: &Scenario, dt_integration: Option<f64>) -> Self {
        let (events, tau) = match &scenario.profile.train {
            Train::Free => (Vec::new(), None),
            Train::Kicks(train) => (
                train.events().iter().map(|ev| format_event(ev.time, ev.sign)).collect(),
                None,
            ),
            Train::Pulses(train) => (
                train.events().iter().map(|ev| format_event(ev.time, ev.sign)).collect(),
                Some(train.tau()),
            ),
        };
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            method: scenario.method.name().to_string(),
            initial: scenario.initial_name.clone(),
            j: scenario.coupling.j,
            alpha: scenario.profile.strengths.alpha,
            beta: scenario.profile.strengths.beta,
            train: scenario.profile.train.kind_name().to_string(),
            events,
            tau,
            t0: scenario.grid.t0,
            t1: scenario.grid.t1,
            dt_sample: scenario.grid.dt(),
            dt_integration,
            health_warnings: 0,
        }
    }
}

fn format_event(time: f64, sign: Sign) -> String {
    format!("{}:{}", time, if sign == Sign::Plus { "+" } else { "-" })
}

/// A time series plus its resolved metadata.
#[derive(Debug, Clone, Serialize)]
pub struct TimeseriesRun {
    pub series: ConcurrenceSeries,
    pub meta: RunMetadata,
}

/// Sample times of the output grid.
fn axis_times(grid: &SimGrid) -> Vec<f64> {
    let stride = grid.sample_stride;
    let mut times = Vec::new();
    let mut k = 0;
    while k < grid.steps() {
        times.push(grid.time(k));
        k += stride;
    }
    times.push(grid.t1);
    times
}

/// Step bound for the inner integration grid: resolve the pulse (τ/20) and
/// the exchange dynamics (10⁻³/J).
fn integration_bound(profile: &FieldProfile, coupling: Coupling) -> f64 {
    let pulse = match &profile.train {
        Train::Pulses(train) => train.tau() / 20.0,
        _ => f64::INFINITY,
    };
    let exchange = if coupling.j.abs() > 0.0 { 1e-3 / coupling.j.abs() } else { f64::INFINITY };
    pulse.min(exchange)
}

/// Build the refined grid whose every m-th node lands exactly on the sample
/// grid nodes. Constructed from the exact step count so float division can
/// never shift the alignment by one step.
fn refined_grid(grid: &SimGrid, bound: f64) -> Result<SimGrid, IntegrateError> {
    let m = if bound.is_finite() { (grid.dt() / bound).ceil().max(1.0) as usize } else { 1 };
    SimGrid::from_steps(grid.t0, grid.t1, grid.steps() * m, m * grid.sample_stride)
}

/// The propagator a scenario's method assigns to time `t` (propagator-based
/// methods only).
fn propagator_at(scenario: &Scenario, t: f64) -> Result<BlockPropagator, ExperimentError> {
    match (&scenario.method, &scenario.profile.train) {
        (Method::AnalyticKick, Train::Kicks(train)) => Ok(kick_sequence_propagator(
            train,
            scenario.profile.strengths,
            scenario.coupling,
            t,
        )),
        (Method::AnalyticKick, Train::Free) => {
            Ok(crate::propagators::free_propagator(scenario.coupling, t))
        }
        (Method::NoOrdering, train) => {
            let envelope = integrated_envelope(train, t);
            Ok(no_ordering_propagator(
                scenario.coupling,
                t,
                envelope * scenario.profile.strengths.alpha,
                envelope * scenario.profile.strengths.beta,
            ))
        }
        _ => Err(ExperimentError::MethodTrainMismatch {
            method: scenario.method.name(),
            train: scenario.profile.train.kind_name(),
        }),
    }
}

/// Run a scenario and map the concurrence over its trajectory.
pub fn run_timeseries(scenario: &Scenario) -> Result<TimeseriesRun, ExperimentError> {
    scenario.validate()?;
    match scenario.method {
        Method::AnalyticKick | Method::NoOrdering => {
            let times = axis_times(&scenario.grid);
            let mut values = Vec::with_capacity(times.len());
            let mut warnings = 0;
            for &t in &times {
                let u = propagator_at(scenario, t)?;
                let state = evolve(&scenario.initial, &u)?;
                let a = &state.amps;
                let (c, excursion) =
                    clamp_concurrence(2.0 * (a[0] * a[3] - a[1] * a[2]).norm());
                if excursion {
                    warnings += 1;
                }
                values.push(c);
            }
            let mut meta = RunMetadata::for_scenario(scenario, None);
            meta.health_warnings = warnings;
            Ok(TimeseriesRun { series: ConcurrenceSeries::new(times, values, warnings), meta })
        }
        Method::Rk4Pulse => {
            if let Train::Pulses(train) = &scenario.profile.train {
                if !train.fits_inside(scenario.grid.t0, scenario.grid.t1) {
                    eprintln!(
                        "warning: pulse support extends past the [{}, {}] grid; \
                         integrated strengths will be truncated",
                        scenario.grid.t0, scenario.grid.t1
                    );
                }
            }
            let fine = refined_grid(
                &scenario.grid,
                integration_bound(&scenario.profile, scenario.coupling),
            )?;
            let traj =
                integrate_full(&scenario.profile, scenario.coupling, fine, scenario.initial)?;
            let series = ConcurrenceSeries::from_trajectory(&traj);
            let mut meta = RunMetadata::for_scenario(scenario, Some(fine.dt()));
            meta.health_warnings = series.health_warnings;
            Ok(TimeseriesRun { series, meta })
        }
    }
}

/// A contour sweep: the scenario template is re-run for each α/β ratio
/// (β and everything else fixed), and the concurrence is recorded on the
/// shared time axis.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub scenario: Scenario,
    pub ratio_lo: f64,
    pub ratio_hi: f64,
    pub ratio_points: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        self.scenario.validate()?;
        if self.ratio_points < 2 {
            return Err(ExperimentError::TooFewPoints { points: self.ratio_points });
        }
        if !(self.ratio_lo.is_finite() && self.ratio_hi.is_finite() && self.ratio_lo < self.ratio_hi)
        {
            return Err(ExperimentError::BadRatioRange { lo: self.ratio_lo, hi: self.ratio_hi });
        }
        Ok(())
    }

    pub fn ratios(&self) -> Vec<f64> {
        let n = self.ratio_points;
        (0..n)
            .map(|k| {
                self.ratio_lo + (self.ratio_hi - self.ratio_lo) * k as f64 / (n - 1) as f64
            })
            .collect()
    }
}

/// Row-major concurrence grid: `rows[i][k]` is C at ratio `ratios[i]`,
/// time `times[k]`.
#[derive(Debug, Clone, Serialize)]
pub struct ContourResult {
    pub ratios: Vec<f64>,
    pub times: Vec<f64>,
    pub rows: Vec<Vec<f64>>,
    pub meta: RunMetadata,
}

fn sweep_pool() -> Result<rayon::ThreadPool, rayon::ThreadPoolBuildError> {
    let threads = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new().num_threads(threads).build()
}

/// Evaluate one sweep row: the scenario at a fixed α/β ratio, sampled on the
/// shared time axis.
fn contour_row(spec: &SweepSpec, ratio: f64) -> Result<Vec<f64>, ExperimentError> {
    let beta = spec.scenario.profile.strengths.beta;
    let strengths = FieldStrengths::new(ratio * beta, beta)?;
    let scenario = spec.scenario.with_strengths(strengths);
    Ok(run_timeseries(&scenario)?.series.values)
}

/// Run the sweep. Rows are independent tasks; results are gathered by index
/// so the output never depends on scheduling.
pub fn run_contour(spec: &SweepSpec) -> Result<ContourResult, ExperimentError> {
    spec.validate()?;
    let ratios = spec.ratios();
    let times = axis_times(&spec.scenario.grid);
    let pool = sweep_pool().expect("thread pool construction");
    let rows: Vec<Result<Vec<f64>, ExperimentError>> = pool.install(|| {
        ratios
            .par_iter()
            .enumerate()
            .map(|(row, &ratio)| {
                contour_row(spec, ratio).map_err(|e| ExperimentError::Cell {
                    row,
                    ratio,
                    source: Box::new(e),
                })
            })
            .collect()
    });
    let mut grid_rows = Vec::with_capacity(ratios.len());
    for row in rows {
        grid_rows.push(row?);
    }
    let meta = RunMetadata::for_scenario(&spec.scenario, None);
    Ok(ContourResult { ratios, times, rows: grid_rows, meta })
}

/// Ordering-nullity conditions detected on a comparison's inputs.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NullityFlags {
    /// α = β: both qubits see the same field, ordering effect vanishes.
    pub equal_strengths: bool,
    /// J = 0: decoupled qubits, ordering effect vanishes.
    pub zero_coupling: bool,
}

/// Side-by-side concurrence of several methods on one scenario.
///
/// The first variant is the reference; per-time absolute concurrence
/// differences and (for propagator-based pairs) propagator max-norm
/// differences are reported against it.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub times: Vec<f64>,
    pub methods: Vec<String>,
    /// One concurrence column per method, aligned with `times`.
    pub series: Vec<Vec<f64>>,
    /// |C_ref − C_variant| per time, one column per non-reference variant.
    pub concurrence_diff: Vec<Vec<f64>>,
    pub max_concurrence_diff: Vec<f64>,
    /// Per-time max-norm of U_ref − U_variant when both methods are
    /// propagator-based (None when the reference integrates numerically).
    pub propagator_diff: Vec<Option<Vec<f64>>>,
    pub max_propagator_diff: Vec<Option<f64>>,
    pub nullity: NullityFlags,
    pub meta: RunMetadata,
}

/// Run the scenario once per variant method and difference the results.
/// All variants share the initial state, profile, coupling, and grid.
pub fn compare_methods(
    scenario: &Scenario,
    variants: &[Method],
) -> Result<ComparisonReport, ExperimentError> {
    if variants.len() < 2 {
        return Err(ExperimentError::TooFewVariants);
    }
    let mut runs = Vec::with_capacity(variants.len());
    for &method in variants {
        let mut s = scenario.clone();
        s.method = method;
        runs.push(run_timeseries(&s)?);
    }
    let times = runs[0].series.times.clone();
    let reference = runs[0].series.values.clone();

    let mut series = Vec::with_capacity(runs.len());
    for run in &runs {
        series.push(run.series.values.clone());
    }

    let mut concurrence_diff = Vec::new();
    let mut max_concurrence_diff = Vec::new();
    let mut propagator_diff = Vec::new();
    let mut max_propagator_diff = Vec::new();
    for (idx, run) in runs.iter().enumerate().skip(1) {
        let diff: Vec<f64> = reference
            .iter()
            .zip(run.series.values.iter())
            .map(|(a, b)| (a - b).abs())
            .collect();
        max_concurrence_diff.push(diff.iter().copied().fold(0.0, f64::max));
        concurrence_diff.push(diff);

        let ref_method = variants[0];
        let var_method = variants[idx];
        let both_propagators = ref_method != Method::Rk4Pulse && var_method != Method::Rk4Pulse;
        if both_propagators {
            let mut s_ref = scenario.clone();
            s_ref.method = ref_method;
            let mut s_var = scenario.clone();
            s_var.method = var_method;
            let mut col = Vec::with_capacity(times.len());
            for &t in &times {
                let u_ref = propagator_at(&s_ref, t)?;
                let u_var = propagator_at(&s_var, t)?;
                col.push(u_ref.max_norm_diff(&u_var));
            }
            max_propagator_diff.push(Some(col.iter().copied().fold(0.0, f64::max)));
            propagator_diff.push(Some(col));
        } else {
            max_propagator_diff.push(None);
            propagator_diff.push(None);
        }
    }

    let strengths = scenario.profile.strengths;
    Ok(ComparisonReport {
        times,
        methods: variants.iter().map(|m| m.name().to_string()).collect(),
        series,
        concurrence_diff,
        max_concurrence_diff,
        propagator_diff,
        max_propagator_diff,
        nullity: NullityFlags {
            equal_strengths: strengths.delta() == 0.0,
            zero_coupling: scenario.coupling.j == 0.0,
        },
        meta: runs[0].meta.clone(),
    })
}
