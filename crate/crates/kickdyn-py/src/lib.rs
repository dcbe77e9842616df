//! Python bindings for the kickdyn library: block propagators, concurrence
//! measures, and time-series runs for kick and Gaussian-pulse drives.
//!
//! States are plain lists of four complex amplitudes over the basis
//! (|11⟩, |10⟩, |01⟩, |00⟩); kick/pulse events are (time, sign) tuples with
//! sign ±1.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use kickdyn::entanglement;
use kickdyn::experiments::{run_timeseries, Method, Scenario};
use kickdyn::fields::{
    Coupling, FieldProfile, FieldStrengths, KickTrain, PulseTrain, Sign, Train,
};
use kickdyn::integrator::{integrate_full, SimGrid, StateVector};
use kickdyn::propagators;
use kickdyn::qmat::{unitarity_defect, Matrix4};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn state_from_vec(amps: Vec<Complex64>) -> PyResult<StateVector> {
    let arr: [Complex64; 4] = amps
        .try_into()
        .map_err(|_| PyValueError::new_err("state must have exactly 4 amplitudes"))?;
    Ok(StateVector::from_amps(arr))
}

fn state_to_vec(state: &StateVector) -> Vec<Complex64> {
    state.amps.to_vec()
}

fn signed_events(events: Vec<(f64, i32)>) -> PyResult<Vec<(f64, Sign)>> {
    events
        .into_iter()
        .map(|(t, s)| match s {
            1 => Ok((t, Sign::Plus)),
            -1 => Ok((t, Sign::Minus)),
            other => Err(PyValueError::new_err(format!("event sign must be +1 or -1, got {other}"))),
        })
        .collect()
}

fn kick_train(events: Vec<(f64, i32)>) -> PyResult<KickTrain> {
    KickTrain::from_pairs(&signed_events(events)?).map_err(value_err)
}

fn strengths(alpha: f64, beta: f64) -> PyResult<FieldStrengths> {
    FieldStrengths::new(alpha, beta).map_err(value_err)
}

fn coupling(j: f64) -> PyResult<Coupling> {
    Coupling::new(j).map_err(value_err)
}

fn matrix_rows(m: &Matrix4) -> Vec<Vec<Complex64>> {
    m.0.iter().map(|row| row.to_vec()).collect()
}

/// Parity-block propagator in the (y, y1, u, v, w, z) parameterization.
#[pyclass(name = "Propagator", skip_from_py_object)]
#[derive(Clone)]
struct PyPropagator {
    inner: propagators::BlockPropagator,
}

#[pymethods]
impl PyPropagator {
    /// The six block parameters as (y, y1, u, v, w, z).
    fn params(&self) -> (Complex64, Complex64, f64, f64, f64, f64) {
        let p = &self.inner;
        (p.y, p.y1, p.u, p.v, p.w, p.z)
    }

    /// The realized 4×4 matrix as nested lists.
    fn matrix(&self) -> Vec<Vec<Complex64>> {
        matrix_rows(&self.inner.matrix())
    }

    /// Matrix product self · earlier (self acts later in time).
    fn compose(&self, earlier: &PyPropagator) -> PyPropagator {
        PyPropagator { inner: self.inner.compose(&earlier.inner) }
    }

    /// Max-norm of U†U − I.
    fn unitarity_defect(&self) -> PyResult<f64> {
        unitarity_defect(&self.inner.matrix()).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        let p = &self.inner;
        format!(
            "Propagator(y={:?}, y1={:?}, u={}, v={}, w={}, z={})",
            p.y, p.y1, p.u, p.v, p.w, p.z
        )
    }
}

/// Free-evolution propagator exp(−iH₀t).
#[pyfunction]
fn free_propagator(j: f64, t: f64) -> PyResult<PyPropagator> {
    Ok(PyPropagator { inner: propagators::free_propagator(coupling(j)?, t) })
}

/// Instantaneous kick unitary with integrated strengths (α, β) and sign ±1.
#[pyfunction]
fn kick_unitary(alpha: f64, beta: f64, sign: i32) -> PyResult<PyPropagator> {
    let sign = match sign {
        1 => Sign::Plus,
        -1 => Sign::Minus,
        other => return Err(PyValueError::new_err(format!("sign must be +1 or -1, got {other}"))),
    };
    Ok(PyPropagator { inner: propagators::kick_unitary(strengths(alpha, beta)?, sign) })
}

/// No-time-ordering propagator built from accumulated strengths (ᾱ, β̄).
#[pyfunction]
fn no_ordering_propagator(j: f64, t: f64, alpha_bar: f64, beta_bar: f64) -> PyResult<PyPropagator> {
    Ok(PyPropagator {
        inner: propagators::no_ordering_propagator(coupling(j)?, t, alpha_bar, beta_bar),
    })
}

/// Exact time-ordered propagator for a kick train at time t.
/// Events are (time, ±1) tuples with strictly increasing times.
#[pyfunction]
fn kick_sequence_propagator(
    events: Vec<(f64, i32)>,
    alpha: f64,
    beta: f64,
    j: f64,
    t: f64,
) -> PyResult<PyPropagator> {
    Ok(PyPropagator {
        inner: propagators::kick_sequence_propagator(
            &kick_train(events)?,
            strengths(alpha, beta)?,
            coupling(j)?,
            t,
        ),
    })
}

/// The explicit closed-form parameter sets for the supported train shapes
/// (+, +−, ++, +++, ++++), at a time past the last kick.
#[pyfunction]
fn closed_form_kick_params(
    events: Vec<(f64, i32)>,
    alpha: f64,
    beta: f64,
    j: f64,
    t: f64,
) -> PyResult<PyPropagator> {
    propagators::closed_form_kick_params(
        &kick_train(events)?,
        strengths(alpha, beta)?,
        coupling(j)?,
        t,
    )
    .map(|inner| PyPropagator { inner })
    .map_err(value_err)
}

/// Apply a propagator to a normalized 4-amplitude state.
#[pyfunction]
fn evolve(state: Vec<Complex64>, propagator: &PyPropagator) -> PyResult<Vec<Complex64>> {
    let out = propagators::evolve(&state_from_vec(state)?, &propagator.inner).map_err(value_err)?;
    Ok(state_to_vec(&out))
}

/// Pure-state concurrence C = max{0, 2|a1·a4 − a2·a3|}.
#[pyfunction]
fn concurrence_pure(state: Vec<Complex64>) -> PyResult<f64> {
    entanglement::concurrence_pure(&state_from_vec(state)?).map_err(value_err)
}

/// Wootters concurrence of a 4×4 density matrix via the R-matrix spectrum.
#[pyfunction]
fn wootters_concurrence(rho: Vec<Vec<Complex64>>) -> PyResult<f64> {
    if rho.len() != 4 || rho.iter().any(|row| row.len() != 4) {
        return Err(PyValueError::new_err("density matrix must be 4×4"));
    }
    let mut m = Matrix4::zero();
    for (r, row) in rho.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            m.0[r][c] = *e;
        }
    }
    let dm = entanglement::DensityMatrix::from_matrix(m).map_err(value_err)?;
    entanglement::wootters_concurrence(&dm).map_err(value_err)
}

/// Post-kick concurrence closed form for the (|10⟩+|01⟩)/√2 initial state.
#[pyfunction]
fn bell_kick_concurrence(delta: f64, j: f64, t: f64, t1: f64) -> PyResult<f64> {
    Ok(entanglement::bell_kick_concurrence(delta, coupling(j)?, t, t1))
}

/// Post-kick concurrence closed form for the |01⟩ initial state.
#[pyfunction]
fn separable_kick_concurrence(delta: f64, j: f64, t: f64, t1: f64) -> PyResult<f64> {
    Ok(entanglement::separable_kick_concurrence(delta, coupling(j)?, t, t1))
}

/// One of the named states: 01, 10, 11, 00, psi+, psi-, phi+, phi- (bell).
#[pyfunction]
fn named_state(name: &str) -> PyResult<Vec<Complex64>> {
    StateVector::named(name)
        .map(|s| state_to_vec(&s))
        .ok_or_else(|| PyValueError::new_err(format!("unknown state '{name}'")))
}

fn scenario(
    initial: &str,
    profile: FieldProfile,
    method: Method,
    j: f64,
    t_max: f64,
    dt: f64,
) -> PyResult<Scenario> {
    let state = StateVector::named(initial)
        .ok_or_else(|| PyValueError::new_err(format!("unknown state '{initial}'")))?;
    Ok(Scenario {
        initial: state,
        initial_name: initial.to_string(),
        profile,
        coupling: coupling(j)?,
        grid: SimGrid::new(0.0, t_max, dt, 1).map_err(value_err)?,
        method,
    })
}

/// Concurrence time series for a kick train (analytic propagators).
/// Returns (times, concurrences).
#[pyfunction]
#[pyo3(signature = (initial, events, alpha, beta, j=1.0, t_max=25.0, dt=0.01))]
fn timeseries_kicks(
    initial: &str,
    events: Vec<(f64, i32)>,
    alpha: f64,
    beta: f64,
    j: f64,
    t_max: f64,
    dt: f64,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let train = if events.is_empty() {
        Train::Free
    } else {
        Train::Kicks(kick_train(events)?)
    };
    let profile = FieldProfile::new(strengths(alpha, beta)?, train);
    let run = run_timeseries(&scenario(initial, profile, Method::AnalyticKick, j, t_max, dt)?)
        .map_err(value_err)?;
    Ok((run.series.times, run.series.values))
}

/// Concurrence time series for a Gaussian pulse train (RK4 integration).
/// Returns (times, concurrences).
#[pyfunction]
#[pyo3(signature = (initial, events, tau, alpha, beta, j=1.0, t_max=25.0, dt=0.01))]
#[allow(clippy::too_many_arguments)]
fn timeseries_pulses(
    initial: &str,
    events: Vec<(f64, i32)>,
    tau: f64,
    alpha: f64,
    beta: f64,
    j: f64,
    t_max: f64,
    dt: f64,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let train = Train::Pulses(PulseTrain::from_pairs(&signed_events(events)?, tau).map_err(value_err)?);
    let profile = FieldProfile::new(strengths(alpha, beta)?, train);
    let run = run_timeseries(&scenario(initial, profile, Method::Rk4Pulse, j, t_max, dt)?)
        .map_err(value_err)?;
    Ok((run.series.times, run.series.values))
}

/// Concurrence time series in the no-time-ordering limit for a kick train.
#[pyfunction]
#[pyo3(signature = (initial, events, alpha, beta, j=1.0, t_max=25.0, dt=0.01))]
fn timeseries_no_ordering(
    initial: &str,
    events: Vec<(f64, i32)>,
    alpha: f64,
    beta: f64,
    j: f64,
    t_max: f64,
    dt: f64,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let train = if events.is_empty() {
        Train::Free
    } else {
        Train::Kicks(kick_train(events)?)
    };
    let profile = FieldProfile::new(strengths(alpha, beta)?, train);
    let run = run_timeseries(&scenario(initial, profile, Method::NoOrdering, j, t_max, dt)?)
        .map_err(value_err)?;
    Ok((run.series.times, run.series.values))
}

/// Full numerical evolution of an arbitrary normalized state under a pulse
/// train. Returns (times, states) with each state a 4-amplitude list.
#[pyfunction]
#[pyo3(signature = (state, events, tau, alpha, beta, j=1.0, t0=0.0, t1=25.0, dt=0.001))]
#[allow(clippy::too_many_arguments)]
fn integrate_pulses(
    state: Vec<Complex64>,
    events: Vec<(f64, i32)>,
    tau: f64,
    alpha: f64,
    beta: f64,
    j: f64,
    t0: f64,
    t1: f64,
    dt: f64,
) -> PyResult<(Vec<f64>, Vec<Vec<Complex64>>)> {
    let train = Train::Pulses(PulseTrain::from_pairs(&signed_events(events)?, tau).map_err(value_err)?);
    let profile = FieldProfile::new(strengths(alpha, beta)?, train);
    let grid = SimGrid::new(t0, t1, dt, 1).map_err(value_err)?;
    let traj = integrate_full(&profile, coupling(j)?, grid, state_from_vec(state)?)
        .map_err(value_err)?;
    Ok((traj.times, traj.states.iter().map(state_to_vec).collect()))
}

#[pymodule]
fn kickdyn_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPropagator>()?;
    m.add_function(wrap_pyfunction!(free_propagator, m)?)?;
    m.add_function(wrap_pyfunction!(kick_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(no_ordering_propagator, m)?)?;
    m.add_function(wrap_pyfunction!(kick_sequence_propagator, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_kick_params, m)?)?;
    m.add_function(wrap_pyfunction!(evolve, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence_pure, m)?)?;
    m.add_function(wrap_pyfunction!(wootters_concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(bell_kick_concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(separable_kick_concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(named_state, m)?)?;
    m.add_function(wrap_pyfunction!(timeseries_kicks, m)?)?;
    m.add_function(wrap_pyfunction!(timeseries_pulses, m)?)?;
    m.add_function(wrap_pyfunction!(timeseries_no_ordering, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_pulses, m)?)?;
    Ok(())
}
