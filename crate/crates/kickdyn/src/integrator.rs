//! Fixed-step fourth-order Runge-Kutta evolution of the four-amplitude
//! Schrödinger system for Gaussian pulse trains, plus the reduced
//! two-amplitude sector form.
//!
//! The step is fixed (no adaptivity) so sweeps stay bit-reproducible, and the
//! state is never renormalized mid-run: norm drift is monitored and a run
//! that drifts past tolerance fails instead of silently hiding an integrator
//! bug. Kick trains never reach this module — delta functions are handled
//! analytically by the propagator module.

use thiserror::Error;

use crate::fields::{sample_fields, Coupling, FieldError, FieldProfile, Train};
use crate::qmat::C64;
use crate::tol;

#[derive(Debug, Error)]
pub enum IntegrateError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("grid bounds must satisfy t0 < t1, got [{t0}, {t1}]")]
    BadBounds { t0: f64, t1: f64 },
    #[error("step must be positive and finite, got {dt}")]
    BadStep { dt: f64 },
    #[error("step {dt} too coarse for pulse width {tau}; need dt ≤ τ/20")]
    StepTooCoarse { dt: f64, tau: f64 },
    #[error("state norm {norm} is not 1 within tolerance")]
    NotNormalized { norm: f64 },
    #[error("non-finite amplitude at t = {t}")]
    NonFiniteState { t: f64 },
    #[error("norm drifted to {drift:.3e} at t = {t}, beyond the {limit:.0e} budget")]
    NormDrift { t: f64, drift: f64, limit: f64 },
    #[error("convergence study needs at least 3 halvings, got {levels}")]
    TooFewLevels { levels: usize },
}

/// Two-qubit pure state: amplitudes (a1, a2, a3, a4) over
/// (|11⟩, |10⟩, |01⟩, |00⟩).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub amps: [C64; 4],
}

impl StateVector {
    pub fn from_amps(amps: [C64; 4]) -> Self {
        Self { amps }
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.amps.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }

    /// Largest amplitude magnitude outside the middle parity sector.
    pub fn outer_sector_weight(&self) -> f64 {
        self.amps[0].norm().max(self.amps[3].norm())
    }

    fn basis(index: usize) -> Self {
        let mut amps = [C64::new(0.0, 0.0); 4];
        amps[index] = C64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn ket_11() -> Self {
        Self::basis(0)
    }

    pub fn ket_10() -> Self {
        Self::basis(1)
    }

    pub fn ket_01() -> Self {
        Self::basis(2)
    }

    pub fn ket_00() -> Self {
        Self::basis(3)
    }

    /// (|10⟩ + |01⟩)/√2
    pub fn bell_psi_plus() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::from_amps([C64::new(0.0, 0.0), h, h, C64::new(0.0, 0.0)])
    }

    /// (|10⟩ − |01⟩)/√2
    pub fn bell_psi_minus() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::from_amps([C64::new(0.0, 0.0), h, -h, C64::new(0.0, 0.0)])
    }

    /// (|11⟩ + |00⟩)/√2
    pub fn bell_phi_plus() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::from_amps([h, C64::new(0.0, 0.0), C64::new(0.0, 0.0), h])
    }

    /// (|11⟩ − |00⟩)/√2
    pub fn bell_phi_minus() -> Self {
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::from_amps([h, C64::new(0.0, 0.0), C64::new(0.0, 0.0), -h])
    }

    /// Look up one of the named initial states.
    pub fn named(name: &str) -> Option<Self> {
        match name {
            "11" => Some(Self::ket_11()),
            "10" => Some(Self::ket_10()),
            "01" => Some(Self::ket_01()),
            "00" => Some(Self::ket_00()),
            "psi+" | "bell" => Some(Self::bell_psi_plus()),
            "psi-" => Some(Self::bell_psi_minus()),
            "phi+" => Some(Self::bell_phi_plus()),
            "phi-" => Some(Self::bell_phi_minus()),
            _ => None,
        }
    }

    pub fn named_states() -> &'static [&'static str] {
        &["11", "10", "01", "00", "psi+", "psi-", "phi+", "phi-"]
    }
}

/// Uniform time grid. The requested step is adjusted down so that an integer
/// number of steps covers [t0, t1] exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimGrid {
    pub t0: f64,
    pub t1: f64,
    dt: f64,
    steps: usize,
    pub sample_stride: usize,
}

impl SimGrid {
    pub fn new(t0: f64, t1: f64, dt_request: f64, sample_stride: usize) -> Result<Self, IntegrateError> {
        if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
            return Err(IntegrateError::BadBounds { t0, t1 });
        }
        if !(dt_request.is_finite() && dt_request > 0.0) {
            return Err(IntegrateError::BadStep { dt: dt_request });
        }
        let span = t1 - t0;
        let steps = (span / dt_request).ceil().max(1.0) as usize;
        Ok(Self {
            t0,
            t1,
            dt: span / steps as f64,
            steps,
            sample_stride: sample_stride.max(1),
        })
    }

    /// Grid with an exact step count; avoids the float division in `new`
    /// when the caller already knows how many steps it wants.
    pub(crate) fn from_steps(
        t0: f64,
        t1: f64,
        steps: usize,
        sample_stride: usize,
    ) -> Result<Self, IntegrateError> {
        if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
            return Err(IntegrateError::BadBounds { t0, t1 });
        }
        if steps == 0 {
            return Err(IntegrateError::BadStep { dt: f64::NAN });
        }
        Ok(Self {
            t0,
            t1,
            dt: (t1 - t0) / steps as f64,
            steps,
            sample_stride: sample_stride.max(1),
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Time of grid node `k`.
    pub fn time(&self, k: usize) -> f64 {
        if k == self.steps {
            self.t1
        } else {
            self.t0 + k as f64 * self.dt
        }
    }

    fn check_pulse_resolution(&self, profile: &FieldProfile) -> Result<(), IntegrateError> {
        if let Train::Pulses(train) = &profile.train {
            if self.dt > train.tau() / 20.0 + 1e-15 {
                return Err(IntegrateError::StepTooCoarse { dt: self.dt, tau: train.tau() });
            }
        }
        Ok(())
    }
}

/// Sampled states along an integration, with the inputs that produced them.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub profile: FieldProfile,
    pub coupling: Coupling,
    pub grid: SimGrid,
    /// Largest |Σ|aᵢ|² − 1| observed over the run.
    pub max_norm_drift: f64,
}

impl Trajectory {
    pub fn final_state(&self) -> StateVector {
        *self.states.last().expect("trajectory has at least the initial state")
    }
}

fn schrodinger_rhs(profile: &FieldProfile, coupling: Coupling, t: f64, s: &StateVector)
    -> Result<StateVector, FieldError>
{
    let sample = sample_fields(profile, t)?;
    let j = coupling.j;
    let minus_i = C64::new(0.0, -1.0);
    let a = s.amps;
    let h11 = j - sample.b_total();
    let h22 = -j + sample.delta_b();
    let h33 = -j - sample.delta_b();
    let h44 = j + sample.b_total();
    let off = 2.0 * j;
    Ok(StateVector::from_amps([
        minus_i * (h11 * a[0]),
        minus_i * (h22 * a[1] + off * a[2]),
        minus_i * (off * a[1] + h33 * a[2]),
        minus_i * (h44 * a[3]),
    ]))
}

fn add_scaled(s: &StateVector, k: &StateVector, c: f64) -> StateVector {
    let mut out = *s;
    for (o, ki) in out.amps.iter_mut().zip(k.amps.iter()) {
        *o += ki * c;
    }
    out
}

/// One classic four-stage step of da/dt = −iH(t)a, with the Hamiltonian
/// sampled at t, t + dt/2, and t + dt.
pub fn rk4_step(
    profile: &FieldProfile,
    coupling: Coupling,
    state: &StateVector,
    t: f64,
    dt: f64,
) -> Result<StateVector, IntegrateError> {
    let k1 = schrodinger_rhs(profile, coupling, t, state)?;
    let k2 = schrodinger_rhs(profile, coupling, t + dt / 2.0, &add_scaled(state, &k1, dt / 2.0))?;
    let k3 = schrodinger_rhs(profile, coupling, t + dt / 2.0, &add_scaled(state, &k2, dt / 2.0))?;
    let k4 = schrodinger_rhs(profile, coupling, t + dt, &add_scaled(state, &k3, dt))?;
    let mut out = *state;
    for i in 0..4 {
        out.amps[i] += (k1.amps[i] + 2.0 * k2.amps[i] + 2.0 * k3.amps[i] + k4.amps[i]) * (dt / 6.0);
    }
    if !out.is_finite() {
        return Err(IntegrateError::NonFiniteState { t });
    }
    Ok(out)
}

fn record_sample(
    traj: &mut Trajectory,
    k: usize,
    steps: usize,
    stride: usize,
    t: f64,
    state: StateVector,
) {
    if k % stride == 0 || k == steps {
        traj.times.push(t);
        traj.states.push(state);
    }
}

/// Integrate the full four-amplitude system over the grid. Norm drift beyond
/// the crate budget fails the run.
pub fn integrate_full(
    profile: &FieldProfile,
    coupling: Coupling,
    grid: SimGrid,
    state0: StateVector,
) -> Result<Trajectory, IntegrateError> {
    integrate_full_with_budget(profile, coupling, grid, state0, tol::NORM_DRIFT)
}

/// As [`integrate_full`] but with an explicit drift budget. The convergence
/// study runs deliberately coarse steps whose drift is the measurement, so it
/// monitors instead of enforcing.
fn integrate_full_with_budget(
    profile: &FieldProfile,
    coupling: Coupling,
    grid: SimGrid,
    state0: StateVector,
    drift_budget: f64,
) -> Result<Trajectory, IntegrateError> {
    let norm = state0.norm();
    if (norm - 1.0).abs() > tol::STATE_NORM {
        return Err(IntegrateError::NotNormalized { norm });
    }
    grid.check_pulse_resolution(profile)?;

    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        profile: profile.clone(),
        coupling,
        grid,
        max_norm_drift: 0.0,
    };
    let mut state = state0;
    record_sample(&mut traj, 0, grid.steps(), grid.sample_stride, grid.t0, state);
    for k in 0..grid.steps() {
        let t = grid.time(k);
        state = rk4_step(profile, coupling, &state, t, grid.dt())?;
        let drift = (state.norm_sq() - 1.0).abs();
        traj.max_norm_drift = traj.max_norm_drift.max(drift);
        if drift > drift_budget {
            return Err(IntegrateError::NormDrift {
                t: grid.time(k + 1),
                drift,
                limit: drift_budget,
            });
        }
        record_sample(&mut traj, k + 1, grid.steps(), grid.sample_stride, grid.time(k + 1), state);
    }
    Ok(traj)
}

/// Integrate the reduced sector system for a state in span{|10⟩, |01⟩}:
/// i·ȧ2 = (−J + ΔB(t))a2 + 2J·a3 and its a3 partner, embedded back into a
/// four-amplitude state with a1 = a4 = 0 exactly.
pub fn integrate_sector(
    profile: &FieldProfile,
    coupling: Coupling,
    grid: SimGrid,
    a2_0: C64,
    a3_0: C64,
) -> Result<Trajectory, IntegrateError> {
    let norm = (a2_0.norm_sqr() + a3_0.norm_sqr()).sqrt();
    if (norm - 1.0).abs() > tol::STATE_NORM {
        return Err(IntegrateError::NotNormalized { norm });
    }
    grid.check_pulse_resolution(profile)?;

    let j = coupling.j;
    let minus_i = C64::new(0.0, -1.0);
    let rhs = |t: f64, a2: C64, a3: C64| -> Result<(C64, C64), FieldError> {
        let db = sample_fields(profile, t)?.delta_b();
        Ok((
            minus_i * ((-j + db) * a2 + 2.0 * j * a3),
            minus_i * (2.0 * j * a2 + (-j - db) * a3),
        ))
    };

    let mut traj = Trajectory {
        times: Vec::new(),
        states: Vec::new(),
        profile: profile.clone(),
        coupling,
        grid,
        max_norm_drift: 0.0,
    };
    let zero = C64::new(0.0, 0.0);
    let embed = |a2: C64, a3: C64| StateVector::from_amps([zero, a2, a3, zero]);
    let (mut a2, mut a3) = (a2_0, a3_0);
    record_sample(&mut traj, 0, grid.steps(), grid.sample_stride, grid.t0, embed(a2, a3));
    let dt = grid.dt();
    for k in 0..grid.steps() {
        let t = grid.time(k);
        let (k1a, k1b) = rhs(t, a2, a3)?;
        let (k2a, k2b) = rhs(t + dt / 2.0, a2 + k1a * (dt / 2.0), a3 + k1b * (dt / 2.0))?;
        let (k3a, k3b) = rhs(t + dt / 2.0, a2 + k2a * (dt / 2.0), a3 + k2b * (dt / 2.0))?;
        let (k4a, k4b) = rhs(t + dt, a2 + k3a * dt, a3 + k3b * dt)?;
        a2 += (k1a + 2.0 * k2a + 2.0 * k3a + k4a) * (dt / 6.0);
        a3 += (k1b + 2.0 * k2b + 2.0 * k3b + k4b) * (dt / 6.0);
        if !(a2.re.is_finite() && a2.im.is_finite() && a3.re.is_finite() && a3.im.is_finite()) {
            return Err(IntegrateError::NonFiniteState { t });
        }
        let drift = (a2.norm_sqr() + a3.norm_sqr() - 1.0).abs();
        traj.max_norm_drift = traj.max_norm_drift.max(drift);
        if drift > tol::NORM_DRIFT {
            return Err(IntegrateError::NormDrift {
                t: grid.time(k + 1),
                drift,
                limit: tol::NORM_DRIFT,
            });
        }
        record_sample(&mut traj, k + 1, grid.steps(), grid.sample_stride, grid.time(k + 1), embed(a2, a3));
    }
    Ok(traj)
}

/// One row of a step-refinement study.
#[derive(Debug, Clone, Copy)]
pub struct ConvergenceRow {
    pub dt: f64,
    pub error: f64,
}

#[derive(Debug, Clone)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of log2(error) against the halving index.
    pub fitted_order: f64,
}

impl ConvergenceStudy {
    /// error(dt) / error(dt/2) for successive rows.
    pub fn halving_ratios(&self) -> Vec<f64> {
        self.rows
            .windows(2)
            .map(|pair| pair[0].error / pair[1].error)
            .collect()
    }
}

/// Measure the integrator's order: run the same problem at dt, dt/2, ...,
/// dt/2^(levels−1), compare end states against a reference computed at one
/// further halving (Richardson-style), and fit the order.
pub fn convergence_study(
    profile: &FieldProfile,
    coupling: Coupling,
    grid: SimGrid,
    state0: StateVector,
    levels: usize,
) -> Result<ConvergenceStudy, IntegrateError> {
    if levels < 3 {
        return Err(IntegrateError::TooFewLevels { levels });
    }
    let run = |dt: f64| -> Result<StateVector, IntegrateError> {
        let g = SimGrid::new(grid.t0, grid.t1, dt, usize::MAX)?;
        // Coarse levels legitimately drift; the drift is what we measure.
        Ok(integrate_full_with_budget(profile, coupling, g, state0, f64::INFINITY)?.final_state())
    };
    let reference = run(grid.dt() / (1 << levels) as f64)?;
    let mut rows = Vec::with_capacity(levels);
    for level in 0..levels {
        let dt = grid.dt() / (1 << level) as f64;
        let end = run(dt)?;
        let error = end
            .amps
            .iter()
            .zip(reference.amps.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        rows.push(ConvergenceRow { dt, error });
    }

    // Least-squares fit of log2(error) = c − p·level.
    let n = rows.len() as f64;
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (level, row) in rows.iter().enumerate() {
        let x = level as f64;
        let y = row.error.max(1e-300).log2();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    Ok(ConvergenceStudy { rows, fitted_order: -slope })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FieldStrengths, PulseTrain, Sign};
    use crate::propagators::{evolve, free_propagator};

    fn free_profile() -> FieldProfile {
        FieldProfile::free()
    }

    fn pulse_profile(alpha: f64, beta: f64, centers: &[(f64, Sign)], tau: f64) -> FieldProfile {
        FieldProfile::new(
            FieldStrengths::new(alpha, beta).unwrap(),
            Train::Pulses(PulseTrain::from_pairs(centers, tau).unwrap()),
        )
    }

    #[test]
    fn zero_hamiltonian_leaves_state_fixed() {
        let s = StateVector::bell_psi_plus();
        let out = rk4_step(&free_profile(), Coupling::new(0.0).unwrap(), &s, 0.0, 0.01).unwrap();
        for (a, b) in out.amps.iter().zip(s.amps.iter()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn single_step_matches_exact_free_propagator_at_order_five() {
        let j = Coupling::new(1.0).unwrap();
        let s = StateVector::ket_01();
        let mut prev_err = f64::INFINITY;
        for &dt in &[0.02, 0.01, 0.005] {
            let stepped = rk4_step(&free_profile(), j, &s, 0.0, dt).unwrap();
            let exact = evolve(&s, &free_propagator(j, dt)).unwrap();
            let err: f64 = stepped
                .amps
                .iter()
                .zip(exact.amps.iter())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            // Local error O(dt^5): halving dt should shrink it ~32x.
            assert!(err < prev_err / 20.0, "dt={dt}: err={err}, prev={prev_err}");
            prev_err = err;
        }
    }

    #[test]
    fn norm_drift_is_tiny_per_step() {
        let j = Coupling::new(1.0).unwrap();
        let mut s = StateVector::ket_01();
        for k in 0..100 {
            s = rk4_step(&free_profile(), j, &s, k as f64 * 1e-3, 1e-3).unwrap();
        }
        assert!((s.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phase_only_evolution_of_outer_states() {
        let profile = pulse_profile(2.0, 1.0, &[(5.0, Sign::Plus)], 0.2);
        let grid = SimGrid::new(0.0, 10.0, 0.005, 50).unwrap();
        let traj =
            integrate_full(&profile, Coupling::new(1.0).unwrap(), grid, StateVector::ket_11())
                .unwrap();
        for s in &traj.states {
            assert!((s.amps[0].norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn sector_matches_full_system() {
        let profile = pulse_profile(2.0, 1.0, &[(5.0, Sign::Plus)], 0.2);
        let j = Coupling::new(1.0).unwrap();
        let grid = SimGrid::new(0.0, 10.0, 0.005, 100).unwrap();
        let full = integrate_full(&profile, j, grid, StateVector::ket_01()).unwrap();
        let sector =
            integrate_sector(&profile, j, grid, C64::new(0.0, 0.0), C64::new(1.0, 0.0)).unwrap();
        assert_eq!(full.times.len(), sector.times.len());
        for (a, b) in full.states.iter().zip(sector.states.iter()) {
            let diff: f64 = a
                .amps
                .iter()
                .zip(b.amps.iter())
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(diff < 1e-10);
            // The diagonal outer rows cannot be excited from the sector.
            assert!(a.outer_sector_weight() < 1e-14);
        }
    }

    #[test]
    fn outer_bell_state_keeps_unit_concurrence() {
        // (|11⟩+|00⟩)/√2 evolves by pure phases on a1 and a4, so
        // C = 2|a1·a4| stays exactly 1 whatever the drive does.
        let profile = pulse_profile(2.0, 1.0, &[(5.0, Sign::Plus)], 0.2);
        let grid = SimGrid::new(0.0, 10.0, 0.005, 100).unwrap();
        let traj = integrate_full(
            &profile,
            Coupling::new(1.0).unwrap(),
            grid,
            StateVector::bell_phi_plus(),
        )
        .unwrap();
        // C = 2|a1||a4| inherits exactly the integrator's norm drift.
        let budget = 2.0 * traj.max_norm_drift + 1e-12;
        for s in &traj.states {
            let c = 2.0 * (s.amps[0] * s.amps[3] - s.amps[1] * s.amps[2]).norm();
            assert!((c - 1.0).abs() < budget);
        }
    }

    #[test]
    fn sector_with_equal_strengths_follows_free_laws() {
        // α = β removes the ΔB term entirely: |01⟩ gives C = |sin 4Jt| and
        // the Bell state stays maximally entangled through the pulses.
        let profile = pulse_profile(1.5, 1.5, &[(5.0, Sign::Plus), (10.0, Sign::Plus)], 0.2);
        let j = Coupling::new(1.0).unwrap();
        let grid = SimGrid::new(0.0, 14.0, 0.001, 100).unwrap();

        let sep = integrate_sector(&profile, j, grid, C64::new(0.0, 0.0), C64::new(1.0, 0.0))
            .unwrap();
        for (t, s) in sep.times.iter().zip(sep.states.iter()) {
            let c = 2.0 * (s.amps[1] * s.amps[2]).norm();
            assert!((c - (4.0 * t).sin().abs()).abs() < 1e-8, "t = {t}");
        }

        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let bell = integrate_sector(&profile, j, grid, h, h).unwrap();
        for s in &bell.states {
            let c = 2.0 * (s.amps[1] * s.amps[2]).norm();
            assert!((c - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn sector_stays_exactly_inside_sector() {
        let profile = pulse_profile(3.0, 1.0, &[(5.0, Sign::Plus), (10.0, Sign::Minus)], 0.15);
        let j = Coupling::new(1.0).unwrap();
        let grid = SimGrid::new(0.0, 15.0, 0.005, 100).unwrap();
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let traj = integrate_sector(&profile, j, grid, h, h).unwrap();
        for s in &traj.states {
            assert_eq!(s.outer_sector_weight(), 0.0);
        }
    }

    #[test]
    fn grid_adjusts_step_down_to_fit() {
        let g = SimGrid::new(0.0, 1.0, 0.3, 1).unwrap();
        assert_eq!(g.steps(), 4);
        assert!(g.dt() <= 0.3);
        assert!((g.steps() as f64 * g.dt() - 1.0).abs() < 1e-15);
        assert_eq!(g.time(g.steps()), 1.0);
    }

    #[test]
    fn pulse_grid_requires_fine_step() {
        let profile = pulse_profile(2.0, 1.0, &[(5.0, Sign::Plus)], 0.05);
        let grid = SimGrid::new(0.0, 10.0, 0.02, 1).unwrap();
        assert!(matches!(
            integrate_full(&profile, Coupling::new(1.0).unwrap(), grid, StateVector::ket_01()),
            Err(IntegrateError::StepTooCoarse { .. })
        ));
    }

    #[test]
    fn convergence_study_measures_fourth_order_on_free_evolution() {
        let grid = SimGrid::new(0.0, 2.0, 0.05, 1).unwrap();
        let study = convergence_study(
            &free_profile(),
            Coupling::new(1.0).unwrap(),
            grid,
            StateVector::ket_01(),
            4,
        )
        .unwrap();
        assert!(
            study.fitted_order > 3.7 && study.fitted_order < 4.3,
            "fitted order {}",
            study.fitted_order
        );
        for r in study.halving_ratios() {
            assert!(r > 12.0 && r < 20.0, "ratio {r}");
        }
    }
}
