//! Concurrence measures for the qubit pair.
//!
//! The pure-state formula C = max{0, 2|a1a4 − a2a3|} is the primary path (it
//! reduces to 2|a2a3| and 2|a1a4| on the parity sectors); the Wootters
//! R-matrix construction is kept as an independent oracle so the fast path
//! has something to be checked against, and as the hook for any future
//! mixed-state use. Closed-form post-kick concurrences for the Bell and
//! separable initial states round out the module.

use serde::Serialize;
use thiserror::Error;

use crate::fields::Coupling;
use crate::integrator::{StateVector, Trajectory};
use crate::qmat::{eigenvalues4, Matrix2, Matrix4, QmatError, C64};
use crate::tol;

#[derive(Debug, Error)]
pub enum EntanglementError {
    #[error("state norm {norm} is not 1 within tolerance")]
    NotNormalized { norm: f64 },
    #[error("density matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("density matrix trace {trace} is not 1")]
    BadTrace { trace: f64 },
    #[error("density matrix has eigenvalue {eigenvalue:.3e} below the positivity floor")]
    NotPositive { eigenvalue: f64 },
    #[error(transparent)]
    Eigen(#[from] QmatError),
}

/// 4×4 Hermitian, unit-trace, positive-semidefinite density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    rho: Matrix4,
}

impl DensityMatrix {
    /// Validate and wrap an explicit matrix.
    pub fn from_matrix(rho: Matrix4) -> Result<Self, EntanglementError> {
        let defect = rho.hermiticity_defect();
        if defect > 1e-12 {
            return Err(EntanglementError::NotHermitian { defect });
        }
        let trace = rho.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(EntanglementError::BadTrace { trace: trace.re });
        }
        let eigen = eigenvalues4(&rho)?;
        for value in eigen {
            if value.re < -1e-10 {
                return Err(EntanglementError::NotPositive { eigenvalue: value.re });
            }
        }
        Ok(Self { rho })
    }

    /// ρ = |ψ⟩⟨ψ| for a normalized pure state.
    pub fn from_pure(state: &StateVector) -> Result<Self, EntanglementError> {
        let norm = state.norm();
        if (norm - 1.0).abs() > tol::STATE_NORM_LOOSE {
            return Err(EntanglementError::NotNormalized { norm });
        }
        let mut rho = Matrix4::zero();
        for r in 0..4 {
            for c in 0..4 {
                rho.0[r][c] = state.amps[r] * state.amps[c].conj();
            }
        }
        Ok(Self { rho })
    }

    pub fn maximally_mixed() -> Self {
        Self { rho: Matrix4::identity().scale(C64::new(0.25, 0.0)) }
    }

    pub fn matrix(&self) -> &Matrix4 {
        &self.rho
    }
}

/// Clamp a raw concurrence into [0, 1], reporting whether the excursion above
/// 1 exceeded the numerical-health budget.
pub fn clamp_concurrence(raw: f64) -> (f64, bool) {
    let excursion = raw > 1.0 + tol::CONCURRENCE_EXCURSION;
    (raw.clamp(0.0, 1.0), excursion)
}

/// Pure-state concurrence C = max{0, 2|a1a4 − a2a3|}.
pub fn concurrence_pure(state: &StateVector) -> Result<f64, EntanglementError> {
    let norm = state.norm();
    if (norm - 1.0).abs() > tol::STATE_NORM_LOOSE {
        return Err(EntanglementError::NotNormalized { norm });
    }
    let a = &state.amps;
    let raw = 2.0 * (a[0] * a[3] - a[1] * a[2]).norm();
    Ok(clamp_concurrence(raw).0)
}

/// Wootters concurrence via R = ρ(σy⊗σy)ρ*(σy⊗σy).
///
/// The four eigenvalues of R are non-negative in exact arithmetic; round-off
/// negatives within the clamp budget are zeroed before the square roots, and
/// anything more negative rejects the input as an invalid density matrix.
/// Returns max{0, λ1 − λ2 − λ3 − λ4} over the sorted square roots.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<f64, EntanglementError> {
    let (c, _) = wootters_concurrence_with_roots(rho)?;
    Ok(c)
}

/// Same as [`wootters_concurrence`] but also returns the sorted λ values,
/// for diagnostic series.
pub fn wootters_concurrence_with_roots(
    rho: &DensityMatrix,
) -> Result<(f64, [f64; 4]), EntanglementError> {
    let yy = Matrix2::pauli_y().kron(&Matrix2::pauli_y());
    let r = rho.rho.mul(&yy).mul(&rho.rho.conj()).mul(&yy);
    let eigen = eigenvalues4(&r)?;
    let mut lambdas = [0.0f64; 4];
    for (slot, value) in lambdas.iter_mut().zip(eigen.iter()) {
        let re = value.re;
        if re < tol::DENSITY_FLOOR {
            return Err(EntanglementError::NotPositive { eigenvalue: re });
        }
        // Round-off negatives below the clamp threshold go to zero; small
        // imaginary parts are an artifact of the general-matrix solver.
        *slot = if re < tol::EIGEN_CLAMP { 0.0 } else { re }.sqrt();
    }
    lambdas.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    let c = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
    Ok((clamp_concurrence(c).0, lambdas))
}

/// Post-kick concurrence of the (|10⟩+|01⟩)/√2 initial state after a single
/// positive kick at `t1`: C = |cos²Δ + e^(8iJ(t−T1))·sin²Δ|, valid for t > t1.
///
/// Evaluated as √(1 − sin²2Δ·sin²(4J(t−T1))), the same quantity with the
/// cos⁴ + sin⁴ cancellation already performed; this keeps the C = 1 lines at
/// Δ = kπ/2 exact instead of round-off close. Range is [|cos 2Δ|, 1].
pub fn bell_kick_concurrence(delta: f64, coupling: Coupling, t: f64, t1: f64) -> f64 {
    let s2d = (2.0 * delta).sin();
    let osc = (4.0 * coupling.j * (t - t1)).sin();
    clamp_concurrence((1.0 - s2d * s2d * osc * osc).max(0.0).sqrt()).0
}

/// The complex intermediate of the separable-state closed form:
/// Λ = (cos2Jt·cosΔ − i·cosζ·sinΔ)(i·cosΔ·sin2Jt + sinζ·sinΔ), ζ = 2J(t−2T1).
pub fn separable_kick_intermediate(delta: f64, coupling: Coupling, t: f64, t1: f64) -> C64 {
    let (sd, cd) = delta.sin_cos();
    let two_jt = 2.0 * coupling.j * t;
    let zeta = 2.0 * coupling.j * (t - 2.0 * t1);
    let first = C64::new(two_jt.cos() * cd, -zeta.cos() * sd);
    let second = C64::new(zeta.sin() * sd, cd * two_jt.sin());
    first * second
}

/// Post-kick concurrence of the |01⟩ initial state after a single positive
/// kick at `t1`: C = 2·max{0, |Λ|}.
pub fn separable_kick_concurrence(delta: f64, coupling: Coupling, t: f64, t1: f64) -> f64 {
    clamp_concurrence(2.0 * separable_kick_intermediate(delta, coupling, t, t1).norm()).0
}

/// Concurrence trajectory: sampled (t, C) values plus optional diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct ConcurrenceSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Sorted λ1..λ4 per point when the series was produced by the R-matrix
    /// oracle.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambdas: Option<Vec<[f64; 4]>>,
    /// Per-point (Re Λ, Im Λ) when the series came from the separable-state
    /// closed form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separable_intermediate: Option<Vec<(f64, f64)>>,
    /// Number of points whose raw concurrence exceeded 1 beyond the
    /// numerical-health budget before clamping.
    pub health_warnings: usize,
}

impl ConcurrenceSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>, health_warnings: usize) -> Self {
        Self { times, values, lambdas: None, separable_intermediate: None, health_warnings }
    }

    /// Evaluate the separable-state closed form over `times` (single positive
    /// kick at `t1`), keeping the Λ intermediates. Times at or before the
    /// kick fall back to the free law the form reduces to.
    pub fn from_separable_closed_form(
        delta: f64,
        coupling: Coupling,
        t1: f64,
        times: Vec<f64>,
    ) -> Self {
        let mut values = Vec::with_capacity(times.len());
        let mut intermediates = Vec::with_capacity(times.len());
        for &t in &times {
            let lambda = if t > t1 {
                separable_kick_intermediate(delta, coupling, t, t1)
            } else {
                separable_kick_intermediate(0.0, coupling, t, t1)
            };
            intermediates.push((lambda.re, lambda.im));
            values.push(clamp_concurrence(2.0 * lambda.norm()).0);
        }
        Self {
            times,
            values,
            lambdas: None,
            separable_intermediate: Some(intermediates),
            health_warnings: 0,
        }
    }

    /// Map the pure-state concurrence over a trajectory.
    pub fn from_trajectory(traj: &Trajectory) -> Self {
        let mut values = Vec::with_capacity(traj.states.len());
        let mut warnings = 0;
        for state in &traj.states {
            let a = &state.amps;
            let raw = 2.0 * (a[0] * a[3] - a[1] * a[2]).norm();
            let (c, excursion) = clamp_concurrence(raw);
            if excursion {
                warnings += 1;
            }
            values.push(c);
        }
        Self::new(traj.times.clone(), values, warnings)
    }

    /// Map the Wootters oracle over a trajectory, keeping the λ spectra.
    pub fn from_trajectory_oracle(traj: &Trajectory) -> Result<Self, EntanglementError> {
        let mut values = Vec::with_capacity(traj.states.len());
        let mut lambdas = Vec::with_capacity(traj.states.len());
        for state in &traj.states {
            let rho = DensityMatrix::from_pure(state)?;
            let (c, roots) = wootters_concurrence_with_roots(&rho)?;
            values.push(c);
            lambdas.push(roots);
        }
        Ok(Self {
            times: traj.times.clone(),
            values,
            lambdas: Some(lambdas),
            separable_intermediate: None,
            health_warnings: 0,
        })
    }
}
