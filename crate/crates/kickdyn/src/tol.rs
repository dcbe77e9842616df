//! Central table of numerical tolerances.
//!
//! Everything in this crate is dimensionless (ħ = 1, times measured in 1/J
//! units in practice), so all tolerances are absolute.

/// Max-norm bound on U†U − I for any propagator produced by this crate.
pub const UNITARITY: f64 = 1e-12;

/// |y| and |y1| must be unit phases to this accuracy.
pub const PHASE_UNIT: f64 = 1e-13;

/// u² + v² + w² + z² = 1 for the middle block of every propagator.
pub const BLOCK_NORM: f64 = 1e-12;

/// Elementwise agreement between closed-form parameter sets and the
/// composed kick-sequence propagator.
pub const CLOSED_FORM_MATCH: f64 = 1e-12;

/// Max-norm of the ordering effect U_kick − U_no_ordering when it must
/// vanish (equal strengths on both qubits, or zero coupling).
pub const ORDERING_NULLITY: f64 = 1e-12;

/// Agreement between the post-kick concurrence closed forms and the
/// evolve-then-measure pipeline.
pub const PIPELINE_MATCH: f64 = 1e-10;

/// Agreement between the R-matrix concurrence oracle and the pure-state
/// formula on pure states.
pub const WOOTTERS_MATCH: f64 = 1e-8;

/// Norm a state vector must carry before it is accepted for evolution.
pub const STATE_NORM: f64 = 1e-10;

/// Looser norm bound used where integration drift is expected.
pub const STATE_NORM_LOOSE: f64 = 1e-8;

/// Allowed drift of Σ|aᵢ|² over a full numerical integration; exceeding
/// this fails the run rather than triggering renormalization.
pub const NORM_DRIFT: f64 = 1e-8;

/// Leakage bound for the |11⟩/|00⟩ amplitudes when integrating a state
/// that starts in the middle parity sector.
pub const SECTOR_LEAK: f64 = 1e-14;

/// Residual bound |p(λ)| (scaled) accepted from the quartic root solver.
pub const EIGEN_RESIDUAL: f64 = 1e-8;

/// Negative eigenvalue magnitude clamped to zero before the square roots
/// in the concurrence definition.
pub const EIGEN_CLAMP: f64 = 1e-10;

/// Eigenvalues of a density-matrix construction below this are rejected
/// as an invalid density matrix rather than clamped.
pub const DENSITY_FLOOR: f64 = -1e-8;

/// Concurrence values may exceed 1 by at most this before the clamp is
/// reported as a numerical-health warning.
pub const CONCURRENCE_EXCURSION: f64 = 1e-9;
