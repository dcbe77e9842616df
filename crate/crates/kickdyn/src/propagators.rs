//! Closed-form propagators for kick-driven evolution.
//!
//! Everything in scope is block-structured over the parity sectors
//! span{|11⟩, |00⟩} and span{|10⟩, |01⟩} and is represented by six
//! parameters: two unit phases (y, y1) and four real middle-block
//! parameters (u, v, w, z) with u² + v² + w² + z² = 1. The realized matrix is
//!
//! ```text
//! [ y1·y*          0            0       0      ]
//! [ 0         y(u+iv)      y(−w+iz)     0      ]
//! [ 0         y(w+iz)      y(u−iv)      0      ]
//! [ 0              0            0   y1*·y*     ]
//! ```
//!
//! The middle block is y·(uI + i(zσx − wσy + vσz)), so sequencing propagators
//! reduces to a quaternion-style product on (u, z, −w, v) together with plain
//! phase multiplication. That keeps compositions exactly block-sparse and
//! unitary to round-off, with no 4×4 matrix arithmetic on the hot path.
//!
//! The explicit parameter sets for one positive kick, a positive-negative
//! pair, two/three/four positive kicks, and the no-time-ordering limit are
//! provided as independently checkable alternatives to the generic composer.

use thiserror::Error;

use crate::fields::{Coupling, FieldStrengths, KickTrain, Sign};
use crate::integrator::StateVector;
use crate::qmat::{Matrix4, C64};
use crate::tol;

#[derive(Debug, Error)]
pub enum PropagatorError {
    #[error(
        "kick train shape {found} is not one of the closed forms \
         (+, +−, ++, +++, ++++); use kick_sequence_propagator"
    )]
    UnsupportedShape { found: String },
    #[error("closed-form parameters require t past the last kick: t = {t}, last kick at {last}")]
    TimeBeforeLastKick { t: f64, last: f64 },
    #[error("state norm {norm} deviates from 1 beyond tolerance")]
    NotNormalized { norm: f64 },
}

fn phase(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Scratch quantities entering the parameter sets: Γ = √(4J²t² + (ᾱ−β̄)²)
/// for the no-ordering exponential, and one ζᵢ = 2J(t − 2Tᵢ) per kick.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagatorDerivation {
    pub gamma: f64,
    pub zetas: Vec<f64>,
}

impl PropagatorDerivation {
    /// Γ from the coupling, elapsed time, and accumulated strengths; always
    /// at least |ᾱ − β̄|.
    pub fn no_ordering(coupling: Coupling, t: f64, alpha_bar: f64, beta_bar: f64) -> Self {
        Self {
            gamma: (2.0 * coupling.j * t).hypot(alpha_bar - beta_bar),
            zetas: Vec::new(),
        }
    }

    /// The per-kick ζᵢ for a train evaluated at time t.
    pub fn kick_phases(coupling: Coupling, t: f64, kick_times: &[f64]) -> Self {
        Self {
            gamma: (2.0 * coupling.j * t).abs(),
            zetas: kick_times.iter().map(|ti| 2.0 * coupling.j * (t - 2.0 * ti)).collect(),
        }
    }
}

/// Parity-block propagator in the (y, y1, u, v, w, z) parameterization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockPropagator {
    pub y: C64,
    pub y1: C64,
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub z: f64,
}

impl BlockPropagator {
    pub fn new(y: C64, y1: C64, u: f64, v: f64, w: f64, z: f64) -> Self {
        Self { y, y1, u, v, w, z }
    }

    pub fn identity() -> Self {
        Self::new(C64::new(1.0, 0.0), C64::new(1.0, 0.0), 1.0, 0.0, 0.0, 0.0)
    }

    /// How far the parameters drift off their invariants: unit phases and a
    /// normalized middle block.
    pub fn invariant_defect(&self) -> f64 {
        let phases = (self.y.norm() - 1.0).abs().max((self.y1.norm() - 1.0).abs());
        let block =
            (self.u * self.u + self.v * self.v + self.w * self.w + self.z * self.z - 1.0).abs();
        phases.max(block)
    }

    pub fn check_invariants(&self) -> bool {
        (self.y.norm() - 1.0).abs() <= tol::PHASE_UNIT
            && (self.y1.norm() - 1.0).abs() <= tol::PHASE_UNIT
            && (self.u * self.u + self.v * self.v + self.w * self.w + self.z * self.z - 1.0).abs()
                <= tol::BLOCK_NORM
    }

    /// Realize the full 4×4 matrix. Entries outside the parity blocks are
    /// exactly zero.
    pub fn matrix(&self) -> Matrix4 {
        let mut m = Matrix4::zero();
        m.0[0][0] = self.y1 * self.y.conj();
        m.0[3][3] = self.y1.conj() * self.y.conj();
        m.0[1][1] = self.y * C64::new(self.u, self.v);
        m.0[1][2] = self.y * C64::new(-self.w, self.z);
        m.0[2][1] = self.y * C64::new(self.w, self.z);
        m.0[2][2] = self.y * C64::new(self.u, -self.v);
        m
    }

    /// Matrix product `self · earlier`, staying in block parameters.
    ///
    /// With the middle block written as uI + i(p·σ), p = (z, −w, v), the
    /// product follows (aI + i a·σ)(bI + i b·σ)
    /// = (ab − a·b)I + i(a b + b a − a×b)·σ.
    pub fn compose(&self, earlier: &Self) -> Self {
        let (a, ax, ay, az) = (self.u, self.z, -self.w, self.v);
        let (b, bx, by, bz) = (earlier.u, earlier.z, -earlier.w, earlier.v);
        let s = a * b - (ax * bx + ay * by + az * bz);
        let px = a * bx + b * ax - (ay * bz - az * by);
        let py = a * by + b * ay - (az * bx - ax * bz);
        let pz = a * bz + b * az - (ax * by - ay * bx);
        Self {
            y: self.y * earlier.y,
            y1: self.y1 * earlier.y1,
            u: s,
            v: pz,
            w: -py,
            z: px,
        }
    }

    /// Elementwise max-norm difference of the realized matrices.
    pub fn max_norm_diff(&self, other: &Self) -> f64 {
        self.matrix().sub(&other.matrix()).max_norm()
    }
}

/// exp(−iH₀t): corners e^(−iJt), middle block
/// e^(iJt)·[[cos2Jt, −i sin2Jt], [−i sin2Jt, cos2Jt]].
pub fn free_propagator(coupling: Coupling, t: f64) -> BlockPropagator {
    let arg = 2.0 * coupling.j * t;
    BlockPropagator::new(
        phase(coupling.j * t),
        C64::new(1.0, 0.0),
        arg.cos(),
        0.0,
        0.0,
        -arg.sin(),
    )
}

/// The instantaneous kick unitary
/// diag(e^(is(α+β)), e^(isΔ), e^(−isΔ), e^(−is(α+β))), Δ = α − β.
pub fn kick_unitary(strengths: FieldStrengths, sign: Sign) -> BlockPropagator {
    let s = sign.factor();
    let delta = s * strengths.delta();
    BlockPropagator::new(
        C64::new(1.0, 0.0),
        phase(s * strengths.sigma()),
        delta.cos(),
        delta.sin(),
        0.0,
        0.0,
    )
}

/// The no-time-ordering propagator: the exponential of the time-averaged
/// Hamiltonian with accumulated strengths (ᾱ, β̄).
///
/// Parameters: y = e^(iJt), y1 = e^(i(ᾱ+β̄)), u = cosΓ, v = (ᾱ−β̄)sinΓ/Γ,
/// w = 0, z = −2Jt·sinΓ/Γ, with Γ = √(4J²t² + (ᾱ−β̄)²). The Γ → 0 degeneracy
/// is the removable sinΓ/Γ → 1 limit.
pub fn no_ordering_propagator(
    coupling: Coupling,
    t: f64,
    alpha_bar: f64,
    beta_bar: f64,
) -> BlockPropagator {
    let two_jt = 2.0 * coupling.j * t;
    let diff = alpha_bar - beta_bar;
    let gamma = PropagatorDerivation::no_ordering(coupling, t, alpha_bar, beta_bar).gamma;
    let sinc = if gamma < 1e-300 { 1.0 } else { gamma.sin() / gamma };
    BlockPropagator::new(
        phase(coupling.j * t),
        phase(alpha_bar + beta_bar),
        gamma.cos(),
        diff * sinc,
        0.0,
        -two_jt * sinc,
    )
}

/// Exact time-ordered propagator for a kick train at time `t`: free segments
/// interleaved with kick unitaries, composed latest-left. Only events with
/// T ≤ t are applied (the kick at exactly t is included; U(t) is
/// right-continuous).
pub fn kick_sequence_propagator(
    train: &KickTrain,
    strengths: FieldStrengths,
    coupling: Coupling,
    t: f64,
) -> BlockPropagator {
    let mut acc = BlockPropagator::identity();
    let mut prev = 0.0;
    for ev in train.events().iter().take_while(|ev| ev.time <= t) {
        acc = kick_unitary(strengths, ev.sign)
            .compose(&free_propagator(coupling, ev.time - prev))
            .compose(&acc);
        prev = ev.time;
    }
    free_propagator(coupling, t - prev).compose(&acc)
}

fn signs_of(train: &KickTrain) -> Vec<Sign> {
    train.events().iter().map(|ev| ev.sign).collect()
}

/// The explicit closed-form parameter sets for the five supported train
/// shapes, evaluated at a time past the last kick.
///
/// These formulas are artifacts under test in their own right: they are kept
/// separate from the generic composer precisely so the two routes can be
/// cross-checked against each other.
pub fn closed_form_kick_params(
    train: &KickTrain,
    strengths: FieldStrengths,
    coupling: Coupling,
    t: f64,
) -> Result<BlockPropagator, PropagatorError> {
    let events = train.events();
    let last = events.last().map(|ev| ev.time).unwrap_or(0.0);
    let shape_error = || PropagatorError::UnsupportedShape {
        found: events
            .iter()
            .map(|ev| match ev.sign {
                Sign::Plus => '+',
                Sign::Minus => '-',
            })
            .collect(),
    };

    let signs = signs_of(train);
    let supported = matches!(
        signs.as_slice(),
        [Sign::Plus]
            | [Sign::Plus, Sign::Minus]
            | [Sign::Plus, Sign::Plus]
            | [Sign::Plus, Sign::Plus, Sign::Plus]
            | [Sign::Plus, Sign::Plus, Sign::Plus, Sign::Plus]
    );
    if !supported {
        return Err(shape_error());
    }
    if t < last {
        return Err(PropagatorError::TimeBeforeLastKick { t, last });
    }

    let j = coupling.j;
    let delta = strengths.delta();
    let sigma = strengths.sigma();
    let two_jt = 2.0 * j * t;
    let times: Vec<f64> = events.iter().map(|ev| ev.time).collect();
    let zeta = PropagatorDerivation::kick_phases(coupling, t, &times).zetas;
    let (sd, cd) = delta.sin_cos();
    let y = phase(j * t);

    let (y1, u, v, w, z) = match signs.as_slice() {
        [Sign::Plus] => (
            phase(sigma),
            two_jt.cos() * cd,
            zeta[0].cos() * sd,
            zeta[0].sin() * sd,
            -two_jt.sin() * cd,
        ),
        [Sign::Plus, second] => {
            let ts = train.pair_separation().expect("two-event train");
            let shifted = 2.0 * j * (t - 2.0 * ts);
            match second {
                Sign::Minus => (
                    C64::new(1.0, 0.0),
                    two_jt.cos() * cd * cd + shifted.cos() * sd * sd,
                    (zeta[0].cos() - zeta[1].cos()) * sd * cd,
                    (zeta[0].sin() - zeta[1].sin()) * sd * cd,
                    -two_jt.sin() * cd * cd - shifted.sin() * sd * sd,
                ),
                Sign::Plus => (
                    phase(2.0 * sigma),
                    two_jt.cos() * cd * cd - shifted.cos() * sd * sd,
                    (zeta[0].cos() + zeta[1].cos()) * sd * cd,
                    (zeta[0].sin() + zeta[1].sin()) * sd * cd,
                    -two_jt.sin() * cd * cd + shifted.sin() * sd * sd,
                ),
            }
        }
        [Sign::Plus, Sign::Plus, Sign::Plus] => {
            // Pair sum over i<j of trig(2J(t + 2(Tᵢ − Tⱼ))) and the
            // alternating combination T₁ − T₂ + T₃.
            let (mut pair_cos, mut pair_sin) = (0.0, 0.0);
            for i in 0..3 {
                for k in (i + 1)..3 {
                    let arg = 2.0 * j * (t + 2.0 * (times[i] - times[k]));
                    pair_cos += arg.cos();
                    pair_sin += arg.sin();
                }
            }
            let zeta_cos: f64 = zeta.iter().map(|x| x.cos()).sum();
            let zeta_sin: f64 = zeta.iter().map(|x| x.sin()).sum();
            let alt = 2.0 * j * (t - 2.0 * (times[0] - times[1] + times[2]));
            (
                phase(3.0 * sigma),
                two_jt.cos() * cd.powi(3) - pair_cos * cd * sd * sd,
                zeta_cos * sd * cd * cd - alt.cos() * sd.powi(3),
                zeta_sin * sd * cd * cd - alt.sin() * sd.powi(3),
                -two_jt.sin() * cd.powi(3) + pair_sin * cd * sd * sd,
            )
        }
        [Sign::Plus, Sign::Plus, Sign::Plus, Sign::Plus] => {
            let (mut pair_cos, mut pair_sin) = (0.0, 0.0);
            for i in 0..4 {
                for k in (i + 1)..4 {
                    let arg = 2.0 * j * (t + 2.0 * (times[i] - times[k]));
                    pair_cos += arg.cos();
                    pair_sin += arg.sin();
                }
            }
            let (mut triple_cos, mut triple_sin) = (0.0, 0.0);
            for i in 0..4 {
                for k in (i + 1)..4 {
                    for l in (k + 1)..4 {
                        let arg = 2.0 * j * (t - 2.0 * (times[i] - times[k] + times[l]));
                        triple_cos += arg.cos();
                        triple_sin += arg.sin();
                    }
                }
            }
            let zeta_cos: f64 = zeta.iter().map(|x| x.cos()).sum();
            let zeta_sin: f64 = zeta.iter().map(|x| x.sin()).sum();
            let t1234 = train.alternating_sum().expect("four-event train");
            let alt = 2.0 * j * (t + 2.0 * t1234);
            (
                phase(4.0 * sigma),
                two_jt.cos() * cd.powi(4) - pair_cos * cd * cd * sd * sd
                    + alt.cos() * sd.powi(4),
                zeta_cos * sd * cd.powi(3) - triple_cos * cd * sd.powi(3),
                zeta_sin * sd * cd.powi(3) - triple_sin * cd * sd.powi(3),
                -two_jt.sin() * cd.powi(4) + pair_sin * cd * cd * sd * sd
                    - alt.sin() * sd.powi(4),
            )
        }
        _ => return Err(shape_error()),
    };
    Ok(BlockPropagator::new(y, y1, u, v, w, z))
}

/// Apply a propagator to a state: aᵢ(t) = Σⱼ Uᵢⱼ aⱼ(0).
///
/// The input must be normalized; the output norm matches the input norm to
/// round-off because the propagator is unitary.
pub fn evolve(state: &StateVector, u: &BlockPropagator) -> Result<StateVector, PropagatorError> {
    let norm = state.norm();
    if (norm - 1.0).abs() > tol::STATE_NORM {
        return Err(PropagatorError::NotNormalized { norm });
    }
    let m = u.matrix();
    let a = state.amps;
    Ok(StateVector::from_amps([
        m.0[0][0] * a[0],
        m.0[1][1] * a[1] + m.0[1][2] * a[2],
        m.0[2][1] * a[1] + m.0[2][2] * a[2],
        m.0[3][3] * a[3],
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FieldEvent, FieldProfile, Train};
    use crate::fields::integrated_strengths;
    use crate::qmat::unitarity_defect;

    fn strengths(alpha: f64, beta: f64) -> FieldStrengths {
        FieldStrengths::new(alpha, beta).unwrap()
    }

    fn coupling(j: f64) -> Coupling {
        Coupling::new(j).unwrap()
    }

    #[test]
    fn free_propagator_at_zero_is_identity() {
        let u = free_propagator(coupling(1.7), 0.0);
        assert!(u.max_norm_diff(&BlockPropagator::identity()) < 1e-15);
    }

    #[test]
    fn free_propagator_quarter_period() {
        // J = 1, t = π/4: cos(π/2) = 0, middle block purely off-diagonal.
        let u = free_propagator(coupling(1.0), std::f64::consts::FRAC_PI_4);
        assert!(u.u.abs() < 1e-15);
        assert!((u.z + 1.0).abs() < 1e-15);
        let m = u.matrix();
        let want = C64::new(0.0, -1.0) * phase(std::f64::consts::FRAC_PI_4);
        assert!((m.0[1][2] - want).norm() < 1e-15);
    }

    #[test]
    fn free_propagator_unitarity_grid() {
        for jk in 0..6 {
            for tk in 0..10 {
                let u = free_propagator(coupling(jk as f64 * 0.9), tk as f64 * 2.3);
                assert!(unitarity_defect(&u.matrix()).unwrap() < 1e-13);
            }
        }
    }

    #[test]
    fn kick_unitary_at_multiples_of_pi_is_identity() {
        let u = kick_unitary(strengths(std::f64::consts::PI, std::f64::consts::PI), Sign::Plus);
        assert!(u.max_norm_diff(&BlockPropagator::identity()) < 1e-14);
    }

    #[test]
    fn kick_unitary_inverse_pair() {
        let s = strengths(1.3, -0.4);
        let u = kick_unitary(s, Sign::Plus).compose(&kick_unitary(s, Sign::Minus));
        assert!(u.max_norm_diff(&BlockPropagator::identity()) < 1e-15);
    }

    #[test]
    fn kick_unitary_quarter_swap() {
        let s = strengths(std::f64::consts::FRAC_PI_2, 0.0);
        let u = kick_unitary(s, Sign::Plus);
        assert!(u.u.abs() < 1e-15);
        assert!((u.v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn no_ordering_reduces_to_free_for_equal_strengths() {
        let j = coupling(1.2);
        let t = 7.3;
        let u0 = no_ordering_propagator(j, t, 2.5, 2.5);
        let free = free_propagator(j, t);
        // Equal strengths: Γ = 2Jt, v = 0; outer phases differ by y1.
        assert!(u0.v.abs() < 1e-15);
        assert!((u0.u - free.u).abs() < 1e-13);
        assert!((u0.z - free.z).abs() < 1e-13);
    }

    #[test]
    fn no_ordering_degenerate_limit_is_identity() {
        let u = no_ordering_propagator(coupling(1.0), 0.0, 0.0, 0.0);
        assert!(u.max_norm_diff(&BlockPropagator::identity()) < 1e-15);
    }

    #[test]
    fn derivation_gamma_dominates_strength_difference() {
        for k in 0..50 {
            let x = k as f64 * 0.37;
            let d = PropagatorDerivation::no_ordering(coupling(0.2 * x), 1.3 * x, 4.0 - x, -x);
            assert!(d.gamma >= ((4.0 - x) - (-x)).abs() - 1e-15);
        }
        let d = PropagatorDerivation::kick_phases(coupling(1.5), 12.0, &[3.0, 7.0]);
        assert_eq!(d.zetas.len(), 2);
        assert!((d.zetas[0] - 2.0 * 1.5 * (12.0 - 6.0)).abs() < 1e-15);
        assert!((d.zetas[1] - 2.0 * 1.5 * (12.0 - 14.0)).abs() < 1e-15);
    }

    #[test]
    fn block_normalization_identity_holds() {
        // u² + v² + w² + z² = 1 for the no-ordering parameter set.
        for k in 0..40 {
            let x = k as f64;
            let u = no_ordering_propagator(
                coupling(0.3 + 0.1 * x),
                0.7 * x,
                3.0 - 0.4 * x,
                -1.0 + 0.3 * x,
            );
            assert!(u.invariant_defect() < 1e-12);
        }
    }

    #[test]
    fn sequence_before_first_kick_is_free() {
        let train = KickTrain::from_pairs(&[(5.0, Sign::Plus)]).unwrap();
        let u = kick_sequence_propagator(&train, strengths(2.0, 1.0), coupling(1.0), 3.0);
        assert!(u.max_norm_diff(&free_propagator(coupling(1.0), 3.0)) < 1e-14);
    }

    #[test]
    fn sequence_matches_no_ordering_for_equal_strengths() {
        let train =
            KickTrain::from_pairs(&[(4.0, Sign::Plus), (9.0, Sign::Minus), (11.0, Sign::Plus)])
                .unwrap();
        let s = strengths(1.8, 1.8);
        let j = coupling(0.9);
        let profile = FieldProfile::new(s, Train::Kicks(train.clone()));
        for &t in &[2.0, 4.0, 6.5, 9.0, 10.0, 14.0] {
            let (ab, bb) = integrated_strengths(&profile, t);
            let uk = kick_sequence_propagator(&train, s, j, t);
            let u0 = no_ordering_propagator(j, t, ab, bb);
            assert!(uk.max_norm_diff(&u0) < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn closed_forms_match_composition_on_all_shapes() {
        let shapes: [&[Sign]; 5] = [
            &[Sign::Plus],
            &[Sign::Plus, Sign::Minus],
            &[Sign::Plus, Sign::Plus],
            &[Sign::Plus, Sign::Plus, Sign::Plus],
            &[Sign::Plus, Sign::Plus, Sign::Plus, Sign::Plus],
        ];
        let s = strengths(2.4, -0.7);
        let j = coupling(1.6);
        for signs in shapes {
            let events: Vec<FieldEvent> = signs
                .iter()
                .enumerate()
                .map(|(i, &sign)| FieldEvent { time: 3.0 + 4.0 * i as f64, sign })
                .collect();
            let train = KickTrain::new(events).unwrap();
            let t = 3.0 + 4.0 * signs.len() as f64 + 2.5;
            let closed = closed_form_kick_params(&train, s, j, t).unwrap();
            let composed = kick_sequence_propagator(&train, s, j, t);
            assert!(
                closed.max_norm_diff(&composed) < 1e-12,
                "shape {:?}: diff {}",
                signs,
                closed.max_norm_diff(&composed)
            );
        }
    }

    #[test]
    fn closed_form_single_kick_with_zero_delta_is_free_up_to_phase() {
        let train = KickTrain::from_pairs(&[(5.0, Sign::Plus)]).unwrap();
        let u = closed_form_kick_params(&train, strengths(1.5, 1.5), coupling(1.0), 8.0).unwrap();
        let f = free_propagator(coupling(1.0), 8.0);
        assert!((u.u - f.u).abs() < 1e-14);
        assert!(u.v.abs() < 1e-14);
        assert!(u.w.abs() < 1e-14);
        assert!((u.z - f.z).abs() < 1e-14);
    }

    #[test]
    fn closed_form_rejects_unsupported_shapes() {
        let train = KickTrain::from_pairs(&[(5.0, Sign::Minus)]).unwrap();
        assert!(matches!(
            closed_form_kick_params(&train, strengths(2.0, 1.0), coupling(1.0), 8.0),
            Err(PropagatorError::UnsupportedShape { .. })
        ));
        let train = KickTrain::from_pairs(&[(5.0, Sign::Plus), (9.0, Sign::Plus)]).unwrap();
        assert!(matches!(
            closed_form_kick_params(&train, strengths(2.0, 1.0), coupling(1.0), 7.0),
            Err(PropagatorError::TimeBeforeLastKick { .. })
        ));
    }

    #[test]
    fn evolve_keeps_parity_sectors_separate() {
        let train =
            KickTrain::from_pairs(&[(5.0, Sign::Plus), (10.0, Sign::Minus)]).unwrap();
        let u = kick_sequence_propagator(&train, strengths(3.0, 1.0), coupling(1.0), 12.0);
        let out = evolve(&StateVector::bell_psi_plus(), &u).unwrap();
        assert_eq!(out.amps[0], C64::new(0.0, 0.0));
        assert_eq!(out.amps[3], C64::new(0.0, 0.0));
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evolve_free_matches_hand_solution() {
        // |01⟩ under free evolution: a2 = −i e^{iJt} sin2Jt, a3 = e^{iJt} cos2Jt.
        let j = coupling(1.0);
        for &t in &[0.3, 1.1, 2.9] {
            let out = evolve(&StateVector::ket_01(), &free_propagator(j, t)).unwrap();
            let expect_a2 = C64::new(0.0, -1.0) * phase(t) * (2.0 * t).sin();
            let expect_a3 = phase(t) * (2.0 * t).cos();
            assert!((out.amps[1] - expect_a2).norm() < 1e-14);
            assert!((out.amps[2] - expect_a3).norm() < 1e-14);
        }
    }

    #[test]
    fn evolve_rejects_denormalized_states() {
        let bad = StateVector::from_amps([
            C64::new(0.5, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
        ]);
        assert!(matches!(
            evolve(&bad, &BlockPropagator::identity()),
            Err(PropagatorError::NotNormalized { .. })
        ));
    }
}
