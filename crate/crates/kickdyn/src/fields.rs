//! Driving-field profiles and the time-dependent Hamiltonian they generate.
//!
//! A profile couples per-qubit integrated strengths (α on qubit 1, β on
//! qubit 2) to a train of field events: instantaneous kicks, finite-width
//! Gaussian pulses of a common width τ, or nothing (free evolution). Kick
//! trains have no pointwise field value — a delta function must never reach a
//! numeric integrator — so they are consumed analytically by the propagator
//! module, while pulse trains are samplable and integrable here.

use thiserror::Error;

use crate::qmat::{Matrix4, C64};

/// Gaussian support is treated as ±6τ around each centre for quadrature and
/// field-active logic; the tail mass beyond that is below 1e−15.
pub const PULSE_SUPPORT_WIDTHS: f64 = 6.0;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("event times must be strictly increasing and positive: t[{index}] = {time}")]
    BadEventTime { index: usize, time: f64 },
    #[error("pulse width must be positive, got {tau}")]
    BadPulseWidth { tau: f64 },
    #[error("kick trains have no pointwise field value; use the analytic kick propagators")]
    KickSampling,
    #[error("operation requires a pulse train, got {found}")]
    NotAPulseTrain { found: &'static str },
}

/// Exchange strength J of the qubit-qubit interaction (units of 1/time, ħ=1).
/// J = 0 is allowed; it decouples the qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub j: f64,
}

impl Coupling {
    pub fn new(j: f64) -> Result<Self, FieldError> {
        if !j.is_finite() {
            return Err(FieldError::NonFinite { name: "J", value: j });
        }
        Ok(Self { j })
    }
}

/// Per-event integrated field strengths: α for qubit 1, β for qubit 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldStrengths {
    pub alpha: f64,
    pub beta: f64,
}

impl FieldStrengths {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, FieldError> {
        if !alpha.is_finite() {
            return Err(FieldError::NonFinite { name: "alpha", value: alpha });
        }
        if !beta.is_finite() {
            return Err(FieldError::NonFinite { name: "beta", value: beta });
        }
        Ok(Self { alpha, beta })
    }

    /// α − β, the only strength combination the middle parity block sees.
    pub fn delta(&self) -> f64 {
        self.alpha - self.beta
    }

    /// α + β, which drives the outer-block phases.
    pub fn sigma(&self) -> f64 {
        self.alpha + self.beta
    }
}

/// Sign of a field event; a negative event flips both per-qubit strengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// One field event: the time it acts (kick instant or pulse centre) and its sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldEvent {
    pub time: f64,
    pub sign: Sign,
}

fn check_event_times(events: &[FieldEvent]) -> Result<(), FieldError> {
    let mut prev = 0.0;
    for (index, ev) in events.iter().enumerate() {
        if !ev.time.is_finite() || ev.time <= prev {
            return Err(FieldError::BadEventTime { index, time: ev.time });
        }
        prev = ev.time;
    }
    Ok(())
}

/// An ordered train of instantaneous kicks.
#[derive(Debug, Clone, PartialEq)]
pub struct KickTrain {
    events: Vec<FieldEvent>,
}

impl KickTrain {
    pub fn new(events: Vec<FieldEvent>) -> Result<Self, FieldError> {
        check_event_times(&events)?;
        Ok(Self { events })
    }

    /// Convenience constructor from (time, sign) pairs.
    pub fn from_pairs(pairs: &[(f64, Sign)]) -> Result<Self, FieldError> {
        Self::new(pairs.iter().map(|&(time, sign)| FieldEvent { time, sign }).collect())
    }

    pub fn events(&self) -> &[FieldEvent] {
        &self.events
    }

    /// T₂ − T₁ for two-event trains.
    pub fn pair_separation(&self) -> Option<f64> {
        (self.events.len() == 2).then(|| self.events[1].time - self.events[0].time)
    }

    /// T₁ − T₂ + T₃ − T₄ for four-event trains.
    pub fn alternating_sum(&self) -> Option<f64> {
        (self.events.len() == 4).then(|| {
            self.events[0].time - self.events[1].time + self.events[2].time - self.events[3].time
        })
    }
}

/// An ordered train of Gaussian pulses sharing one width τ.
///
/// Each event contributes `sign · strength/(√π τ) · exp(−(t−T)²/τ²)` to its
/// qubit's field, so the signed time integral of the event is exactly
/// `sign · strength`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseTrain {
    events: Vec<FieldEvent>,
    tau: f64,
}

impl PulseTrain {
    pub fn new(events: Vec<FieldEvent>, tau: f64) -> Result<Self, FieldError> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(FieldError::BadPulseWidth { tau });
        }
        check_event_times(&events)?;
        Ok(Self { events, tau })
    }

    pub fn from_pairs(pairs: &[(f64, Sign)], tau: f64) -> Result<Self, FieldError> {
        Self::new(
            pairs.iter().map(|&(time, sign)| FieldEvent { time, sign }).collect(),
            tau,
        )
    }

    pub fn events(&self) -> &[FieldEvent] {
        &self.events
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// True when every pulse centre sits at least 6τ inside [t0, t1].
    pub fn fits_inside(&self, t0: f64, t1: f64) -> bool {
        self.events.iter().all(|ev| {
            ev.time - PULSE_SUPPORT_WIDTHS * self.tau > t0
                && ev.time + PULSE_SUPPORT_WIDTHS * self.tau < t1
        })
    }

    /// Unit-strength envelope Σₖ signₖ · exp(−(t−Tₖ)²/τ²)/(√π τ).
    pub fn envelope(&self, t: f64) -> f64 {
        let norm = 1.0 / (std::f64::consts::PI.sqrt() * self.tau);
        self.events
            .iter()
            .map(|ev| {
                let x = (t - ev.time) / self.tau;
                ev.sign.factor() * norm * (-x * x).exp()
            })
            .sum()
    }
}

/// What kind of drive a profile carries.
#[derive(Debug, Clone, PartialEq)]
pub enum Train {
    Kicks(KickTrain),
    Pulses(PulseTrain),
    /// No external field: the interaction Hamiltonian is identically zero.
    Free,
}

impl Train {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Train::Kicks(_) => "kick train",
            Train::Pulses(_) => "pulse train",
            Train::Free => "free evolution",
        }
    }
}

/// A complete driving-field description: strengths plus one train.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldProfile {
    pub strengths: FieldStrengths,
    pub train: Train,
}

impl FieldProfile {
    pub fn new(strengths: FieldStrengths, train: Train) -> Self {
        Self { strengths, train }
    }

    pub fn free() -> Self {
        Self {
            strengths: FieldStrengths { alpha: 0.0, beta: 0.0 },
            train: Train::Free,
        }
    }
}

/// Pointwise field values on the two qubits at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub b1: f64,
    pub b2: f64,
}

impl FieldSample {
    /// ΔB(t) = B²(t) − B¹(t), the combination entering the middle block.
    pub fn delta_b(&self) -> f64 {
        self.b2 - self.b1
    }

    /// B_T(t) = B¹(t) + B²(t), the combination entering the outer block.
    pub fn b_total(&self) -> f64 {
        self.b1 + self.b2
    }
}

/// Field values at time `t`. Errors on kick trains, which are not samplable.
pub fn sample_fields(profile: &FieldProfile, t: f64) -> Result<FieldSample, FieldError> {
    match &profile.train {
        Train::Free => Ok(FieldSample { b1: 0.0, b2: 0.0 }),
        Train::Kicks(_) => Err(FieldError::KickSampling),
        Train::Pulses(train) => {
            let envelope = train.envelope(t);
            Ok(FieldSample {
                b1: profile.strengths.alpha * envelope,
                b2: profile.strengths.beta * envelope,
            })
        }
    }
}

/// The 4×4 Hamiltonian at time `t`:
/// diag(J−B_T, −J+ΔB, −J−ΔB, J+B_T) plus the 2J exchange coupling between
/// |10⟩ and |01⟩. Hermitian by construction (real diagonal, real symmetric
/// off-diagonal).
pub fn hamiltonian_at(
    profile: &FieldProfile,
    coupling: Coupling,
    t: f64,
) -> Result<Matrix4, FieldError> {
    let sample = sample_fields(profile, t)?;
    let j = coupling.j;
    let mut h = Matrix4::zero();
    h.0[0][0] = C64::new(j - sample.b_total(), 0.0);
    h.0[1][1] = C64::new(-j + sample.delta_b(), 0.0);
    h.0[2][2] = C64::new(-j - sample.delta_b(), 0.0);
    h.0[3][3] = C64::new(j + sample.b_total(), 0.0);
    h.0[1][2] = C64::new(2.0 * j, 0.0);
    h.0[2][1] = C64::new(2.0 * j, 0.0);
    Ok(h)
}

/// The commutator [H(t2), H(t1)] in closed form.
///
/// Writing D(t) = B¹(t) − B²(t), direct commutation of the Hamiltonian gives
/// [H(t2), H(t1)] = 2iJ·(D(t1) − D(t2))·(σy¹σx² − σx¹σy²), whose only
/// non-zero entries are the imaginary-free ±4J(ΔB(t2) − ΔB(t1)) pair in the
/// middle block. It vanishes whenever both qubits see the same field or the
/// coupling is zero.
pub fn hamiltonian_commutator(
    profile: &FieldProfile,
    coupling: Coupling,
    t1: f64,
    t2: f64,
) -> Result<Matrix4, FieldError> {
    let s1 = sample_fields(profile, t1)?;
    let s2 = sample_fields(profile, t2)?;
    let c = 4.0 * coupling.j * (s2.delta_b() - s1.delta_b());
    let mut m = Matrix4::zero();
    m.0[1][2] = C64::new(c, 0.0);
    m.0[2][1] = C64::new(-c, 0.0);
    Ok(m)
}

/// Leading-order time-ordering correction for a pulse profile at time `t`:
/// −½[H₀, H_int⁰]·∫₀ᵗ (t − 2t′) f(t′) dt′, with f the unit-strength envelope.
///
/// The scalar weight is computed by composite Simpson quadrature over the
/// truncated support of each pulse. The whole term vanishes when the pulse
/// centroid sits at t/2 with a symmetric envelope, when the envelope is
/// constant, and whenever α = β (the commutator factor is zero).
pub fn leading_ordering_term(
    profile: &FieldProfile,
    coupling: Coupling,
    t: f64,
) -> Result<Matrix4, FieldError> {
    let train = match &profile.train {
        Train::Pulses(train) => train,
        other => return Err(FieldError::NotAPulseTrain { found: other.kind_name() }),
    };
    let mut weight = 0.0;
    for ev in train.events() {
        let lo = (ev.time - PULSE_SUPPORT_WIDTHS * train.tau()).max(0.0);
        let hi = (ev.time + PULSE_SUPPORT_WIDTHS * train.tau()).min(t);
        let single = PulseTrain::new(vec![*ev], train.tau()).expect("single event is valid");
        weight += simpson(lo, hi, simpson_step(train.tau(), t), |tp| {
            (t - 2.0 * tp) * single.envelope(tp)
        });
    }
    // −½[H₀, H_int⁰] · weight = −iJ(α−β)·weight·(σy¹σx² − σx¹σy²): the same
    // middle-block structure as the commutator itself.
    let c = -2.0 * coupling.j * profile.strengths.delta() * weight;
    let mut m = Matrix4::zero();
    m.0[1][2] = C64::new(c, 0.0);
    m.0[2][1] = C64::new(-c, 0.0);
    Ok(m)
}

/// ∫₀ᵗ of the unit-strength envelope: the signed number of kicks fired for a
/// kick train, the Simpson-integrated Gaussian sum for a pulse train. Both
/// qubits share this; their accumulated strengths are α and β times it.
pub fn integrated_envelope(train: &Train, t: f64) -> f64 {
    match train {
        Train::Free => 0.0,
        // T ≤ t matches the right-continuous kick convention of the propagators.
        Train::Kicks(train) => train
            .events()
            .iter()
            .filter(|ev| ev.time <= t)
            .map(|ev| ev.sign.factor())
            .sum(),
        Train::Pulses(train) => {
            let mut total = 0.0;
            for ev in train.events() {
                let lo = (ev.time - PULSE_SUPPORT_WIDTHS * train.tau()).max(0.0);
                let hi = (ev.time + PULSE_SUPPORT_WIDTHS * train.tau()).min(t);
                let single = PulseTrain::new(vec![*ev], train.tau()).expect("single event is valid");
                total += simpson(lo, hi, simpson_step(train.tau(), t), |tp| single.envelope(tp));
            }
            total
        }
    }
}

/// Accumulated strengths (ᾱ(t), β̄(t)) = (∫₀ᵗ B¹ dt′, ∫₀ᵗ B² dt′).
pub fn integrated_strengths(profile: &FieldProfile, t: f64) -> (f64, f64) {
    let envelope = integrated_envelope(&profile.train, t);
    (envelope * profile.strengths.alpha, envelope * profile.strengths.beta)
}

fn simpson_step(tau: f64, t: f64) -> f64 {
    let grid_cap = if t > 0.0 { t / 1.0e4 } else { f64::INFINITY };
    (tau / 50.0).min(grid_cap)
}

/// Composite Simpson rule with a step no larger than `max_step`.
fn simpson(lo: f64, hi: f64, max_step: f64, f: impl Fn(f64) -> f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let span = hi - lo;
    let mut n = (span / max_step).ceil() as usize;
    n = n.max(2);
    if n % 2 == 1 {
        n += 1;
    }
    let h = span / n as f64;
    let mut acc = f(lo) + f(hi);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(lo + k as f64 * h);
    }
    acc * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::Matrix2;

    fn single_pulse(alpha: f64, beta: f64, t1: f64, tau: f64) -> FieldProfile {
        FieldProfile::new(
            FieldStrengths::new(alpha, beta).unwrap(),
            Train::Pulses(PulseTrain::from_pairs(&[(t1, Sign::Plus)], tau).unwrap()),
        )
    }

    #[test]
    fn pulse_peak_value() {
        let profile = single_pulse(2.0, 1.0, 5.0, 0.1);
        let s = sample_fields(&profile, 5.0).unwrap();
        let peak = 2.0 / (std::f64::consts::PI.sqrt() * 0.1);
        assert!((s.b1 - peak).abs() < 1e-12 * peak);
        assert!((s.b2 - peak / 2.0).abs() < 1e-12 * peak);
    }

    #[test]
    fn pulse_tail_is_negligible() {
        let profile = single_pulse(2.0, 1.0, 5.0, 0.1);
        let peak = 2.0 / (std::f64::consts::PI.sqrt() * 0.1);
        let s = sample_fields(&profile, 5.0 + 8.5 * 0.1).unwrap();
        assert!(s.b1.abs() < 1e-12 * peak);
        assert!(s.b2.abs() < 1e-12 * peak);
    }

    #[test]
    fn kick_trains_are_not_samplable() {
        let profile = FieldProfile::new(
            FieldStrengths::new(1.0, 1.0).unwrap(),
            Train::Kicks(KickTrain::from_pairs(&[(5.0, Sign::Plus)]).unwrap()),
        );
        assert!(matches!(sample_fields(&profile, 1.0), Err(FieldError::KickSampling)));
    }

    #[test]
    fn pulse_integral_recovers_strength() {
        // Trapezoid oracle at dt = τ/1000 over the ±6τ window.
        let tau = 0.15;
        let profile = single_pulse(2.0, 1.0, 5.0, tau);
        let (lo, hi) = (5.0 - 6.0 * tau, 5.0 + 6.0 * tau);
        let n = (12.0 * tau / (tau / 1000.0)) as usize;
        let h = (hi - lo) / n as f64;
        let mut oracle = 0.0;
        for k in 0..n {
            let a = lo + k as f64 * h;
            let fa = sample_fields(&profile, a).unwrap().b1;
            let fb = sample_fields(&profile, a + h).unwrap().b1;
            oracle += 0.5 * (fa + fb) * h;
        }
        assert!((oracle - 2.0).abs() < 1e-6);
        let (alpha_bar, beta_bar) = integrated_strengths(&profile, 25.0);
        assert!((alpha_bar - 2.0).abs() < 1e-6);
        assert!((beta_bar - 1.0).abs() < 1e-6);
    }

    #[test]
    fn hamiltonian_matches_displayed_matrix_without_field() {
        let h = hamiltonian_at(&FieldProfile::free(), Coupling::new(1.0).unwrap(), 0.0).unwrap();
        let mut want = Matrix4::diag([
            C64::new(1.0, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(-1.0, 0.0),
            C64::new(1.0, 0.0),
        ]);
        want.0[1][2] = C64::new(2.0, 0.0);
        want.0[2][1] = C64::new(2.0, 0.0);
        assert_eq!(h, want);
    }

    #[test]
    fn hamiltonian_is_hermitian_and_diagonal_when_decoupled() {
        let profile = single_pulse(1.0, 1.0, 5.0, 0.2);
        for &t in &[0.0, 4.9, 5.0, 5.3, 11.0] {
            let h = hamiltonian_at(&profile, Coupling::new(0.0).unwrap(), t).unwrap();
            assert_eq!(h.hermiticity_defect(), 0.0);
            assert_eq!(h.0[1][2], C64::new(0.0, 0.0));
            // Equal fields also kill the middle diagonal split.
            assert_eq!(h.0[1][1], h.0[2][2]);
        }
    }

    #[test]
    fn commutator_matches_brute_force() {
        let profile = single_pulse(2.0, 0.7, 5.0, 0.3);
        let coupling = Coupling::new(1.3).unwrap();
        for &(t1, t2) in &[(4.6, 5.2), (5.0, 5.1), (4.0, 9.0)] {
            let closed = hamiltonian_commutator(&profile, coupling, t1, t2).unwrap();
            let h1 = hamiltonian_at(&profile, coupling, t1).unwrap();
            let h2 = hamiltonian_at(&profile, coupling, t2).unwrap();
            let brute = h2.mul(&h1).sub(&h1.mul(&h2));
            assert!(closed.sub(&brute).max_norm() < 1e-12, "t1={t1} t2={t2}");
        }
    }

    #[test]
    fn commutator_sign_matches_pauli_form() {
        // 2iJ(D(t1) − D(t2))(σy¹σx² − σx¹σy²) with D = B¹ − B².
        let profile = single_pulse(2.0, 0.7, 5.0, 0.3);
        let coupling = Coupling::new(1.3).unwrap();
        let (t1, t2) = (4.8, 5.4);
        let s1 = sample_fields(&profile, t1).unwrap();
        let s2 = sample_fields(&profile, t2).unwrap();
        let d1 = s1.b1 - s1.b2;
        let d2 = s2.b1 - s2.b2;
        let pauli = Matrix2::pauli_y()
            .kron(&Matrix2::pauli_x())
            .sub(&Matrix2::pauli_x().kron(&Matrix2::pauli_y()));
        let want = pauli.scale(C64::new(0.0, 2.0 * coupling.j * (d1 - d2)));
        let got = hamiltonian_commutator(&profile, coupling, t1, t2).unwrap();
        assert!(got.sub(&want).max_norm() < 1e-12);
    }

    #[test]
    fn commutator_vanishes_for_equal_fields_or_zero_coupling() {
        let equal = single_pulse(1.5, 1.5, 5.0, 0.2);
        let unequal = single_pulse(2.0, 1.0, 5.0, 0.2);
        let j = Coupling::new(1.0).unwrap();
        let j0 = Coupling::new(0.0).unwrap();
        assert!(hamiltonian_commutator(&equal, j, 4.9, 5.2).unwrap().max_norm() < 1e-12);
        assert!(hamiltonian_commutator(&unequal, j0, 4.9, 5.2).unwrap().max_norm() < 1e-12);
    }

    #[test]
    fn ordering_term_vanishes_for_centred_pulse() {
        // Pulse centroid at t/2 with symmetric envelope.
        let profile = single_pulse(2.0, 1.0, 5.0, 0.2);
        let term = leading_ordering_term(&profile, Coupling::new(1.0).unwrap(), 10.0).unwrap();
        assert!(term.max_norm() < 1e-8, "max norm {}", term.max_norm());
    }

    #[test]
    fn ordering_term_vanishes_for_equal_strengths() {
        let profile = single_pulse(1.5, 1.5, 5.0, 0.2);
        let term = leading_ordering_term(&profile, Coupling::new(1.0).unwrap(), 12.0).unwrap();
        assert_eq!(term.max_norm(), 0.0);
    }

    #[test]
    fn ordering_term_nonzero_off_centre() {
        let profile = single_pulse(2.0, 1.0, 5.0, 0.2);
        let term = leading_ordering_term(&profile, Coupling::new(1.0).unwrap(), 14.0).unwrap();
        assert!(term.max_norm() > 1e-3);
    }

    #[test]
    fn ordering_term_vanishes_for_pair_symmetric_about_midpoint() {
        // Two equal-sign pulses mirrored about t/2: the (t − 2t′) weight of
        // one cancels the other's.
        let profile = FieldProfile::new(
            FieldStrengths::new(2.0, 1.0).unwrap(),
            Train::Pulses(
                PulseTrain::from_pairs(&[(4.0, Sign::Plus), (10.0, Sign::Plus)], 0.2).unwrap(),
            ),
        );
        let term = leading_ordering_term(&profile, Coupling::new(1.0).unwrap(), 14.0).unwrap();
        assert!(term.max_norm() < 1e-8, "max norm {}", term.max_norm());
    }

    #[test]
    fn integrated_strengths_before_and_after_kicks() {
        let strengths = FieldStrengths::new(2.0, 1.0).unwrap();
        let pn = FieldProfile::new(
            strengths,
            Train::Kicks(
                KickTrain::from_pairs(&[(5.0, Sign::Plus), (10.0, Sign::Minus)]).unwrap(),
            ),
        );
        assert_eq!(integrated_strengths(&pn, 2.0), (0.0, 0.0));
        assert_eq!(integrated_strengths(&pn, 7.0), (2.0, 1.0));
        assert_eq!(integrated_strengths(&pn, 12.0), (0.0, 0.0));

        let all_plus = FieldProfile::new(
            strengths,
            Train::Kicks(
                KickTrain::from_pairs(&[(5.0, Sign::Plus), (10.0, Sign::Plus), (15.0, Sign::Plus)])
                    .unwrap(),
            ),
        );
        assert_eq!(integrated_strengths(&all_plus, 20.0), (6.0, 3.0));
    }

    #[test]
    fn event_times_must_increase() {
        assert!(KickTrain::from_pairs(&[(5.0, Sign::Plus), (5.0, Sign::Minus)]).is_err());
        assert!(KickTrain::from_pairs(&[(-1.0, Sign::Plus)]).is_err());
        assert!(PulseTrain::from_pairs(&[(3.0, Sign::Plus), (2.0, Sign::Plus)], 0.1).is_err());
        assert!(PulseTrain::from_pairs(&[(3.0, Sign::Plus)], 0.0).is_err());
    }
}
