//! The `verify` battery: every invariant the crate guarantees, run end to
//! end with fixed seeds so repeated invocations produce identical reports.
//!
//! Each check pins its tolerance here, next to the code it gates. Two checks
//! carry frozen regression values measured by the first verified build (the
//! kick-limit bound and the steady-entanglement floor); those are
//! reproduction targets, not tunables.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::entanglement::{
    bell_kick_concurrence, concurrence_pure, separable_kick_concurrence, wootters_concurrence,
    DensityMatrix,
};
use crate::experiments::{compare_methods, run_contour, run_timeseries, Method, Scenario, SweepSpec};
use crate::fields::{
    integrated_strengths, Coupling, FieldProfile, FieldStrengths, KickTrain, PulseTrain, Sign,
    Train,
};
use crate::integrator::{convergence_study, SimGrid, StateVector};
use crate::propagators::{
    closed_form_kick_params, evolve, free_propagator, kick_sequence_propagator,
    no_ordering_propagator,
};
use crate::qmat::{unitarity_defect, C64};
use crate::tol;

/// Frozen by the first oracle run: the sup-norm concurrence difference
/// between the Jτ = 0.025 Gaussian run and the analytic kick (|01⟩ initial,
/// α = 2, β = 1, T₁ = 5, window t ∈ [6.2, 25]). The difference scales as
/// ≈ 1.04·Jτ, so this is the attainable floor at this width; future builds
/// must reproduce it.
pub const KICK_LIMIT_FROZEN_SUP: f64 = 0.025989561451;

/// Reproduction tolerance for the frozen kick-limit sup (covers RK4
/// round-off and libm variation across platforms).
pub const KICK_LIMIT_SUP_TOL: f64 = 1e-6;

/// Start of the kick-limit comparison window: past the widest pulse's
/// support (T₁ + 6·τ_max = 5 + 6·0.2).
pub const KICK_LIMIT_WINDOW_START: f64 = 6.2;

/// Frozen by the first verified run: min concurrence over Jt ∈ (20, 25] for
/// four positive kicks at 5/10/15/20, α = 2β, |01⟩ initial state.
pub const STEADY_FLOOR: f64 = 0.772928575193051;

/// Reproduction tolerance for the frozen steady-entanglement floor.
pub const STEADY_FLOOR_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct VerifyCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<VerifyCheck>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn finish(name: &'static str, start: Instant, passed: bool, detail: String) -> VerifyCheck {
    VerifyCheck { name, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

const SHAPES: [&[Sign]; 5] = [
    &[Sign::Plus],
    &[Sign::Plus, Sign::Minus],
    &[Sign::Plus, Sign::Plus],
    &[Sign::Plus, Sign::Plus, Sign::Plus],
    &[Sign::Plus, Sign::Plus, Sign::Plus, Sign::Plus],
];

fn random_train(rng: &mut StdRng, signs: &[Sign]) -> KickTrain {
    loop {
        let mut times: Vec<f64> = (0..signs.len()).map(|_| rng.random_range(0.1..30.0)).collect();
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if times.windows(2).all(|w| w[1] - w[0] > 1e-3) {
            let pairs: Vec<(f64, Sign)> = times.into_iter().zip(signs.iter().copied()).collect();
            return KickTrain::from_pairs(&pairs).expect("strictly increasing times");
        }
    }
}

fn random_strengths(rng: &mut StdRng) -> FieldStrengths {
    FieldStrengths::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0))
        .expect("finite strengths")
}

fn haar_state(rng: &mut StdRng) -> StateVector {
    // Box-Muller normals make the amplitude vector rotation invariant.
    let mut normal = || {
        let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
        let u2: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        (-2.0 * u1.ln()).sqrt() * u2.cos()
    };
    let mut amps = [C64::new(0.0, 0.0); 4];
    for a in amps.iter_mut() {
        *a = C64::new(normal(), normal());
    }
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amps(amps.map(|a| a / norm))
}

/// 10,000 randomized propagators across every construction route, all
/// unitary to 1e−12, in under 5 seconds.
pub fn check_unitarity_sweep() -> VerifyCheck {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1001);
    let mut worst = 0.0f64;
    for k in 0..10_000 {
        let j = Coupling::new(rng.random_range(0.0..5.0)).unwrap();
        let t = rng.random_range(0.0..30.0);
        let s = random_strengths(&mut rng);
        let u = match k % 7 {
            0 => free_propagator(j, t),
            1 => no_ordering_propagator(j, t, s.alpha, s.beta),
            shape => {
                let train = random_train(&mut rng, SHAPES[shape - 2]);
                kick_sequence_propagator(&train, s, j, t)
            }
        };
        match unitarity_defect(&u.matrix()) {
            Ok(defect) => worst = worst.max(defect),
            Err(e) => {
                return finish(
                    "unitarity-sweep",
                    start,
                    false,
                    format!("propagator {k} not finite: {e}"),
                )
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let passed = worst < tol::UNITARITY && elapsed < 5.0;
    finish(
        "unitarity-sweep",
        start,
        passed,
        format!(
            "max defect {worst:.3e} over 10000 propagators; within 5 s budget: {}",
            elapsed < 5.0
        ),
    )
}

/// Closed-form parameter sets equal the composed propagator elementwise to
/// 1e−12, 1000 randomized cases per shape.
pub fn check_closed_form_fidelity() -> VerifyCheck {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1002);
    let mut worst = 0.0f64;
    for signs in SHAPES {
        for _ in 0..1000 {
            let train = random_train(&mut rng, signs);
            let s = random_strengths(&mut rng);
            let j = Coupling::new(rng.random_range(0.0..5.0)).unwrap();
            let last = train.events().last().unwrap().time;
            let t = last + rng.random_range(1e-6..30.0);
            let closed = closed_form_kick_params(&train, s, j, t).expect("supported shape");
            let composed = kick_sequence_propagator(&train, s, j, t);
            worst = worst.max(closed.max_norm_diff(&composed));
        }
    }
    let passed = worst < tol::CLOSED_FORM_MATCH;
    finish(
        "closed-form-fidelity",
        start,
        passed,
        format!("max elementwise diff {worst:.3e} over 5000 cases"),
    )
}

/// U_kick − U_no_ordering vanishes (max-norm < 1e−12) when α = β, and
/// separately when J = 0, across all shapes and randomized times.
pub fn check_ordering_nullity() -> VerifyCheck {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1003);
    let mut worst = 0.0f64;
    for signs in SHAPES {
        for case in 0..1000 {
            let train = random_train(&mut rng, signs);
            let equal_strengths = case % 2 == 0;
            let (s, j) = if equal_strengths {
                let a = rng.random_range(-10.0..10.0);
                (
                    FieldStrengths::new(a, a).unwrap(),
                    Coupling::new(rng.random_range(0.0..5.0)).unwrap(),
                )
            } else {
                (random_strengths(&mut rng), Coupling::new(0.0).unwrap())
            };
            let t = rng.random_range(0.0..35.0);
            let profile = FieldProfile::new(s, Train::Kicks(train.clone()));
            let (alpha_bar, beta_bar) = integrated_strengths(&profile, t);
            let uk = kick_sequence_propagator(&train, s, j, t);
            let u0 = no_ordering_propagator(j, t, alpha_bar, beta_bar);
            worst = worst.max(uk.max_norm_diff(&u0));
        }
    }
    let passed = worst < tol::ORDERING_NULLITY;
    finish(
        "ordering-nullity",
        start,
        passed,
        format!("max |U_kick − U_no_ordering| {worst:.3e} across nullity cases"),
    )
}

/// Bell-state closed form against the evolve-then-measure pipeline, plus the
/// exact C ≡ 1 lines at Δ ∈ {0, π/2, π}.
pub fn check_bell_closed_form() -> VerifyCheck {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1004);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let beta = rng.random_range(-5.0..5.0);
        let delta = rng.random_range(-10.0..10.0);
        let s = FieldStrengths::new(beta + delta, beta).unwrap();
        let j = Coupling::new(rng.random_range(0.0..5.0)).unwrap();
        let t1 = rng.random_range(0.5..20.0);
        let t = t1 + rng.random_range(1e-3..20.0);
        let train = KickTrain::from_pairs(&[(t1, Sign::Plus)]).unwrap();
        let u = kick_sequence_propagator(&train, s, j, t);
        let pipeline = concurrence_pure(&evolve(&StateVector::bell_psi_plus(), &u).unwrap())
            .expect("normalized");
        let closed = bell_kick_concurrence(delta, j, t, t1);
        worst = worst.max((pipeline - closed).abs());
    }
    let mut exact_ok = true;
    for delta in [0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::PI] {
        for k in 0..200 {
            let t = 5.0 + 0.1 * k as f64;
            let c = bell_kick_concurrence(delta, Coupling::new(1.0).unwrap(), t, 5.0);
            if c != 1.0 {
                exact_ok = false;
            }
        }
    }
    let passed = worst < tol::PIPELINE_MATCH && exact_ok;
    finish(
        "bell-closed-form",
        start,
        passed,
        format!("max pipeline diff {worst:.3e}; special-angle lines exact: {exact_ok}"),
    )
}

/// Separable-state closed form against the pipeline, plus the Δ = 0
/// reduction to |sin 4Jt|.
pub fn check_separable_closed_form() -> VerifyCheck {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1005);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let beta = rng.random_range(-5.0..5.0);
        let delta = rng.random_range(-10.0..10.0);
        let s = FieldStrengths::new(beta + delta, beta).unwrap();
        let j = Coupling::new(rng.random_range(0.0..5.0)).unwrap();
        let t1 = rng.random_range(0.5..20.0);
        let t = t1 + rng.random_range(1e-3..20.0);
        let train = KickTrain::from_pairs(&[(t1, Sign::Plus)]).unwrap();
        let u = kick_sequence_propagator(&train, s, j, t);
        let pipeline =
            concurrence_pure(&evolve(&StateVector::ket_01(), &u).unwrap()).expect("normalized");
        let closed = separable_kick_concurrence(delta, j, t, t1);
        worst = worst.max((pipeline - closed).abs());
    }
    let mut worst_free = 0.0f64;
    for k in 0..2000 {
        let t = 5.0 + 0.01 * k as f64;
        let j = Coupling::new(1.3).unwrap();
        let c = separable_kick_concurrence(0.0, j, t, 5.0);
        worst_free = worst_free.max((c - (4.0 * j.j * t).sin().abs()).abs());
    }
    let passed = worst < tol::PIPELINE_MATCH && worst_free < 1e-12;
    finish(
        "separable-closed-form",
        start,
        passed,
        format!("max pipeline diff {worst:.3e}; Δ=0 free-law diff {worst_free:.3e}"),
    )
}

/// |01⟩ with no field: C(t) = |sin 4Jt| to 1e−10 on a 10,000-point grid.
pub fn check_free_evolution_law() -> VerifyCheck {
    let start = Instant::now();
    let j = Coupling::new(1.0).unwrap();
    let mut worst = 0.0f64;
    for k in 0..10_000 {
        let t = 25.0 * k as f64 / 9_999.0;
        let state = evolve(&StateVector::ket_01(), &free_propagator(j, t)).unwrap();
        let c = concurrence_pure(&state).expect("normalized");
        worst = worst.max((c - (4.0 * t).sin().abs()).abs());
    }
    let passed = worst < 1e-10;
    finish(
        "free-evolution-law",
        start,
        passed,
        format!("max |C − |sin 4Jt|| = {worst:.3e} on 10000 points"),
    )
}

/// R-matrix oracle equals the pure-state formula to 1e−8 on 1000 random
/// pure states.
pub fn check_wootters_oracle() -> VerifyCheck {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1007);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let state = haar_state(&mut rng);
        let direct = concurrence_pure(&state).expect("normalized");
        let rho = DensityMatrix::from_pure(&state).expect("valid density");
        match wootters_concurrence(&rho) {
            Ok(oracle) => worst = worst.max((direct - oracle).abs()),
            Err(e) => {
                return finish("wootters-oracle", start, false, format!("oracle failed: {e}"))
            }
        }
    }
    let passed = worst < tol::WOOTTERS_MATCH;
    finish(
        "wootters-oracle",
        start,
        passed,
        format!("max |C_R − C_pure| = {worst:.3e} on 1000 random states"),
    )
}

/// RK4 order measurement on a Gaussian run (Jτ = 0.2): fitted order in
/// [3.5, 4.3], dt-halving error ratios in [12, 20].
pub fn check_rk4_order() -> VerifyCheck {
    let start = Instant::now();
    let tau = 0.2;
    let profile = FieldProfile::new(
        FieldStrengths::new(2.0, 1.0).unwrap(),
        Train::Pulses(PulseTrain::from_pairs(&[(5.0, Sign::Plus)], tau).unwrap()),
    );
    let grid = SimGrid::new(0.0, 10.0, tau / 20.0, 1).unwrap();
    let study = match convergence_study(
        &profile,
        Coupling::new(1.0).unwrap(),
        grid,
        StateVector::ket_01(),
        4,
    ) {
        Ok(study) => study,
        Err(e) => return finish("rk4-order", start, false, format!("study failed: {e}")),
    };
    let ratios = study.halving_ratios();
    let ratios_ok = ratios.iter().all(|r| (12.0..=20.0).contains(r));
    let order_ok = (3.5..=4.3).contains(&study.fitted_order);
    finish(
        "rk4-order",
        start,
        order_ok && ratios_ok,
        format!("fitted order {:.3}; halving ratios {:?}", study.fitted_order, ratios),
    )
}

fn kick_limit_scenario(tau: Option<f64>) -> Scenario {
    let strengths = FieldStrengths::new(2.0, 1.0).unwrap();
    let events = [(5.0, Sign::Plus)];
    let (profile, method) = match tau {
        Some(tau) => (
            FieldProfile::new(
                strengths,
                Train::Pulses(PulseTrain::from_pairs(&events, tau).unwrap()),
            ),
            Method::Rk4Pulse,
        ),
        None => (
            FieldProfile::new(strengths, Train::Kicks(KickTrain::from_pairs(&events).unwrap())),
            Method::AnalyticKick,
        ),
    };
    Scenario {
        initial: StateVector::ket_01(),
        initial_name: "01".into(),
        profile,
        coupling: Coupling::new(1.0).unwrap(),
        grid: SimGrid::new(0.0, 25.0, 0.01, 1).unwrap(),
        method,
    }
}

/// Sup-norm concurrence difference between a Gaussian run of width τ and the
/// analytic kick, over the post-pulse window.
pub fn kick_limit_sup_diff(tau: f64) -> f64 {
    let kick = run_timeseries(&kick_limit_scenario(None)).expect("analytic run");
    let pulse = run_timeseries(&kick_limit_scenario(Some(tau))).expect("rk4 run");
    assert_eq!(kick.series.times.len(), pulse.series.times.len());
    kick.series
        .times
        .iter()
        .zip(kick.series.values.iter().zip(pulse.series.values.iter()))
        .filter(|(t, _)| **t >= KICK_LIMIT_WINDOW_START)
        .map(|(_, (a, b))| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Gaussian runs converge to the analytic kick as τ → 0: the sup-norm
/// difference decreases monotonically over τ ∈ {0.2, 0.1, 0.05, 0.025} and
/// the Jτ = 0.025 value reproduces the frozen regression sup.
pub fn check_kick_limit() -> VerifyCheck {
    let start = Instant::now();
    let taus = [0.2, 0.1, 0.05, 0.025];
    let sups: Vec<f64> = taus.iter().map(|&tau| kick_limit_sup_diff(tau)).collect();
    let monotone = sups.windows(2).all(|w| w[1] < w[0]);
    let frozen_ok = (sups[3] - KICK_LIMIT_FROZEN_SUP).abs() < KICK_LIMIT_SUP_TOL;
    finish(
        "kick-limit",
        start,
        monotone && frozen_ok,
        format!(
            "sup diffs {:?} for Jτ {:?}; frozen {KICK_LIMIT_FROZEN_SUP}",
            sups.iter().map(|s| (s * 1e4).round() / 1e4).collect::<Vec<_>>(),
            taus
        ),
    )
}

fn four_kick_scenario(initial: StateVector, name: &str, alpha: f64) -> Scenario {
    Scenario {
        initial,
        initial_name: name.into(),
        profile: FieldProfile::new(
            FieldStrengths::new(alpha, 1.0).unwrap(),
            Train::Kicks(
                KickTrain::from_pairs(&[
                    (5.0, Sign::Plus),
                    (10.0, Sign::Plus),
                    (15.0, Sign::Plus),
                    (20.0, Sign::Plus),
                ])
                .unwrap(),
            ),
        ),
        coupling: Coupling::new(1.0).unwrap(),
        grid: SimGrid::new(0.0, 25.0, 0.05, 1).unwrap(),
        method: Method::AnalyticKick,
    }
}

/// Contour landmark: rows at Δ = kπ/2 stay maximally entangled, their ratios
/// match the plot read-offs, and the 200×500 sweep finishes under 2 s.
pub fn check_contour_landmarks() -> VerifyCheck {
    let start = Instant::now();
    let spec = SweepSpec {
        scenario: four_kick_scenario(StateVector::bell_psi_plus(), "psi+", 2.0),
        ratio_lo: 1.0,
        ratio_hi: 10.0,
        ratio_points: 200,
    };
    let sweep_start = Instant::now();
    let grid = match run_contour(&spec) {
        Ok(grid) => grid,
        Err(e) => return finish("contour-landmarks", start, false, format!("sweep failed: {e}")),
    };
    let sweep_seconds = sweep_start.elapsed().as_secs_f64();
    let in_range = grid.rows.iter().flatten().all(|c| (0.0..=1.0).contains(c));

    let read_offs = [2.5, 4.25, 5.75, 7.25, 8.75];
    let mut worst_row_dev = 0.0f64;
    let mut worst_read_off = 0.0f64;
    for (k, &read_off) in read_offs.iter().enumerate() {
        let ratio = 1.0 + (k + 1) as f64 * std::f64::consts::FRAC_PI_2;
        worst_read_off = worst_read_off.max((ratio - read_off).abs());
        let scenario = four_kick_scenario(StateVector::bell_psi_plus(), "psi+", ratio);
        let run = run_timeseries(&scenario).expect("landmark row");
        for &c in &run.series.values {
            worst_row_dev = worst_row_dev.max((c - 1.0).abs());
        }
    }
    let passed =
        in_range && sweep_seconds < 2.0 && worst_row_dev < 1e-9 && worst_read_off <= 0.15;
    finish(
        "contour-landmarks",
        start,
        passed,
        format!(
            "200×500 sweep within 2 s budget: {}; max row deviation {worst_row_dev:.2e}; \
             read-off gap {worst_read_off:.3}",
            sweep_seconds < 2.0
        ),
    )
}

/// Time ordering is observable: +− kick pair, α = 3β, Bell state. The
/// no-ordering concurrence stays at 1 after the second kick while the exact
/// result deviates by more than 0.01.
pub fn check_ordering_observability() -> VerifyCheck {
    let start = Instant::now();
    let scenario = Scenario {
        initial: StateVector::bell_psi_plus(),
        initial_name: "psi+".into(),
        profile: FieldProfile::new(
            FieldStrengths::new(3.0, 1.0).unwrap(),
            Train::Kicks(
                KickTrain::from_pairs(&[(5.0, Sign::Plus), (10.0, Sign::Minus)]).unwrap(),
            ),
        ),
        coupling: Coupling::new(1.0).unwrap(),
        grid: SimGrid::new(0.0, 25.0, 0.01, 1).unwrap(),
        method: Method::AnalyticKick,
    };
    let report = match compare_methods(&scenario, &[Method::AnalyticKick, Method::NoOrdering]) {
        Ok(report) => report,
        Err(e) => {
            return finish("ordering-observability", start, false, format!("compare failed: {e}"))
        }
    };
    let mut no_ordering_dev = 0.0f64;
    let mut max_exact_dev = 0.0f64;
    for (k, &t) in report.times.iter().enumerate() {
        if t > 10.0 {
            no_ordering_dev = no_ordering_dev.max((report.series[1][k] - 1.0).abs());
            max_exact_dev = max_exact_dev.max(report.concurrence_diff[0][k]);
        }
    }
    let passed = no_ordering_dev < 1e-12 && max_exact_dev > 0.01;
    finish(
        "ordering-observability",
        start,
        passed,
        format!(
            "no-ordering deviation from 1: {no_ordering_dev:.2e}; \
             max exact-vs-no-ordering gap {max_exact_dev:.3}"
        ),
    )
}

/// Min concurrence over Jt ∈ (20, 25] for the four-kick α = 2β separable
/// scenario; the freezing target for the steady-entanglement regression.
pub fn steady_window_floor() -> f64 {
    let scenario = four_kick_scenario(StateVector::ket_01(), "01", 2.0);
    let mut scenario = scenario;
    scenario.grid = SimGrid::new(0.0, 25.0, 0.01, 1).unwrap();
    let run = run_timeseries(&scenario).expect("four-kick run");
    run.series
        .times
        .iter()
        .zip(run.series.values.iter())
        .filter(|(t, _)| **t > 20.0)
        .map(|(_, c)| *c)
        .fold(f64::INFINITY, f64::min)
}

/// The post-4th-kick entanglement floor reproduces the frozen regression
/// value.
pub fn check_steady_entanglement() -> VerifyCheck {
    let start = Instant::now();
    let floor = steady_window_floor();
    let passed = (floor - STEADY_FLOOR).abs() < STEADY_FLOOR_TOL;
    finish(
        "steady-entanglement-regression",
        start,
        passed,
        format!("window floor {floor:.12}; frozen {STEADY_FLOOR:.12}"),
    )
}

/// Run every check in order.
pub fn run_verify() -> VerifyReport {
    VerifyReport {
        checks: vec![
            check_unitarity_sweep(),
            check_closed_form_fidelity(),
            check_ordering_nullity(),
            check_bell_closed_form(),
            check_separable_closed_form(),
            check_free_evolution_law(),
            check_wootters_oracle(),
            check_rk4_order(),
            check_kick_limit(),
            check_contour_landmarks(),
            check_ordering_observability(),
            check_steady_entanglement(),
        ],
    }
}
