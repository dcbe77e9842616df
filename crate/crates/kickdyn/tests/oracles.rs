//! Independent numerical oracles for the linear-algebra and propagator
//! kernels. Everything here recomputes expected values through a different
//! route than the library (principal-minor characteristic coefficients plus
//! shifted QR on the companion matrix for eigenvalues; a fine-step numeric
//! integrator for propagator composition) and must stay that way.

use kickdyn::fields::{Coupling, FieldProfile, FieldStrengths, KickTrain, Sign};
use kickdyn::integrator::{integrate_full, SimGrid, StateVector};
use kickdyn::propagators::{evolve, kick_sequence_propagator};
use kickdyn::qmat::{eigenvalues4, Matrix4, C64};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Characteristic coefficients by brute-force principal minors:
/// p(λ) = λ⁴ − e1λ³ + e2λ² − e3λ + e4.
fn minor_coefficients(m: &Matrix4) -> [C64; 4] {
    let a = &m.0;
    let det2 = |r: [usize; 2], s: [usize; 2]| a[r[0]][s[0]] * a[r[1]][s[1]] - a[r[0]][s[1]] * a[r[1]][s[0]];
    let det3 = |idx: [usize; 3]| {
        let [i, j, k] = idx;
        a[i][i] * det2([j, k], [j, k]) - a[i][j] * det2([j, k], [i, k])
            + a[i][k] * det2([j, k], [i, j])
    };
    // det4 by cofactor expansion along the first row.
    let det4 = {
        let mut acc = c(0.0, 0.0);
        for col in 0..4 {
            let s: Vec<usize> = (0..4).filter(|&x| x != col).collect();
            let minor = a[1][s[0]] * (a[2][s[1]] * a[3][s[2]] - a[2][s[2]] * a[3][s[1]])
                - a[1][s[1]] * (a[2][s[0]] * a[3][s[2]] - a[2][s[2]] * a[3][s[0]])
                + a[1][s[2]] * (a[2][s[0]] * a[3][s[1]] - a[2][s[1]] * a[3][s[0]]);
            let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
            acc += a[0][col] * minor * sign;
        }
        acc
    };

    let e1: C64 = (0..4).map(|i| a[i][i]).sum();
    let mut e2 = c(0.0, 0.0);
    for i in 0..4 {
        for j in (i + 1)..4 {
            e2 += det2([i, j], [i, j]);
        }
    }
    let mut e3 = c(0.0, 0.0);
    for i in 0..4 {
        for j in (i + 1)..4 {
            for k in (j + 1)..4 {
                e3 += det3([i, j, k]);
            }
        }
    }
    // Monic coefficients ordered [c0, c1, c2, c3].
    [det4, -e3, e2, -e1]
}

/// Companion matrix of λ⁴ + c3λ³ + c2λ² + c1λ + c0 (upper Hessenberg).
fn companion(coeffs: &[C64; 4]) -> Vec<Vec<C64>> {
    let mut h = vec![vec![c(0.0, 0.0); 4]; 4];
    h[0][0] = -coeffs[3];
    h[0][1] = -coeffs[2];
    h[0][2] = -coeffs[1];
    h[0][3] = -coeffs[0];
    h[1][0] = c(1.0, 0.0);
    h[2][1] = c(1.0, 0.0);
    h[3][2] = c(1.0, 0.0);
    h
}

/// Eigenvalues of a complex upper-Hessenberg matrix by shifted QR with
/// Givens rotations and deflation.
fn qr_eigenvalues(mut h: Vec<Vec<C64>>) -> Vec<C64> {
    let mut eigs = Vec::new();
    let mut n = h.len();
    let mut guard = 0usize;
    while n > 1 {
        guard += 1;
        assert!(guard < 2000, "QR iteration failed to converge");
        let eps = 1e-15 * (h[n - 1][n - 1].norm() + h[n - 2][n - 2].norm()).max(1e-300);
        if h[n - 1][n - 2].norm() <= eps {
            eigs.push(h[n - 1][n - 1]);
            n -= 1;
            continue;
        }
        // Wilkinson shift: the trailing-2x2 eigenvalue closest to the corner.
        let (a, b) = (h[n - 2][n - 2], h[n - 2][n - 1]);
        let (cc, d) = (h[n - 1][n - 2], h[n - 1][n - 1]);
        let tr = a + d;
        let disc = (tr * tr - 4.0 * (a * d - b * cc)).sqrt();
        let l1 = (tr + disc) / 2.0;
        let l2 = (tr - disc) / 2.0;
        let shift = if (l1 - d).norm() < (l2 - d).norm() { l1 } else { l2 };

        for i in 0..n {
            h[i][i] -= shift;
        }
        // Left Givens sweep producing R, then right application for RQ.
        let mut rotations = Vec::with_capacity(n - 1);
        for k in 0..(n - 1) {
            let (x, y) = (h[k][k], h[k + 1][k]);
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (gc, gs) = if r == 0.0 || x.norm() == 0.0 {
                (0.0, c(1.0, 0.0))
            } else {
                (x.norm() / r, (x / x.norm()) * y.conj() / r)
            };
            for col in 0..n {
                let (top, bottom) = (h[k][col], h[k + 1][col]);
                h[k][col] = gc * top + gs * bottom;
                h[k + 1][col] = -gs.conj() * top + gc * bottom;
            }
            rotations.push((gc, gs));
        }
        for (k, (gc, gs)) in rotations.into_iter().enumerate() {
            for row in 0..n {
                let (left, right) = (h[row][k], h[row][k + 1]);
                h[row][k] = gc * left + gs.conj() * right;
                h[row][k + 1] = -gs * left + gc * right;
            }
        }
        for i in 0..n {
            h[i][i] += shift;
        }
    }
    if n == 1 {
        eigs.push(h[0][0]);
    }
    eigs
}

fn oracle_eigenvalues(m: &Matrix4) -> Vec<C64> {
    qr_eigenvalues(companion(&minor_coefficients(m)))
}

fn assert_multiset_close(got: &[C64], want: &[C64], tol: f64, context: &str) {
    let mut remaining: Vec<C64> = want.to_vec();
    for g in got {
        let (pos, dist) = remaining
            .iter()
            .enumerate()
            .map(|(i, w)| (i, (g - w).norm()))
            .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .expect("non-empty");
        assert!(dist <= tol, "{context}: eigenvalue {g} off by {dist:.3e}");
        remaining.swap_remove(pos);
    }
}

fn random_matrix(rng: &mut StdRng) -> Matrix4 {
    let mut m = Matrix4::zero();
    for row in m.0.iter_mut() {
        for e in row.iter_mut() {
            *e = c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        }
    }
    m
}

#[test]
fn qr_oracle_agrees_on_known_diagonals() {
    let m = Matrix4::diag([c(1.0, 0.0), c(-2.0, 0.5), c(0.0, 3.0), c(4.0, -1.0)]);
    let oracle = oracle_eigenvalues(&m);
    assert_multiset_close(
        &oracle,
        &[c(1.0, 0.0), c(-2.0, 0.5), c(0.0, 3.0), c(4.0, -1.0)],
        1e-10,
        "diagonal",
    );
}

#[test]
fn eigenvalues_match_companion_qr_on_random_matrices() {
    let mut rng = StdRng::seed_from_u64(42);
    for case in 0..200 {
        let m = random_matrix(&mut rng);
        let got = eigenvalues4(&m).unwrap();
        let oracle = oracle_eigenvalues(&m);
        assert_multiset_close(&got, &oracle, 1e-8, &format!("case {case}"));
    }
}

#[test]
fn propagator_eigenvalues_lie_on_unit_circle() {
    let mut rng = StdRng::seed_from_u64(43);
    for _ in 0..100 {
        let n = rng.random_range(1..=4usize);
        let mut times: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..25.0)).collect();
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        times.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
        let pairs: Vec<(f64, Sign)> = times
            .iter()
            .map(|&t| (t, if rng.random_range(0.0..1.0) < 0.5 { Sign::Plus } else { Sign::Minus }))
            .collect();
        let train = KickTrain::from_pairs(&pairs).unwrap();
        let strengths =
            FieldStrengths::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)).unwrap();
        let j = Coupling::new(rng.random_range(0.0..4.0)).unwrap();
        let t = rng.random_range(0.0..30.0);
        let u = kick_sequence_propagator(&train, strengths, j, t);
        for lambda in eigenvalues4(&u.matrix()).unwrap() {
            assert!((lambda.norm() - 1.0).abs() < 1e-10, "|λ| = {}", lambda.norm());
        }
    }
}

#[test]
fn hermitian_inputs_give_real_eigenvalues() {
    let mut rng = StdRng::seed_from_u64(44);
    for _ in 0..100 {
        let raw = random_matrix(&mut rng);
        let herm = {
            let adj = raw.adjoint();
            let mut m = Matrix4::zero();
            for r in 0..4 {
                for col in 0..4 {
                    m.0[r][col] = (raw.0[r][col] + adj.0[r][col]) / 2.0;
                }
            }
            m
        };
        for lambda in eigenvalues4(&herm).unwrap() {
            assert!(lambda.im.abs() < 1e-10, "Im λ = {}", lambda.im);
        }
    }
}

/// The composed propagator between kick events equals free numerical
/// evolution of the post-kick state: every free segment of the product is
/// independently confirmed by the integrator.
#[test]
fn composition_between_events_matches_numeric_integration() {
    let train = KickTrain::from_pairs(&[(3.0, Sign::Plus), (8.0, Sign::Minus)]).unwrap();
    let strengths = FieldStrengths::new(2.3, 0.8).unwrap();
    let j = Coupling::new(1.1).unwrap();
    let free = FieldProfile::free();
    let initial = StateVector::bell_psi_plus();

    for &(segment_start, probe) in &[(3.0, 5.5), (8.0, 11.0), (8.0, 24.0)] {
        let at_start = evolve(
            &initial,
            &kick_sequence_propagator(&train, strengths, j, segment_start),
        )
        .unwrap();
        let grid = SimGrid::new(segment_start, probe, 1e-3, usize::MAX).unwrap();
        let integrated = integrate_full(&free, j, grid, at_start).unwrap().final_state();
        let composed =
            evolve(&initial, &kick_sequence_propagator(&train, strengths, j, probe)).unwrap();
        let diff: f64 = integrated
            .amps
            .iter()
            .zip(composed.amps.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff < 1e-8, "segment [{segment_start}, {probe}]: diff {diff:.3e}");
    }
}
