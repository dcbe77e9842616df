//! Minimal dense complex linear algebra for 2×2 and 4×4 matrices.
//!
//! This is all the matrix machinery the crate needs: products, adjoints,
//! norms, unitarity checks, and eigenvalues of a general complex 4×4 via its
//! characteristic polynomial. Row/column order everywhere follows the global
//! basis (|11⟩, |10⟩, |01⟩, |00⟩).

use num_complex::Complex64;
use thiserror::Error;

use crate::tol;

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// QR sweeps allowed before the eigensolver reports non-convergence.
const ROOT_ITER_CAP: usize = 300;

#[derive(Debug, Error)]
pub enum QmatError {
    #[error("matrix contains a non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },
    #[error("root refinement failed to converge; residuals {residuals:?}")]
    RootConvergence { residuals: [f64; 4] },
}

/// 2×2 complex matrix, used for Pauli operators and tensor products.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix2(pub [[C64; 2]; 2]);

impl Matrix2 {
    pub const fn new(entries: [[C64; 2]; 2]) -> Self {
        Self(entries)
    }

    pub fn identity() -> Self {
        let o = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        Self([[o, z], [z, o]])
    }

    pub fn pauli_x() -> Self {
        let o = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        Self([[z, o], [o, z]])
    }

    pub fn pauli_y() -> Self {
        let i = C64::new(0.0, 1.0);
        let z = C64::new(0.0, 0.0);
        Self([[z, -i], [i, z]])
    }

    pub fn pauli_z() -> Self {
        let o = C64::new(1.0, 0.0);
        let z = C64::new(0.0, 0.0);
        Self([[o, z], [z, -o]])
    }

    /// Tensor product `self ⊗ other`, first factor acting on qubit 1.
    pub fn kron(&self, other: &Matrix2) -> Matrix4 {
        let mut out = Matrix4::zero();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        out.0[2 * a + c][2 * b + d] = self.0[a][b] * other.0[c][d];
                    }
                }
            }
        }
        out
    }
}

/// 4×4 complex matrix over the two-qubit basis (|11⟩, |10⟩, |01⟩, |00⟩).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix4(pub [[C64; 4]; 4]);

impl Matrix4 {
    pub fn zero() -> Self {
        Self([[C64::new(0.0, 0.0); 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for k in 0..4 {
            m.0[k][k] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(d: [C64; 4]) -> Self {
        let mut m = Self::zero();
        for k in 0..4 {
            m.0[k][k] = d[k];
        }
        m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut m = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                m.0[r][c] = self.0[c][r].conj();
            }
        }
        m
    }

    /// Entrywise complex conjugate (no transpose).
    pub fn conj(&self) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for e in row.iter_mut() {
                *e = e.conj();
            }
        }
        m
    }

    pub fn mul(&self, other: &Matrix4) -> Self {
        let mut m = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = C64::new(0.0, 0.0);
                for k in 0..4 {
                    acc += self.0[r][k] * other.0[k][c];
                }
                m.0[r][c] = acc;
            }
        }
        m
    }

    pub fn sub(&self, other: &Matrix4) -> Self {
        let mut m = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                m.0[r][c] = self.0[r][c] - other.0[r][c];
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        for row in m.0.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        (0..4).map(|k| self.0[k][k]).sum()
    }

    /// Largest entry magnitude; the max-norm used for all matrix comparisons.
    pub fn max_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|e| e.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0
            .iter()
            .flatten()
            .all(|e| e.re.is_finite() && e.im.is_finite())
    }

    fn first_non_finite(&self) -> Option<(usize, usize)> {
        for r in 0..4 {
            for c in 0..4 {
                let e = self.0[r][c];
                if !(e.re.is_finite() && e.im.is_finite()) {
                    return Some((r, c));
                }
            }
        }
        None
    }

    /// Hermiticity defect: max-norm of M − M†.
    pub fn hermiticity_defect(&self) -> f64 {
        self.sub(&self.adjoint()).max_norm()
    }
}

/// Standard matrix product. Exposed as a free function so call sites read the
/// same way as the other module operations.
pub fn mat_product(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    a.mul(b)
}

/// Max-norm of M†M − I. Zero iff M is unitary.
pub fn unitarity_defect(m: &Matrix4) -> Result<f64, QmatError> {
    if let Some((row, col)) = m.first_non_finite() {
        return Err(QmatError::NonFinite { row, col });
    }
    Ok(m.adjoint().mul(m).sub(&Matrix4::identity()).max_norm())
}

/// All four eigenvalues of a general complex 4×4 matrix, with multiplicity.
///
/// Householder reduction to upper Hessenberg form followed by shifted QR
/// iteration with Givens rotations, deflating trailing 1×1 and 2×2 blocks.
/// Working on the matrix itself (rather than characteristic-polynomial
/// roots) keeps repeated eigenvalues well conditioned: the spectra this
/// crate produces are full of exact degeneracies (rank-one R matrices, unit
/// phases colliding on the circle) that polynomial coefficients would smear
/// by ε^(1/m). The characteristic polynomial still provides the residual
/// acceptance gate on every returned root.
pub fn eigenvalues4(m: &Matrix4) -> Result<[C64; 4], QmatError> {
    if let Some((row, col)) = m.first_non_finite() {
        return Err(QmatError::NonFinite { row, col });
    }
    let scale = m.max_norm();
    if scale == 0.0 {
        return Ok([C64::new(0.0, 0.0); 4]);
    }
    let ms = m.scale(C64::new(1.0 / scale, 0.0));

    let mut h = ms.0;
    hessenberg_reduce(&mut h);
    let roots = qr_eigenvalues(h)?;

    // Residual gate against the characteristic polynomial (via Newton's
    // identities on power traces): every accepted root must sit on it.
    let m2 = ms.mul(&ms);
    let m3 = m2.mul(&ms);
    let m4 = m2.mul(&m2);
    let t = [ms.trace(), m2.trace(), m3.trace(), m4.trace()];
    let e1 = t[0];
    let e2 = (e1 * t[0] - t[1]) / 2.0;
    let e3 = (e2 * t[0] - e1 * t[1] + t[2]) / 3.0;
    let e4 = (e3 * t[0] - e2 * t[1] + e1 * t[2] - t[3]) / 4.0;
    let coeffs = [e4, -e3, e2, -e1];
    let residuals = [
        eval_poly(&coeffs, roots[0]).norm(),
        eval_poly(&coeffs, roots[1]).norm(),
        eval_poly(&coeffs, roots[2]).norm(),
        eval_poly(&coeffs, roots[3]).norm(),
    ];
    let coeff_scale = coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
    if residuals.iter().any(|r| *r > tol::EIGEN_RESIDUAL * coeff_scale) {
        return Err(QmatError::RootConvergence { residuals });
    }

    Ok(roots.map(|r| r * scale))
}

fn eval_poly(coeffs: &[C64; 4], x: C64) -> C64 {
    ((x + coeffs[3]) * x + coeffs[2]) * x * x + coeffs[1] * x + coeffs[0]
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg_reduce(a: &mut [[C64; 4]; 4]) {
    for k in 0..2 {
        // Reflect column k below the subdiagonal onto the subdiagonal.
        let mut norm_sq = 0.0;
        for r in (k + 1)..4 {
            norm_sq += a[r][k].norm_sqr();
        }
        let pivot = a[k + 1][k];
        let tail_sq = norm_sq - pivot.norm_sqr();
        if tail_sq <= 0.0 || norm_sq == 0.0 {
            continue;
        }
        let norm = norm_sq.sqrt();
        let phase = if pivot.norm() > 0.0 { pivot / pivot.norm() } else { C64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        // v = x − α e1, normalized.
        let mut v = [C64::new(0.0, 0.0); 4];
        v[k + 1] = pivot - alpha;
        for r in (k + 2)..4 {
            v[r] = a[r][k];
        }
        let vnorm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for x in v.iter_mut() {
            *x /= vnorm;
        }
        // A ← (I − 2vv†) A
        for c in 0..4 {
            let mut dot = C64::new(0.0, 0.0);
            for r in (k + 1)..4 {
                dot += v[r].conj() * a[r][c];
            }
            for r in (k + 1)..4 {
                a[r][c] -= 2.0 * v[r] * dot;
            }
        }
        // A ← A (I − 2vv†)
        for r in 0..4 {
            let mut dot = C64::new(0.0, 0.0);
            for c in (k + 1)..4 {
                dot += a[r][c] * v[c];
            }
            for c in (k + 1)..4 {
                a[r][c] -= 2.0 * dot * v[c].conj();
            }
        }
    }
}

/// Eigenvalues of the two-by-two block [[a, b], [c, d]].
fn eig2(a: C64, b: C64, c: C64, d: C64) -> (C64, C64) {
    let tr = a + d;
    let disc = (tr * tr - 4.0 * (a * d - b * c)).sqrt();
    ((tr + disc) / 2.0, (tr - disc) / 2.0)
}

/// Shifted QR iteration with deflation on a 4×4 upper Hessenberg matrix.
fn qr_eigenvalues(mut h: [[C64; 4]; 4]) -> Result<[C64; 4], QmatError> {
    let mut eigs = [C64::new(0.0, 0.0); 4];
    let mut found = 0usize;
    let mut n = 4usize; // active block is rows/cols 0..n
    let mut iterations = 0usize;

    while n > 2 {
        // Deflate wherever a subdiagonal has collapsed. The floor term covers
        // corners whose neighbouring diagonals are themselves ~0 (rank-one
        // inputs): anything ε-small relative to the whole matrix is noise.
        let hmax = h
            .iter()
            .flatten()
            .map(|e| e.norm())
            .fold(0.0, f64::max)
            .max(1e-300);
        let eps_at = |h: &[[C64; 4]; 4], k: usize| {
            f64::EPSILON * (h[k - 1][k - 1].norm() + h[k][k].norm()).max(hmax)
        };
        if h[n - 1][n - 2].norm() <= eps_at(&h, n - 1) {
            eigs[found] = h[n - 1][n - 1];
            found += 1;
            n -= 1;
            continue;
        }
        if n > 2 && h[n - 2][n - 3].norm() <= eps_at(&h, n - 2) {
            let (l1, l2) = eig2(h[n - 2][n - 2], h[n - 2][n - 1], h[n - 1][n - 2], h[n - 1][n - 1]);
            eigs[found] = l1;
            eigs[found + 1] = l2;
            found += 2;
            n -= 2;
            continue;
        }

        iterations += 1;
        if iterations > ROOT_ITER_CAP {
            let residuals = [
                h[1][0].norm(),
                h[2][1].norm(),
                h[3][2].norm(),
                0.0,
            ];
            return Err(QmatError::RootConvergence { residuals });
        }

        // Wilkinson shift: trailing-2×2 eigenvalue closest to the corner,
        // with an occasional exceptional shift to break symmetry stalls.
        let shift = if iterations % 16 == 0 {
            h[n - 1][n - 1] + C64::new(h[n - 1][n - 2].norm(), 0.0)
        } else {
            let (l1, l2) = eig2(h[n - 2][n - 2], h[n - 2][n - 1], h[n - 1][n - 2], h[n - 1][n - 1]);
            if (l1 - h[n - 1][n - 1]).norm() < (l2 - h[n - 1][n - 1]).norm() { l1 } else { l2 }
        };

        for i in 0..n {
            h[i][i] -= shift;
        }
        // Givens sweep: zero the subdiagonal (left), then apply the adjoint
        // rotations from the right for RQ.
        let mut rotations = [(0.0f64, C64::new(0.0, 0.0)); 3];
        for k in 0..(n - 1) {
            let (x, y) = (h[k][k], h[k + 1][k]);
            let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
            let (gc, gs) = if r == 0.0 || x.norm() == 0.0 {
                (0.0, C64::new(1.0, 0.0))
            } else {
                (x.norm() / r, (x / x.norm()) * y.conj() / r)
            };
            for col in 0..n {
                let (top, bottom) = (h[k][col], h[k + 1][col]);
                h[k][col] = gc * top + gs * bottom;
                h[k + 1][col] = -gs.conj() * top + gc * bottom;
            }
            rotations[k] = (gc, gs);
        }
        for (k, &(gc, gs)) in rotations.iter().enumerate().take(n - 1) {
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

    if n == 2 {
        let (l1, l2) = eig2(h[0][0], h[0][1], h[1][0], h[1][1]);
        eigs[found] = l1;
        eigs[found + 1] = l2;
        found += 2;
    } else if n == 1 {
        eigs[found] = h[0][0];
        found += 1;
    }
    debug_assert_eq!(found, 4);
    Ok(eigs)
}
