//! Hermitian eigensolver (cyclic Jacobi with complex rotations), singular
//! values, trace norm, and the matrix exponential of a Hermitian generator.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tol;

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted nondecreasing; column `k` of `eigenvectors` is the
/// unit eigenvector paired with `eigenvalues[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEigensystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigensystem {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += m.get(i, j).norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One complex Jacobi rotation annihilating the (p,q) entry.
///
/// The rotation is `A <- U† A U` with
/// `U = [[c, s·e^{iφ}], [-s·e^{-iφ}, c]]` on the (p,q) plane, where
/// `A[p,q] = |A[p,q]|·e^{iφ}`.
fn jacobi_rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m.get(p, q);
    let abs = apq.norm();
    if abs == 0.0 {
        return;
    }
    let app = m.get(p, p).re;
    let aqq = m.get(q, q).re;
    let tau = (aqq - app) / (2.0 * abs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let phase = apq / abs;
    let n = m.rows();

    // column update: A <- A·U
    for k in 0..n {
        let akp = m.get(k, p);
        let akq = m.get(k, q);
        m.set(k, p, akp * c - akq * s * phase.conj());
        m.set(k, q, akp * s * phase + akq * c);
    }
    // row update: A <- U†·A
    for k in 0..n {
        let apk = m.get(p, k);
        let aqk = m.get(q, k);
        m.set(p, k, apk * c - aqk * s * phase);
        m.set(q, k, apk * s * phase.conj() + aqk * c);
    }
    // the pivot pair is now diagonal up to rounding
    m.set(p, q, Complex64::new(0.0, 0.0));
    m.set(q, p, Complex64::new(0.0, 0.0));
    m.set(p, p, Complex64::new(m.get(p, p).re, 0.0));
    m.set(q, q, Complex64::new(m.get(q, q).re, 0.0));

    // accumulate eigenvectors: V <- V·U
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c - vkq * s * phase.conj());
        v.set(k, q, vkp * s * phase + vkq * c);
    }
}

/// Diagonalizes a Hermitian matrix by cyclic Jacobi sweeps.
pub fn herm_eig(a: &ComplexMatrix) -> Result<HermitianEigensystem> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition requires a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    a.check_finite()?;
    let dev = a.hermitian_deviation();
    if dev > tol::HERMITICITY_TOL {
        return Err(Error::NotHermitian {
            deviation: dev,
            tolerance: tol::HERMITICITY_TOL,
        });
    }
    let n = a.rows();

    // work on the Hermitian average so input rounding cannot bias one triangle
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m.set(i, i, Complex64::new(a.get(i, i).re, 0.0));
        for j in (i + 1)..n {
            let avg = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
            m.set(i, j, avg);
            m.set(j, i, avg.conj());
        }
    }
    let mut v = ComplexMatrix::identity(n);

    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < tol::JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&m) < tol::JACOBI_OFF_TOL {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                jacobi_rotate(&mut m, &mut v, p, q);
            }
        }
        sweeps += 1;
    }
    if !converged && off_diagonal_norm(&m) >= tol::JACOBI_OFF_TOL {
        return Err(Error::NoConvergence {
            sweeps,
            off_norm: off_diagonal_norm(&m),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).re.total_cmp(&m.get(j, j).re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m.get(i, i).re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for k in 0..n {
            eigenvectors.set(k, dst, v.get(k, src));
        }
    }
    Ok(HermitianEigensystem { eigenvalues, eigenvectors })
}

/// Singular values, nonincreasing: square roots of the eigenvalues of M†M
/// clamped at zero.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let gram = m.dagger().mul(m)?;
    let eig = herm_eig(&gram)?;
    Ok(eig
        .eigenvalues
        .iter()
        .rev()
        .map(|&l| l.max(0.0).sqrt())
        .collect())
}

/// Trace norm (sum of singular values).
///
/// Hermitian inputs take the cheaper route through the absolute eigenvalues;
/// the two routes agree within 1e-9 and the test suite pins that down.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "trace norm requires a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if m.is_hermitian(tol::HERMITICITY_TOL) {
        let eig = herm_eig(m)?;
        Ok(eig.eigenvalues.iter().map(|l| l.abs()).sum())
    } else {
        Ok(singular_values(m)?.iter().sum())
    }
}

/// `U = exp(-i·H·t)` for Hermitian `H`, via the eigendecomposition.
pub fn expm_hermitian_generator(h: &ComplexMatrix, t: f64) -> Result<ComplexMatrix> {
    if !t.is_finite() {
        return Err(Error::Parameter(format!("time parameter must be finite, got {t}")));
    }
    let eig = herm_eig(h)?;
    Ok(propagator_from_eigensystem(&eig, t))
}

/// Same as [`expm_hermitian_generator`] but reusing a precomputed eigensystem.
pub fn propagator_from_eigensystem(eig: &HermitianEigensystem, t: f64) -> ComplexMatrix {
    let v = &eig.eigenvectors;
    let n = v.rows();
    let mut scaled = ComplexMatrix::zeros(n, n);
    for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
        let phase = Complex64::new(0.0, -lambda * t).exp();
        for k in 0..n {
            scaled.set(k, j, v.get(k, j) * phase);
        }
    }
    scaled.mul(&v.dagger()).expect("square dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::test_support::random_hermitian;
    use crate::linalg::unitarity_deviation;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_matrix_eigenvalues_sorted() {
        let m = ComplexMatrix::from_real_rows(&[&[3.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 2.0]])
            .unwrap();
        let eig = herm_eig(&m).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_x_eigenvalues() {
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let eig = herm_eig(&x).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_square_and_non_hermitian() {
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(herm_eig(&rect), Err(Error::Dimension(_))));
        let mut m = ComplexMatrix::identity(2);
        m.set(0, 1, c(1.0, 0.0)); // (1,0) stays 0: not Hermitian
        assert!(matches!(herm_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn random_hermitian_reconstruction() {
        // 1000 matrices total across the dimensions the crate actually uses
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &n in &[2usize, 3, 6, 9, 18] {
            for _ in 0..200 {
                let a = random_hermitian(n, &mut rng);
                let eig = herm_eig(&a).unwrap();
                // V†V = I
                let vtv = eig.eigenvectors.dagger().mul(&eig.eigenvectors).unwrap();
                assert!(vtv.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-10);
                // A·V = V·diag(λ)
                let av = a.mul(&eig.eigenvectors).unwrap();
                let mut vl = eig.eigenvectors.clone();
                for j in 0..n {
                    for k in 0..n {
                        vl.set(k, j, vl.get(k, j) * eig.eigenvalues[j]);
                    }
                }
                assert!(av.max_abs_diff(&vl) < tol::EIG_RESIDUAL_TOL);
                // reconstruction V·diag(λ)·V†
                let rec = vl.mul(&eig.eigenvectors.dagger()).unwrap();
                assert!(rec.max_abs_diff(&a) < 1e-10);
                // eigenvalue sum equals trace
                let sum: f64 = eig.eigenvalues.iter().sum();
                assert!((sum - a.trace().re).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn singular_values_identity_and_sign() {
        let sv = singular_values(&ComplexMatrix::identity(3)).unwrap();
        for s in &sv {
            assert!((s - 1.0).abs() < 1e-12);
        }
        let d = ComplexMatrix::from_real_rows(&[&[-2.0, 0.0], &[0.0, 1.0]]).unwrap();
        let sv = singular_values(&d).unwrap();
        assert!((sv[0] - 2.0).abs() < 1e-12);
        assert!((sv[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_values_sorted_nonnegative_frobenius() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let mut m = ComplexMatrix::zeros(5, 5);
            for i in 0..5 {
                for j in 0..5 {
                    m.set(i, j, c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
                }
            }
            let sv = singular_values(&m).unwrap();
            for w in sv.windows(2) {
                assert!(w[0] >= w[1]);
            }
            assert!(sv.iter().all(|&s| s >= 0.0));
            let frob2: f64 = sv.iter().map(|s| s * s).sum();
            assert!((frob2 - m.frobenius_norm().powi(2)).abs() < 1e-9);
        }
    }

    #[test]
    fn trace_norm_examples() {
        assert!((trace_norm(&ComplexMatrix::identity(3)).unwrap() - 3.0).abs() < 1e-12);
        let d = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -2.0]]).unwrap();
        assert!((trace_norm(&d).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn trace_norm_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = random_hermitian(6, &mut rng);
            let by_eig = trace_norm(&a).unwrap();
            let by_sv: f64 = singular_values(&a).unwrap().iter().sum();
            assert!((by_eig - by_sv).abs() < 1e-9);
        }
    }

    #[test]
    fn expm_zero_time_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let h = random_hermitian(6, &mut rng);
        let u = expm_hermitian_generator(&h, 0.0).unwrap();
        assert!(u.max_abs_diff(&ComplexMatrix::identity(6)) < 1e-13);
    }

    #[test]
    fn expm_pauli_z_pi() {
        let z = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap();
        let u = expm_hermitian_generator(&z, std::f64::consts::PI).unwrap();
        let minus_i = ComplexMatrix::identity(2).scaled(c(-1.0, 0.0));
        assert!(u.max_abs_diff(&minus_i) < 1e-14);
    }

    #[test]
    fn expm_group_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let h = random_hermitian(6, &mut rng);
        let u = expm_hermitian_generator(&h, 0.37).unwrap();
        let uinv = expm_hermitian_generator(&h, -0.37).unwrap();
        let prod = u.mul(&uinv).unwrap();
        assert!(prod.max_abs_diff(&ComplexMatrix::identity(6)) < 1e-10);
        assert!(unitarity_deviation(&u) < tol::UNITARITY_TOL);
    }

    #[test]
    fn trace_norm_unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let m = random_hermitian(5, &mut rng);
            let u = expm_hermitian_generator(&random_hermitian(5, &mut rng), 0.8).unwrap();
            let w = expm_hermitian_generator(&random_hermitian(5, &mut rng), 1.3).unwrap();
            let rotated = u.mul(&m).unwrap().mul(&w).unwrap();
            let a = trace_norm(&rotated).unwrap();
            let b = trace_norm(&m).unwrap();
            assert!((a - b).abs() < 1e-9, "trace norm not unitarily invariant: {a} vs {b}");
        }
    }
}
