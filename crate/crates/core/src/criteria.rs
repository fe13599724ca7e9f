//! Entanglement detectors on the qutrit pair: negativity, the realignment
//! measure, the reduction criterion, and the combined classification label.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, kron, trace_norm, ComplexMatrix};
use crate::tensor::{partial_trace, partial_transpose, realign, DensityMatrix};
use crate::tol;

/// Label combining the two detector readings.
///
/// The detectors certify entanglement but cannot certify separability, so
/// there is no "separable" label; states both tests miss are `Undetected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassificationLabel {
    Undetected,
    BoundEntangledPPT,
    FreeEntangled,
    RealignmentNegative,
}

impl std::fmt::Display for ClassificationLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let text = match self {
            ClassificationLabel::Undetected => "Undetected",
            ClassificationLabel::BoundEntangledPPT => "BoundEntangledPPT",
            ClassificationLabel::FreeEntangled => "FreeEntangled",
            ClassificationLabel::RealignmentNegative => "RealignmentNegative",
        };
        write!(f, "{text}")
    }
}

impl std::str::FromStr for ClassificationLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Undetected" => Ok(ClassificationLabel::Undetected),
            "BoundEntangledPPT" => Ok(ClassificationLabel::BoundEntangledPPT),
            "FreeEntangled" => Ok(ClassificationLabel::FreeEntangled),
            "RealignmentNegative" => Ok(ClassificationLabel::RealignmentNegative),
            other => Err(Error::Parameter(format!("unknown classification label '{other}'"))),
        }
    }
}

/// Detector readings for one state.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CriteriaResult {
    pub negativity: f64,
    pub realignment: f64,
    pub label: ClassificationLabel,
}

/// Minimum eigenvalues of the two reduction-criterion operators.
/// Either one going negative certifies distillability.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ReductionReport {
    /// min eig of ρ_A ⊗ I − ρ
    pub min_eig_side_a: f64,
    /// min eig of I ⊗ ρ_B − ρ
    pub min_eig_side_b: f64,
    pub distillable: bool,
}

/// N = (‖ρ^T‖ − 1)/2 with the partial transpose on the second factor.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    let pt = partial_transpose(rho)?;
    Ok((trace_norm(&pt)? - 1.0) / 2.0)
}

/// R = (‖ρ^R‖ − 1)/2 with the realigned matrix.
pub fn realignment_measure(rho: &DensityMatrix) -> Result<f64> {
    let r = realign(rho)?;
    Ok((trace_norm(&r)? - 1.0) / 2.0)
}

/// Evaluates both one-sided reduction conditions. The criterion needs only
/// one side, but recording both shows which side triggers.
pub fn reduction_report(rho: &DensityMatrix) -> Result<ReductionReport> {
    let dims = rho.shape().dims();
    if dims.len() != 2 {
        return Err(Error::Shape(format!(
            "reduction criterion requires exactly two factors, got {dims:?}"
        )));
    }
    let (da, db) = (dims[0], dims[1]);
    let rho_a = partial_trace(rho, 1)?;
    let rho_b = partial_trace(rho, 0)?;
    let side_a = kron(rho_a.matrix(), &ComplexMatrix::identity(db)).sub(rho.matrix())?;
    let side_b = kron(&ComplexMatrix::identity(da), rho_b.matrix()).sub(rho.matrix())?;
    let min_a = herm_eig(&side_a)?.min_eigenvalue();
    let min_b = herm_eig(&side_b)?.min_eigenvalue();
    Ok(ReductionReport {
        min_eig_side_a: min_a,
        min_eig_side_b: min_b,
        distillable: min_a.min(min_b) < -tol::REDUCTION_TOL,
    })
}

/// Deterministic label from the two detector values.
pub fn classify(n: f64, r: f64) -> ClassificationLabel {
    if n > tol::N_TOL {
        ClassificationLabel::FreeEntangled
    } else if r > tol::R_TOL {
        ClassificationLabel::BoundEntangledPPT
    } else if r < -tol::R_TOL {
        ClassificationLabel::RealignmentNegative
    } else {
        ClassificationLabel::Undetected
    }
}

/// Both detectors plus the label in one call.
pub fn evaluate(rho: &DensityMatrix) -> Result<CriteriaResult> {
    let n = negativity(rho)?;
    let r = realignment_measure(rho)?;
    Ok(CriteriaResult {
        negativity: n,
        realignment: r,
        label: classify(n, r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::expm_hermitian_generator;
    use crate::states::{aux_qubit, horodecki_state1, horodecki_state2};
    use crate::tensor::SubsystemShape;
    use num_complex::Complex64;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_entangled33() -> DensityMatrix {
        let mut m = ComplexMatrix::zeros(9, 9);
        for &i in &[0usize, 4, 8] {
            for &j in &[0usize, 4, 8] {
                m.set(i, j, c(1.0 / 3.0, 0.0));
            }
        }
        DensityMatrix::new(m, SubsystemShape::new(&[3, 3]).unwrap()).unwrap()
    }

    fn random_pure3(rng: &mut ChaCha8Rng) -> Vec<Complex64> {
        let mut v: Vec<Complex64> = (0..3)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= norm;
        }
        v
    }

    fn product_state(rng: &mut ChaCha8Rng) -> DensityMatrix {
        let a = random_pure3(rng);
        let b = random_pure3(rng);
        let mut m = ComplexMatrix::zeros(9, 9);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let amp = a[i] * b[j] * (a[k] * b[l]).conj();
                        m.set(i * 3 + j, k * 3 + l, amp);
                    }
                }
            }
        }
        DensityMatrix::new(m, SubsystemShape::new(&[3, 3]).unwrap()).unwrap()
    }

    /// Convex mixture of random product states; separable by construction.
    fn separable_mixture(rng: &mut ChaCha8Rng, terms: usize) -> DensityMatrix {
        let weights: Vec<f64> = (0..terms).map(|_| rng.random_range(0.1..1.0)).collect();
        let total: f64 = weights.iter().sum();
        let mut m = ComplexMatrix::zeros(9, 9);
        for w in &weights {
            let p = product_state(rng);
            m = m.add(&p.matrix().scaled(c(w / total, 0.0))).unwrap();
        }
        DensityMatrix::new(m, SubsystemShape::new(&[3, 3]).unwrap()).unwrap()
    }

    #[test]
    fn negativity_of_product_and_max_entangled() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..5 {
            let p = product_state(&mut rng);
            assert!(negativity(&p).unwrap().abs() < 1e-10);
        }
        assert!((negativity(&max_entangled33()).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn negativity_of_horodecki_family1() {
        assert!(negativity(&horodecki_state1(4.5).unwrap()).unwrap() > tol::N_TOL);
        assert!(negativity(&horodecki_state1(3.5).unwrap()).unwrap().abs() < 1e-10);
    }

    #[test]
    fn realignment_examples() {
        // maximally mixed: single singular value 1/3, so R = -1/3
        let mm = DensityMatrix::new(
            ComplexMatrix::identity(9).scaled(c(1.0 / 9.0, 0.0)),
            SubsystemShape::new(&[3, 3]).unwrap(),
        )
        .unwrap();
        assert!((realignment_measure(&mm).unwrap() + 1.0 / 3.0).abs() < 1e-10);
        assert!(realignment_measure(&horodecki_state1(2.5).unwrap()).unwrap() <= 0.0);
        assert!(realignment_measure(&horodecki_state2(0.5).unwrap()).unwrap() > 0.0);
    }

    #[test]
    fn realignment_bounded_by_local_dimension() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..10 {
            let s = separable_mixture(&mut rng, 4);
            let r = realignment_measure(&s).unwrap();
            assert!(r <= (3.0 - 1.0) / 2.0 + 1e-9);
        }
        // trace norm of the realigned matrix itself is ≤ d = 3
        let tn = crate::linalg::trace_norm(&realign(&max_entangled33()).unwrap()).unwrap();
        assert!(tn <= 3.0 + 1e-9);
    }

    #[test]
    fn reduction_of_max_entangled() {
        let rep = reduction_report(&max_entangled33()).unwrap();
        assert!((rep.min_eig_side_a + 2.0 / 3.0).abs() < 1e-10);
        assert!((rep.min_eig_side_b + 2.0 / 3.0).abs() < 1e-10);
        assert!((rep.min_eig_side_a - rep.min_eig_side_b).abs() < 1e-10);
        assert!(rep.distillable);
    }

    #[test]
    fn reduction_of_product_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..5 {
            let p = product_state(&mut rng);
            let rep = reduction_report(&p).unwrap();
            assert!(rep.min_eig_side_a >= -1e-10);
            assert!(rep.min_eig_side_b >= -1e-10);
            assert!(!rep.distillable);
        }
    }

    #[test]
    fn classify_table() {
        assert_eq!(classify(0.05, 0.02), ClassificationLabel::FreeEntangled);
        assert_eq!(classify(0.0, 0.01), ClassificationLabel::BoundEntangledPPT);
        assert_eq!(classify(0.0, -0.02), ClassificationLabel::RealignmentNegative);
        assert_eq!(classify(0.0, 0.0), ClassificationLabel::Undetected);
        assert_eq!(classify(1e-12, 1e-12), ClassificationLabel::Undetected);
        // pure and total: equal inputs, equal labels
        assert_eq!(classify(0.05, 0.02), classify(0.05, 0.02));
    }

    #[test]
    fn negativity_local_unitary_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let rho = horodecki_state1(4.7).unwrap();
        let n0 = negativity(&rho).unwrap();
        for _ in 0..5 {
            let ha = crate::linalg::test_support::random_hermitian(3, &mut rng);
            let hb = crate::linalg::test_support::random_hermitian(3, &mut rng);
            let ua = expm_hermitian_generator(&ha, 0.9).unwrap();
            let ub = expm_hermitian_generator(&hb, 1.7).unwrap();
            let u = kron(&ua, &ub);
            let rotated = u.mul(rho.matrix()).unwrap().mul(&u.dagger()).unwrap();
            let rotated =
                DensityMatrix::new(rotated, SubsystemShape::new(&[3, 3]).unwrap()).unwrap();
            assert!((negativity(&rotated).unwrap() - n0).abs() < 1e-9);
        }
    }

    #[test]
    fn separable_fixtures_undetected_by_negativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..8 {
            let s = separable_mixture(&mut rng, 5);
            assert!(negativity(&s).unwrap().abs() < 1e-9);
            let rep = reduction_report(&s).unwrap();
            assert!(rep.min_eig_side_a >= -1e-9);
            assert!(rep.min_eig_side_b >= -1e-9);
        }
    }

    #[test]
    fn ppt_implies_reduction_on_evolved_states() {
        use crate::evolution::{Evolver, HamiltonianVariant};
        let evolver = Evolver::new(HamiltonianVariant::Spin1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..10 {
            let alpha = rng.random_range(2.0..5.0);
            let c0 = rng.random_range(0.0..1.0);
            let dt = rng.random_range(0.0..5.0);
            let rho = horodecki_state1(alpha).unwrap();
            let qubit = aux_qubit(c(c0, 0.0)).unwrap();
            let out = evolver.evolve_and_reduce(&rho, &qubit, dt).unwrap();
            let pt_min = herm_eig(&partial_transpose(&out).unwrap())
                .unwrap()
                .min_eigenvalue();
            if pt_min >= -1e-10 {
                let rep = reduction_report(&out).unwrap();
                assert!(
                    rep.min_eig_side_a >= -1e-9 && rep.min_eig_side_b >= -1e-9,
                    "PPT state violating reduction at alpha={alpha}, c0={c0}, dt={dt}"
                );
            }
        }
    }
}
