//! Initial states: the two Horodecki qutrit-qutrit families, the auxiliary
//! qubit, and the tripartite composite.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix};
use crate::tensor::{DensityMatrix, SubsystemShape};
use crate::tol;

/// Which Horodecki family a state belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HorodeckiFamily {
    State1,
    State2,
}

impl HorodeckiFamily {
    /// The α interval on which the family's classification is established.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            HorodeckiFamily::State1 => (2.0, 5.0),
            HorodeckiFamily::State2 => (0.0, 1.0),
        }
    }

    pub fn domain_contains(&self, alpha: f64) -> bool {
        match self {
            HorodeckiFamily::State1 => (2.0..=5.0).contains(&alpha),
            HorodeckiFamily::State2 => alpha > 0.0 && alpha < 1.0,
        }
    }
}

impl std::fmt::Display for HorodeckiFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HorodeckiFamily::State1 => write!(f, "1"),
            HorodeckiFamily::State2 => write!(f, "2"),
        }
    }
}

impl std::str::FromStr for HorodeckiFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(HorodeckiFamily::State1),
            "2" => Ok(HorodeckiFamily::State2),
            other => Err(Error::Parameter(format!("unknown family '{other}', expected 1 or 2"))),
        }
    }
}

/// Pure state of the auxiliary qubit C, |φ⟩ = c0|0⟩ + c1|1⟩ with c1 real
/// nonnegative.
#[derive(Debug, Clone, Copy)]
pub struct PureQubitState {
    c0: Complex64,
    c1: f64,
}

impl PureQubitState {
    pub fn c0(&self) -> Complex64 {
        self.c0
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    /// The 2×2 density matrix |φ⟩⟨φ|.
    pub fn density(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(2, 2);
        m.set(0, 0, Complex64::new(self.c0.norm_sqr(), 0.0));
        m.set(0, 1, self.c0 * self.c1);
        m.set(1, 0, self.c0.conj() * self.c1);
        m.set(1, 1, Complex64::new(self.c1 * self.c1, 0.0));
        m
    }
}

/// Normalized qubit state from the |0⟩ amplitude; c1 = √(1 - |c0|²).
pub fn aux_qubit(c0: Complex64) -> Result<PureQubitState> {
    let n0 = c0.norm_sqr();
    if !n0.is_finite() || n0 > 1.0 + tol::NORMALIZATION_TOL {
        return Err(Error::Parameter(format!("|c0| must be at most 1, got |c0|² = {n0}")));
    }
    let c1 = (1.0 - n0).max(0.0).sqrt();
    Ok(PureQubitState { c0, c1 })
}

/// First Horodecki family: (2/7)P + (α/21)Q + ((5-α)/21)R on 2 ≤ α ≤ 5,
/// with P the projector on (|00⟩+|11⟩+|22⟩)/√3, Q on {|01⟩,|12⟩,|20⟩} and
/// R on {|10⟩,|21⟩,|02⟩}.
pub fn horodecki_state1(alpha: f64) -> Result<DensityMatrix> {
    horodecki_state(HorodeckiFamily::State1, alpha, false)
}

/// Second Horodecki family on 0 < α < 1; the 9×9 matrix with global factor
/// 1/(8α+1). Hermiticity fixes the (9,5) entry to α.
pub fn horodecki_state2(alpha: f64) -> Result<DensityMatrix> {
    horodecki_state(HorodeckiFamily::State2, alpha, false)
}

/// Family dispatcher. With `allow_out_of_domain` the α domain check is
/// skipped, but the result must still pass density-matrix validation, so
/// parameter values that break Hermiticity or positivity are rejected
/// rather than silently producing a non-state.
pub fn horodecki_state(
    family: HorodeckiFamily,
    alpha: f64,
    allow_out_of_domain: bool,
) -> Result<DensityMatrix> {
    if !alpha.is_finite() {
        return Err(Error::Parameter(format!("alpha must be finite, got {alpha}")));
    }
    if !allow_out_of_domain && !family.domain_contains(alpha) {
        let (lo, hi) = family.domain();
        return Err(Error::Parameter(format!(
            "alpha = {alpha} outside the family-{family} domain [{lo}, {hi}]"
        )));
    }
    let mat = match family {
        HorodeckiFamily::State1 => state1_matrix(alpha),
        HorodeckiFamily::State2 => state2_matrix(alpha),
    };
    DensityMatrix::new(mat, SubsystemShape::new(&[3, 3])?)
}

fn state1_matrix(alpha: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(9, 9);
    let p = 2.0 / 21.0; // (2/7) · (1/3)
    for &i in &[0usize, 4, 8] {
        for &j in &[0usize, 4, 8] {
            m.set(i, j, Complex64::new(p, 0.0));
        }
    }
    for &i in &[1usize, 5, 6] {
        m.set(i, i, Complex64::new(alpha / 21.0, 0.0));
    }
    for &i in &[3usize, 7, 2] {
        m.set(i, i, Complex64::new((5.0 - alpha) / 21.0, 0.0));
    }
    m
}

fn state2_matrix(alpha: f64) -> ComplexMatrix {
    let norm = 1.0 / (8.0 * alpha + 1.0);
    let a = alpha * norm;
    let b = (1.0 + alpha) / 2.0 * norm;
    let s = (1.0 - alpha * alpha).sqrt() / 2.0 * norm;
    let mut m = ComplexMatrix::zeros(9, 9);
    for i in 0..9 {
        m.set(i, i, Complex64::new(a, 0.0));
    }
    m.set(6, 6, Complex64::new(b, 0.0));
    m.set(8, 8, Complex64::new(b, 0.0));
    for &(i, j) in &[(0usize, 4usize), (0, 8), (4, 8)] {
        m.set(i, j, Complex64::new(a, 0.0));
        m.set(j, i, Complex64::new(a, 0.0));
    }
    m.set(6, 8, Complex64::new(s, 0.0));
    m.set(8, 6, Complex64::new(s, 0.0));
    m
}

/// ρ_AB ⊗ ρ_c as an 18×18 state with shape (3,3,2).
pub fn compose(rho_ab: &DensityMatrix, qubit: &PureQubitState) -> Result<DensityMatrix> {
    if rho_ab.shape().dims() != [3, 3] {
        return Err(Error::Shape(format!(
            "compose expects a (3,3) state, got {:?}",
            rho_ab.shape().dims()
        )));
    }
    let mat = kron(rho_ab.matrix(), &qubit.density());
    // tensor product of valid states: positivity holds by construction
    DensityMatrix::trusted(mat, SubsystemShape::new(&[3, 3, 2])?)
}
