//! Subsystem bookkeeping on density matrices: partial trace, partial
//! transpose, and realignment.
//!
//! The composite basis is ordered `|a⟩⊗|b⟩⊗|c⟩` with the leftmost factor
//! most significant: row index = a·(d_B·d_C) + b·d_C + c.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, ComplexMatrix};
use crate::tol;

/// Ordered local dimensions of a tensor factorization, e.g. (3,3) for a
/// qutrit pair or (3,3,2) with an ancilla qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemShape {
    dims: Vec<usize>,
}

impl SubsystemShape {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Shape("shape needs at least one factor".into()));
        }
        if dims.iter().any(|&d| d < 2) {
            return Err(Error::Shape(format!("every local dimension must be >= 2, got {dims:?}")));
        }
        Ok(Self { dims: dims.to_vec() })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn factors(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Shape with factor `index` removed.
    fn without(&self, index: usize) -> Result<Self> {
        if index >= self.dims.len() {
            return Err(Error::Dimension(format!(
                "subsystem index {index} out of range for shape {:?}",
                self.dims
            )));
        }
        if self.dims.len() == 1 {
            return Err(Error::Shape("cannot trace out the only factor".into()));
        }
        let mut dims = self.dims.clone();
        dims.remove(index);
        Self::new(&dims)
    }
}

/// A validated quantum state: Hermitian, unit trace, positive up to slack,
/// tagged with its tensor factorization.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    shape: SubsystemShape,
}

impl DensityMatrix {
    /// Admits a matrix as a state after checking shape consistency, unit
    /// trace, Hermiticity, and positivity (minimum eigenvalue ≥ -1e-9).
    pub fn new(mat: ComplexMatrix, shape: SubsystemShape) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::InvalidState(format!(
                "density matrix must be square, got {}x{}",
                mat.rows(),
                mat.cols()
            )));
        }
        if shape.total_dim() != mat.rows() {
            return Err(Error::Shape(format!(
                "shape {:?} implies dimension {} but the matrix is {}x{}",
                shape.dims(),
                shape.total_dim(),
                mat.rows(),
                mat.cols()
            )));
        }
        mat.check_finite()?;
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol::TRACE_TOL || tr.im.abs() > tol::TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let dev = mat.hermitian_deviation();
        if dev > tol::HERMITICITY_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian: max |A - A†| entry = {dev:.3e}"
            )));
        }
        let min_eig = herm_eig(&mat)?.min_eigenvalue();
        if min_eig < -tol::POSITIVITY_SLACK {
            return Err(Error::InvalidState(format!(
                "minimum eigenvalue {min_eig:.3e} below the -{:.0e} positivity slack",
                tol::POSITIVITY_SLACK
            )));
        }
        Ok(Self { mat, shape })
    }

    /// Constructor for states whose validity is guaranteed by construction
    /// (tensor products of valid states, partial traces of valid states).
    /// Skips the eigenvalue check; shape consistency is still enforced.
    pub(crate) fn trusted(mat: ComplexMatrix, shape: SubsystemShape) -> Result<Self> {
        if shape.total_dim() != mat.rows() || !mat.is_square() {
            return Err(Error::Shape(format!(
                "shape {:?} does not match a {}x{} matrix",
                shape.dims(),
                mat.rows(),
                mat.cols()
            )));
        }
        mat.check_finite()?;
        Ok(Self { mat, shape })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn shape(&self) -> &SubsystemShape {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(herm_eig(&self.mat)?.min_eigenvalue())
    }

    fn bipartite_dims(&self) -> Result<(usize, usize)> {
        match self.shape.dims() {
            [d1, d2] => Ok((*d1, *d2)),
            other => Err(Error::Shape(format!(
                "operation requires exactly two factors, shape has {:?}",
                other
            ))),
        }
    }
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

fn decode(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let s = strides(dims);
    dims.iter()
        .enumerate()
        .map(|(k, _)| {
            let v = index / s[k];
            index %= s[k];
            v
        })
        .collect()
}

/// Reduced density matrix with subsystem `subsystem` traced out.
pub fn partial_trace(rho: &DensityMatrix, subsystem: usize) -> Result<DensityMatrix> {
    let dims = rho.shape().dims();
    let out_shape = rho.shape().without(subsystem)?;
    let traced_dim = dims[subsystem];
    let full_strides = strides(dims);
    let kept_dims = out_shape.dims();
    let out_dim = out_shape.total_dim();

    let embed = |multi: &[usize], k: usize| -> usize {
        let mut full = 0;
        let mut m = 0;
        for (pos, stride) in full_strides.iter().enumerate() {
            let v = if pos == subsystem {
                k
            } else {
                let v = multi[m];
                m += 1;
                v
            };
            full += v * stride;
        }
        full
    };

    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    for i in 0..out_dim {
        let mi = decode(i, kept_dims);
        for j in 0..out_dim {
            let mj = decode(j, kept_dims);
            let mut sum = Complex64::new(0.0, 0.0);
            for k in 0..traced_dim {
                sum += rho.matrix().get(embed(&mi, k), embed(&mj, k));
            }
            out.set(i, j, sum);
        }
    }
    DensityMatrix::trusted(out, out_shape)
}

/// Partial transpose on the second factor of a bipartite state:
/// entry at row (i,j), column (k,l) of the result is ρ[(i,l),(k,j)].
///
/// The output is Hermitian with unit trace but possibly non-positive, so it
/// is returned as a plain matrix.
pub fn partial_transpose(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let (d1, d2) = rho.bipartite_dims()?;
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(d1 * d2, d1 * d2);
    for i in 0..d1 {
        for j in 0..d2 {
            for k in 0..d1 {
                for l in 0..d2 {
                    out.set(i * d2 + j, k * d2 + l, m.get(i * d2 + l, k * d2 + j));
                }
            }
        }
    }
    Ok(out)
}

/// Realignment of a bipartite state: the d₁²×d₂² matrix whose entry at
/// row (i,k), column (j,l) is ρ[(i,j),(k,l)].
pub fn realign(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    let (d1, d2) = rho.bipartite_dims()?;
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(d1 * d1, d2 * d2);
    for i in 0..d1 {
        for k in 0..d1 {
            for j in 0..d2 {
                for l in 0..d2 {
                    out.set(i * d1 + k, j * d2 + l, m.get(i * d2 + j, k * d2 + l));
                }
            }
        }
    }
    Ok(out)
}
