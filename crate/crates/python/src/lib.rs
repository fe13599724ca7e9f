//! Python bindings for the qutrit-qutrit entanglement laboratory.
//!
//! Matrices cross the boundary as nested lists of Python complex numbers
//! (row-major, 9×9 for the qutrit pair). The module exposes the state
//! constructors, the DM evolution, the three entanglement criteria, and the
//! sweep engine; see `python/smoke_test.py` for usage.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use entlab::{
    ComplexMatrix, DensityMatrix, Error, Evolver, GridRange, HamiltonianVariant,
    HorodeckiFamily, SubsystemShape, SweepConfig,
};

fn py_err(e: Error) -> PyErr {
    match e.exit_code() {
        1 => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn parse_family(family: &str) -> PyResult<HorodeckiFamily> {
    family.parse().map_err(py_err)
}

fn parse_variant(variant: Option<&str>) -> PyResult<HamiltonianVariant> {
    match variant {
        Some(v) => v.parse().map_err(py_err),
        None => Ok(HamiltonianVariant::default()),
    }
}

fn matrix_to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
        .collect()
}

fn rows_to_matrix(rows: Vec<Vec<Complex64>>) -> PyResult<ComplexMatrix> {
    let r = rows.len();
    if r == 0 {
        return Err(PyValueError::new_err("empty matrix"));
    }
    let c = rows[0].len();
    if rows.iter().any(|row| row.len() != c) {
        return Err(PyValueError::new_err("ragged matrix rows"));
    }
    let data: Vec<Complex64> = rows.into_iter().flatten().collect();
    ComplexMatrix::new(r, c, data).map_err(py_err)
}

fn rows_to_pair_state(rows: Vec<Vec<Complex64>>) -> PyResult<DensityMatrix> {
    let m = rows_to_matrix(rows)?;
    if m.rows() != 9 || m.cols() != 9 {
        return Err(PyValueError::new_err(format!(
            "expected a 9x9 qutrit-pair density matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    DensityMatrix::new(m, SubsystemShape::new(&[3, 3]).map_err(py_err)?).map_err(py_err)
}

/// First Horodecki family at the given alpha (9x9 nested list).
#[pyfunction]
fn horodecki_state1(alpha: f64) -> PyResult<Vec<Vec<Complex64>>> {
    let rho = entlab::horodecki_state1(alpha).map_err(py_err)?;
    Ok(matrix_to_rows(rho.matrix()))
}

/// Second Horodecki family at the given alpha (9x9 nested list).
#[pyfunction]
fn horodecki_state2(alpha: f64) -> PyResult<Vec<Vec<Complex64>>> {
    let rho = entlab::horodecki_state2(alpha).map_err(py_err)?;
    Ok(matrix_to_rows(rho.matrix()))
}

/// Evolve a family state with the DM coupling and reduce back to the pair.
#[pyfunction]
#[pyo3(signature = (family, alpha, c0, dt, variant=None, allow_out_of_domain=false))]
fn evolve_and_reduce(
    family: &str,
    alpha: f64,
    c0: f64,
    dt: f64,
    variant: Option<&str>,
    allow_out_of_domain: bool,
) -> PyResult<Vec<Vec<Complex64>>> {
    let family = parse_family(family)?;
    let variant = parse_variant(variant)?;
    let rho = entlab::horodecki_state(family, alpha, allow_out_of_domain).map_err(py_err)?;
    let qubit = entlab::aux_qubit(Complex64::new(c0, 0.0)).map_err(py_err)?;
    let evolver = Evolver::new(variant).map_err(py_err)?;
    let out = evolver.evolve_and_reduce(&rho, &qubit, dt).map_err(py_err)?;
    Ok(matrix_to_rows(out.matrix()))
}

/// Negativity (‖ρ^T‖−1)/2 of a 9x9 qutrit-pair state.
#[pyfunction]
fn negativity(matrix: Vec<Vec<Complex64>>) -> PyResult<f64> {
    entlab::negativity(&rows_to_pair_state(matrix)?).map_err(py_err)
}

/// Realignment measure (‖ρ^R‖−1)/2 of a 9x9 qutrit-pair state.
#[pyfunction]
fn realignment_measure(matrix: Vec<Vec<Complex64>>) -> PyResult<f64> {
    entlab::realignment_measure(&rows_to_pair_state(matrix)?).map_err(py_err)
}

/// Minimum eigenvalues (side A, side B) of the reduction-criterion operators.
#[pyfunction]
fn reduction_min_eigs(matrix: Vec<Vec<Complex64>>) -> PyResult<(f64, f64)> {
    let rep = entlab::reduction_report(&rows_to_pair_state(matrix)?).map_err(py_err)?;
    Ok((rep.min_eig_side_a, rep.min_eig_side_b))
}

/// Eigenvalues (ascending) and eigenvector columns of a Hermitian matrix.
#[pyfunction]
fn herm_eig(matrix: Vec<Vec<Complex64>>) -> PyResult<(Vec<f64>, Vec<Vec<Complex64>>)> {
    let m = rows_to_matrix(matrix)?;
    let eig = entlab::herm_eig(&m).map_err(py_err)?;
    Ok((eig.eigenvalues.clone(), matrix_to_rows(&eig.eigenvectors)))
}

/// Trace norm (sum of singular values) of a square matrix.
#[pyfunction]
fn trace_norm(matrix: Vec<Vec<Complex64>>) -> PyResult<f64> {
    entlab::trace_norm(&rows_to_matrix(matrix)?).map_err(py_err)
}

/// All criteria at one parameter point; returns a dict mirroring the CLI
/// `classify` output.
#[pyfunction]
#[pyo3(signature = (family, alpha, c0, dt, variant=None, allow_out_of_domain=false))]
fn classify_point<'py>(
    py: Python<'py>,
    family: &str,
    alpha: f64,
    c0: f64,
    dt: f64,
    variant: Option<&str>,
    allow_out_of_domain: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let fam = parse_family(family)?;
    let var = parse_variant(variant)?;
    let rho = entlab::horodecki_state(fam, alpha, allow_out_of_domain).map_err(py_err)?;
    let qubit = entlab::aux_qubit(Complex64::new(c0, 0.0)).map_err(py_err)?;
    let evolver = Evolver::new(var).map_err(py_err)?;
    let out = evolver.evolve_and_reduce(&rho, &qubit, dt).map_err(py_err)?;
    let crit = entlab::evaluate(&out).map_err(py_err)?;
    let red = entlab::reduction_report(&out).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("family", family)?;
    d.set_item("alpha", alpha)?;
    d.set_item("c0", c0)?;
    d.set_item("dt", dt)?;
    d.set_item("variant", var.to_string())?;
    d.set_item("negativity", crit.negativity)?;
    d.set_item("realignment", crit.realignment)?;
    d.set_item("red_min_a", red.min_eig_side_a)?;
    d.set_item("red_min_b", red.min_eig_side_b)?;
    d.set_item("distillable", red.distillable)?;
    d.set_item("label", crit.label.to_string())?;
    d.set_item("out_of_domain", !fam.domain_contains(alpha))?;
    Ok(d)
}

/// Grid sweep; `alpha` and `dt` are (min, max, steps) triples. Returns one
/// dict per grid point, ordered by (c0, alpha, dt).
#[pyfunction]
#[pyo3(signature = (family, alpha, c0_values, dt, variant=None, allow_out_of_domain=false, workers=None))]
#[allow(clippy::too_many_arguments)]
fn run_sweep<'py>(
    py: Python<'py>,
    family: &str,
    alpha: (f64, f64, usize),
    c0_values: Vec<f64>,
    dt: (f64, f64, usize),
    variant: Option<&str>,
    allow_out_of_domain: bool,
    workers: Option<usize>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let config = SweepConfig {
        family: parse_family(family)?,
        alpha_range: GridRange::new(alpha.0, alpha.1, alpha.2).map_err(py_err)?,
        c0_values,
        dt_range: GridRange::new(dt.0, dt.1, dt.2).map_err(py_err)?,
        variant: parse_variant(variant)?,
        allow_out_of_domain,
        output_path: None,
    };
    let records = entlab::run_sweep_with_workers(&config, workers).map_err(py_err)?;
    records
        .iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("family", r.family.to_string())?;
            d.set_item("alpha", r.alpha)?;
            d.set_item("c0", r.c0)?;
            d.set_item("dt", r.dt)?;
            d.set_item("negativity", r.negativity)?;
            d.set_item("realignment", r.realignment)?;
            d.set_item("red_min_a", r.red_min_a)?;
            d.set_item("red_min_b", r.red_min_b)?;
            d.set_item("label", r.label_text())?;
            Ok(d)
        })
        .collect()
}

/// Runs the Hamiltonian variant-selection oracle; returns the winner and
/// the per-variant residuals.
#[pyfunction]
fn select_variant(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let sel = entlab::select_variant().map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("winner", sel.winner.to_string())?;
    d.set_item("tie_break_used", sel.tie_break_used)?;
    let residuals: Vec<(String, f64)> = sel
        .residuals
        .iter()
        .map(|(v, r)| (v.to_string(), *r))
        .collect();
    d.set_item("residuals", residuals)?;
    let freqs: Vec<(String, f64)> = sel
        .frequency_scores
        .iter()
        .map(|(v, s)| (v.to_string(), *s))
        .collect();
    d.set_item("frequency_scores", freqs)?;
    Ok(d)
}

#[pymodule]
fn entlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(horodecki_state1, m)?)?;
    m.add_function(wrap_pyfunction!(horodecki_state2, m)?)?;
    m.add_function(wrap_pyfunction!(evolve_and_reduce, m)?)?;
    m.add_function(wrap_pyfunction!(negativity, m)?)?;
    m.add_function(wrap_pyfunction!(realignment_measure, m)?)?;
    m.add_function(wrap_pyfunction!(reduction_min_eigs, m)?)?;
    m.add_function(wrap_pyfunction!(herm_eig, m)?)?;
    m.add_function(wrap_pyfunction!(trace_norm, m)?)?;
    m.add_function(wrap_pyfunction!(classify_point, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(select_variant, m)?)?;
    Ok(())
}
