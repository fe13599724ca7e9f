//! Desk-scale laboratory for qutrit-qutrit entanglement dynamics.
//!
//! The crate builds the two Horodecki bound-entangled families, couples an
//! auxiliary qubit to one qutrit through a z-axis Dzyaloshinskii–Moriya
//! interaction, evolves and reduces the composite state, and evaluates three
//! entanglement detectors — negativity, the realignment (CCNR) measure, and
//! the reduction criterion — over (α, c0, Dt) parameter grids.
//!
//! Layout mirrors the pipeline:
//!
//! * [`linalg`] — dense complex matrices, a Jacobi Hermitian eigensolver,
//!   singular values, trace norm, and the Hermitian-generator exponential.
//! * [`tensor`] — subsystem shapes, density-matrix validation, partial
//!   trace, partial transpose, realignment.
//! * [`states`] — the Horodecki families, the ancilla qubit, composition.
//! * [`evolution`] — DM Hamiltonian variants, propagators, reduction back
//!   to the pair, and the printed closed-form table with its comparator.
//! * [`criteria`] — the three detectors and the classification label.
//! * [`sweep`] — the parallel grid engine with CSV and plot emission.
//!
//! The `entlab` binary exposes the pipeline as CLI subcommands; see the
//! README for usage.

pub mod criteria;
pub mod error;
pub mod evolution;
pub mod linalg;
pub mod states;
pub mod sweep;
pub mod tensor;
pub mod tol;

pub use num_complex::Complex64;

pub use criteria::{
    classify, evaluate, negativity, realignment_measure, reduction_report, ClassificationLabel,
    CriteriaResult, ReductionReport,
};
pub use error::{Error, Result};
pub use evolution::{
    closed_form_state1, compare_closed_form, dm_hamiltonian_bc, embed_full, evolve_and_reduce,
    select_variant, ClosedFormEntries, EntryResidual, EvolutionParams, Evolver,
    HamiltonianVariant, VariantSelection,
};
pub use linalg::{
    expm_hermitian_generator, herm_eig, kron, singular_values, trace_norm, ComplexMatrix,
    HermitianEigensystem,
};
pub use states::{
    aux_qubit, compose, horodecki_state, horodecki_state1, horodecki_state2, HorodeckiFamily,
    PureQubitState,
};
pub use sweep::{
    emit_csv, emit_plot_data, find_negative_region, parse_csv, run_sweep,
    run_sweep_with_workers, GridRange, PlotAxis, RegionBounds, RegionReport, SweepConfig,
    SweepRecord, WitnessPoint,
};
pub use tensor::{partial_trace, partial_transpose, realign, DensityMatrix, SubsystemShape};
