//! Numerical toolkit for rational orthogonal systems on the unit circle:
//! basis construction, partial-sum and maximal operators, linearized
//! Carleson machinery, structural probes, model bilinear forms and
//! nonlinear phase unwinding.

pub mod blaschke;
pub mod carleson;
pub mod circle;
pub mod error;
pub mod experiments;
pub mod mt;
pub mod plot;
pub mod probe;
pub mod unwinding;

pub use blaschke::{
    blaschke_eval, build_phase_table, cell_index, mobius_phase, mobius_phase_deriv, DiskPoint,
    MTSequence, PhaseTable, SequenceKind,
};
pub use carleson::{
    chi, hilbert_h, hilbert_tilde, hilbert_tilde_kernel_route, linearized_adjoint,
    linearized_carleson, psi_diff_deriv, quadratic_form_b, LevelFunction,
};
pub use circle::{
    from_spectrum, hardy_project, hl_maximal, inner_product, random_trig_poly, reduce_angle,
    to_spectrum, CircleGrid, GridFunction, SpectrumFunction, TAU,
};
pub use error::{Error, Result};
pub use experiments::{
    counterexample_rows, lacunary_rows, random_analytic_poly, run_corollary_b,
    run_counterexample, run_lacunary, run_thm1, CounterexampleRow, ExperimentConfig,
    LacunaryRow,
};
pub use plot::{emit_plot, PlotSpec};
pub use probe::{
    associated_pairs, build_e_and_p, claim2_sigma, eta, ktilde, model_dilate, model_t,
    random_admissible_input, tau, AssociatedPairs, EAndP, GridMaps, ProbeConfig, SparseSeq,
};
pub use unwinding::{
    blaschke_factorize, blaschke_product_boundary, poly_roots, telescoping_error, unwind,
    unwind_to_mt, Factorization, MtComparison, PolynomialH2, UnwindingResult, UnwindingStep,
};
pub use mt::{
    build_basis, expand, make_sequence, maximal_partial_sum, orthonormality_deviation,
    partial_sum, required_grid_size, trigonometric_deviation, MTBasis, MTExpansion,
    PartialSumMethod,
};
