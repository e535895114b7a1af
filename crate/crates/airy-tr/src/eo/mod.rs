//! Eynard-Orantin recursion on local spectral curves.

mod bivar;
pub mod curve;

pub use curve::{
    builtin_airy, builtin_bessel, builtin_two_airy, classify, from_global_rational, global_basis_series,
    kernel_expansion, BasisDifferential, ChartKind, GlobalChart, KernelData, Label, LocalSpectralCurve, PointChart,
};
pub mod recursion;

pub use recursion::{compute_correlators, compute_correlators_for, label_code, pole_bound, CorrelatorTable, Key, POINT_STRIDE};
pub mod checks;

pub use checks::{
    compare_with_abstract_tr, compare_with_virasoro, dilaton_check, free_energy, intersection_normalization,
    intersection_numbers_from_airy, structural_checks, ComparisonReport, Mismatch, StructuralReport,
};
