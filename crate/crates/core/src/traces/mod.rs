//! Dirac operators, localized shell counts and trace series.

mod census;
mod dimension;
mod dirac;
mod series;

pub use census::{
    big_ln, count_by_search, count_series, count_series_enumerated, Census, CountSeries, Group,
    Level, Levels,
};
pub use dimension::{compactness_norms, spectral_dimension, DimensionEstimate};
pub use dirac::{
    commutator_apply, commutator_norm_bound, dirac_apply, shift_commutator_apply, source_basis,
    CommutatorBound, DiracKind, DiracScalar,
};
pub use series::{
    theta_trace, theta_trace_with, zeta_abscissa_bisection, zeta_trace, zeta_trace_with,
    SeriesOptions, TraceResult,
};
