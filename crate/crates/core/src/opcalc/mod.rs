//! Exact graded-operator calculus on the truncated space: per-degree
//! matrices, series in u and v, the shift operators, D_n, the conjugations
//! N^{+-1} and the partially defined S^{-1}, adjoints for both pairings,
//! and the degree-window bookkeeping that keeps truncation honest.

mod graded;
mod ops;
mod series;

pub use graded::{DegreeWindow, GradedOperator, Mismatch, Pairing};
pub use ops::{
    adjoint, columns_to_op, d_op, defining_relation_mismatches, ek_skew, hk_skew, mult_op,
    n_conj, n_conj_series, s_inverse_homogeneous, s_inverse_series, s_inverse_star_dual,
    skew_op, tau_op, tau_series, tau_star_tau_inverse, tau_star_tau_op, taustar_op,
    taustar_tau, ConjDirection, TauDirection,
};
pub use series::{lift_mismatches, OperatorSeries, SeriesMismatch};

#[cfg(test)]
mod tests;
