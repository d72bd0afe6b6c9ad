//! Numerical verification: orthogonality and remainder residuals, zero
//! localization, sign changes, AT sampling and convergence tables.

pub mod checks;
pub mod report;
pub mod sampler;
pub mod sign;
pub mod tables;
pub mod zeros;

pub use checks::{
    orthogonality_residuals, phi_sign_change_check, psl_identity_check, remainder_check, remainder_lhs,
    remainder_rhs, type2_series_check,
};
pub use report::{CheckReport, Measurement, Relation};
pub use sign::{sign_changes, uniform_grid, SignChanges};
pub use zeros::{classify_zeros, zero_check, zero_report_type2, DiskCount, ZeroReport};
pub use sampler::{at_sampler, form_sign_changes};
pub use tables::{
    convergence_table_type2, default_c1, ratio_target, type1_ratio_errors, type1_ratio_table, type1_zero_counts,
    type2_errors, ErrorRow, ErrorTable, Type1RatioTable,
};
