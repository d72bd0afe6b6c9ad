//! Arbitrary-precision scalars, polynomials, expansions at infinity, dense
//! kernels and polynomial zeros.

pub mod linalg;
pub mod poly;
pub mod prec;
pub mod roots;
pub mod series;

pub use linalg::{determinant, nullspace, relative_residual, Kernel, Matrix};
pub use poly::{normalize_vector, Poly};
pub use prec::{
    cabs, cluster_tol, cplx, kernel_tol, machine_spacing, max_abs, parse_real, precision, real, root_tol,
    set_precision, trim_threshold, zero, Cplx, Real, DEFAULT_PRECISION, MIN_PRECISION,
};
pub use roots::{poly_roots, raw_roots, RootCluster};
pub use series::{series_divide, AsymptoticSeries};
