//! Type II approximants `(Q, P_1..P_m)`, type I forms `(a_0..a_m)` and the
//! multipoint type I forms with forced factors `t_j` and node polynomial `w`.

mod type1;
mod type2;

pub use type1::{linear_form_eval, linear_form_eval_perturbed, linear_form_real, solve_type1, solve_type1_multipoint, Type1Approximant};
pub use type2::{solve_type2, Type2Approximant};

use crate::error::{Error, Result};
use crate::numkernel::{normalize_vector, nullspace, real, Matrix, Real};

/// Outcome of a kernel search.
#[derive(Clone, Debug)]
pub(crate) struct Selected {
    pub vector: Vec<Real>,
    /// Kernel dimension of the system as posed.
    pub dim: usize,
    /// Unimposed conditions appended to reach a one-dimensional kernel.
    pub extra: usize,
}

/// Kernel vector of `rows` (each of length `cols`). A kernel of dimension
/// greater than one is cut down by appending rows from `next` until it is
/// one-dimensional; if `next` runs out the first basis vector is returned.
pub(crate) fn select_kernel<F>(mut rows: Vec<Vec<Real>>, cols: usize, mut next: F) -> Result<Selected>
where
    F: FnMut() -> Option<Vec<Real>>,
{
    if cols == 0 {
        return Err(Error::InfeasibleDegrees("no unknowns".into()));
    }
    let mut dim = None;
    let mut extra = 0;
    loop {
        let basis = if cols == 1 {
            if rows.iter().any(|r| !r[0].is_zero()) {
                return Err(Error::NoKernel);
            }
            vec![vec![real(1)]]
        } else if rows.is_empty() {
            (0..cols)
                .map(|i| {
                    let mut v = vec![real(0); cols];
                    v[i] = real(1);
                    v
                })
                .collect()
        } else {
            nullspace(&Matrix::from_rows(rows.clone())?)?.basis
        };
        let d = *dim.get_or_insert(basis.len());
        if basis.len() == 1 {
            return Ok(Selected {
                vector: basis.into_iter().next().unwrap(),
                dim: d,
                extra,
            });
        }
        match next() {
            Some(row) => {
                rows.push(row);
                extra += 1;
            }
            None => {
                let mut v = basis.into_iter().next().unwrap();
                normalize_vector(&mut v);
                return Ok(Selected { vector: v, dim: d, extra });
            }
        }
    }
}
