//! Sup-norm error tables along sequences of multi-indices.

use rug::Float;

use super::checks::describe;
use super::report::CheckReport;
use super::zeros::classify_zeros;
use crate::error::{Error, Result};
use crate::hermite_pade::{solve_type1_multipoint, solve_type2, Type1Approximant, Type2Approximant};
use crate::nikishin::{MultiIndex, NikishinSystem};
use crate::numkernel::{cabs, machine_spacing, precision, Cplx, Poly};
use crate::perturbation::PerturbedSystem;

/// Largest error over the grid for one multi-index and one component.
#[derive(Clone, Debug)]
pub struct ErrorRow {
    pub multi_index: String,
    pub j: usize,
    pub sup_error: f64,
    pub worst_point: String,
}

#[derive(Clone, Debug)]
pub struct ErrorTable {
    pub anchor: &'static str,
    pub grid: Vec<String>,
    pub rows: Vec<ErrorRow>,
}

impl ErrorTable {
    pub fn new(anchor: &'static str, grid: &[Cplx], rows: Vec<ErrorRow>) -> Self {
        ErrorTable {
            anchor,
            grid: grid.iter().map(describe).collect(),
            rows,
        }
    }

    /// Components present, in order of first appearance.
    pub fn components(&self) -> Vec<usize> {
        let mut js: Vec<usize> = Vec::new();
        for r in &self.rows {
            if !js.contains(&r.j) {
                js.push(r.j);
            }
        }
        js
    }

    /// Errors of component `j` in table order.
    pub fn errors(&self, j: usize) -> Vec<f64> {
        self.rows.iter().filter(|r| r.j == j).map(|r| r.sup_error).collect()
    }

    pub fn strictly_decreasing(&self, j: usize) -> bool {
        self.errors(j).windows(2).all(|w| w[1] < w[0])
    }

    /// One measurement per consecutive pair: `e(n_{i+1}) / e(n_i) < 1`.
    pub fn monotonicity_report(&self, check: &str) -> CheckReport {
        let mut rep = CheckReport::new(check, self.anchor);
        let below_one = 1.0 - f64::EPSILON;
        for j in self.components() {
            let rows: Vec<&ErrorRow> = self.rows.iter().filter(|r| r.j == j).collect();
            for w in rows.windows(2) {
                let ratio = if w[0].sup_error == 0.0 {
                    f64::INFINITY
                } else {
                    w[1].sup_error / w[0].sup_error
                };
                rep.at_most(format!("error ratio {} -> {}", w[0].multi_index, w[1].multi_index), Some(j), ratio, below_one);
            }
        }
        rep.meta("grid", self.grid.join(" "));
        rep
    }
}

fn check_grid_point(ps: &PerturbedSystem, z: &Cplx) -> Result<()> {
    ps.base().generator(1).spec.check_off_support(z)?;
    let guard = Float::with_val(precision(), machine_spacing() * 1000u32).to_f64().max(1e-30);
    for pole in ps.lcm_poles() {
        if cabs(&Cplx::with_val(precision(), z - &pole.root)).to_f64() < guard {
            return Err(Error::PoleOnSupport {
                point: describe(z),
                alpha: pole.describe(),
                beta: pole.describe(),
            });
        }
    }
    Ok(())
}

fn sup_over_grid<F>(grid: &[Cplx], mut err: F) -> Result<(f64, String)>
where
    F: FnMut(&Cplx) -> Result<f64>,
{
    let mut best = (f64::NEG_INFINITY, String::new());
    for z in grid {
        let e = err(z)?;
        // NaN wins so that a broken evaluation cannot hide
        if e.is_nan() || e > best.0 {
            best = (e, describe(z));
            if e.is_nan() {
                break;
            }
        }
    }
    Ok(best)
}

/// `max_z |P_j(z)/Q(z) - f_j(z)|` for every `j`.
pub fn type2_errors(t2: &Type2Approximant, ps: &PerturbedSystem, grid: &[Cplx]) -> Result<Vec<ErrorRow>> {
    for z in grid {
        check_grid_point(ps, z)?;
    }
    let p = precision();
    (1..=ps.m())
        .map(|j| {
            let (sup_error, worst_point) = sup_over_grid(grid, |z| {
                let q = t2.q.eval_complex(z);
                let approx = Cplx::with_val(p, t2.p_j(j).eval_complex(z) / q);
                let f = ps.eval_f(j, z)?;
                Ok(cabs(&Cplx::with_val(p, approx - f)).to_f64())
            })?;
            Ok(ErrorRow {
                multi_index: t2.n.to_string(),
                j,
                sup_error,
                worst_point,
            })
        })
        .collect()
}

/// Solves every index of `lambda` and tabulates `sup |P_j/Q - f_j|`.
pub fn convergence_table_type2(ps: &PerturbedSystem, lambda: &[MultiIndex], grid: &[Cplx]) -> Result<ErrorTable> {
    let mut rows = Vec::new();
    for n in lambda {
        let t2 = solve_type2(ps, n)?;
        rows.extend(type2_errors(&t2, ps, grid)?);
    }
    Ok(ErrorTable::new("type2-uniform-convergence", grid, rows))
}

/// Limit of `a_j / a_m`: `(-1)^(m-j) (t_m / t_j) s^_{m,j+1}(z)`.
pub fn ratio_target(sys: &NikishinSystem, t: &[Poly], j: usize, z: &Cplx) -> Result<Cplx> {
    let m = sys.m();
    if j >= m {
        return Err(Error::InvalidInput(format!("ratio target needs j < m = {m}, got {j}")));
    }
    let p = precision();
    let tj = t[j].eval_complex(z);
    if cabs(&tj).is_zero() {
        return Err(Error::PoleOnSupport {
            point: describe(z),
            alpha: format!("zero of t_{j}"),
            beta: format!("zero of t_{j}"),
        });
    }
    let s = sys.nested_cauchy(m, j + 1, z)?;
    let mut v = Cplx::with_val(p, t[m].eval_complex(z) * s) / tj;
    if (m - j) % 2 == 1 {
        v = -v;
    }
    Ok(v)
}

/// `max_z |a_j(z)/a_m(z) - target_j(z)|` for `j = 0..m-1`.
pub fn type1_ratio_errors(t1: &Type1Approximant, sys: &NikishinSystem, grid: &[Cplx]) -> Result<Vec<ErrorRow>> {
    let m = sys.m();
    let last = &sys.generator(m).spec;
    for z in grid {
        last.check_off_support(z)?;
    }
    let p = precision();
    (0..m)
        .map(|j| {
            let (sup_error, worst_point) = sup_over_grid(grid, |z| {
                let ratio = Cplx::with_val(p, t1.a[j].eval_complex(z) / t1.a[m].eval_complex(z));
                let target = ratio_target(sys, &t1.t, j, z)?;
                Ok(cabs(&Cplx::with_val(p, ratio - target)).to_f64())
            })?;
            Ok(ErrorRow {
                multi_index: t1.n.to_string(),
                j,
                sup_error,
                worst_point,
            })
        })
        .collect()
}

/// Lower bound on the zeros of every `a_j` inside `Delta_m`:
/// at least `|n| / (m + 1) - c1`.
pub fn type1_zero_counts(t1: &Type1Approximant, sys: &NikishinSystem, c1: f64) -> Result<CheckReport> {
    let m = sys.m();
    let spec = &sys.generator(m).spec;
    let bound = t1.n.abs() as f64 / (m + 1) as f64 - c1;
    let mut rep = CheckReport::new("coefficient-zeros", "type1-coefficient-zeros").with_index(&t1.n);
    for (j, a) in t1.a.iter().enumerate() {
        let zeros = classify_zeros(a, &spec.alpha, &spec.beta, &[], 0.0)?;
        rep.at_least("zeros in interior of Delta_m", Some(j), zeros.interior as f64, bound);
    }
    rep.meta("C1", c1);
    Ok(rep)
}

/// Default `C1 = 2 + max deg t_j`.
pub fn default_c1(t: &[Poly]) -> f64 {
    2.0 + t.iter().filter_map(Poly::degree).max().unwrap_or(0) as f64
}

#[derive(Clone, Debug)]
pub struct Type1RatioTable {
    pub errors: ErrorTable,
    pub zeros: Vec<CheckReport>,
}

/// Solves the multipoint type I problem (no interpolation nodes) along
/// `lambda` and tabulates the ratio errors and the zero counts of `a_j`.
pub fn type1_ratio_table(
    sys: &NikishinSystem,
    t: &[Poly],
    lambda: &[MultiIndex],
    grid: &[Cplx],
    c1: f64,
) -> Result<Type1RatioTable> {
    let mut rows = Vec::new();
    let mut zeros = Vec::new();
    for n in lambda {
        let t1 = solve_type1_multipoint(sys, t, n, &[])?;
        rows.extend(type1_ratio_errors(&t1, sys, grid)?);
        zeros.push(type1_zero_counts(&t1, sys, c1)?);
    }
    Ok(Type1RatioTable {
        errors: ErrorTable::new("type1-ratio-asymptotics", grid, rows),
        zeros,
    })
}
