use rug::Float;

use super::select_kernel;
use crate::error::{Error, Result};
use crate::nikishin::{MultiIndex, NikishinSystem};
use crate::numkernel::{cplx, precision, real, series_divide, zero, AsymptoticSeries, Cplx, Poly, Real};
use crate::perturbation::PerturbedSystem;

/// Type I form `(a_0, ..., a_m)` for an index `(n_0, ..., n_m)`, possibly with
/// forced factors `t_j` and interpolation nodes (the zeros of `w`).
#[derive(Clone, Debug)]
pub struct Type1Approximant {
    pub n: MultiIndex,
    /// `a_0 ..= a_m`; the full coefficient polynomials are `a_j t_j`.
    pub a: Vec<Poly>,
    pub t: Vec<Poly>,
    pub w: Poly,
    pub nodes: Vec<(Real, usize)>,
    /// `sum_j deg t_j`.
    pub d: usize,
    pub unknowns: usize,
    pub conditions: usize,
    pub kernel_dim: usize,
    pub extra_conditions: usize,
    /// Deepest decay conditions dropped because the kernel came out empty.
    pub relaxations: usize,
}

impl Type1Approximant {
    pub fn m(&self) -> usize {
        self.a.len() - 1
    }

    /// `a_j t_j`.
    pub fn p_j(&self, j: usize) -> Poly {
        &self.a[j] * &self.t[j]
    }
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Type I form for `f_j = s^_{1,j} + r_j`: the coefficients of `a_1..a_m`
/// span the kernel, `a_0` is minus the polynomial part of `sum a_j f_j`
/// truncated to degree `n_0 - 1`, and `a_0 + sum a_j f_j = O(z^-(|n| - N_n))`.
pub fn solve_type1(ps: &PerturbedSystem, n: &MultiIndex) -> Result<Type1Approximant> {
    let m = ps.m();
    if n.len() != m + 1 {
        return Err(Error::InvalidInput(format!("type I index {n} needs {} components", m + 1)));
    }
    let comps = n.components();
    let size = n.abs();
    let big = n.big_n();
    let cols: usize = comps[1..].iter().sum();
    if cols == 0 {
        return Err(Error::InfeasibleDegrees(format!("index {n} leaves a_1..a_m empty")));
    }
    let maxn = *comps[1..].iter().max().unwrap();
    let k = 2 * size + maxn + 4;
    let tables: Vec<Vec<Real>> = (1..=m).map(|j| ps.perturbed_series(j, k)).collect::<Result<_>>()?;

    // coefficient of z^e in sum_j a_j f_j, one entry per unknown
    let row = |e: i64| -> Vec<Real> {
        let mut out = Vec::with_capacity(cols);
        for j in 1..=m {
            for i in 0..comps[j] as i64 {
                let idx = i - e - 1;
                out.push(if idx >= 0 { tables[j - 1][idx as usize].clone() } else { zero() });
            }
        }
        out
    };

    let mut rows = Vec::new();
    for e in comps[0] as i64..=maxn as i64 - 2 {
        rows.push(row(e));
    }
    let depth = size as i64 - big as i64 - 1;
    for e in 1..=depth {
        rows.push(row(-e));
    }
    let conditions = rows.len();
    let mut next_e = -depth - 1;
    let mut budget = cols;
    let selected = select_kernel(rows, cols, || {
        if budget == 0 {
            return None;
        }
        budget -= 1;
        let r = row(next_e);
        next_e -= 1;
        Some(r)
    })?;
    let v = selected.vector;

    let p = precision();
    let a0 = (0..comps[0] as i64)
        .map(|e| {
            -row(e)
                .iter()
                .zip(&v)
                .fold(zero(), |acc, (x, y)| acc + Float::with_val(p, x * y))
        })
        .collect();
    let mut a = vec![Poly::new(a0)];
    let mut offset = 0;
    for &nj in &comps[1..] {
        a.push(Poly::new(v[offset..offset + nj].to_vec()));
        offset += nj;
    }
    Ok(Type1Approximant {
        n: n.clone(),
        a,
        t: vec![Poly::one(); m + 1],
        w: Poly::one(),
        nodes: Vec::new(),
        d: 0,
        unknowns: cols,
        conditions,
        kernel_dim: selected.dim,
        extra_conditions: selected.extra,
        relaxations: 0,
    })
}

/// Multipoint type I form with forced factors `t = (t_0..t_m)` and
/// interpolation nodes `(x, multiplicity)` off `Delta_1`.
///
/// Unknowns are the coefficients of `a_0..a_m` with `deg a_j t_j <= n_j - 1`.
/// The form `A_0 = a_0 t_0 + sum a_j t_j s^_{1,j}` must vanish at the nodes
/// and `A_0 / w` must be `O(z^-(|n| - N_n - D))`. When the kernel is empty the
/// deepest decay condition is dropped, at most twice.
pub fn solve_type1_multipoint(
    sys: &NikishinSystem,
    t: &[Poly],
    n: &MultiIndex,
    nodes: &[(Real, usize)],
) -> Result<Type1Approximant> {
    let m = sys.m();
    if n.len() != m + 1 || t.len() != m + 1 {
        return Err(Error::InvalidInput(format!(
            "multipoint form needs {} components and factors, got {} and {}",
            m + 1,
            n.len(),
            t.len()
        )));
    }
    let comps = n.components();
    let mut deg_t = Vec::with_capacity(m + 1);
    for (j, tj) in t.iter().enumerate() {
        let Some(d) = tj.degree() else {
            return Err(Error::InvalidInput(format!("t_{j} is the zero polynomial")));
        };
        if comps[j] <= d {
            return Err(Error::InfeasibleDegrees(format!("n_{j} = {} must exceed deg t_{j} = {d}", comps[j])));
        }
        deg_t.push(d);
    }
    let d: usize = deg_t.iter().sum();
    let size = n.abs();
    let big = n.big_n();

    let first = &sys.generator(1).spec;
    let mut w = Poly::one();
    let mut dw = 0;
    for (x, mult) in nodes {
        if *mult == 0 {
            continue;
        }
        if first.check_off_support(&cplx(x)).is_err() {
            return Err(Error::HypothesisViolation(format!("node {} lies on Delta_1", x.to_f64())));
        }
        let factor = Poly::new(vec![-x.clone(), real(1)]);
        for _ in 0..*mult {
            w = &w * &factor;
        }
        dw += mult;
    }
    if dw + d + 1 > size {
        return Err(Error::InfeasibleDegrees(format!(
            "{dw} interpolation conditions exceed |n| - D - 1 = {}",
            size as i64 - d as i64 - 1
        )));
    }

    let unknowns = size - d;
    let k = 2 * size + dw + 4;
    let s_series: Vec<AsymptoticSeries> = (1..=m)
        .map(|j| Ok(AsymptoticSeries::from_coeffs(sys.nested_moments(1, j, k)?.moments)))
        .collect::<Result<_>>()?;

    // column basis: (j, z^e t_j)
    let mut basis: Vec<(usize, Poly)> = Vec::with_capacity(unknowns);
    for j in 0..=m {
        for e in 0..comps[j] - deg_t[j] {
            basis.push((j, t[j].shift(e)));
        }
    }
    let col_series: Vec<AsymptoticSeries> = basis
        .iter()
        .map(|(j, b)| {
            let s = if *j == 0 {
                AsymptoticSeries::new(b.clone(), vec![zero(); k])
            } else {
                s_series[j - 1].mul_poly(b, k)
            };
            series_divide(&s, &w, k)
        })
        .collect::<Result<_>>()?;

    let p = precision();
    let mut rows: Vec<Vec<Real>> = Vec::new();
    for (x, mult) in nodes.iter().filter(|(_, mu)| *mu > 0) {
        let s_derivs: Vec<Vec<Real>> = (1..=m)
            .map(|j| Ok(sys.chain_rule(1, j)?.cauchy_real_derivatives(x, mult - 1)))
            .collect::<Result<_>>()?;
        for r in 0..*mult {
            rows.push(
                basis
                    .iter()
                    .map(|(j, b)| {
                        let bd = b.eval_derivatives(x, r);
                        if *j == 0 {
                            return bd[r].clone();
                        }
                        (0..=r).fold(zero(), |acc, q| {
                            let term = Float::with_val(p, &bd[q] * &s_derivs[j - 1][r - q]);
                            acc + term * binomial(r, q)
                        })
                    })
                    .collect(),
            );
        }
    }
    let row = |e: i64| -> Vec<Real> { col_series.iter().map(|s| s.coeff_at(e)).collect() };
    let top = big as i64 - 1 - dw as i64;
    let bottom = -(size as i64 - big as i64 - d as i64 - 1);
    let mut e = top;
    while e >= bottom {
        rows.push(row(e));
        e -= 1;
    }
    let conditions = rows.len();

    let mut relaxations = 0;
    let selected = loop {
        let mut next_e = bottom - 1;
        let mut budget = unknowns;
        let attempt = select_kernel(rows.clone(), unknowns, || {
            if budget == 0 {
                return None;
            }
            budget -= 1;
            let r = row(next_e);
            next_e -= 1;
            Some(r)
        });
        match attempt {
            Err(Error::NoKernel) if relaxations < 2 && rows.len() > dw => {
                rows.pop();
                relaxations += 1;
            }
            other => break other?,
        }
    };

    let mut a = Vec::with_capacity(m + 1);
    let mut offset = 0;
    for j in 0..=m {
        let len = comps[j] - deg_t[j];
        a.push(Poly::new(selected.vector[offset..offset + len].to_vec()));
        offset += len;
    }
    Ok(Type1Approximant {
        n: n.clone(),
        a,
        t: t.to_vec(),
        w,
        nodes: nodes.to_vec(),
        d,
        unknowns,
        conditions,
        kernel_dim: selected.dim,
        extra_conditions: selected.extra,
        relaxations,
    })
}

/// `A_0(z) = a_0 t_0 + sum a_j t_j s^_{1,j}(z)`.
pub fn linear_form_eval(t1: &Type1Approximant, sys: &NikishinSystem, z: &Cplx) -> Result<Cplx> {
    sys.generator(1).spec.check_off_support(z)?;
    let mut acc = t1.p_j(0).eval_complex(z);
    for j in 1..=t1.m() {
        let s = sys.nested_cauchy(1, j, z)?;
        acc += Cplx::with_val(precision(), t1.p_j(j).eval_complex(z) * s);
    }
    Ok(acc)
}

/// `a_0 t_0 + sum a_j t_j f_j(z)` with the perturbed functions.
pub fn linear_form_eval_perturbed(t1: &Type1Approximant, ps: &PerturbedSystem, z: &Cplx) -> Result<Cplx> {
    let mut acc = t1.p_j(0).eval_complex(z);
    for j in 1..=t1.m() {
        let f = ps.eval_f(j, z)?;
        acc += Cplx::with_val(precision(), t1.p_j(j).eval_complex(z) * f);
    }
    Ok(acc)
}

/// `A_0(x)` at a real point off `Delta_1`.
pub fn linear_form_real(t1: &Type1Approximant, sys: &NikishinSystem, x: &Real) -> Result<Real> {
    sys.generator(1).spec.check_off_support(&cplx(x))?;
    let mut acc = t1.p_j(0).eval(x);
    for j in 1..=t1.m() {
        let s = sys.chain_rule(1, j)?.cauchy_real(x);
        acc += Float::with_val(precision(), t1.p_j(j).eval(x) * s);
    }
    Ok(acc)
}
