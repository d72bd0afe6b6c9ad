use rug::Float;

use super::select_kernel;
use crate::error::{Error, Result};
use crate::nikishin::MultiIndex;
use crate::numkernel::{max_abs, precision, zero, Poly, Real};
use crate::perturbation::PerturbedSystem;

/// Common denominator `Q` with numerators `P_j` such that
/// `Q f_j - P_j = O(z^-(n_j+1))`.
#[derive(Clone, Debug)]
pub struct Type2Approximant {
    pub n: MultiIndex,
    /// Normalized: largest coefficient 1, first maximal coefficient positive.
    pub q: Poly,
    pub p: Vec<Poly>,
    pub kernel_dim: usize,
    pub extra_conditions: usize,
    /// Per `j`: largest coefficient of `z^-1..z^-n_j` in `Q f_j - P_j`,
    /// relative to `max|Q| max|c_j|`.
    pub residuals: Vec<Real>,
}

impl Type2Approximant {
    pub fn m(&self) -> usize {
        self.n.len()
    }

    /// `P_j` (1-based).
    pub fn p_j(&self, j: usize) -> &Poly {
        &self.p[j - 1]
    }
}

fn dot(q: &[Real], c: &[Real], offset: usize) -> Real {
    let p = precision();
    q.iter()
        .enumerate()
        .fold(zero(), |acc, (i, qi)| acc + Float::with_val(p, qi * &c[i + offset]))
}

/// Solves the type II system for `n = (n_1..n_m)`.
pub fn solve_type2(ps: &PerturbedSystem, n: &MultiIndex) -> Result<Type2Approximant> {
    let m = ps.m();
    if n.len() != m {
        return Err(Error::InvalidInput(format!("type II index {n} needs {m} components")));
    }
    let size = n.abs();
    let cols = size + 1;
    let max_nj = *n.components().iter().max().unwrap();
    // room for the defining rows plus up to |n| appended ones
    let k = 2 * size + max_nj + 2;
    let tables: Vec<Vec<Real>> = (1..=m).map(|j| ps.perturbed_series(j, k)).collect::<Result<_>>()?;

    let row = |j: usize, nu: usize| -> Vec<Real> { (0..cols).map(|i| tables[j][i + nu - 1].clone()).collect() };
    let mut rows = Vec::with_capacity(size);
    for j in 0..m {
        for nu in 1..=n.get(j) {
            rows.push(row(j, nu));
        }
    }
    let mut next_nu: Vec<usize> = n.components().iter().map(|c| c + 1).collect();
    let mut turn = 0;
    let mut budget = size;
    let selected = select_kernel(rows, cols, || {
        if budget == 0 {
            return None;
        }
        budget -= 1;
        let j = turn % m;
        turn += 1;
        let r = row(j, next_nu[j]);
        next_nu[j] += 1;
        Some(r)
    })?;
    let q = selected.vector;

    let mut p = Vec::with_capacity(m);
    let mut residuals = Vec::with_capacity(m);
    let qmax = max_abs(&q);
    for (j, c) in tables.iter().enumerate() {
        let coeffs = (0..size)
            .map(|deg| {
                (deg + 1..cols).fold(zero(), |acc, i| acc + Float::with_val(precision(), &q[i] * &c[i - deg - 1]))
            })
            .collect();
        p.push(Poly::new(coeffs));
        let nj = n.get(j);
        let scale = Float::with_val(precision(), &qmax * max_abs(&c[..size + nj.max(1)]));
        let worst = (1..=nj).fold(zero(), |acc, nu| {
            let v = dot(&q, c, nu - 1).abs();
            if v > acc {
                v
            } else {
                acc
            }
        });
        residuals.push(if scale.is_zero() { worst } else { worst / scale });
    }

    Ok(Type2Approximant {
        n: n.clone(),
        q: Poly::new(q),
        p,
        kernel_dim: selected.dim,
        extra_conditions: selected.extra,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::MeasureSpec;
    use crate::nikishin::validate_system;
    use crate::numkernel::{cplx, kernel_tol, poly_roots, real, Cplx};
    use crate::perturbation::RationalFunction;

    fn markov(spec: MeasureSpec) -> PerturbedSystem {
        PerturbedSystem::unperturbed(validate_system(vec![spec], false).unwrap())
    }

    fn close(a: &Real, b: &Real, tol: f64) -> bool {
        Float::with_val(precision(), a - b).abs() < tol
    }

    /// Monic orthogonal polynomial of degree `n` by Gram-Schmidt on the
    /// monomials, using the inner product `<x^i, x^j> = c_{i+j}`.
    fn gram_schmidt(c: &[Real], n: usize) -> Vec<Real> {
        let p = precision();
        let inner = |a: &[Real], b: &[Real]| {
            let mut s = zero();
            for (i, ai) in a.iter().enumerate() {
                for (j, bj) in b.iter().enumerate() {
                    s += Float::with_val(p, ai * bj) * &c[i + j];
                }
            }
            s
        };
        let mut basis: Vec<Vec<Real>> = Vec::new();
        for deg in 0..=n {
            let mut v = vec![zero(); deg + 1];
            v[deg] = real(1);
            for b in &basis {
                let coef = Float::with_val(p, inner(&v, b) / inner(b, b));
                for (i, bi) in b.iter().enumerate() {
                    v[i] -= Float::with_val(p, &coef * bi);
                }
            }
            basis.push(v);
        }
        basis.pop().unwrap()
    }

    #[test]
    fn shifted_legendre() {
        let ps = markov(MeasureSpec::lebesgue(0.0, 1.0).with_nq(30));
        let t2 = solve_type2(&ps, &MultiIndex::new(vec![2]).unwrap()).unwrap();
        let c = ps.perturbed_series(1, 10).unwrap();
        let oracle = Poly::new(gram_schmidt(&c, 2)).normalized();
        for k in 0..3 {
            assert!(close(&t2.q.coeff(k), &oracle.coeff(k), 1e-60));
        }
        let sixth = Float::with_val(precision(), 1) / 6u32;
        let monic = t2.q.scale(&Float::with_val(precision(), 1 / t2.q.coeff(2)));
        assert!(close(&monic.coeff(0), &sixth, 1e-60));
        assert!(close(&monic.coeff(1), &real(-1), 1e-60));
    }

    #[test]
    fn one_condition() {
        let ps = markov(MeasureSpec::jacobi(real(0), real(1), real(0.5), real(2)).with_nq(30));
        let t2 = solve_type2(&ps, &MultiIndex::new(vec![1]).unwrap()).unwrap();
        let c = ps.perturbed_series(1, 2).unwrap();
        let want = Float::with_val(precision(), &c[1] / &c[0]);
        let root = Float::with_val(precision(), -t2.q.coeff(0) / t2.q.coeff(1));
        assert!(close(&root, &want, 1e-60));
    }

    #[test]
    fn two_level_first_index() {
        let sys = validate_system(vec![MeasureSpec::lebesgue(2.0, 3.0), MeasureSpec::lebesgue(0.0, 1.0)], false).unwrap();
        let ps = PerturbedSystem::unperturbed(sys);
        let t2 = solve_type2(&ps, &MultiIndex::new(vec![1, 1]).unwrap()).unwrap();
        assert_eq!(t2.q.degree(), Some(2));
        // Hand-built 2x3 system: [c1_0 c1_1 c1_2; c2_0 c2_1 c2_2] q = 0 by cross product.
        let a = ps.perturbed_series(1, 3).unwrap();
        let b = ps.perturbed_series(2, 3).unwrap();
        let p = precision();
        let cross = |i: usize, j: usize| Float::with_val(p, &a[i] * &b[j]) - Float::with_val(p, &a[j] * &b[i]);
        let mut v = vec![cross(1, 2), cross(2, 0), cross(0, 1)];
        crate::numkernel::normalize_vector(&mut v);
        for (k, c) in v.iter().enumerate() {
            assert!(close(&t2.q.coeff(k), c, 1e-60));
        }
        for r in poly_roots(&t2.q).unwrap() {
            assert!(r.im().abs() < 1e-30 && r.re() > 2.0 && r.re() < 3.0);
        }
    }

    #[test]
    fn residuals_and_numerators() {
        let sys = validate_system(vec![MeasureSpec::lebesgue(2.0, 3.0), MeasureSpec::lebesgue(0.0, 1.0)], false).unwrap();
        let r = vec![
            RationalFunction::simple_pole(real(0.5), real(5)).unwrap(),
            RationalFunction::simple_pole(real(0.3), real(-1)).unwrap(),
        ];
        let ps = PerturbedSystem::new(sys, r).unwrap();
        let n = MultiIndex::new(vec![4, 3]).unwrap();
        let t2 = solve_type2(&ps, &n).unwrap();
        assert_eq!(t2.kernel_dim, 1);
        for res in &t2.residuals {
            assert!(*res < kernel_tol());
        }
        // Q f_j - P_j at a far point is O(z^-(n_j+1)).
        for j in 1..=2 {
            let z = cplx(1000);
            let f = ps.eval_f(j, &z).unwrap();
            let lhs = Cplx::with_val(precision(), t2.q.eval_complex(&z) * f) - t2.p_j(j).eval_complex(&z);
            let size = crate::numkernel::cabs(&lhs).to_f64();
            assert!(size < 1e3f64.powi(-(n.get(j - 1) as i32)) * 1e3, "j = {j}: {size}");
        }
    }

    #[test]
    fn classical_zeros_are_simple_and_interior() {
        for nq in [4usize, 6] {
            let ps = markov(MeasureSpec::jacobi(real(-1), real(1), real(-0.5), real(0.5)).with_nq(40));
            let t2 = solve_type2(&ps, &MultiIndex::new(vec![nq]).unwrap()).unwrap();
            let roots = poly_roots(&t2.q).unwrap();
            assert_eq!(roots.len(), nq);
            for r in roots {
                assert_eq!(r.multiplicity, 1);
                assert!(r.re() > -1.0 && r.re() < 1.0 && r.im().abs() < 1e-30);
            }
        }
    }

    #[test]
    fn homogeneous_in_the_data() {
        let build = |s: f64| {
            let sys = validate_system(
                vec![MeasureSpec::lebesgue(2.0, 3.0).with_scale(real(s)), MeasureSpec::lebesgue(0.0, 1.0).with_scale(real(s))],
                false,
            )
            .unwrap();
            PerturbedSystem::unperturbed(sys)
        };
        let n = MultiIndex::new(vec![3, 3]).unwrap();
        let a = solve_type2(&build(1.0), &n).unwrap();
        let b = solve_type2(&build(3.0), &n).unwrap();
        for k in 0..=6 {
            assert!(close(&a.q.coeff(k), &b.q.coeff(k), 1e-40));
        }
    }

    #[test]
    fn wrong_arity_rejected() {
        let ps = markov(MeasureSpec::lebesgue(0.0, 1.0));
        assert!(solve_type2(&ps, &MultiIndex::new(vec![1, 1]).unwrap()).is_err());
    }
}
