//! Random sampling of linear forms `p_0 t_0 + sum p_j t_j s^_{1,j}` on a test
//! interval off `Delta_1`, counting sign changes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rug::ops::Pow;
use rug::Float;

use super::report::CheckReport;
use super::sign::{alternations, sign_changes, uniform_grid};
use crate::error::{Error, Result};
use crate::nikishin::{MultiIndex, NikishinSystem};
use crate::numkernel::{cplx, poly_roots, precision, real, zero, Poly, Real};

/// Maximum sign changes over `trials` random forms, each `p_j` of degree
/// `n_j - deg t_j - 1` with coefficients uniform in `[-1, 1]` drawn from a
/// ChaCha20 stream seeded with `seed`. The bound is `|n| - D - 1`.
pub fn at_sampler(
    sys: &NikishinSystem,
    t: &[Poly],
    n: &MultiIndex,
    test: (&Real, &Real),
    trials: usize,
    seed: u64,
    grid_size: usize,
) -> Result<CheckReport> {
    let m = sys.m();
    if t.len() != m + 1 || n.len() != m + 1 {
        return Err(Error::InvalidInput(format!("sampler needs {} factors and components", m + 1)));
    }
    let (a, b) = test;
    if a >= b {
        return Err(Error::InvalidInput("test interval must have a < b".into()));
    }
    let first = &sys.generator(1).spec;
    if !(b < &first.alpha || a > &first.beta) {
        return Err(Error::HypothesisViolation(format!(
            "test interval [{}, {}] meets Delta_1",
            a.to_f64(),
            b.to_f64()
        )));
    }
    let last = &sys.generator(m).spec;
    let mut degs = Vec::with_capacity(m + 1);
    let mut zeros: Vec<(usize, f64, f64)> = Vec::new();
    for (j, tj) in t.iter().enumerate() {
        let d = tj.degree().ok_or_else(|| Error::InvalidInput(format!("t_{j} is zero")))?;
        if n.get(j) <= d {
            return Err(Error::InfeasibleDegrees(format!("n_{j} = {} must exceed deg t_{j} = {d}", n.get(j))));
        }
        degs.push(d);
        if d > 0 {
            for c in poly_roots(tj)? {
                if last.distance(&c.center) < 1e-30 {
                    return Err(Error::HypothesisViolation(format!("a zero of t_{j} lies on Delta_m")));
                }
                zeros.push((j, c.re(), c.im()));
            }
        }
    }
    for (i, x) in zeros.iter().enumerate() {
        if let Some(y) = zeros[i + 1..].iter().find(|y| y.0 != x.0 && (y.1 - x.1).hypot(y.2 - x.2) < 1e-30) {
            return Err(Error::HypothesisViolation(format!(
                "t_{} and t_{} share the zero {}{:+}i",
                x.0, y.0, x.1, x.2
            )));
        }
    }
    let big_d: usize = degs.iter().sum();
    let bound = n.abs() as i64 - big_d as i64 - 1;

    // Basis values on the grid: x^i t_j(x) s^_{1,j}(x), with s^_{1,0} = 1.
    let p = precision();
    let grid = uniform_grid(a, b, grid_size.max(1));
    let mut basis: Vec<Vec<Real>> = Vec::new();
    for j in 0..=m {
        let rule = if j == 0 { None } else { Some(sys.chain_rule(1, j)?) };
        for i in 0..n.get(j) - degs[j] {
            basis.push(
                grid.iter()
                    .map(|x| {
                        let s = rule.map_or_else(|| real(1), |r| r.cauchy_real(x));
                        let xi = Float::with_val(p, x.pow(i as u32));
                        Float::with_val(p, t[j].eval(x) * s) * xi
                    })
                    .collect(),
            );
        }
    }

    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut worst = 0usize;
    let mut worst_trial = 0usize;
    for trial in 0..trials {
        let coeffs: Vec<Real> = (0..basis.len()).map(|_| real(rng.gen_range(-1.0..=1.0))).collect();
        let values: Vec<Real> = (0..grid.len())
            .map(|g| {
                basis
                    .iter()
                    .zip(&coeffs)
                    .fold(zero(), |acc, (row, c)| acc + Float::with_val(p, &row[g] * c))
            })
            .collect();
        let count = alternations(&values).len();
        if count > worst {
            worst = count;
            worst_trial = trial;
        }
    }
    let mut rep = CheckReport::new("at-sampling", "at-property-sign-changes").with_index(n);
    rep.at_most("max sign changes on test interval", None, worst as f64, bound as f64);
    rep.meta("trials", trials);
    rep.meta("seed", seed);
    rep.meta("rng", "chacha20");
    rep.meta("grid", grid_size);
    rep.meta("worst_trial", worst_trial);
    rep.meta("test_interval", format!("[{}, {}]", a.to_f64(), b.to_f64()));
    Ok(rep)
}

/// Sign changes of one explicit form on `[a, b]`, with refinement.
pub fn form_sign_changes(sys: &NikishinSystem, p: &[Poly], a: &Real, b: &Real, grid_size: usize) -> Result<usize> {
    let first = &sys.generator(1).spec;
    for x in [a, b] {
        if first.distance(&cplx(x)).is_zero() {
            return Err(Error::PoleOnSupport {
                point: x.to_f64().to_string(),
                alpha: first.alpha.to_f64().to_string(),
                beta: first.beta.to_f64().to_string(),
            });
        }
    }
    let rules = (1..p.len()).map(|j| sys.chain_rule(1, j)).collect::<Result<Vec<_>>>()?;
    let prec = precision();
    let f = |x: &Real| -> Real {
        let mut acc = p[0].eval(x);
        for (j, r) in rules.iter().enumerate() {
            acc += Float::with_val(prec, p[j + 1].eval(x) * r.cauchy_real(x));
        }
        acc
    };
    Ok(sign_changes(f, a, b, grid_size).count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::MeasureSpec;
    use crate::nikishin::validate_system;

    fn pair() -> NikishinSystem {
        validate_system(vec![MeasureSpec::lebesgue(2.0, 3.0).with_nq(40), MeasureSpec::lebesgue(0.0, 1.0).with_nq(40)], false).unwrap()
    }

    #[test]
    fn markov_pair_changes_sign_at_most_once() {
        let sys = validate_system(vec![MeasureSpec::lebesgue(0.0, 1.0).with_nq(40)], false).unwrap();
        let t = vec![Poly::one(), Poly::one()];
        let rep = at_sampler(&sys, &t, &MultiIndex::new(vec![1, 1]).unwrap(), (&real(1.5), &real(4)), 200, 7, 200).unwrap();
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.measurements[0].threshold, 1.0);
    }

    #[test]
    fn constant_form_has_no_sign_change() {
        let sys = pair();
        let p = vec![Poly::one(), Poly::zero(), Poly::zero()];
        assert_eq!(form_sign_changes(&sys, &p, &real(4), &real(6), 100).unwrap(), 0);
    }

    #[test]
    fn seeded_runs_agree() {
        let sys = pair();
        let t = vec![Poly::one(), Poly::one(), Poly::from_f64(&[-5.0, 1.0])];
        let n = MultiIndex::new(vec![3, 3, 3]).unwrap();
        let a = at_sampler(&sys, &t, &n, (&real(4), &real(6)), 30, 11, 100).unwrap();
        let b = at_sampler(&sys, &t, &n, (&real(4), &real(6)), 30, 11, 100).unwrap();
        assert_eq!(a.measurements[0].value, b.measurements[0].value);
        assert!(a.passed(), "{a}");
    }

    #[test]
    fn hypotheses_are_enforced() {
        let sys = pair();
        let t = vec![Poly::one(), Poly::one(), Poly::from_f64(&[-0.5, 1.0])];
        let n = MultiIndex::new(vec![3, 3, 3]).unwrap();
        let err = at_sampler(&sys, &t, &n, (&real(4), &real(6)), 1, 0, 10).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolation(_)));
        let t = vec![Poly::one(), Poly::from_f64(&[-5.0, 1.0]), Poly::from_f64(&[-5.0, 1.0])];
        let err = at_sampler(&sys, &t, &n, (&real(4), &real(6)), 1, 0, 10).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolation(_)));
        let t = vec![Poly::one(), Poly::one(), Poly::one()];
        let err = at_sampler(&sys, &t, &n, (&real(2.5), &real(6)), 1, 0, 10).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolation(_)));
    }
}
