//! Orthogonality, remainder and sign-change checks for solved approximants.

use rug::ops::Pow;
use rug::Float;

use super::report::CheckReport;
use super::sign::sign_changes;
use crate::error::{Error, Result};
use crate::hermite_pade::{Type1Approximant, Type2Approximant};
use crate::nikishin::{associated_index, NikishinSystem};
use crate::numkernel::{cabs, cplx, kernel_tol, precision, zero, Cplx, Poly, Real};
use crate::perturbation::PerturbedSystem;

/// `(int x^nu g Q ds_{1,j}, int |x^nu g Q| d|s_{1,j}|)`.
fn weighted_moment(ps: &PerturbedSystem, j: usize, g: &Poly, q: &Poly, nu: u32) -> Result<(Real, Real)> {
    let rule = ps.base().chain_rule(1, j)?;
    let p = precision();
    let (mut s, mut a) = (zero(), zero());
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let v = Float::with_val(p, g.eval(x) * q.eval(x)) * Float::with_val(p, x.pow(nu)) * w;
        a += Float::with_val(p, v.abs_ref());
        s += v;
    }
    Ok((s, a))
}

fn ratio(num: &Real, den: &Real) -> f64 {
    if den.is_zero() {
        return num.to_f64().abs();
    }
    Float::with_val(precision(), num / den).abs().to_f64()
}

/// Orthogonality of `Q` against `x^nu t_j ds_{1,j}` for `nu < n_j - d_j` and
/// against `x^nu T ds_{1,j}` for `nu < n_j - D`, relative to the integral of
/// the absolute integrand. The first unimposed moment `nu = n_j - d_j` must
/// stay above `unimposed_floor` and above 1000 times the imposed residuals.
pub fn orthogonality_residuals(t2: &Type2Approximant, ps: &PerturbedSystem, imposed_tol: f64, unimposed_floor: f64) -> Result<CheckReport> {
    let mut rep = CheckReport::new("orthogonality", "type2-orthogonality").with_index(&t2.n);
    let big_d = ps.d();
    for j in 1..=ps.m() {
        let nj = t2.n.get(j - 1);
        let tj = ps.r(j).denominator();
        let dj = ps.r(j).degree();
        if nj <= dj {
            return Err(Error::HypothesisViolation(format!("n_{j} = {nj} must exceed deg t_{j} = {dj}")));
        }
        let mut worst: f64 = 0.0;
        for nu in 0..(nj - dj) as u32 {
            let (s, a) = weighted_moment(ps, j, tj, &t2.q, nu)?;
            let r = ratio(&s, &a);
            worst = worst.max(r);
            rep.at_most(format!("t_j moment nu={nu}"), Some(j), r, imposed_tol);
        }
        if nj > big_d {
            for nu in 0..(nj - big_d) as u32 {
                let (s, a) = weighted_moment(ps, j, ps.t_lcm(), &t2.q, nu)?;
                let r = ratio(&s, &a);
                worst = worst.max(r);
                rep.at_most(format!("T moment nu={nu}"), Some(j), r, imposed_tol);
            }
        }
        let nu = (nj - dj) as u32;
        let (s, a) = weighted_moment(ps, j, tj, &t2.q, nu)?;
        rep.at_least(format!("first unimposed moment nu={nu}"), Some(j), ratio(&s, &a), unimposed_floor.max(1e3 * worst));
    }
    rep.meta("D", big_d);
    Ok(rep)
}

/// `int (T Q)(x) / (z - x) ds_{1,j}(x)`.
pub fn remainder_rhs(t2: &Type2Approximant, ps: &PerturbedSystem, j: usize, z: &Cplx) -> Result<Cplx> {
    ps.base().generator(1).spec.check_off_support(z)?;
    let tq = ps.t_lcm() * &t2.q;
    let rule = ps.base().chain_rule(1, j)?;
    Ok(rule.weighted_cauchy(z, |x| tq.eval(x)))
}

/// `T (Q f_j - P_j)(z)` by direct evaluation.
pub fn remainder_lhs(t2: &Type2Approximant, ps: &PerturbedSystem, j: usize, z: &Cplx) -> Result<Cplx> {
    let p = precision();
    let f = ps.eval_f(j, z)?;
    let qf = Cplx::with_val(p, t2.q.eval_complex(z) * f);
    let rem = Cplx::with_val(p, qf - t2.p_j(j).eval_complex(z));
    Ok(Cplx::with_val(p, ps.t_lcm().eval_complex(z) * rem))
}

fn relative_gap(lhs: &Cplx, rhs: &Cplx) -> f64 {
    let p = precision();
    let diff = cabs(&Cplx::with_val(p, lhs - rhs));
    let scale = cabs(rhs);
    if scale.is_zero() {
        return diff.to_f64();
    }
    (diff / scale).to_f64()
}

pub(crate) fn describe(z: &Cplx) -> String {
    let (re, im) = (z.real().to_f64(), z.imag().to_f64());
    if im == 0.0 {
        format!("{re}")
    } else {
        format!("{re}{im:+}i")
    }
}

/// Remainder identity `T (Q f_j - P_j)(z) = int (TQ)(x)/(z-x) ds_{1,j}(x)`
/// at each test point, as a relative deviation.
pub fn remainder_check(t2: &Type2Approximant, ps: &PerturbedSystem, zs: &[Cplx], tol: f64) -> Result<CheckReport> {
    let mut rep = CheckReport::new("remainder", "type2-remainder-integral").with_index(&t2.n);
    for j in 1..=ps.m() {
        if t2.n.get(j - 1) <= ps.d() {
            return Err(Error::HypothesisViolation(format!("n_{j} must exceed D = {}", ps.d())));
        }
        for z in zs {
            for pole in ps.lcm_poles() {
                if cabs(&Cplx::with_val(precision(), z - &pole.root)) < 1e-12 {
                    return Err(Error::PoleOnSupport {
                        point: describe(z),
                        alpha: pole.describe(),
                        beta: pole.describe(),
                    });
                }
            }
            let lhs = remainder_lhs(t2, ps, j, z)?;
            let rhs = remainder_rhs(t2, ps, j, z)?;
            rep.at_most(format!("z={}", describe(z)), Some(j), relative_gap(&lhs, &rhs), tol);
        }
    }
    Ok(rep)
}

/// `A_1(x) = sum_{k>=1} a_k t_k s^_{2,k}(x)` with `s^_{2,1} = 1`.
fn inner_form(t1: &Type1Approximant, sys: &NikishinSystem, x: &Real) -> Result<Real> {
    let p = precision();
    let mut acc = t1.p_j(1).eval(x);
    for k in 2..=t1.m() {
        let s = sys.chain_rule(2, k)?.cauchy_real(x);
        acc += Float::with_val(p, t1.p_j(k).eval(x) * s);
    }
    Ok(acc)
}

/// Integral representation of a multipoint type I form:
/// `A_0(z) / w(z) = int A_1(x) / ((z - x) w(x)) dsigma_1(x)`.
pub fn psl_identity_check(t1: &Type1Approximant, sys: &NikishinSystem, zs: &[Cplx], tol: f64) -> Result<CheckReport> {
    let mut rep = CheckReport::new("form-integral", "type1-form-integral").with_index(&t1.n);
    let p = precision();
    let rule = &sys.generator(1).rule;
    let inner: Vec<Real> = rule
        .nodes
        .iter()
        .map(|x| Ok(Float::with_val(p, inner_form(t1, sys, x)? / t1.w.eval(x))))
        .collect::<Result<_>>()?;
    for z in zs {
        let a0 = crate::hermite_pade::linear_form_eval(t1, sys, z)?;
        let lhs = Cplx::with_val(p, a0 / t1.w.eval_complex(z));
        let mut rhs = cplx(0);
        for ((x, w), g) in rule.nodes.iter().zip(&rule.weights).zip(&inner) {
            let d = Cplx::with_val(p, z - x);
            rhs += Cplx::with_val(p, Float::with_val(p, w * g) / d);
        }
        rep.at_most(format!("z={}", describe(z)), None, relative_gap(&lhs, &rhs), tol);
    }
    rep.meta("relaxations", t1.relaxations);
    Ok(rep)
}

/// Sign changes of `Phi_{n,j}(x) = int (TQ)(t)/(x - t) ds_{1,j}(t)` on the
/// interior of `Delta_2`, against the bound `|n^j| - (m-1) D`.
pub fn phi_sign_change_check(t2: &Type2Approximant, ps: &PerturbedSystem, j: usize, grid_size: usize) -> Result<CheckReport> {
    let m = ps.m();
    if m < 2 {
        return Err(Error::HypothesisViolation("the Phi check needs m >= 2".into()));
    }
    let big_d = ps.d();
    if t2.n.components().iter().any(|&c| c <= big_d) {
        return Err(Error::HypothesisViolation(format!("every n_k must exceed D = {big_d}")));
    }
    let assoc = associated_index(&t2.n, j)?;
    let bound = assoc.abs as i64 - ((m - 1) * big_d) as i64;
    let tq = ps.t_lcm() * &t2.q;
    let rule = ps.base().chain_rule(1, j)?;
    let weights: Vec<Real> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(x, w)| Float::with_val(precision(), tq.eval(x) * w))
        .collect();
    let phi = |x: &Real| -> Real {
        let p = precision();
        rule.nodes.iter().zip(&weights).fold(zero(), |acc, (t, w)| {
            acc + Float::with_val(p, w / Float::with_val(p, x - t))
        })
    };
    let second = &ps.base().generator(2).spec;
    let sc = sign_changes(phi, &second.alpha, &second.beta, grid_size);
    let mut rep = CheckReport::new("phi-sign-changes", "phi-sign-changes-on-delta2").with_index(&t2.n);
    rep.at_least("sign changes on Delta_2", Some(j), sc.count as f64, bound as f64);
    rep.meta("associated_index", format!("{:?}", assoc.comps));
    rep.meta("grid", grid_size);
    Ok(rep)
}

/// Re-expansion residuals of `Q f_j - P_j` stored on the approximant.
pub fn type2_series_check(t2: &Type2Approximant) -> CheckReport {
    let mut rep = CheckReport::new("series-residual", "type2-definition").with_index(&t2.n);
    let tol = kernel_tol().to_f64();
    for (j, r) in t2.residuals.iter().enumerate() {
        rep.at_most("max |coeff z^-1..z^-n_j|", Some(j + 1), r.to_f64(), tol);
    }
    rep.meta("kernel_dim", t2.kernel_dim);
    rep.meta("extra_conditions", t2.extra_conditions);
    rep
}
