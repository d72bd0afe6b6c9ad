//! Gauss-Jacobi rules at working precision.
//!
//! Nodes start from an `f64` Sturm-sequence bisection on the Jacobi matrix and
//! are polished by Newton's method on the monic three-term recurrence;
//! weights come from the Christoffel sum of the orthonormal polynomials.

use rug::ops::Pow;
use rug::Float;

use crate::numkernel::{cplx, precision, real, zero, Cplx, Real};

/// Nodes and weights of a discrete measure.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<Real>,
    pub weights: Vec<Real>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `sum w_i f(x_i)`.
    pub fn integrate<F: Fn(&Real) -> Real>(&self, f: F) -> Real {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(zero(), |acc, (x, w)| acc + Float::with_val(precision(), w * &f(x)))
    }

    pub fn mass(&self) -> Real {
        self.weights.iter().fold(zero(), |acc, w| acc + w)
    }

    pub fn moment(&self, k: u32) -> Real {
        self.nodes.iter().zip(&self.weights).fold(zero(), |acc, (x, w)| {
            let xk = Float::with_val(precision(), x.pow(k));
            acc + Float::with_val(precision(), w * &xk)
        })
    }

    /// `sum w_i / (z - x_i)`.
    pub fn cauchy(&self, z: &Cplx) -> Cplx {
        let mut acc = cplx(0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let d = Cplx::with_val(precision(), z - x);
            acc += Cplx::with_val(precision(), w / d);
        }
        acc
    }

    /// `sum w_i g(x_i) / (z - x_i)`.
    pub fn weighted_cauchy<G: Fn(&Real) -> Real>(&self, z: &Cplx, g: G) -> Cplx {
        let mut acc = cplx(0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let d = Cplx::with_val(precision(), z - x);
            acc += Cplx::with_val(precision(), Float::with_val(precision(), w * &g(x)) / d);
        }
        acc
    }

    /// `sum w_i / (x - x_i)` for real `x`.
    pub fn cauchy_real(&self, x: &Real) -> Real {
        self.nodes.iter().zip(&self.weights).fold(zero(), |acc, (y, w)| {
            let d = Float::with_val(precision(), x - y);
            acc + Float::with_val(precision(), w / d)
        })
    }

    /// Derivatives `d^r/dx^r sum w_i / (x - x_i)` for `r = 0..=order`.
    pub fn cauchy_real_derivatives(&self, x: &Real, order: usize) -> Vec<Real> {
        let mut out = vec![zero(); order + 1];
        for (y, w) in self.nodes.iter().zip(&self.weights) {
            let inv = Float::with_val(precision(), 1 / Float::with_val(precision(), x - y));
            // w (-1)^r r! / (x - y)^(r+1)
            let mut term = Float::with_val(precision(), w * &inv);
            for (r, slot) in out.iter_mut().enumerate() {
                *slot += &term;
                term *= &inv;
                term *= -((r + 1) as i32);
            }
        }
        out
    }

    /// Image under `x -> scale * x + shift`; weights are unchanged.
    pub fn affine_map(&self, scale: &Real, shift: &Real) -> QuadratureRule {
        QuadratureRule {
            nodes: self
                .nodes
                .iter()
                .map(|x| Float::with_val(precision(), x * scale) + shift)
                .collect(),
            weights: self.weights.clone(),
        }
    }

    pub fn scale_weights(&mut self, factor: &Real) {
        for w in self.weights.iter_mut() {
            *w *= factor;
        }
    }

    pub fn concat(parts: Vec<QuadratureRule>) -> QuadratureRule {
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for p in parts {
            nodes.extend(p.nodes);
            weights.extend(p.weights);
        }
        QuadratureRule { nodes, weights }
    }
}

/// Monic recurrence coefficients `(alpha_k, beta_k)` for the weight
/// `(1-u)^a (1+u)^b` on `[-1, 1]`, `k = 0..n`. `beta_0` is the total mass.
fn jacobi_recurrence(a: &Real, b: &Real, n: usize) -> (Vec<Real>, Vec<Real>) {
    let p = precision();
    let ab = Float::with_val(p, a + b);
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    let b2a2 = Float::with_val(p, b * b) - Float::with_val(p, a * a);
    for k in 0..n {
        if k == 0 {
            alpha.push(Float::with_val(p, b - a) / Float::with_val(p, &ab + 2));
            let mu0 = {
                let two_pow = Float::with_val(p, Float::with_val(p, &ab + 1).exp2());
                let ga = Float::with_val(p, a + 1).gamma();
                let gb = Float::with_val(p, b + 1).gamma();
                let gab = Float::with_val(p, &ab + 2).gamma();
                two_pow * ga * gb / gab
            };
            beta.push(mu0);
            continue;
        }
        let kf = Float::with_val(p, k as u32);
        let s = Float::with_val(p, 2 * &kf) + &ab;
        alpha.push(Float::with_val(p, &b2a2 / Float::with_val(p, &s * Float::with_val(p, &s + 2))));
        let bk = if k == 1 {
            let num = Float::with_val(p, 4 * Float::with_val(p, a + 1)) * Float::with_val(p, b + 1);
            let den = Float::with_val(p, Float::with_val(p, &ab + 2).square())
                * Float::with_val(p, &ab + 3);
            num / den
        } else {
            let num = Float::with_val(p, 4 * &kf)
                * Float::with_val(p, &kf + a)
                * Float::with_val(p, &kf + b)
                * Float::with_val(p, &kf + &ab);
            let den = Float::with_val(p, s.clone().square())
                * Float::with_val(p, &s + 1)
                * Float::with_val(p, &s - 1);
            num / den
        };
        beta.push(bk);
    }
    (alpha, beta)
}

/// Number of eigenvalues below `x` of the symmetric tridiagonal matrix with
/// diagonal `d` and squared off-diagonal `e2`.
fn sturm_count(d: &[f64], e2: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = d[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        if q == 0.0 {
            q = f64::EPSILON * (d[i - 1].abs() + 1e-300);
        }
        q = d[i] - x - e2[i] / q;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gauss rule with `n` nodes for `(1-u)^a (1+u)^b du` on `[-1, 1]`.
pub fn gauss_jacobi_reference(n: usize, a: &Real, b: &Real) -> QuadratureRule {
    let p = precision();
    let (alpha, beta) = jacobi_recurrence(a, b, n);
    let d: Vec<f64> = alpha.iter().map(|x| x.to_f64()).collect();
    let e2: Vec<f64> = beta.iter().map(|x| x.to_f64()).collect();

    let mut nodes = Vec::with_capacity(n);
    for k in 0..n {
        let (mut lo, mut hi) = (-1.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if sturm_count(&d, &e2, mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        nodes.push(real(0.5 * (lo + hi)));
    }

    let eps = {
        let mut e = real(1);
        e <<= -(p as i32) + 4;
        e
    };
    for x in nodes.iter_mut() {
        for _ in 0..30 {
            // Monic p_n and derivative by the recurrence.
            let mut p_prev = zero();
            let mut p_cur = real(1);
            let mut dp_prev = zero();
            let mut dp_cur = zero();
            for k in 0..n {
                let t = Float::with_val(p, &*x - &alpha[k]);
                let bk = if k == 0 { zero() } else { beta[k].clone() };
                let p_next = Float::with_val(p, &t * &p_cur) - Float::with_val(p, &bk * &p_prev);
                let dp_next = Float::with_val(p, &p_cur + Float::with_val(p, &t * &dp_cur))
                    - Float::with_val(p, &bk * &dp_prev);
                p_prev = std::mem::replace(&mut p_cur, p_next);
                dp_prev = std::mem::replace(&mut dp_cur, dp_next);
            }
            if dp_cur.is_zero() {
                break;
            }
            let step = Float::with_val(p, &p_cur / &dp_cur);
            *x -= &step;
            if step.abs() <= eps {
                break;
            }
        }
    }

    let weights = nodes
        .iter()
        .map(|x| {
            // sum_k p_k(x)^2 / (beta_0 ... beta_k)
            let mut sum = zero();
            let mut norm = beta[0].clone();
            let mut p_prev = zero();
            let mut p_cur = real(1);
            for k in 0..n {
                sum += Float::with_val(p, p_cur.clone().square() / &norm);
                if k + 1 < n {
                    let t = Float::with_val(p, x - &alpha[k]);
                    let bk = if k == 0 { zero() } else { beta[k].clone() };
                    let p_next =
                        Float::with_val(p, &t * &p_cur) - Float::with_val(p, &bk * &p_prev);
                    p_prev = std::mem::replace(&mut p_cur, p_next);
                    norm *= &beta[k + 1];
                }
            }
            Float::with_val(p, 1 / sum)
        })
        .collect();
    QuadratureRule { nodes, weights }
}

/// Gauss rule with `n` nodes for `(x-lo)^left (hi-x)^right dx` on `[lo, hi]`.
pub fn gauss_jacobi_interval(n: usize, lo: &Real, hi: &Real, left: &Real, right: &Real) -> QuadratureRule {
    let p = precision();
    let reference = gauss_jacobi_reference(n, right, left);
    let half = Float::with_val(p, Float::with_val(p, hi - lo) / 2);
    let center = Float::with_val(p, Float::with_val(p, hi + lo) / 2);
    let mut rule = reference.affine_map(&half, &center);
    let jac = Float::with_val(p, half.pow(Float::with_val(p, Float::with_val(p, left + right) + 1)));
    rule.scale_weights(&jac);
    rule
}
