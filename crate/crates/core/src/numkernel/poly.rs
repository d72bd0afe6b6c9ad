use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Float;

use super::prec::{cplx, max_abs, precision, real, trim_threshold, zero, Cplx, Real};

/// Real polynomial with coefficients in ascending degree.
///
/// The stored coefficient list may carry negligible trailing entries; the
/// reported [`degree`](Poly::degree) ignores every coefficient smaller than
/// `trim_threshold * max|c|`.
#[derive(Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Real>,
}

impl Poly {
    pub fn new(coeffs: Vec<Real>) -> Self {
        let mut p = Poly { coeffs };
        while p.coeffs.last().is_some_and(|c| c.is_zero()) {
            p.coeffs.pop();
        }
        p
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(real(1))
    }

    pub fn constant(c: Real) -> Self {
        Poly::new(vec![c])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![zero(); k + 1];
        coeffs[k] = real(1);
        Poly { coeffs }
    }

    pub fn from_f64(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| real(c)).collect())
    }

    /// Monic polynomial with the given real roots.
    pub fn from_real_roots(roots: &[Real]) -> Self {
        roots.iter().fold(Poly::one(), |acc, r| {
            &acc * &Poly::new(vec![Float::with_val(precision(), -r), real(1)])
        })
    }

    /// Monic quadratic `(z - w)(z - conj w)`.
    pub fn conjugate_pair(w: &Cplx) -> Self {
        let re = Float::with_val(precision(), w.real());
        let norm = Float::with_val(precision(), w.norm_ref());
        Poly::new(vec![norm, Float::with_val(precision(), -2 * re), real(1)])
    }

    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the stored length.
    pub fn coeff(&self, k: usize) -> Real {
        self.coeffs.get(k).cloned().unwrap_or_else(zero)
    }

    /// Number of stored coefficients (one more than the untrimmed degree).
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_abs_coeff(&self) -> Real {
        max_abs(&self.coeffs)
    }

    /// Degree after trimming negligible leading coefficients; `None` for the
    /// zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let max = self.max_abs_coeff();
        if max.is_zero() {
            return None;
        }
        let cut = Float::with_val(precision(), &max * &trim_threshold());
        self.coeffs
            .iter()
            .rposition(|c| Float::with_val(precision(), c.abs_ref()) >= cut)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Copy with the negligible leading coefficients removed.
    pub fn trimmed(&self) -> Poly {
        match self.degree() {
            None => Poly::zero(),
            Some(d) => Poly::new(self.coeffs[..=d].to_vec()),
        }
    }

    /// Leading coefficient of the trimmed polynomial.
    pub fn leading(&self) -> Option<Real> {
        self.degree().map(|d| self.coeffs[d].clone())
    }

    pub fn eval(&self, x: &Real) -> Real {
        let mut acc = zero();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_complex(&self, z: &Cplx) -> Cplx {
        let mut acc = cplx(0);
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| Float::with_val(precision(), c * k as u32))
                .collect(),
        )
    }

    /// Values `p(x), p'(x), ..., p^(order)(x)`.
    pub fn eval_derivatives(&self, x: &Real, order: usize) -> Vec<Real> {
        let mut out = Vec::with_capacity(order + 1);
        let mut current = self.clone();
        for _ in 0..=order {
            out.push(current.eval(x));
            current = current.derivative();
        }
        out
    }

    pub fn scale(&self, factor: &Real) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .map(|c| Float::with_val(precision(), c * factor))
                .collect(),
        )
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut coeffs = vec![zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Rescales so the largest coefficient has magnitude one and the first
    /// coefficient attaining it is positive.
    pub fn normalized(&self) -> Poly {
        let mut v = self.coeffs.clone();
        normalize_vector(&mut v);
        Poly::new(v)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64()).collect()
    }
}

/// Scales `v` in place so `max|v_i| = 1` and the first maximal entry is
/// positive. Returns `false` if `v` is identically zero.
pub fn normalize_vector(v: &mut [Real]) -> bool {
    let max = max_abs(v);
    if max.is_zero() {
        return false;
    }
    let first = v
        .iter()
        .position(|c| Float::with_val(precision(), c.abs_ref()) == max)
        .expect("maximum is attained");
    let mut scale = Float::with_val(precision(), 1 / &max);
    if v[first].is_sign_negative() {
        scale = -scale;
    }
    for c in v.iter_mut() {
        *c *= &scale;
    }
    true
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.coeffs.iter().map(|c| c.to_f64()))
            .finish()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| Float::with_val(precision(), &self.coeff(k) + &rhs.coeff(k)))
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| Float::with_val(precision(), &self.coeff(k) - &rhs.coeff(k)))
                .collect(),
        )
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Poly::zero();
        }
        let mut out = vec![zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += Float::with_val(precision(), a * b);
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| Float::with_val(precision(), -c)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(Poly::from_f64(&[0.0, 0.0]).degree(), None);
        assert!(Poly::zero().coeffs().is_empty());
    }

    #[test]
    fn degree_ignores_negligible_leading_terms() {
        let mut tiny = trim_threshold();
        tiny >>= 4;
        let p = Poly::new(vec![real(1), real(2), tiny]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p.trimmed().len(), 2);
    }

    #[test]
    fn arithmetic_and_evaluation() {
        let p = Poly::from_f64(&[1.0, 1.0]);
        let q = Poly::from_f64(&[-1.0, 1.0]);
        let prod = &p * &q;
        assert_eq!(prod.to_f64(), vec![-1.0, 0.0, 1.0]);
        assert_eq!((&prod + &Poly::one()).to_f64(), vec![0.0, 0.0, 1.0]);
        assert_eq!(prod.eval(&real(3)).to_f64(), 8.0);
        assert_eq!(prod.derivative().to_f64(), vec![0.0, 2.0]);
        let z = cplx((0, 1));
        let v = prod.eval_complex(&z);
        assert_eq!(v.real().to_f64(), -2.0);
    }

    #[test]
    fn roots_constructors() {
        let p = Poly::from_real_roots(&[real(1), real(-1)]);
        assert_eq!(p.to_f64(), vec![-1.0, 0.0, 1.0]);
        let q = Poly::conjugate_pair(&cplx((1, 2)));
        assert_eq!(q.to_f64(), vec![5.0, -2.0, 1.0]);
    }

    #[test]
    fn normalization_is_canonical() {
        let p = Poly::from_f64(&[2.0, -4.0, 1.0]).normalized();
        assert_eq!(p.to_f64(), vec![-0.5, 1.0, -0.25]);
        let q = Poly::from_f64(&[-3.0, 1.0, 3.0]).normalized();
        assert_eq!(q.to_f64()[0], 1.0);
    }
}
