//! Formal expansions at infinity.
//!
//! An [`AsymptoticSeries`] is `poly(z) + sum_k coeffs[k] z^-(k+1)`, known only
//! down to `z^-K` with `K = coeffs.len()`. Products and quotients keep track of
//! how far their result is determined by the known terms and never report
//! coefficients past that point.

use rug::Float;

use super::poly::Poly;
use super::prec::{precision, zero, Real};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticSeries {
    poly: Poly,
    coeffs: Vec<Real>,
}

/// Descending Laurent coefficients: `c[i]` multiplies `z^(top - i)`.
struct Laurent {
    top: i64,
    c: Vec<Real>,
}

impl Laurent {
    fn from_series(s: &AsymptoticSeries) -> Self {
        let top = s.poly.len() as i64 - 1;
        let mut c: Vec<Real> = s.poly.coeffs().iter().rev().cloned().collect();
        c.extend(s.coeffs.iter().cloned());
        Laurent { top, c }
    }

    /// Lowest exponent whose coefficient is known.
    fn low(&self) -> i64 {
        self.top - self.c.len() as i64 + 1
    }

    fn at(&self, exp: i64) -> Real {
        let idx = self.top - exp;
        if idx < 0 {
            return zero();
        }
        self.c.get(idx as usize).cloned().unwrap_or_else(zero)
    }

    /// Splits into polynomial part and at most `k` negative-power terms,
    /// stopping at exponent `low`.
    fn into_series(self, low: i64, k: usize) -> AsymptoticSeries {
        let poly_len = (self.top + 1).max(0) as usize;
        let poly = Poly::new((0..poly_len as i64).map(|e| self.at(e)).collect());
        let last = (-(k as i64)).max(low);
        let coeffs = (last..=-1).rev().map(|e| self.at(e)).collect();
        AsymptoticSeries { poly, coeffs }
    }
}

impl AsymptoticSeries {
    pub fn new(poly: Poly, coeffs: Vec<Real>) -> Self {
        AsymptoticSeries { poly, coeffs }
    }

    /// Pure series `sum_k coeffs[k] z^-(k+1)`.
    pub fn from_coeffs(coeffs: Vec<Real>) -> Self {
        AsymptoticSeries {
            poly: Poly::zero(),
            coeffs,
        }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// Coefficients of `z^-1, z^-2, ...`.
    pub fn coeffs(&self) -> &[Real] {
        &self.coeffs
    }

    /// Number of known negative-power terms.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `z^exp`; zero above the polynomial part and for unknown
    /// negative powers.
    pub fn coeff_at(&self, exp: i64) -> Real {
        if exp >= 0 {
            self.poly.coeff(exp as usize)
        } else {
            self.coeffs
                .get((-exp - 1) as usize)
                .cloned()
                .unwrap_or_else(zero)
        }
    }

    pub fn truncate(&self, k: usize) -> Self {
        AsymptoticSeries {
            poly: self.poly.clone(),
            coeffs: self.coeffs.iter().take(k).cloned().collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.order().min(other.order());
        AsymptoticSeries {
            poly: &self.poly + &other.poly,
            coeffs: (0..k)
                .map(|i| Float::with_val(precision(), &self.coeffs[i] + &other.coeffs[i]))
                .collect(),
        }
    }

    pub fn scale(&self, factor: &Real) -> Self {
        AsymptoticSeries {
            poly: self.poly.scale(factor),
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Float::with_val(precision(), c * factor))
                .collect(),
        }
    }

    /// Product truncated after `k` negative-power terms (or earlier, where the
    /// known terms stop determining it).
    pub fn mul(&self, other: &Self, k: usize) -> Self {
        let a = Laurent::from_series(self);
        let b = Laurent::from_series(other);
        let top = a.top + b.top;
        let low = (a.low() + b.top).max(b.low() + a.top);
        let c = (0..=(top - low).max(-1))
            .map(|i| {
                let e = top - i;
                let mut acc = zero();
                for ea in a.low()..=a.top {
                    let eb = e - ea;
                    if eb > b.top || eb < b.low() {
                        continue;
                    }
                    acc += Float::with_val(precision(), &a.at(ea) * &b.at(eb));
                }
                acc
            })
            .collect();
        Laurent { top, c }.into_series(low, k)
    }

    /// Product with a polynomial, which is exact: the result is known `deg p`
    /// powers further than `self`, up to `k` terms.
    pub fn mul_poly(&self, p: &Poly, k: usize) -> Self {
        let a = Laurent::from_series(self);
        let Some(d) = p.degree() else {
            return AsymptoticSeries::from_coeffs(vec![zero(); k.min(self.order())]);
        };
        let top = a.top + d as i64;
        let low = a.low() + d as i64;
        let c = (0..=(top - low).max(-1))
            .map(|i| {
                let e = top - i;
                let mut acc = zero();
                for j in 0..=d {
                    let ea = e - j as i64;
                    if ea < a.low() || ea > a.top {
                        continue;
                    }
                    acc += Float::with_val(precision(), p.coeffs()[j].clone() * &a.at(ea));
                }
                acc
            })
            .collect();
        Laurent { top, c }.into_series(low, k)
    }
}

/// Expansion of `a / w` at infinity, truncated after `k` negative-power terms.
///
/// Long division in descending powers of `z`. The quotient is determined down
/// to `deg w` powers below the last known term of `a`; fewer than `k` terms
/// are returned when `a` is too short.
pub fn series_divide(a: &AsymptoticSeries, w: &Poly, k: usize) -> Result<AsymptoticSeries> {
    if k == 0 {
        return Err(Error::InvalidInput("truncation order must be at least 1".into()));
    }
    let w = w.trimmed();
    let Some(d) = w.degree() else {
        return Err(Error::DegenerateInput("division by the zero polynomial".into()));
    };
    let num = Laurent::from_series(a);
    let lead = w.coeffs()[d].clone();
    let top = num.top - d as i64;
    let low = num.low() - d as i64;
    let count = (top - (-(k as i64)).max(low) + 1).max(0) as usize;
    let mut r: Vec<Real> = Vec::with_capacity(count);
    for i in 0..count {
        let mut acc = num.at(num.top - i as i64);
        for j in 1..=d.min(i) {
            acc -= Float::with_val(precision(), &w.coeffs()[d - j] * &r[i - j]);
        }
        acc /= &lead;
        r.push(acc);
    }
    Ok(Laurent { top, c: r }.into_series(low, k))
}
