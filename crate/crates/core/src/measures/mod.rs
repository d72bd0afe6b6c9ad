//! Constant-sign measures on bounded intervals: quadrature, moments, Cauchy
//! transforms, the Carleman indicator and the inverse-measure expansion.

pub mod quadrature;

use rug::ops::Pow;
use rug::Float;

pub use quadrature::{gauss_jacobi_interval, gauss_jacobi_reference, QuadratureRule};

use crate::error::{Error, Result};
use crate::numkernel::{
    cabs, determinant, machine_spacing, precision, real, trim_threshold, zero, AsymptoticSeries,
    Cplx, Matrix, Poly, Real,
};

/// Default number of Gauss nodes per measure.
pub const DEFAULT_NQ: usize = 200;

/// Levels of geometric subdivision toward a shared endpoint.
pub const GRADED_LEVELS: usize = 40;

/// Nodes per piece in a graded rule.
pub const GRADED_PIECE_NODES: usize = 40;

/// `sign * scale * (x-alpha)^a_exp (beta-x)^b_exp * factor(x)` on `[alpha, beta]`,
/// optionally normalized to unit mass before the scale and sign are applied.
#[derive(Clone, Debug)]
pub struct MeasureSpec {
    pub alpha: Real,
    pub beta: Real,
    pub a_exp: Real,
    pub b_exp: Real,
    pub factor: Option<Poly>,
    pub sign: i8,
    pub scale: Real,
    pub normalized: bool,
    pub nq: usize,
}

impl MeasureSpec {
    pub fn jacobi(alpha: Real, beta: Real, a_exp: Real, b_exp: Real) -> Self {
        MeasureSpec {
            alpha,
            beta,
            a_exp,
            b_exp,
            factor: None,
            sign: 1,
            scale: real(1),
            normalized: false,
            nq: DEFAULT_NQ,
        }
    }

    pub fn lebesgue(alpha: f64, beta: f64) -> Self {
        MeasureSpec::jacobi(real(alpha), real(beta), zero(), zero())
    }

    /// `dx / (pi sqrt((x-alpha)(beta-x)))`, unit mass.
    pub fn arcsine(alpha: f64, beta: f64) -> Self {
        let mut m = MeasureSpec::jacobi(real(alpha), real(beta), real(-0.5), real(-0.5));
        m.normalized = true;
        m
    }

    pub fn with_nq(mut self, nq: usize) -> Self {
        self.nq = nq;
        self
    }

    pub fn with_sign(mut self, sign: i8) -> Self {
        self.sign = sign;
        self
    }

    pub fn with_scale(mut self, scale: Real) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_factor(mut self, factor: Poly) -> Self {
        self.factor = Some(factor);
        self
    }

    pub fn normalized(mut self, on: bool) -> Self {
        self.normalized = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.a_exp <= -1 || self.b_exp <= -1 {
            return Err(Error::BadWeight {
                a_exp: self.a_exp.to_f64().to_string(),
                b_exp: self.b_exp.to_f64().to_string(),
            });
        }
        if self.alpha >= self.beta {
            return Err(Error::InvalidInput(format!(
                "interval endpoints must satisfy alpha < beta, got [{}, {}]",
                self.alpha.to_f64(),
                self.beta.to_f64()
            )));
        }
        if self.sign != 1 && self.sign != -1 {
            return Err(Error::InvalidInput(format!("sign must be +1 or -1, got {}", self.sign)));
        }
        if self.scale <= 0 {
            return Err(Error::InvalidInput("scale must be positive".into()));
        }
        if self.nq == 0 {
            return Err(Error::InvalidInput("quadrature needs at least one node".into()));
        }
        Ok(())
    }

    fn contains(&self, x: &Real) -> bool {
        *x >= self.alpha && *x <= self.beta
    }

    /// Distance from `z` to `[alpha, beta]`.
    pub fn distance(&self, z: &Cplx) -> Real {
        let re = Float::with_val(precision(), z.real());
        let im = Float::with_val(precision(), z.imag()).abs();
        let dx = if re < self.alpha {
            Float::with_val(precision(), &self.alpha - &re)
        } else if re > self.beta {
            Float::with_val(precision(), &re - &self.beta)
        } else {
            zero()
        };
        Float::with_val(precision(), dx.hypot(&im))
    }

    /// Fails with `PoleOnSupport` when `z` is within ten units of machine
    /// spacing of the interval.
    pub fn check_off_support(&self, z: &Cplx) -> Result<()> {
        let scale = {
            let m = cabs(z).max(&self.alpha.clone().abs()).max(&self.beta.clone().abs());
            if m < 1 {
                real(1)
            } else {
                m
            }
        };
        let guard = Float::with_val(precision(), machine_spacing() * 10u32) * scale;
        if self.distance(z) < guard {
            return Err(Error::PoleOnSupport {
                point: format!("{}{:+}i", z.real().to_f64(), z.imag().to_f64()),
                alpha: self.alpha.to_f64().to_string(),
                beta: self.beta.to_f64().to_string(),
            });
        }
        Ok(())
    }

    /// Smooth part of the density (everything except the endpoint powers
    /// handled by the rule), evaluated at `x`.
    fn smooth_factor(&self, x: &Real, with_left: bool, with_right: bool) -> Real {
        let p = precision();
        let mut v = real(1);
        if with_left {
            v *= Float::with_val(p, x - &self.alpha).pow(&self.a_exp);
        }
        if with_right {
            v *= Float::with_val(p, &self.beta - x).pow(&self.b_exp);
        }
        if let Some(f) = &self.factor {
            v *= f.eval(x);
        }
        v
    }

    fn finish(&self, mut rule: QuadratureRule) -> Result<QuadratureRule> {
        if let Some(f) = &self.factor {
            if rule.nodes.iter().any(|x| f.eval(x) <= 0) || f.eval(&self.alpha) < 0 || f.eval(&self.beta) < 0 {
                return Err(Error::InvalidInput(
                    "polynomial weight factor must be positive on the interval".into(),
                ));
            }
        }
        if self.normalized {
            let mass = rule.mass();
            if mass.is_zero() {
                return Err(Error::ZeroMass);
            }
            let inv = Float::with_val(precision(), 1 / mass);
            rule.scale_weights(&inv);
        }
        let mut s = self.scale.clone();
        if self.sign < 0 {
            s = -s;
        }
        rule.scale_weights(&s);
        Ok(rule)
    }
}

/// Gauss rule for the measure: `nq` nodes in `(alpha, beta)` with weights of
/// the measure's sign, exact on polynomials of degree `2 nq - 1 - deg factor`.
pub fn build_quadrature(m: &MeasureSpec) -> Result<QuadratureRule> {
    m.validate()?;
    let mut rule = gauss_jacobi_interval(m.nq, &m.alpha, &m.beta, &m.a_exp, &m.b_exp);
    if let Some(f) = &m.factor {
        for (x, w) in rule.nodes.iter().zip(rule.weights.iter_mut()) {
            *w *= f.eval(x);
        }
    }
    m.finish(rule)
}

/// Composite rule refined geometrically toward one or both endpoints
/// (`levels` halvings each), for integrands singular at a shared endpoint.
pub fn build_graded_quadrature(
    m: &MeasureSpec,
    toward_left: bool,
    toward_right: bool,
    levels: usize,
    per_piece: usize,
) -> Result<QuadratureRule> {
    m.validate()?;
    if !toward_left && !toward_right {
        return build_quadrature(m);
    }
    let p = precision();
    let len = Float::with_val(p, &m.beta - &m.alpha);
    let mut breaks: Vec<Real> = Vec::new();
    let mid = Float::with_val(p, Float::with_val(p, &m.alpha + &m.beta) / 2);
    let (left_end, right_start) = match (toward_left, toward_right) {
        (true, true) => (mid.clone(), mid.clone()),
        (true, false) => (m.beta.clone(), m.beta.clone()),
        _ => (m.alpha.clone(), m.alpha.clone()),
    };
    breaks.push(m.alpha.clone());
    if toward_left {
        let span = Float::with_val(p, &left_end - &m.alpha);
        for k in (1..=levels).rev() {
            let mut h = span.clone();
            h >>= k as i32;
            breaks.push(Float::with_val(p, &m.alpha + &h));
        }
    }
    if toward_left && toward_right {
        breaks.push(mid.clone());
    }
    if toward_right {
        let span = Float::with_val(p, &m.beta - &right_start);
        for k in 1..=levels {
            let mut h = span.clone();
            h >>= k as i32;
            breaks.push(Float::with_val(p, &m.beta - &h));
        }
    }
    breaks.push(m.beta.clone());
    breaks.dedup();
    let _ = len;

    let mut parts = Vec::with_capacity(breaks.len());
    for pair in breaks.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        let at_left = *lo == m.alpha;
        let at_right = *hi == m.beta;
        let left_exp = if at_left { m.a_exp.clone() } else { zero() };
        let right_exp = if at_right { m.b_exp.clone() } else { zero() };
        let mut rule = gauss_jacobi_interval(per_piece, lo, hi, &left_exp, &right_exp);
        for (x, w) in rule.nodes.iter().zip(rule.weights.iter_mut()) {
            *w *= m.smooth_factor(x, !at_left, !at_right);
        }
        parts.push(rule);
    }
    m.finish(QuadratureRule::concat(parts))
}

/// A measure together with its quadrature rule.
#[derive(Clone, Debug)]
pub struct Measure {
    pub spec: MeasureSpec,
    pub rule: QuadratureRule,
}

impl Measure {
    pub fn new(spec: MeasureSpec) -> Result<Self> {
        let rule = build_quadrature(&spec)?;
        Ok(Measure { spec, rule })
    }

    pub fn with_rule(spec: MeasureSpec, rule: QuadratureRule) -> Self {
        Measure { spec, rule }
    }

    /// `int x^k dm(x)`.
    pub fn moment(&self, k: u32) -> Real {
        self.rule.moment(k)
    }

    /// Moments `c_0 ..= c_k`.
    pub fn moment_table(&self, k: usize) -> MomentTable {
        MomentTable::from_rule(&self.rule, k)
    }

    /// `int dm(x) / (z - x)`.
    pub fn cauchy_transform(&self, z: &Cplx) -> Result<Cplx> {
        self.spec.check_off_support(z)?;
        Ok(self.rule.cauchy(z))
    }

    /// Moments of the image of the measure under the affine map taking
    /// `[alpha, beta]` onto `[0, 1]` (total mass is preserved).
    pub fn unit_interval_moments(&self, k: usize) -> MomentTable {
        let p = precision();
        let len = Float::with_val(p, &self.spec.beta - &self.spec.alpha);
        let scale = Float::with_val(p, 1 / &len);
        let shift = -Float::with_val(p, &self.spec.alpha / &len);
        MomentTable::from_rule(&self.rule.affine_map(&scale, &shift), k)
    }
}

/// Cached moments `c_0 ..= c_K`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable {
    pub moments: Vec<Real>,
}

impl MomentTable {
    pub fn new(moments: Vec<Real>) -> Self {
        MomentTable { moments }
    }

    pub fn from_rule(rule: &QuadratureRule, k: usize) -> Self {
        let p = precision();
        let mut moments = vec![zero(); k + 1];
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let mut term = w.clone();
            for slot in moments.iter_mut() {
                *slot += &term;
                term *= x;
            }
        }
        let _ = p;
        MomentTable { moments }
    }

    pub fn c(&self, k: usize) -> &Real {
        &self.moments[k]
    }

    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    /// `det [c_{i+j+shift}]_{i,j<order}`.
    pub fn hankel_determinant(&self, order: usize, shift: usize) -> Result<Real> {
        if 2 * order + shift - 1 > self.moments.len() {
            return Err(Error::InvalidInput(format!(
                "Hankel determinant of order {order} needs {} moments",
                2 * order + shift - 1
            )));
        }
        let rows = (0..order)
            .map(|i| (0..order).map(|j| self.moments[i + j + shift].clone()).collect())
            .collect();
        determinant(&Matrix::from_rows(rows)?)
    }

    /// The expansion `sum c_k z^-(k+1)`.
    pub fn as_series(&self) -> AsymptoticSeries {
        AsymptoticSeries::from_coeffs(self.moments.clone())
    }
}

/// Partial sums of `sum_{n>=1} |c_n|^(-1/(2n))`.
#[derive(Clone, Debug)]
pub struct CarlemanIndicator {
    /// `S_1 ..= S_N`; `+inf` from the first vanishing moment on.
    pub partial_sums: Vec<Real>,
    pub first_zero_moment: Option<usize>,
    pub divergent: bool,
}

/// Carleman partial sums for a moment table of a measure already mapped into
/// the positive half-line.
///
/// A moment below `trim_threshold() * max_{k<=n} |c_k|` counts as zero and
/// makes the sum `+inf`. Otherwise the verdict compares the tail against the
/// harmonic series: divergent when `n * term_n >= 1` for every `n` in the
/// second half of the window.
pub fn carleman_indicator(mt: &MomentTable, n_terms: usize) -> Result<CarlemanIndicator> {
    if n_terms == 0 || n_terms >= mt.len() {
        return Err(Error::InvalidInput(format!(
            "Carleman window {n_terms} needs moments c_1..c_{n_terms}, table has {}",
            mt.len()
        )));
    }
    let p = precision();
    let trim = trim_threshold();
    let mut sums = Vec::with_capacity(n_terms);
    let mut terms = Vec::with_capacity(n_terms);
    let mut acc = zero();
    let mut first_zero = None;
    let mut running_max = Float::with_val(p, mt.c(0).abs_ref());
    for n in 1..=n_terms {
        let c = Float::with_val(p, mt.c(n).abs_ref());
        if c > running_max {
            running_max = c.clone();
        }
        if first_zero.is_none() && c <= Float::with_val(p, &running_max * &trim) {
            first_zero = Some(n);
        }
        if first_zero.is_some() {
            acc = Float::with_val(p, rug::float::Special::Infinity);
            terms.push(acc.clone());
        } else {
            let expo = Float::with_val(p, -1) / Float::with_val(p, 2 * n as u32);
            let term = c.pow(&expo);
            acc += &term;
            terms.push(term);
        }
        sums.push(acc.clone());
    }
    let divergent = first_zero.is_some()
        || terms
            .iter()
            .enumerate()
            .skip(n_terms / 2)
            .all(|(i, t)| Float::with_val(p, t * (i + 1) as u32) >= 1);
    Ok(CarlemanIndicator {
        partial_sums: sums,
        first_zero_moment: first_zero,
        divergent,
    })
}

/// `1/s(z) = a z + b + sum_j d_j z^-(j+1)`.
#[derive(Clone, Debug)]
pub struct InverseSeries {
    pub a: Real,
    pub b: Real,
    pub d: Vec<Real>,
}

impl InverseSeries {
    /// The expansion of `l(z) + tau(z)` as a series with linear polynomial part.
    pub fn as_series(&self) -> AsymptoticSeries {
        AsymptoticSeries::new(Poly::new(vec![self.b.clone(), self.a.clone()]), self.d.clone())
    }
}

/// Formal inversion of `s(z) = sum c_j z^-(j+1)` up to `d_K`.
///
/// Uses `c_0 ..= c_{K+2}`.
pub fn inverse_transform_series(mt: &MomentTable, k: usize) -> Result<InverseSeries> {
    if mt.len() < k + 3 {
        return Err(Error::InvalidInput(format!(
            "inverse series to order {k} needs {} moments, table has {}",
            k + 3,
            mt.len()
        )));
    }
    let p = precision();
    let c0 = mt.c(0);
    let scale = crate::numkernel::prec::max_abs(&mt.moments[..k + 3]);
    if Float::with_val(p, c0.abs_ref()) <= Float::with_val(p, &scale * &trim_threshold()) {
        return Err(Error::ZeroMass);
    }
    // h = 1 / (c_0 + c_1 w + c_2 w^2 + ...), w = 1/z
    let mut h: Vec<Real> = Vec::with_capacity(k + 3);
    for n in 0..k + 3 {
        let mut acc = if n == 0 { real(1) } else { zero() };
        for i in 1..=n {
            acc -= Float::with_val(p, mt.c(i) * &h[n - i]);
        }
        h.push(Float::with_val(p, acc / c0));
    }
    Ok(InverseSeries {
        a: h[0].clone(),
        b: h[1].clone(),
        d: h[2..].to_vec(),
    })
}

/// Largest coefficient deviation of `s * (l + tau)` from `1` over the powers
/// `z^0 .. z^-k`.
pub fn inverse_recomposition_residual(mt: &MomentTable, inv: &InverseSeries, k: usize) -> Real {
    let s = mt.as_series();
    let prod = s.mul(&inv.as_series(), k);
    let mut worst = Float::with_val(precision(), prod.coeff_at(0) - 1u32).abs();
    for e in 1..=k.min(prod.order()) {
        let v = Float::with_val(precision(), prod.coeff_at(-(e as i64)).abs_ref());
        if v > worst {
            worst = v;
        }
    }
    for e in 1..prod.poly().len() {
        let v = Float::with_val(precision(), prod.coeff_at(e as i64).abs_ref());
        if v > worst {
            worst = v;
        }
    }
    worst
}

/// Whether a real point lies in the closed support interval.
pub fn interval_contains(m: &MeasureSpec, x: &Real) -> bool {
    m.contains(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::cplx;

    fn close(a: &Real, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() < tol
    }

    #[test]
    fn lebesgue_two_nodes() {
        let rule = build_quadrature(&MeasureSpec::lebesgue(0.0, 1.0).with_nq(2)).unwrap();
        let d = 0.5 / 3f64.sqrt();
        assert!(close(&rule.nodes[0], 0.5 - d, 1e-15));
        assert!(close(&rule.nodes[1], 0.5 + d, 1e-15));
        assert!(rule.weights.iter().all(|w| close(w, 0.5, 1e-15)));
    }

    #[test]
    fn normalized_arcsine_three_nodes() {
        let rule = build_quadrature(&MeasureSpec::arcsine(-1.0, 1.0).with_nq(3)).unwrap();
        for w in &rule.weights {
            assert!(Float::with_val(precision(), w - Float::with_val(precision(), 1) / 3u32).abs() < 1e-70);
        }
    }

    #[test]
    fn bad_exponents_rejected() {
        let m = MeasureSpec::jacobi(real(0), real(1), real(-1), real(0));
        assert!(matches!(build_quadrature(&m), Err(Error::BadWeight { .. })));
    }

    #[test]
    fn moments_power_rule_and_symmetry() {
        let m = Measure::new(MeasureSpec::lebesgue(0.0, 1.0).with_nq(20)).unwrap();
        for k in 0..10u32 {
            let want = Float::with_val(precision(), 1) / (k + 1);
            assert!(Float::with_val(precision(), m.moment(k) - want).abs() < 1e-70);
        }
        let a = Measure::new(MeasureSpec::arcsine(-1.0, 1.0).with_nq(20)).unwrap();
        assert!(a.moment(1).abs() < 1e-70);
        assert!(Float::with_val(precision(), a.moment(2) - 0.5).abs() < 1e-70);
        assert_eq!(a.moment(0), a.rule.mass());
    }

    #[test]
    fn negative_sign_and_scale() {
        let m = Measure::new(MeasureSpec::lebesgue(0.0, 1.0).with_nq(4).with_sign(-1).with_scale(real(3))).unwrap();
        assert!(m.rule.weights.iter().all(|w| *w < 0));
        assert!(close(&m.moment(0), -3.0, 1e-60));
    }

    #[test]
    fn factor_multiplies_density() {
        // (1 + x) on [0, 1]: mass 3/2, first moment 5/6
        let m = Measure::new(MeasureSpec::lebesgue(0.0, 1.0).with_nq(10).with_factor(Poly::from_f64(&[1.0, 1.0]))).unwrap();
        assert!(close(&m.moment(0), 1.5, 1e-30));
        assert!(close(&m.moment(1), 5.0 / 6.0, 1e-30));
        let bad = MeasureSpec::lebesgue(0.0, 1.0).with_factor(Poly::from_f64(&[-1.0, 1.0]));
        assert!(build_quadrature(&bad).is_err());
    }

    #[test]
    fn cauchy_transform_closed_forms() {
        let leb = Measure::new(MeasureSpec::lebesgue(0.0, 1.0)).unwrap();
        let v = leb.cauchy_transform(&cplx(2)).unwrap();
        let want = Float::with_val(precision(), 2).ln();
        assert!(Float::with_val(precision(), v.real() - &want).abs() < 1e-60);
        assert!(v.imag().is_zero());

        let arc = Measure::new(MeasureSpec::arcsine(-1.0, 1.0)).unwrap();
        let v = arc.cauchy_transform(&cplx(2)).unwrap();
        let want = Float::with_val(precision(), 3).sqrt().recip();
        assert!(Float::with_val(precision(), v.real() - &want).abs() < 1e-60);
    }

    #[test]
    fn pole_on_support_rejected() {
        let leb = Measure::new(MeasureSpec::lebesgue(0.0, 1.0).with_nq(8)).unwrap();
        assert!(matches!(leb.cauchy_transform(&cplx(0.5)), Err(Error::PoleOnSupport { .. })));
        assert!(leb.cauchy_transform(&cplx((0.5, 1e-3))).is_ok());
    }

    #[test]
    fn schwarz_reflection() {
        let leb = Measure::new(MeasureSpec::jacobi(real(0), real(1), real(0.25), real(1.5)).with_nq(30)).unwrap();
        let z = cplx((1.5, 0.7));
        let a = leb.cauchy_transform(&z).unwrap();
        let b = leb.cauchy_transform(&z.clone().conj()).unwrap().conj();
        assert!(cabs(&Cplx::with_val(precision(), &a - &b)) < 1e-70);
    }

    #[test]
    fn carleman_constant_and_zero_moment() {
        let ones = MomentTable::new(vec![real(1); 11]);
        let c = carleman_indicator(&ones, 10).unwrap();
        assert!(close(c.partial_sums.last().unwrap(), 10.0, 1e-60));
        assert!(c.divergent);

        let mut m = vec![real(1); 6];
        m[3] = zero();
        let c = carleman_indicator(&MomentTable::new(m), 5).unwrap();
        assert_eq!(c.first_zero_moment, Some(3));
        assert!(c.partial_sums[2].is_infinite());
        assert!(!c.partial_sums[1].is_infinite());
        assert!(c.divergent);
    }

    #[test]
    fn carleman_rapidly_growing_moments_converge() {
        // c_n = (n!)^4 grows fast enough for the sum to converge.
        let mut m = Vec::new();
        let mut f = real(1);
        for n in 0..=40u32 {
            if n > 0 {
                f *= n;
            }
            m.push(Float::with_val(precision(), f.clone().pow(4u32)));
        }
        let c = carleman_indicator(&MomentTable::new(m), 40).unwrap();
        assert!(!c.divergent);
    }

    #[test]
    fn inverse_of_pure_pole() {
        let mut m = vec![zero(); 8];
        m[0] = real(1);
        let inv = inverse_transform_series(&MomentTable::new(m), 5).unwrap();
        assert_eq!(inv.a, 1);
        assert!(inv.b.is_zero());
        assert!(inv.d.iter().all(|d| d.is_zero()));
        assert!(inverse_transform_series(&MomentTable::new(vec![zero(); 8]), 5).is_err());
    }

    #[test]
    fn inverse_of_doubled_measure_halves_leading_coefficient() {
        let arc = Measure::new(MeasureSpec::arcsine(-1.0, 1.0).with_nq(30)).unwrap();
        let arc2 = Measure::new(MeasureSpec::arcsine(-1.0, 1.0).with_nq(30).with_scale(real(2))).unwrap();
        let a1 = inverse_transform_series(&arc.moment_table(10), 4).unwrap().a;
        let a2 = inverse_transform_series(&arc2.moment_table(10), 4).unwrap().a;
        assert!(Float::with_val(precision(), a1 - a2 * 2u32).abs() < 1e-70);
    }

    #[test]
    fn graded_rule_matches_plain_rule_on_polynomials() {
        let spec = MeasureSpec::jacobi(real(1), real(2), real(0.5), real(-0.25)).with_nq(40);
        let plain = build_quadrature(&spec).unwrap();
        for (l, r) in [(true, false), (false, true), (true, true)] {
            let graded = build_graded_quadrature(&spec, l, r, GRADED_LEVELS, GRADED_PIECE_NODES).unwrap();
            for k in 0..8u32 {
                let d = Float::with_val(precision(), plain.moment(k) - graded.moment(k)).abs();
                assert!(d < 1e-50, "k = {k}, {l} {r}: {}", d.to_f64());
            }
        }
    }

    #[test]
    fn hankel_positivity() {
        let m = Measure::new(MeasureSpec::lebesgue(2.0, 3.0).with_nq(20)).unwrap();
        let t = m.moment_table(14);
        for order in 1..=6 {
            assert!(t.hankel_determinant(order, 0).unwrap() > 0);
            assert!(t.hankel_determinant(order, 1).unwrap() > 0);
        }
    }
}
