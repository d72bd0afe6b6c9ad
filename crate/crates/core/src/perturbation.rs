//! Rational perturbations `r_j = v_j / t_j` and the perturbed system
//! `f_j = s^_{1,j} + r_j`.

use rug::ops::Pow;
use rug::Float;

use crate::analysis::CheckReport;
use crate::error::{Error, Result};
use crate::nikishin::NikishinSystem;
use crate::numkernel::{
    cabs, cluster_tol, cplx, poly_roots, precision, real, series_divide, trim_threshold, zero,
    AsymptoticSeries, Cplx, Poly, Real,
};

/// A zero of a denominator with its order.
#[derive(Clone, Debug, PartialEq)]
pub struct Pole {
    pub root: Cplx,
    pub order: usize,
}

impl Pole {
    pub fn real(at: f64, order: usize) -> Self {
        Pole { root: cplx(at), order }
    }

    pub fn from_real(at: Real, order: usize) -> Self {
        Pole {
            root: Cplx::with_val(precision(), (at, 0)),
            order,
        }
    }

    pub fn is_real(&self) -> bool {
        self.root.imag().is_zero()
    }

    pub fn describe(&self) -> String {
        let (re, im) = (self.root.real().to_f64(), self.root.imag().to_f64());
        if im == 0.0 {
            format!("{re}")
        } else {
            format!("{re}{im:+}i")
        }
    }
}

fn same_point(a: &Cplx, b: &Cplx) -> bool {
    let p = precision();
    let scale = cabs(a).max(&real(1));
    cabs(&Cplx::with_val(p, a - b)) <= Float::with_val(p, &scale * &cluster_tol())
}

/// Monic `prod (z - root)^order`; complex roots contribute through their
/// conjugate pair, counted once from the member with positive imaginary part.
fn product_of_poles(poles: &[Pole]) -> Poly {
    let mut t = Poly::one();
    for pole in poles {
        let factor = if pole.is_real() {
            Poly::new(vec![-Float::with_val(precision(), pole.root.real()), real(1)])
        } else if *pole.root.imag() > 0 {
            Poly::conjugate_pair(&pole.root)
        } else {
            continue;
        };
        for _ in 0..pole.order {
            t = &t * &factor;
        }
    }
    t
}

/// `v / t` with real coefficients, `deg v < deg t`, no common zeros.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    v: Poly,
    t: Poly,
    poles: Vec<Pole>,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            v: Poly::zero(),
            t: Poly::one(),
            poles: Vec::new(),
        }
    }

    /// `c / (z - a)`.
    pub fn simple_pole(c: Real, a: Real) -> Result<Self> {
        RationalFunction::from_factored(Poly::constant(c), vec![Pole::from_real(a, 1)])
    }

    /// Numerator coefficients over a factored monic denominator. Complex
    /// poles must be listed together with their conjugates.
    pub fn from_factored(v: Poly, poles: Vec<Pole>) -> Result<Self> {
        for (i, pole) in poles.iter().enumerate() {
            if pole.order == 0 {
                return Err(Error::InvalidInput(format!("pole {} has order zero", pole.describe())));
            }
            if pole.is_real() {
                continue;
            }
            let conj = pole.root.clone().conj();
            let paired = poles
                .iter()
                .enumerate()
                .any(|(k, q)| k != i && q.order == pole.order && same_point(&q.root, &conj));
            if !paired {
                return Err(Error::InvalidInput(format!(
                    "complex pole {} needs its conjugate with the same order",
                    pole.describe()
                )));
            }
        }
        let t = product_of_poles(&poles);
        let r = RationalFunction { v: v.trimmed(), t, poles };
        r.validate()?;
        Ok(r)
    }

    /// From expanded coefficients; the poles are found numerically.
    pub fn new(v: Poly, t: Poly) -> Result<Self> {
        let t = t.trimmed();
        let Some(d) = t.degree() else {
            return Err(Error::DegenerateInput("zero denominator".into()));
        };
        let poles = if d == 0 {
            Vec::new()
        } else {
            poly_roots(&t)?
                .into_iter()
                .map(|c| {
                    let mut root = c.center;
                    if Float::with_val(precision(), root.imag().abs_ref()) <= cluster_tol() {
                        root = Cplx::with_val(precision(), (root.real(), 0));
                    }
                    Pole { root, order: c.multiplicity }
                })
                .collect()
        };
        let r = RationalFunction { v: v.trimmed(), t, poles };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<()> {
        let dt = self.t.degree().unwrap_or(0);
        if let Some(dv) = self.v.degree() {
            if dv >= dt {
                return Err(Error::InvalidInput(format!(
                    "numerator degree {dv} must be below denominator degree {dt}"
                )));
            }
        }
        if self.v.is_zero() {
            return Ok(());
        }
        let p = precision();
        let vmax = self.v.max_abs_coeff();
        for pole in &self.poles {
            let size = cabs(&pole.root).max(&real(1));
            let bound = Float::with_val(p, &vmax * &trim_threshold())
                * Float::with_val(p, size.pow(self.v.len() as u32));
            if cabs(&self.v.eval_complex(&pole.root)) <= bound {
                return Err(Error::DegenerateInput(format!(
                    "numerator and denominator share the zero {}",
                    pole.describe()
                )));
            }
        }
        Ok(())
    }

    pub fn numerator(&self) -> &Poly {
        &self.v
    }

    pub fn denominator(&self) -> &Poly {
        &self.t
    }

    pub fn poles(&self) -> &[Pole] {
        &self.poles
    }

    /// `deg t`.
    pub fn degree(&self) -> usize {
        self.t.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn scaled(&self, factor: &Real) -> RationalFunction {
        RationalFunction {
            v: self.v.scale(factor),
            t: self.t.clone(),
            poles: self.poles.clone(),
        }
    }

    pub fn eval(&self, z: &Cplx) -> Cplx {
        let num = self.v.eval_complex(z);
        let den = self.t.eval_complex(z);
        Cplx::with_val(precision(), num / den)
    }

    /// `c_0 ..= c_K` with `r(z) = sum c_k z^-(k+1)`.
    pub fn laurent_coeffs(&self, k: usize) -> Vec<Real> {
        if self.v.is_zero() {
            return vec![zero(); k + 1];
        }
        let exact = AsymptoticSeries::new(self.v.clone(), vec![zero(); k + 1]);
        let q = series_divide(&exact, &self.t, k + 1).expect("denominator is nonzero");
        let mut c = q.coeffs().to_vec();
        c.resize(k + 1, zero());
        c
    }
}

/// `f_j = s^_{1,j} + r_j` with `T = lcm(t_1..t_m)` and `D = deg T`.
#[derive(Clone, Debug)]
pub struct PerturbedSystem {
    base: NikishinSystem,
    r: Vec<RationalFunction>,
    t_lcm: Poly,
    lcm_poles: Vec<Pole>,
}

impl PerturbedSystem {
    pub fn new(base: NikishinSystem, r: Vec<RationalFunction>) -> Result<Self> {
        if r.len() != base.m() {
            return Err(Error::InvalidInput(format!(
                "{} perturbations for a system with m = {}",
                r.len(),
                base.m()
            )));
        }
        let mut lcm_poles: Vec<Pole> = Vec::new();
        for rj in &r {
            for pole in rj.poles() {
                match lcm_poles.iter_mut().find(|q| same_point(&q.root, &pole.root)) {
                    Some(q) => q.order = q.order.max(pole.order),
                    None => lcm_poles.push(pole.clone()),
                }
            }
        }
        let t_lcm = product_of_poles(&lcm_poles);
        Ok(PerturbedSystem {
            base,
            r,
            t_lcm,
            lcm_poles,
        })
    }

    /// No perturbation at all.
    pub fn unperturbed(base: NikishinSystem) -> Self {
        let r = vec![RationalFunction::zero(); base.m()];
        PerturbedSystem::new(base, r).expect("sizes match")
    }

    pub fn base(&self) -> &NikishinSystem {
        &self.base
    }

    pub fn m(&self) -> usize {
        self.base.m()
    }

    pub fn r(&self, j: usize) -> &RationalFunction {
        &self.r[j - 1]
    }

    pub fn t_lcm(&self) -> &Poly {
        &self.t_lcm
    }

    pub fn lcm_poles(&self) -> &[Pole] {
        &self.lcm_poles
    }

    /// `D = deg T`.
    pub fn d(&self) -> usize {
        self.t_lcm.degree().unwrap_or(0)
    }

    /// Coefficients `0 ..= K` of `f_j` at infinity.
    pub fn perturbed_series(&self, j: usize, k: usize) -> Result<Vec<Real>> {
        let moments = self.base.nested_moments(1, j, k)?;
        let laurent = self.r(j).laurent_coeffs(k);
        Ok(moments
            .moments
            .into_iter()
            .zip(laurent)
            .map(|(a, b)| a + b)
            .collect())
    }

    pub fn f_series(&self, j: usize, k: usize) -> Result<AsymptoticSeries> {
        Ok(AsymptoticSeries::from_coeffs(self.perturbed_series(j, k)?))
    }

    /// `f_j(z)`.
    pub fn eval_f(&self, j: usize, z: &Cplx) -> Result<Cplx> {
        let s = self.base.nested_cauchy(1, j, z)?;
        Ok(s + self.r(j).eval(z))
    }
}

fn interval_label(alpha: &Real, beta: &Real) -> String {
    format!("[{}, {}]", alpha.to_f64(), beta.to_f64())
}

/// Checks every pole against `Delta_1 u Delta_m` and, when `strict`, that
/// distinct `r_j` have no pole in common.
pub fn validate_perturbation(ps: &PerturbedSystem, strict: bool) -> Result<CheckReport> {
    let m = ps.m();
    let mut report = CheckReport::new("perturbation-hypotheses", "pole-placement");
    let regions = [ps.base.generator(1), ps.base.generator(m)];
    for j in 1..=m {
        for pole in ps.r(j).poles() {
            let mut nearest: Option<Real> = None;
            for g in regions {
                let dist = g.spec.distance(&pole.root);
                if g.spec.check_off_support(&pole.root).is_err() {
                    return Err(Error::PoleInForbiddenRegion {
                        index: j,
                        pole: pole.describe(),
                        region: interval_label(&g.spec.alpha, &g.spec.beta),
                    });
                }
                nearest = Some(match nearest {
                    Some(d) if d < dist => d,
                    _ => dist,
                });
            }
            let dist = nearest.map(|d| d.to_f64()).unwrap_or(f64::INFINITY);
            report.push(
                format!("r_{j} pole {} order {} distance to forbidden region", pole.describe(), pole.order),
                Some(j),
                dist,
                0.0,
                crate::analysis::Relation::AtLeast,
            );
        }
    }
    if strict {
        for i in 1..=m {
            for j in i + 1..=m {
                for a in ps.r(i).poles() {
                    if ps.r(j).poles().iter().any(|b| same_point(&a.root, &b.root)) {
                        return Err(Error::SharedPoles(i, j, a.describe()));
                    }
                }
            }
        }
    }
    report.meta("D", ps.d());
    report.meta("strict", strict);
    Ok(report)
}
