//! Zero localization: interior of an interval, disks around poles, strays.

use rug::Float;

use super::report::CheckReport;
use crate::error::{Error, Result};
use crate::hermite_pade::Type2Approximant;
use crate::numkernel::{cabs, poly_roots, precision, real, root_tol, Cplx, Poly, Real, RootCluster};
use crate::perturbation::{PerturbedSystem, Pole};

/// Zeros near a declared pole.
#[derive(Clone, Debug)]
pub struct DiskCount {
    pub pole: Pole,
    /// Expected number of zeros (the pole order).
    pub expected: usize,
    pub count: usize,
}

#[derive(Clone, Debug)]
pub struct ZeroReport {
    pub multi_index: String,
    pub degree: usize,
    /// Zeros on the open interval, counted with multiplicity.
    pub interior: usize,
    /// Interior clusters with multiplicity above one.
    pub interior_multiple: usize,
    pub disks: Vec<DiskCount>,
    pub stray: usize,
    pub eps: f64,
    pub roots: Vec<RootCluster>,
}

impl ZeroReport {
    /// Counts always add up to the degree.
    pub fn total(&self) -> usize {
        self.interior + self.disks.iter().map(|d| d.count).sum::<usize>() + self.stray
    }
}

/// Real-axis test with a relative tolerance `root_tol()`.
fn on_open_interval(z: &Cplx, alpha: &Real, beta: &Real) -> bool {
    let scale = cabs(z).max(&real(1));
    let tol = Float::with_val(precision(), &scale * &root_tol());
    Float::with_val(precision(), z.imag().abs_ref()) <= tol && z.real() > alpha && z.real() < beta
}

/// Partitions the zeros of `q` between the open interval `(alpha, beta)`,
/// the `eps`-disks around `poles` and the rest.
pub fn classify_zeros(q: &Poly, alpha: &Real, beta: &Real, poles: &[Pole], eps: f64) -> Result<ZeroReport> {
    let p = precision();
    let eps_r = real(eps);
    let degree = q.degree().unwrap_or(0);
    let roots = if degree == 0 { Vec::new() } else { poly_roots(q)? };
    let mut disks: Vec<DiskCount> = poles
        .iter()
        .map(|pole| DiskCount {
            pole: pole.clone(),
            expected: pole.order,
            count: 0,
        })
        .collect();
    let (mut interior, mut interior_multiple, mut stray) = (0, 0, 0);
    for c in &roots {
        if let Some(d) = disks
            .iter_mut()
            .find(|d| cabs(&Cplx::with_val(p, &c.center - &d.pole.root)) < eps_r)
        {
            d.count += c.multiplicity;
        } else if on_open_interval(&c.center, alpha, beta) {
            interior += c.multiplicity;
            if c.multiplicity > 1 {
                interior_multiple += 1;
            }
        } else {
            stray += c.multiplicity;
        }
    }
    Ok(ZeroReport {
        multi_index: String::new(),
        degree,
        interior,
        interior_multiple,
        disks,
        stray,
        eps,
        roots,
    })
}

/// Zero structure of `Q` against `Delta_1` and the poles of `T`.
///
/// `eps` must be below half the smallest distance between two poles or a
/// pole and `Delta_1`.
pub fn zero_report_type2(t2: &Type2Approximant, ps: &PerturbedSystem, eps: f64) -> Result<ZeroReport> {
    let spec = &ps.base().generator(1).spec;
    let poles = ps.lcm_poles();
    let p = precision();
    let mut guard: Option<f64> = None;
    let mut consider = |d: f64| guard = Some(guard.map_or(d, |g: f64| g.min(d)));
    for (i, a) in poles.iter().enumerate() {
        consider(spec.distance(&a.root).to_f64());
        for b in &poles[i + 1..] {
            consider(cabs(&Cplx::with_val(p, &a.root - &b.root)).to_f64());
        }
    }
    if let Some(g) = guard {
        if eps >= g / 2.0 {
            return Err(Error::InvalidInput(format!(
                "eps = {eps} must be below half the pole separation {g}"
            )));
        }
    }
    let mut rep = classify_zeros(&t2.q, &spec.alpha, &spec.beta, poles, eps)?;
    rep.multi_index = t2.n.to_string();
    Ok(rep)
}

/// Verdicts for a type II zero report: `deg Q = |n|`, one disk count equal
/// to each pole order, `|n| - D` interior zeros, all simple, no strays.
pub fn zero_check(rep: &ZeroReport, expected_degree: usize, expected_interior: usize) -> CheckReport {
    let mut r = CheckReport::new("zero-structure", "type2-zero-localization").with_index(&rep.multi_index);
    r.equal("deg Q", None, rep.degree as f64, expected_degree as f64);
    for d in &rep.disks {
        r.equal(format!("zeros within eps of {}", d.pole.describe()), None, d.count as f64, d.expected as f64);
    }
    r.equal("interior zeros", None, rep.interior as f64, expected_interior as f64);
    r.equal("interior multiple clusters", None, rep.interior_multiple as f64, 0.0);
    r.equal("stray zeros", None, rep.stray as f64, 0.0);
    r.meta("eps", rep.eps);
    r
}
