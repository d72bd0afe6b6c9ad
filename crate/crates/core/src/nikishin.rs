//! Nikishin systems: nested measures `s_{j,k}`, their Cauchy transforms and
//! moments, and multi-indices.

use std::collections::HashMap;
use std::fmt;

use rug::Float;

use crate::error::{Error, Result};
use crate::measures::{
    build_graded_quadrature, build_quadrature, Measure, MeasureSpec, MomentTable, QuadratureRule,
    GRADED_LEVELS, GRADED_PIECE_NODES,
};
use crate::numkernel::{precision, Cplx, Real};

/// Generators `sigma_1 .. sigma_m` with the effective weights of every chain
/// `s_{j,k}` precomputed at the nodes of `sigma_j`.
///
/// Chains are 1-based. `j <= k` is the forward product
/// `<sigma_j, ..., sigma_k>`; `j > k` is the reversed product
/// `<sigma_j, sigma_{j-1}, ..., sigma_k>`.
#[derive(Clone, Debug)]
pub struct NikishinSystem {
    gens: Vec<Measure>,
    touching_allowed: bool,
    shared_points: Vec<Option<Real>>,
    chains: HashMap<(usize, usize), QuadratureRule>,
}

fn interval_relation(a: &MeasureSpec, b: &MeasureSpec) -> Relation {
    let lo = if a.alpha > b.alpha { &a.alpha } else { &b.alpha };
    let hi = if a.beta < b.beta { &a.beta } else { &b.beta };
    if lo > hi {
        Relation::Disjoint
    } else if lo == hi {
        Relation::Touching(lo.clone())
    } else {
        Relation::Overlapping
    }
}

enum Relation {
    Disjoint,
    Touching(Real),
    Overlapping,
}

/// Checks the interval geometry and builds the system.
pub fn validate_system(gens: Vec<MeasureSpec>, touching_allowed: bool) -> Result<NikishinSystem> {
    if gens.is_empty() {
        return Err(Error::InvalidInput("a Nikishin system needs at least one generator".into()));
    }
    let m = gens.len();
    let mut shared_points = Vec::with_capacity(m.saturating_sub(1));
    for j in 0..m.saturating_sub(1) {
        match interval_relation(&gens[j], &gens[j + 1]) {
            Relation::Disjoint => shared_points.push(None),
            Relation::Overlapping => return Err(Error::OverlappingIntervals(j + 1, j + 2)),
            Relation::Touching(x) => {
                if !touching_allowed {
                    return Err(Error::TouchingNotEnabled(j + 1, j + 2));
                }
                shared_points.push(Some(x));
            }
        }
    }

    let mut measures = Vec::with_capacity(m);
    for (j, spec) in gens.into_iter().enumerate() {
        let touches = |x: &Option<Real>, at: &Real| x.as_ref().is_some_and(|p| p == at);
        let left = (j > 0 && touches(&shared_points[j - 1], &spec.alpha))
            || (j + 1 < m && touches(&shared_points[j], &spec.alpha));
        let right = (j > 0 && touches(&shared_points[j - 1], &spec.beta))
            || (j + 1 < m && touches(&shared_points[j], &spec.beta));
        let rule = if left || right {
            build_graded_quadrature(&spec, left, right, GRADED_LEVELS, GRADED_PIECE_NODES)?
        } else {
            build_quadrature(&spec)?
        };
        measures.push(Measure::with_rule(spec, rule));
    }

    let mut sys = NikishinSystem {
        gens: measures,
        touching_allowed,
        shared_points,
        chains: HashMap::new(),
    };
    sys.warm_chains();
    Ok(sys)
}

impl NikishinSystem {
    fn warm_chains(&mut self) {
        let m = self.gens.len();
        for j in 1..=m {
            self.chains.insert((j, j), self.gens[j - 1].rule.clone());
        }
        for len in 1..m {
            for j in 1..=m - len {
                let k = j + len;
                let fwd = self.extend(j, &self.chains[&(j + 1, k)]);
                self.chains.insert((j, k), fwd);
                let rev = self.extend(k, &self.chains[&(k - 1, j)]);
                self.chains.insert((k, j), rev);
            }
        }
    }

    /// Rule of `sigma_outer` weighted by the transform of `inner` at its nodes.
    fn extend(&self, outer: usize, inner: &QuadratureRule) -> QuadratureRule {
        let base = &self.gens[outer - 1].rule;
        let weights = base
            .nodes
            .iter()
            .zip(&base.weights)
            .map(|(x, w)| Float::with_val(precision(), w * &inner.cauchy_real(x)))
            .collect();
        QuadratureRule {
            nodes: base.nodes.clone(),
            weights,
        }
    }

    pub fn m(&self) -> usize {
        self.gens.len()
    }

    pub fn generator(&self, j: usize) -> &Measure {
        &self.gens[j - 1]
    }

    pub fn generators(&self) -> &[Measure] {
        &self.gens
    }

    pub fn touching_allowed(&self) -> bool {
        self.touching_allowed
    }

    /// `x_{j,j+1}` when `Delta_j` and `Delta_{j+1}` share an endpoint.
    pub fn shared_point(&self, j: usize) -> Option<&Real> {
        self.shared_points.get(j - 1).and_then(|p| p.as_ref())
    }

    fn check_chain(&self, j: usize, k: usize) -> Result<()> {
        let m = self.m();
        if j == 0 || k == 0 || j > m || k > m {
            return Err(Error::InvalidInput(format!("chain ({j}, {k}) out of range for m = {m}")));
        }
        Ok(())
    }

    /// Discrete form of `s_{j,k}`: nodes of `sigma_j`, weights
    /// `w_i * s^_{j+1,k}(x_i)`.
    pub fn chain_rule(&self, j: usize, k: usize) -> Result<&QuadratureRule> {
        self.check_chain(j, k)?;
        Ok(&self.chains[&(j, k)])
    }

    /// `s^_{j,k}(z)`.
    pub fn nested_cauchy(&self, j: usize, k: usize, z: &Cplx) -> Result<Cplx> {
        let rule = self.chain_rule(j, k)?;
        self.gens[j - 1].spec.check_off_support(z)?;
        Ok(rule.cauchy(z))
    }

    /// `int x^nu ds_{j,k}(x)`.
    pub fn nested_moment(&self, j: usize, k: usize, nu: u32) -> Result<Real> {
        Ok(self.chain_rule(j, k)?.moment(nu))
    }

    /// Moments `0 ..= order` of `s_{j,k}`.
    pub fn nested_moments(&self, j: usize, k: usize, order: usize) -> Result<MomentTable> {
        Ok(MomentTable::from_rule(self.chain_rule(j, k)?, order))
    }

    /// The same generators with every node count multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Result<NikishinSystem> {
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let mut s = g.spec.clone();
                s.nq *= factor;
                s
            })
            .collect();
        validate_system(gens, self.touching_allowed)
    }
}

/// Multi-index with non-negative components, not all zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    comps: Vec<usize>,
}

impl MultiIndex {
    pub fn new(comps: Vec<usize>) -> Result<Self> {
        if comps.is_empty() || comps.iter().all(|&c| c == 0) {
            return Err(Error::InvalidInput(format!("multi-index {comps:?} is empty or zero")));
        }
        Ok(MultiIndex { comps })
    }

    pub fn components(&self) -> &[usize] {
        &self.comps
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn get(&self, i: usize) -> usize {
        self.comps[i]
    }

    /// `|n|`.
    pub fn abs(&self) -> usize {
        self.comps.iter().sum()
    }

    /// `N_n = max{n_0, n_1 - 1, ..., n_m - 1}` for an index `(n_0, ..., n_m)`.
    pub fn big_n(&self) -> usize {
        let rest = self.comps[1..].iter().map(|&c| c.saturating_sub(1));
        rest.fold(self.comps[0], usize::max)
    }

    pub fn spread(&self) -> usize {
        self.comps.iter().max().unwrap() - self.comps.iter().min().unwrap()
    }

    /// Adds `step` to every component.
    pub fn shifted(&self, step: usize) -> MultiIndex {
        MultiIndex {
            comps: self.comps.iter().map(|c| c + step).collect(),
        }
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.comps.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `n^j` together with `|n^j|` and `N^j = |n^j| + n_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociatedIndex {
    pub comps: Vec<usize>,
    pub abs: usize,
    pub big_n: usize,
}

/// Associated index of an `m`-component index: entries `k = 2..m` are
/// `min(n_1..n_{k-1}, n_j - 1)` for `k <= j` and `min(n_j, n_k)` for `k > j`.
pub fn associated_index(n: &MultiIndex, j: usize) -> Result<AssociatedIndex> {
    let m = n.len();
    if j == 0 || j > m {
        return Err(Error::InvalidInput(format!("j = {j} out of range for m = {m}")));
    }
    let c = n.components();
    let nj = c[j - 1];
    let mut comps = Vec::with_capacity(m - 1);
    for k in 2..=m {
        let v = if k <= j {
            c[..k - 1].iter().copied().fold(nj.saturating_sub(1), usize::min)
        } else {
            nj.min(c[k - 1])
        };
        comps.push(v);
    }
    let abs = comps.iter().sum();
    Ok(AssociatedIndex {
        comps,
        abs,
        big_n: abs + nj,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{cplx, real};

    fn two_level() -> NikishinSystem {
        validate_system(vec![MeasureSpec::lebesgue(2.0, 3.0), MeasureSpec::lebesgue(0.0, 1.0)], false).unwrap()
    }

    /// Adaptive Simpson in f64.
    fn simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, tol: f64) -> f64 {
        #[allow(clippy::too_many_arguments)]
        fn rec<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
            let (flm, frm) = (f(lm), f(rm));
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                return left + right + (left + right - whole) / 15.0;
            }
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
        let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
        rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 50)
    }

    #[test]
    fn geometry() {
        assert_eq!(two_level().m(), 2);
        let err = validate_system(vec![MeasureSpec::lebesgue(0.0, 1.0), MeasureSpec::lebesgue(0.5, 1.5)], true);
        assert_eq!(err.unwrap_err(), Error::OverlappingIntervals(1, 2));
        let touch = || vec![MeasureSpec::lebesgue(0.0, 1.0).with_nq(20), MeasureSpec::lebesgue(1.0, 2.0).with_nq(20)];
        assert_eq!(validate_system(touch(), false).unwrap_err(), Error::TouchingNotEnabled(1, 2));
        let sys = validate_system(touch(), true).unwrap();
        assert_eq!(*sys.shared_point(1).unwrap(), 1);
    }

    #[test]
    fn single_chain_is_plain_transform() {
        let sys = two_level();
        let z = cplx((4.0, 0.5));
        let a = sys.nested_cauchy(1, 1, &z).unwrap();
        let b = sys.generator(1).cauchy_transform(&z).unwrap();
        assert_eq!(a, b);
        assert_eq!(sys.nested_moment(2, 2, 3).unwrap(), sys.generator(2).moment(3));
    }

    #[test]
    fn nested_moment_closed_form() {
        let p = precision();
        let sys = two_level();
        let want = Float::with_val(p, 3 * Float::with_val(p, 3).ln()) - Float::with_val(p, 4 * Float::with_val(p, 2).ln());
        let got = sys.nested_moment(1, 2, 0).unwrap();
        assert!(Float::with_val(p, &got - &want).abs() < 1e-60);
        assert!((got.to_f64() - 0.523248).abs() < 1e-6);
        for nu in 0..20 {
            assert!(sys.nested_moment(1, 2, nu).unwrap() > 0);
        }
    }

    #[test]
    fn nested_cauchy_matches_adaptive_oracle() {
        let sys = two_level();
        let got = sys.nested_cauchy(1, 2, &cplx(10)).unwrap();
        let want = simpson(|x| (x / (x - 1.0)).ln() / (10.0 - x), 2.0, 3.0, 1e-15);
        assert!((got.real().to_f64() - want).abs() < 1e-12);
        assert!(got.imag().is_zero());

        // s_{2,1}: sigma_2 weighted by s^_1, s^_1(x) = ln((2-x)/(3-x)) on [0, 1].
        let got = sys.nested_cauchy(2, 1, &cplx(-1)).unwrap();
        let want = simpson(|x| ((2.0 - x) / (3.0 - x)).ln() / (-1.0 - x), 0.0, 1.0, 1e-15);
        assert!((got.real().to_f64() - want).abs() < 1e-12);
    }

    #[test]
    fn large_z_matches_moment_expansion() {
        let sys = two_level();
        let p = precision();
        let z = real(1000);
        let direct = sys.nested_cauchy(1, 2, &cplx(1000)).unwrap();
        let mut series = real(0);
        let mut zpow = z.clone();
        for nu in 0..12u32 {
            series += Float::with_val(p, sys.nested_moment(1, 2, nu).unwrap() / &zpow);
            zpow *= &z;
        }
        let next = Float::with_val(p, sys.nested_moment(1, 2, 12).unwrap() / &zpow);
        let diff = Float::with_val(p, direct.real() - &series).abs();
        assert!(diff <= Float::with_val(p, &next * 2u32));
    }

    #[test]
    fn doubling_nodes_is_stable() {
        let sys = validate_system(
            vec![MeasureSpec::lebesgue(2.0, 3.0).with_nq(60), MeasureSpec::arcsine(0.0, 1.0).with_nq(60), MeasureSpec::lebesgue(-2.0, -1.0).with_nq(60)],
            false,
        )
        .unwrap();
        let fine = sys.refined(2).unwrap();
        let tol = crate::numkernel::trim_threshold();
        for z in [cplx(5), cplx((2.5, 1.0)), cplx(-4)] {
            let a = sys.nested_cauchy(1, 3, &z).unwrap();
            let b = fine.nested_cauchy(1, 3, &z).unwrap();
            assert!(crate::numkernel::cabs(&Cplx::with_val(precision(), &a - &b)) < tol);
        }
    }

    #[test]
    fn associated_index_examples() {
        let n = MultiIndex::new(vec![3, 2, 4]).unwrap();
        let a = associated_index(&n, 2).unwrap();
        assert_eq!(a.comps, vec![1, 2]);
        assert_eq!(a.abs, 3);
        assert_eq!(a.big_n, 5);

        let a = associated_index(&MultiIndex::new(vec![5, 1]).unwrap(), 1).unwrap();
        assert_eq!(a.comps, vec![1]);

        let eq = MultiIndex::new(vec![4; 5]).unwrap();
        for j in 1..=5 {
            let a = associated_index(&eq, j).unwrap();
            let want: Vec<usize> = (2..=5).map(|k| if k <= j { 3 } else { 4 }).collect();
            assert_eq!(a.comps, want);
        }
    }

    #[test]
    fn multi_index_basics() {
        let n = MultiIndex::new(vec![2, 4, 3]).unwrap();
        assert_eq!(n.abs(), 9);
        assert_eq!(n.big_n(), 3);
        assert_eq!(n.spread(), 2);
        assert_eq!(n.to_string(), "(2,4,3)");
        assert!(MultiIndex::new(vec![0, 0]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn associated_components_bounded(comps in prop::collection::vec(0usize..12, 1..6), pick in 0usize..6) {
                prop_assume!(comps.iter().any(|&c| c > 0));
                let n = MultiIndex::new(comps.clone()).unwrap();
                let j = pick % comps.len() + 1;
                let a = associated_index(&n, j).unwrap();
                prop_assert_eq!(a.comps.len(), comps.len() - 1);
                for &c in &a.comps {
                    prop_assert!(c <= comps[j - 1]);
                }
                prop_assert_eq!(a.big_n, a.abs + comps[j - 1]);
            }
        }
    }
}
