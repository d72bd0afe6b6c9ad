//! Sign alternations of real functions on an interval.

use rug::Float;

use crate::numkernel::{precision, real, Real};

/// Alternations found, each bracketed by an interval of width at most
/// `2^-40 (b - a)`.
#[derive(Clone, Debug)]
pub struct SignChanges {
    pub count: usize,
    pub brackets: Vec<(Real, Real)>,
}

/// `grid_size + 1` equispaced points of `[a, b]`.
pub fn uniform_grid(a: &Real, b: &Real, grid_size: usize) -> Vec<Real> {
    let p = precision();
    let h = Float::with_val(p, b - a) / grid_size as u32;
    (0..=grid_size)
        .map(|k| {
            if k == grid_size {
                b.clone()
            } else {
                Float::with_val(p, &h * k as u32) + a
            }
        })
        .collect()
}

fn sign(v: &Real) -> i8 {
    if v.is_zero() || v.is_nan() {
        0
    } else if v.is_sign_negative() {
        -1
    } else {
        1
    }
}

/// Alternations in a sequence of samples, ignoring exact zeros. Returns the
/// index pairs `(i, k)` of consecutive nonzero samples with opposite signs.
pub fn alternations(values: &[Real]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut last: Option<(usize, i8)> = None;
    for (k, v) in values.iter().enumerate() {
        let s = sign(v);
        if s == 0 {
            continue;
        }
        if let Some((i, prev)) = last {
            if prev != s {
                out.push((i, k));
            }
        }
        last = Some((k, s));
    }
    out
}

/// Counts strict sign alternations of `f` on `[a, b]` sampled at
/// `grid_size + 1` equispaced points; each alternation is refined by
/// bisection. Doubling `grid_size` never lowers the count.
pub fn sign_changes<F>(mut f: F, a: &Real, b: &Real, grid_size: usize) -> SignChanges
where
    F: FnMut(&Real) -> Real,
{
    let grid = uniform_grid(a, b, grid_size.max(1));
    let values: Vec<Real> = grid.iter().map(&mut f).collect();
    let pairs = alternations(&values);
    let p = precision();
    let mut width = Float::with_val(p, b - a);
    width >>= 40;
    let brackets = pairs
        .iter()
        .map(|&(i, k)| {
            let (mut lo, mut hi) = (grid[i].clone(), grid[k].clone());
            let s_lo = sign(&values[i]);
            while Float::with_val(p, &hi - &lo) > width {
                let mid = Float::with_val(p, &lo + &hi) / 2u32;
                let s = sign(&f(&mid));
                if s == 0 {
                    return (mid.clone(), mid);
                }
                if s == s_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            (lo, hi)
        })
        .collect();
    SignChanges {
        count: pairs.len(),
        brackets,
    }
}

/// Midpoint of a bracket as `f64`.
pub fn bracket_center(b: &(Real, Real)) -> f64 {
    (Float::with_val(precision(), &b.0 + &b.1) / real(2)).to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{poly_roots, Poly};

    #[test]
    fn quadratic_and_constant() {
        let q = Poly::from_f64(&[0.18, -0.9, 1.0]);
        let r = sign_changes(|x| q.eval(x), &real(0), &real(1), 50);
        assert_eq!(r.count, 2);
        let centers: Vec<f64> = r.brackets.iter().map(bracket_center).collect();
        assert!((centers[0] - 0.3).abs() < 1e-10 && (centers[1] - 0.6).abs() < 1e-10);
        assert_eq!(sign_changes(|_| real(1), &real(0), &real(1), 50).count, 0);
    }

    #[test]
    fn chebyshev_five_matches_root_count() {
        let t5 = Poly::from_f64(&[0.0, 5.0, 0.0, -20.0, 0.0, 16.0]);
        let count = sign_changes(|x| t5.eval(x), &real(-1), &real(1), 200).count;
        let oracle = poly_roots(&t5)
            .unwrap()
            .iter()
            .filter(|c| c.im().abs() < 1e-20 && c.re() > -1.0 && c.re() < 1.0)
            .count();
        assert_eq!(count, 5);
        assert_eq!(count, oracle);
    }

    #[test]
    fn zeros_on_grid_are_skipped() {
        // x - 0.5 vanishes exactly at a grid point: one alternation, not two
        let r = sign_changes(|x| Float::with_val(precision(), x - 0.5), &real(0), &real(1), 10);
        assert_eq!(r.count, 1);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]
            #[test]
            fn refinement_never_loses_changes(roots in prop::collection::vec(-0.95f64..0.95, 1..6), g in 3usize..40) {
                let q = roots.iter().fold(Poly::one(), |acc, r| &acc * &Poly::from_f64(&[-r, 1.0]));
                let coarse = sign_changes(|x| q.eval(x), &real(-1), &real(1), g).count;
                let fine = sign_changes(|x| q.eval(x), &real(-1), &real(1), 2 * g).count;
                prop_assert!(fine >= coarse);
                prop_assert!(fine <= roots.len());
            }
        }
    }
}
