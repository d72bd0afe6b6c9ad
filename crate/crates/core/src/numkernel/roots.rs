//! Polynomial zeros as eigenvalues of the balanced companion matrix.
#![allow(clippy::needless_range_loop)]

use rug::{Complex, Float};

use super::poly::Poly;
use super::prec::{cabs, cluster_tol, cplx, machine_spacing, precision, real, zero, Cplx, Real};
use crate::error::{Error, Result};

/// A group of computed roots closer than the clustering tolerance.
#[derive(Clone, Debug)]
pub struct RootCluster {
    pub center: Cplx,
    pub multiplicity: usize,
}

impl RootCluster {
    pub fn re(&self) -> f64 {
        self.center.real().to_f64()
    }

    pub fn im(&self) -> f64 {
        self.center.imag().to_f64()
    }
}

/// Zeros of `q`, polished and grouped into multiplicity clusters.
///
/// The multiplicities sum to the trimmed degree.
pub fn poly_roots(q: &Poly) -> Result<Vec<RootCluster>> {
    let roots = raw_roots(q)?;
    Ok(cluster(&roots))
}

/// Individual zeros of `q` (with repetition), each after one Newton step.
pub fn raw_roots(q: &Poly) -> Result<Vec<Cplx>> {
    let q = q.trimmed();
    let Some(deg) = q.degree() else {
        return Err(Error::DegenerateInput("root finding on the zero polynomial".into()));
    };
    if deg == 0 {
        return Err(Error::DegenerateInput("root finding on a constant polynomial".into()));
    }
    let lead = q.coeffs()[deg].clone();
    // Companion matrix of the monic polynomial: first row -c_{d-1}/c_d, ..., -c_0/c_d.
    let mut h = vec![vec![cplx(0); deg]; deg];
    for (j, entry) in h[0].iter_mut().enumerate() {
        let c = Float::with_val(precision(), &q.coeffs()[deg - 1 - j] / &lead);
        *entry = cplx(-c);
    }
    for i in 1..deg {
        h[i][i - 1] = cplx(1);
    }
    balance(&mut h);
    let eig = hessenberg_eigenvalues(h)?;
    let dq = q.derivative();
    Ok(eig
        .into_iter()
        .map(|r| {
            let d = dq.eval_complex(&r);
            if d.is_zero() {
                return r;
            }
            let step = Complex::with_val(precision(), q.eval_complex(&r) / &d);
            Complex::with_val(precision(), &r - &step)
        })
        .collect())
}

/// Single-link grouping with relative distance `cluster_tol()`.
fn cluster(roots: &[Cplx]) -> Vec<RootCluster> {
    let tol = cluster_tol();
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(label: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while label[r] != r {
            r = label[r];
        }
        label[i] = r;
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let scale = {
                let a = cabs(&roots[i]);
                let b = cabs(&roots[j]);
                let m = if a > b { a } else { b };
                if m < 1 {
                    real(1)
                } else {
                    m
                }
            };
            let d = cabs(&Complex::with_val(precision(), &roots[i] - &roots[j]));
            if d <= Float::with_val(precision(), &tol * &scale) {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[b.max(a)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut label, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, members)) => members.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    let mut out: Vec<RootCluster> = groups
        .into_iter()
        .map(|(_, members)| {
            let mut sum = cplx(0);
            for &i in &members {
                sum += &roots[i];
            }
            sum /= members.len() as u32;
            RootCluster {
                center: sum,
                multiplicity: members.len(),
            }
        })
        .collect();
    out.sort_by(|a, b| {
        a.re()
            .partial_cmp(&b.re())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im().partial_cmp(&b.im()).unwrap_or(std::cmp::Ordering::Equal))
    });
    out
}

/// Parlett-Reinsch balancing with powers of two.
fn balance(h: &mut [Vec<Cplx>]) {
    let n = h.len();
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = zero();
            let mut r = zero();
            for j in 0..n {
                if j != i {
                    c += cabs(&h[j][i]);
                    r += cabs(&h[i][j]);
                }
            }
            if c.is_zero() || r.is_zero() {
                continue;
            }
            let s = Float::with_val(precision(), &c + &r);
            let mut f = 0i32;
            let mut cc = c.clone();
            let rr2 = Float::with_val(precision(), &r / 2);
            let rr2x = Float::with_val(precision(), &r * 2);
            while cc < rr2 {
                cc <<= 2;
                f += 1;
            }
            while cc >= rr2x {
                cc >>= 2;
                f -= 1;
            }
            if f == 0 {
                continue;
            }
            let mut cn = c.clone();
            cn <<= f;
            let mut rn = r.clone();
            rn >>= f;
            if Float::with_val(precision(), &cn + &rn) < Float::with_val(precision(), &s * 0.95) {
                converged = false;
                for j in 0..n {
                    h[i][j] >>= f;
                    h[j][i] <<= f;
                }
            }
        }
    }
}

/// Eigenvalues of an upper Hessenberg matrix by shifted complex QR with
/// Givens rotations, restricted to the active unreduced block.
fn hessenberg_eigenvalues(mut h: Vec<Vec<Cplx>>) -> Result<Vec<Cplx>> {
    let n = h.len();
    let eps = {
        let mut e = machine_spacing();
        e <<= 2;
        e
    };
    let mut eig = Vec::with_capacity(n);
    let mut hi = n as isize - 1;
    let mut iter = 0usize;
    let max_iter = 60 * n.max(1);
    let mut total = 0usize;
    while hi >= 0 {
        let hiu = hi as usize;
        // Locate the top of the unreduced block.
        let mut l = hiu;
        while l > 0 {
            let s = Float::with_val(
                precision(),
                cabs(&h[l - 1][l - 1]) + cabs(&h[l][l]),
            );
            if cabs(&h[l][l - 1]) <= Float::with_val(precision(), &eps * &s) {
                h[l][l - 1] = cplx(0);
                break;
            }
            l -= 1;
        }
        if l == hiu {
            eig.push(h[hiu][hiu].clone());
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > max_iter {
            return Err(Error::DegenerateInput(
                "companion eigenvalue iteration did not converge".into(),
            ));
        }
        let mu = if iter.is_multiple_of(11) {
            // Exceptional shift to break cycles.
            let mut m = cplx(cabs(&h[hiu][hiu - 1]));
            m *= 1.5;
            m += &h[hiu][hiu];
            m
        } else {
            wilkinson_shift(&h[hiu - 1][hiu - 1], &h[hiu - 1][hiu], &h[hiu][hiu - 1], &h[hiu][hiu])
        };
        for k in l..=hiu {
            h[k][k] -= &mu;
        }
        let mut rotations: Vec<(Cplx, Cplx)> = Vec::with_capacity(hiu - l);
        for k in l..hiu {
            let x = h[k][k].clone();
            let y = h[k + 1][k].clone();
            let r = Float::with_val(
                precision(),
                Float::with_val(precision(), x.norm_ref()) + Float::with_val(precision(), y.norm_ref()),
            )
            .sqrt();
            let (c, s) = if r.is_zero() {
                (cplx(1), cplx(0))
            } else {
                (
                    Complex::with_val(precision(), &x / &r),
                    Complex::with_val(precision(), &y / &r),
                )
            };
            let cc = c.clone().conj();
            let sc = s.clone().conj();
            for j in k..=hiu {
                let a = h[k][j].clone();
                let b = h[k + 1][j].clone();
                h[k][j] = Complex::with_val(precision(), &cc * &a) + Complex::with_val(precision(), &sc * &b);
                h[k + 1][j] = Complex::with_val(precision(), &c * &b) - Complex::with_val(precision(), &s * &a);
            }
            rotations.push((c, s));
        }
        for (idx, (c, s)) in rotations.into_iter().enumerate() {
            let k = l + idx;
            let sc = s.clone().conj();
            let cc = c.clone().conj();
            for row in h.iter_mut().take((k + 1).min(hiu) + 1).skip(l) {
                let a = row[k].clone();
                let b = row[k + 1].clone();
                row[k] = Complex::with_val(precision(), &a * &c) + Complex::with_val(precision(), &b * &s);
                row[k + 1] = Complex::with_val(precision(), &b * &cc) - Complex::with_val(precision(), &a * &sc);
            }
        }
        for k in l..=hiu {
            h[k][k] += &mu;
        }
    }
    Ok(eig)
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: &Cplx, b: &Cplx, c: &Cplx, d: &Cplx) -> Cplx {
    let half = Complex::with_val(precision(), (a - d.clone()) / 2u32);
    let disc = Complex::with_val(
        precision(),
        Complex::with_val(precision(), &half * &half) + Complex::with_val(precision(), b * c),
    )
    .sqrt();
    let mean = Complex::with_val(precision(), (a + d.clone()) / 2u32);
    let e1 = Complex::with_val(precision(), &mean + &disc);
    let e2 = Complex::with_val(precision(), &mean - &disc);
    let d1 = cabs(&Complex::with_val(precision(), &e1 - d));
    let d2 = cabs(&Complex::with_val(precision(), &e2 - d));
    if d1 <= d2 {
        e1
    } else {
        e2
    }
}

/// Largest `|q(r)|` over the given points, relative to `max|coeff|`.
pub fn max_relative_residual(q: &Poly, roots: &[Cplx]) -> Real {
    let scale = q.max_abs_coeff();
    roots.iter().fold(zero(), |acc, r| {
        let v = Float::with_val(precision(), cabs(&q.eval_complex(r)) / &scale);
        if v > acc {
            v
        } else {
            acc
        }
    })
}
