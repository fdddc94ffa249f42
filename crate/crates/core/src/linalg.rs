//! Dense complex helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::poly::{C64, ONE, ZERO};

pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

const POWER_ITERATION_THRESHOLD: usize = 512;

/// Largest singular value. Dense SVD up to `n = 512`, power iteration on
/// `A^*A` beyond that.
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    if m.nrows().max(m.ncols()) > POWER_ITERATION_THRESHOLD {
        return power_norm(m, 1e-10, 2000);
    }
    m.singular_values().max()
}

fn power_norm(m: &CMat, tol: f64, max_iter: usize) -> f64 {
    let n = m.ncols();
    // A fixed, non-degenerate start vector keeps the result deterministic.
    let mut v = CVec::from_fn(n, |i, _| C64::new(1.0 + (i as f64 * 0.618).fract(), 0.0));
    v /= C64::from(v.norm());
    let mut est = 0.0;
    for _ in 0..max_iter {
        let w = m.adjoint() * (m * &v);
        let nw = w.norm();
        if nw == 0.0 {
            return 0.0;
        }
        let next = nw.sqrt();
        v = w / C64::from(nw);
        if (next - est).abs() <= tol * next {
            return next;
        }
        est = next;
    }
    est
}

/// Sum of singular values.
pub fn nuclear_norm(m: &CMat) -> f64 {
    m.singular_values().sum()
}

/// `sign(z) = conj(z)/|z|`, with `sign(0) = 1`.
pub fn sign(z: C64) -> C64 {
    let r = z.norm();
    if r == 0.0 {
        ONE
    } else {
        z.conj() / r
    }
}

/// `y^* x`.
pub fn dot_star(y: &CVec, x: &CVec) -> C64 {
    y.dotc(x)
}

/// `y^T x`.
pub fn dot_t(y: &CVec, x: &CVec) -> C64 {
    y.dot(x)
}

/// `y^* M x`.
pub fn bilinear(y: &CVec, m: &CMat, x: &CVec) -> C64 {
    y.dotc(&(m * x))
}

/// `u v^*`.
pub fn outer(u: &CVec, v: &CVec) -> CMat {
    u * v.adjoint()
}

/// `u v^T`.
pub fn outer_t(u: &CVec, v: &CVec) -> CMat {
    u * v.transpose()
}

pub fn normalized(v: &CVec) -> CVec {
    let n = v.norm();
    if n == 0.0 {
        v.clone()
    } else {
        v / C64::from(n)
    }
}

pub fn conj_vec(v: &CVec) -> CVec {
    v.map(|z| z.conj())
}

pub fn sym_part(m: &CMat) -> CMat {
    (m + m.transpose()) * C64::from(0.5)
}

pub fn skew_part(m: &CMat) -> CMat {
    (m - m.transpose()) * C64::from(0.5)
}

pub fn herm_part(m: &CMat) -> CMat {
    (m + m.adjoint()) * C64::from(0.5)
}

pub fn skew_herm_part(m: &CMat) -> CMat {
    (m - m.adjoint()) * C64::from(0.5)
}

/// Frobenius distance relative to `1 + ‖a‖_F`.
pub fn rel_diff(a: &CMat, b: &CMat) -> f64 {
    (a - b).norm() / (1.0 + a.norm())
}

pub fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_matrix(rng: &mut impl Rng, r: usize, c: usize) -> CMat {
    CMat::from_fn(r, c, |_, _| gaussian(rng))
}

pub fn real_gaussian_matrix(rng: &mut impl Rng, r: usize, c: usize) -> CMat {
    CMat::from_fn(r, c, |_, _| C64::new(rng.sample(StandardNormal), 0.0))
}

pub fn gaussian_vector(rng: &mut impl Rng, n: usize) -> CVec {
    CVec::from_fn(n, |_, _| gaussian(rng))
}

pub fn random_unit_vector(rng: &mut impl Rng, n: usize) -> CVec {
    normalized(&gaussian_vector(rng, n))
}

/// Scales `m` to unit spectral norm; the zero matrix is returned unchanged.
pub fn to_unit_norm(m: CMat) -> CMat {
    let s = spectral_norm(&m);
    if s == 0.0 {
        m
    } else {
        m / C64::from(s)
    }
}

/// Right and left singular vectors for the smallest singular value, with
/// that singular value: `M x ≈ σ y`, `y^* M ≈ σ x^*`.
pub fn smallest_singular_triplet(m: &CMat) -> (CVec, CVec, f64) {
    let svd = m.clone().svd(true, true);
    let sv = &svd.singular_values;
    let (i, sigma) =
        sv.iter().enumerate().fold(
            (0, f64::INFINITY),
            |acc, (k, &s)| if s < acc.1 { (k, s) } else { acc },
        );
    let u = svd.u.as_ref().expect("u requested");
    let vt = svd.v_t.as_ref().expect("v_t requested");
    let x = vt.row(i).adjoint();
    let y = u.column(i).into_owned();
    (x, y, sigma)
}

/// Orthonormal basis of `C^n` whose first columns span `cols` (Gram-Schmidt,
/// completed with standard basis vectors).
pub fn complete_orthonormal(cols: &[CVec], n: usize) -> CMat {
    let mut basis: Vec<CVec> = Vec::with_capacity(n);
    let push = |v: &CVec, basis: &mut Vec<CVec>| {
        let mut w = v.clone();
        for _ in 0..2 {
            for b in basis.iter() {
                let p = b.dotc(&w);
                w -= b * p;
            }
        }
        let nw = w.norm();
        if nw > 1e-10 * (1.0 + v.norm()) && basis.len() < n {
            basis.push(w / C64::from(nw));
        }
    };
    for c in cols {
        push(c, &mut basis);
    }
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let mut e = CVec::from_element(n, ZERO);
        e[k] = ONE;
        push(&e, &mut basis);
    }
    CMat::from_columns(&basis)
}

/// QR sweeps allowed per eigenvalue before an attempt is abandoned.
const QR_ITER_PER_EIGENVALUE: usize = 60;

/// Eigenvalues of a square matrix. Shifted QR on the Hessenberg form; a
/// stalled attempt restarts on a random unitary similarity.
pub fn eigenvalues(m: &CMat) -> Result<Vec<C64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SolverFailure("non-finite matrix entry".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let mut a = m.clone();
    for _ in 0..4 {
        if let Some(ev) = hessenberg_qr(a.clone().hessenberg().h()) {
            return Ok(ev);
        }
        let q = gaussian_matrix(&mut rng, n, n).qr().q();
        a = q.adjoint() * a * q;
    }
    Err(Error::SolverFailure("QR iteration did not converge".into()))
}

fn hessenberg_qr(mut h: CMat) -> Option<Vec<C64>> {
    let n = h.nrows();
    let scale = h.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut ev = vec![ZERO; n];
    let mut hi = n;
    let mut iter = 0;
    let mut rot = Vec::with_capacity(n);
    while hi > 0 {
        let mut l = hi - 1;
        while l > 0 {
            let s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let s = if s == 0.0 { scale } else { s };
            if h[(l, l - 1)].norm() <= f64::EPSILON * s {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == hi - 1 {
            ev[l] = h[(l, l)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > QR_ITER_PER_EIGENVALUE {
            return None;
        }
        let (a, b) = (h[(hi - 2, hi - 2)], h[(hi - 2, hi - 1)]);
        let (c, d) = (h[(hi - 1, hi - 2)], h[(hi - 1, hi - 1)]);
        let shift = if iter % 10 == 0 {
            let w = C64::from_polar(1.0, iter as f64);
            d + w * 1.5 * c.norm()
        } else {
            let half = (a - d) * 0.5;
            let root = (half * half + b * c).sqrt();
            let (s1, s2) = (d + half + root, d + half - root);
            if (s1 - d).norm() <= (s2 - d).norm() {
                s1
            } else {
                s2
            }
        };
        for k in l..hi {
            h[(k, k)] -= shift;
        }
        rot.clear();
        for k in l..hi - 1 {
            let (x, y) = (h[(k, k)], h[(k + 1, k)]);
            let r = x.norm().hypot(y.norm());
            let (cs, sn) = if r == 0.0 {
                (1.0, ZERO)
            } else if x.norm() == 0.0 {
                (0.0, y.conj() / r)
            } else {
                (x.norm() / r, (x / x.norm()) * y.conj() / r)
            };
            for j in k..hi {
                let (u, v) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = u * cs + sn * v;
                h[(k + 1, j)] = v * cs - sn.conj() * u;
            }
            rot.push((cs, sn));
        }
        for (k, &(cs, sn)) in (l..).zip(rot.iter()) {
            for i in l..(k + 2).min(hi) {
                let (u, v) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = u * cs + v * sn.conj();
                h[(i, k + 1)] = v * cs - u * sn;
            }
        }
        for k in l..hi {
            h[(k, k)] += shift;
        }
    }
    Some(ev)
}
