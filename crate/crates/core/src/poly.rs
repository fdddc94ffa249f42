//! Scalar complex polynomials stored as ascending coefficient lists.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Drops trailing (highest-degree) zero coefficients. The zero polynomial
/// becomes the empty list.
pub fn trim(mut c: Vec<C64>) -> Vec<C64> {
    while c.last().is_some_and(|v| *v == ZERO) {
        c.pop();
    }
    c
}

/// Degree of a trimmed polynomial; `None` for the zero polynomial.
pub fn degree(c: &[C64]) -> Option<usize> {
    c.iter().rposition(|v| *v != ZERO)
}

pub fn horner(c: &[C64], z: C64) -> C64 {
    c.iter().rev().fold(ZERO, |acc, &a| acc * z + a)
}

/// Horner sum of `|c_k| |z|^k`, the natural magnitude scale of `p(z)`.
pub fn abs_horner(c: &[C64], z: C64) -> f64 {
    let r = z.norm();
    c.iter().rev().fold(0.0, |acc, a| acc * r + a.norm())
}

pub fn derivative(c: &[C64]) -> Vec<C64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &a)| a * k as f64)
        .collect()
}

pub fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ZERO; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

pub fn add(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![ZERO; a.len().max(b.len())];
    for (k, v) in a.iter().enumerate() {
        out[k] += v;
    }
    for (k, v) in b.iter().enumerate() {
        out[k] += v;
    }
    out
}

pub fn sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    let neg: Vec<C64> = b.iter().map(|v| -v).collect();
    add(a, &neg)
}

pub fn scale(c: &[C64], s: C64) -> Vec<C64> {
    c.iter().map(|v| v * s).collect()
}

/// Coefficients of `p(t z)`.
pub fn compose_scale(c: &[C64], t: C64) -> Vec<C64> {
    let mut pw = ONE;
    c.iter()
        .map(|&a| {
            let v = a * pw;
            pw *= t;
            v
        })
        .collect()
}

/// Coefficients of `conj(p(conj(z)))`, i.e. entrywise conjugation.
pub fn conj(c: &[C64]) -> Vec<C64> {
    c.iter().map(|v| v.conj()).collect()
}

/// Coefficients of `z^deg p(1/z)` for a trimmed `p`.
pub fn reversed(c: &[C64]) -> Vec<C64> {
    c.iter().rev().copied().collect()
}

/// Coefficients of `z^k p(z)`.
pub fn shift(c: &[C64], k: usize) -> Vec<C64> {
    let mut out = vec![ZERO; k];
    out.extend_from_slice(c);
    out
}

/// Largest coefficient magnitude.
pub fn max_abs(c: &[C64]) -> f64 {
    c.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Divides by the leading coefficient. Returns the monic polynomial and the
/// leading coefficient.
pub fn monic(c: &[C64]) -> (Vec<C64>, C64) {
    let c = trim(c.to_vec());
    let lead = *c.last().unwrap_or(&ONE);
    (c.iter().map(|v| v / lead).collect(), lead)
}

/// Roots of a polynomial as eigenvalues of its companion matrix.
pub fn roots(c: &[C64]) -> Result<Vec<C64>> {
    let (m, _) = monic(c);
    let deg = match degree(&m) {
        None => return Err(Error::InvalidWeight("roots of the zero polynomial".into())),
        Some(0) => return Ok(Vec::new()),
        Some(d) => d,
    };
    let mut comp = DMatrix::<C64>::zeros(deg, deg);
    for j in 0..deg {
        comp[(0, j)] = -m[deg - 1 - j];
    }
    for i in 1..deg {
        comp[(i, i - 1)] = ONE;
    }
    crate::linalg::eigenvalues(&comp)
}

/// True when `a` and `b` agree coefficientwise to `tol` relative to the
/// largest coefficient of either.
pub fn approx_eq(a: &[C64], b: &[C64], tol: f64) -> bool {
    let scale = max_abs(a).max(max_abs(b)).max(f64::MIN_POSITIVE);
    let diff = sub(a, b);
    max_abs(&diff) <= tol * scale
}
