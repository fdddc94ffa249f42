//! Eigentriplets of a regular rational matrix function.
//!
//! Denominators are cleared into a matrix polynomial `P`, which is linearized
//! in first companion form and solved densely. Candidates at poles are
//! discarded, the rest are refined by bordered Newton iteration on `G` itself.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{bilinear, eigenvalues, smallest_singular_triplet, CMat, CVec};
use crate::poly::{self, C64, ONE, ZERO};
use crate::rmf::Rmf;
use crate::tolerance::Tolerances;

/// `P(z) = Σ z^k P_k`, coefficients ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPolynomial {
    pub coeffs: Vec<CMat>,
}

impl MatrixPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn n(&self) -> usize {
        self.coeffs.first().map_or(0, |c| c.nrows())
    }

    pub fn eval(&self, z: C64) -> CMat {
        let n = self.n();
        self.coeffs
            .iter()
            .rev()
            .fold(CMat::zeros(n, n), |acc, a| acc * z + a)
    }
}

#[derive(Clone, Debug)]
pub struct ClearedDenominators {
    pub poly: MatrixPolynomial,
    /// Monic `L(z)`, the product of the distinct monic denominators.
    pub denominator: Vec<C64>,
    /// Roots of `L`.
    pub poles: Vec<C64>,
}

/// `P(z) = L(z) Σ z^k A_k + Σ (L(z)/q_j(z)) s_j(z) E_j` with `L` the product of
/// the distinct monic `q_j`.
pub fn clear_denominators(g: &Rmf) -> Result<ClearedDenominators> {
    let mut groups: Vec<Vec<C64>> = Vec::new();
    let mut membership = Vec::with_capacity(g.num_terms());
    let mut leads = Vec::with_capacity(g.num_terms());
    for t in g.terms() {
        let (m, lead) = poly::monic(t.weight.q());
        leads.push(lead);
        let idx = match groups
            .iter()
            .position(|q| q.len() == m.len() && poly::approx_eq(q, &m, 1e-14))
        {
            Some(i) => i,
            None => {
                groups.push(m);
                groups.len() - 1
            }
        };
        membership.push(idx);
    }

    let mut l = vec![ONE];
    for q in &groups {
        l = poly::mul(&l, q);
    }
    let n = g.n();
    let mut coeffs: Vec<CMat> = Vec::new();
    let mut add = |k: usize, m: &CMat, c: C64| {
        while coeffs.len() <= k {
            coeffs.push(CMat::zeros(n, n));
        }
        coeffs[k] += m * c;
    };
    for (k, a) in g.poly().iter().enumerate() {
        for (i, &c) in l.iter().enumerate() {
            if c != ZERO {
                add(k + i, a, c);
            }
        }
    }
    for (j, t) in g.terms().iter().enumerate() {
        let mut factor = vec![ONE / leads[j]];
        for (gi, q) in groups.iter().enumerate() {
            if gi != membership[j] {
                factor = poly::mul(&factor, q);
            }
        }
        let f = poly::mul(&factor, t.weight.s());
        for (i, &c) in f.iter().enumerate() {
            if c != ZERO {
                add(i, &t.coeff, c);
            }
        }
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.iter().all(|v| *v == ZERO)) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        coeffs.push(CMat::zeros(n, n));
    }
    let poles = if l.len() > 1 {
        poly::roots(&l)?
    } else {
        Vec::new()
    };
    Ok(ClearedDenominators {
        poly: MatrixPolynomial { coeffs },
        denominator: l,
        poles,
    })
}

/// First companion pencil `(C0, C1)` of `P`: finite eigenvalues solve
/// `C0 v = z C1 v` with `v = [z^{ℓ-1} x; …; x]`.
pub fn linearize_companion(p: &MatrixPolynomial) -> Result<(CMat, CMat)> {
    let l = p.degree();
    if l == 0 {
        return Err(Error::DegreeZero);
    }
    let n = p.n();
    let size = l * n;
    let mut c0 = CMat::zeros(size, size);
    let mut c1 = CMat::identity(size, size);
    c1.view_mut((0, 0), (n, n)).copy_from(&p.coeffs[l]);
    for b in 0..l {
        c0.view_mut((0, b * n), (n, n))
            .copy_from(&(-&p.coeffs[l - 1 - b]));
    }
    for b in 1..l {
        c0.view_mut((b * n, (b - 1) * n), (n, n))
            .fill_with_identity();
    }
    Ok((c0, c1))
}

fn condition_number(m: &CMat) -> f64 {
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Eigenvalues of the monic companion matrix `C1^{-1} C0`.
fn standard_eigenvalues(p: &MatrixPolynomial) -> Result<Vec<C64>> {
    let l = p.degree();
    let n = p.n();
    let lu = p.coeffs[l].clone().lu();
    let mut m = CMat::zeros(l * n, l * n);
    for b in 0..l {
        let blk = lu
            .solve(&(-&p.coeffs[l - 1 - b]))
            .ok_or_else(|| Error::SolverFailure("singular leading coefficient".into()))?;
        m.view_mut((0, b * n), (n, n)).copy_from(&blk);
    }
    for b in 1..l {
        m.view_mut((b * n, (b - 1) * n), (n, n))
            .fill_with_identity();
    }
    eigenvalues(&m)
}

fn binomial(k: usize, i: usize) -> f64 {
    (0..i).fold(1.0, |acc, t| acc * (k - t) as f64 / (t + 1) as f64)
}

/// `Q(μ) = μ^ℓ P(τ + 1/μ)`, whose leading coefficient is `P(τ)`.
fn mobius(p: &MatrixPolynomial, tau: C64) -> MatrixPolynomial {
    let l = p.degree();
    let n = p.n();
    let mut coeffs = vec![CMat::zeros(n, n); l + 1];
    for (k, pk) in p.coeffs.iter().enumerate() {
        let mut tp = ONE;
        for i in 0..=k {
            coeffs[l - k + i] += pk * (tp * binomial(k, i));
            tp *= tau;
        }
    }
    MatrixPolynomial { coeffs }
}

const STANDARD_COND_LIMIT: f64 = 1e8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    Standard,
    Mobius,
}

/// Finite eigenvalues of `P`, with the count of discarded infinite ones.
pub fn polynomial_eigenvalues(p: &MatrixPolynomial) -> Result<(Vec<C64>, usize, Reduction)> {
    if p.degree() == 0 {
        return Err(Error::DegreeZero);
    }
    if condition_number(&p.coeffs[p.degree()]) < STANDARD_COND_LIMIT {
        return Ok((standard_eigenvalues(p)?, 0, Reduction::Standard));
    }
    for attempt in 0..12 {
        let r = 0.5 * 1.6f64.powi(attempt);
        let tau = C64::from_polar(r, 0.9 + 1.7 * attempt as f64);
        let q = mobius(p, tau);
        if condition_number(&q.coeffs[q.degree()]) >= STANDARD_COND_LIMIT {
            continue;
        }
        let mus = standard_eigenvalues(&q)?;
        let mut finite = Vec::with_capacity(mus.len());
        let mut infinite = 0;
        for mu in mus {
            // |z| beyond roughly 1e10 counts as infinite.
            if mu.norm() <= 1e-10 {
                infinite += 1;
            } else {
                finite.push(tau + mu.inv());
            }
        }
        return Ok((finite, infinite, Reduction::Mobius));
    }
    Err(Error::SolverFailure(
        "no regular shift found for the singular leading coefficient; the problem may be singular"
            .into(),
    ))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eigentriplet {
    pub lambda: C64,
    pub x: CVec,
    pub y: CVec,
    pub right_residual: f64,
    pub left_residual: f64,
    /// `y^* G'(λ) x`.
    pub derivative_scalar: C64,
    pub iterations: usize,
}

impl Eigentriplet {
    /// Normalizes `x`, `y` and evaluates residuals at `λ` without refinement.
    pub fn from_vectors(g: &Rmf, lambda: C64, x: &CVec, y: &CVec) -> Result<Self> {
        Self::from_vectors_with(g, lambda, x, y, Tolerances::default().pole)
    }

    pub fn from_vectors_with(
        g: &Rmf,
        lambda: C64,
        x: &CVec,
        y: &CVec,
        pole_tol: f64,
    ) -> Result<Self> {
        if x.len() != g.n() || y.len() != g.n() {
            return Err(Error::DimensionMismatch(
                "eigenvector length differs from n".into(),
            ));
        }
        let x = x / C64::from(x.norm());
        let y = y / C64::from(y.norm());
        let gl = g.eval_with(lambda, pole_tol)?;
        let dg = g.derivative_with(lambda, pole_tol)?;
        Ok(Eigentriplet {
            lambda,
            right_residual: (&gl * &x).norm(),
            left_residual: (y.adjoint() * &gl).norm(),
            derivative_scalar: bilinear(&y, &dg, &x),
            x,
            y,
            iterations: 0,
        })
    }
}

const MAX_NEWTON: usize = 25;

fn pivot(x: &CVec) -> usize {
    x.iter()
        .enumerate()
        .fold((0, -1.0), |acc, (i, v)| {
            if v.norm() > acc.1 {
                (i, v.norm())
            } else {
                acc
            }
        })
        .0
}

/// One bordered Newton step on `[M(λ) v = 0; e_p^T v = 1]` where `M` is `G`
/// (right) or `G^*` (left, unknown `conj(δλ)`).
fn bordered_step(m: &CMat, dm_v: &CVec, v: &CVec, p: usize) -> Option<(CVec, C64)> {
    let n = v.len();
    let mut j = CMat::zeros(n + 1, n + 1);
    j.view_mut((0, 0), (n, n)).copy_from(m);
    j.view_mut((0, n), (n, 1)).copy_from(dm_v);
    j[(n, p)] = ONE;
    let mut rhs = CVec::zeros(n + 1);
    let r = m * v;
    for i in 0..n {
        rhs[i] = -r[i];
    }
    let sol = j.lu().solve(&rhs)?;
    if sol.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return None;
    }
    Some((sol.rows(0, n).into_owned(), sol[n]))
}

/// Bordered Newton refinement of a triplet approximation. Stops when both
/// residuals are at most `tol.refine · scale(G, λ)`; after 25 iterations a
/// result at or below `tol.eig · scale` is accepted, anything else is
/// `NoConvergence`.
pub fn refine_triplet(
    g: &Rmf,
    lambda0: C64,
    x0: &CVec,
    y0: &CVec,
    tol: &Tolerances,
) -> Result<Eigentriplet> {
    let pt = tol.pole;
    let mut lambda = lambda0;
    let p = pivot(x0);
    let mut x = x0 / x0[p];
    let mut iterations = 0;
    let mut best: Option<(f64, C64, CVec)> = None;

    loop {
        let gl = g.eval_with(lambda, pt)?;
        let scale = g.scale_at(lambda, pt)?.max(f64::MIN_POSITIVE);
        let res = (&gl * &x).norm() / x.norm();
        if best.as_ref().is_none_or(|b| res / scale < b.0) {
            best = Some((res / scale, lambda, x.clone()));
        }
        if res <= tol.refine * scale || iterations >= MAX_NEWTON {
            break;
        }
        let dg = g.derivative_with(lambda, pt)?;
        let Some((dx, dl)) = bordered_step(&gl, &(&dg * &x), &x, p) else {
            break;
        };
        x += dx;
        lambda += dl;
        iterations += 1;
    }
    let (rel, lambda_best, x_best) = best.expect("at least one residual evaluated");
    if rel > tol.eig {
        return Err(Error::NoConvergence {
            iterations,
            residual: rel,
        });
    }
    lambda = lambda_best;
    x = x_best;

    let gl = g.eval_with(lambda, pt)?;
    let scale = g.scale_at(lambda, pt)?.max(f64::MIN_POSITIVE);
    let gh = gl.adjoint();
    let dgh = g.derivative_with(lambda, pt)?.adjoint();
    let mut y = if (gh.clone() * y0).norm() <= tol.refine * scale * y0.norm() {
        y0.clone()
    } else {
        smallest_singular_triplet(&gl).1
    };
    let q = pivot(&y);
    y /= y[q];
    for _ in 0..MAX_NEWTON {
        let res = (&gh * &y).norm() / y.norm();
        if res <= tol.refine * scale {
            break;
        }
        // λ is already converged from the right; only y moves.
        let Some((dy, _)) = bordered_step(&gh, &(&dgh * &y), &y, q) else {
            break;
        };
        y += dy;
    }
    let mut t = Eigentriplet::from_vectors_with(g, lambda, &x, &y, pt)?;
    if t.left_residual > tol.eig * scale {
        return Err(Error::NoConvergence {
            iterations,
            residual: t.left_residual / scale,
        });
    }
    t.iterations = iterations;
    Ok(t)
}

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub triplets: Vec<Eigentriplet>,
    /// Finite eigenvalues of the linearization.
    pub candidates: usize,
    /// Candidates discarded for lying at a pole.
    pub filtered_poles: usize,
    /// Infinite eigenvalues of the cleared polynomial.
    pub infinite: usize,
    /// Candidates whose refinement failed or whose residual was too large.
    pub dropped: usize,
    /// Duplicates merged.
    pub merged: usize,
    pub poles: Vec<C64>,
    pub polynomial_degree: usize,
    pub reduction: Reduction,
}

pub fn solve_all(g: &Rmf) -> Result<Vec<Eigentriplet>> {
    Ok(solve_all_detailed(g, &Tolerances::default())?.triplets)
}

pub fn solve_all_detailed(g: &Rmf, tol: &Tolerances) -> Result<SolveReport> {
    let cleared = clear_denominators(g)?;
    let (eigs, infinite, reduction) = polynomial_eigenvalues(&cleared.poly)?;
    let candidates = eigs.len();
    let near_pole = |z: C64| {
        cleared
            .poles
            .iter()
            .any(|p| (z - p).norm() <= tol.pole_proximity * (1.0 + p.norm()))
            || g.terms().iter().any(|t| t.weight.is_pole(z, tol.pole))
    };
    let (at_poles, kept): (Vec<C64>, Vec<C64>) = eigs.into_iter().partition(|z| near_pole(*z));

    let refined: Vec<Option<Eigentriplet>> = kept
        .par_iter()
        .map(|&z| {
            let gz = g.eval_with(z, tol.pole).ok()?;
            let (x0, y0, _) = smallest_singular_triplet(&gz);
            let t = refine_triplet(g, z, &x0, &y0, tol).ok()?;
            let scale = g.scale_at(t.lambda, tol.pole).ok()?;
            let ok = t.right_residual <= tol.eig * scale
                && t.left_residual <= tol.eig * scale
                && !near_pole(t.lambda);
            ok.then_some(t)
        })
        .collect();
    let dropped = refined.iter().filter(|t| t.is_none()).count();
    let mut accepted: Vec<Eigentriplet> = refined.into_iter().flatten().collect();
    accepted.sort_by(|a, b| {
        a.lambda
            .norm()
            .total_cmp(&b.lambda.norm())
            .then(a.lambda.re.total_cmp(&b.lambda.re))
            .then(a.lambda.im.total_cmp(&b.lambda.im))
    });
    let mut triplets: Vec<Eigentriplet> = Vec::with_capacity(accepted.len());
    let mut merged = 0;
    for t in accepted {
        let dup = triplets
            .iter_mut()
            .find(|u| (u.lambda - t.lambda).norm() <= tol.dedup * (1.0 + t.lambda.norm()));
        match dup {
            Some(u) => {
                merged += 1;
                if t.right_residual + t.left_residual < u.right_residual + u.left_residual {
                    *u = t;
                }
            }
            None => triplets.push(t),
        }
    }
    Ok(SolveReport {
        triplets,
        candidates,
        filtered_poles: at_poles.len(),
        infinite,
        dropped,
        merged,
        poles: cleared.poles,
        polynomial_degree: cleared.poly.degree(),
        reduction,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub is_simple: bool,
    pub nonzero_weights: Vec<bool>,
    pub not_a_pole: bool,
    pub warnings: Vec<String>,
}

impl AssumptionReport {
    pub fn holds(&self) -> bool {
        self.is_simple && self.not_a_pole && self.nonzero_weights.iter().all(|&b| b)
    }
}

/// Simplicity, nonvanishing weights and distance from the poles at `t.lambda`.
pub fn check_assumptions(g: &Rmf, t: &Eigentriplet, tol: &Tolerances) -> AssumptionReport {
    let lambda = t.lambda;
    let mut warnings = Vec::new();
    let mut nonzero_weights = Vec::with_capacity(g.num_terms());
    let mut not_a_pole = true;
    let mut wsum = 0.0;
    for (j, term) in g.terms().iter().enumerate() {
        match term.weight.eval_with(lambda, tol.pole) {
            Ok(w) => {
                let qz = poly::horner(term.weight.q(), lambda).norm();
                let s = term.weight.s();
                let wscale = (poly::abs_horner(s, lambda) + poly::max_abs(s)) / qz;
                let nz = w.norm() > 1e-12 * wscale;
                if !nz {
                    warnings.push(format!(
                        "w_{}(lambda) = 0; the term contributes nothing to alpha and the condition number formulas still apply",
                        j + 1
                    ));
                }
                wsum += w.norm();
                nonzero_weights.push(nz);
            }
            Err(_) => {
                not_a_pole = false;
                nonzero_weights.push(false);
                warnings.push(format!("lambda is a pole of w_{}", j + 1));
            }
        }
    }
    let r = lambda.norm();
    let alpha: f64 = (0..=g.degree()).map(|k| r.powi(k as i32)).sum::<f64>() + wsum;
    let is_simple = not_a_pole
        && t.derivative_scalar.norm() > tol.simple * (1.0 + alpha * g.coefficient_scale());
    if !is_simple && not_a_pole {
        warnings.push(format!(
            "eigenvalue is not simple: |y^* G'(lambda) x| = {:e}",
            t.derivative_scalar.norm()
        ));
    }
    AssumptionReport {
        is_simple,
        nonzero_weights,
        not_a_pole,
        warnings,
    }
}
