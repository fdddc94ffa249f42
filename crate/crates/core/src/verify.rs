//! Oracles for the structured supremum and first-order perturbation
//! experiments.

use std::f64::consts::{PI, TAU};

use nalgebra::Matrix2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::eigensolve::{refine_triplet, Eigentriplet};
use crate::error::{Error, Result};
use crate::linalg::{
    conj_vec, dot_star, gaussian_matrix, herm_part, outer, sign, skew_herm_part, skew_part,
    spectral_norm, sym_part, CMat, CVec,
};
use crate::mapping::{ms_params, sin_star, sin_t, support_map, MSParams, MapClass};
use crate::poly::{C64, ONE, ZERO};
use crate::rmf::{PerturbationTuple, Rmf};
use crate::structure::{classify_weight_with, AltConj, ConjClass, Parity, StructureTag};
use crate::tolerance::Tolerances;

/// One independent block of a structured perturbation tuple. Members are
/// indexed `A_0..A_d` then `E_1..E_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Slot {
    Single {
        member: usize,
        class: MapClass,
    },
    /// `Δ_high = Δ_low^T`.
    TPair {
        low: usize,
        high: usize,
    },
    /// `Δ_high = Δ_low^*`.
    StarPair {
        low: usize,
        high: usize,
    },
}

fn herm_class(positive: bool) -> MapClass {
    if positive {
        MapClass::Hermitian
    } else {
        MapClass::SkewHermitian
    }
}

fn t_class(symmetric: bool) -> MapClass {
    if symmetric {
        MapClass::Symmetric
    } else {
        MapClass::SkewSymmetric
    }
}

/// Decomposition of the perturbations allowed by `tag` into independent slots.
pub fn structured_slots(g: &Rmf, tag: StructureTag, tol: f64) -> Result<Vec<Slot>> {
    use StructureTag as S;
    let d = g.degree();
    let mut slots = Vec::with_capacity(d + 1 + g.num_terms());
    let even = |k: usize| k.is_multiple_of(2);
    match tag {
        S::TPalindromic | S::StarPalindromic => {
            for k in 0..=d / 2 {
                let h = d - k;
                slots.push(if k == h {
                    let class = if tag == S::TPalindromic {
                        MapClass::Symmetric
                    } else {
                        MapClass::Hermitian
                    };
                    Slot::Single { member: k, class }
                } else if tag == S::TPalindromic {
                    Slot::TPair { low: k, high: h }
                } else {
                    Slot::StarPair { low: k, high: h }
                });
            }
        }
        _ => {
            for k in 0..=d {
                let class = match tag {
                    S::Unstructured => MapClass::General,
                    S::Symmetric => MapClass::Symmetric,
                    S::SkewSymmetric => MapClass::SkewSymmetric,
                    S::TEven => t_class(even(k)),
                    S::TOdd => t_class(!even(k)),
                    S::Hermitian => MapClass::Hermitian,
                    S::SkewHermitian => MapClass::SkewHermitian,
                    S::StarEven => herm_class(even(k)),
                    S::StarOdd => herm_class(!even(k)),
                    S::TPalindromic | S::StarPalindromic => unreachable!(),
                };
                slots.push(Slot::Single { member: k, class });
            }
        }
    }
    for (j, term) in g.terms().iter().enumerate() {
        let member = d + 1 + j;
        let needs = !matches!(
            tag,
            S::Unstructured
                | S::Symmetric
                | S::SkewSymmetric
                | S::TPalindromic
                | S::StarPalindromic
        );
        let wc = if needs {
            Some(classify_weight_with(&term.weight, d, tol)?)
        } else {
            None
        };
        let mismatch =
            |what: &str| Error::StructureMismatch(format!("w_{} {what} for {tag}", j + 1));
        let class = match (tag, wc) {
            (S::Unstructured, _) => MapClass::General,
            (S::Symmetric | S::TPalindromic, _) => MapClass::Symmetric,
            (S::SkewSymmetric, _) => MapClass::SkewSymmetric,
            (S::StarPalindromic, _) => MapClass::Hermitian,
            (S::TEven | S::TOdd, Some(c)) => match c.parity {
                Parity::Even => t_class(tag == S::TEven),
                Parity::Odd => t_class(tag == S::TOdd),
                Parity::Neither => return Err(mismatch("is neither even nor odd")),
            },
            (S::Hermitian | S::SkewHermitian, Some(c)) => match c.conj {
                ConjClass::Symmetric => herm_class(tag == S::Hermitian),
                ConjClass::Antisymmetric => herm_class(tag != S::Hermitian),
                ConjClass::Neither => return Err(mismatch("is not conjugate-(anti)symmetric")),
            },
            (S::StarEven | S::StarOdd, Some(c)) => match c.alt_conj {
                AltConj::Even => herm_class(tag == S::StarEven),
                AltConj::Odd => herm_class(tag == S::StarOdd),
                AltConj::Neither => return Err(mismatch("has no alternating conjugate symmetry")),
            },
            (_, None) => unreachable!(),
        };
        slots.push(Slot::Single { member, class });
    }
    Ok(slots)
}

/// Scalar multiplier of member `i` at `λ`.
fn member_coefficients(g: &Rmf, lambda: C64, pole_tol: f64) -> Result<Vec<C64>> {
    let mut z = Vec::with_capacity(g.degree() + 1 + g.num_terms());
    let mut pw = ONE;
    for _ in 0..=g.degree() {
        z.push(pw);
        pw *= lambda;
    }
    z.extend(g.weights_at(lambda, pole_tol)?);
    Ok(z)
}

/// Contribution of one slot to the range of `y^*ΔG(λ)x`, described by its
/// support function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SupportTerm {
    /// `z · M_S(x, y)`.
    Ellipse {
        z: C64,
        params: MSParams,
    },
    Disk {
        radius: f64,
    },
    /// Support `‖e^{-iψ} a x y^* + e^{iψ} b̄ y x^*‖_*`; `gp = P^*P` with `P = [x, y]`,
    /// `sin = sqrt(det gp)`.
    StarPair {
        a: C64,
        b: C64,
        gp: Matrix2<C64>,
        sin: f64,
    },
}

/// Nuclear norm of `P M Q^*` for rank-two factors, from the Gram matrices and
/// `s = sqrt(det Gp · det Gq)`, which is passed in because forming it from
/// the Gram entries loses half the digits for nearly parallel columns.
fn rank2_nuclear(gp: &Matrix2<C64>, m: &Matrix2<C64>, gq: &Matrix2<C64>, s: f64) -> f64 {
    let k = m.adjoint() * gp * m * gq;
    let tr = k.trace().re;
    (tr + 2.0 * m.determinant().norm() * s).max(0.0).sqrt()
}

impl SupportTerm {
    pub fn support(&self, psi: f64) -> f64 {
        match *self {
            SupportTerm::Ellipse { z, params } => params.support(z, psi),
            SupportTerm::Disk { radius } => radius,
            SupportTerm::StarPair { a, b, gp, sin } => {
                let e = C64::from_polar(1.0, psi);
                let m = Matrix2::new(e.conj() * a, ZERO, ZERO, e * b.conj());
                let gq = Matrix2::new(gp[(1, 1)], gp[(1, 0)], gp[(0, 1)], gp[(0, 0)]);
                rank2_nuclear(&gp, &m, &gq, sin * sin)
            }
        }
    }
}

fn gram(p: &CVec, q: &CVec) -> Matrix2<C64> {
    Matrix2::new(ONE, dot_star(p, q), dot_star(q, p), ONE)
}

/// Support terms for `tag` at the triplet `t`.
pub fn oracle_terms(
    g: &Rmf,
    t: &Eigentriplet,
    tag: StructureTag,
    tol: &Tolerances,
) -> Result<Vec<SupportTerm>> {
    let slots = structured_slots(g, tag, tol.structure)?;
    let z = member_coefficients(g, t.lambda, tol.pole)?;
    let (x, y) = (&t.x, &t.y);
    Ok(slots
        .iter()
        .map(|s| match *s {
            Slot::Single { member, class } => SupportTerm::Ellipse {
                z: z[member],
                params: ms_params(class, x, y),
            },
            Slot::TPair { low, high } => {
                // ‖a x y^* + b ȳ x^T‖_* with P = [x, ȳ], Q = [y, x̄].
                let (xb, yb) = (conj_vec(x), conj_vec(y));
                let m = Matrix2::new(z[low], ZERO, ZERO, z[high]);
                let st = sin_t(x, y);
                SupportTerm::Disk {
                    radius: rank2_nuclear(&gram(x, &yb), &m, &gram(y, &xb), st * st),
                }
            }
            Slot::StarPair { low, high } => SupportTerm::StarPair {
                a: z[low],
                b: z[high],
                gp: gram(x, y),
                sin: sin_star(x, y),
            },
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMethod {
    Grid,
    Sampling,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SupOracleResult {
    pub value: f64,
    pub grid_points: usize,
    pub argmax_phase: f64,
    pub method: OracleMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn total_support(terms: &[SupportTerm], psi: f64) -> f64 {
    terms.iter().map(|t| t.support(psi)).sum()
}

/// `max_ψ Σ_t h_t(ψ)` on a uniform grid of `grid_n` directions, followed by a
/// golden-section search in the best cell. Every value returned is attained.
pub fn sup_oracle_grid(terms: &[SupportTerm], grid_n: usize) -> SupOracleResult {
    let grid_n = grid_n.max(64);
    let h = TAU / grid_n as f64;
    let (mut best_psi, mut best) = (0.0, f64::NEG_INFINITY);
    for i in 0..grid_n {
        let psi = i as f64 * h;
        let v = total_support(terms, psi);
        if v > best {
            best = v;
            best_psi = psi;
        }
    }
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (best_psi - h, best_psi + h);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (total_support(terms, c), total_support(terms, d));
    for _ in 0..60 {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = total_support(terms, c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = total_support(terms, d);
        }
    }
    for (psi, v) in [(c, fc), (d, fd)] {
        if v > best {
            best = v;
            best_psi = psi;
        }
    }
    SupOracleResult {
        value: best.max(0.0),
        grid_points: grid_n,
        argmax_phase: best_psi.rem_euclid(TAU),
        method: OracleMethod::Grid,
        seed: None,
    }
}

/// Grid estimate of `κ^S(λ, G)`: the supremum divided by `|y^*G'(λ)x|`.
pub fn structured_oracle(
    g: &Rmf,
    t: &Eigentriplet,
    tag: StructureTag,
    grid_n: usize,
    tol: &Tolerances,
) -> Result<SupOracleResult> {
    let terms = oracle_terms(g, t, tag, tol)?;
    let mut r = sup_oracle_grid(&terms, grid_n);
    r.value /= t.derivative_scalar.norm();
    Ok(r)
}

/// `Δ = V U^*` from `N = U Σ V^*`, which maximizes `Re tr(ΔN)` over the unit ball.
fn nuclear_dual(n: &CMat) -> CMat {
    let svd = n.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    vt.adjoint() * u.adjoint()
}

fn assemble(g: &Rmf, members: Vec<CMat>) -> PerturbationTuple {
    let mut poly = members;
    let terms = poly.split_off(g.degree() + 1);
    PerturbationTuple::new(poly, terms)
}

/// Unit-norm structured tuple with `Re(e^{-iψ} y^*ΔG(λ)x)` equal to the
/// total support in direction `ψ`.
pub fn extremal_tuple(
    g: &Rmf,
    t: &Eigentriplet,
    tag: StructureTag,
    psi: f64,
    tol: &Tolerances,
) -> Result<PerturbationTuple> {
    let slots = structured_slots(g, tag, tol.structure)?;
    let z = member_coefficients(g, t.lambda, tol.pole)?;
    let (x, y) = (&t.x, &t.y);
    let n = g.n();
    let mut members = vec![CMat::zeros(n, n); z.len()];
    let e = C64::from_polar(1.0, -psi);
    for s in slots {
        match s {
            Slot::Single { member, class } => {
                let zt = z[member];
                let dir = if zt.norm() == 0.0 {
                    psi
                } else {
                    psi - zt.arg()
                };
                let mut m = support_map(class, x, y, dir);
                if m.norm() == 0.0 && class == MapClass::SkewSymmetric && n > 1 {
                    // M_S = {0}; any unit skew-symmetric matrix keeps the norm.
                    m = CMat::zeros(n, n);
                    m[(0, 1)] = ONE;
                    m[(1, 0)] = -ONE;
                }
                members[member] = m;
            }
            Slot::TPair { low, high } => {
                let nmat = (outer(x, y) * z[low] + outer(&conj_vec(y), &conj_vec(x)) * z[high]) * e;
                let dl = nuclear_dual(&nmat);
                members[high] = dl.transpose();
                members[low] = dl;
            }
            Slot::StarPair { low, high } => {
                let nmat = outer(x, y) * (e * z[low]) + outer(y, x) * (e.conj() * z[high].conj());
                let dl = nuclear_dual(&nmat);
                members[high] = dl.adjoint();
                members[low] = dl;
            }
        }
    }
    Ok(assemble(g, members))
}

/// Perturbation of norm `ε` attaining `ε ·` (numerator of the closed-form
/// condition number) for the tags with exact formulas.
pub fn worst_case_perturbation(
    g: &Rmf,
    t: &Eigentriplet,
    tag: StructureTag,
    eps: f64,
    tol: &Tolerances,
) -> Result<PerturbationTuple> {
    use StructureTag as S;
    match tag {
        S::Unstructured => {
            let m = outer(&t.y, &t.x);
            let z = member_coefficients(g, t.lambda, tol.pole)?;
            let members = z.iter().map(|&zk| &m * (-sign(zk) * eps)).collect();
            Ok(assemble(g, members))
        }
        S::Symmetric | S::SkewSymmetric | S::TEven | S::TOdd => {
            // Every range is a disk; aligning each term along ψ = π gives the sum of radii.
            Ok(extremal_tuple(g, t, tag, PI, tol)?.scaled(eps))
        }
        _ => Err(Error::Unsupported(format!(
            "no closed-form worst case for {tag}; the value is only bounded"
        ))),
    }
}

fn project(class: MapClass, m: CMat) -> CMat {
    match class {
        MapClass::General => m,
        MapClass::Symmetric => sym_part(&m),
        MapClass::SkewSymmetric => skew_part(&m),
        MapClass::Hermitian => herm_part(&m),
        MapClass::SkewHermitian => skew_herm_part(&m),
    }
}

fn unit(m: CMat) -> CMat {
    let s = spectral_norm(&m);
    if s == 0.0 {
        m
    } else {
        m / C64::from(s)
    }
}

/// Random structured tuple whose members all have unit spectral norm.
pub fn random_structured_tuple(
    g: &Rmf,
    tag: StructureTag,
    rng: &mut impl Rng,
    tol: &Tolerances,
) -> Result<PerturbationTuple> {
    let slots = structured_slots(g, tag, tol.structure)?;
    Ok(random_from_slots(g, &slots, rng))
}

fn random_from_slots(g: &Rmf, slots: &[Slot], rng: &mut impl Rng) -> PerturbationTuple {
    let n = g.n();
    let mut members = vec![CMat::zeros(n, n); g.degree() + 1 + g.num_terms()];
    for s in slots {
        match *s {
            Slot::Single { member, class } => {
                members[member] = unit(project(class, gaussian_matrix(rng, n, n)))
            }
            Slot::TPair { low, high } => {
                let m = unit(gaussian_matrix(rng, n, n));
                members[high] = m.transpose();
                members[low] = m;
            }
            Slot::StarPair { low, high } => {
                let m = unit(gaussian_matrix(rng, n, n));
                members[high] = m.adjoint();
                members[low] = m;
            }
        }
    }
    assemble(g, members)
}

fn sample_seed(seed: u64, i: u64) -> u64 {
    seed ^ i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Largest `|y^*ΔG(λ)x| / |y^*G'(λ)x|` over `n_samples` random unit structured
/// tuples plus the extremal tuple at the grid argmax.
pub fn sup_oracle_sampling(
    g: &Rmf,
    t: &Eigentriplet,
    tag: StructureTag,
    n_samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<SupOracleResult> {
    let slots = structured_slots(g, tag, tol.structure)?;
    let dabs = t.derivative_scalar.norm();
    let grid = structured_oracle(g, t, tag, 1024, tol)?;
    let extremal = extremal_tuple(g, t, tag, grid.argmax_phase, tol)?;
    let first = extremal.bilinear(g, t.lambda, &t.x, &t.y)?;
    let best = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(seed, i));
            let d = random_from_slots(g, &slots, &mut rng);
            d.bilinear(g, t.lambda, &t.x, &t.y)
        })
        .try_fold(
            || first,
            |acc, v| v.map(|v| if v.norm() > acc.norm() { v } else { acc }),
        )
        .try_reduce(|| first, |a, b| Ok(if b.norm() > a.norm() { b } else { a }))?;
    Ok(SupOracleResult {
        value: best.norm() / dabs,
        grid_points: n_samples,
        argmax_phase: best.arg(),
        method: OracleMethod::Sampling,
        seed: Some(seed),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SlopeReport {
    pub eps_list: Vec<f64>,
    pub predicted_shifts: Vec<C64>,
    pub actual_shifts: Vec<C64>,
    /// Least-squares slope of `log|actual - predicted|` against `log ε`.
    pub remainder_slope: Option<f64>,
    /// Every remainder vanished (for example `ΔG = 0`), so no slope exists.
    pub exact_match: bool,
    /// Values of `ε` whose re-solve failed.
    pub dropped: Vec<f64>,
}

impl SlopeReport {
    pub fn remainders(&self) -> Vec<f64> {
        self.actual_shifts
            .iter()
            .zip(&self.predicted_shifts)
            .map(|(a, p)| (a - p).norm())
            .collect()
    }
}

fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(_, &y)| y > 0.0)
        .map(|(&x, &y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Re-solves `G + ε ΔG` near `λ` for every `ε` and compares the shift with
/// the first-order prediction `-ε y^*ΔG(λ)x / y^*G'(λ)x`.
pub fn first_order_experiment(
    g: &Rmf,
    t: &Eigentriplet,
    dg_unit: &PerturbationTuple,
    eps_list: &[f64],
    tol: &Tolerances,
) -> Result<SlopeReport> {
    if eps_list.len() < 3 {
        return Err(Error::BadParams(
            "at least three values of eps are required".into(),
        ));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) || eps_list.iter().any(|&e| e <= 0.0) {
        return Err(Error::BadParams(
            "eps list must be positive and strictly decreasing".into(),
        ));
    }
    dg_unit.check_shape(g)?;
    // Newton runs to its iteration cap so the shift is resolved to rounding level.
    // The baseline gets the same treatment, otherwise its error floors the remainders.
    let tight = Tolerances {
        refine: 0.0,
        ..*tol
    };
    let t = &refine_triplet(g, t.lambda, &t.x, &t.y, &tight)?;
    let first = dg_unit.bilinear(g, t.lambda, &t.x, &t.y)? / t.derivative_scalar;
    let results: Vec<(f64, Result<C64>)> = eps_list
        .par_iter()
        .map(|&eps| {
            let r = g
                .perturbed(&dg_unit.scaled(eps))
                .and_then(|gp| refine_triplet(&gp, t.lambda, &t.x, &t.y, &tight))
                .map(|tp| tp.lambda - t.lambda);
            (eps, r)
        })
        .collect();
    let mut rep = SlopeReport {
        eps_list: Vec::new(),
        predicted_shifts: Vec::new(),
        actual_shifts: Vec::new(),
        remainder_slope: None,
        exact_match: false,
        dropped: Vec::new(),
    };
    for (eps, r) in results {
        match r {
            Ok(shift) => {
                rep.eps_list.push(eps);
                rep.predicted_shifts.push(-first * eps);
                rep.actual_shifts.push(shift);
            }
            Err(Error::NoConvergence { .. }) => rep.dropped.push(eps),
            Err(e) => return Err(e),
        }
    }
    if rep.eps_list.len() < 3 {
        return Err(Error::NoConvergence {
            iterations: 25,
            residual: f64::NAN,
        });
    }
    let rem = rep.remainders();
    let scale = t.lambda.norm().max(1.0);
    if rem.iter().all(|&r| r <= 1e-15 * scale) {
        rep.exact_match = true;
    } else {
        rep.remainder_slope = loglog_slope(&rep.eps_list, &rem);
    }
    Ok(rep)
}

/// Random tuple of unit members with no structure, for slope experiments.
pub fn random_unit_tuple(g: &Rmf, seed: u64) -> PerturbationTuple {
    // Offset so that a tuple never replays the stream a generator used for `g`.
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5851_F42D_4C95_7F2D);
    let slots: Vec<Slot> = (0..g.degree() + 1 + g.num_terms())
        .map(|member| Slot::Single {
            member,
            class: MapClass::General,
        })
        .collect();
    random_from_slots(g, &slots, &mut rng)
}
