//! Unstructured and structured eigenvalue condition numbers.

use std::f64::consts::SQRT_2;

use serde::Serialize;

use crate::eigensolve::Eigentriplet;
use crate::error::{Error, Result};
use crate::linalg::{dot_star, dot_t};
use crate::mapping::skew_factor;
use crate::poly::{C64, I, ONE};
use crate::rmf::Rmf;
use crate::structure::{
    classify_weight_with, hermitian_normal_form, transform_rmf, validate_structure_with, Parity,
    StructureTag, Transform,
};
use crate::tolerance::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StructuredValue {
    Exact { value: f64 },
    Interval { lo: f64, hi: f64 },
}

impl StructuredValue {
    /// Exact value or the upper end of the interval.
    pub fn upper(&self) -> f64 {
        match *self {
            StructuredValue::Exact { value } => value,
            StructuredValue::Interval { hi, .. } => hi,
        }
    }

    pub fn lower(&self) -> f64 {
        match *self {
            StructuredValue::Exact { value } => value,
            StructuredValue::Interval { lo, .. } => lo,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EqualityReason {
    /// `x^T y = 0`.
    OrthoT,
    /// `x^* y = 0`.
    OrthoStar,
    RealLambda,
    ImagLambda,
    PosRealLambda,
    WeightRealAtZero,
    WeightImagAtZero,
    XoEmpty,
    XeEmpty,
    PalStarAngle,
    /// All contributions `λ^k`, `w_j(λ)` share one direction modulo π.
    CollinearTerms,
    Always,
    /// The characterization fails.
    Violated,
}

impl EqualityReason {
    pub fn describe(self) -> &'static str {
        match self {
            EqualityReason::OrthoT => "x^T y = 0",
            EqualityReason::OrthoStar => "x^* y = 0",
            EqualityReason::RealLambda => "lambda real",
            EqualityReason::ImagLambda => "lambda imaginary",
            EqualityReason::PosRealLambda => "lambda positive real",
            EqualityReason::WeightRealAtZero => "weights real at 0",
            EqualityReason::WeightImagAtZero => "weights imaginary at 0",
            EqualityReason::XoEmpty => "no odd weights",
            EqualityReason::XeEmpty => "no even weights",
            EqualityReason::PalStarAngle => "arg w_j - (d/2) arg lambda in pi Z",
            EqualityReason::CollinearTerms => "collinear terms",
            EqualityReason::Always => "always",
            EqualityReason::Violated => "-",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EqualityVerdict {
    pub holds: bool,
    pub reason: EqualityReason,
}

impl EqualityVerdict {
    fn yes(reason: EqualityReason) -> Self {
        EqualityVerdict {
            holds: true,
            reason,
        }
    }

    fn no() -> Self {
        EqualityVerdict {
            holds: false,
            reason: EqualityReason::Violated,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Factors {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b2: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub tag: StructureTag,
    pub lambda: C64,
    pub kappa: f64,
    pub alpha: f64,
    /// `|y^* G'(λ) x|`.
    pub derivative_abs: f64,
    pub structured: StructuredValue,
    pub factors: Factors,
    pub equality: EqualityVerdict,
    /// Grid-oracle estimate of the structured value; empirical, not certified.
    pub oracle_estimate: Option<f64>,
    pub warnings: Vec<String>,
}

impl ConditionReport {
    pub fn ratio(&self) -> f64 {
        self.structured.upper() / self.kappa
    }
}

/// `α = Σ_k |λ|^k + Σ_j |w_j(λ)|`.
pub fn alpha_weight_sum(g: &Rmf, lambda: C64) -> Result<f64> {
    alpha_with(g, lambda, Tolerances::default().pole)
}

fn alpha_with(g: &Rmf, lambda: C64, pole_tol: f64) -> Result<f64> {
    let r = lambda.norm();
    let poly: f64 = (0..=g.degree()).map(|k| r.powi(k as i32)).sum();
    let w: f64 = g
        .weights_at(lambda, pole_tol)?
        .iter()
        .map(|w| w.norm())
        .sum();
    Ok(poly + w)
}

fn simple_threshold(g: &Rmf, alpha: f64, tol: &Tolerances) -> f64 {
    tol.simple * (1.0 + alpha * g.coefficient_scale())
}

/// `κ(λ, G) = α / |y^* G'(λ) x|`.
pub fn kappa_unstructured(g: &Rmf, t: &Eigentriplet, tol: &Tolerances) -> Result<f64> {
    let alpha = alpha_with(g, t.lambda, tol.pole)?;
    let d = t.derivative_scalar.norm();
    if d <= simple_threshold(g, alpha, tol) {
        return Err(Error::NotSimple(d));
    }
    Ok(alpha / d)
}

fn is_zero_lambda(g: &Rmf, lambda: C64) -> bool {
    lambda.norm() <= 1e-12 * (1.0 + g.coefficient_scale())
}

/// Splits the contributions `|λ|^k`, `|w_j(λ)|` into those carried by
/// symmetric slots and those carried by skew-symmetric slots.
fn t_alternating_masses(
    g: &Rmf,
    lambda: C64,
    tag: StructureTag,
    tol: &Tolerances,
) -> Result<(f64, f64)> {
    let r = lambda.norm();
    let odd_tag = tag == StructureTag::TOdd;
    let (mut sym, mut skew) = (0.0, 0.0);
    for k in 0..=g.degree() {
        let v = r.powi(k as i32);
        if (k % 2 == 1) != odd_tag {
            skew += v;
        } else {
            sym += v;
        }
    }
    let weights = g.weights_at(lambda, tol.pole)?;
    for (j, (term, w)) in g.terms().iter().zip(weights).enumerate() {
        let class = classify_weight_with(&term.weight, g.degree(), tol.structure)?;
        let odd = match class.parity {
            Parity::Odd => true,
            Parity::Even => false,
            Parity::Neither => {
                return Err(Error::StructureMismatch(format!(
                    "w_{} is neither even nor odd, as {tag} requires",
                    j + 1
                )))
            }
        };
        // T-even: even weights sit on symmetric E_j; T-odd: odd weights do.
        if odd == odd_tag {
            sym += w.norm();
        } else {
            skew += w.norm();
        }
    }
    Ok((sym, skew))
}

fn palindromic_sum(lambda: C64, d: usize, c: f64) -> f64 {
    let mut s = 0.0;
    for k in 0..d.div_ceil(2) {
        let a = lambda.powu(k as u32);
        let b = lambda.powu((d - k) as u32);
        s += (a + b).norm() + c * (a - b).norm();
    }
    if d.is_multiple_of(2) {
        s += lambda.norm().powi((d / 2) as i32);
    }
    s
}

/// `c`, `β`, `γ`, `B₁`, `B₂` as they apply to `tag`.
pub fn structure_factors(
    g: &Rmf,
    t: &Eigentriplet,
    tag: StructureTag,
    tol: &Tolerances,
) -> Result<Factors> {
    use StructureTag as S;
    let lambda = t.lambda;
    let alpha = alpha_with(g, lambda, tol.pole)?;
    let c = skew_factor(&t.x, &t.y);
    let wsum: f64 = g
        .weights_at(lambda, tol.pole)?
        .iter()
        .map(|w| w.norm())
        .sum();
    let mut f = Factors::default();
    match tag {
        S::SkewSymmetric => f.c = Some(c),
        S::TEven | S::TOdd => {
            let (sym, skew) = t_alternating_masses(g, lambda, tag, tol)?;
            let v = ((sym + c * skew) / alpha).clamp(0.0, 1.0);
            f.c = Some(c);
            if tag == S::TEven {
                f.beta = Some(v);
            } else {
                f.gamma = Some(v);
            }
        }
        S::TPalindromic => {
            f.c = Some(c);
            f.b1 = Some(palindromic_sum(lambda, g.degree(), c) + wsum);
        }
        S::StarPalindromic => f.b2 = Some(palindromic_sum(lambda, g.degree(), 1.0) + wsum),
        _ => {}
    }
    Ok(f)
}

/// True when every nonzero value lies on one line through the origin.
fn collinear(values: &[C64], tol: f64) -> bool {
    let scale = values.iter().fold(0.0f64, |a, v| a.max(v.norm()));
    let nonzero: Vec<C64> = values
        .iter()
        .copied()
        .filter(|v| v.norm() > 1e-14 * scale)
        .collect();
    let Some(&reference) = nonzero.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())) else {
        return true;
    };
    let u = reference / reference.norm();
    nonzero
        .iter()
        .all(|v| (v * u.conj()).im.abs() <= tol * v.norm())
}

/// Hermitian branch on an RMF already in Hermitian normal form.
fn hermitian_branch(
    g: &Rmf,
    t: &Eigentriplet,
    kappa: f64,
    tol: &Tolerances,
) -> Result<(StructuredValue, EqualityVerdict)> {
    let lambda = t.lambda;
    let ortho = dot_star(&t.x, &t.y).norm() <= tol.feasibility;
    let mut terms: Vec<C64> = Vec::with_capacity(g.degree() + 1 + g.num_terms());
    let mut pw = ONE;
    for _ in 0..=g.degree() {
        terms.push(pw);
        pw *= lambda;
    }
    terms.extend(g.weights_at(lambda, tol.pole)?);
    let verdict = if ortho {
        EqualityVerdict::yes(EqualityReason::OrthoStar)
    } else if collinear(&terms, tol.angle) {
        let reason = if is_zero_lambda(g, lambda) {
            EqualityReason::WeightRealAtZero
        } else if g.degree() >= 1 && lambda.im.abs() <= tol.angle * lambda.norm() {
            EqualityReason::RealLambda
        } else {
            EqualityReason::CollinearTerms
        };
        EqualityVerdict::yes(reason)
    } else {
        EqualityVerdict::no()
    };
    let value = if verdict.holds {
        StructuredValue::Exact { value: kappa }
    } else {
        StructuredValue::Interval {
            lo: kappa / SQRT_2,
            hi: kappa,
        }
    };
    Ok((value, verdict))
}

fn t_palindromic_equality(g: &Rmf, t: &Eigentriplet, tol: &Tolerances) -> EqualityVerdict {
    let lambda = t.lambda;
    let d = g.degree();
    if d == 0 || is_zero_lambda(g, lambda) {
        return EqualityVerdict::yes(EqualityReason::Always);
    }
    if dot_t(&t.x, &t.y).norm() <= tol.feasibility {
        return EqualityVerdict::yes(EqualityReason::OrthoT);
    }
    let real = lambda.im.abs() <= tol.angle * lambda.norm();
    if d.is_multiple_of(2) && real {
        EqualityVerdict::yes(EqualityReason::RealLambda)
    } else if d % 2 == 1 && real && lambda.re > 0.0 {
        EqualityVerdict::yes(EqualityReason::PosRealLambda)
    } else {
        EqualityVerdict::no()
    }
}

fn star_palindromic_equality(
    g: &Rmf,
    t: &Eigentriplet,
    tol: &Tolerances,
) -> Result<EqualityVerdict> {
    let lambda = t.lambda;
    let d = g.degree();
    if dot_star(&t.x, &t.y).norm() <= tol.feasibility {
        return Ok(EqualityVerdict::yes(EqualityReason::OrthoStar));
    }
    let weights = g.weights_at(lambda, tol.pole)?;
    if is_zero_lambda(g, lambda) {
        // Only A_0 and the Hermitian E_j carry λ = 0; A_0 is unconstrained
        // unless d = 0, where it is Hermitian itself.
        let mut vals = weights;
        if d == 0 {
            vals.push(ONE);
            return Ok(if collinear(&vals, tol.angle) {
                EqualityVerdict::yes(EqualityReason::WeightRealAtZero)
            } else {
                EqualityVerdict::no()
            });
        }
        return Ok(if vals.len() <= 1 {
            EqualityVerdict::yes(EqualityReason::Always)
        } else if collinear(&vals, tol.angle) {
            EqualityVerdict::yes(EqualityReason::CollinearTerms)
        } else {
            EqualityVerdict::no()
        });
    }
    if weights.is_empty() {
        return Ok(EqualityVerdict::yes(EqualityReason::Always));
    }
    let half = 0.5 * d as f64 * lambda.arg();
    let ok = weights
        .iter()
        .filter(|w| w.norm() > 0.0)
        .all(|w| (w.arg() - half).sin().abs() <= tol.angle);
    Ok(if ok {
        EqualityVerdict::yes(EqualityReason::PalStarAngle)
    } else {
        EqualityVerdict::no()
    })
}

fn check_structure(g: &Rmf, tag: StructureTag, tol: &Tolerances) -> Result<()> {
    let rep = validate_structure_with(g, tag, tol.structure);
    if rep.ok {
        return Ok(());
    }
    let what = rep
        .weight_violations
        .first()
        .map(|v| format!("w_{}: {}", v.term, v.condition))
        .or_else(|| {
            rep.matrix_residuals
                .iter()
                .find(|r| r.residual > tol.structure)
                .map(|r| format!("{} residual {:e}", r.name, r.residual))
        })
        .unwrap_or_default();
    Err(Error::StructureMismatch(format!("G is not {tag}: {what}")))
}

/// Condition report for `tag`. The Hermitian-type tags are evaluated through
/// the Hermitian branch on `iG`, `G(iz)` or `iG(iz)`.
pub fn kappa_structured(
    g: &Rmf,
    t: &Eigentriplet,
    tag: StructureTag,
    tol: &Tolerances,
) -> Result<ConditionReport> {
    use StructureTag as S;
    check_structure(g, tag, tol)?;
    let lambda = t.lambda;
    let alpha = alpha_with(g, lambda, tol.pole)?;
    let kappa = kappa_unstructured(g, t, tol)?;
    let dabs = t.derivative_scalar.norm();
    let mut warnings = Vec::new();

    let delegate = match tag {
        S::SkewHermitian => Some((Transform::ScaleI, ONE)),
        S::StarEven => Some((Transform::RotateZ, -I)),
        S::StarOdd => Some((Transform::RotateAndScale, -I)),
        _ => None,
    };
    if let Some((mode, shift)) = delegate {
        let r = transform_rmf(g, mode);
        let mu = lambda * shift;
        let tr = Eigentriplet::from_vectors_with(&r, mu, &t.x, &t.y, tol.pole)?;
        let mut rep = kappa_structured(&r, &tr, S::Hermitian, tol)?;
        rep.tag = tag;
        rep.lambda = lambda;
        rep.equality.reason = match (tag, rep.equality.reason) {
            (S::StarEven | S::StarOdd, EqualityReason::RealLambda) => EqualityReason::ImagLambda,
            (_, EqualityReason::WeightRealAtZero) => EqualityReason::Always,
            (_, r) => r,
        };
        return Ok(rep);
    }

    let factors = structure_factors(g, t, tag, tol)?;
    let (structured, equality) = match tag {
        S::Unstructured | S::Symmetric => (
            StructuredValue::Exact { value: kappa },
            EqualityVerdict::yes(EqualityReason::Always),
        ),
        S::SkewSymmetric => {
            let c = factors.c.unwrap_or(1.0);
            let eq = if dot_t(&t.x, &t.y).norm() <= tol.feasibility {
                EqualityVerdict::yes(EqualityReason::OrthoT)
            } else {
                EqualityVerdict::no()
            };
            (StructuredValue::Exact { value: c * kappa }, eq)
        }
        S::TEven | S::TOdd => {
            let f = factors.beta.or(factors.gamma).unwrap_or(1.0);
            let (_, skew) = t_alternating_masses(g, lambda, tag, tol)?;
            let eq = if dot_t(&t.x, &t.y).norm() <= tol.feasibility {
                EqualityVerdict::yes(EqualityReason::OrthoT)
            } else if skew <= 1e-14 * alpha {
                EqualityVerdict::yes(if tag == S::TEven {
                    EqualityReason::XoEmpty
                } else {
                    EqualityReason::XeEmpty
                })
            } else {
                EqualityVerdict::no()
            };
            if g.degree().is_multiple_of(2) && g.degree() > 0 {
                warnings.push(
                    "even degree: numerator sums even powers on symmetric slots and odd powers on skew slots".into(),
                );
            }
            if tag == S::TOdd {
                warnings.push(
                    "T-odd factor weights even powers and even weights by c (skew-symmetric slots)"
                        .into(),
                );
            }
            let value = if eq.holds { kappa } else { f * kappa };
            (StructuredValue::Exact { value }, eq)
        }
        S::Hermitian => {
            let h = hermitian_normal_form(g);
            hermitian_branch(&h, t, kappa, tol)?
        }
        S::TPalindromic => {
            let b1 = factors.b1.expect("set for T-palindromic");
            let eq = t_palindromic_equality(g, t, tol);
            let value = if eq.holds {
                StructuredValue::Exact { value: kappa }
            } else {
                let lo = b1 / (SQRT_2 * dabs);
                let hi = b1.min(alpha) / dabs;
                if lo > hi {
                    warnings.push(format!(
                        "lower bound B1/(sqrt2 D) = {lo:.6e} exceeds the upper bound {hi:.6e}; it is not valid here"
                    ));
                }
                StructuredValue::Interval { lo, hi }
            };
            (value, eq)
        }
        S::StarPalindromic => {
            let b2 = factors.b2.expect("set for *-palindromic");
            let eq = star_palindromic_equality(g, t, tol)?;
            let value = if eq.holds {
                StructuredValue::Exact { value: kappa }
            } else {
                let lo = b2 / (SQRT_2 * dabs);
                if lo > kappa {
                    warnings.push(format!(
                        "lower bound B2/(sqrt2 D) = {lo:.6e} exceeds kappa; it is not valid here"
                    ));
                }
                StructuredValue::Interval { lo, hi: kappa }
            };
            (value, eq)
        }
        S::SkewHermitian | S::StarEven | S::StarOdd => unreachable!("delegated above"),
    };
    if g.is_degree_deficient() {
        warnings.push("leading coefficient A_d is zero".into());
    }
    Ok(ConditionReport {
        tag,
        lambda,
        kappa,
        alpha,
        derivative_abs: dabs,
        structured,
        factors,
        equality,
        oracle_estimate: None,
        warnings,
    })
}

/// Whether `κ^S(λ, G) = κ(λ, G)`, with the reason.
pub fn equality_predicate(
    g: &Rmf,
    t: &Eigentriplet,
    tag: StructureTag,
    tol: &Tolerances,
) -> Result<EqualityVerdict> {
    Ok(kappa_structured(g, t, tag, tol)?.equality)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CMat, CVec};
    use crate::poly::ZERO;
    use crate::rmf::{RationalTerm, Weight};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn scalar(v: C64) -> CMat {
        CMat::from_element(1, 1, v)
    }

    fn one() -> CVec {
        CVec::from_element(1, ONE)
    }

    fn scalar_example() -> Rmf {
        let w = Weight::new(vec![ONE], vec![ZERO, ONE]).unwrap();
        Rmf::new(
            vec![scalar(c(-2.5)), scalar(ONE)],
            vec![RationalTerm {
                weight: w,
                coeff: scalar(ONE),
            }],
        )
        .unwrap()
    }

    #[test]
    fn alpha_values() {
        assert!((alpha_weight_sum(&scalar_example(), c(2.0)).unwrap() - 3.5).abs() < 1e-15);
        let g0 = Rmf::new(vec![scalar(ONE)], vec![]).unwrap();
        assert_eq!(alpha_weight_sum(&g0, ZERO).unwrap(), 1.0);
        let g2 = Rmf::new(vec![scalar(ONE), scalar(ONE), scalar(ONE)], vec![]).unwrap();
        assert!((alpha_weight_sum(&g2, I).unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn scalar_kappa() {
        let g = scalar_example();
        let t = Eigentriplet::from_vectors(&g, c(2.0), &one(), &one()).unwrap();
        let k = kappa_unstructured(&g, &t, &Tolerances::default()).unwrap();
        assert!((k - 14.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn diagonal_kappa() {
        let a0 = -CMat::from_diagonal(&CVec::from_vec(vec![c(1.0), c(3.0)]));
        let g = Rmf::new(vec![a0, CMat::identity(2, 2)], vec![]).unwrap();
        let e1 = CVec::from_vec(vec![ONE, ZERO]);
        let t = Eigentriplet::from_vectors(&g, c(1.0), &e1, &e1).unwrap();
        assert!((kappa_unstructured(&g, &t, &Tolerances::default()).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn hermitian_real_eigenvalue_is_exact() {
        let g = Rmf::new(vec![scalar(c(-1.0)), scalar(ONE)], vec![]).unwrap();
        let t = Eigentriplet::from_vectors(&g, c(1.0), &one(), &one()).unwrap();
        let r = kappa_structured(&g, &t, StructureTag::Hermitian, &Tolerances::default()).unwrap();
        assert_eq!(r.structured, StructuredValue::Exact { value: 2.0 });
        assert_eq!(r.equality, EqualityVerdict::yes(EqualityReason::RealLambda));
    }

    #[test]
    fn hermitian_complex_eigenvalue_with_parallel_vectors() {
        // Free (x, y) test at λ = 2 + i with x = y.
        let g = Rmf::new(vec![scalar(ONE), scalar(ONE)], vec![]).unwrap();
        let t = Eigentriplet::from_vectors(&g, C64::new(2.0, 1.0), &one(), &one()).unwrap();
        let r = kappa_structured(&g, &t, StructureTag::Hermitian, &Tolerances::default()).unwrap();
        assert!(!r.equality.holds);
        assert!(matches!(r.structured, StructuredValue::Interval { .. }));
    }

    #[test]
    fn t_even_factor_examples() {
        // d = 1, λ = 1, c = 0: β = 1/2. The 2x2 vectors give x^T y = 1.
        let n = 2;
        let a0 = CMat::identity(n, n);
        let a1 = CMat::from_row_slice(2, 2, &[ZERO, ONE, -ONE, ZERO]);
        let g = Rmf::new(vec![a0, a1], vec![]).unwrap();
        let x = CVec::from_vec(vec![ONE, ZERO]);
        let t = Eigentriplet::from_vectors(&g, c(1.0), &x, &x).unwrap();
        let f = structure_factors(&g, &t, StructureTag::TEven, &Tolerances::default()).unwrap();
        assert!((f.beta.unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn b1_even_degree_example() {
        let g = Rmf::new(vec![scalar(ONE), scalar(ONE), scalar(ONE)], vec![]).unwrap();
        let t = Eigentriplet::from_vectors(&g, c(1.0), &one(), &one()).unwrap();
        let f =
            structure_factors(&g, &t, StructureTag::TPalindromic, &Tolerances::default()).unwrap();
        assert!((f.b1.unwrap() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn palindromic_equality_examples() {
        let g = Rmf::new(vec![scalar(ONE), scalar(c(3.0)), scalar(ONE)], vec![]).unwrap();
        let base = Eigentriplet::from_vectors(&g, c(1.0), &one(), &one()).unwrap();
        let t0 = Eigentriplet {
            lambda: ZERO,
            derivative_scalar: ONE,
            ..base.clone()
        };
        assert_eq!(
            t_palindromic_equality(&g, &t0, &Tolerances::default()),
            EqualityVerdict::yes(EqualityReason::Always)
        );

        // *-palindromic, d = 2, one weight with arg w(λ) = arg λ.
        let w = Weight::polynomial(vec![ZERO, ONE]).unwrap();
        let hp = Rmf::new(
            vec![scalar(ONE), scalar(ONE), scalar(ONE)],
            vec![RationalTerm {
                weight: w,
                coeff: scalar(ONE),
            }],
        )
        .unwrap();
        let lam = C64::from_polar(1.7, 0.6);
        let t = Eigentriplet {
            lambda: lam,
            derivative_scalar: ONE,
            ..base
        };
        let v = star_palindromic_equality(&hp, &t, &Tolerances::default()).unwrap();
        assert_eq!(v, EqualityVerdict::yes(EqualityReason::PalStarAngle));
    }

    #[test]
    fn collinearity() {
        assert!(collinear(&[ONE, c(-2.0), ZERO], 1e-10));
        assert!(!collinear(&[ONE, I], 1e-10));
    }
}
