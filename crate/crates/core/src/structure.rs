//! Symmetry structures of rational matrix functions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, CMat};
use crate::poly::{self, C64, I};
use crate::rmf::{RationalTerm, Rmf, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructureTag {
    Unstructured,
    Symmetric,
    SkewSymmetric,
    TEven,
    TOdd,
    Hermitian,
    SkewHermitian,
    StarEven,
    StarOdd,
    StarPalindromic,
    TPalindromic,
}

impl StructureTag {
    pub const ALL: [StructureTag; 11] = [
        StructureTag::Unstructured,
        StructureTag::Symmetric,
        StructureTag::SkewSymmetric,
        StructureTag::TEven,
        StructureTag::TOdd,
        StructureTag::Hermitian,
        StructureTag::SkewHermitian,
        StructureTag::StarEven,
        StructureTag::StarOdd,
        StructureTag::StarPalindromic,
        StructureTag::TPalindromic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StructureTag::Unstructured => "unstructured",
            StructureTag::Symmetric => "symmetric",
            StructureTag::SkewSymmetric => "skew-symmetric",
            StructureTag::TEven => "t-even",
            StructureTag::TOdd => "t-odd",
            StructureTag::Hermitian => "hermitian",
            StructureTag::SkewHermitian => "skew-hermitian",
            StructureTag::StarEven => "star-even",
            StructureTag::StarOdd => "star-odd",
            StructureTag::StarPalindromic => "star-palindromic",
            StructureTag::TPalindromic => "t-palindromic",
        }
    }

    /// Tags whose structured condition number is known only up to an interval.
    pub fn is_interval(self) -> bool {
        matches!(
            self,
            StructureTag::Hermitian
                | StructureTag::SkewHermitian
                | StructureTag::StarEven
                | StructureTag::StarOdd
                | StructureTag::StarPalindromic
                | StructureTag::TPalindromic
        )
    }

    pub fn is_hermitian_family(self) -> bool {
        matches!(
            self,
            StructureTag::Hermitian
                | StructureTag::SkewHermitian
                | StructureTag::StarEven
                | StructureTag::StarOdd
        )
    }
}

impl fmt::Display for StructureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StructureTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .trim()
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .flat_map(|c| c.to_lowercase())
            .collect();
        let key = key.replace('*', "star");
        let tag = match key.as_str() {
            "unstructured" | "none" | "general" => StructureTag::Unstructured,
            "symmetric" | "sym" => StructureTag::Symmetric,
            "skewsymmetric" | "ssym" => StructureTag::SkewSymmetric,
            "teven" | "event" => StructureTag::TEven,
            "todd" | "oddt" => StructureTag::TOdd,
            "hermitian" | "herm" => StructureTag::Hermitian,
            "skewhermitian" | "sherm" => StructureTag::SkewHermitian,
            "stareven" | "evenstar" => StructureTag::StarEven,
            "starodd" | "oddstar" => StructureTag::StarOdd,
            "starpalindromic" | "palstar" => StructureTag::StarPalindromic,
            "tpalindromic" | "palt" => StructureTag::TPalindromic,
            _ => return Err(Error::Parse(format!("unknown structure tag '{s}'"))),
        };
        Ok(tag)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    Odd,
    Even,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConjClass {
    Symmetric,
    Antisymmetric,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AltConj {
    Even,
    Odd,
    Neither,
}

/// Symmetry classes of a scalar weight `w`:
/// - parity: `w(-z) = ±w(z)`;
/// - conj: `w(z)^* = ±w(z̄)`;
/// - alt_conj: `w(-z)^* = ±w(z̄)`;
/// - pal_t: `w(z) = z^d w(1/z)`;
/// - pal_star: `w(z)^* = z̄^d w(1/z̄)`.
///
/// The zero weight satisfies both signs; it resolves to `Even`, `Symmetric`
/// and `Even` respectively.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightClass {
    pub parity: Parity,
    pub conj: ConjClass,
    pub alt_conj: AltConj,
    pub pal_t: bool,
    pub pal_star: bool,
}

fn identity_holds(lhs: &[C64], rhs: &[C64], tol: f64) -> bool {
    let scale = poly::max_abs(lhs).max(poly::max_abs(rhs));
    scale == 0.0 || poly::max_abs(&poly::sub(lhs, rhs)) <= tol * scale
}

fn neg(p: &[C64]) -> Vec<C64> {
    poly::compose_scale(p, C64::new(-1.0, 0.0))
}

struct Flags {
    odd: bool,
    even: bool,
    conj_sym: bool,
    conj_anti: bool,
    alt_even: bool,
    alt_odd: bool,
    pal_t: bool,
    pal_star: bool,
}

fn coefficient_flags(w: &Weight, d: usize, tol: f64) -> Flags {
    let (q, lead) = poly::monic(w.q());
    let s: Vec<C64> = w.s().iter().map(|c| c / lead).collect();
    let sq = |a: &[C64], b: &[C64]| poly::mul(a, b);

    let a = sq(&neg(&s), &q);
    let b = sq(&s, &neg(&q));
    let odd = identity_holds(&a, &neg_all(&b), tol);
    let even = identity_holds(&a, &b, tol);

    let a = sq(&poly::conj(&s), &q);
    let b = sq(&s, &poly::conj(&q));
    let conj_sym = identity_holds(&a, &b, tol);
    let conj_anti = identity_holds(&a, &neg_all(&b), tol);

    let a = sq(&neg(&poly::conj(&s)), &q);
    let b = sq(&s, &neg(&poly::conj(&q)));
    let alt_even = identity_holds(&a, &b, tol);
    let alt_odd = identity_holds(&a, &neg_all(&b), tol);

    let (pal_t, pal_star) = if s.is_empty() {
        (true, true)
    } else {
        let ds = s.len() - 1;
        let dq = q.len() - 1;
        let rs = poly::reversed(&s);
        let rq = poly::reversed(&q);
        let lhs = poly::shift(&sq(&s, &rq), ds);
        let rhs = poly::shift(&sq(&rs, &q), d + dq);
        let pal_t = identity_holds(&lhs, &rhs, tol);
        let lhs = poly::shift(&sq(&poly::conj(&s), &rq), ds);
        let rhs = poly::shift(&sq(&rs, &poly::conj(&q)), d + dq);
        (pal_t, identity_holds(&lhs, &rhs, tol))
    };
    Flags {
        odd,
        even,
        conj_sym,
        conj_anti,
        alt_even,
        alt_odd,
        pal_t,
        pal_star,
    }
}

fn neg_all(p: &[C64]) -> Vec<C64> {
    p.iter().map(|c| -c).collect()
}

const SAMPLE_POINTS: usize = 8;

fn sampling_flags(w: &Weight, d: usize, tol: f64) -> Flags {
    let pole_tol = 1e-8;
    let mut flags = Flags {
        odd: true,
        even: true,
        conj_sym: true,
        conj_anti: true,
        alt_even: true,
        alt_odd: true,
        pal_t: true,
        pal_star: true,
    };
    let eval = |z: C64| -> Option<(C64, f64)> {
        let v = w.eval_with(z, pole_tol).ok()?;
        let mag = poly::abs_horner(w.s(), z) / poly::horner(w.q(), z).norm();
        Some((v, mag))
    };
    let close = |a: (C64, f64), b: (C64, f64)| (a.0 - b.0).norm() <= tol * (a.1 + b.1);
    let mut found = 0;
    let mut k = 0usize;
    while found < SAMPLE_POINTS && k < 64 {
        let r = 0.55 + 0.13 * (k % 8) as f64;
        let th = 0.7 + 0.91 * k as f64 + 0.37 * (k / 8) as f64;
        k += 1;
        let z = C64::from_polar(r, th);
        let zc = z.conj();
        let (Some(wz), Some(wm), Some(wc), Some(winv), Some(winvc)) =
            (eval(z), eval(-z), eval(zc), eval(z.inv()), eval(zc.inv()))
        else {
            continue;
        };
        found += 1;
        let neg = |v: (C64, f64)| (-v.0, v.1);
        let cj = |v: (C64, f64)| (v.0.conj(), v.1);
        flags.odd &= close(wm, neg(wz));
        flags.even &= close(wm, wz);
        flags.conj_sym &= close(cj(wz), wc);
        flags.conj_anti &= close(cj(wz), neg(wc));
        flags.alt_even &= close(cj(wm), wc);
        flags.alt_odd &= close(cj(wm), neg(wc));
        let zd = z.powi(d as i32);
        let zcd = zc.powi(d as i32);
        let rt = zd.norm();
        flags.pal_t &= close(wz, (zd * winv.0, rt * winv.1));
        flags.pal_star &= close(cj(wz), (zcd * winvc.0, rt * winvc.1));
    }
    flags
}

pub fn classify_weight(w: &Weight, d: usize) -> Result<WeightClass> {
    classify_weight_with(w, d, 1e-10)
}

/// Decides each flag by cross-multiplied coefficient identities (after making
/// `q` monic) and by evaluation at 8 fixed non-pole points. Disagreement is an
/// error.
pub fn classify_weight_with(w: &Weight, d: usize, tol: f64) -> Result<WeightClass> {
    let c = coefficient_flags(w, d, tol);
    let s = sampling_flags(w, d, tol);
    let pairs = [
        ("odd parity", c.odd, s.odd),
        ("even parity", c.even, s.even),
        ("conjugate symmetry", c.conj_sym, s.conj_sym),
        ("conjugate antisymmetry", c.conj_anti, s.conj_anti),
        ("alternating-conjugate even", c.alt_even, s.alt_even),
        ("alternating-conjugate odd", c.alt_odd, s.alt_odd),
        ("T-palindromic", c.pal_t, s.pal_t),
        ("*-palindromic", c.pal_star, s.pal_star),
    ];
    for (name, a, b) in pairs {
        if a != b {
            return Err(Error::ClassificationConflict(format!(
                "{name}: coefficient test says {a}, sampling test says {b}"
            )));
        }
    }
    let parity = if c.even {
        Parity::Even
    } else if c.odd {
        Parity::Odd
    } else {
        Parity::Neither
    };
    let conj = if c.conj_sym {
        ConjClass::Symmetric
    } else if c.conj_anti {
        ConjClass::Antisymmetric
    } else {
        ConjClass::Neither
    };
    let alt_conj = if c.alt_even {
        AltConj::Even
    } else if c.alt_odd {
        AltConj::Odd
    } else {
        AltConj::Neither
    };
    Ok(WeightClass {
        parity,
        conj,
        alt_conj,
        pal_t: c.pal_t,
        pal_star: c.pal_star,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientResidual {
    pub name: String,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightViolation {
    pub term: usize,
    pub condition: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub tag: StructureTag,
    pub ok: bool,
    pub matrix_residuals: Vec<CoefficientResidual>,
    pub weight_violations: Vec<WeightViolation>,
}

impl StructureReport {
    pub fn max_residual(&self) -> f64 {
        self.matrix_residuals
            .iter()
            .map(|r| r.residual)
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy)]
enum Op {
    T,
    Star,
}

fn apply(op: Op, m: &CMat) -> CMat {
    match op {
        Op::T => m.transpose(),
        Op::Star => m.adjoint(),
    }
}

/// `‖op(A) - sign·B‖ / (1 + ‖A‖)`.
fn residual(op: Op, a: &CMat, sign: f64, b: &CMat) -> f64 {
    spectral_norm(&(apply(op, a) - b * C64::from(sign))) / (1.0 + spectral_norm(a))
}

pub fn validate_structure(g: &Rmf, tag: StructureTag) -> StructureReport {
    validate_structure_with(g, tag, 1e-10)
}

/// Checks every coefficient relation and weight condition of the row of
/// `tag`. Failures are reported, not raised.
pub fn validate_structure_with(g: &Rmf, tag: StructureTag, tol: f64) -> StructureReport {
    use StructureTag as S;
    let d = g.degree();
    let mut res = Vec::new();
    let mut viol = Vec::new();
    let pm = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };

    for (k, a) in g.poly().iter().enumerate() {
        let r = match tag {
            S::Unstructured => continue,
            S::Symmetric => residual(Op::T, a, 1.0, a),
            S::SkewSymmetric => residual(Op::T, a, -1.0, a),
            S::TEven => residual(Op::T, a, pm(k), a),
            S::TOdd => residual(Op::T, a, -pm(k), a),
            S::Hermitian => residual(Op::Star, a, 1.0, a),
            S::SkewHermitian => residual(Op::Star, a, -1.0, a),
            S::StarEven => residual(Op::Star, a, pm(k), a),
            S::StarOdd => residual(Op::Star, a, -pm(k), a),
            S::StarPalindromic => residual(Op::Star, a, 1.0, &g.poly()[d - k]),
            S::TPalindromic => residual(Op::T, a, 1.0, &g.poly()[d - k]),
        };
        res.push(CoefficientResidual {
            name: format!("A_{k}"),
            residual: r,
        });
    }

    for (j, t) in g.terms().iter().enumerate() {
        if tag == S::Unstructured {
            break;
        }
        let idx = j + 1;
        let e = &t.coeff;
        let needs_class = !matches!(tag, S::Symmetric | S::SkewSymmetric);
        let class = if needs_class {
            match classify_weight_with(&t.weight, d, tol) {
                Ok(c) => Some(c),
                Err(err) => {
                    viol.push(WeightViolation {
                        term: idx,
                        condition: err.to_string(),
                    });
                    None
                }
            }
        } else {
            None
        };
        let mut violation = |name: &str| {
            viol.push(WeightViolation {
                term: idx,
                condition: name.into(),
            })
        };
        // (operation, sign) with op(E) = sign·E required for the term.
        let target: Option<(Op, f64)> = match (tag, class) {
            (S::Symmetric, _) => Some((Op::T, 1.0)),
            (S::SkewSymmetric, _) => Some((Op::T, -1.0)),
            (_, None) => None,
            (S::TEven | S::TOdd, Some(c)) => {
                let odd_sign = if tag == S::TEven { -1.0 } else { 1.0 };
                match c.parity {
                    Parity::Even => Some((Op::T, -odd_sign)),
                    Parity::Odd => Some((Op::T, odd_sign)),
                    Parity::Neither => {
                        violation("weight is neither even nor odd");
                        None
                    }
                }
            }
            (S::Hermitian | S::SkewHermitian, Some(c)) => {
                let base = if tag == S::Hermitian { 1.0 } else { -1.0 };
                match c.conj {
                    ConjClass::Symmetric => Some((Op::Star, base)),
                    // w·E = (i w)(-i E): a conj-antisymmetric weight pairs with
                    // the opposite Hermitian class.
                    ConjClass::Antisymmetric => Some((Op::Star, -base)),
                    ConjClass::Neither => {
                        violation("weight is not conjugate-symmetric");
                        None
                    }
                }
            }
            (S::StarEven | S::StarOdd, Some(c)) => {
                let odd_sign = if tag == S::StarEven { -1.0 } else { 1.0 };
                match c.alt_conj {
                    AltConj::Even => Some((Op::Star, -odd_sign)),
                    AltConj::Odd => Some((Op::Star, odd_sign)),
                    AltConj::Neither => {
                        violation("weight has no alternating conjugate symmetry");
                        None
                    }
                }
            }
            (S::StarPalindromic, Some(c)) => {
                if !c.pal_star {
                    violation("weight is not *-palindromic");
                }
                Some((Op::Star, 1.0))
            }
            (S::TPalindromic, Some(c)) => {
                if !c.pal_t {
                    violation("weight is not T-palindromic");
                }
                Some((Op::T, 1.0))
            }
            (S::Unstructured, _) => unreachable!(),
        };
        if let Some((op, sign)) = target {
            res.push(CoefficientResidual {
                name: format!("E_{idx}"),
                residual: residual(op, e, sign, e),
            });
        }
    }

    let ok = viol.is_empty() && res.iter().all(|r| r.residual <= tol);
    StructureReport {
        tag,
        ok,
        matrix_residuals: res,
        weight_violations: viol,
    }
}

/// Every tag other than `Unstructured` that `g` satisfies.
pub fn detect_structures(g: &Rmf, tol: f64) -> Vec<StructureTag> {
    StructureTag::ALL
        .iter()
        .copied()
        .filter(|&t| t != StructureTag::Unstructured)
        .filter(|&t| validate_structure_with(g, t, tol).ok)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    /// `G(iz)`.
    RotateZ,
    /// `iG(z)`.
    ScaleI,
    /// `iG(iz)`.
    RotateAndScale,
}

pub fn transform_rmf(g: &Rmf, mode: Transform) -> Rmf {
    let rotate = matches!(mode, Transform::RotateZ | Transform::RotateAndScale);
    let factor = if matches!(mode, Transform::ScaleI | Transform::RotateAndScale) {
        I
    } else {
        C64::new(1.0, 0.0)
    };
    let mut pw = C64::new(1.0, 0.0);
    let poly = g
        .poly()
        .iter()
        .map(|a| {
            let out = a * (factor * pw);
            if rotate {
                pw *= I;
            }
            out
        })
        .collect();
    let terms = g
        .terms()
        .iter()
        .map(|t| RationalTerm {
            weight: if rotate {
                t.weight.compose_scale(I)
            } else {
                t.weight.clone()
            },
            coeff: &t.coeff * factor,
        })
        .collect();
    Rmf::new(poly, terms).expect("transform preserves shapes")
}

/// Rewrites every term whose weight is conjugate-antisymmetric as
/// `(i·w, -i·E)`, which leaves `G` unchanged pointwise.
pub fn hermitian_normal_form(g: &Rmf) -> Rmf {
    let d = g.degree();
    let terms = g
        .terms()
        .iter()
        .map(|t| match classify_weight(&t.weight, d) {
            Ok(c) if c.conj == ConjClass::Antisymmetric => RationalTerm {
                weight: t.weight.scaled(I),
                coeff: &t.coeff * (-I),
            },
            _ => t.clone(),
        })
        .collect();
    Rmf::new(g.poly().to_vec(), terms)
        .expect("shapes unchanged")
        .with_structure(g.structure())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{ONE, ZERO};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn reciprocal_is_odd_and_real() {
        let w = Weight::new(vec![ONE], vec![ZERO, ONE]).unwrap();
        let cl = classify_weight(&w, 1).unwrap();
        assert_eq!(cl.parity, Parity::Odd);
        assert_eq!(cl.conj, ConjClass::Symmetric);
    }

    #[test]
    fn shifted_pole_has_no_parity() {
        let w = Weight::new(vec![ZERO, ONE], vec![c(-1.0), ONE]).unwrap();
        let cl = classify_weight(&w, 2).unwrap();
        assert_eq!(cl.parity, Parity::Neither);
        assert_eq!(cl.conj, ConjClass::Symmetric);
    }

    #[test]
    fn linear_weight_is_t_palindromic_for_degree_one() {
        let w = Weight::polynomial(vec![ONE, ONE]).unwrap();
        assert!(classify_weight(&w, 1).unwrap().pal_t);
        assert!(!classify_weight(&w, 2).unwrap().pal_t);
    }

    #[test]
    fn imaginary_constant_classes() {
        let w = Weight::polynomial(vec![I]).unwrap();
        let cl = classify_weight(&w, 0).unwrap();
        assert_eq!(cl.parity, Parity::Even);
        assert_eq!(cl.conj, ConjClass::Antisymmetric);
        assert_eq!(cl.alt_conj, AltConj::Odd);
    }

    #[test]
    fn zero_weight_resolution() {
        let w = Weight::polynomial(vec![]).unwrap();
        let cl = classify_weight(&w, 3).unwrap();
        assert_eq!(cl.parity, Parity::Even);
        assert_eq!(cl.conj, ConjClass::Symmetric);
        assert_eq!(cl.alt_conj, AltConj::Even);
    }

    #[test]
    fn tag_parsing() {
        for t in StructureTag::ALL {
            assert_eq!(t.name().parse::<StructureTag>().unwrap(), t);
        }
        assert_eq!(
            "T_EVEN".parse::<StructureTag>().unwrap(),
            StructureTag::TEven
        );
        assert!("banana".parse::<StructureTag>().is_err());
    }

    #[test]
    fn identity_is_symmetric() {
        let g = Rmf::new(vec![CMat::identity(2, 2)], vec![]).unwrap();
        assert!(validate_structure(&g, StructureTag::Symmetric).ok);
    }

    #[test]
    fn symmetric_odd_coefficient_breaks_t_even() {
        let g = Rmf::new(vec![CMat::identity(2, 2), CMat::identity(2, 2)], vec![]).unwrap();
        let rep = validate_structure(&g, StructureTag::TEven);
        assert!(!rep.ok);
        assert!(rep.matrix_residuals[1].residual > 0.1);
        assert!(rep.matrix_residuals[0].residual == 0.0);
    }

    #[test]
    fn transforms() {
        let g = Rmf::new(vec![CMat::zeros(2, 2), CMat::identity(2, 2)], vec![]).unwrap();
        let r = transform_rmf(&g, Transform::RotateZ);
        assert_eq!(r.poly()[1], CMat::identity(2, 2) * I);

        let a0 = CMat::from_row_slice(1, 1, &[c(2.0)]);
        let h = Rmf::new(vec![a0.clone()], vec![]).unwrap();
        assert_eq!(transform_rmf(&h, Transform::ScaleI).poly()[0], a0 * I);

        let w = Weight::new(vec![ONE], vec![ZERO, ONE]).unwrap();
        let rw = w.compose_scale(I);
        let z = C64::new(0.3, 0.8);
        let expect = -I / z;
        assert!((rw.eval(z).unwrap() - expect).norm() < 1e-15);
    }
}
