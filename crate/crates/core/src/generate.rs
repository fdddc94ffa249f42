//! Example and random problem generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{
    gaussian, gaussian_matrix, herm_part, real_gaussian_matrix, skew_herm_part, skew_part,
    sym_part, to_unit_norm, CMat,
};
use crate::poly::{C64, I, ONE, ZERO};
use crate::rmf::{RationalTerm, Rmf, Weight};
use crate::structure::{validate_structure, StructureTag};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn real(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// `Q diag(1..n) Q^T` with `Q` orthogonal from the QR factorization of a
/// real Gaussian matrix.
pub fn random_spd(rng: &mut impl Rng, n: usize) -> CMat {
    let g = real_gaussian_matrix(rng, n, n).map(|z| z.re);
    let q = g.qr().q();
    let d = nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |i, _| (i + 1) as f64));
    let s = &q * d * q.transpose();
    let s = (&s + s.transpose()) * 0.5;
    s.map(c)
}

/// `C C^T` with a real Gaussian `n × r` factor.
pub fn random_spsd(rng: &mut impl Rng, n: usize, r: usize) -> CMat {
    let f = real_gaussian_matrix(rng, n, r);
    let m = &f * f.transpose();
    sym_part(&m)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluidStructureParams {
    pub n: usize,
    pub seed: u64,
    /// Speed of sound.
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl Default for FluidStructureParams {
    fn default() -> Self {
        FluidStructureParams {
            n: 4,
            seed: 0,
            a: 1.0,
            alpha: 1.0,
            beta: 1.0,
        }
    }
}

/// `G(z) = (z²/a²) M + K + z²/(zβ + α) D` with `M`, `K` positive definite and
/// `D` positive semidefinite of rank `⌈n/2⌉`.
pub fn fluid_structure(p: FluidStructureParams) -> Result<Rmf> {
    if p.n == 0 {
        return Err(Error::BadParams("n must be positive".into()));
    }
    if !(p.a > 0.0 && p.alpha > 0.0 && p.beta > 0.0) {
        return Err(Error::BadParams(
            "a, alpha and beta must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let m = random_spd(&mut rng, p.n);
    let k = random_spd(&mut rng, p.n);
    let d = random_spsd(&mut rng, p.n, p.n.div_ceil(2));
    let weight = Weight::new(vec![ZERO, ZERO, ONE], vec![c(p.alpha), c(p.beta)])?;
    let poly = vec![k, CMat::zeros(p.n, p.n), m / c(p.a * p.a)];
    Ok(Rmf::new(poly, vec![RationalTerm { weight, coeff: d }])?
        .with_structure(Some(StructureTag::Symmetric)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct FluidSolidParams {
    pub n: usize,
    pub seed: u64,
    pub sigmas: Vec<f64>,
    pub ranks: Vec<usize>,
}

impl FluidSolidParams {
    /// `m` terms with poles `1, 2, …, m` and rank `min(2, n)` each.
    pub fn with_terms(n: usize, m: usize, seed: u64) -> Self {
        FluidSolidParams {
            n,
            seed,
            sigmas: (1..=m).map(|j| j as f64).collect(),
            ranks: vec![n.min(2); m],
        }
    }
}

/// `G(z) = A - zB + Σ_j z/(z - σ_j) C_j C_j^T` with `A`, `B` positive definite
/// and `C_j` real of rank `r_j`.
pub fn fluid_solid(p: &FluidSolidParams) -> Result<Rmf> {
    if p.n == 0 {
        return Err(Error::BadParams("n must be positive".into()));
    }
    if p.sigmas.len() != p.ranks.len() {
        return Err(Error::BadParams("one rank per pole is required".into()));
    }
    if p.sigmas.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Error::BadParams("poles sigma_j must be positive".into()));
    }
    if p.ranks.iter().any(|&r| r == 0 || r > p.n) {
        return Err(Error::BadParams(format!("ranks must lie in 1..={}", p.n)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let a = random_spd(&mut rng, p.n);
    let b = random_spd(&mut rng, p.n);
    let terms = p
        .sigmas
        .iter()
        .zip(&p.ranks)
        .map(|(&s, &r)| {
            Ok(RationalTerm {
                weight: Weight::new(vec![ZERO, ONE], vec![c(-s), ONE])?,
                coeff: random_spsd(&mut rng, p.n, r),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Rmf::new(vec![a, -b], terms)?.with_structure(Some(StructureTag::Symmetric)))
}

/// `G(z) = -2.5 + z + 1/z`, with eigenvalues `2` and `0.5` and a pole at `0`.
pub fn scalar_example() -> Rmf {
    let m = |v: f64| CMat::from_element(1, 1, c(v));
    let w = Weight::new(vec![ONE], vec![ZERO, ONE]).expect("nonzero denominator");
    Rmf::new(
        vec![m(-2.5), m(1.0)],
        vec![RationalTerm {
            weight: w,
            coeff: m(1.0),
        }],
    )
    .expect("1x1 shapes")
}

/// Random unstructured RMF: Gaussian complex coefficients and weights with
/// one random pole each.
pub fn loaded_random(n: usize, d: usize, m: usize, seed: u64) -> Result<Rmf> {
    if n == 0 {
        return Err(Error::BadParams("n must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let poly = (0..=d)
        .map(|_| to_unit_norm(gaussian_matrix(&mut rng, n, n)))
        .collect();
    let terms = (0..m)
        .map(|_| {
            let s = vec![gaussian(&mut rng), gaussian(&mut rng)];
            let q = vec![gaussian(&mut rng), ONE];
            Ok(RationalTerm {
                weight: Weight::new(s, q)?,
                coeff: to_unit_norm(gaussian_matrix(&mut rng, n, n)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Rmf::new(poly, terms)?.with_structure(Some(StructureTag::Unstructured)))
}

/// Random denominator `q0 + z^2` (or `q0 + z`) with `|q0|` in `[0.5, 2]`.
fn offset(rng: &mut impl Rng) -> f64 {
    let v: f64 = rng.random_range(0.5..2.0);
    if rng.random_bool(0.5) {
        v
    } else {
        -v
    }
}

/// Real weight `(s0 + s1 z)/(q0 + z)`.
fn real_weight(rng: &mut impl Rng) -> Weight {
    Weight::new(vec![c(real(rng)), c(real(rng))], vec![c(offset(rng)), ONE])
        .expect("nonzero denominator")
}

/// Random weight admissible for `tag`; both weight classes occur.
fn structured_weight(tag: StructureTag, d: usize, rng: &mut impl Rng) -> Weight {
    use StructureTag as S;
    let flip = rng.random_bool(0.5);
    match tag {
        S::Unstructured | S::Symmetric | S::SkewSymmetric => Weight::new(
            vec![gaussian(rng), gaussian(rng)],
            vec![gaussian(rng) + c(offset(rng)), ONE],
        )
        .expect("nonzero denominator"),
        S::TEven | S::TOdd => {
            let q = vec![gaussian(rng) * 0.3 + c(offset(rng)), ZERO, ONE];
            let s = if flip {
                vec![gaussian(rng), ZERO, gaussian(rng)]
            } else {
                vec![ZERO, gaussian(rng)]
            };
            Weight::new(s, q).expect("nonzero denominator")
        }
        S::Hermitian | S::SkewHermitian => {
            let w = real_weight(rng);
            if flip {
                w
            } else {
                w.scaled(I)
            }
        }
        S::StarEven | S::StarOdd => {
            let w = real_weight(rng).compose_scale(I);
            if flip {
                w
            } else {
                w.scaled(I)
            }
        }
        S::TPalindromic | S::StarPalindromic => {
            // Palindromic s of degree d + 2 over 1 + b z + z² with |b| > 2, so the
            // poles are real and off the unit circle.
            let b = offset(rng).signum() * rng.random_range(2.5..4.0);
            let e = d + 2;
            let mut s = vec![ZERO; e + 1];
            for k in 0..=e / 2 {
                let v = gaussian(rng);
                if tag == S::TPalindromic {
                    s[k] = v;
                    s[e - k] = v;
                } else if k == e - k {
                    s[k] = c(v.re);
                } else {
                    s[k] = v;
                    s[e - k] = v.conj();
                }
            }
            Weight::new(s, vec![ONE, c(b), ONE]).expect("nonzero denominator")
        }
    }
}

/// Symmetric/skew part (`t_op`) or Hermitian/skew-Hermitian part of `m`.
fn project_for(class_sign: f64, t_op: bool, m: CMat) -> CMat {
    match (t_op, class_sign > 0.0) {
        (true, true) => sym_part(&m),
        (true, false) => skew_part(&m),
        (false, true) => herm_part(&m),
        (false, false) => skew_herm_part(&m),
    }
}

/// Random instance of `tag` of size `n`, degree `d` and `m` rational terms,
/// built from Gaussian coefficients projected onto the required classes and
/// validated before it is returned.
pub fn random_structured(
    tag: StructureTag,
    n: usize,
    d: usize,
    m: usize,
    seed: u64,
) -> Result<Rmf> {
    use StructureTag as S;
    if n == 0 {
        return Err(Error::BadParams("n must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pm = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut poly = vec![CMat::zeros(n, n); d + 1];
    match tag {
        S::TPalindromic | S::StarPalindromic => {
            for k in 0..=d / 2 {
                let a = to_unit_norm(gaussian_matrix(&mut rng, n, n));
                if k == d - k {
                    poly[k] = if tag == S::TPalindromic {
                        sym_part(&a)
                    } else {
                        herm_part(&a)
                    };
                } else {
                    poly[d - k] = if tag == S::TPalindromic {
                        a.transpose()
                    } else {
                        a.adjoint()
                    };
                    poly[k] = a;
                }
            }
        }
        _ => {
            for (k, slot) in poly.iter_mut().enumerate() {
                let a = to_unit_norm(gaussian_matrix(&mut rng, n, n));
                *slot = match tag {
                    S::Unstructured => a,
                    S::Symmetric => project_for(1.0, true, a),
                    S::SkewSymmetric => project_for(-1.0, true, a),
                    S::TEven => project_for(pm(k), true, a),
                    S::TOdd => project_for(-pm(k), true, a),
                    S::Hermitian => project_for(1.0, false, a),
                    S::SkewHermitian => project_for(-1.0, false, a),
                    S::StarEven => project_for(pm(k), false, a),
                    S::StarOdd => project_for(-pm(k), false, a),
                    S::TPalindromic | S::StarPalindromic => unreachable!(),
                };
            }
        }
    }
    let mut terms = Vec::with_capacity(m);
    for _ in 0..m {
        let weight = structured_weight(tag, d, &mut rng);
        let e = to_unit_norm(gaussian_matrix(&mut rng, n, n));
        let cls = crate::structure::classify_weight(&weight, d)?;
        let coeff = match tag {
            S::Unstructured => e,
            S::Symmetric | S::TPalindromic => sym_part(&e),
            S::SkewSymmetric => skew_part(&e),
            S::StarPalindromic => herm_part(&e),
            S::TEven | S::TOdd => {
                let even = cls.parity == crate::structure::Parity::Even;
                project_for(if even == (tag == S::TEven) { 1.0 } else { -1.0 }, true, e)
            }
            S::Hermitian | S::SkewHermitian => {
                let sym = cls.conj == crate::structure::ConjClass::Symmetric;
                project_for(
                    if sym == (tag == S::Hermitian) {
                        1.0
                    } else {
                        -1.0
                    },
                    false,
                    e,
                )
            }
            S::StarEven | S::StarOdd => {
                let even = cls.alt_conj == crate::structure::AltConj::Even;
                project_for(
                    if even == (tag == S::StarEven) {
                        1.0
                    } else {
                        -1.0
                    },
                    false,
                    e,
                )
            }
        };
        terms.push(RationalTerm { weight, coeff });
    }
    let g = Rmf::new(poly, terms)?.with_structure(Some(tag));
    let report = validate_structure(&g, tag);
    if !report.ok {
        return Err(Error::StructureMismatch(format!(
            "generated instance fails {tag}: {report:?}"
        )));
    }
    Ok(g)
}
