//! Rational matrix functions `G(z) = Σ z^k A_k + Σ w_j(z) E_j`.

use crate::error::{Error, Result};
use crate::linalg::{bilinear, spectral_norm, CMat, CVec};
use crate::poly::{self, C64, ONE, ZERO};
use crate::structure::StructureTag;
use crate::tolerance::Tolerances;

/// Scalar rational weight `s(z)/q(z)`, coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Weight {
    s: Vec<C64>,
    q: Vec<C64>,
}

impl Weight {
    pub fn new(s: Vec<C64>, q: Vec<C64>) -> Result<Self> {
        if s.iter()
            .chain(q.iter())
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidWeight("non-finite coefficient".into()));
        }
        let q = poly::trim(q);
        if q.is_empty() {
            return Err(Error::InvalidWeight(
                "denominator is the zero polynomial".into(),
            ));
        }
        Ok(Weight {
            s: poly::trim(s),
            q,
        })
    }

    /// Polynomial weight `s(z)/1`.
    pub fn polynomial(s: Vec<C64>) -> Result<Self> {
        Weight::new(s, vec![ONE])
    }

    pub fn s(&self) -> &[C64] {
        &self.s
    }

    pub fn q(&self) -> &[C64] {
        &self.q
    }

    pub fn is_zero(&self) -> bool {
        self.s.is_empty()
    }

    /// `|q(z)|` at or below this value marks `z` as a pole.
    pub fn pole_threshold(&self, z: C64, tol: f64) -> f64 {
        let deg = self.q.len() as i32 - 1;
        tol * (1.0 + poly::max_abs(&self.q)) * (1.0 + z.norm()).powi(deg)
    }

    pub fn is_pole(&self, z: C64, tol: f64) -> bool {
        poly::horner(&self.q, z).norm() <= self.pole_threshold(z, tol)
    }

    pub fn eval_with(&self, z: C64, pole_tol: f64) -> Result<C64> {
        let qz = poly::horner(&self.q, z);
        if qz.norm() <= self.pole_threshold(z, pole_tol) {
            return Err(Error::Pole { z, term: None });
        }
        Ok(poly::horner(&self.s, z) / qz)
    }

    pub fn eval(&self, z: C64) -> Result<C64> {
        self.eval_with(z, Tolerances::default().pole)
    }

    pub fn derivative_with(&self, z: C64, pole_tol: f64) -> Result<C64> {
        let qz = poly::horner(&self.q, z);
        if qz.norm() <= self.pole_threshold(z, pole_tol) {
            return Err(Error::Pole { z, term: None });
        }
        let sz = poly::horner(&self.s, z);
        let ds = poly::horner(&poly::derivative(&self.s), z);
        let dq = poly::horner(&poly::derivative(&self.q), z);
        Ok((ds * qz - sz * dq) / (qz * qz))
    }

    pub fn derivative(&self, z: C64) -> Result<C64> {
        self.derivative_with(z, Tolerances::default().pole)
    }

    /// Roots of the denominator.
    pub fn poles(&self) -> Result<Vec<C64>> {
        poly::roots(&self.q)
    }

    /// `w(t z)`.
    pub fn compose_scale(&self, t: C64) -> Weight {
        Weight {
            s: poly::trim(poly::compose_scale(&self.s, t)),
            q: poly::trim(poly::compose_scale(&self.q, t)),
        }
    }

    /// `c · w(z)`.
    pub fn scaled(&self, c: C64) -> Weight {
        Weight {
            s: poly::trim(poly::scale(&self.s, c)),
            q: self.q.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RationalTerm {
    pub weight: Weight,
    pub coeff: CMat,
}

/// `G(z) = Σ_{k=0}^d z^k A_k + Σ_{j=1}^m w_j(z) E_j`.
#[derive(Clone, Debug)]
pub struct Rmf {
    n: usize,
    poly: Vec<CMat>,
    terms: Vec<RationalTerm>,
    structure: Option<StructureTag>,
    poly_norms: Vec<f64>,
    term_norms: Vec<f64>,
}

impl PartialEq for Rmf {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.poly == other.poly
            && self.terms == other.terms
            && self.structure == other.structure
    }
}

impl Rmf {
    pub fn new(poly: Vec<CMat>, terms: Vec<RationalTerm>) -> Result<Self> {
        let Some(first) = poly.first() else {
            return Err(Error::DimensionMismatch(
                "at least one polynomial coefficient is required".into(),
            ));
        };
        let n = first.nrows();
        if n == 0 {
            return Err(Error::DimensionMismatch(
                "dimension must be positive".into(),
            ));
        }
        for (k, a) in poly.iter().enumerate() {
            if a.nrows() != n || a.ncols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "A_{k} is {}x{}, expected {n}x{n}",
                    a.nrows(),
                    a.ncols()
                )));
            }
        }
        for (j, t) in terms.iter().enumerate() {
            if t.coeff.nrows() != n || t.coeff.ncols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "E_{} is {}x{}, expected {n}x{n}",
                    j + 1,
                    t.coeff.nrows(),
                    t.coeff.ncols()
                )));
            }
        }
        let poly_norms = poly.iter().map(spectral_norm).collect();
        let term_norms = terms.iter().map(|t| spectral_norm(&t.coeff)).collect();
        Ok(Rmf {
            n,
            poly,
            terms,
            structure: None,
            poly_norms,
            term_norms,
        })
    }

    pub fn with_structure(mut self, tag: Option<StructureTag>) -> Self {
        self.structure = tag;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn poly(&self) -> &[CMat] {
        &self.poly
    }

    pub fn terms(&self) -> &[RationalTerm] {
        &self.terms
    }

    pub fn structure(&self) -> Option<StructureTag> {
        self.structure
    }

    /// True when `d > 0` and the leading coefficient vanishes.
    pub fn is_degree_deficient(&self) -> bool {
        self.degree() > 0 && self.poly_norms[self.degree()] == 0.0
    }

    /// Largest spectral norm among all coefficients.
    pub fn coefficient_scale(&self) -> f64 {
        self.poly_norms
            .iter()
            .chain(self.term_norms.iter())
            .fold(0.0, |a, &b| a.max(b))
    }

    pub fn weights_at(&self, z: C64, pole_tol: f64) -> Result<Vec<C64>> {
        self.terms
            .iter()
            .enumerate()
            .map(|(j, t)| {
                t.weight.eval_with(z, pole_tol).map_err(|_| Error::Pole {
                    z,
                    term: Some(j + 1),
                })
            })
            .collect()
    }

    /// Magnitude scale `Σ |z|^k ‖A_k‖ + Σ |w_j(z)| ‖E_j‖` used for relative residuals.
    pub fn scale_at(&self, z: C64, pole_tol: f64) -> Result<f64> {
        let r = z.norm();
        let mut s = 0.0;
        let mut pw = 1.0;
        for nk in &self.poly_norms {
            s += pw * nk;
            pw *= r;
        }
        for (w, ne) in self.weights_at(z, pole_tol)?.iter().zip(&self.term_norms) {
            s += w.norm() * ne;
        }
        Ok(s)
    }

    pub fn eval_with(&self, z: C64, pole_tol: f64) -> Result<CMat> {
        let mut g = CMat::zeros(self.n, self.n);
        for a in self.poly.iter().rev() {
            g = g * z + a;
        }
        for (w, t) in self.weights_at(z, pole_tol)?.into_iter().zip(&self.terms) {
            g += &t.coeff * w;
        }
        Ok(g)
    }

    pub fn eval(&self, z: C64) -> Result<CMat> {
        self.eval_with(z, Tolerances::default().pole)
    }

    pub fn derivative_with(&self, z: C64, pole_tol: f64) -> Result<CMat> {
        let mut g = CMat::zeros(self.n, self.n);
        for (k, a) in self.poly.iter().enumerate().skip(1).rev() {
            g = g * z + a * C64::from(k as f64);
        }
        for (j, t) in self.terms.iter().enumerate() {
            let dw = t
                .weight
                .derivative_with(z, pole_tol)
                .map_err(|_| Error::Pole {
                    z,
                    term: Some(j + 1),
                })?;
            g += &t.coeff * dw;
        }
        Ok(g)
    }

    pub fn derivative(&self, z: C64) -> Result<CMat> {
        self.derivative_with(z, Tolerances::default().pole)
    }

    /// Roots of all denominators, term by term.
    pub fn poles(&self) -> Result<Vec<C64>> {
        let mut out = Vec::new();
        for t in &self.terms {
            out.extend(t.weight.poles()?);
        }
        Ok(out)
    }

    /// `G + ΔG`, keeping the weights.
    pub fn perturbed(&self, delta: &PerturbationTuple) -> Result<Rmf> {
        delta.check_shape(self)?;
        let poly = self
            .poly
            .iter()
            .zip(&delta.poly)
            .map(|(a, d)| a + d)
            .collect();
        let terms = self
            .terms
            .iter()
            .zip(&delta.terms)
            .map(|(t, d)| RationalTerm {
                weight: t.weight.clone(),
                coeff: &t.coeff + d,
            })
            .collect();
        Ok(Rmf::new(poly, terms)?.with_structure(self.structure))
    }

    /// Applies `f` to every coefficient matrix.
    pub fn map_coefficients(&self, mut f: impl FnMut(&CMat) -> CMat) -> Rmf {
        let poly = self.poly.iter().map(&mut f).collect();
        let terms = self
            .terms
            .iter()
            .map(|t| RationalTerm {
                weight: t.weight.clone(),
                coeff: f(&t.coeff),
            })
            .collect();
        Rmf::new(poly, terms)
            .expect("shape-preserving map")
            .with_structure(self.structure)
    }
}

/// `(Δ_{A_0}, …, Δ_{A_d}, Δ_{E_1}, …, Δ_{E_m})`, the perturbation of an [`Rmf`]
/// that keeps its weights. `epsilon` records the nominal size the tuple was
/// built with.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbationTuple {
    pub poly: Vec<CMat>,
    pub terms: Vec<CMat>,
    pub epsilon: f64,
}

impl PerturbationTuple {
    pub fn new(poly: Vec<CMat>, terms: Vec<CMat>) -> Self {
        let mut t = PerturbationTuple {
            poly,
            terms,
            epsilon: 0.0,
        };
        t.epsilon = t.norm_2inf();
        t
    }

    pub fn zeros_like(g: &Rmf) -> Self {
        let n = g.n();
        PerturbationTuple {
            poly: vec![CMat::zeros(n, n); g.degree() + 1],
            terms: vec![CMat::zeros(n, n); g.num_terms()],
            epsilon: 0.0,
        }
    }

    pub fn members(&self) -> impl Iterator<Item = &CMat> {
        self.poly.iter().chain(self.terms.iter())
    }

    /// `max(‖Δ_{A_k}‖, ‖Δ_{E_j}‖)`.
    pub fn norm_2inf(&self) -> f64 {
        self.members().map(spectral_norm).fold(0.0, f64::max)
    }

    pub fn scaled(&self, t: f64) -> Self {
        PerturbationTuple {
            poly: self.poly.iter().map(|m| m * C64::from(t)).collect(),
            terms: self.terms.iter().map(|m| m * C64::from(t)).collect(),
            epsilon: self.epsilon * t.abs(),
        }
    }

    pub fn check_shape(&self, g: &Rmf) -> Result<()> {
        if self.poly.len() != g.degree() + 1 || self.terms.len() != g.num_terms() {
            return Err(Error::DimensionMismatch(format!(
                "perturbation has {} + {} members, expected {} + {}",
                self.poly.len(),
                self.terms.len(),
                g.degree() + 1,
                g.num_terms()
            )));
        }
        let n = g.n();
        if self.members().any(|m| m.nrows() != n || m.ncols() != n) {
            return Err(Error::DimensionMismatch(format!(
                "perturbation members must be {n}x{n}"
            )));
        }
        Ok(())
    }

    /// `ΔG(z)` using the weights of `g`.
    pub fn eval(&self, g: &Rmf, z: C64) -> Result<CMat> {
        self.check_shape(g)?;
        let n = g.n();
        let mut out = CMat::zeros(n, n);
        for a in self.poly.iter().rev() {
            out = out * z + a;
        }
        for (w, d) in g
            .weights_at(z, Tolerances::default().pole)?
            .into_iter()
            .zip(&self.terms)
        {
            out += d * w;
        }
        Ok(out)
    }

    /// `y^* ΔG(λ) x`, assembled member by member.
    pub fn bilinear(&self, g: &Rmf, lambda: C64, x: &CVec, y: &CVec) -> Result<C64> {
        self.check_shape(g)?;
        let mut acc = ZERO;
        let mut pw = ONE;
        for a in &self.poly {
            acc += pw * bilinear(y, a, x);
            pw *= lambda;
        }
        for (w, d) in g
            .weights_at(lambda, Tolerances::default().pole)?
            .into_iter()
            .zip(&self.terms)
        {
            acc += w * bilinear(y, d, x);
        }
        Ok(acc)
    }
}
