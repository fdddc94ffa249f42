//! Structured mappings `Δv = u` and the ranges `M_S(x, y) = {y^*Δx : Δ ∈ S, ‖Δ‖ ≤ 1}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{complete_orthonormal, conj_vec, dot_star, dot_t, outer, outer_t, CMat, CVec};
use crate::poly::{C64, I, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapClass {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
    SkewHermitian,
}

/// `M_S(x, y) = { e^{iφ}(aα + i bβ) : α² + β² ≤ 1 }`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MSParams {
    pub a: f64,
    pub b: f64,
    pub phi: f64,
}

impl MSParams {
    pub const DISK: MSParams = MSParams {
        a: 1.0,
        b: 1.0,
        phi: 0.0,
    };

    /// Support function of `z · M_S` in direction `ψ`:
    /// `|z| sqrt(a² cos²θ + b² sin²θ)` with `θ = arg z + φ - ψ`.
    pub fn support(&self, z: C64, psi: f64) -> f64 {
        let r = z.norm();
        if r == 0.0 {
            return 0.0;
        }
        let th = z.arg() + self.phi - psi;
        let (s, c) = th.sin_cos();
        r * (self.a * self.a * c * c + self.b * self.b * s * s).sqrt()
    }

    /// Point of `M_S` attaining the support in direction `ψ` for the
    /// coefficient `z`; the returned value is the element of `M_S` itself.
    pub fn support_point(&self, z: C64, psi: f64) -> C64 {
        let th = if z.norm() == 0.0 {
            self.phi - psi
        } else {
            z.arg() + self.phi - psi
        };
        let (s, c) = th.sin_cos();
        let (ac, bs) = (self.a * c, -self.b * s);
        let h = (ac * ac + bs * bs).sqrt();
        let (al, be) = if h == 0.0 {
            (1.0, 0.0)
        } else {
            (ac / h, bs / h)
        };
        C64::from_polar(1.0, self.phi) * C64::new(self.a * al, self.b * be)
    }
}

fn unit(v: &CVec) -> CVec {
    let n = v.norm();
    if n == 0.0 {
        v.clone()
    } else {
        v / C64::from(n)
    }
}

/// `sqrt(1 - |x̂^*ŷ|²)` for the unit directions, computed as the norm of the
/// component of `ŷ` orthogonal to `x̂` so that nearly parallel vectors keep
/// full absolute accuracy.
pub fn sin_star(x: &CVec, y: &CVec) -> f64 {
    let (xh, yh) = (unit(x), unit(y));
    (&yh - &xh * dot_star(&xh, &yh)).norm().min(1.0)
}

/// `sqrt(1 - |x̂^Tŷ|²)`, the same construction against `x̄`.
pub fn sin_t(x: &CVec, y: &CVec) -> f64 {
    sin_star(&conj_vec(x), y)
}

pub fn ms_params(class: MapClass, x: &CVec, y: &CVec) -> MSParams {
    match class {
        MapClass::General | MapClass::Symmetric => MSParams::DISK,
        MapClass::Hermitian => {
            let p = dot_star(y, x);
            MSParams {
                a: 1.0,
                b: sin_star(x, y),
                phi: p.arg(),
            }
        }
        MapClass::SkewHermitian => {
            let p = dot_star(y, x);
            MSParams {
                a: sin_star(x, y),
                b: 1.0,
                phi: p.arg(),
            }
        }
        MapClass::SkewSymmetric => {
            let c = sin_t(x, y);
            MSParams {
                a: c,
                b: c,
                phi: 0.0,
            }
        }
    }
}

/// `c = sqrt(1 - |x^T y|²)`.
pub fn skew_factor(x: &CVec, y: &CVec) -> f64 {
    sin_t(x, y)
}

/// Householder-type Hermitian unitary `H` with `Hx = y` for unit `x`, `y`
/// with `x^*y` real.
fn hermitian_reflector(x: &CVec, y: &CVec) -> CMat {
    let n = x.len();
    let dm = (x - y).norm();
    let dp = (x + y).norm();
    if dm >= dp {
        let w = (x - y) / C64::from(dm);
        CMat::identity(n, n) - outer(&w, &w) * C64::from(2.0)
    } else {
        let w = (x + y) / C64::from(dp);
        outer(&w, &w) * C64::from(2.0) - CMat::identity(n, n)
    }
}

/// Complex symmetric unitary `S` with `Sx = y` for unit `x`, `y`.
///
/// `S = U U^T` where `U` is unitary with `U v = y`, `U v̄ = x̄`, and `v` is a
/// canonical vector with `v^T v = x^T y`.
fn symmetric_unitary(x: &CVec, y: &CVec) -> CMat {
    let n = x.len();
    if n == 1 {
        return CMat::from_element(1, 1, y[0] / x[0]);
    }
    let tau = dot_t(x, y);
    let th = tau.arg();
    let t = 0.5 * tau.norm().min(1.0).acos();
    let mut v = CVec::zeros(n);
    let ph = C64::from_polar(1.0, 0.5 * th);
    v[0] = ph * t.cos();
    v[1] = ph * I * t.sin();
    let p = complete_orthonormal(&[v.clone(), conj_vec(&v)], n);
    let q = complete_orthonormal(&[y.clone(), conj_vec(x)], n);
    let u = &q * p.adjoint();
    &u * u.transpose()
}

fn check_nonzero(v: &CVec) -> Result<f64> {
    let nv = v.norm();
    if nv == 0.0 {
        return Err(Error::BadParams("mapping source vector is zero".into()));
    }
    Ok(nv)
}

/// Structured `Δ` with `Δv = u` and `‖Δ‖ = ‖u‖/‖v‖`, the smallest possible
/// spectral norm. Feasibility is tested on `v̂^*û` / `v̂^Tû` for the unit
/// directions with absolute tolerance `tol`.
pub fn construct_structured_map(class: MapClass, v: &CVec, u: &CVec, tol: f64) -> Result<CMat> {
    if v.len() != u.len() {
        return Err(Error::DimensionMismatch("v and u differ in length".into()));
    }
    let nv = check_nonzero(v)?;
    let n = v.len();
    let nu = u.norm();
    let x = v / C64::from(nv);
    if class == MapClass::General {
        return Ok(outer(u, v) / C64::from(nv * nv));
    }
    if nu == 0.0 {
        return Ok(CMat::zeros(n, n));
    }
    let y = u / C64::from(nu);
    let scale = C64::from(nu / nv);
    let delta = match class {
        MapClass::General => unreachable!(),
        MapClass::Symmetric => symmetric_unitary(&x, &y),
        MapClass::SkewSymmetric => {
            let tt = dot_t(&x, &y);
            if tt.norm() > tol {
                return Err(Error::Infeasible(format!(
                    "skew-symmetric map needs v^T u = 0, got {tt}"
                )));
            }
            let xb = conj_vec(&x);
            outer_t(&y, &xb) - outer_t(&xb, &y)
        }
        MapClass::Hermitian => {
            let p = dot_star(&x, &y);
            if p.im.abs() > tol {
                return Err(Error::Infeasible(format!(
                    "Hermitian map needs v^* u real, got {p}"
                )));
            }
            hermitian_reflector(&x, &y)
        }
        MapClass::SkewHermitian => {
            let p = dot_star(&x, &y);
            if p.re.abs() > tol {
                return Err(Error::Infeasible(format!(
                    "skew-Hermitian map needs v^* u imaginary, got {p}"
                )));
            }
            hermitian_reflector(&x, &(&y * I)) * (-I)
        }
    };
    Ok(delta * scale)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoSidedMode {
    /// `Δv = u`, `Δ^*v = w`.
    Star,
    /// `Δv = u`, `Δ^Tv = w`.
    Transpose,
}

/// `Δ` with `Δv = u` and `Δ^*v = w` (star) or `Δ^Tv = w` (transpose).
pub fn construct_two_sided_map(
    mode: TwoSidedMode,
    v: &CVec,
    u: &CVec,
    w: &CVec,
    tol: f64,
) -> Result<CMat> {
    if v.len() != u.len() || v.len() != w.len() {
        return Err(Error::DimensionMismatch("v, u, w differ in length".into()));
    }
    let nv = check_nonzero(v)?;
    let (lhs, rhs) = match mode {
        TwoSidedMode::Star => (dot_star(v, u), dot_star(w, v)),
        TwoSidedMode::Transpose => (dot_t(v, u), dot_t(w, v)),
    };
    if (lhs - rhs).norm() > tol * (1.0 + nv * (u.norm() + w.norm())) {
        return Err(Error::Infeasible(format!(
            "compatibility fails: {lhs} vs {rhs} for the {mode:?} two-sided map"
        )));
    }
    let (vp, wp) = match mode {
        TwoSidedMode::Star => (v.clone(), w.clone()),
        TwoSidedMode::Transpose => (conj_vec(v), conj_vec(w)),
    };
    let n2 = nv * nv;
    let corr = dot_star(&vp, u);
    Ok(
        outer(u, v) / C64::from(n2) + outer(&vp, &wp) / C64::from(n2)
            - outer(&vp, v) * (corr / (n2 * n2)),
    )
}

fn hermitian_sign(k: &CMat) -> CMat {
    let n = k.nrows();
    let eig = k.clone().symmetric_eigen();
    let mut d = CMat::zeros(n, n);
    let cut = 1e-14 * eig.eigenvalues.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        d[(i, i)] = if l > cut {
            ONE
        } else if l < -cut {
            -ONE
        } else {
            ZERO
        };
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Unit-norm `Δ` in `class` maximizing `Re(e^{-iψ} y^*Δx)`; the maximum is
/// `ms_params(class, x, y).support(1, ψ)`.
pub fn support_map(class: MapClass, x: &CVec, y: &CVec, psi: f64) -> CMat {
    let n = x.len();
    let e = C64::from_polar(1.0, psi);
    match class {
        MapClass::General => outer(y, x) * e,
        MapClass::Symmetric => symmetric_unitary(x, y) * e,
        MapClass::SkewSymmetric => {
            let tau = dot_t(x, y);
            let xb = conj_vec(x);
            let u = y - &xb * tau;
            let c = u.norm();
            if c < 1e-14 {
                return CMat::zeros(n, n);
            }
            let u = u / C64::from(c);
            (outer_t(&u, &xb) - outer_t(&xb, &u)) * e
        }
        MapClass::Hermitian => {
            let m = outer(x, y) * e.conj();
            let k = (&m + m.adjoint()) * C64::from(0.5);
            hermitian_sign(&k)
        }
        MapClass::SkewHermitian => {
            let h = support_map(MapClass::Hermitian, x, y, psi - std::f64::consts::FRAC_PI_2);
            h * I
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{bilinear, random_unit_vector, spectral_norm};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn e(n: usize, k: usize) -> CVec {
        let mut v = CVec::zeros(n);
        v[k] = ONE;
        v
    }

    #[test]
    fn table_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random_unit_vector(&mut rng, 3);
        let p = ms_params(MapClass::Hermitian, &x, &x);
        assert!((p.a - 1.0).abs() < 1e-15 && p.b.abs() < 1e-7 && p.phi.abs() < 1e-15);
        let q = ms_params(MapClass::SkewSymmetric, &e(2, 0), &e(2, 1));
        assert_eq!((q.a, q.b, q.phi), (1.0, 1.0, 0.0));
        assert_eq!(ms_params(MapClass::General, &x, &e(3, 2)), MSParams::DISK);
    }

    #[test]
    fn rank_one_general_map() {
        let d = construct_structured_map(MapClass::General, &e(2, 0), &e(2, 1), 1e-10).unwrap();
        assert_eq!(d, outer(&e(2, 1), &e(2, 0)));
        assert!((spectral_norm(&d) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn skew_needs_orthogonality() {
        let r = construct_structured_map(MapClass::SkewSymmetric, &e(2, 0), &e(2, 0), 1e-10);
        assert!(matches!(r, Err(Error::Infeasible(_))));
    }

    #[test]
    fn structured_maps_hit_target_with_minimal_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let x = random_unit_vector(&mut rng, 4);
            let y = random_unit_vector(&mut rng, 4);
            let s = construct_structured_map(MapClass::Symmetric, &x, &y, 1e-10).unwrap();
            assert!((&s - s.transpose()).norm() < 1e-12);
            assert!((&s * &x - &y).norm() < 1e-10);
            assert!((spectral_norm(&s) - 1.0).abs() < 1e-8);

            let yh = {
                let p = dot_star(&x, &y);
                let fix = &x * C64::new(0.0, p.im);
                let v = &y - fix;
                &v / C64::from(v.norm())
            };
            let h = construct_structured_map(MapClass::Hermitian, &x, &yh, 1e-10).unwrap();
            assert!((&h - h.adjoint()).norm() < 1e-12);
            assert!((&h * &x - &yh).norm() < 1e-10);
            assert!((spectral_norm(&h) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn two_sided_examples() {
        let d =
            construct_two_sided_map(TwoSidedMode::Transpose, &e(2, 0), &e(2, 0), &e(2, 0), 1e-10)
                .unwrap();
        assert!((&d * e(2, 0) - e(2, 0)).norm() < 1e-15);
        let bad = construct_two_sided_map(TwoSidedMode::Star, &e(2, 0), &e(2, 1), &e(2, 0), 1e-10);
        assert!(matches!(bad, Err(Error::Infeasible(_))));
        let w = -e(2, 1);
        let s = construct_two_sided_map(TwoSidedMode::Transpose, &e(2, 0), &e(2, 1), &w, 1e-10)
            .unwrap();
        assert!((&s + s.transpose()).norm() < 1e-15);
        assert!((s.transpose() * e(2, 0) - w).norm() < 1e-15);
    }

    #[test]
    fn support_maps_attain_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let classes = [
            MapClass::General,
            MapClass::Symmetric,
            MapClass::SkewSymmetric,
            MapClass::Hermitian,
            MapClass::SkewHermitian,
        ];
        for _ in 0..20 {
            let x = random_unit_vector(&mut rng, 3);
            let y = random_unit_vector(&mut rng, 3);
            for class in classes {
                let p = ms_params(class, &x, &y);
                for k in 0..7 {
                    let psi = 0.9 * k as f64;
                    let d = support_map(class, &x, &y, psi);
                    assert!(spectral_norm(&d) <= 1.0 + 1e-12);
                    let val = (C64::from_polar(1.0, -psi) * bilinear(&y, &d, &x)).re;
                    assert!((val - p.support(ONE, psi)).abs() < 1e-10, "{class:?}");
                }
            }
        }
    }
}
