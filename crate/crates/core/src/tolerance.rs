use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by the solver, the structure checks and the
/// condition-number predicates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative threshold on `|q(z)|` that declares `z` a pole.
    pub pole: f64,
    /// Relative distance to a denominator root below which a computed
    /// eigenvalue candidate is discarded as spurious.
    pub pole_proximity: f64,
    /// Relative per-coefficient residual accepted by structure validation.
    pub structure: f64,
    /// Relative residual `‖G(λ)x‖ / scale` required for a reported triplet.
    pub eig: f64,
    /// Residual target of the Newton refinement.
    pub refine: f64,
    /// Relative separation below which two eigenvalues are merged.
    pub dedup: f64,
    /// Relative threshold on `|y^* G'(λ) x|` for simplicity.
    pub simple: f64,
    /// Absolute threshold on scalar feasibility and orthogonality tests.
    pub feasibility: f64,
    /// Threshold on `|sin(angle)|` for membership in `πℤ`.
    pub angle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            pole: 1e-12,
            pole_proximity: 1e-6,
            structure: 1e-10,
            eig: 1e-8,
            refine: 1e-12,
            dedup: 1e-8,
            simple: 1e-10,
            feasibility: 1e-10,
            angle: 1e-10,
        }
    }
}
