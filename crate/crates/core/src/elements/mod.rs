//! Material law, stress modes, quadrature, and element-level kernels.
//!
//! All operations here are pure functions of immutable inputs and can be
//! evaluated concurrently across elements.

pub mod eas;
pub mod kernels;
pub mod modes;
pub mod quadrature;

pub use kernels::{strain_displacement, ElementMatrices};
pub use modes::stress_mode;
pub use quadrature::QuadratureRule;

use serde::{Deserialize, Serialize};

/// Plane-stress vs plane-strain reduction of the 3D law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MaterialKind {
    PlaneStress,
    PlaneStrain,
}

/// Isotropic linear-elastic material with the derived Lamé pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub young: f64,
    pub nu: f64,
    pub kind: MaterialKind,
    pub mu: f64,
    pub lambda: f64,
}

impl Material {
    /// `nu` must lie strictly in (0, 0.5); both Lamé moduli are then
    /// positive for either kind.
    pub fn new(young: f64, nu: f64, kind: MaterialKind) -> Self {
        assert!(young > 0.0, "Young's modulus must be positive");
        assert!(nu > 0.0 && nu < 0.5, "Poisson ratio must lie in (0, 0.5)");
        let mu = young / (2.0 * (1.0 + nu));
        let lambda = match kind {
            MaterialKind::PlaneStrain => young * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)),
            MaterialKind::PlaneStress => young * nu / ((1.0 + nu) * (1.0 - nu)),
        };
        Material { young, nu, kind, mu, lambda }
    }

    /// σ = C ε = 2μ ε + λ tr(ε) I.
    pub fn c_apply(&self, e: SymTensor2) -> SymTensor2 {
        let tr = self.lambda * e.trace();
        SymTensor2 {
            s11: 2.0 * self.mu * e.s11 + tr,
            s22: 2.0 * self.mu * e.s22 + tr,
            s12: 2.0 * self.mu * e.s12,
        }
    }

    /// ε = C⁻¹ σ = (1/2μ)(σ − λ/(2(μ+λ)) tr(σ) I).
    pub fn c_inv_apply(&self, s: SymTensor2) -> SymTensor2 {
        let c = self.lambda / (2.0 * (self.mu + self.lambda)) * s.trace();
        SymTensor2 {
            s11: (s.s11 - c) / (2.0 * self.mu),
            s22: (s.s22 - c) / (2.0 * self.mu),
            s12: s.s12 / (2.0 * self.mu),
        }
    }
}

/// Symmetric 2×2 tensor stored as the triple (s11, s22, s12).
///
/// The double contraction carries the factor 2 on the shear term; this is
/// the single place where that factor lives.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SymTensor2 {
    pub s11: f64,
    pub s22: f64,
    pub s12: f64,
}

impl SymTensor2 {
    pub fn new(s11: f64, s22: f64, s12: f64) -> Self {
        SymTensor2 { s11, s22, s12 }
    }

    pub fn trace(&self) -> f64 {
        self.s11 + self.s22
    }

    /// s : t = s11 t11 + s22 t22 + 2 s12 t12.
    pub fn ddot(&self, other: &SymTensor2) -> f64 {
        self.s11 * other.s11 + self.s22 * other.s22 + 2.0 * self.s12 * other.s12
    }

    pub fn norm_sq(&self) -> f64 {
        self.ddot(self)
    }

    /// Action on a direction: (σ n)_i = σ_ij n_j.
    pub fn dot_normal(&self, n: [f64; 2]) -> [f64; 2] {
        [
            self.s11 * n[0] + self.s12 * n[1],
            self.s12 * n[0] + self.s22 * n[1],
        ]
    }
}

impl std::ops::Sub for SymTensor2 {
    type Output = SymTensor2;
    fn sub(self, o: SymTensor2) -> SymTensor2 {
        SymTensor2::new(self.s11 - o.s11, self.s22 - o.s22, self.s12 - o.s12)
    }
}

/// The two assumed-stress modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StressMode {
    Ps,
    Ecq4,
}

/// Element formulations the solver can assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElementKind {
    Ps,
    Ecq4,
    Bilinear,
}

impl ElementKind {
    pub fn stress_mode(&self) -> Option<StressMode> {
        match self {
            ElementKind::Ps => Some(StressMode::Ps),
            ElementKind::Ecq4 => Some(StressMode::Ecq4),
            ElementKind::Bilinear => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ElementKind::Ps => "PS",
            ElementKind::Ecq4 => "ECQ4",
            ElementKind::Bilinear => "bilinear",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lame_pair_matches_definitions() {
        let m = Material::new(1500.0, 0.25, MaterialKind::PlaneStrain);
        assert!((m.mu - 600.0).abs() < 1e-12);
        assert!((m.lambda - 600.0).abs() < 1e-12);
        let m = Material::new(1500.0, 0.25, MaterialKind::PlaneStress);
        assert!((m.mu - 600.0).abs() < 1e-12);
        assert!((m.lambda - 400.0).abs() < 1e-12);
    }

    #[test]
    fn c_apply_basics() {
        let m = Material { young: 0.0, nu: 0.0, kind: MaterialKind::PlaneStrain, mu: 1.0, lambda: 1.0 };
        let zero = m.c_apply(SymTensor2::default());
        assert_eq!(zero, SymTensor2::default());
        // ε = I → σ = (2μ + 2λ) I.
        let s = m.c_apply(SymTensor2::new(1.0, 1.0, 0.0));
        assert_eq!(s, SymTensor2::new(4.0, 4.0, 0.0));
        // Pure shear stays traceless: σ = 2μ ε.
        let s = m.c_apply(SymTensor2::new(0.0, 0.0, 1.0));
        assert_eq!(s, SymTensor2::new(0.0, 0.0, 2.0));
    }

    #[test]
    fn c_inv_is_inverse() {
        let mats = [
            Material::new(1500.0, 0.25, MaterialKind::PlaneStress),
            Material::new(1500.0, 0.4999, MaterialKind::PlaneStrain),
        ];
        let samples = [
            SymTensor2::new(1.3, -0.4, 0.9),
            SymTensor2::new(-2.0, -2.0, 0.1),
            SymTensor2::new(0.0, 5.0, -3.3),
        ];
        for m in mats {
            // The λ-term cancellation costs accuracy near incompressibility.
            let tol = 1e-14 * (1.0 + m.lambda / m.mu);
            for e in samples {
                let back = m.c_inv_apply(m.c_apply(e));
                assert!((back.s11 - e.s11).abs() < tol * (1.0 + e.s11.abs()));
                assert!((back.s22 - e.s22).abs() < tol * (1.0 + e.s22.abs()));
                assert!((back.s12 - e.s12).abs() < tol * (1.0 + e.s12.abs()));
            }
        }
    }

    #[test]
    fn traceless_stress_inverts_to_scaled() {
        let m = Material { young: 0.0, nu: 0.0, kind: MaterialKind::PlaneStrain, mu: 2.0, lambda: 7.0 };
        let s = SymTensor2::new(1.0, -1.0, 0.0);
        let e = m.c_inv_apply(s);
        assert_eq!(e, SymTensor2::new(0.25, -0.25, 0.0));
    }

    #[test]
    fn incompressible_limit_is_deviatoric_projection() {
        // σ = I: ε = (1/2μ)(1 − λ/(μ+λ)) I → 0 as λ → ∞.
        let m = Material { young: 0.0, nu: 0.0, kind: MaterialKind::PlaneStrain, mu: 1.0, lambda: 1e12 };
        let e = m.c_inv_apply(SymTensor2::new(1.0, 1.0, 0.0));
        assert!(e.s11.abs() < 1e-11);
        assert!(e.s22.abs() < 1e-11);
    }
}
