//! The 5-parameter assumed-stress modes.
//!
//! Both modes share three constant columns; columns 4 and 5 carry the
//! geometry-weighted linear terms. The ECQ4 mode adds a perturbation to the
//! first three columns that vanishes on parallelograms (`a12 = b12 = 0`),
//! so the two modes coincide there.

use super::{StressMode, SymTensor2};
use crate::mesh::ElementGeometry;
use nalgebra::SMatrix;

pub type ModeMatrix = SMatrix<f64, 3, 5>;

/// Rows are (τ11, τ22, τ12); columns are the five stress parameters.
pub fn stress_mode(g: &ElementGeometry, mode: StressMode, xi: f64, eta: f64) -> ModeMatrix {
    let mut p = ModeMatrix::zeros();
    p[(0, 0)] = 1.0;
    p[(1, 1)] = 1.0;
    p[(2, 2)] = 1.0;
    p[(0, 3)] = eta;
    p[(1, 3)] = (g.b1 / g.a1) * (g.b1 / g.a1) * eta;
    p[(2, 3)] = (g.b1 / g.a1) * eta;
    p[(0, 4)] = (g.a2 / g.b2) * (g.a2 / g.b2) * xi;
    p[(1, 4)] = xi;
    p[(2, 4)] = (g.a2 / g.b2) * xi;
    if mode == StressMode::Ecq4 {
        p += perturbation(g, xi, eta);
    }
    p
}

/// The ECQ4-minus-PS perturbation matrix.
pub fn perturbation(g: &ElementGeometry, xi: f64, eta: f64) -> ModeMatrix {
    let mut d = ModeMatrix::zeros();
    d[(0, 0)] = -(g.b12 / g.b2) * xi;
    d[(0, 1)] = (g.a12 * g.a2 / (g.b2 * g.b2)) * xi;
    d[(0, 2)] = (g.j2 / (g.b2 * g.b2)) * xi;
    d[(1, 0)] = (g.b1 * g.b12 / (g.a1 * g.a1)) * eta;
    d[(1, 1)] = -(g.a12 / g.a1) * eta;
    d[(1, 2)] = (g.j1 / (g.a1 * g.a1)) * eta;
    d[(2, 0)] = (g.b12 / g.a1) * eta;
    d[(2, 1)] = (g.a12 / g.b2) * xi;
    d[(2, 2)] = -(g.b12 / g.b2) * xi - (g.a12 / g.a1) * eta;
    d
}

/// Constant reference-coordinate gradients (∂P/∂ξ, ∂P/∂η) of the mode
/// matrix; every entry of P is linear in ξ and η.
pub fn stress_mode_grad(g: &ElementGeometry, mode: StressMode) -> (ModeMatrix, ModeMatrix) {
    let p0 = stress_mode(g, mode, 0.0, 0.0);
    let dxi = stress_mode(g, mode, 1.0, 0.0) - p0;
    let deta = stress_mode(g, mode, 0.0, 1.0) - p0;
    (dxi, deta)
}

/// Stress tensor at a reference point from the 5 parameters.
pub fn eval_stress(g: &ElementGeometry, mode: StressMode, beta: &[f64; 5], xi: f64, eta: f64) -> SymTensor2 {
    let p = stress_mode(g, mode, xi, eta);
    let mut s = [0.0; 3];
    for r in 0..3 {
        for c in 0..5 {
            s[r] += p[(r, c)] * beta[c];
        }
    }
    SymTensor2::new(s[0], s[1], s[2])
}
