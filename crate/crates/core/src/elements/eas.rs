//! Enhanced-strain twin elements.
//!
//! The hybrid elements have an equivalent enhanced-assumed-strain form:
//! take the unconstrained 9-parameter stress space (each component spanned
//! by {1, ξ, η}), couple it to the bilinear displacements and to the four
//! internal bubble modes, then condense first the stress and then the
//! bubbles. With the modified (center-frozen) bubble strain this reproduces
//! the PS stiffness; with the true bubble strain it reproduces ECQ4.

use super::kernels::{strain_displacement, KMatrix};
use super::quadrature::QuadratureRule;
use super::{Material, SymTensor2};
use crate::error::{FemError, Result};
use crate::mesh::ElementGeometry;
use nalgebra::{Cholesky, SMatrix};

/// Which derivative the bubble strain uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BubbleVariant {
    /// Center-frozen map coefficients over the pointwise Jacobian.
    Modified,
    /// True physical derivatives.
    Standard,
}

/// Strain of the two-direction bubble displacement, as a 3×4 matrix on the
/// parameters (u_ξ, u_η, v_ξ, v_η); rows are (ε11, ε22, 2ε12).
///
/// The bubble displacement is (u_ξ/2·(ξ²−1) + u_η/2·(η²−1)) per component,
/// so its reference gradient contributes (u_ξ·ξ, u_η·η).
pub fn bubble_strain(
    g: &ElementGeometry,
    xi: f64,
    eta: f64,
    variant: BubbleVariant,
) -> Result<SMatrix<f64, 3, 4>> {
    let j = g.jacobian(xi, eta);
    let (cx1, cx2, cy1, cy2) = match variant {
        BubbleVariant::Modified => (g.b2, g.b1, g.a2, g.a1),
        BubbleVariant::Standard => {
            if j <= 0.0 {
                return Err(FemError::DegenerateJacobian { j, xi, eta });
            }
            (g.b2 + g.b12 * xi, g.b1 + g.b12 * eta, g.a2 + g.a12 * xi, g.a1 + g.a12 * eta)
        }
    };
    // d/dx = (cx1 ∂ξ − cx2 ∂η)/J, d/dy = (−cy1 ∂ξ + cy2 ∂η)/J.
    let mut b = SMatrix::<f64, 3, 4>::zeros();
    b[(0, 0)] = cx1 * xi / j;
    b[(0, 1)] = -cx2 * eta / j;
    b[(1, 2)] = -cy1 * xi / j;
    b[(1, 3)] = cy2 * eta / j;
    b[(2, 0)] = -cy1 * xi / j;
    b[(2, 1)] = cy2 * eta / j;
    b[(2, 2)] = cx1 * xi / j;
    b[(2, 3)] = -cx2 * eta / j;
    Ok(b)
}

/// Unconstrained 9-parameter stress basis: rows (τ11, τ22, τ12), each
/// component spanning {1, ξ, η}.
fn stress_basis9(xi: f64, eta: f64) -> SMatrix<f64, 3, 9> {
    let mut p = SMatrix::<f64, 3, 9>::zeros();
    for c in 0..3 {
        p[(c, 3 * c)] = 1.0;
        p[(c, 3 * c + 1)] = xi;
        p[(c, 3 * c + 2)] = eta;
    }
    p
}

/// Cholesky of a small SPD matrix with an explicit pivot floor; rank
/// defects are reported, never regularized away.
fn chol4(a: &SMatrix<f64, 4, 4>) -> Result<SMatrix<f64, 4, 4>> {
    let tol = 1e-12 * a.trace();
    let mut l = SMatrix::<f64, 4, 4>::zeros();
    for i in 0..4 {
        for j in 0..=i {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            if i == j {
                if s <= tol {
                    return Err(FemError::SingularBubbleBlock { pivot: s });
                }
                l[(i, i)] = s.sqrt();
            } else {
                l[(i, j)] = s / l[(j, j)];
            }
        }
    }
    Ok(l)
}

fn solve_lower4(l: &SMatrix<f64, 4, 4>, rhs: &SMatrix<f64, 4, 8>) -> SMatrix<f64, 4, 8> {
    let mut x = *rhs;
    for col in 0..8 {
        for i in 0..4 {
            let mut s = x[(i, col)];
            for k in 0..i {
                s -= l[(i, k)] * x[(k, col)];
            }
            x[(i, col)] = s / l[(i, i)];
        }
        for i in (0..4).rev() {
            let mut s = x[(i, col)];
            for k in (i + 1)..4 {
                s -= l[(k, i)] * x[(k, col)];
            }
            x[(i, col)] = s / l[(i, i)];
        }
    }
    x
}

/// Enhanced-strain element stiffness: condense the 9 stress parameters,
/// then the 4 bubble parameters.
pub fn element_stiffness_eas(
    g: &ElementGeometry,
    m: &Material,
    variant: BubbleVariant,
) -> Result<KMatrix> {
    let rule = QuadratureRule::gauss(2);
    let mut h9 = SMatrix::<f64, 9, 9>::zeros();
    let mut gq = SMatrix::<f64, 9, 8>::zeros();
    let mut gb = SMatrix::<f64, 9, 4>::zeros();
    for &(xi, eta, w) in &rule.points {
        let p = stress_basis9(xi, eta);
        let wj = w * g.jacobian(xi, eta);
        let cols: [SymTensor2; 9] =
            std::array::from_fn(|c| SymTensor2::new(p[(0, c)], p[(1, c)], p[(2, c)]));
        let inv_cols: [SymTensor2; 9] = std::array::from_fn(|c| m.c_inv_apply(cols[c]));
        for i in 0..9 {
            for j in i..9 {
                let v = wj * cols[i].ddot(&inv_cols[j]);
                h9[(i, j)] += v;
                if i != j {
                    h9[(j, i)] += v;
                }
            }
        }
        let b = strain_displacement(g, xi, eta)?;
        gq += wj * p.transpose() * b;
        let bb = bubble_strain(g, xi, eta, variant)?;
        gb += wj * p.transpose() * bb;
    }

    let chol = Cholesky::new(h9).ok_or(FemError::SingularH)?;
    let hinv_gq = chol.solve(&gq);
    let hinv_gb = chol.solve(&gb);
    let k_qq = gq.transpose() * hinv_gq;
    let k_qb = gq.transpose() * hinv_gb;
    let k_bb = gb.transpose() * hinv_gb;

    let l = chol4(&k_bb)?;
    let kbb_inv_kqb_t = solve_lower4(&l, &k_qb.transpose());
    Ok(k_qq - k_qb * kbb_inv_kqb_t)
}
