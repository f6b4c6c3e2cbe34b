//! Element-level matrices: the strain-displacement map, the hybrid
//! flexibility/coupling pair (H, G) with static condensation, and the
//! displacement-only bilinear stiffness.
//!
//! Quadrature orders are fixed: 2×2 Gauss for H and G (exact, since the
//! Jacobian cancellation leaves polynomial integrands of degree ≤ 3 per
//! variable) and 5×5 Gauss for the bilinear stiffness whose integrand keeps
//! a 1/J factor.
//!
//! Displacement DOF order is interleaved: (u1, v1, u2, v2, u3, v3, u4, v4).

use super::modes::stress_mode;
use super::quadrature::QuadratureRule;
use super::{Material, StressMode, SymTensor2};
use crate::error::{FemError, Result};
use crate::mesh::ElementGeometry;
use nalgebra::{Cholesky, Const, SMatrix, SVector};

pub type BMatrix = SMatrix<f64, 3, 8>;
pub type HMatrix = SMatrix<f64, 5, 5>;
pub type GMatrix = SMatrix<f64, 5, 8>;
pub type KMatrix = SMatrix<f64, 8, 8>;

/// Bilinear shape functions at a reference point, node order as in the mesh.
pub fn shape_functions(xi: f64, eta: f64) -> [f64; 4] {
    [
        0.25 * (1.0 - xi) * (1.0 - eta),
        0.25 * (1.0 + xi) * (1.0 - eta),
        0.25 * (1.0 + xi) * (1.0 + eta),
        0.25 * (1.0 - xi) * (1.0 + eta),
    ]
}

/// Reference gradients (∂N/∂ξ, ∂N/∂η) of the four shape functions.
pub fn shape_gradients(xi: f64, eta: f64) -> [[f64; 2]; 4] {
    [
        [-0.25 * (1.0 - eta), -0.25 * (1.0 - xi)],
        [0.25 * (1.0 - eta), -0.25 * (1.0 + xi)],
        [0.25 * (1.0 + eta), 0.25 * (1.0 + xi)],
        [-0.25 * (1.0 + eta), 0.25 * (1.0 - xi)],
    ]
}

/// Strain-displacement matrix B: rows (ε11, ε22, 2ε12), engineering shear,
/// so stress rows contract against it without extra factors.
pub fn strain_displacement(g: &ElementGeometry, xi: f64, eta: f64) -> Result<BMatrix> {
    let (_, inv) = g.jacobian_and_inverse(xi, eta)?;
    let grads = shape_gradients(xi, eta);
    let mut b = BMatrix::zeros();
    for i in 0..4 {
        let nx = inv[0][0] * grads[i][0] + inv[1][0] * grads[i][1];
        let ny = inv[0][1] * grads[i][0] + inv[1][1] * grads[i][1];
        b[(0, 2 * i)] = nx;
        b[(1, 2 * i + 1)] = ny;
        b[(2, 2 * i)] = ny;
        b[(2, 2 * i + 1)] = nx;
    }
    Ok(b)
}

/// Physical displacement gradient [[u_x, u_y], [v_x, v_y]] of the bilinear
/// interpolant with nodal values `u_e` at a reference point.
pub fn displacement_gradient(
    g: &ElementGeometry,
    u_e: &SVector<f64, 8>,
    xi: f64,
    eta: f64,
) -> Result<[[f64; 2]; 2]> {
    let (_, inv) = g.jacobian_and_inverse(xi, eta)?;
    let grads = shape_gradients(xi, eta);
    let mut out = [[0.0; 2]; 2];
    for i in 0..4 {
        let nx = inv[0][0] * grads[i][0] + inv[1][0] * grads[i][1];
        let ny = inv[0][1] * grads[i][0] + inv[1][1] * grads[i][1];
        out[0][0] += u_e[2 * i] * nx;
        out[0][1] += u_e[2 * i] * ny;
        out[1][0] += u_e[2 * i + 1] * nx;
        out[1][1] += u_e[2 * i + 1] * ny;
    }
    Ok(out)
}

/// Flexibility matrix H[i][j] = ∫ (P eᵢ) : C⁻¹ (P eⱼ) J dξ dη.
pub fn element_h(g: &ElementGeometry, m: &Material, mode: StressMode, rule: &QuadratureRule) -> HMatrix {
    let mut h = HMatrix::zeros();
    for &(xi, eta, w) in &rule.points {
        let p = stress_mode(g, mode, xi, eta);
        let wj = w * g.jacobian(xi, eta);
        let cols: [SymTensor2; 5] =
            std::array::from_fn(|c| SymTensor2::new(p[(0, c)], p[(1, c)], p[(2, c)]));
        let inv_cols: [SymTensor2; 5] = std::array::from_fn(|c| m.c_inv_apply(cols[c]));
        for i in 0..5 {
            for j in i..5 {
                let v = wj * cols[i].ddot(&inv_cols[j]);
                h[(i, j)] += v;
                if i != j {
                    h[(j, i)] += v;
                }
            }
        }
    }
    h
}

/// Coupling matrix G[i][j] = ∫ (P eᵢ) : (B eⱼ) J dξ dη, with B carrying the
/// engineering shear so the contraction is a plain dot product.
pub fn element_g(g: &ElementGeometry, mode: StressMode, rule: &QuadratureRule) -> Result<GMatrix> {
    let mut out = GMatrix::zeros();
    for &(xi, eta, w) in &rule.points {
        let p = stress_mode(g, mode, xi, eta);
        let b = strain_displacement(g, xi, eta)?;
        let wj = w * g.jacobian(xi, eta);
        out += wj * p.transpose() * b;
    }
    Ok(out)
}

/// Condensed element matrices of a hybrid element.
pub struct ElementMatrices {
    pub h: HMatrix,
    pub g: GMatrix,
    /// K = Gᵀ H⁻¹ G; symmetric positive semidefinite of rank 5.
    pub k: KMatrix,
    pub mode: StressMode,
    h_chol: Cholesky<f64, Const<5>>,
}

impl ElementMatrices {
    /// Stress parameters for given nodal displacements: β = H⁻¹ G u.
    pub fn recover_stress(&self, u_e: &SVector<f64, 8>) -> [f64; 5] {
        let beta = self.h_chol.solve(&(self.g * u_e));
        [beta[0], beta[1], beta[2], beta[3], beta[4]]
    }
}

/// Builds H and G with 2×2 Gauss and condenses the stress parameters.
pub fn element_stiffness_hybrid(
    g: &ElementGeometry,
    m: &Material,
    mode: StressMode,
) -> Result<ElementMatrices> {
    let rule = QuadratureRule::gauss(2);
    let h = element_h(g, m, mode, &rule);
    let coupling = element_g(g, mode, &rule)?;
    let h_chol = Cholesky::new(h).ok_or(FemError::SingularH)?;
    let hinv_g = h_chol.solve(&coupling);
    let k = coupling.transpose() * hinv_g;
    Ok(ElementMatrices { h, g: coupling, k, mode, h_chol })
}

/// Displacement stiffness of the isoparametric bilinear element,
/// K = ∫ Bᵀ C B J dξ dη with 5×5 Gauss.
pub fn element_stiffness_bilinear(g: &ElementGeometry, m: &Material) -> Result<KMatrix> {
    let rule = QuadratureRule::gauss(5);
    let mut k = KMatrix::zeros();
    let c = SMatrix::<f64, 3, 3>::new(
        2.0 * m.mu + m.lambda,
        m.lambda,
        0.0,
        m.lambda,
        2.0 * m.mu + m.lambda,
        0.0,
        0.0,
        0.0,
        m.mu,
    );
    for &(xi, eta, w) in &rule.points {
        let b = strain_displacement(g, xi, eta)?;
        let wj = w * g.jacobian(xi, eta);
        k += wj * b.transpose() * c * b;
    }
    Ok(k)
}

/// The three rigid-body nodal vectors of one element: two translations and
/// the linearized rotation (-y, x) sampled at the corners.
pub fn rigid_modes(corners: &[[f64; 2]; 4]) -> [SVector<f64, 8>; 3] {
    let mut tx = SVector::<f64, 8>::zeros();
    let mut ty = SVector::<f64, 8>::zeros();
    let mut rot = SVector::<f64, 8>::zeros();
    for i in 0..4 {
        tx[2 * i] = 1.0;
        ty[2 * i + 1] = 1.0;
        rot[2 * i] = -corners[i][1];
        rot[2 * i + 1] = corners[i][0];
    }
    [tx, ty, rot]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elements::MaterialKind;

    fn ref_square() -> ElementGeometry {
        ElementGeometry::from_corners(&[[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])
            .unwrap()
    }

    fn skew_quad() -> ElementGeometry {
        ElementGeometry::from_corners(&[[0.05, -0.1], [1.2, 0.15], [0.95, 1.1], [-0.15, 0.85]])
            .unwrap()
    }

    fn unit_material() -> Material {
        Material { young: 0.0, nu: 0.0, kind: MaterialKind::PlaneStrain, mu: 1.0, lambda: 0.0 }
    }

    fn nodal(corners: &[[f64; 2]; 4], f: impl Fn(f64, f64) -> [f64; 2]) -> SVector<f64, 8> {
        let mut q = SVector::<f64, 8>::zeros();
        for i in 0..4 {
            let v = f(corners[i][0], corners[i][1]);
            q[2 * i] = v[0];
            q[2 * i + 1] = v[1];
        }
        q
    }

    #[test]
    fn b_rows_on_reference_square_center() {
        let g = ref_square();
        let b = strain_displacement(&g, 0.0, 0.0).unwrap();
        let expect = [-0.25, 0.0, 0.25, 0.0, 0.25, 0.0, -0.25, 0.0];
        for (c, &e) in expect.iter().enumerate() {
            assert!((b[(0, c)] - e).abs() < 1e-15);
        }
    }

    #[test]
    fn b_annihilates_rigid_motions() {
        let corners = [[0.05, -0.1], [1.2, 0.15], [0.95, 1.1], [-0.15, 0.85]];
        let g = ElementGeometry::from_corners(&corners).unwrap();
        for q in rigid_modes(&corners) {
            for &(xi, eta) in &[(0.0, 0.0), (0.6, -0.8), (-0.3, 0.5)] {
                let s = strain_displacement(&g, xi, eta).unwrap() * q;
                assert!(s.norm() < 1e-14);
            }
        }
    }

    #[test]
    fn b_reproduces_linear_fields() {
        // u = x, v = 0 interpolated at the nodes gives ε = (1, 0, 0)
        // exactly at every point: bilinear shapes reproduce linears.
        let corners = [[0.3, -0.2], [1.4, 0.2], [1.1, 1.3], [-0.1, 0.9]];
        let g = ElementGeometry::from_corners(&corners).unwrap();
        let q = nodal(&corners, |x, _| [x, 0.0]);
        for &(xi, eta) in &[(0.9, 0.9), (-0.5, 0.2), (0.0, 0.0)] {
            let s = strain_displacement(&g, xi, eta).unwrap() * q;
            assert!((s[0] - 1.0).abs() < 1e-13);
            assert!(s[1].abs() < 1e-13);
            assert!(s[2].abs() < 1e-13);
        }
    }

    #[test]
    fn h_on_reference_square_is_diagonal() {
        // μ=1, λ=0: the a-form reduces to (1/2)(s11² + s22²) + s12²,
        // giving H = diag(2, 2, 4, 2/3, 2/3) on the reference square.
        let g = ref_square();
        let h = element_h(&g, &unit_material(), StressMode::Ps, &QuadratureRule::gauss(2));
        let expect = [2.0, 2.0, 4.0, 2.0 / 3.0, 2.0 / 3.0];
        for i in 0..5 {
            for j in 0..5 {
                let e = if i == j { expect[i] } else { 0.0 };
                assert!((h[(i, j)] - e).abs() < 1e-14, "H[{i}][{j}] = {}", h[(i, j)]);
            }
        }
    }

    #[test]
    fn h_gauss_2x2_matches_4x4() {
        let g = skew_quad();
        let m = Material::new(1500.0, 0.25, MaterialKind::PlaneStrain);
        for mode in [StressMode::Ps, StressMode::Ecq4] {
            let h2 = element_h(&g, &m, mode, &QuadratureRule::gauss(2));
            let h4 = element_h(&g, &m, mode, &QuadratureRule::gauss(4));
            assert!((h2 - h4).norm() / h4.norm() < 1e-13);
        }
    }

    #[test]
    fn h_is_spd() {
        let g = skew_quad();
        for lambda in [1.0, 1e6] {
            let m = Material { young: 0.0, nu: 0.0, kind: MaterialKind::PlaneStrain, mu: 1.0, lambda };
            for mode in [StressMode::Ps, StressMode::Ecq4] {
                let h = element_h(&g, &m, mode, &QuadratureRule::gauss(2));
                assert!((h - h.transpose()).norm() < 1e-14 * h.norm());
                assert!(Cholesky::new(h).is_some(), "H not SPD at λ={lambda}");
            }
        }
    }

    #[test]
    fn g_annihilates_rigid_motions() {
        let corners = [[0.05, -0.1], [1.2, 0.15], [0.95, 1.1], [-0.15, 0.85]];
        let g = ElementGeometry::from_corners(&corners).unwrap();
        let rule = QuadratureRule::gauss(2);
        for mode in [StressMode::Ps, StressMode::Ecq4] {
            let gm = element_g(&g, mode, &rule).unwrap();
            for q in rigid_modes(&corners) {
                assert!((gm * q).norm() < 1e-13 * gm.norm());
            }
        }
    }

    #[test]
    fn g_constant_row_integrates_strain() {
        // On the reference square the first stress basis column is the
        // constant (1,0,0); against u = x it yields the element area 4.
        let corners = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
        let g = ref_square();
        let gm = element_g(&g, StressMode::Ps, &QuadratureRule::gauss(2)).unwrap();
        let q = nodal(&corners, |x, _| [x, 0.0]);
        let v = gm * q;
        assert!((v[0] - 4.0).abs() < 1e-13);
    }

    #[test]
    fn condensed_stiffness_rank_and_kernel() {
        let corners = [[0.05, -0.1], [1.2, 0.15], [0.95, 1.1], [-0.15, 0.85]];
        let g = ElementGeometry::from_corners(&corners).unwrap();
        let m = Material::new(1500.0, 0.25, MaterialKind::PlaneStrain);
        for mode in [StressMode::Ps, StressMode::Ecq4] {
            let em = element_stiffness_hybrid(&g, &m, mode).unwrap();
            assert!((em.k - em.k.transpose()).norm() < 1e-12 * em.k.norm());
            let eig = em.k.symmetric_eigenvalues();
            let mut ev: Vec<f64> = eig.iter().copied().collect();
            ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let max = ev[7];
            assert!(ev[2] < 1e-10 * max, "more than 5 significant eigenvalues");
            assert!(ev[3] > 1e-8 * max, "rank below 5: {ev:?}");
        }
    }

    #[test]
    fn hybrid_equals_on_parallelograms() {
        let g = ElementGeometry::from_corners(&[[0.0, 0.0], [2.0, 0.3], [2.5, 1.8], [0.5, 1.5]])
            .unwrap();
        let m = Material::new(1500.0, 0.3, MaterialKind::PlaneStrain);
        let kps = element_stiffness_hybrid(&g, &m, StressMode::Ps).unwrap().k;
        let kec = element_stiffness_hybrid(&g, &m, StressMode::Ecq4).unwrap().k;
        assert!((kps - kec).norm() <= 1e-12 * kps.norm());
    }

    #[test]
    fn patch_test_recovers_constant_stress() {
        // u = ((x+y)/2, (x-y)/2): ε = (1/2, -1/2, 1/2 tensor shear),
        // traceless, so σ = 2μ ε = (μ, -μ, μ). The PS space contains the
        // constants on any quad; ECQ4 only on parallelograms.
        let skew = [[0.05, -0.1], [1.2, 0.15], [0.95, 1.1], [-0.15, 0.85]];
        let para = [[0.0, 0.0], [2.0, 0.3], [2.5, 1.8], [0.5, 1.5]];
        let m = Material::new(1500.0, 0.25, MaterialKind::PlaneStress);
        for (mode, corners) in [(StressMode::Ps, skew), (StressMode::Ps, para), (StressMode::Ecq4, para)] {
            let g = ElementGeometry::from_corners(&corners).unwrap();
            let q = nodal(&corners, |x, y| [0.5 * (x + y), 0.5 * (x - y)]);
            let em = element_stiffness_hybrid(&g, &m, mode).unwrap();
            let beta = em.recover_stress(&q);
            assert!((beta[0] - m.mu).abs() < 1e-12 * m.mu);
            assert!((beta[1] + m.mu).abs() < 1e-12 * m.mu);
            assert!((beta[2] - m.mu).abs() < 1e-12 * m.mu);
            assert!(beta[3].abs() < 1e-12 * m.mu);
            assert!(beta[4].abs() < 1e-12 * m.mu);
        }
    }

    #[test]
    fn ecq4_recovery_is_the_energy_projection() {
        // On a skewed quad the ECQ4 space misses the constants; the
        // recovered stress must still be the a-orthogonal projection of the
        // exact one: a(σ_h − σ, τ_i) = 0 for every mode basis column,
        // checked at 4×4 Gauss.
        let corners = [[0.05, -0.1], [1.2, 0.15], [0.95, 1.1], [-0.15, 0.85]];
        let g = ElementGeometry::from_corners(&corners).unwrap();
        let m = Material::new(1500.0, 0.25, MaterialKind::PlaneStress);
        let q = nodal(&corners, |x, y| [0.5 * (x + y), 0.5 * (x - y)]);
        let em = element_stiffness_hybrid(&g, &m, StressMode::Ecq4).unwrap();
        let beta = em.recover_stress(&q);
        let exact = SymTensor2::new(m.mu, -m.mu, m.mu);
        let rule = QuadratureRule::gauss(4);
        let mut residual = [0.0; 5];
        for &(xi, eta, w) in &rule.points {
            let p = stress_mode(&g, StressMode::Ecq4, xi, eta);
            let mut s_h = SymTensor2::default();
            for c in 0..5 {
                s_h.s11 += p[(0, c)] * beta[c];
                s_h.s22 += p[(1, c)] * beta[c];
                s_h.s12 += p[(2, c)] * beta[c];
            }
            let diff = m.c_inv_apply(s_h - exact);
            let wj = w * g.jacobian(xi, eta);
            for (c, r) in residual.iter_mut().enumerate() {
                let tau = SymTensor2::new(p[(0, c)], p[(1, c)], p[(2, c)]);
                *r += wj * tau.ddot(&diff);
            }
        }
        for r in residual {
            assert!(r.abs() < 1e-12, "projection residual {r}");
        }
    }

    #[test]
    fn recover_stress_of_rigid_motion_is_zero() {
        let corners = [[0.05, -0.1], [1.2, 0.15], [0.95, 1.1], [-0.15, 0.85]];
        let g = ElementGeometry::from_corners(&corners).unwrap();
        let m = Material::new(1500.0, 0.25, MaterialKind::PlaneStrain);
        let em = element_stiffness_hybrid(&g, &m, StressMode::Ps).unwrap();
        for q in rigid_modes(&corners) {
            let beta = em.recover_stress(&q);
            assert!(beta.iter().all(|b| b.abs() < 1e-11 * m.young));
        }
    }

    #[test]
    fn bilinear_stiffness_basics() {
        let g = ElementGeometry::from_corners(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
            .unwrap();
        let m = Material { young: 0.0, nu: 0.0, kind: MaterialKind::PlaneStrain, mu: 1.0, lambda: 1.0 };
        let k = element_stiffness_bilinear(&g, &m).unwrap();
        assert!((k - k.transpose()).norm() < 1e-13 * k.norm());
        // Translations are in the kernel: zero row sums over u-dofs.
        let corners = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        for q in rigid_modes(&corners) {
            assert!((k * q).norm() < 1e-13 * k.norm());
        }
    }

    #[test]
    fn bilinear_gauss_5x5_matches_8x8_on_rectangles() {
        let g = ElementGeometry::from_corners(&[[0.0, 0.0], [2.0, 0.0], [2.0, 1.0], [0.0, 1.0]])
            .unwrap();
        let m = Material::new(1500.0, 0.25, MaterialKind::PlaneStrain);
        let k5 = element_stiffness_bilinear(&g, &m).unwrap();
        let mut k8 = KMatrix::zeros();
        let c = SMatrix::<f64, 3, 3>::new(
            2.0 * m.mu + m.lambda, m.lambda, 0.0,
            m.lambda, 2.0 * m.mu + m.lambda, 0.0,
            0.0, 0.0, m.mu,
        );
        for &(xi, eta, w) in &QuadratureRule::gauss(8).points {
            let b = strain_displacement(&g, xi, eta).unwrap();
            k8 += w * g.jacobian(xi, eta) * b.transpose() * c * b;
        }
        assert!((k5 - k8).norm() < 1e-12 * k8.norm());
    }

    #[test]
    fn bilinear_stiffer_than_hybrid_in_bending() {
        // The bending mode u = (-xy-ish) on a square picks up parasitic
        // shear in the displacement element.
        let corners = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
        let g = ElementGeometry::from_corners(&corners).unwrap();
        let m = Material::new(1500.0, 0.25, MaterialKind::PlaneStrain);
        let q = nodal(&corners, |x, y| [-x * y, 0.0]);
        let kb = element_stiffness_bilinear(&g, &m).unwrap();
        let kh = element_stiffness_hybrid(&g, &m, StressMode::Ps).unwrap().k;
        let eb = (q.transpose() * kb * q)[0];
        let eh = (q.transpose() * kh * q)[0];
        assert!(eb > eh, "bilinear bending energy {eb} should exceed hybrid {eh}");
    }
}
