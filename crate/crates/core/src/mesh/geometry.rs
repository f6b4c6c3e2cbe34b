//! Bilinear-map geometry of a single quadrilateral.
//!
//! A quadrilateral with vertices `Z_1..Z_4` (counterclockwise) is the image
//! of the reference square `[-1,1]^2` under the bilinear map
//!
//! ```text
//! x = a0 + a1 ξ + a2 η + a12 ξη
//! y = b0 + b1 ξ + b2 η + b12 ξη
//! ```
//!
//! Everything an element kernel needs — the Jacobian `J = J0 + J1 ξ + J2 η`,
//! its inverse matrix, and the shape metrics `h_K`, `ρ_K`, `d_K` — derives
//! from the eight map coefficients, so they are computed once per element
//! and carried around in [`ElementGeometry`].

use crate::error::{FemError, Result};

/// Coefficients of the bilinear reference-to-physical map plus shape metrics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementGeometry {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub a12: f64,
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub b12: f64,
    /// Jacobian coefficients: J(ξ,η) = j0 + j1·ξ + j2·η.
    pub j0: f64,
    pub j1: f64,
    pub j2: f64,
    /// Element diameter (max pairwise vertex distance).
    pub h_k: f64,
    /// Min over the four corner sub-triangles of the inscribed-circle diameter.
    pub rho_k: f64,
    /// Distance between the midpoints of the two diagonals; zero iff the
    /// element is a parallelogram.
    pub d_k: f64,
}

/// Shape-quality report for one element.
#[derive(Debug, Clone, Copy)]
pub struct ShapeDiagnostics {
    pub h_k: f64,
    pub rho_k: f64,
    pub aspect: f64,
    pub skew: f64,
    pub jacobian_ratio: f64,
}

fn dist(p: [f64; 2], q: [f64; 2]) -> f64 {
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
}

/// Inscribed-circle diameter of a triangle: 2·area / semi-perimeter.
fn incircle_diameter(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> f64 {
    let area2 = ((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])).abs();
    let per = dist(p, q) + dist(q, r) + dist(r, p);
    2.0 * area2 / per
}

impl ElementGeometry {
    /// Builds the geometry from four physical corners in counterclockwise
    /// order. Fails with `NonConvex` if the Jacobian is not strictly
    /// positive at all four reference corners (J is linear in ξ and η, so
    /// corner positivity is equivalent to positivity on the whole square).
    pub fn from_corners(corners: &[[f64; 2]; 4]) -> Result<Self> {
        let [z1, z2, z3, z4] = *corners;
        let a0 = 0.25 * (z1[0] + z2[0] + z3[0] + z4[0]);
        let a1 = 0.25 * (-z1[0] + z2[0] + z3[0] - z4[0]);
        let a2 = 0.25 * (-z1[0] - z2[0] + z3[0] + z4[0]);
        let a12 = 0.25 * (z1[0] - z2[0] + z3[0] - z4[0]);
        let b0 = 0.25 * (z1[1] + z2[1] + z3[1] + z4[1]);
        let b1 = 0.25 * (-z1[1] + z2[1] + z3[1] - z4[1]);
        let b2 = 0.25 * (-z1[1] - z2[1] + z3[1] + z4[1]);
        let b12 = 0.25 * (z1[1] - z2[1] + z3[1] - z4[1]);

        let j0 = a1 * b2 - a2 * b1;
        let j1 = a1 * b12 - a12 * b1;
        let j2 = a12 * b2 - a2 * b12;

        let jmin = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]
            .iter()
            .map(|&(xi, eta)| j0 + j1 * xi + j2 * eta)
            .fold(f64::INFINITY, f64::min);
        if jmin <= 0.0 {
            return Err(FemError::NonConvex { elem: usize::MAX, jmin });
        }
        // Node-order convention: the first edge runs along +x, the last up
        // +y. The stress modes divide by a1 and b2, so this is a type
        // invariant, not a style preference.
        if a1 <= 0.0 || b2 <= 0.0 {
            return Err(FemError::NodeOrderConvention { a1, b2 });
        }

        let mut h_k: f64 = 0.0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                h_k = h_k.max(dist(corners[i], corners[j]));
            }
        }
        // Corner sub-triangle T_i has vertices Z_{i-1}, Z_i, Z_{i+1} (mod 4).
        let mut rho_k = f64::INFINITY;
        for i in 0..4 {
            let t = incircle_diameter(corners[(i + 3) % 4], corners[i], corners[(i + 1) % 4]);
            rho_k = rho_k.min(t);
        }
        let d_k = 2.0 * (a12 * a12 + b12 * b12).sqrt();

        Ok(ElementGeometry {
            a0,
            a1,
            a2,
            a12,
            b0,
            b1,
            b2,
            b12,
            j0,
            j1,
            j2,
            h_k,
            rho_k,
            d_k,
        })
    }

    /// Physical image of a reference point.
    pub fn map(&self, xi: f64, eta: f64) -> [f64; 2] {
        [
            self.a0 + self.a1 * xi + self.a2 * eta + self.a12 * xi * eta,
            self.b0 + self.b1 * xi + self.b2 * eta + self.b12 * xi * eta,
        ]
    }

    /// Jacobian determinant at a reference point.
    pub fn jacobian(&self, xi: f64, eta: f64) -> f64 {
        self.j0 + self.j1 * xi + self.j2 * eta
    }

    /// Forward Jacobian matrix `[[x_ξ, x_η], [y_ξ, y_η]]`.
    pub fn jacobian_matrix(&self, xi: f64, eta: f64) -> [[f64; 2]; 2] {
        [
            [self.a1 + self.a12 * eta, self.a2 + self.a12 * xi],
            [self.b1 + self.b12 * eta, self.b2 + self.b12 * xi],
        ]
    }

    /// Jacobian determinant and the inverse-map derivative matrix
    /// `[[ξ_x, ξ_y], [η_x, η_y]]` at a reference point.
    pub fn jacobian_and_inverse(&self, xi: f64, eta: f64) -> Result<(f64, [[f64; 2]; 2])> {
        let j = self.jacobian(xi, eta);
        if j <= 0.0 {
            return Err(FemError::DegenerateJacobian { j, xi, eta });
        }
        let inv = [
            [(self.b2 + self.b12 * xi) / j, -(self.a2 + self.a12 * xi) / j],
            [-(self.b1 + self.b12 * eta) / j, (self.a1 + self.a12 * eta) / j],
        ];
        Ok((j, inv))
    }

    /// True iff the element is a parallelogram (affine map).
    pub fn is_parallelogram(&self) -> bool {
        self.a12 == 0.0 && self.b12 == 0.0
    }

    /// Element area: the ξ and η terms of J integrate to zero over the
    /// reference square, so the area is exactly 4·J0.
    pub fn area(&self) -> f64 {
        4.0 * self.j0
    }

    pub fn diagnostics(&self) -> ShapeDiagnostics {
        let corners = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];
        let (mut jmin, mut jmax) = (f64::INFINITY, f64::NEG_INFINITY);
        for &(xi, eta) in &corners {
            let j = self.jacobian(xi, eta);
            jmin = jmin.min(j);
            jmax = jmax.max(j);
        }
        ShapeDiagnostics {
            h_k: self.h_k,
            rho_k: self.rho_k,
            aspect: self.h_k / self.rho_k,
            skew: self.d_k / self.h_k,
            jacobian_ratio: jmax / jmin,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const REF_SQUARE: [[f64; 2]; 4] = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];

    #[test]
    fn reference_square_is_identity_map() {
        let g = ElementGeometry::from_corners(&REF_SQUARE).unwrap();
        assert_eq!(g.a1, 1.0);
        assert_eq!(g.b2, 1.0);
        for v in [g.a0, g.a2, g.a12, g.b0, g.b1, g.b12] {
            assert_eq!(v, 0.0);
        }
        assert_eq!(g.j0, 1.0);
        assert_eq!(g.j1, 0.0);
        assert_eq!(g.j2, 0.0);
        let (j, inv) = g.jacobian_and_inverse(0.3, -0.7).unwrap();
        assert_eq!(j, 1.0);
        assert_eq!(inv, [[1.0, 0.0], [0.0, 1.0]]);
    }

    #[test]
    fn parallelogram_is_affine() {
        let g = ElementGeometry::from_corners(&[[0.0, 0.0], [2.0, 1.0], [3.0, 3.0], [1.0, 2.0]])
            .unwrap();
        assert_eq!(g.a12, 0.0);
        assert_eq!(g.b12, 0.0);
        assert_eq!(g.j1, 0.0);
        assert_eq!(g.j2, 0.0);
        assert_eq!(g.d_k, 0.0);
    }

    #[test]
    fn trapezoid_map_interpolates_corners() {
        // First element of the irregular base mesh.
        let corners = [[0.0, -1.0], [1.0, -1.0], [2.0, 1.0], [0.0, 1.0]];
        let g = ElementGeometry::from_corners(&corners).unwrap();
        let refs = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];
        for (i, &(xi, eta)) in refs.iter().enumerate() {
            let p = g.map(xi, eta);
            assert!((p[0] - corners[i][0]).abs() < 1e-15);
            assert!((p[1] - corners[i][1]).abs() < 1e-15);
        }
        // Midpoint of the bottom edge.
        let m = g.map(0.0, -1.0);
        assert!((m[0] - 0.5).abs() < 1e-15);
        assert!((m[1] + 1.0).abs() < 1e-15);
        // Centroid of corner averages.
        let c = g.map(0.0, 0.0);
        assert_eq!(c, [g.a0, g.b0]);
    }

    #[test]
    fn scaled_square_jacobian() {
        let h = 0.25;
        let g = ElementGeometry::from_corners(&[[0.0, 0.0], [h, 0.0], [h, h], [0.0, h]]).unwrap();
        let (j, inv) = g.jacobian_and_inverse(0.1, 0.9).unwrap();
        assert!((j - h * h / 4.0).abs() < 1e-16);
        assert!((inv[0][0] - 2.0 / h).abs() < 1e-12);
        assert!((inv[1][1] - 2.0 / h).abs() < 1e-12);
        assert_eq!(inv[0][1], 0.0);
        assert_eq!(inv[1][0], 0.0);
        // h_K is the diagonal of the square.
        assert!((g.h_k - h * 2.0_f64.sqrt()).abs() < 1e-15);
        assert!((g.diagnostics().jacobian_ratio - 1.0).abs() < 1e-14);
    }

    #[test]
    fn inverse_is_inverse_of_forward() {
        // Random-ish convex quad; check DF · DF^{-1} = I pointwise.
        let g = ElementGeometry::from_corners(&[
            [0.12, -0.08],
            [1.05, 0.22],
            [0.91, 1.13],
            [-0.18, 0.87],
        ])
        .unwrap();
        for &(xi, eta) in &[(-0.9, -0.3), (0.0, 0.0), (0.7, 0.8), (-0.2, 0.95)] {
            let df = g.jacobian_matrix(xi, eta);
            let (_, inv) = g.jacobian_and_inverse(xi, eta).unwrap();
            // inv rows are (ξ_x, ξ_y; η_x, η_y): product df·? — compose as
            // [x_ξ ξ_x + x_η η_x, ...] which must be the identity.
            let p00 = df[0][0] * inv[0][0] + df[0][1] * inv[1][0];
            let p01 = df[0][0] * inv[0][1] + df[0][1] * inv[1][1];
            let p10 = df[1][0] * inv[0][0] + df[1][1] * inv[1][0];
            let p11 = df[1][0] * inv[0][1] + df[1][1] * inv[1][1];
            assert!((p00 - 1.0).abs() < 1e-14);
            assert!(p01.abs() < 1e-14);
            assert!(p10.abs() < 1e-14);
            assert!((p11 - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_nonconvex_and_clockwise() {
        // Clockwise square: negative Jacobian.
        let cw = [[-1.0, -1.0], [-1.0, 1.0], [1.0, 1.0], [1.0, -1.0]];
        assert!(matches!(
            ElementGeometry::from_corners(&cw),
            Err(FemError::NonConvex { .. })
        ));
        // Non-convex "arrowhead".
        let arrow = [[0.0, 0.0], [2.0, 0.0], [0.5, 0.5], [0.0, 2.0]];
        assert!(ElementGeometry::from_corners(&arrow).is_err());
    }
}
