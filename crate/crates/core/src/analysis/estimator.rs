//! Residual a posteriori error estimator.
//!
//! ```text
//! η² = Σ_K ‖h_K (f + div σ_h)‖²_K  +  ‖C⁻¹σ_h − ε(u_h)‖²_Ω
//!      + Σ_E h_E ‖[σ_h n_E]‖²_E
//! ```
//!
//! The jump sum runs over interior and Neumann edges; on a Neumann edge the
//! jump means σ_h n − g. Dirichlet edges do not contribute. Interior jumps
//! are evaluated at shared physical points by parameterizing each adjacent
//! element's reference edge by the common endpoint nodes, which avoids
//! inverting the bilinear map.

use crate::elements::modes::stress_mode_grad;
use crate::elements::quadrature::{gauss_1d, QuadratureRule};
use crate::elements::{StressMode, SymTensor2};
use crate::error::{FemError, Result};
use crate::mesh::{BoundaryLabel, ElementGeometry, QuadMesh};
use crate::solver::{ProblemSpec, Solution};
use serde::Serialize;

/// The three squared terms of η² and per-element localization.
#[derive(Debug, Clone, Serialize)]
pub struct EstimatorBreakdown {
    pub volume_sq: f64,
    pub constitutive_sq: f64,
    pub jump_sq: f64,
    pub eta: f64,
    /// Local contribution per element: its volume and constitutive terms
    /// plus half of each adjacent interior-edge jump (boundary jumps count
    /// fully toward the single owner).
    pub per_element: Vec<f64>,
}

/// Physical divergence of a mode stress field: the reference gradient of
/// the mode matrix is constant, so div σ at a point needs only the inverse
/// Jacobian there.
pub fn div_stress(
    g: &ElementGeometry,
    mode: StressMode,
    beta: &[f64; 5],
    xi: f64,
    eta: f64,
) -> Result<[f64; 2]> {
    let (_, inv) = g.jacobian_and_inverse(xi, eta)?;
    let (pxi, peta) = stress_mode_grad(g, mode);
    let mut dxi = [0.0; 3];
    let mut deta = [0.0; 3];
    for r in 0..3 {
        for c in 0..5 {
            dxi[r] += pxi[(r, c)] * beta[c];
            deta[r] += peta[(r, c)] * beta[c];
        }
    }
    // d/dx = ξ_x d/dξ + η_x d/dη and likewise for y.
    let dd = |r: usize, col: usize| dxi[r] * inv[0][col] + deta[r] * inv[1][col];
    Ok([dd(0, 0) + dd(2, 1), dd(2, 0) + dd(1, 1)])
}

/// Divergence of σ_h = C ε(u_h) for the bilinear element. The strain is
/// rational (numerator bilinear over J), so the derivative uses the product
/// rule in reference coordinates.
fn div_stress_bilinear(
    sol: &Solution,
    g: &ElementGeometry,
    elem: usize,
    xi: f64,
    eta: f64,
) -> Result<[f64; 2]> {
    let q = sol.element_displacements(elem);
    let j = g.jacobian(xi, eta);
    if j <= 0.0 {
        return Err(FemError::DegenerateJacobian { j, xi, eta });
    }
    let (_, inv) = g.jacobian_and_inverse(xi, eta)?;

    // Shape data: N_ξ depends only on η, N_η only on ξ, and the mixed
    // second derivative is the constant ±1/4.
    let signs = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];
    // Strain numerator vector (J·ε, engineering shear) and its reference
    // gradients, accumulated over nodes.
    let mut eps = [0.0; 3];
    let mut deps_dxi = [0.0; 3];
    let mut deps_deta = [0.0; 3];
    for i in 0..4 {
        let (sx, sy) = signs[i];
        let n_xi = 0.25 * sx * (1.0 + sy * eta);
        let n_eta = 0.25 * sy * (1.0 + sx * xi);
        let n_xieta = 0.25 * sx * sy;
        // numerators of N_x and N_y and their ξ/η derivatives
        let cx1 = g.b2 + g.b12 * xi;
        let cx2 = g.b1 + g.b12 * eta;
        let cy1 = g.a2 + g.a12 * xi;
        let cy2 = g.a1 + g.a12 * eta;
        let nx = cx1 * n_xi - cx2 * n_eta;
        let ny = -cy1 * n_xi + cy2 * n_eta;
        let dnx_dxi = g.b12 * n_xi - cx2 * n_xieta;
        let dnx_deta = cx1 * n_xieta - g.b12 * n_eta;
        let dny_dxi = -g.a12 * n_xi + cy2 * n_xieta;
        let dny_deta = -cy1 * n_xieta + g.a12 * n_eta;

        let (u, v) = (q[2 * i], q[2 * i + 1]);
        eps[0] += u * nx;
        eps[1] += v * ny;
        eps[2] += u * ny + v * nx;
        deps_dxi[0] += u * dnx_dxi;
        deps_dxi[1] += v * dny_dxi;
        deps_dxi[2] += u * dny_dxi + v * dnx_dxi;
        deps_deta[0] += u * dnx_deta;
        deps_deta[1] += v * dny_deta;
        deps_deta[2] += u * dny_deta + v * dnx_deta;
    }
    // ε = num/J ⇒ ∂ξ ε = (∂ξ num · J − num · J1)/J².
    let m = &sol.material;
    let to_stress = |e: [f64; 3]| {
        [
            (2.0 * m.mu + m.lambda) * e[0] + m.lambda * e[1],
            m.lambda * e[0] + (2.0 * m.mu + m.lambda) * e[1],
            m.mu * e[2],
        ]
    };
    let num = to_stress(eps);
    let dnum_dxi = to_stress(deps_dxi);
    let dnum_deta = to_stress(deps_deta);
    let mut dsig_dxi = [0.0; 3];
    let mut dsig_deta = [0.0; 3];
    for r in 0..3 {
        dsig_dxi[r] = (dnum_dxi[r] * j - num[r] * g.j1) / (j * j);
        dsig_deta[r] = (dnum_deta[r] * j - num[r] * g.j2) / (j * j);
    }
    let dd = |r: usize, col: usize| dsig_dxi[r] * inv[0][col] + dsig_deta[r] * inv[1][col];
    Ok([dd(0, 0) + dd(2, 1), dd(2, 0) + dd(1, 1)])
}

fn divergence(sol: &Solution, g: &ElementGeometry, elem: usize, xi: f64, eta: f64) -> Result<[f64; 2]> {
    match sol.stress.mode {
        Some(mode) => div_stress(g, mode, &sol.stress.beta[elem], xi, eta),
        None => div_stress_bilinear(sol, g, elem, xi, eta),
    }
}

/// Reference coordinates of the point at edge parameter `t ∈ [-1,1]`
/// (running from node `a` to node `b`) seen from element `elem`.
fn edge_ref_point(mesh: &QuadMesh, elem: usize, a: usize, b: usize, t: f64) -> (f64, f64) {
    const REFS: [(f64, f64); 4] = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];
    let (k, sign) = mesh
        .local_edge(elem, a, b)
        .expect("edge endpoints not found on adjacent element");
    let (p, q) = (REFS[k], REFS[(k + 1) % 4]);
    let (start, end) = if sign > 0 { (p, q) } else { (q, p) };
    let s = 0.5 * (1.0 + t);
    (
        start.0 + s * (end.0 - start.0),
        start.1 + s * (end.1 - start.1),
    )
}

/// Assembles the estimator: volume and constitutive terms by 4×4 Gauss per
/// element, edge jumps by 4-point Gauss per edge.
pub fn estimator(sol: &Solution, spec: &ProblemSpec) -> Result<EstimatorBreakdown> {
    let mesh = &sol.mesh;
    if mesh.edges.is_empty() {
        return Err(FemError::TopologyMissing);
    }
    let n_elems = mesh.elements.len();
    let mut per_element = vec![0.0; n_elems];
    let rule = QuadratureRule::gauss(4);

    let mut volume_sq = 0.0;
    let mut constitutive_sq = 0.0;
    let geoms: Vec<ElementGeometry> = (0..n_elems)
        .map(|e| mesh.geometry(e))
        .collect::<Result<_>>()?;
    for e in 0..n_elems {
        let g = &geoms[e];
        let mut vol = 0.0;
        let mut cons = 0.0;
        for &(xi, eta, w) in &rule.points {
            let wj = w * g.jacobian(xi, eta);
            let [x, y] = g.map(xi, eta);
            let f = (spec.body_force)(x, y);
            let div = divergence(sol, g, e, xi, eta)?;
            vol += wj * ((f[0] + div[0]).powi(2) + (f[1] + div[1]).powi(2));

            let s_h = sol.stress_at(g, e, xi, eta)?;
            let gr = sol.grad_at(g, e, xi, eta)?;
            let eps_h = SymTensor2::new(gr[0][0], gr[1][1], 0.5 * (gr[0][1] + gr[1][0]));
            let cres = sol.material.c_inv_apply(s_h) - eps_h;
            cons += wj * cres.norm_sq();
        }
        vol *= g.h_k * g.h_k;
        volume_sq += vol;
        constitutive_sq += cons;
        per_element[e] += vol + cons;
    }

    let mut jump_sq = 0.0;
    let edge_rule = gauss_1d(4);
    for edge in &mesh.edges {
        if edge.label == BoundaryLabel::Dirichlet {
            continue;
        }
        let (a, b) = (edge.nodes[0], edge.nodes[1]);
        let pa = [mesh.nodes[a].x, mesh.nodes[a].y];
        let pb = [mesh.nodes[b].x, mesh.nodes[b].y];
        // Outward normal of the left element (edge ordered along its CCW
        // boundary).
        let n = [
            (pb[1] - pa[1]) / edge.h_e,
            -(pb[0] - pa[0]) / edge.h_e,
        ];
        let mut acc = 0.0;
        for &(t, w) in &edge_rule {
            let (xl, el) = edge_ref_point(mesh, edge.left_elem, a, b, t);
            let s_left = sol.stress_at(&geoms[edge.left_elem], edge.left_elem, xl, el)?;
            let jv = match (edge.right_elem, edge.label) {
                (Some(right), _) => {
                    let (xr, er) = edge_ref_point(mesh, right, a, b, t);
                    let s_right = sol.stress_at(&geoms[right], right, xr, er)?;
                    (s_left - s_right).dot_normal(n)
                }
                (None, BoundaryLabel::Neumann(tag)) => {
                    let s = 0.5 * (1.0 + t);
                    let x = pa[0] + s * (pb[0] - pa[0]);
                    let y = pa[1] + s * (pb[1] - pa[1]);
                    let gv = (spec.traction)(x, y, tag);
                    let sn = s_left.dot_normal(n);
                    [sn[0] - gv[0], sn[1] - gv[1]]
                }
                (None, _) => unreachable!("dirichlet edges are skipped"),
            };
            acc += w * 0.5 * edge.h_e * (jv[0] * jv[0] + jv[1] * jv[1]);
        }
        let contrib = edge.h_e * acc;
        jump_sq += contrib;
        match edge.right_elem {
            Some(right) => {
                per_element[edge.left_elem] += 0.5 * contrib;
                per_element[right] += 0.5 * contrib;
            }
            None => per_element[edge.left_elem] += contrib,
        }
    }

    Ok(EstimatorBreakdown {
        volume_sq,
        constitutive_sq,
        jump_sq,
        eta: (volume_sq + constitutive_sq + jump_sq).sqrt(),
        per_element,
    })
}

/// Ingredients of the efficiency bound: the f-independent part of η² on the
/// left, and the data-oscillation term with elementwise integral means on
/// the right.
#[derive(Debug, Clone, Serialize)]
pub struct EfficiencyTerms {
    /// volume² + jump².
    pub lhs_sq: f64,
    /// Σ_K ‖h_K (f − f_K)‖² with f_K the integral mean of f over K.
    pub osc_sq: f64,
}

pub fn efficiency_terms(sol: &Solution, spec: &ProblemSpec) -> Result<EfficiencyTerms> {
    let est = estimator(sol, spec)?;
    let mesh = &sol.mesh;
    let rule = QuadratureRule::gauss(4);
    let mut osc_sq = 0.0;
    for e in 0..mesh.elements.len() {
        let g = mesh.geometry(e)?;
        let mut mean = [0.0; 2];
        for &(xi, eta, w) in &rule.points {
            let wj = w * g.jacobian(xi, eta);
            let [x, y] = g.map(xi, eta);
            let f = (spec.body_force)(x, y);
            mean[0] += wj * f[0];
            mean[1] += wj * f[1];
        }
        let area = g.area();
        mean[0] /= area;
        mean[1] /= area;
        let mut dev = 0.0;
        for &(xi, eta, w) in &rule.points {
            let wj = w * g.jacobian(xi, eta);
            let [x, y] = g.map(xi, eta);
            let f = (spec.body_force)(x, y);
            dev += wj * ((f[0] - mean[0]).powi(2) + (f[1] - mean[1]).powi(2));
        }
        osc_sq += g.h_k * g.h_k * dev;
    }
    Ok(EfficiencyTerms { lhs_sq: est.volume_sq + est.jump_sq, osc_sq })
}
