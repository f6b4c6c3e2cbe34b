//! Mesh generators: regular grids, the irregular cantilever family, and
//! uniform midpoint refinement.

use super::{Node, QuadElement, QuadMesh};
use std::collections::HashMap;

/// Uniform rectangular grid of `nx` × `ny` elements on
/// `[x0,x1] × [y0,y1]`. Nodes are numbered row-major along x; elements are
/// counterclockwise.
pub fn generate_regular(nx: usize, ny: usize, x_range: (f64, f64), y_range: (f64, f64)) -> QuadMesh {
    assert!(nx >= 1 && ny >= 1, "grid must have at least one element");
    let (x0, x1) = x_range;
    let (y0, y1) = y_range;
    let dx = (x1 - x0) / nx as f64;
    let dy = (y1 - y0) / ny as f64;
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        for i in 0..=nx {
            nodes.push(Node {
                id: nodes.len(),
                x: x0 + i as f64 * dx,
                y: y0 + j as f64 * dy,
            });
        }
    }
    let nid = |i: usize, j: usize| j * (nx + 1) + i;
    let mut elements = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            elements.push(QuadElement {
                node_ids: [nid(i, j), nid(i + 1, j), nid(i + 1, j + 1), nid(i, j + 1)],
            });
        }
    }
    QuadMesh::new(nodes, elements)
}

/// The irregular cantilever meshes on `[0,10] × [-1,1]`.
///
/// Level 0 is a 5-element strip of trapezoids whose interior mesh lines run
/// from the bottom abscissas `{1, 2, 4, 7}` to the top abscissas
/// `{2, 4, 5, 6}`. Level `L` applies [`refine_uniform`] `L` times, so level
/// 1 is the 10×2 irregular mesh, level 2 the 20×4 one, and so on.
pub fn generate_irregular(level: usize) -> QuadMesh {
    let bottom = [0.0, 1.0, 2.0, 4.0, 7.0, 10.0];
    let top = [0.0, 2.0, 4.0, 5.0, 6.0, 10.0];
    let mut nodes = Vec::with_capacity(12);
    for &x in &bottom {
        nodes.push(Node { id: nodes.len(), x, y: -1.0 });
    }
    for &x in &top {
        nodes.push(Node { id: nodes.len(), x, y: 1.0 });
    }
    let elements = (0..5)
        .map(|k| QuadElement {
            node_ids: [k, k + 1, 7 + k, 6 + k],
        })
        .collect();
    let mut mesh = QuadMesh::new(nodes, elements);
    for _ in 0..level {
        mesh = refine_uniform(&mesh);
    }
    mesh
}

/// Splits every quad into four via edge midpoints and the bilinear-map
/// center point. Original nodes keep their ids; midpoint nodes are numbered
/// in first-encounter order, then the element centers.
pub fn refine_uniform(mesh: &QuadMesh) -> QuadMesh {
    let mut nodes = mesh.nodes.clone();
    let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
    let mut mid = |a: usize, b: usize, nodes: &mut Vec<Node>| -> usize {
        let key = (a.min(b), a.max(b));
        *midpoints.entry(key).or_insert_with(|| {
            let id = nodes.len();
            nodes.push(Node {
                id,
                x: 0.5 * (mesh.nodes[a].x + mesh.nodes[b].x),
                y: 0.5 * (mesh.nodes[a].y + mesh.nodes[b].y),
            });
            id
        })
    };

    let mut elements = Vec::with_capacity(4 * mesh.elements.len());
    for quad in &mesh.elements {
        let c = quad.node_ids;
        let m01 = mid(c[0], c[1], &mut nodes);
        let m12 = mid(c[1], c[2], &mut nodes);
        let m23 = mid(c[2], c[3], &mut nodes);
        let m30 = mid(c[3], c[0], &mut nodes);
        let center = nodes.len();
        let cx = 0.25 * (mesh.nodes[c[0]].x + mesh.nodes[c[1]].x + mesh.nodes[c[2]].x + mesh.nodes[c[3]].x);
        let cy = 0.25 * (mesh.nodes[c[0]].y + mesh.nodes[c[1]].y + mesh.nodes[c[2]].y + mesh.nodes[c[3]].y);
        nodes.push(Node { id: center, x: cx, y: cy });
        // Children keep the parent's reference orientation so the node-order
        // convention (a1 > 0, b2 > 0) survives refinement.
        elements.push(QuadElement { node_ids: [c[0], m01, center, m30] });
        elements.push(QuadElement { node_ids: [m01, c[1], m12, center] });
        elements.push(QuadElement { node_ids: [center, m12, c[2], m23] });
        elements.push(QuadElement { node_ids: [m30, center, m23, c[3]] });
    }
    QuadMesh::new(nodes, elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::BoundaryLabel;

    fn sorted_coords(m: &QuadMesh) -> Vec<(i64, i64)> {
        // Quantize to 1e-12 so set comparison is robust to roundoff.
        let mut v: Vec<(i64, i64)> = m
            .nodes
            .iter()
            .map(|n| ((n.x * 1e12).round() as i64, (n.y * 1e12).round() as i64))
            .collect();
        v.sort_unstable();
        v
    }

    fn euler_holds(m: &mut QuadMesh) -> bool {
        m.build_edges(|_, _| BoundaryLabel::Neumann(0)).unwrap();
        m.nodes.len() + m.elements.len() == m.edges.len() + 1
    }

    #[test]
    fn regular_5x1_layout() {
        let m = generate_regular(5, 1, (0.0, 10.0), (-1.0, 1.0));
        assert_eq!(m.nodes.len(), 12);
        assert_eq!(m.elements.len(), 5);
        for e in 0..5 {
            let g = m.geometry(e).unwrap();
            assert!((g.area() - 4.0).abs() < 1e-12);
            assert_eq!(g.d_k, 0.0);
        }
    }

    #[test]
    fn single_square_is_reference() {
        let m = generate_regular(1, 1, (-1.0, 1.0), (-1.0, 1.0));
        let g = m.geometry(0).unwrap();
        assert_eq!((g.a1, g.b2, g.j0), (1.0, 1.0, 1.0));
    }

    #[test]
    fn euler_formula_on_grids() {
        let mut m = generate_regular(10, 2, (0.0, 10.0), (-1.0, 1.0));
        assert_eq!(m.nodes.len(), 33);
        assert_eq!(m.elements.len(), 20);
        assert!(euler_holds(&mut m));
        let mut m = generate_regular(7, 5, (0.0, 1.0), (0.0, 1.0));
        assert!(euler_holds(&mut m));
    }

    #[test]
    fn irregular_base_mesh() {
        let m = generate_irregular(0);
        assert_eq!(m.nodes.len(), 12);
        assert_eq!(m.elements.len(), 5);
        // All five elements convex, with the documented first trapezoid.
        for e in 0..5 {
            assert!(m.geometry(e).unwrap().j0 > 0.0);
        }
        assert_eq!(
            m.corner_coords(0),
            [[0.0, -1.0], [1.0, -1.0], [2.0, 1.0], [0.0, 1.0]]
        );
        // Domain area is preserved by the irregular layout.
        let total: f64 = (0..5).map(|e| m.geometry(e).unwrap().area()).sum();
        assert!((total - 20.0).abs() < 1e-12);
    }

    #[test]
    fn irregular_level1_matches_published_pattern() {
        let m = generate_irregular(1);
        assert_eq!(m.elements.len(), 20);
        // New bottom boundary node at x = 0.5.
        assert!(m
            .nodes
            .iter()
            .any(|n| (n.x - 0.5).abs() < 1e-14 && (n.y + 1.0).abs() < 1e-14));
        // The first interior line (0.5,-1) → (1,1) passes through the
        // center of the old first element at (0.75, 0).
        assert!(m
            .nodes
            .iter()
            .any(|n| (n.x - 0.75).abs() < 1e-14 && n.y.abs() < 1e-14));
        assert!(m
            .nodes
            .iter()
            .any(|n| (n.x - 1.0).abs() < 1e-14 && (n.y - 1.0).abs() < 1e-14));
    }

    #[test]
    fn irregular_level2_all_convex() {
        let m = generate_irregular(2);
        assert_eq!(m.elements.len(), 80);
        for e in 0..m.elements.len() {
            let g = m.geometry(e).unwrap();
            assert!(g.jacobian(-1.0, -1.0) > 0.0);
            assert!(g.jacobian(1.0, -1.0) > 0.0);
            assert!(g.jacobian(1.0, 1.0) > 0.0);
            assert!(g.jacobian(-1.0, 1.0) > 0.0);
        }
    }

    #[test]
    fn refine_square_gives_four_squares() {
        let m = generate_regular(1, 1, (0.0, 1.0), (0.0, 1.0));
        let r = refine_uniform(&m);
        assert_eq!(r.elements.len(), 4);
        assert_eq!(r.nodes.len(), 9);
        for e in 0..4 {
            let g = r.geometry(e).unwrap();
            assert!((g.area() - 0.25).abs() < 1e-15);
            assert_eq!(g.d_k, 0.0);
        }
    }

    #[test]
    fn refine_node_count_is_euler_sum() {
        let mut m = generate_irregular(0);
        m.build_edges(|_, _| BoundaryLabel::Neumann(0)).unwrap();
        let (n, e, f) = (m.nodes.len(), m.edges.len(), m.elements.len());
        let r = refine_uniform(&m);
        assert_eq!(r.nodes.len(), n + e + f);
    }

    #[test]
    fn twice_refined_regular_matches_generated() {
        let m = generate_regular(5, 1, (0.0, 10.0), (-1.0, 1.0));
        let r2 = refine_uniform(&refine_uniform(&m));
        let direct = generate_regular(20, 4, (0.0, 10.0), (-1.0, 1.0));
        assert_eq!(sorted_coords(&r2), sorted_coords(&direct));
    }

    #[test]
    fn refinement_preserves_area_and_shrinks_skew() {
        let mut prev_skew = f64::INFINITY;
        for level in 0..4 {
            let m = generate_irregular(level);
            let total: f64 = (0..m.elements.len())
                .map(|e| m.geometry(e).unwrap().area())
                .sum();
            assert!((total - 20.0).abs() / 20.0 < 1e-12);
            let skew = (0..m.elements.len())
                .map(|e| {
                    let g = m.geometry(e).unwrap();
                    g.d_k / g.h_k
                })
                .fold(0.0, f64::max);
            assert!(skew <= prev_skew + 1e-15);
            prev_skew = skew;
        }
    }

    #[test]
    fn geometry_bounds_hold_on_generated_meshes() {
        // 1/4 ρ² < a1²+b1² < 1/4 h², same for (a2,b2); a12²+b12² < h²/16;
        // Jmax/Jmin < h²/(2ρ²). Strict inequalities on every element.
        for mesh in [generate_irregular(0), generate_irregular(1), generate_irregular(2)] {
            for e in 0..mesh.elements.len() {
                let g = mesh.geometry(e).unwrap();
                let q1 = g.a1 * g.a1 + g.b1 * g.b1;
                let q2 = g.a2 * g.a2 + g.b2 * g.b2;
                let q12 = g.a12 * g.a12 + g.b12 * g.b12;
                let rho2 = 0.25 * g.rho_k * g.rho_k;
                let h2 = 0.25 * g.h_k * g.h_k;
                assert!(rho2 < q1 && q1 < h2, "elem {e}: {rho2} {q1} {h2}");
                assert!(rho2 < q2 && q2 < h2);
                assert!(q12 < g.h_k * g.h_k / 16.0);
                let d = g.diagnostics();
                assert!(d.jacobian_ratio < g.h_k * g.h_k / (2.0 * g.rho_k * g.rho_k));
            }
        }
    }
}
