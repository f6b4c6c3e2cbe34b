//! Quadrilateral meshes: storage, edge topology, generators, text I/O.
//!
//! A completed [`QuadMesh`] is immutable; construction (generation,
//! refinement, edge building) happens up front and single-threaded.

pub mod generate;
pub mod geometry;
pub mod io;

pub use geometry::{ElementGeometry, ShapeDiagnostics};

use crate::error::{FemError, Result};
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub id: usize,
    pub x: f64,
    pub y: f64,
}

/// Four node ids in counterclockwise order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadElement {
    pub node_ids: [usize; 4],
}

/// Classification of a mesh edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryLabel {
    Interior,
    Dirichlet,
    Neumann(u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    /// Endpoint node ids, ordered along the left element's counterclockwise
    /// boundary (so the outward normal of the left element is the rotation
    /// of the edge direction by -90°).
    pub nodes: [usize; 2],
    pub left_elem: usize,
    pub right_elem: Option<usize>,
    pub label: BoundaryLabel,
    /// Physical edge length.
    pub h_e: f64,
}

#[derive(Debug, Clone)]
pub struct QuadMesh {
    pub nodes: Vec<Node>,
    pub elements: Vec<QuadElement>,
    pub edges: Vec<Edge>,
    /// Axis-aligned bounding box (x0, y0, x1, y1).
    pub bbox: [f64; 4],
}

impl QuadMesh {
    /// Assembles a mesh from raw nodes and connectivity; edges are not built.
    pub fn new(nodes: Vec<Node>, elements: Vec<QuadElement>) -> Self {
        let mut bbox = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        for n in &nodes {
            bbox[0] = bbox[0].min(n.x);
            bbox[1] = bbox[1].min(n.y);
            bbox[2] = bbox[2].max(n.x);
            bbox[3] = bbox[3].max(n.y);
        }
        QuadMesh { nodes, elements, edges: Vec::new(), bbox }
    }

    pub fn corner_coords(&self, elem: usize) -> [[f64; 2]; 4] {
        let ids = self.elements[elem].node_ids;
        ids.map(|i| [self.nodes[i].x, self.nodes[i].y])
    }

    /// Bilinear-map geometry of one element.
    pub fn geometry(&self, elem: usize) -> Result<ElementGeometry> {
        ElementGeometry::from_corners(&self.corner_coords(elem)).map_err(|e| match e {
            FemError::NonConvex { jmin, .. } => FemError::NonConvex { elem, jmin },
            other => other,
        })
    }

    /// Builds the edge list. Every undirected node pair shared by two
    /// elements becomes one interior edge; pairs owned by a single element
    /// are boundary edges and get their label from `boundary_spec`, called
    /// with the edge midpoint.
    pub fn build_edges<F>(&mut self, boundary_spec: F) -> Result<()>
    where
        F: Fn(f64, f64) -> BoundaryLabel,
    {
        // Local edge k of an element runs from corner k to corner k+1.
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edges: Vec<Edge> = Vec::new();
        for (e, quad) in self.elements.iter().enumerate() {
            for k in 0..4 {
                let a = quad.node_ids[k];
                let b = quad.node_ids[(k + 1) % 4];
                let key = (a.min(b), a.max(b));
                match seen.get(&key) {
                    None => {
                        let (pa, pb) = (&self.nodes[a], &self.nodes[b]);
                        let h_e = ((pb.x - pa.x).powi(2) + (pb.y - pa.y).powi(2)).sqrt();
                        seen.insert(key, edges.len());
                        edges.push(Edge {
                            nodes: [a, b],
                            left_elem: e,
                            right_elem: None,
                            label: BoundaryLabel::Interior,
                            h_e,
                        });
                    }
                    Some(&idx) => {
                        if edges[idx].right_elem.is_some() {
                            return Err(FemError::NonManifold { a: key.0, b: key.1 });
                        }
                        edges[idx].right_elem = Some(e);
                    }
                }
            }
        }
        for edge in &mut edges {
            if edge.right_elem.is_none() {
                let (pa, pb) = (&self.nodes[edge.nodes[0]], &self.nodes[edge.nodes[1]]);
                let label = boundary_spec(0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y));
                if label == BoundaryLabel::Interior {
                    return Err(FemError::Parse {
                        line: 0,
                        msg: format!(
                            "boundary spec labeled boundary edge ({}, {}) as interior",
                            edge.nodes[0], edge.nodes[1]
                        ),
                    });
                }
                edge.label = label;
            }
        }
        self.edges = edges;
        Ok(())
    }

    pub fn interior_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.right_elem.is_some()).count()
    }

    /// Local edge index (0..4) of an element whose endpoints are `a`, `b`,
    /// plus whether the element traverses the edge as a→b (+1) or b→a (-1).
    pub fn local_edge(&self, elem: usize, a: usize, b: usize) -> Option<(usize, i8)> {
        let ids = self.elements[elem].node_ids;
        for k in 0..4 {
            let (s, t) = (ids[k], ids[(k + 1) % 4]);
            if (s, t) == (a, b) {
                return Some((k, 1));
            }
            if (s, t) == (b, a) {
                return Some((k, -1));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::generate::generate_regular;
    use super::*;

    fn all_neumann(_x: f64, _y: f64) -> BoundaryLabel {
        BoundaryLabel::Neumann(0)
    }

    #[test]
    fn edges_of_two_element_strip() {
        let mut m = generate_regular(2, 1, (0.0, 2.0), (0.0, 1.0));
        m.build_edges(all_neumann).unwrap();
        assert_eq!(m.edges.len(), 7);
        assert_eq!(m.interior_edge_count(), 1);
        let interior = m.edges.iter().find(|e| e.right_elem.is_some()).unwrap();
        assert_eq!(interior.label, BoundaryLabel::Interior);
        assert!((interior.h_e - 1.0).abs() < 1e-15);
    }

    #[test]
    fn edges_of_regular_10x2() {
        let mut m = generate_regular(10, 2, (0.0, 10.0), (-1.0, 1.0));
        m.build_edges(all_neumann).unwrap();
        assert_eq!(m.nodes.len(), 33);
        assert_eq!(m.elements.len(), 20);
        assert_eq!(m.edges.len(), 52);
        assert_eq!(m.interior_edge_count(), 28);
    }

    #[test]
    fn boundary_split_by_midpoint() {
        let mut m = generate_regular(5, 1, (0.0, 10.0), (-1.0, 1.0));
        m.build_edges(|x, _y| {
            if x == 0.0 {
                BoundaryLabel::Dirichlet
            } else {
                BoundaryLabel::Neumann(1)
            }
        })
        .unwrap();
        let dirichlet = m
            .edges
            .iter()
            .filter(|e| e.label == BoundaryLabel::Dirichlet)
            .count();
        let neumann = m
            .edges
            .iter()
            .filter(|e| matches!(e.label, BoundaryLabel::Neumann(_)))
            .count();
        assert_eq!(dirichlet, 1);
        assert_eq!(neumann, 11); // 5 bottom + 5 top + 1 right
    }

    #[test]
    fn local_edge_orientation() {
        let mut m = generate_regular(2, 1, (0.0, 2.0), (0.0, 1.0));
        m.build_edges(all_neumann).unwrap();
        let interior = m.edges.iter().find(|e| e.right_elem.is_some()).unwrap();
        let (_, s_left) = m
            .local_edge(interior.left_elem, interior.nodes[0], interior.nodes[1])
            .unwrap();
        let (_, s_right) = m
            .local_edge(
                interior.right_elem.unwrap(),
                interior.nodes[0],
                interior.nodes[1],
            )
            .unwrap();
        // The two elements traverse a shared edge in opposite directions.
        assert_eq!(s_left, 1);
        assert_eq!(s_right, -1);
    }
}
