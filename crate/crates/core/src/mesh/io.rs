//! Plain-text mesh format.
//!
//! ```text
//! quadmesh 1
//! nodes N
//! <id> <x> <y>              (N lines)
//! elems M
//! <id> <n0> <n1> <n2> <n3>  (M lines)
//! labels K                  (optional)
//! <na> <nb> <label>         (K lines, label = dirichlet | neumann:<tag>)
//! ```
//!
//! Coordinates are written with 17 significant digits so a write/read round
//! trip reproduces every `f64` bit-exactly.

use super::{BoundaryLabel, Node, QuadElement, QuadMesh};
use crate::error::{FemError, Result};
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

pub fn mesh_to_string(mesh: &QuadMesh) -> String {
    let mut out = String::new();
    writeln!(out, "quadmesh 1").unwrap();
    writeln!(out, "nodes {}", mesh.nodes.len()).unwrap();
    for n in &mesh.nodes {
        writeln!(out, "{} {:.16e} {:.16e}", n.id, n.x, n.y).unwrap();
    }
    writeln!(out, "elems {}", mesh.elements.len()).unwrap();
    for (i, e) in mesh.elements.iter().enumerate() {
        let [a, b, c, d] = e.node_ids;
        writeln!(out, "{i} {a} {b} {c} {d}").unwrap();
    }
    let boundary: Vec<_> = mesh
        .edges
        .iter()
        .filter(|e| e.right_elem.is_none())
        .collect();
    if !boundary.is_empty() {
        writeln!(out, "labels {}", boundary.len()).unwrap();
        for e in boundary {
            let label = match e.label {
                BoundaryLabel::Dirichlet => "dirichlet".to_string(),
                BoundaryLabel::Neumann(tag) => format!("neumann:{tag}"),
                BoundaryLabel::Interior => unreachable!("boundary edge labeled interior"),
            };
            writeln!(out, "{} {} {}", e.nodes[0], e.nodes[1], label).unwrap();
        }
    }
    out
}

pub fn write_mesh(mesh: &QuadMesh, path: &Path) -> Result<()> {
    std::fs::write(path, mesh_to_string(mesh))?;
    Ok(())
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn next_tokens(&mut self) -> Result<(usize, Vec<&'a str>)> {
        for (idx, line) in self.inner.by_ref() {
            let tokens: Vec<&str> = line.split_whitespace().collect();
            if !tokens.is_empty() {
                return Ok((idx + 1, tokens));
            }
        }
        Err(FemError::Parse { line: 0, msg: "unexpected end of file".into() })
    }
}

fn parse<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| FemError::Parse {
        line,
        msg: format!("cannot parse {what} from {tok:?}"),
    })
}

/// Parses the text format. If a `labels` section is present, edges are
/// rebuilt and every boundary edge must be covered by exactly the listed
/// node pairs; otherwise the mesh is returned without edge topology.
pub fn mesh_from_str(text: &str) -> Result<QuadMesh> {
    let mut lines = Lines { inner: text.lines().enumerate() };

    let (ln, header) = lines.next_tokens()?;
    if header != ["quadmesh", "1"] {
        return Err(FemError::Parse { line: ln, msg: format!("bad header {header:?}") });
    }

    let (ln, tok) = lines.next_tokens()?;
    if tok.len() != 2 || tok[0] != "nodes" {
        return Err(FemError::Parse { line: ln, msg: "expected `nodes N`".into() });
    }
    let n_nodes: usize = parse(tok[1], ln, "node count")?;
    let mut nodes = Vec::with_capacity(n_nodes);
    for _ in 0..n_nodes {
        let (ln, tok) = lines.next_tokens()?;
        if tok.len() != 3 {
            return Err(FemError::Parse { line: ln, msg: "node line needs `id x y`".into() });
        }
        let id: usize = parse(tok[0], ln, "node id")?;
        if id != nodes.len() {
            return Err(FemError::Parse { line: ln, msg: format!("node ids must be consecutive, got {id}") });
        }
        let x: f64 = parse(tok[1], ln, "x coordinate")?;
        let y: f64 = parse(tok[2], ln, "y coordinate")?;
        if !x.is_finite() || !y.is_finite() {
            return Err(FemError::Parse { line: ln, msg: "non-finite coordinate".into() });
        }
        nodes.push(Node { id, x, y });
    }

    let (ln, tok) = lines.next_tokens()?;
    if tok.len() != 2 || tok[0] != "elems" {
        return Err(FemError::Parse { line: ln, msg: "expected `elems M`".into() });
    }
    let n_elems: usize = parse(tok[1], ln, "element count")?;
    let mut elements = Vec::with_capacity(n_elems);
    for _ in 0..n_elems {
        let (ln, tok) = lines.next_tokens()?;
        if tok.len() != 5 {
            return Err(FemError::Parse { line: ln, msg: "element line needs `id n0 n1 n2 n3`".into() });
        }
        let mut ids = [0usize; 4];
        for (k, t) in tok[1..].iter().enumerate() {
            ids[k] = parse(t, ln, "node id")?;
            if ids[k] >= nodes.len() {
                return Err(FemError::Parse { line: ln, msg: format!("node id {} out of range", ids[k]) });
            }
        }
        elements.push(QuadElement { node_ids: ids });
    }

    let mut mesh = QuadMesh::new(nodes, elements);

    if let Ok((ln, tok)) = lines.next_tokens() {
        if tok.len() != 2 || tok[0] != "labels" {
            return Err(FemError::Parse { line: ln, msg: "expected `labels K`".into() });
        }
        let n_labels: usize = parse(tok[1], ln, "label count")?;
        let mut labels: HashMap<(usize, usize), BoundaryLabel> = HashMap::new();
        for _ in 0..n_labels {
            let (ln, tok) = lines.next_tokens()?;
            if tok.len() != 3 {
                return Err(FemError::Parse { line: ln, msg: "label line needs `na nb label`".into() });
            }
            let a: usize = parse(tok[0], ln, "node id")?;
            let b: usize = parse(tok[1], ln, "node id")?;
            let label = match tok[2] {
                "dirichlet" => BoundaryLabel::Dirichlet,
                s if s.starts_with("neumann:") => {
                    BoundaryLabel::Neumann(parse(&s["neumann:".len()..], ln, "neumann tag")?)
                }
                other => {
                    return Err(FemError::Parse { line: ln, msg: format!("unknown label {other:?}") })
                }
            };
            labels.insert((a.min(b), a.max(b)), label);
        }
        mesh.build_edges(|_, _| BoundaryLabel::Neumann(0))?;
        for edge in &mut mesh.edges {
            if edge.right_elem.is_none() {
                let key = (edge.nodes[0].min(edge.nodes[1]), edge.nodes[0].max(edge.nodes[1]));
                match labels.remove(&key) {
                    Some(l) => edge.label = l,
                    None => {
                        return Err(FemError::Parse {
                            line: 0,
                            msg: format!("boundary edge ({}, {}) has no label", key.0, key.1),
                        })
                    }
                }
            }
        }
        if let Some((&(a, b), _)) = labels.iter().next() {
            return Err(FemError::Parse {
                line: 0,
                msg: format!("labeled pair ({a}, {b}) is not a boundary edge"),
            });
        }
    }

    Ok(mesh)
}

pub fn read_mesh(path: &Path) -> Result<QuadMesh> {
    mesh_from_str(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::generate::{generate_irregular, generate_regular};

    #[test]
    fn round_trip_is_bitwise() {
        let mut m = generate_regular(5, 1, (0.0, 10.0), (-1.0, 1.0));
        m.build_edges(|x, _| {
            if x == 0.0 {
                BoundaryLabel::Dirichlet
            } else {
                BoundaryLabel::Neumann(1)
            }
        })
        .unwrap();
        let text = mesh_to_string(&m);
        let back = mesh_from_str(&text).unwrap();
        assert_eq!(back.nodes.len(), m.nodes.len());
        for (a, b) in m.nodes.iter().zip(back.nodes.iter()) {
            assert_eq!(a.x.to_bits(), b.x.to_bits());
            assert_eq!(a.y.to_bits(), b.y.to_bits());
        }
        assert_eq!(m.elements, back.elements);
    }

    #[test]
    fn round_trip_preserves_edge_topology() {
        let mut m = generate_irregular(1);
        m.build_edges(|x, y| {
            if x == 0.0 {
                BoundaryLabel::Dirichlet
            } else if x == 10.0 {
                BoundaryLabel::Neumann(1)
            } else if y == -1.0 {
                BoundaryLabel::Neumann(2)
            } else {
                BoundaryLabel::Neumann(3)
            }
        })
        .unwrap();
        let back = mesh_from_str(&mesh_to_string(&m)).unwrap();
        assert_eq!(m.edges.len(), back.edges.len());
        for (a, b) in m.edges.iter().zip(back.edges.iter()) {
            assert_eq!(a.nodes, b.nodes);
            assert_eq!(a.left_elem, b.left_elem);
            assert_eq!(a.right_elem, b.right_elem);
            assert_eq!(a.label, b.label);
        }
    }

    #[test]
    fn bad_element_line_is_parse_error() {
        let text = "quadmesh 1\nnodes 3\n0 0 0\n1 1 0\n2 1 1\nelems 1\n0 0 1 2\n";
        match mesh_from_str(text) {
            Err(FemError::Parse { line, .. }) => assert_eq!(line, 7),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_label_is_parse_error() {
        let text = "quadmesh 1\nnodes 4\n0 0 0\n1 1 0\n2 1 1\n3 0 1\nelems 1\n0 0 1 2 3\nlabels 1\n0 1 dirichlet\n";
        assert!(mesh_from_str(text).is_err());
    }
}
