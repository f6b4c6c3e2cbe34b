//! Global assembly, boundary conditions, and problem orchestration.
//!
//! DOFs are interleaved by node id: node `i` owns DOFs `2i` (u) and
//! `2i+1` (v). Dirichlet boundaries prescribe both components at every node
//! on the closure of the Dirichlet edge set; the values come from a
//! callback, which generalizes the homogeneous clamped condition to the
//! inhomogeneous data the benchmarks need.

pub mod sparse;

pub use sparse::{solve_spd, SolveStats, SparseSym};

use crate::elements::kernels::{
    displacement_gradient, element_stiffness_bilinear, element_stiffness_hybrid, shape_functions,
    strain_displacement, ElementMatrices,
};
use crate::elements::modes::eval_stress;
use crate::elements::quadrature::{gauss_1d, QuadratureRule};
use crate::elements::{ElementKind, Material, StressMode, SymTensor2};
use crate::error::{FemError, Result};
use crate::mesh::{BoundaryLabel, ElementGeometry, QuadMesh};
use nalgebra::SVector;
use serde::Serialize;

pub type VectorField = Box<dyn Fn(f64, f64) -> [f64; 2] + Send + Sync>;
pub type TractionField = Box<dyn Fn(f64, f64, u32) -> [f64; 2] + Send + Sync>;

/// Everything needed to pose one boundary-value problem.
pub struct ProblemSpec {
    pub mesh: QuadMesh,
    pub material: Material,
    pub element_kind: ElementKind,
    pub body_force: VectorField,
    pub traction: TractionField,
    pub dirichlet_value: VectorField,
}

/// Per-element stress parameters of a hybrid solution.
#[derive(Debug, Clone, Serialize)]
pub struct StressField {
    pub mode: Option<StressMode>,
    pub beta: Vec<[f64; 5]>,
}

/// Discrete solution plus provenance.
pub struct Solution {
    pub mesh: QuadMesh,
    pub material: Material,
    pub element_kind: ElementKind,
    /// Nodal displacements, interleaved (u_i, v_i).
    pub u: Vec<f64>,
    pub stress: StressField,
    pub stats: SolveStats,
}

impl Solution {
    /// Local displacement vector of one element.
    pub fn element_displacements(&self, elem: usize) -> SVector<f64, 8> {
        let ids = self.mesh.elements[elem].node_ids;
        let mut q = SVector::<f64, 8>::zeros();
        for (i, id) in ids.iter().enumerate() {
            q[2 * i] = self.u[2 * id];
            q[2 * i + 1] = self.u[2 * id + 1];
        }
        q
    }

    /// Discrete stress at a reference point of an element: the recovered
    /// mode stress for hybrid kinds, C ε(u_h) for the bilinear element.
    pub fn stress_at(&self, g: &ElementGeometry, elem: usize, xi: f64, eta: f64) -> Result<SymTensor2> {
        match self.stress.mode {
            Some(mode) => Ok(eval_stress(g, mode, &self.stress.beta[elem], xi, eta)),
            None => {
                let q = self.element_displacements(elem);
                let b = strain_displacement(g, xi, eta)?;
                let s = b * q;
                // B rows carry engineering shear; the tensor component is half.
                Ok(self
                    .material
                    .c_apply(SymTensor2::new(s[0], s[1], 0.5 * s[2])))
            }
        }
    }

    /// Displacement gradient [[u_x, u_y], [v_x, v_y]] at a reference point.
    pub fn grad_at(&self, g: &ElementGeometry, elem: usize, xi: f64, eta: f64) -> Result<[[f64; 2]; 2]> {
        let q = self.element_displacements(elem);
        displacement_gradient(g, &q, xi, eta)
    }

    /// JSON export with nodal displacements, per-element stress parameters,
    /// mode tag, and the solve residual.
    pub fn export_json(&self) -> serde_json::Value {
        serde_json::json!({
            "u": self.u,
            "beta": self.stress.beta,
            "mode": self.stress.mode.map(|m| match m {
                StressMode::Ps => "PS",
                StressMode::Ecq4 => "ECQ4",
            }),
            "residual": self.stats.residual,
        })
    }
}

/// Element stiffnesses in assembly form.
pub enum ElementOps {
    Hybrid(Vec<ElementMatrices>),
    Bilinear,
}

/// Assembles the global stiffness (condensed for hybrid kinds) and the load
/// vector: body term by 4×4 Gauss, Neumann tractions by 4-point Gauss per
/// edge. Returns the element operators for later stress recovery.
pub fn assemble(spec: &ProblemSpec) -> Result<(SparseSym, Vec<f64>, ElementOps)> {
    let mesh = &spec.mesh;
    let n_dofs = 2 * mesh.nodes.len();
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    let mut load = vec![0.0; n_dofs];

    let mut hybrid_ops = Vec::new();
    let body_rule = QuadratureRule::gauss(4);
    for e in 0..mesh.elements.len() {
        let g = mesh.geometry(e)?;
        let k = match spec.element_kind.stress_mode() {
            Some(mode) => {
                let em = element_stiffness_hybrid(&g, &spec.material, mode)?;
                let k = em.k;
                hybrid_ops.push(em);
                k
            }
            None => element_stiffness_bilinear(&g, &spec.material)?,
        };
        let ids = mesh.elements[e].node_ids;
        let dof = |l: usize| 2 * ids[l / 2] + (l % 2);
        for a in 0..8 {
            for b in a..8 {
                let (ga, gb) = (dof(a), dof(b));
                let (r, c) = if ga <= gb { (ga, gb) } else { (gb, ga) };
                // Keep one triplet per (local) pair; below-diagonal local
                // entries duplicate symmetric ones.
                triplets.push((r, c, k[(a, b)]));
            }
        }
        // Body load: ∫ f · N_i J dξ dη.
        for &(xi, eta, w) in &body_rule.points {
            let [x, y] = g.map(xi, eta);
            let f = (spec.body_force)(x, y);
            if f[0] == 0.0 && f[1] == 0.0 {
                continue;
            }
            let wj = w * g.jacobian(xi, eta);
            let n = shape_functions(xi, eta);
            for i in 0..4 {
                load[2 * ids[i]] += wj * n[i] * f[0];
                load[2 * ids[i] + 1] += wj * n[i] * f[1];
            }
        }
    }

    if mesh.edges.is_empty() {
        return Err(FemError::TopologyMissing);
    }
    let edge_rule = gauss_1d(4);
    for edge in &mesh.edges {
        let BoundaryLabel::Neumann(tag) = edge.label else {
            continue;
        };
        let a = &mesh.nodes[edge.nodes[0]];
        let b = &mesh.nodes[edge.nodes[1]];
        for &(t, w) in &edge_rule {
            let na = 0.5 * (1.0 - t);
            let nb = 0.5 * (1.0 + t);
            let x = a.x + nb * (b.x - a.x);
            let y = a.y + nb * (b.y - a.y);
            let gv = (spec.traction)(x, y, tag);
            let ws = w * 0.5 * edge.h_e;
            load[2 * a.id] += ws * na * gv[0];
            load[2 * a.id + 1] += ws * na * gv[1];
            load[2 * b.id] += ws * nb * gv[0];
            load[2 * b.id + 1] += ws * nb * gv[1];
        }
    }

    let k = SparseSym::from_triplets(n_dofs, &triplets);
    let ops = match spec.element_kind {
        ElementKind::Bilinear => ElementOps::Bilinear,
        _ => ElementOps::Hybrid(hybrid_ops),
    };
    Ok((k, load, ops))
}

/// The reduced (Dirichlet-eliminated) system plus bookkeeping to expand a
/// reduced solution back to all DOFs.
pub struct ReducedSystem {
    pub k: SparseSym,
    pub rhs: Vec<f64>,
    /// Global DOF of each reduced unknown.
    pub free: Vec<usize>,
    /// Prescribed value for constrained DOFs, `None` for free ones.
    pub prescribed: Vec<Option<f64>>,
}

impl ReducedSystem {
    pub fn expand(&self, x_red: &[f64]) -> Vec<f64> {
        let mut full: Vec<f64> = self
            .prescribed
            .iter()
            .map(|p| p.unwrap_or(0.0))
            .collect();
        for (r, &g) in self.free.iter().enumerate() {
            full[g] = x_red[r];
        }
        full
    }
}

/// Prescribes both displacement components at every node on the closure of
/// the Dirichlet edges and eliminates them symmetrically:
/// `rhs_free -= K_free,D · u_D`.
pub fn apply_dirichlet(k: &SparseSym, load: &[f64], spec: &ProblemSpec) -> Result<ReducedSystem> {
    let mesh = &spec.mesh;
    let n_dofs = 2 * mesh.nodes.len();
    let mut prescribed: Vec<Option<f64>> = vec![None; n_dofs];
    for edge in &mesh.edges {
        if edge.label == BoundaryLabel::Dirichlet {
            for &nid in &edge.nodes {
                let node = &mesh.nodes[nid];
                let v = (spec.dirichlet_value)(node.x, node.y);
                prescribed[2 * nid] = Some(v[0]);
                prescribed[2 * nid + 1] = Some(v[1]);
            }
        }
    }
    if prescribed.iter().all(|p| p.is_none()) {
        return Err(FemError::NoDirichlet);
    }

    let mut reduced_index = vec![usize::MAX; n_dofs];
    let mut free = Vec::new();
    for (g, p) in prescribed.iter().enumerate() {
        if p.is_none() {
            reduced_index[g] = free.len();
            free.push(g);
        }
    }

    let mut rhs: Vec<f64> = free.iter().map(|&g| load[g]).collect();
    let mut triplets = Vec::new();
    for (r, c, v) in k.entries() {
        match (prescribed[r], prescribed[c]) {
            (None, None) => triplets.push((reduced_index[r], reduced_index[c], v)),
            (None, Some(ud)) => rhs[reduced_index[r]] -= v * ud,
            (Some(ud), None) => rhs[reduced_index[c]] -= v * ud,
            (Some(_), Some(_)) => {}
        }
    }
    let k_red = SparseSym::from_triplets(free.len(), &triplets);
    Ok(ReducedSystem { k: k_red, rhs, free, prescribed })
}

/// Assemble, constrain, solve, and recover the element stresses.
pub fn solve_problem(spec: &ProblemSpec) -> Result<Solution> {
    let (k, load, ops) = assemble(spec)?;
    let reduced = apply_dirichlet(&k, &load, spec)?;
    let (x_red, stats) = solve_spd(&reduced.k, &reduced.rhs)?;
    let u = reduced.expand(&x_red);

    let stress = match &ops {
        ElementOps::Bilinear => StressField { mode: None, beta: Vec::new() },
        ElementOps::Hybrid(mats) => {
            let mut beta = Vec::with_capacity(mats.len());
            for (e, em) in mats.iter().enumerate() {
                let ids = spec.mesh.elements[e].node_ids;
                let mut q = SVector::<f64, 8>::zeros();
                for (i, id) in ids.iter().enumerate() {
                    q[2 * i] = u[2 * id];
                    q[2 * i + 1] = u[2 * id + 1];
                }
                beta.push(em.recover_stress(&q));
            }
            StressField { mode: spec.element_kind.stress_mode(), beta }
        }
    };

    Ok(Solution {
        mesh: spec.mesh.clone(),
        material: spec.material,
        element_kind: spec.element_kind,
        u,
        stress,
        stats,
    })
}

/// Residual of the displacement equation recomputed by direct quadrature of
/// the recovered stress (4×4 Gauss), independent of the assembled matrix.
/// Returns one value per free DOF.
pub fn galerkin_residual(sol: &Solution, spec: &ProblemSpec) -> Result<Vec<f64>> {
    let mesh = &spec.mesh;
    let n_dofs = 2 * mesh.nodes.len();
    let mut r = vec![0.0; n_dofs];
    let rule = QuadratureRule::gauss(4);
    for e in 0..mesh.elements.len() {
        let g = mesh.geometry(e)?;
        let ids = mesh.elements[e].node_ids;
        for &(xi, eta, w) in &rule.points {
            let s = sol.stress_at(&g, e, xi, eta)?;
            let b = strain_displacement(&g, xi, eta)?;
            let wj = w * g.jacobian(xi, eta);
            for l in 0..8 {
                let eps = [b[(0, l)], b[(1, l)], b[(2, l)]];
                let val = s.s11 * eps[0] + s.s22 * eps[1] + s.s12 * eps[2];
                r[2 * ids[l / 2] + (l % 2)] += wj * val;
            }
        }
    }
    // Subtract F(v): same quadratures as assembly.
    let (_, load, _) = assemble(spec)?;
    for (ri, li) in r.iter_mut().zip(&load) {
        *ri -= li;
    }
    // Keep only free DOFs.
    let mut dirichlet = vec![false; n_dofs];
    for edge in &mesh.edges {
        if edge.label == BoundaryLabel::Dirichlet {
            for &nid in &edge.nodes {
                dirichlet[2 * nid] = true;
                dirichlet[2 * nid + 1] = true;
            }
        }
    }
    Ok(r.into_iter()
        .zip(dirichlet)
        .filter_map(|(v, d)| (!d).then_some(v))
        .collect())
}
