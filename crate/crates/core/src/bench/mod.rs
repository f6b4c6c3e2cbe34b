//! Benchmark definitions: the three cantilever-beam test problems on the
//! regular and irregular mesh families, and single-case drivers.
//!
//! All three examples live on `[0,10] × [-1,1]` with E defaulting to 1500.
//! Examples 1 and 3 are plane stress, example 2 plane strain. The exact
//! solutions are nonzero on the clamped boundary, so Dirichlet data is
//! prescribed from the exact displacement there.
//!
//! Boundary splits:
//! - examples 1 and 2: Dirichlet at x = 0, Neumann elsewhere
//!   (x = 10 carries the bending traction, y = ±1 is traction-free);
//! - example 3: Neumann only at x = 10, Dirichlet on the rest.

pub mod tables;

pub use tables::{reproduce_table, TableReport};

use crate::analysis::{error_norms, estimator, ErrorReport, ExactSolution};
use crate::elements::{ElementKind, Material, MaterialKind};
use crate::error::{FemError, Result};
use crate::mesh::generate::{generate_irregular, generate_regular};
use crate::mesh::{BoundaryLabel, QuadMesh};
use crate::solver::{solve_problem, ProblemSpec, Solution};
use serde::Serialize;

/// Neumann tags used by the beam problems.
pub const TAG_RIGHT: u32 = 1;
pub const TAG_BOTTOM: u32 = 2;
pub const TAG_TOP: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MeshFamily {
    Regular,
    Irregular,
}

impl MeshFamily {
    pub fn name(&self) -> &'static str {
        match self {
            MeshFamily::Regular => "regular",
            MeshFamily::Irregular => "irregular",
        }
    }
}

/// One benchmark run: example, element, mesh, material parameters.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BenchmarkCase {
    pub example: u32,
    pub element: ElementKind,
    pub family: MeshFamily,
    /// Mesh level: 0 → 5×1, 1 → 10×2, ..., 4 → 80×16.
    pub level: usize,
    pub nu: f64,
    pub young: f64,
}

impl BenchmarkCase {
    pub fn new(example: u32, element: ElementKind, family: MeshFamily, level: usize) -> Self {
        BenchmarkCase { example, element, family, level, nu: 0.25, young: 1500.0 }
    }

    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nu = nu;
        self
    }

    pub fn material_kind(&self) -> MaterialKind {
        if self.example == 2 {
            MaterialKind::PlaneStrain
        } else {
            MaterialKind::PlaneStress
        }
    }

    pub fn material(&self) -> Material {
        Material::new(self.young, self.nu, self.material_kind())
    }

    pub fn mesh_name(&self) -> String {
        format!("{}x{}", 5 << self.level, 1 << self.level)
    }
}

/// The exact solution of one example for a given material.
pub fn exact_solution(example: u32, material: Material) -> Result<ExactSolution> {
    let e = material.young;
    let nu = material.nu;
    match example {
        1 => Ok(ExactSolution {
            u: Box::new(move |x, y| [-2.0 * x * y, x * x + nu * (y * y - 1.0)]),
            grad_u: Box::new(move |x, y| [[-2.0 * y, -2.0 * x], [2.0 * x, 2.0 * nu * y]]),
            sigma: Box::new(move |_, y| crate::elements::SymTensor2::new(-2.0 * e * y, 0.0, 0.0)),
            body_force: Box::new(|_, _| [0.0, 0.0]),
            traction: Box::new(move |_, y, tag| {
                if tag == TAG_RIGHT {
                    [-2.0 * e * y, 0.0]
                } else {
                    [0.0, 0.0]
                }
            }),
            material,
        }),
        2 => {
            let c = 1.0 - nu * nu;
            Ok(ExactSolution {
                u: Box::new(move |x, y| {
                    [-2.0 * c * x * y, c * x * x + nu * (1.0 + nu) * (y * y - 1.0)]
                }),
                grad_u: Box::new(move |x, y| {
                    [
                        [-2.0 * c * y, -2.0 * c * x],
                        [2.0 * c * x, 2.0 * nu * (1.0 + nu) * y],
                    ]
                }),
                sigma: Box::new(move |_, y| crate::elements::SymTensor2::new(-2.0 * e * y, 0.0, 0.0)),
                body_force: Box::new(|_, _| [0.0, 0.0]),
                traction: Box::new(move |_, y, tag| {
                    if tag == TAG_RIGHT {
                        [-2.0 * e * y, 0.0]
                    } else {
                        [0.0, 0.0]
                    }
                }),
                material,
            })
        }
        3 => {
            let c = (nu + 1.0) / e;
            Ok(ExactSolution {
                u: Box::new(move |x, y| [c * y.powi(4), c * x.powi(4)]),
                grad_u: Box::new(move |x, y| {
                    [[0.0, 4.0 * c * y.powi(3)], [4.0 * c * x.powi(3), 0.0]]
                }),
                sigma: Box::new(move |x, y| {
                    crate::elements::SymTensor2::new(0.0, 0.0, 2.0 * (x.powi(3) + y.powi(3)))
                }),
                body_force: Box::new(|x, y| [-6.0 * y * y, -6.0 * x * x]),
                traction: Box::new(move |_, y, tag| {
                    if tag == TAG_RIGHT {
                        [0.0, 2000.0 + 2.0 * y.powi(3)]
                    } else {
                        [0.0, 0.0]
                    }
                }),
                material,
            })
        }
        other => Err(FemError::UnknownExample(other)),
    }
}

/// Boundary classification of one example, by edge-midpoint test.
pub fn boundary_spec(example: u32) -> impl Fn(f64, f64) -> BoundaryLabel {
    move |x, y| {
        let tol = 1e-9;
        if (x - 0.0).abs() < tol {
            return BoundaryLabel::Dirichlet;
        }
        if (x - 10.0).abs() < tol {
            return BoundaryLabel::Neumann(TAG_RIGHT);
        }
        let (bottom, top) = ((y + 1.0).abs() < tol, (y - 1.0).abs() < tol);
        match example {
            3 => BoundaryLabel::Dirichlet,
            _ if bottom => BoundaryLabel::Neumann(TAG_BOTTOM),
            _ if top => BoundaryLabel::Neumann(TAG_TOP),
            _ => BoundaryLabel::Neumann(0),
        }
    }
}

/// Beam mesh of one family and level, with edges labeled for the example.
pub fn case_mesh(example: u32, family: MeshFamily, level: usize) -> Result<QuadMesh> {
    let mut mesh = match family {
        MeshFamily::Regular => generate_regular(5 << level, 1 << level, (0.0, 10.0), (-1.0, 1.0)),
        MeshFamily::Irregular => generate_irregular(level),
    };
    mesh.build_edges(boundary_spec(example))?;
    Ok(mesh)
}

/// Full problem specification of a benchmark case.
pub fn problem_spec(case: &BenchmarkCase) -> Result<ProblemSpec> {
    let material = case.material();
    let exact = exact_solution(case.example, material)?;
    let mesh = case_mesh(case.example, case.family, case.level)?;
    Ok(ProblemSpec {
        mesh,
        material,
        element_kind: case.element,
        body_force: exact.body_force,
        traction: exact.traction,
        dirichlet_value: exact.u,
    })
}

/// One row of benchmark output.
#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub example: u32,
    pub element: &'static str,
    pub family: &'static str,
    pub mesh: String,
    pub nu: f64,
    pub e_disp: f64,
    pub e_stress: f64,
    pub e_total: f64,
    pub eta_rel: f64,
    pub ratio: f64,
    pub e_pressure: f64,
    pub residual: f64,
}

/// Solves one case and measures everything: error norms, the estimator,
/// and their ratio.
pub fn run_case(case: &BenchmarkCase) -> Result<TableRow> {
    let (_, report, row) = run_case_full(case)?;
    let _ = report;
    Ok(row)
}

/// Like [`run_case`] but also returns the solution and full report for
/// callers that post-process (per-element estimator maps, sweeps).
pub fn run_case_full(case: &BenchmarkCase) -> Result<(Solution, ErrorReport, TableRow)> {
    let spec = problem_spec(case)?;
    let exact = exact_solution(case.example, case.material())?;
    let sol = solve_problem(&spec)?;
    let mut report = error_norms(&sol, &exact)?;
    let est = estimator(&sol, &spec)?;
    report.eta_rel = est.eta / report.exact_energy;
    report.ratio = report.eta_rel / report.e_total_rel;
    let row = TableRow {
        example: case.example,
        element: case.element.name(),
        family: case.family.name(),
        mesh: case.mesh_name(),
        nu: case.nu,
        e_disp: report.e_disp_rel,
        e_stress: report.e_stress_rel,
        e_total: report.e_total_rel,
        eta_rel: report.eta_rel,
        ratio: report.ratio,
        e_pressure: report.e_pressure_rel,
        residual: sol.stats.residual,
    };
    Ok((sol, report, row))
}
