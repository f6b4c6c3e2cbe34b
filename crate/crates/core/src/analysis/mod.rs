//! Error measurement against exact solutions and convergence rates.

pub mod estimator;

pub use estimator::{div_stress, efficiency_terms, estimator, EfficiencyTerms, EstimatorBreakdown};

use crate::elements::quadrature::QuadratureRule;
use crate::elements::{Material, SymTensor2};
use crate::error::{FemError, Result};
use crate::solver::Solution;
use serde::Serialize;

/// An exact solution with all the fields the benchmarks and the estimator
/// consume. The closures must be mutually consistent; [`ExactSolution::audit`]
/// checks that numerically.
pub struct ExactSolution {
    pub u: Box<dyn Fn(f64, f64) -> [f64; 2] + Send + Sync>,
    /// Full gradient [[u_x, u_y], [v_x, v_y]].
    pub grad_u: Box<dyn Fn(f64, f64) -> [[f64; 2]; 2] + Send + Sync>,
    pub sigma: Box<dyn Fn(f64, f64) -> SymTensor2 + Send + Sync>,
    pub body_force: Box<dyn Fn(f64, f64) -> [f64; 2] + Send + Sync>,
    pub traction: Box<dyn Fn(f64, f64, u32) -> [f64; 2] + Send + Sync>,
    pub material: Material,
}

/// 5-point central first derivative, exact for polynomials up to degree 5.
fn fd_derivative(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

impl ExactSolution {
    /// Internal-consistency audit: σ = C ε(u) (via the analytic gradient),
    /// the gradient against finite differences of `u`, and −div σ = f via
    /// finite differences of `sigma`, at 100 pseudo-random interior points
    /// of `bbox`. Returns the maximum deviation scaled by the local field
    /// magnitude.
    pub fn audit(&self, bbox: [f64; 4]) -> f64 {
        let h = 0.01;
        let margin = 2.5 * h;
        let mut state: u64 = 0x9E3779B97F4A7C15;
        let mut next = || {
            // xorshift64*; deterministic sample points.
            state ^= state >> 12;
            state ^= state << 25;
            state ^= state >> 27;
            (state.wrapping_mul(0x2545F4914F6CDD1D) >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let x = bbox[0] + margin + (bbox[2] - bbox[0] - 2.0 * margin) * next();
            let y = bbox[1] + margin + (bbox[3] - bbox[1] - 2.0 * margin) * next();

            let grad = (self.grad_u)(x, y);
            let eps = SymTensor2::new(grad[0][0], grad[1][1], 0.5 * (grad[0][1] + grad[1][0]));
            let sig = (self.sigma)(x, y);
            let from_law = self.material.c_apply(eps);
            let scale_s = 1.0 + sig.norm_sq().sqrt();
            worst = worst.max((sig.s11 - from_law.s11).abs() / scale_s);
            worst = worst.max((sig.s22 - from_law.s22).abs() / scale_s);
            worst = worst.max((sig.s12 - from_law.s12).abs() / scale_s);

            for comp in 0..2 {
                let dx = fd_derivative(|t| (self.u)(t, y)[comp], x, h);
                let dy = fd_derivative(|t| (self.u)(x, t)[comp], y, h);
                let scale_u = 1.0 + grad[comp][0].abs() + grad[comp][1].abs();
                worst = worst.max((dx - grad[comp][0]).abs() / scale_u);
                worst = worst.max((dy - grad[comp][1]).abs() / scale_u);
            }

            let div = [
                fd_derivative(|t| (self.sigma)(t, y).s11, x, h)
                    + fd_derivative(|t| (self.sigma)(x, t).s12, y, h),
                fd_derivative(|t| (self.sigma)(t, y).s12, x, h)
                    + fd_derivative(|t| (self.sigma)(x, t).s22, y, h),
            ];
            let f = (self.body_force)(x, y);
            let scale_f = 1.0 + f[0].abs() + f[1].abs() + sig.norm_sq().sqrt();
            worst = worst.max((div[0] + f[0]).abs() / scale_f);
            worst = worst.max((div[1] + f[1]).abs() / scale_f);
        }
        worst
    }
}

/// Relative errors of a discrete solution, plus the estimator-side fields
/// filled in by benchmark drivers.
#[derive(Debug, Clone, Serialize, Default)]
pub struct ErrorReport {
    /// ‖σ − σ_h‖ / ‖σ‖ (L2).
    pub e_stress_rel: f64,
    /// |u − u_h| / |u| (H1 seminorm, full gradient).
    pub e_disp_rel: f64,
    /// Combined relative error e_r.
    pub e_total_rel: f64,
    /// η_h over the exact combined energy; zero until an estimator run
    /// fills it in.
    pub eta_rel: f64,
    /// eta_rel / e_total_rel.
    pub ratio: f64,
    /// Pressure error ‖p − p_h‖ / ‖p‖ with p = −½ tr σ (absolute error
    /// when the exact pressure vanishes identically).
    pub e_pressure_rel: f64,
    /// sqrt(‖σ‖² + |u|²): the normalization used for eta_rel.
    pub exact_energy: f64,
}

/// Error norms by 5×5 Gauss per element. The same quadrature accumulates
/// the exact-field norms used for the relative forms.
pub fn error_norms(sol: &Solution, exact: &ExactSolution) -> Result<ErrorReport> {
    let mesh = &sol.mesh;
    if sol.u.len() != 2 * mesh.nodes.len()
        || (sol.stress.mode.is_some() && sol.stress.beta.len() != mesh.elements.len())
    {
        return Err(FemError::MeshMismatch);
    }
    let rule = QuadratureRule::gauss(5);
    let (mut num_s, mut den_s) = (0.0, 0.0);
    let (mut num_u, mut den_u) = (0.0, 0.0);
    let (mut num_p, mut den_p) = (0.0, 0.0);
    for e in 0..mesh.elements.len() {
        let g = mesh.geometry(e)?;
        for &(xi, eta, w) in &rule.points {
            let wj = w * g.jacobian(xi, eta);
            let [x, y] = g.map(xi, eta);

            let s_exact = (exact.sigma)(x, y);
            let s_h = sol.stress_at(&g, e, xi, eta)?;
            num_s += wj * (s_exact - s_h).norm_sq();
            den_s += wj * s_exact.norm_sq();

            let g_exact = (exact.grad_u)(x, y);
            let g_h = sol.grad_at(&g, e, xi, eta)?;
            let mut d2 = 0.0;
            let mut e2 = 0.0;
            for i in 0..2 {
                for j in 0..2 {
                    d2 += (g_exact[i][j] - g_h[i][j]).powi(2);
                    e2 += g_exact[i][j].powi(2);
                }
            }
            num_u += wj * d2;
            den_u += wj * e2;

            let p_exact = -0.5 * s_exact.trace();
            let p_h = -0.5 * s_h.trace();
            num_p += wj * (p_exact - p_h).powi(2);
            den_p += wj * p_exact.powi(2);
        }
    }
    let e_stress_rel = (num_s / den_s).sqrt();
    let e_disp_rel = (num_u / den_u).sqrt();
    let e_total_rel = ((num_s + num_u) / (den_s + den_u)).sqrt();
    let e_pressure_rel = if den_p > 1e-28 {
        (num_p / den_p).sqrt()
    } else {
        num_p.sqrt()
    };
    Ok(ErrorReport {
        e_stress_rel,
        e_disp_rel,
        e_total_rel,
        eta_rel: 0.0,
        ratio: 0.0,
        e_pressure_rel,
        exact_energy: (den_s + den_u).sqrt(),
    })
}

/// Observed convergence rates for a sequence of errors on meshes with
/// halving mesh size: rate = log2(e_L / e_{L+1}) per adjacent pair.
pub fn convergence_rates(errors: &[f64]) -> Result<Vec<f64>> {
    for &e in errors {
        if e <= 0.0 {
            return Err(FemError::NonPositiveError(e));
        }
    }
    Ok(errors
        .windows(2)
        .map(|w| (w[0] / w[1]).log2())
        .collect())
}
