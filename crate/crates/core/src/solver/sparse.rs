//! Symmetric sparse storage and a direct profile (skyline) Cholesky solver.
//!
//! System sizes here are a few thousand DOFs with grid-like numbering, so a
//! profile factorization with iterative refinement is simple, deterministic,
//! and far below the residual contract of 1e-10.

use crate::error::{FemError, Result};
use serde::Serialize;

/// Symmetric sparse matrix; only entries with `row <= col` are stored.
#[derive(Debug, Clone)]
pub struct SparseSym {
    n: usize,
    /// CSR over the upper triangle (diagonal included).
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseSym {
    /// Builds from (row, col, value) triplets; duplicates are summed and
    /// entries are mirrored into the upper triangle.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut per_row: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for &(r, c, v) in triplets {
            let (r, c) = if r <= c { (r, c) } else { (c, r) };
            per_row[r].push((c, v));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for row in &mut per_row {
            row.sort_by_key(|&(c, _)| c);
            let mut last: Option<usize> = None;
            for &(c, v) in row.iter() {
                if last == Some(c) {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(c);
                    values.push(v);
                    last = Some(c);
                }
            }
            row_ptr.push(col_idx.len());
        }
        SparseSym { n, row_ptr, col_idx, values }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// y = A x with the symmetric completion of the stored triangle.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for r in 0..self.n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.col_idx[k];
                let v = self.values[k];
                y[r] += v * x[c];
                if c != r {
                    y[c] += v * x[r];
                }
            }
        }
        y
    }

    /// r = b − A x accumulated with compensated products and sums, so the
    /// residual stays meaningful beyond the plain-f64 floor on
    /// ill-conditioned systems (near-incompressible materials).
    pub fn residual_compensated(&self, x: &[f64], b: &[f64]) -> Vec<f64> {
        let mut main = b.to_vec();
        let mut err = vec![0.0; self.n];
        let add = |main: &mut [f64], err: &mut [f64], i: usize, p: f64, pe: f64| {
            // two-sum of main[i] and -p, error pushed to err[i]
            let s = main[i] - p;
            let bv = s - main[i];
            let e = (main[i] - (s - bv)) + (-p - bv);
            main[i] = s;
            err[i] += e - pe;
        };
        for r in 0..self.n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.col_idx[k];
                let v = self.values[k];
                let p = v * x[c];
                let pe = v.mul_add(x[c], -p);
                add(&mut main, &mut err, r, p, pe);
                if c != r {
                    let p = v * x[r];
                    let pe = v.mul_add(x[r], -p);
                    add(&mut main, &mut err, c, p, pe);
                }
            }
        }
        main.iter().zip(&err).map(|(m, e)| m + e).collect()
    }

    /// Iterates stored (upper-triangle) entries.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |r| {
            (self.row_ptr[r]..self.row_ptr[r + 1])
                .map(move |k| (r, self.col_idx[k], self.values[k]))
        })
    }
}

/// Outcome bookkeeping of one linear solve.
#[derive(Debug, Clone, Serialize)]
pub struct SolveStats {
    pub method: &'static str,
    pub refinement_steps: usize,
    pub residual: f64,
    pub factor_nnz: usize,
}

/// Row-profile Cholesky factor L (lower triangle, dense within each row's
/// profile [first(i), i]).
struct ProfileCholesky {
    n: usize,
    first: Vec<usize>,
    start: Vec<usize>,
    vals: Vec<f64>,
}

impl ProfileCholesky {
    fn factor(a: &SparseSym) -> Result<Self> {
        let n = a.n;
        // Row profile of the lower triangle = column profile of the stored
        // upper triangle.
        let mut first: Vec<usize> = (0..n).collect();
        for (r, c, _) in a.entries() {
            if r < first[c] {
                first[c] = r;
            }
        }
        let mut start = vec![0usize; n + 1];
        for i in 0..n {
            start[i + 1] = start[i] + (i - first[i] + 1);
        }
        let mut vals = vec![0.0; start[n]];
        // Scatter A (by symmetry, entry (r,c) of the upper triangle lands
        // in row c, column r of the lower triangle).
        for (r, c, v) in a.entries() {
            vals[start[c] + (r - first[c])] = v;
        }

        let at = |i: usize, j: usize, start: &[usize], first: &[usize]| start[i] + (j - first[i]);
        for i in 0..n {
            for j in first[i]..i {
                let lo = first[i].max(first[j]);
                let mut s = vals[at(i, j, &start, &first)];
                for k in lo..j {
                    s -= vals[at(i, k, &start, &first)] * vals[at(j, k, &start, &first)];
                }
                vals[at(i, j, &start, &first)] = s / vals[at(j, j, &start, &first)];
            }
            let mut d = vals[at(i, i, &start, &first)];
            for k in first[i]..i {
                let l = vals[at(i, k, &start, &first)];
                d -= l * l;
            }
            if d <= 0.0 || !d.is_finite() {
                return Err(FemError::FactorizationFailed { row: i, value: d });
            }
            vals[at(i, i, &start, &first)] = d.sqrt();
        }
        Ok(ProfileCholesky { n, first, start, vals })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        // Forward: L y = b.
        for i in 0..self.n {
            let row = &self.vals[self.start[i]..self.start[i + 1]];
            let f = self.first[i];
            let mut s = x[i];
            for (k, &l) in row[..row.len() - 1].iter().enumerate() {
                s -= l * x[f + k];
            }
            x[i] = s / row[row.len() - 1];
        }
        // Backward: Lᵀ x = y.
        for i in (0..self.n).rev() {
            let row = &self.vals[self.start[i]..self.start[i + 1]];
            let f = self.first[i];
            x[i] /= row[row.len() - 1];
            let xi = x[i];
            for (k, &l) in row[..row.len() - 1].iter().enumerate() {
                x[f + k] -= l * xi;
            }
        }
        x
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Direct SPD solve with iterative refinement down to a relative residual
/// of 1e-10 (usually one refinement step lands near machine precision).
///
/// When the right-hand side is small against ‖A‖·‖x‖ (happens for the
/// near-incompressible benchmarks with homogeneous Dirichlet data) the
/// 1e-10 relative residual is not representable by any f64 solution
/// vector; the solve is then accepted once the normwise backward error
/// ‖r‖/(‖A‖·‖x‖ + ‖b‖) reaches the f64 floor, with the achieved residual
/// recorded in the stats.
pub fn solve_spd(a: &SparseSym, rhs: &[f64]) -> Result<(Vec<f64>, SolveStats)> {
    const TOL: f64 = 1e-10;
    const BACKWARD_TOL: f64 = 5e-15;
    const MAX_REFINE: usize = 5;
    assert_eq!(a.dim(), rhs.len());
    if a.dim() == 0 {
        return Ok((
            Vec::new(),
            SolveStats { method: "profile-cholesky", refinement_steps: 0, residual: 0.0, factor_nnz: 0 },
        ));
    }
    let chol = ProfileCholesky::factor(a)?;
    let rhs_norm = norm(rhs);
    let mut x = chol.solve(rhs);
    let mut steps = 0;
    let relres = |x: &[f64]| {
        if rhs_norm == 0.0 {
            0.0
        } else {
            norm(&a.residual_compensated(x, rhs)) / rhs_norm
        }
    };
    let mut rel = relres(&x);
    while rel > TOL && steps < MAX_REFINE {
        let r = a.residual_compensated(&x, rhs);
        let dx = chol.solve(&r);
        for (xi, di) in x.iter_mut().zip(&dx) {
            *xi += di;
        }
        steps += 1;
        rel = relres(&x);
    }
    if rel > TOL {
        let fro = {
            let mut s = 0.0;
            for (r, c, v) in a.entries() {
                s += if r == c { v * v } else { 2.0 * v * v };
            }
            s.sqrt()
        };
        let backward = rel * rhs_norm / (fro * norm(&x) + rhs_norm);
        if backward > BACKWARD_TOL {
            return Err(FemError::NotConverged { residual: rel });
        }
    }
    Ok((
        x,
        SolveStats {
            method: "profile-cholesky",
            refinement_steps: steps,
            residual: rel,
            factor_nnz: chol.vals.len(),
        },
    ))
}
