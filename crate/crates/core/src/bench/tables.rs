//! Reference benchmark tables and their reproduction.
//!
//! The twelve tables cover the three beam examples: displacement and stress
//! errors for bilinear/PS/ECQ4 on both mesh families (tables 1-9) and the
//! estimator study (tables 10-12, where table 10/11 values are stored in
//! their published 1e-4 scaling already applied).
//!
//! Tolerance bands: 0.5% on regular-mesh error norms, 2% on irregular ones
//! (the irregular node positions are reconstructed from figure annotations),
//! 5% on estimator quantities and ratios, and 1e-9 absolute for exact-zero
//! cells. One ECQ4 cell (ν=0.49999, irregular 5×1) appears to repeat the PS
//! value in the reference data and gets the 5% band.

use super::{run_case, BenchmarkCase, MeshFamily, TableRow};
use crate::elements::ElementKind;
use crate::error::{FemError, Result};
use serde::Serialize;
use std::collections::HashMap;
use std::fmt::Write as _;

const NU_LIST: [f64; 4] = [0.49, 0.499, 0.4999, 0.49999];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Quantity {
    DispError,
    StressError,
    EtaRel,
    TotalError,
    Ratio,
}

impl Quantity {
    fn name(&self) -> &'static str {
        match self {
            Quantity::DispError => "e_disp",
            Quantity::StressError => "e_stress",
            Quantity::EtaRel => "eta_r",
            Quantity::TotalError => "e_r",
            Quantity::Ratio => "ratio",
        }
    }

    fn extract(&self, row: &TableRow) -> f64 {
        match self {
            Quantity::DispError => row.e_disp,
            Quantity::StressError => row.e_stress,
            Quantity::EtaRel => row.eta_rel,
            Quantity::TotalError => row.e_total,
            Quantity::Ratio => row.ratio,
        }
    }
}

struct CellDef {
    row: String,
    quantity: Quantity,
    case: BenchmarkCase,
    reference: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CellResult {
    pub row: String,
    pub mesh: String,
    pub family: &'static str,
    pub quantity: &'static str,
    pub computed: f64,
    pub reference: f64,
    /// Relative deviation, or the computed value itself for zero-reference
    /// cells.
    pub deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableReport {
    pub id: u32,
    pub title: String,
    pub cells: Vec<CellResult>,
}

impl TableReport {
    pub fn all_pass(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }

    /// CSV with 6 significant digits, computed and reference side by side.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "table,row,family,mesh,quantity,computed,reference,deviation,pass").unwrap();
        for c in &self.cells {
            writeln!(
                out,
                "{},{},{},{},{},{:.5e},{:.5e},{:.2e},{}",
                self.id, c.row, c.family, c.mesh, c.quantity, c.computed, c.reference, c.deviation, c.pass
            )
            .unwrap();
        }
        out
    }
}

/// Eight cases per table row: four regular levels then four irregular ones.
fn eight_columns(
    rows: &mut Vec<CellDef>,
    label: &str,
    quantity: Quantity,
    base: BenchmarkCase,
    first_level: usize,
    refs: &[f64; 8],
) {
    for (i, family) in [MeshFamily::Regular, MeshFamily::Irregular].into_iter().enumerate() {
        for k in 0..4 {
            let mut case = base;
            case.family = family;
            case.level = first_level + k;
            rows.push(CellDef {
                row: label.to_string(),
                quantity,
                case,
                reference: refs[4 * i + k],
            });
        }
    }
}

#[allow(clippy::type_complexity)]
fn table_defs(id: u32) -> Result<(String, Vec<CellDef>)> {
    let mut cells = Vec::new();
    let title;
    match id {
        1 | 2 => {
            let quantity = if id == 1 { Quantity::DispError } else { Quantity::StressError };
            title = format!(
                "Example 1: relative {} error, nu = 0.25",
                if id == 1 { "displacement H1" } else { "stress L2" }
            );
            let data: [(ElementKind, [f64; 8]); 3] = if id == 1 {
                [
                    (ElementKind::Bilinear, [0.3256, 0.1106, 0.03376, 0.01165, 0.5777, 0.2668, 0.09273, 0.02881]),
                    (ElementKind::Ps, [0.07269, 0.03635, 0.01817, 0.009087, 0.1429, 0.06303, 0.03113, 0.01552]),
                    (ElementKind::Ecq4, [0.07269, 0.03635, 0.01817, 0.009087, 0.1313, 0.06256, 0.03107, 0.01551]),
                ]
            } else {
                [
                    (ElementKind::Bilinear, [0.5062, 0.2951, 0.1545, 0.07826, 0.7242, 0.4854, 0.2809, 0.1481]),
                    (ElementKind::Ps, [0.0, 0.0, 0.0, 0.0, 0.2663, 0.05559, 0.01134, 0.002551]),
                    (ElementKind::Ecq4, [0.0, 0.0, 0.0, 0.0, 0.1780, 0.03517, 0.007324, 0.001666]),
                ]
            };
            for (elem, refs) in data {
                let base = BenchmarkCase::new(1, elem, MeshFamily::Regular, 0);
                eight_columns(&mut cells, elem.name(), quantity, base, 0, &refs);
            }
        }
        3..=7 => {
            let (elem, quantity) = match id {
                3 => (ElementKind::Bilinear, Quantity::DispError),
                4 => (ElementKind::Ps, Quantity::DispError),
                5 => (ElementKind::Ps, Quantity::StressError),
                6 => (ElementKind::Ecq4, Quantity::DispError),
                _ => (ElementKind::Ecq4, Quantity::StressError),
            };
            title = format!(
                "Example 2: relative {} error for {}",
                if quantity == Quantity::DispError { "displacement H1" } else { "stress L2" },
                elem.name()
            );
            let data: [[f64; 8]; 4] = match id {
                3 => [
                    [0.9253, 0.7547, 0.4353, 0.1620, 0.8862, 0.7641, 0.5351, 0.2597],
                    [0.9921, 0.9690, 0.8866, 0.6619, 0.9515, 0.9241, 0.8530, 0.6978],
                    [0.9992, 0.9968, 0.9874, 0.9514, 0.9615, 0.9567, 0.9446, 0.9067],
                    [0.9999, 0.9997, 0.9987, 0.9949, 0.9626, 0.9606, 0.9591, 0.9540],
                ],
                4 => [
                    [0.09759, 0.04879, 0.02440, 0.01220, 0.1557, 0.07342, 0.03649, 0.01822],
                    [0.09931, 0.04965, 0.02483, 0.01241, 0.1567, 0.07410, 0.03684, 0.01839],
                    [0.09948, 0.04974, 0.02487, 0.01244, 0.1569, 0.07418, 0.03688, 0.01841],
                    [0.09950, 0.04975, 0.02488, 0.01244, 0.1569, 0.07418, 0.03688, 0.01841],
                ],
                5 => [
                    [0.0, 0.0, 0.0, 0.0, 0.2286, 0.04566, 0.009326, 0.002094],
                    [0.0, 0.0, 0.0, 0.0, 0.2268, 0.0452, 0.009238, 0.002073],
                    [0.0, 0.0, 0.0, 0.0, 0.2266, 0.04516, 0.009229, 0.002071],
                    [0.0, 0.0, 0.0, 0.0, 0.2266, 0.04516, 0.009229, 0.002071],
                ],
                6 => [
                    [0.09759, 0.04879, 0.02440, 0.01220, 0.1512, 0.07321, 0.03647, 0.01821],
                    [0.09931, 0.04965, 0.02483, 0.01241, 0.1526, 0.07392, 0.03682, 0.01839],
                    [0.09948, 0.04974, 0.02487, 0.01244, 0.1527, 0.07399, 0.03686, 0.01841],
                    [0.09950, 0.04975, 0.02488, 0.01244, 0.1569, 0.07418, 0.03688, 0.01841],
                ],
                _ => [
                    [0.0, 0.0, 0.0, 0.0, 0.1780, 0.03456, 0.007270, 0.001661],
                    [0.0, 0.0, 0.0, 0.0, 0.1780, 0.03455, 0.007274, 0.001662],
                    [0.0, 0.0, 0.0, 0.0, 0.1780, 0.03455, 0.007275, 0.001662],
                    [0.0, 0.0, 0.0, 0.0, 0.1780, 0.03455, 0.007275, 0.001662],
                ],
            };
            for (nu, refs) in NU_LIST.into_iter().zip(data) {
                let base = BenchmarkCase::new(2, elem, MeshFamily::Regular, 0).with_nu(nu);
                eight_columns(&mut cells, &format!("nu={nu}"), quantity, base, 0, &refs);
            }
        }
        8 | 9 => {
            let quantity = if id == 8 { Quantity::DispError } else { Quantity::StressError };
            title = format!(
                "Example 3: relative {} error, nu = 0.25",
                if id == 8 { "displacement H1" } else { "stress L2" }
            );
            let data: [(ElementKind, [f64; 8]); 2] = if id == 8 {
                [
                    (ElementKind::Ps, [0.1022, 0.05120, 0.02561, 0.01281, 0.1815, 0.08968, 0.04470, 0.02233]),
                    (ElementKind::Ecq4, [0.1022, 0.05120, 0.02561, 0.01281, 0.1815, 0.08968, 0.04470, 0.02233]),
                ]
            } else {
                [
                    (ElementKind::Ps, [0.1022, 0.05120, 0.02561, 0.01281, 0.1806, 0.08590, 0.04239, 0.02113]),
                    (ElementKind::Ecq4, [0.1022, 0.05120, 0.02561, 0.01281, 0.1850, 0.09103, 0.04532, 0.02264]),
                ]
            };
            for (elem, refs) in data {
                let base = BenchmarkCase::new(3, elem, MeshFamily::Regular, 1);
                eight_columns(&mut cells, elem.name(), quantity, base, 1, &refs);
            }
        }
        10 | 11 => {
            let elem = if id == 10 { ElementKind::Ps } else { ElementKind::Ecq4 };
            title = format!("Example 2: a posteriori estimator study for {}", elem.name());
            // (η_r, e_r, ratio) per ν; η_r and e_r stored in units of 1e-4.
            let data: [([f64; 8], [f64; 8], [f64; 8]); 4] = if id == 10 {
                [
                    (
                        [4.3306, 2.1653, 1.0826, 0.5413, 500.41, 99.415, 21.676, 4.6915],
                        [3.5126, 1.7563, 0.8781, 0.4391, 452.18, 93.579, 21.203, 5.1370],
                        [1.23, 1.23, 1.23, 1.23, 1.11, 1.06, 1.02, 0.91],
                    ),
                    (
                        [4.3300, 2.1650, 1.0825, 0.5413, 496.40, 98.740, 21.586, 4.6974],
                        [3.5331, 1.7665, 0.8833, 0.4416, 447.56, 92.648, 20.981, 5.0817],
                        [1.23, 1.23, 1.23, 1.23, 1.11, 1.07, 1.03, 0.92],
                    ),
                    (
                        [4.3300, 2.1650, 1.0825, 0.5413, 496.00, 98.677, 21.585, 4.7100],
                        [3.5352, 1.7676, 0.8838, 0.4419, 447.10, 92.555, 20.959, 5.0764],
                        [1.22, 1.22, 1.22, 1.22, 1.11, 1.07, 1.03, 0.93],
                    ),
                    (
                        [4.3300, 2.1650, 1.0825, 0.5413, 495.96, 98.671, 21.585, 4.7117],
                        [3.5354, 1.7677, 0.8839, 0.4419, 447.05, 92.546, 20.957, 5.0759],
                        [1.22, 1.22, 1.22, 1.22, 1.11, 1.07, 1.03, 0.93],
                    ),
                ]
            } else {
                [
                    (
                        [4.3306, 2.1653, 1.0826, 0.5413, 480.69, 86.785, 18.365, 4.0010],
                        [3.5126, 1.7563, 0.8781, 0.4391, 359.44, 75.927, 17.426, 4.2483],
                        [1.23, 1.23, 1.23, 1.23, 1.34, 1.14, 1.05, 0.94],
                    ),
                    (
                        [4.3300, 2.1650, 1.0825, 0.5413, 480.66, 86.998, 18.514, 4.0744],
                        [3.5331, 1.7665, 0.8833, 0.4416, 359.37, 75.971, 17.436, 4.2495],
                        [1.23, 1.23, 1.23, 1.23, 1.34, 1.15, 1.06, 0.96],
                    ),
                    (
                        [4.3300, 2.1650, 1.0825, 0.5413, 480.66, 87.025, 18.538, 4.0941],
                        [3.5352, 1.7676, 0.8838, 0.4419, 359.37, 75.977, 17.437, 4.2500],
                        [1.22, 1.22, 1.22, 1.22, 1.34, 1.15, 1.06, 0.96],
                    ),
                    (
                        [4.3300, 2.1650, 1.0825, 0.5413, 480.66, 87.027, 18.540, 4.0965],
                        [3.5354, 1.7677, 0.8839, 0.4419, 359.37, 75.977, 17.437, 4.2501],
                        [1.22, 1.22, 1.22, 1.22, 1.34, 1.15, 1.06, 0.97],
                    ),
                ]
            };
            for (nu, (eta, er, ratio)) in NU_LIST.into_iter().zip(data) {
                let base = BenchmarkCase::new(2, elem, MeshFamily::Regular, 1).with_nu(nu);
                let eta_scaled: [f64; 8] = std::array::from_fn(|i| eta[i] * 1e-4);
                let er_scaled: [f64; 8] = std::array::from_fn(|i| er[i] * 1e-4);
                eight_columns(&mut cells, &format!("nu={nu}"), Quantity::EtaRel, base, 1, &eta_scaled);
                eight_columns(&mut cells, &format!("nu={nu}"), Quantity::TotalError, base, 1, &er_scaled);
                eight_columns(&mut cells, &format!("nu={nu}"), Quantity::Ratio, base, 1, &ratio);
            }
        }
        12 => {
            title = "Example 3: a posteriori estimator study".to_string();
            let data: [(ElementKind, [f64; 8], [f64; 8], [f64; 8]); 2] = [
                (
                    ElementKind::Ps,
                    [0.4260, 0.2152, 0.1081, 0.05420, 0.6232, 0.3137, 0.1579, 0.0793],
                    [0.1022, 0.0512, 0.0256, 0.0128, 0.1806, 0.0859, 0.0424, 0.0211],
                    [4.17, 4.20, 4.22, 4.23, 3.45, 3.65, 3.72, 3.75],
                ),
                (
                    ElementKind::Ecq4,
                    [0.4260, 0.2152, 0.1081, 0.0542, 0.5938, 0.3154, 0.1610, 0.0812],
                    [0.1022, 0.0512, 0.0256, 0.0128, 0.1850, 0.0910, 0.0453, 0.0226],
                    [4.17, 4.20, 4.22, 4.23, 3.21, 3.47, 3.55, 3.59],
                ),
            ];
            for (elem, eta, er, ratio) in data {
                let base = BenchmarkCase::new(3, elem, MeshFamily::Regular, 1);
                eight_columns(&mut cells, elem.name(), Quantity::EtaRel, base, 1, &eta);
                eight_columns(&mut cells, elem.name(), Quantity::TotalError, base, 1, &er);
                eight_columns(&mut cells, elem.name(), Quantity::Ratio, base, 1, &ratio);
            }
        }
        other => {
            return Err(FemError::Parse {
                line: 0,
                msg: format!("unknown table id {other} (valid: 1..=12)"),
            })
        }
    }
    Ok((title, cells))
}

fn cell_tolerance(table: u32, def: &CellDef) -> f64 {
    if def.reference == 0.0 {
        return 1e-9; // absolute
    }
    if (10..=12).contains(&table) {
        return 0.05;
    }
    // One ECQ4 cell repeats the PS value in the reference data.
    if table == 6
        && def.case.family == MeshFamily::Irregular
        && def.case.level == 0
        && def.case.nu == 0.49999
    {
        return 0.05;
    }
    match def.case.family {
        MeshFamily::Regular => 0.005,
        MeshFamily::Irregular => 0.02,
    }
}

type CaseKey = (u32, &'static str, &'static str, usize, u64);

fn case_key(c: &BenchmarkCase) -> CaseKey {
    (c.example, c.element.name(), c.family.name(), c.level, c.nu.to_bits())
}

/// Runs every cell of one reference table and reports computed vs reference
/// values with per-cell tolerance verdicts. Cases shared by several cells
/// (the estimator tables read three quantities per run) are solved once.
pub fn reproduce_table(id: u32) -> Result<TableReport> {
    let (title, defs) = table_defs(id)?;
    let mut cache: HashMap<CaseKey, TableRow> = HashMap::new();
    let mut cells = Vec::with_capacity(defs.len());
    for def in &defs {
        let key = case_key(&def.case);
        if !cache.contains_key(&key) {
            cache.insert(key, run_case(&def.case)?);
        }
        let row = &cache[&key];
        let computed = def.quantity.extract(row);
        let tolerance = cell_tolerance(id, def);
        let (deviation, pass) = if def.reference == 0.0 {
            (computed.abs(), computed.abs() <= tolerance)
        } else {
            let dev = (computed - def.reference).abs() / def.reference.abs();
            (dev, dev <= tolerance)
        };
        cells.push(CellResult {
            row: def.row.clone(),
            mesh: def.case.mesh_name(),
            family: def.case.family.name(),
            quantity: def.quantity.name(),
            computed,
            reference: def.reference,
            deviation,
            tolerance,
            pass,
        });
    }
    Ok(TableReport { id, title, cells })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_definitions_have_expected_shapes() {
        assert_eq!(table_defs(1).unwrap().1.len(), 3 * 8);
        assert_eq!(table_defs(3).unwrap().1.len(), 4 * 8);
        assert_eq!(table_defs(10).unwrap().1.len(), 4 * 3 * 8);
        assert_eq!(table_defs(12).unwrap().1.len(), 2 * 3 * 8);
        assert!(table_defs(13).is_err());
        assert!(table_defs(0).is_err());
    }

    #[test]
    fn csv_has_header_and_rows() {
        // Cheap smoke test on the smallest table: only shape, no solves of
        // the big meshes.
        let report = reproduce_table(1).unwrap();
        let csv = report.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 24);
        assert!(lines[0].starts_with("table,row,family,mesh"));
    }
}
