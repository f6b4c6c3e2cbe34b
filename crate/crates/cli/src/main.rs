//! Command-line front end: mesh generation, single benchmark runs, table
//! reproduction, convergence sweeps, and per-element estimator maps.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on numerical failures.

use clap::{Args, Parser, Subcommand, ValueEnum};
use hsfem::analysis::{convergence_rates, estimator};
use hsfem::bench::{
    case_mesh, problem_spec, reproduce_table, run_case, run_case_full, BenchmarkCase, MeshFamily,
};
use hsfem::elements::ElementKind;
use hsfem::mesh::io::write_mesh;
use hsfem::FemError;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hsfem", version, about = "Hybrid-stress quadrilateral benchmarks for plane elasticity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ElementArg {
    Ps,
    Ecq4,
    Bilinear,
}

impl From<ElementArg> for ElementKind {
    fn from(e: ElementArg) -> Self {
        match e {
            ElementArg::Ps => ElementKind::Ps,
            ElementArg::Ecq4 => ElementKind::Ecq4,
            ElementArg::Bilinear => ElementKind::Bilinear,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Regular,
    Irregular,
}

impl From<FamilyArg> for MeshFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Regular => MeshFamily::Regular,
            FamilyArg::Irregular => MeshFamily::Irregular,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct CaseArgs {
    /// Benchmark example id (1, 2, or 3)
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
    example: u32,
    /// Element formulation
    #[arg(long, value_enum)]
    element: ElementArg,
    /// Mesh family
    #[arg(long, value_enum, default_value = "regular")]
    mesh_family: FamilyArg,
    /// Mesh level: 0 → 5×1, 1 → 10×2, ..., 4 → 80×16
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=6))]
    level: u8,
    /// Poisson ratio (strictly between 0 and 0.5)
    #[arg(long, default_value_t = 0.25)]
    nu: f64,
    /// Young's modulus
    #[arg(long = "E", default_value_t = 1500.0)]
    young: f64,
}

impl CaseArgs {
    fn case(&self) -> Result<BenchmarkCase, String> {
        if !(self.nu > 0.0 && self.nu < 0.5) {
            return Err(format!("--nu must lie strictly in (0, 0.5), got {}", self.nu));
        }
        if self.young <= 0.0 {
            return Err(format!("--E must be positive, got {}", self.young));
        }
        let mut case = BenchmarkCase::new(
            self.example,
            self.element.into(),
            self.mesh_family.into(),
            self.level as usize,
        );
        case.nu = self.nu;
        case.young = self.young;
        Ok(case)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark mesh and export it in the text format
    Mesh {
        #[arg(long, value_enum, default_value = "regular")]
        mesh_family: FamilyArg,
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=6))]
        level: u8,
        /// Boundary labels follow this example's split
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=3))]
        example: u32,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve a single benchmark case and report its error row
    Run {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also dump the full solution (displacements, stress parameters)
        #[arg(long)]
        solution: bool,
    },
    /// Reproduce one of the twelve reference tables
    Table {
        #[arg(value_parser = clap::value_parser!(u32).range(1..=12))]
        id: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a case across mesh levels and report convergence rates
    Sweep {
        #[command(flatten)]
        case: CaseArgs,
        /// First mesh level (defaults to 1 for example 3, else 0)
        #[arg(long)]
        min_level: Option<u8>,
        /// Number of levels in the sweep
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(2..=6))]
        levels: u8,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-element estimator map of one case
    Estimate {
        #[command(flatten)]
        case: CaseArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), FemError> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(FemError::from),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn row_csv(rows: &[hsfem::bench::TableRow]) -> String {
    let mut s = String::from("example,element,family,mesh,nu,e_disp,e_stress,e_r,eta_r,ratio,residual\n");
    for r in rows {
        writeln!(
            s,
            "{},{},{},{},{},{:.5e},{:.5e},{:.5e},{:.5e},{:.5e},{:.2e}",
            r.example, r.element, r.family, r.mesh, r.nu, r.e_disp, r.e_stress, r.e_total, r.eta_rel, r.ratio, r.residual
        )
        .unwrap();
    }
    s
}

fn real_main(cli: Cli) -> Result<(), FemError> {
    match cli.command {
        Command::Mesh { mesh_family, level, example, out } => {
            let mesh = case_mesh(example, mesh_family.into(), level as usize)?;
            write_mesh(&mesh, &out)?;
            eprintln!(
                "wrote {} nodes, {} elements, {} edges to {}",
                mesh.nodes.len(),
                mesh.elements.len(),
                mesh.edges.len(),
                out.display()
            );
        }
        Command::Run { case, format, out, solution } => {
            let case = case.case().map_err(FemError::Io)?;
            if solution {
                let (sol, _, row) = run_case_full(&case)?;
                let mut doc = sol.export_json();
                doc["row"] = serde_json::to_value(&row).unwrap();
                emit(&out, &format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))?;
            } else {
                let row = run_case(&case)?;
                let content = match format {
                    FormatArg::Json => format!("{}\n", serde_json::to_string_pretty(&row).unwrap()),
                    FormatArg::Csv => row_csv(std::slice::from_ref(&row)),
                };
                emit(&out, &content)?;
            }
        }
        Command::Table { id, format, out } => {
            let report = reproduce_table(id)?;
            let content = match format {
                FormatArg::Csv => report.to_csv(),
                FormatArg::Json => format!("{}\n", serde_json::to_string_pretty(&report).unwrap()),
            };
            emit(&out, &content)?;
            let (pass, total) = (
                report.cells.iter().filter(|c| c.pass).count(),
                report.cells.len(),
            );
            eprintln!("table {id}: {pass}/{total} cells within tolerance");
        }
        Command::Sweep { case, min_level, levels, format, out } => {
            let base = case.case().map_err(FemError::Io)?;
            let first = min_level.unwrap_or(if base.example == 3 { 1 } else { 0 }) as usize;
            let mut rows = Vec::new();
            for level in first..first + levels as usize {
                let mut c = base;
                c.level = level;
                rows.push(run_case(&c)?);
            }
            let disp: Vec<f64> = rows.iter().map(|r| r.e_disp).collect();
            let stress: Vec<f64> = rows.iter().map(|r| r.e_stress).collect();
            let rate_disp = convergence_rates(&disp)?;
            let rate_stress = convergence_rates(&stress)?;
            let content = match format {
                FormatArg::Json => {
                    let doc = serde_json::json!({
                        "rows": rows,
                        "rate_disp": rate_disp,
                        "rate_stress": rate_stress,
                    });
                    format!("{}\n", serde_json::to_string_pretty(&doc).unwrap())
                }
                FormatArg::Csv => {
                    let mut s = row_csv(&rows);
                    writeln!(s, "# rate_disp: {rate_disp:?}").unwrap();
                    writeln!(s, "# rate_stress: {rate_stress:?}").unwrap();
                    s
                }
            };
            emit(&out, &content)?;
        }
        Command::Estimate { case, out } => {
            let case = case.case().map_err(FemError::Io)?;
            let spec = problem_spec(&case)?;
            let (sol, _, row) = run_case_full(&case)?;
            let est = estimator(&sol, &spec)?;
            let mut s = String::from("elem,x,y,local_eta_sq\n");
            for (e, contrib) in est.per_element.iter().enumerate() {
                let g = sol.mesh.geometry(e)?;
                let [x, y] = g.map(0.0, 0.0);
                writeln!(s, "{e},{x:.6},{y:.6},{contrib:.6e}").unwrap();
            }
            writeln!(
                s,
                "# eta = {:.6e}, eta_r = {:.6e}, volume_sq = {:.6e}, constitutive_sq = {:.6e}, jump_sq = {:.6e}",
                est.eta, row.eta_rel, est.volume_sq, est.constitutive_sq, est.jump_sq
            )
            .unwrap();
            emit(&out, &s)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            // Help and version requests are not usage errors.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            return ExitCode::from(code);
        }
    };
    match real_main(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
