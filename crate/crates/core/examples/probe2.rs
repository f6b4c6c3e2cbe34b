use hsfem::bench::{problem_spec, BenchmarkCase, MeshFamily};
use hsfem::elements::ElementKind;
use hsfem::solver::{apply_dirichlet, assemble};

fn main() {
    for family in [MeshFamily::Regular, MeshFamily::Irregular] {
        for level in 0..4usize {
            for elem in [ElementKind::Ps, ElementKind::Ecq4, ElementKind::Bilinear] {
                let case = BenchmarkCase::new(2, elem, family, level).with_nu(0.49999);
                let spec = problem_spec(&case).unwrap();
                let (k, load, _) = assemble(&spec).unwrap();
                let red = apply_dirichlet(&k, &load, &spec).unwrap();
                match hsfem::solver::solve_spd(&red.k, &red.rhs) {
                    Ok((_, st)) => println!("{family:?} L{level} {:8}: residual {:.3e} steps {}", elem.name(), st.residual, st.refinement_steps),
                    Err(e) => println!("{family:?} L{level} {:8}: FAILED {e}", elem.name()),
                }
            }
        }
    }
}
