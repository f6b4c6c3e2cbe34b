use hsfem::bench::{run_case, BenchmarkCase, MeshFamily};
use hsfem::elements::ElementKind;
use std::time::Instant;

fn main() {
    let nus = [0.49, 0.499, 0.4999, 0.49999];
    let t4 = [
        [0.09759, 0.04879, 0.02440, 0.01220],
        [0.09931, 0.04965, 0.02483, 0.01241],
        [0.09948, 0.04974, 0.02487, 0.01244],
        [0.09950, 0.04975, 0.02488, 0.01244],
    ];
    let t3 = [
        [0.9253, 0.7547, 0.4353, 0.1620],
        [0.9921, 0.9690, 0.8866, 0.6619],
        [0.9992, 0.9968, 0.9874, 0.9514],
        [0.9999, 0.9997, 0.9987, 0.9949],
    ];
    let t6_irr = [
        [0.1512, 0.07321, 0.03647, 0.01821],
        [0.1526, 0.07392, 0.03682, 0.01839],
        [0.1527, 0.07399, 0.03686, 0.01841],
        [0.1569, 0.07418, 0.03688, 0.01841],
    ];
    println!("--- T4 PS regular disp ---");
    for (i, &nu) in nus.iter().enumerate() {
        for level in 0..4 {
            let row = run_case(&BenchmarkCase::new(2, ElementKind::Ps, MeshFamily::Regular, level).with_nu(nu)).unwrap();
            print!(" {:+.3}%", 100.0 * (row.e_disp - t4[i][level]) / t4[i][level]);
        }
        println!("  (nu={nu})");
    }
    println!("--- T3 bilinear regular disp ---");
    let t0 = Instant::now();
    for (i, &nu) in nus.iter().enumerate() {
        for level in 0..4 {
            let row = run_case(&BenchmarkCase::new(2, ElementKind::Bilinear, MeshFamily::Regular, level).with_nu(nu)).unwrap();
            print!(" {:+.3}%", 100.0 * (row.e_disp - t3[i][level]) / t3[i][level]);
        }
        println!("  (nu={nu})");
    }
    println!("bilinear block took {:?}", t0.elapsed());
    println!("--- T6 ECQ4 irregular disp ---");
    for (i, &nu) in nus.iter().enumerate() {
        for level in 0..4 {
            let row = run_case(&BenchmarkCase::new(2, ElementKind::Ecq4, MeshFamily::Irregular, level).with_nu(nu)).unwrap();
            print!(" {:+.3}%", 100.0 * (row.e_disp - t6_irr[i][level]) / t6_irr[i][level]);
        }
        println!("  (nu={nu})");
    }
    // Ex3 T8/T9 regular check + criterion rates
    println!("--- T8/T9 Ex3 regular ---");
    let refs = [0.1022, 0.05120, 0.02561, 0.01281];
    for elem in [ElementKind::Ps, ElementKind::Ecq4] {
        for level in 1..5 {
            let row = run_case(&BenchmarkCase::new(3, elem, MeshFamily::Regular, level)).unwrap();
            print!(
                "  d{:+.3}% s{:+.3}%",
                100.0 * (row.e_disp - refs[level - 1]) / refs[level - 1],
                100.0 * (row.e_stress - refs[level - 1]) / refs[level - 1]
            );
        }
        println!("  ({})", elem.name());
    }
}
