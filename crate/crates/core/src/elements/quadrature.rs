//! Tensor-product Gauss-Legendre quadrature on the reference square.

/// Nodes and weights of the 1D Gauss-Legendre rules on [-1, 1].
pub fn gauss_1d(n: usize) -> Vec<(f64, f64)> {
    match n {
        1 => vec![(0.0, 2.0)],
        2 => {
            let x = 0.577_350_269_189_625_76;
            vec![(-x, 1.0), (x, 1.0)]
        }
        3 => {
            let x = 0.774_596_669_241_483_4;
            let (w0, w1) = (8.0 / 9.0, 5.0 / 9.0);
            vec![(-x, w1), (0.0, w0), (x, w1)]
        }
        4 => {
            let (x0, w0) = (0.339_981_043_584_856_26, 0.652_145_154_862_546_1);
            let (x1, w1) = (0.861_136_311_594_052_6, 0.347_854_845_137_453_85);
            vec![(-x1, w1), (-x0, w0), (x0, w0), (x1, w1)]
        }
        5 => {
            let (x1, w1) = (0.538_469_310_105_683_1, 0.478_628_670_499_366_47);
            let (x2, w2) = (0.906_179_845_938_664, 0.236_926_885_056_189_08);
            let w0 = 0.568_888_888_888_888_9;
            vec![(-x2, w2), (-x1, w1), (0.0, w0), (x1, w1), (x2, w2)]
        }
        6 => {
            let (x0, w0) = (0.238_619_186_083_196_9, 0.467_913_934_572_691_05);
            let (x1, w1) = (0.661_209_386_466_264_5, 0.360_761_573_048_138_6);
            let (x2, w2) = (0.932_469_514_203_152, 0.171_324_492_379_170_35);
            vec![(-x2, w2), (-x1, w1), (-x0, w0), (x0, w0), (x1, w1), (x2, w2)]
        }
        8 => {
            let (x0, w0) = (0.183_434_642_495_649_8, 0.362_683_783_378_362);
            let (x1, w1) = (0.525_532_409_916_329, 0.313_706_645_877_887_3);
            let (x2, w2) = (0.796_666_477_413_626_7, 0.222_381_034_453_374_47);
            let (x3, w3) = (0.960_289_856_497_536_3, 0.101_228_536_290_376_26);
            vec![
                (-x3, w3),
                (-x2, w2),
                (-x1, w1),
                (-x0, w0),
                (x0, w0),
                (x1, w1),
                (x2, w2),
                (x3, w3),
            ]
        }
        _ => panic!("unsupported 1D Gauss order {n}"),
    }
}

/// Tensor-product rule with `n × n` points.
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub points: Vec<(f64, f64, f64)>,
}

impl QuadratureRule {
    pub fn gauss(n: usize) -> Self {
        let one_d = gauss_1d(n);
        let mut points = Vec::with_capacity(n * n);
        for &(eta, weta) in &one_d {
            for &(xi, wxi) in &one_d {
                points.push((xi, eta, wxi * weta));
            }
        }
        QuadratureRule { points }
    }
}
