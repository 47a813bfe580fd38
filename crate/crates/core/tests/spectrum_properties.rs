use proptest::prelude::*;
use tclaser_core::spectrum::{
    build_block, diagonalize, ladder_regression, photon_statistics, predicted_ground_mean,
    predicted_ground_variance, BlockIndex,
};
use tclaser_core::HalfInt;

/// `(2r, 2c)` with matching parity, `r <= 50`, `-r <= c <= 500`.
fn block_labels() -> impl Strategy<Value = (i64, i64)> {
    (0i64..=100).prop_flat_map(|r2| {
        (Just(r2), (-r2..=1000).prop_filter_map("parity", move |c2| ((c2 - r2) % 2 == 0).then_some(c2)))
    })
}

fn solve(r2: i64, c2: i64, kappa: f64) -> tclaser_core::EigenSolution {
    let idx = BlockIndex::from_doubled(r2, c2, kappa).unwrap();
    diagonalize(&build_block(idx).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectrum_is_symmetric_about_c((r2, c2) in block_labels(), kappa in 0.05f64..3.0) {
        let s = solve(r2, c2, kappa);
        let c = c2 as f64 / 2.0;
        let dim = s.dim();
        for k in 0..dim {
            let pair = s.eigenvalues[k] + s.eigenvalues[dim - 1 - k];
            prop_assert!((pair - 2.0 * c).abs() <= 1e-9 * c.abs().max(1.0));
        }
    }

    #[test]
    fn excitation_number_is_conserved((r2, c2) in block_labels()) {
        let s = solve(r2, c2, 1.0);
        let c = c2 as f64 / 2.0;
        for k in [0, s.dim() / 2, s.dim() - 1] {
            let st = photon_statistics(&s, k).unwrap();
            prop_assert!((st.n0 + st.molecular_mean - c).abs() < 1e-12 * c.abs().max(1.0));
            prop_assert!((st.distribution.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(st.sigma2 >= 0.0);
        }
    }

    #[test]
    fn eigenvectors_are_orthonormal((r2, c2) in block_labels()) {
        let s = solve(r2, c2, 1.0);
        let dim = s.dim();
        for a in 0..dim {
            let va = s.amplitudes(a).unwrap();
            for b in a..dim {
                let vb = s.amplitudes(b).unwrap();
                let dot: f64 = va.iter().zip(vb).map(|(x, y)| x * y).sum();
                let expected = if a == b { 1.0 } else { 0.0 };
                prop_assert!((dot - expected).abs() < 1e-10, "({a}, {b}): {dot}");
            }
        }
    }

    #[test]
    fn coupling_scales_the_spread((r2, c2) in block_labels(), kappa in 0.05f64..4.0) {
        let unit = solve(r2, c2, 1.0);
        let scaled = solve(r2, c2, kappa);
        let c = c2 as f64 / 2.0;
        let tol = 1e-9 * c.abs().max(1.0) * kappa.max(1.0);
        for (a, b) in scaled.eigenvalues.iter().zip(&unit.eigenvalues) {
            prop_assert!((a - (c + kappa * (b - c))).abs() < tol);
        }
        for k in 0..unit.dim() {
            let (u, v) = (unit.amplitudes(k).unwrap(), scaled.amplitudes(k).unwrap());
            for (x, y) in u.iter().zip(v) {
                prop_assert!((x - y).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn first_component_is_positive((r2, c2) in block_labels()) {
        let s = solve(r2, c2, 1.0);
        for k in 0..s.dim() {
            let v = s.amplitudes(k).unwrap();
            let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let first = v.iter().find(|x| x.abs() > f64::EPSILON.sqrt() * max).unwrap();
            prop_assert!(*first > 0.0);
        }
    }
}

#[test]
fn ground_mean_regime() {
    for (r, c) in [(50, 50), (50, 120), (60, 60), (80, 300)] {
        let s = solve(2 * r, 2 * c, 1.0);
        let n0 = photon_statistics(&s, 0).unwrap().n0;
        let pred = predicted_ground_mean(&s.block).asymptotic;
        assert!(((pred - n0) / n0).abs() < 0.05, "r={r} c={c}: {pred} vs {n0}");
    }
}

#[test]
fn ground_variance_regime() {
    for (r, c) in [(40, 200), (45, 300), (50, 500)] {
        let s = solve(2 * r, 2 * c, 1.0);
        let st = photon_statistics(&s, 0).unwrap();
        let pred = predicted_ground_variance(&s.block, st.n0).unwrap();
        assert!(pred.in_regime);
        assert!(((pred.sigma2 - st.sigma2) / st.sigma2).abs() < 0.05, "r={r} c={c}: {} vs {}", pred.sigma2, st.sigma2);
    }
}

#[test]
fn linear_ladder_regime() {
    for (r, c) in [(40, 200), (40, 400), (50, 250)] {
        let s = solve(2 * r, 2 * c, 1.0);
        let n0 = photon_statistics(&s, 0).unwrap().n0;
        let fit = ladder_regression(&s).unwrap();
        let expected = 2.0 * n0.sqrt();
        assert!(((fit.slope - expected) / expected).abs() < 0.03, "r={r} c={c}: {} vs {expected}", fit.slope);
        assert!(fit.r_squared > 0.999);
    }
}

#[test]
fn single_and_double_precision_agree() {
    let idx32 = BlockIndex::<f32>::new(HalfInt::from_int(6), HalfInt::from_int(20), 1.0).unwrap();
    let idx64 = BlockIndex::<f64>::new(HalfInt::from_int(6), HalfInt::from_int(20), 1.0).unwrap();
    let a = diagonalize(&build_block(idx32).unwrap()).unwrap();
    let b = diagonalize(&build_block(idx64).unwrap()).unwrap();
    for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
        assert!((*x as f64 - y).abs() < 1e-4 * y.abs().max(1.0));
    }
}
