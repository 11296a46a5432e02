use proptest::prelude::*;

use kdda::kernels::{eval, gram_matrix};
use kdda::numerics::{sym_eig, DEFAULT_EIG_TOL};
use kdda::KernelSpec;

fn samples() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..=4, 1usize..=10).prop_flat_map(|(dim, n)| {
        prop::collection::vec(prop::collection::vec(-3.0..3.0f64, dim), n)
    })
}

fn mercer_kernel() -> impl Strategy<Value = KernelSpec> {
    prop_oneof![
        Just(KernelSpec::Linear),
        (1u32..=3).prop_map(|degree| KernelSpec::Polynomial { degree }),
        (0.05..20.0f64).prop_map(|sigma2| KernelSpec::Rbf { sigma2 }),
    ]
}

proptest! {
    #[test]
    fn gram_is_symmetric_and_psd(xs in samples(), k in mercer_kernel()) {
        let g = gram_matrix(&k, &xs).unwrap();
        for i in 0..g.rows() {
            for j in 0..g.cols() {
                prop_assert!((g[(i, j)] - g[(j, i)]).abs() <= 1e-12);
            }
        }
        let e = sym_eig(&g, DEFAULT_EIG_TOL).unwrap();
        let largest = e.eigenvalues[0].max(0.0);
        let smallest = *e.eigenvalues.last().unwrap();
        prop_assert!(smallest >= -1e-8 * largest.max(1.0), "λ_min = {smallest}, λ_max = {largest}");
    }

    #[test]
    fn rbf_is_bounded_and_monotone(
        x in prop::collection::vec(-3.0..3.0f64, 2),
        dir in prop::collection::vec(-1.0..1.0f64, 2),
        t in 0.0..2.0f64,
        sigma2 in 0.1..10.0f64,
    ) {
        let k = KernelSpec::Rbf { sigma2 };
        let near: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + t * d).collect();
        let far: Vec<f64> = x.iter().zip(&dir).map(|(a, d)| a + (t + 0.5) * d).collect();
        let (kn, kf) = (eval(&k, &x, &near).unwrap(), eval(&k, &x, &far).unwrap());
        prop_assert!(kn > 0.0 && kn <= 1.0 && kf > 0.0 && kf <= 1.0);
        prop_assert!(kf <= kn);
        prop_assert_eq!(eval(&k, &x, &x).unwrap(), 1.0);
    }
}
