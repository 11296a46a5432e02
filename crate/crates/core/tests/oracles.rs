mod common;

use proptest::prelude::*;

use common::{
    brute_force_dual, dlda_oracle, max_rel_error_up_to_sign, pca_oracle, random_binary_problem,
    random_fixture,
};
use kdda::extractors::{kdda_fit, kpca_fit};
use kdda::svm::svm_train;
use kdda::{ClassIndex, KernelSpec};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn linear_kdda_matches_direct_lda(seed in any::<u64>()) {
        let fx = random_fixture(seed);
        let index = ClassIndex::new(&fx.labels).unwrap();
        let model = kdda_fit(&fx.train, &index, KernelSpec::Linear, 0).unwrap();
        let ours = model.transform_many(&fx.queries).unwrap();
        let oracle = dlda_oracle(&fx, 0);
        let err = max_rel_error_up_to_sign(&ours, &oracle);
        prop_assert!(err <= 1e-6, "relative error {err:e}");
    }

    #[test]
    fn truncated_kdda_keeps_least_within_scatter(seed in any::<u64>()) {
        let fx = random_fixture(seed);
        let index = ClassIndex::new(&fx.labels).unwrap();
        let model = kdda_fit(&fx.train, &index, KernelSpec::Linear, 1).unwrap();
        let err = max_rel_error_up_to_sign(&model.transform_many(&fx.queries).unwrap(), &dlda_oracle(&fx, 1));
        prop_assert!(err <= 1e-6, "relative error {err:e}");
    }

    #[test]
    fn linear_kpca_matches_pca(seed in any::<u64>()) {
        let fx = random_fixture(seed);
        let rank = fx.train[0].len().min(fx.train.len() - 1);
        let m = rank.min(3);
        let model = kpca_fit(&fx.train, KernelSpec::Linear, m).unwrap();
        prop_assert_eq!(model.m_features(), m);
        let err = max_rel_error_up_to_sign(
            &model.transform_many(&fx.queries).unwrap(),
            &pca_oracle(&fx.train, &fx.queries, m),
        );
        prop_assert!(err <= 1e-6, "relative error {err:e}");
    }

    #[test]
    fn smo_reaches_the_exact_dual_optimum(seed in any::<u64>()) {
        let p = random_binary_problem(seed);
        let model = svm_train(&p.samples, &p.labels, &p.cfg).unwrap();
        let exact = brute_force_dual(&p.samples, &p.labels, p.cfg.kernel, p.cfg.c_cost);
        let ours = model.stats().dual_objective;
        prop_assert!((ours - exact).abs() <= 1e-3 * exact.abs(), "smo {ours} vs exact {exact}");
        if model.is_converged() {
            let audit = model.audit(&p.samples, &p.labels, p.cfg.kkt_tol).unwrap();
            prop_assert!(audit.passed(), "{audit:?}");
        }
    }
}
