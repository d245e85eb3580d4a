use bernoulli_bounds::intervals::{bound_table, qhat_f, qhat_g, CiQuery, Method, Side};
use bernoulli_bounds::poibin::{
    brute_force_pmf, exact_pmf, exact_pmf_compensated, f_bound, BernoulliModel, HoeffdingIndex,
};
use bernoulli_bounds::verify::exact_coverage;
use proptest::prelude::*;

fn model_strategy(max_n: usize) -> impl Strategy<Value = BernoulliModel> {
    let entry = prop_oneof![Just(0.0), Just(1.0), 0.0..=1.0f64];
    prop::collection::vec(entry, 1..=max_n).prop_map(|q| BernoulliModel::new(q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn optimal_bounds_keep_coverage(model in model_strategy(12), alpha in 0.001..0.999f64) {
        for method in [Method::F, Method::G] {
            for side in [Side::Lower, Side::Upper] {
                let cov = exact_coverage(&model, method, side, alpha).unwrap().exact_coverage;
                prop_assert!(cov >= 1.0 - alpha - 1e-10, "{method}/{side}: {cov}");
            }
        }
    }

    #[test]
    fn upper_mirrors_lower(n in 1usize..40, kf in 0.0..=1.0f64, alpha in 0.0..=1.0f64) {
        let k = (kf * n as f64).round() as usize;
        for m in Method::ALL {
            if m == Method::Hoeffding && alpha == 0.0 {
                continue;
            }
            let up = m.upper(CiQuery::new(n, k, alpha).unwrap()).unwrap().value;
            let low = m.lower(CiQuery::new(n, n - k, alpha).unwrap()).unwrap().value;
            prop_assert!((up - (1.0 - low)).abs() <= 1e-15);
        }
    }

    #[test]
    fn bounds_increase_with_alpha(n in 1usize..30, kf in 0.0..=1.0f64, a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let k = (kf * n as f64).round() as usize;
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let f_lo = qhat_f(CiQuery::new(n, k, lo).unwrap()).unwrap().value;
        let f_hi = qhat_f(CiQuery::new(n, k, hi).unwrap()).unwrap().value;
        let g_lo = qhat_g(CiQuery::new(n, k, lo).unwrap()).unwrap().value;
        let g_hi = qhat_g(CiQuery::new(n, k, hi).unwrap()).unwrap().value;
        prop_assert!(f_hi >= f_lo - 1e-12 && g_hi >= g_lo - 1e-12);
    }

    #[test]
    fn pmf_algorithms_agree(model in model_strategy(14)) {
        let a = exact_pmf(&model);
        let b = exact_pmf_compensated(&model);
        let c = brute_force_pmf(&model).unwrap();
        for ((x, y), z) in a.pmf().iter().zip(b.pmf()).zip(c.pmf()) {
            prop_assert!((x - z).abs() <= 1e-13 && (y - z).abs() <= 1e-13);
        }
    }

    #[test]
    fn cdf_respects_bound(model in model_strategy(12)) {
        let pb = exact_pmf(&model);
        let n = model.len();
        for d in 0..=n as i64 {
            let idx = HoeffdingIndex::from_d(n, d).unwrap();
            prop_assert!(pb.cdf(d) >= 1.0 - f_bound(model.mean(), idx).unwrap() - 1e-10);
        }
    }
}

#[test]
fn tables_are_monotone_in_k_for_every_method() {
    for n in [1, 7, 25, 60] {
        for alpha in [0.02, 0.3, 0.75] {
            for m in Method::ALL {
                let t = bound_table(m, Side::Lower, n, alpha).unwrap();
                assert!(
                    t.windows(2).all(|w| w[1] >= w[0] - 1e-14),
                    "{m} n={n} alpha={alpha}"
                );
            }
        }
    }
}
