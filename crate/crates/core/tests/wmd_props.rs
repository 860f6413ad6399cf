mod common;

use ndarray::Array2;
use proptest::prelude::*;

use blockwmd::embedding::EmbeddingStore;
use blockwmd::transport::{northwest_corner, plan_cost, solve_transport};
use blockwmd::wmd::{centroid_lower_bound, cost_matrix, wmd_distance, wmd_plan, NBow};

fn marginal(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, len).prop_filter_map("positive mass", |raw| {
        let total: f64 = raw.iter().sum();
        (total > 1e-3).then(|| raw.iter().map(|x| x / total).collect())
    })
}

fn instance() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, Array2<f64>)> {
    (marginal(1..6), marginal(1..6)).prop_flat_map(|(src, dst)| {
        let (n, m) = (src.len(), dst.len());
        prop::collection::vec(0.0f64..5.0, n * m).prop_map(move |c| {
            (src.clone(), dst.clone(), Array2::from_shape_vec((n, m), c).unwrap())
        })
    })
}

fn store() -> EmbeddingStore {
    let mut s = EmbeddingStore::new(2);
    for i in 0..12 {
        let t = i as f64;
        s.insert(format!("w{i}"), &[t.sin() * 3.0, (t * 0.7).cos() * 2.0 + t / 4.0]);
    }
    s
}

fn doc() -> impl Strategy<Value = NBow> {
    prop::collection::vec((0usize..12, 1usize..4), 1..8)
        .prop_map(|pairs| NBow::from_counts(pairs.into_iter().map(|(w, c)| (format!("w{w}"), c))).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn plans_are_feasible_and_optimal((src, dst, cost) in instance()) {
        let plan = solve_transport(&src, &dst, &cost).unwrap();
        for (got, want) in plan.row_sums().iter().zip(&src) {
            prop_assert!((got - want).abs() <= 1e-7);
        }
        for (got, want) in plan.col_sums().iter().zip(&dst) {
            prop_assert!((got - want).abs() <= 1e-7);
        }
        prop_assert!(plan.flow.iter().all(|&f| f >= 0.0));
        prop_assert!((plan.objective - plan.cost(&cost)).abs() <= 1e-12);
        let exact = common::transport_by_enumeration(&src, &dst, &cost);
        prop_assert!((plan.objective - exact).abs() <= 1e-7, "{} vs {}", plan.objective, exact);
        prop_assert!(plan.objective <= plan_cost(&northwest_corner(&src, &dst), &cost) + 1e-12);
    }

    #[test]
    fn wmd_is_a_symmetric_bounded_distance(a in doc(), b in doc()) {
        let s = store();
        let ab = wmd_distance(&a, &b, &s).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - wmd_distance(&b, &a, &s).unwrap()).abs() <= 1e-7);
        prop_assert!(wmd_distance(&a, &a, &s).unwrap() <= 1e-9);
        prop_assert!(centroid_lower_bound(&a, &b, &s).unwrap() <= ab + 1e-9);
        let cost = cost_matrix(&a, &b, &s).unwrap();
        prop_assert!(ab <= plan_cost(&northwest_corner(a.weights(), b.weights()), &cost) + 1e-12);
        let plan = wmd_plan(&a, &b, &s).unwrap();
        prop_assert_eq!(plan.flow.dim(), (a.len(), b.len()));
    }
}
