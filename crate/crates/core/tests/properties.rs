use korobov::fourier::FourierPolynomial;
use korobov::format::fmt_f64;
use korobov::index_set::{self, IndexSet};
use korobov::lattice::{self, LatticeRule};
use korobov::oracles;
use korobov::quantum::resources::{ResourceReport, SumRecord};
use korobov::quantum::{amplitude_estimation_pmf, qsum, QuantumSumConfig};
use korobov::space::{SpaceDescriptor, WeightSchedule};
use korobov::tractability::{exponent_all, verdict, Setting};
use num_complex::Complex64;
use proptest::prelude::*;

fn space_strategy(max_d: usize) -> impl Strategy<Value = SpaceDescriptor> {
    (1..=max_d, 1.2f64..4.0, 0.1f64..=1.0, 0.0f64..3.0)
        .prop_map(|(d, alpha, c, kappa)| SpaceDescriptor::polynomial(d, alpha, c, kappa).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_box_scan(s in space_strategy(3), eps in 0.08f64..0.9) {
        let set = IndexSet::enumerate(&s, eps).unwrap();
        let scan = oracles::brute_force_index_set(&s, eps, 50_000_000).unwrap();
        prop_assert_eq!(set.members(), scan.as_slice());
        prop_assert_eq!(index_set::count(&s, eps, u64::MAX).unwrap(), scan.len() as u64);
    }

    #[test]
    fn index_sets_are_nested(s in space_strategy(4), a in 0.05f64..0.9, b in 0.05f64..0.9) {
        let (small, large) = if a > b { (a, b) } else { (b, a) };
        let outer = IndexSet::enumerate(&s, large).unwrap();
        for h in IndexSet::enumerate(&s, small).unwrap().members() {
            prop_assert!(outer.contains(h));
        }
    }

    #[test]
    fn truncation_meets_epsilon(s in space_strategy(3), eps in 0.05f64..0.9, seed in any::<u64>()) {
        let f = FourierPolynomial::random_unit(&s, 6, 5, seed).unwrap();
        prop_assert!(index_set::truncation_error(&s, eps, &f).unwrap() <= eps * (1.0 + 1e-12));
    }

    #[test]
    fn lattice_sum_routes_agree(d in 1usize..=3, idx in 0usize..20, seed in any::<u64>(), zs in proptest::collection::vec(1u64..1000, 3)) {
        let primes = [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79];
        let n = primes[idx];
        let z: Vec<u64> = zs[..d].iter().map(|v| 1 + v % (n - 1)).collect();
        let rule = LatticeRule::new(n, z.clone()).unwrap();
        let s = SpaceDescriptor::polynomial(d, 2.0, 1.0, 1.0).unwrap();
        let f = FourierPolynomial::random_unit(&s, 5, 3, seed).unwrap();
        let direct = oracles::direct_lattice_sum(&f, n, &z);
        prop_assert!((rule.alias_sum(&f).unwrap() - direct).norm() < 1e-12);
        let kernel = lattice::worst_case_int_error(&s, &rule).unwrap();
        let dual = lattice::worst_case_int_error_dual(&s, &rule).unwrap();
        prop_assert!((kernel - dual).abs() <= 1e-8 * kernel.max(1.0));
    }

    #[test]
    fn pmf_is_a_distribution(a in 0.0f64..=1.0, bits in 1u32..=12) {
        let pmf = amplitude_estimation_pmf(a, 1 << bits).unwrap();
        prop_assert!(pmf.iter().all(|&p| p >= -1e-15));
        prop_assert!((pmf.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn qsum_stays_in_range(vals in proptest::collection::vec(-2.0f64..=2.0, 1..50), seed in any::<u64>()) {
        let cfg = QuantumSumConfig::new(64, 5, 2.0, seed).unwrap();
        let est = qsum(&vals, &cfg).unwrap();
        prop_assert!(est.abs() <= 2.0 + 1e-12);
        prop_assert_eq!(est, qsum(&vals, &cfg).unwrap());
    }

    #[test]
    fn report_identity(recs in proptest::collection::vec((1u64..10_000, 0u32..20), 1..30), qubits in 1u32..40, d in 1usize..10, c in 0.0f64..100.0) {
        let sums: Vec<SumRecord> = recs.iter().map(|&(q, r)| SumRecord { queries: q, repetitions: 2 * r + 1 }).collect();
        let report = ResourceReport::from_sums(sums, qubits, d, c, 0.5);
        prop_assert!(report.validate().is_ok());
    }

    #[test]
    fn verdicts_are_consistent(kappa in 0.0f64..4.0, alpha in 0.0f64..5.0) {
        let s = SpaceDescriptor::polynomial(2, alpha, 1.0, kappa).unwrap();
        for setting in Setting::ALL {
            let v = verdict(&s, setting).unwrap();
            prop_assert!(!v.strongly_tractable || v.tractable);
            prop_assert!(v.exponent_low <= v.exponent_high);
        }
        let all = verdict(&s, Setting::WorstAll).unwrap();
        let ran = verdict(&s, Setting::RandomizedStd).unwrap();
        prop_assert_eq!(all.strongly_tractable, all.tractable);
        prop_assert_eq!(ran.strongly_tractable, ran.tractable);
    }

    #[test]
    fn exponent_all_is_monotone(k1 in 0.0f64..4.0, k2 in 0.0f64..4.0, a1 in 0.1f64..5.0, a2 in 0.1f64..5.0) {
        let p = |k: f64, a: f64| exponent_all(&SpaceDescriptor::polynomial(1, a, 1.0, k).unwrap()).unwrap();
        let (klo, khi) = if k1 < k2 { (k1, k2) } else { (k2, k1) };
        let (alo, ahi) = if a1 < a2 { (a1, a2) } else { (a2, a1) };
        prop_assert!(p(khi, a1) <= p(klo, a1));
        prop_assert!(p(k1, ahi) <= p(k1, alo));
    }

    #[test]
    fn products_are_pointwise(seed in any::<u64>(), x in proptest::collection::vec(0.0f64..1.0, 2)) {
        let s = SpaceDescriptor::new(2, 2.0, WeightSchedule::explicit(vec![1.0, 0.5]).unwrap()).unwrap();
        let f = FourierPolynomial::random_unit(&s, 6, 3, seed).unwrap();
        let g = FourierPolynomial::random_unit(&s, 4, 2, seed ^ 1).unwrap();
        let fg = f.multiply(&g).unwrap().evaluate_unchecked(&x);
        prop_assert!((fg - f.evaluate_unchecked(&x) * g.evaluate_unchecked(&x)).norm() < 1e-10);
        let sq = f.abs_squared().evaluate_unchecked(&x);
        prop_assert!((sq - Complex64::new(f.evaluate_unchecked(&x).norm_sqr(), 0.0)).norm() < 1e-10);
    }

    #[test]
    fn floats_round_trip(x in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }
}
