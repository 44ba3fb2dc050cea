use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spm_core::bench::random_instance;
use spm_core::{
    build_affinity, compute_edge_attrs, delaunay_triangulate, greedy_discretize, hungarian,
    spm_solve, spm_step, AffinityMatrix, AffinityParams, AssignmentMatrix, InitMode, Permutation,
    PointSet, SolverConfig,
};

fn matrix_strategy(max_n: usize) -> impl Strategy<Value = AssignmentMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(0.01f64..1.0, n * n)
            .prop_map(move |v| AssignmentMatrix::new(n, v).unwrap())
    })
}

fn scaled_w(w: &AffinityMatrix, s: f64) -> AffinityMatrix {
    let mut b = AffinityMatrix::builder(w.n());
    for (p, q, v) in w.entries() {
        b.set(p, q, v * s).unwrap();
    }
    b.build().unwrap()
}

fn positive_x(n: usize, seed: u64) -> AssignmentMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    AssignmentMatrix::from_fn(n, |_, _| rng.random_range(0.05..1.0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn step_keeps_entries_nonnegative_and_finite(n in 2usize..6, seed in any::<u64>()) {
        let w = random_instance(n, 0.4, seed).unwrap();
        let x = positive_x(n, seed ^ 1);
        if let Ok((next, _)) = spm_step(&x, &w, 1e-12) {
            prop_assert!(next.as_vec().iter().all(|v| v.is_finite() && *v >= 0.0));
        }
    }

    #[test]
    fn zero_entries_stay_zero(n in 2usize..6, seed in any::<u64>(), zeros in prop::collection::vec(any::<bool>(), 25)) {
        let w = random_instance(n, 0.5, seed).unwrap();
        let base = positive_x(n, seed ^ 2);
        let x = AssignmentMatrix::from_fn(n, |i, j| if zeros[i * n + j] { 0.0 } else { base.get(i, j) }).unwrap();
        if let Ok((next, _)) = spm_step(&x, &w, 1e-12) {
            for i in 0..n {
                for j in 0..n {
                    if x.get(i, j) == 0.0 {
                        prop_assert_eq!(next.get(i, j), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn step_is_invariant_to_scaling_x_and_w(n in 2usize..5, seed in any::<u64>(), sx in 0.1f64..10.0, sw in 0.1f64..10.0) {
        let w = random_instance(n, 0.5, seed).unwrap();
        let x = positive_x(n, seed ^ 3);
        let (a, _) = spm_step(&x, &w, 1e-12).unwrap();
        let (b, _) = spm_step(&x.scaled(sx).unwrap(), &scaled_w(&w, sw), 1e-12).unwrap();
        for (u, v) in a.as_vec().iter().zip(b.as_vec()) {
            prop_assert!((u - v).abs() <= 1e-9 * u.abs().max(1e-12));
        }
        prop_assert_eq!(a.argmax(), b.argmax());
    }

    #[test]
    fn objective_never_decreases(n in 2usize..6, seed in any::<u64>()) {
        let w = random_instance(n, 0.3, seed).unwrap();
        let cfg = SolverConfig { max_iters: 300, ..SolverConfig::default() };
        let r = spm_solve(&w, &cfg).unwrap();
        for pair in r.objective_trace.windows(2) {
            prop_assert!(pair[1] >= pair[0] - 1e-10 * pair[0].abs().max(1.0));
        }
        for pair in r.lagrangian_trace.windows(2) {
            prop_assert!(pair[1] >= pair[0] - 1e-10 * pair[0].abs().max(1.0));
        }
    }

    #[test]
    fn converged_runs_are_feasible(n in 2usize..6, seed in any::<u64>(), mag in 0.001f64..0.1) {
        let w = random_instance(n, 0.3, seed).unwrap();
        let cfg = SolverConfig {
            init: InitMode::UniformPerturbed { seed, magnitude: mag },
            ..SolverConfig::default()
        };
        let r = spm_solve(&w, &cfg).unwrap();
        if r.converged {
            prop_assert!(r.constraint_residual < 1e-6);
            prop_assert!(r.kkt_residual < 1e-6);
        }
    }

    #[test]
    fn hungarian_returns_a_bijection(x in matrix_strategy(8)) {
        let p = hungarian(&x);
        let mut seen = p.map().to_vec();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..x.n()).collect::<Vec<_>>());
    }

    #[test]
    fn hungarian_dominates_greedy(x in matrix_strategy(8)) {
        prop_assert!(hungarian(&x).score(&x) >= greedy_discretize(&x).score(&x) - 1e-12);
    }

    #[test]
    fn hungarian_ignores_positive_scaling(x in matrix_strategy(7), k in -6i32..6) {
        let s = 2f64.powi(k);
        prop_assert_eq!(hungarian(&x), hungarian(&x.scaled(s).unwrap()));
    }

    #[test]
    fn permutation_matrix_round_trip(map in (1usize..9).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())) {
        let p = Permutation::new(map).unwrap();
        let m = p.to_matrix();
        prop_assert_eq!(hungarian(&m), p.clone());
        prop_assert_eq!(greedy_discretize(&m), p.clone());
        prop_assert_eq!(p.inverse().inverse(), p);
    }

    #[test]
    fn affinity_is_symmetric_with_zero_diagonal(
        pts in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 3..9),
        shift in prop::collection::vec((-0.05f64..0.05, -0.05f64..0.05), 9),
    ) {
        let model: Vec<[f64; 2]> = pts.iter().map(|&(x, y)| [x, y]).collect();
        let data: Vec<[f64; 2]> = model.iter().zip(&shift).map(|(p, s)| [p[0] + s.0, p[1] + s.1]).collect();
        let (Ok(mp), Ok(dp)) = (PointSet::new(model), PointSet::new(data)) else { return Ok(()) };
        let (Ok(gm), Ok(gd)) = (delaunay_triangulate(&mp), delaunay_triangulate(&dp)) else { return Ok(()) };
        let gm = compute_edge_attrs(&mp, &gm).unwrap();
        let gd = compute_edge_attrs(&dp, &gd).unwrap();
        let w = build_affinity(&gm, &gd, &AffinityParams::for_model(&gm)).unwrap();
        prop_assert!(w.is_symmetric());
        prop_assert!(w.has_zero_diagonal());
        prop_assert!(w.entries().all(|(_, _, v)| v > 0.0 && v <= 1.0));
        prop_assert!(w.nnz() <= 4 * gm.edge_count() * gd.edge_count());
    }
}
