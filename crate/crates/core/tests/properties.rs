mod common;

use common::*;
use ndarray::Array1;
use proptest::prelude::*;
use sparsekit::bench::{gen_instance, InstanceRng};
use sparsekit::optimality::{
    check_alpha_stationary, check_s_regular, check_second_order, check_sparsity_stationarity,
    restricted_gradient_norm, stationarity_report, Stationarity,
};
use sparsekit::projection::{project_nonneg, project_sparse, project_sparse_nonneg, support};
use sparsekit::solvers::{armijo_search, gspa_solve, SolverConfig, Status, StepPolicy};
use sparsekit::{kth_largest, lipschitz_constant};

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn entries(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    // Small integers make ties common.
    prop::collection::vec(prop_oneof![(-4i32..=4).prop_map(f64::from), -10.0..10.0f64], n)
}

proptest! {
    #![proptest_config(cases(100))]

    #[test]
    fn descent_lemma_with_safeguarded_constant(seed in any::<u64>()) {
        let mut rng = InstanceRng::new(seed);
        let inst = random_instance(&mut rng, 6, 10, 3, false);
        let l_r = lipschitz_constant(inst.a()).l_r;
        let x = gaussian_vector(&mut rng, 10);
        let y = gaussian_vector(&mut rng, 10);
        let g = inst.gradient(x.view()).unwrap();
        let d = &y - &x;
        let bound = inst.objective(x.view()).unwrap() + g.dot(&d) + 0.5 * l_r * d.dot(&d);
        let fy = inst.objective(y.view()).unwrap();
        prop_assert!(fy <= bound + 1e-10 * bound.abs().max(1.0));
    }

    #[test]
    fn kth_largest_ignores_order(x in entries(1..12).prop_shuffle(), k in 1usize..12, absolute in any::<bool>()) {
        let k = k.min(x.len());
        let mut rev = x.clone();
        rev.reverse();
        let a = kth_largest(Array1::from(x).view(), k, absolute).unwrap();
        let b = kth_largest(Array1::from(rev).view(), k, absolute).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn kth_largest_matches_sorting(x in entries(1..12), k in 1usize..12) {
        let k = k.min(x.len());
        let mut sorted: Vec<f64> = x.iter().map(|v| v.abs()).collect();
        sorted.sort_by(|a, b| b.total_cmp(a));
        prop_assert_eq!(kth_largest(Array1::from(x).view(), k, true).unwrap(), sorted[k - 1]);
    }

    #[test]
    fn projections_are_idempotent_feasible_and_compose(x in entries(1..15), s in 1usize..15) {
        let x = Array1::from(x);
        let s = s.min(x.len());
        let p = project_sparse_nonneg(x.view(), s).unwrap();
        prop_assert_eq!(project_sparse_nonneg(p.view(), s).unwrap(), p.clone());
        let composed = project_sparse(project_nonneg(x.view()).view(), s).unwrap();
        prop_assert!(p.iter().zip(&composed).all(|(a, b)| a.to_bits() == b.to_bits()));
        prop_assert!(support(p.view(), 0.0).len() <= s);
        prop_assert!(p.iter().all(|v| *v >= 0.0));
        let q = project_sparse(x.view(), s).unwrap();
        prop_assert_eq!(project_sparse(q.view(), s).unwrap(), q.clone());
        prop_assert!(support(q.view(), 0.0).len() <= s);
    }

    #[test]
    fn armijo_returns_the_first_accepted_exponent(seed in any::<u64>(), nonneg in any::<bool>()) {
        let mut rng = InstanceRng::new(seed);
        let inst = random_instance(&mut rng, 6, 12, 3, nonneg);
        let x = sparse_vector(&mut rng, 12, 3, nonneg);
        let g = inst.gradient(x.view()).unwrap();
        let cfg = SolverConfig { nonneg, ..SolverConfig::default() };
        let alpha_start = 5.0 / lipschitz_constant(inst.a()).l_r;
        let step = armijo_search(&inst, x.view(), g.view(), alpha_start, &cfg).unwrap();
        let r0 = inst.objective(x.view()).unwrap();
        let holds = |m: i32| {
            let alpha = alpha_start * cfg.beta.powi(m);
            let y = &x - &(&g * alpha);
            let y = if nonneg { project_sparse_nonneg(y.view(), 3) } else { project_sparse(y.view(), 3) }.unwrap();
            let d = &y - &x;
            inst.objective(y.view()).unwrap() <= r0 - 0.5 * cfg.sigma * d.dot(&d) / (alpha * alpha)
        };
        prop_assert!(step.m >= 1);
        prop_assert!(holds(step.m as i32));
        if step.m > 1 {
            prop_assert!(!holds(step.m as i32 - 1));
        }
        prop_assert_eq!(step.step, alpha_start * cfg.beta.powi(step.m as i32));
    }

    #[test]
    fn armijo_accepts_at_largest_sigma(seed in any::<u64>()) {
        let mut rng = InstanceRng::new(seed);
        let inst = random_instance(&mut rng, 8, 16, 3, false);
        let l_r = lipschitz_constant(inst.a()).l_r;
        let x = sparse_vector(&mut rng, 16, 3, false);
        let g = inst.gradient(x.view()).unwrap();
        let cfg = SolverConfig { sigma: 0.25 / l_r, ..SolverConfig::default() };
        prop_assert!(armijo_search(&inst, x.view(), g.view(), 0.99 / l_r, &cfg).is_ok());
    }

    #[test]
    fn stationarity_verdicts_are_consistent(seed in any::<u64>(), nonneg in any::<bool>(), log_alpha in -4.0..1.0f64) {
        let mut rng = InstanceRng::new(seed);
        let inst = random_instance(&mut rng, 5, 10, 3, nonneg);
        let k = 1 + rng.below(3);
        let x = sparse_vector(&mut rng, 10, k, nonneg);
        let alpha = 10f64.powf(log_alpha);
        let tol = 1e-6;
        let r = stationarity_report(&inst, x.view(), alpha, tol).unwrap();
        prop_assert!(!r.alpha_stationary || (r.nc_stationary && r.tc_stationary));
        prop_assert_eq!(r.nc_stationary, r.tc_stationary);
        if r.support_size == inst.s() {
            prop_assert_eq!(r.nb_stationary, r.tb_stationary);
            prop_assert_eq!(r.nb_stationary, r.nc_stationary);
        }
        if r.support_size < inst.s() && !nonneg {
            let zero_grad = inst.gradient(x.view()).unwrap().iter().all(|g| (alpha * g).abs() <= tol);
            prop_assert_eq!(r.alpha_stationary, r.nb_stationary);
            prop_assert_eq!(r.nb_stationary, r.tb_stationary);
            prop_assert_eq!(r.tb_stationary, zero_grad);
        }
        let direct = check_alpha_stationary(&inst, x.view(), alpha, tol).unwrap();
        prop_assert_eq!(direct.stationary, r.alpha_stationary);
    }

    #[test]
    fn restricted_norm_certifies_clarke_stationarity(seed in any::<u64>(), scale in -10.0..-1.0f64, fit in any::<bool>()) {
        let mut rng = InstanceRng::new(seed);
        let inst = random_instance(&mut rng, 6, 10, 3, false);
        let tol = 10f64.powf(scale);
        // Entries bounded away from zero so both supports agree.
        let mut x = sparse_vector(&mut rng, 10, 3, false).mapv(|v| if v == 0.0 { 0.0 } else { v + v.signum() });
        if fit {
            // Least squares on supp(x): the gradient vanishes there.
            let cols: Vec<usize> = (0..10).filter(|&i| x[i] != 0.0).collect();
            let a = nalgebra::DMatrix::from_fn(6, 3, |i, j| inst.a()[[i, cols[j]]]);
            let b = nalgebra::DVector::from_iterator(6, inst.b().iter().copied());
            let coef = a.svd(true, true).solve(&b, 1e-14).unwrap();
            for (k, &i) in cols.iter().enumerate() {
                x[i] = coef[k];
            }
            prop_assume!(x.iter().all(|v| *v == 0.0 || v.abs() > 1e-3));
        }
        let norm = restricted_gradient_norm(&inst, x.view()).unwrap();
        let tc = check_sparsity_stationarity(&inst, x.view(), Stationarity::TC, tol).unwrap();
        if norm <= tol {
            prop_assert!(tc);
        }
        if tc {
            prop_assert!(norm <= tol * (3f64).sqrt());
        }
    }

    #[test]
    fn second_order_ignores_positive_scaling(seed in any::<u64>(), c in 1e-3..1e3f64) {
        let mut rng = InstanceRng::new(seed);
        let inst = random_instance(&mut rng, 4, 6, 2, false);
        let x = sparse_vector(&mut rng, 6, 2, false);
        let a = check_second_order(&inst, x.view(), true, 1e-10).unwrap();
        let b = check_second_order(&inst, (&x * c).view(), true, 1e-10).unwrap();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn fixed_step_gspa_descends_every_iteration(seed in any::<u64>(), nonneg in any::<bool>()) {
        let inst = gen_instance(&spec(60, 20, 3, nonneg, 0.0, 1, seed), 0).unwrap();
        let l_r = lipschitz_constant(inst.a()).l_r;
        let cfg = SolverConfig { nonneg, ..SolverConfig::default() }.with_policy(StepPolicy::InverseLipschitz);
        let res = gspa_solve(&inst, &cfg).unwrap();
        let alpha0 = 0.99 / l_r;
        let c = ((alpha0 - l_r * alpha0 * alpha0) / 2.0).min(cfg.sigma / 2.0);
        let mut prev = inst.objective(Array1::zeros(60).view()).unwrap();
        for rec in &res.trace.records {
            let gain = c * rec.delta_norm * rec.delta_norm / (rec.alpha * rec.alpha);
            prop_assert!(rec.objective <= prev - gain + 1e-12, "k = {}", rec.k);
            prev = rec.objective;
        }
    }

    #[test]
    fn gspa_iterates_stay_feasible(seed in any::<u64>(), nonneg in any::<bool>()) {
        let inst = gen_instance(&spec(60, 20, 3, nonneg, 0.0, 1, seed), 0).unwrap();
        for k in 1..=8 {
            let cfg = SolverConfig { nonneg, max_iter: k, ..SolverConfig::default() };
            let x = gspa_solve(&inst, &cfg).unwrap().x_final;
            prop_assert!(support(x.view(), 0.0).len() <= 3);
            prop_assert!(!nonneg || x.iter().all(|v| *v >= 0.0));
        }
    }

    // Limit statements: run to a tight epsilon so the final iterate is close
    // to the limit.
    #[test]
    fn converged_gspa_runs_certify(seed in any::<u64>(), nonneg in any::<bool>()) {
        let inst = gen_instance(&spec(60, 20, 3, nonneg, 0.0, 1, seed), 0).unwrap();
        let cfg = SolverConfig { nonneg, epsilon: 1e-10, ..SolverConfig::default() };
        let res = gspa_solve(&inst, &cfg).unwrap();
        prop_assume!(res.status == Status::ConvergedEpsilon);
        let last = res.trace.last().unwrap();
        prop_assert!(last.delta_norm / last.alpha < 1e-6);
        prop_assert!(restricted_gradient_norm(&inst, res.x_final.view()).unwrap() < 1e-6);
        let alpha = res.final_alpha().unwrap();
        prop_assert!(check_alpha_stationary(&inst, res.x_final.view(), alpha, 1e-6).unwrap().stationary);
        if check_s_regular(inst.a(), 3, 1e-10).unwrap() {
            prop_assert!(check_second_order(&inst, res.x_final.view(), true, 1e-10).unwrap().passed);
        }
    }
}
