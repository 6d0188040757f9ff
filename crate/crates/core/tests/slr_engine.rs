//! Dual iterations, bounds and primal recovery on small systems.

mod common;

use common::*;
use gridfleet_core::ev::ChargingRegime;
use gridfleet_core::lp::{Family, SolveOptions};
use gridfleet_core::model::*;
use gridfleet_core::plan::{build_plan, BalanceMode, PlanningModel};
use gridfleet_core::slr::recovery::hard_balance_model;
use gridfleet_core::slr::*;

/// Three years of a one-zone day with three committable gas units.
fn three_unit_system() -> SystemData {
    let day: Vec<f64> = (0..24)
        .map(|h| 75.0 + 40.0 * (std::f64::consts::PI * (h as f64 - 6.0) / 12.0).sin().max(0.0))
        .collect();
    let mut sys = one_zone_years(day, &[2030, 2031, 2032]);
    let mut base = gas("base", 80.0, 30.0, 20.0);
    base.startup_cost = 500.0;
    let mut mid = gas("mid", 50.0, 10.0, 35.0);
    mid.startup_cost = 200.0;
    let peak = gas("peak", 40.0, 0.0, 70.0);
    sys.thermal.extend([base, mid, peak]);
    sys
}

fn relaxed(sys: &SystemData) -> PlanningModel {
    build_plan(sys, &empty_fleet(sys), ChargingRegime::Fixed, BalanceMode::Residual).unwrap()
}

fn hard(sys: &SystemData) -> PlanningModel {
    build_plan(sys, &empty_fleet(sys), ChargingRegime::Fixed, BalanceMode::Hard).unwrap()
}

fn config(max_iterations: usize) -> SlrConfig {
    SlrConfig {
        max_iterations,
        solver: SolveOptions {
            mip_gap: 1e-6,
            ..SolveOptions::default()
        },
        ..SlrConfig::default()
    }
}

#[test]
fn zero_prices_leave_every_cost_at_its_floor() {
    let sys = three_unit_system();
    let p = relaxed(&sys);
    let b = backend();
    let cfg = SlrConfig {
        rho0: 0.0,
        ..config(0)
    };
    let state = SlrState::new(&sys, &p, &b, cfg).unwrap();
    let x = state.plan_values();
    assert!(state.lambda.iter().all(|&l| l == 0.0));
    for (v, (&xi, c)) in p.model.vars().iter().zip(x.iter().zip(dense_objective(&p))) {
        if c > 0.0 {
            assert!((xi - v.lower).abs() < 1e-7, "{} at {xi}", v.name);
        }
    }
    // nothing generates, so each residual is minus the load
    for (r, row) in state.residuals().iter().zip(p.balance_rows()) {
        let load = sys.zones[0].load[row.hour % 24];
        assert!((r + load).abs() < 1e-7);
    }
    assert!((state.lagrangian(&x) - p.objective.eval(&x)).abs() < 1e-9);
}

fn dense_objective(p: &PlanningModel) -> Vec<f64> {
    let mut c = vec![0.0; p.model.num_vars()];
    for &(v, a) in p.objective.terms() {
        c[v.index()] += a;
    }
    c
}

#[test]
fn partial_iterations_cycle_through_single_blocks() {
    let sys = three_unit_system();
    let p = relaxed(&sys);
    let b = backend();
    let cfg = SlrConfig {
        full_solve_every: 0,
        ..config(12)
    };
    let mut state = SlrState::new(&sys, &p, &b, cfg).unwrap();
    let mut singles = 0;
    for k in 0..9 {
        let rec = state.iterate().unwrap();
        let first: usize = rec.subset.split(' ').next().unwrap().parse().unwrap();
        assert_eq!(first, k % 3);
        if rec.subset.split(' ').count() == 1 {
            singles += 1;
        }
    }
    assert!(singles > 0);
}

#[test]
fn toy_residuals_fall_below_one_megawatt() {
    let sys = three_unit_system();
    let p = relaxed(&sys);
    let out = solve_slr(&sys, &p, &backend(), &config(200)).unwrap();
    assert!(out.converged, "not converged in {} iterations", out.iterations.len());
    assert!(out.iterations.len() <= 200);
    assert!(out.iterations.last().unwrap().max_residual < 1.0);
    let best = out.iterations.iter().map(|r| r.max_residual).fold(f64::INFINITY, f64::min);
    assert!(best < 1.0);
}

#[test]
fn diminishing_rule_vanishes_with_a_divergent_sum() {
    let s0 = 10.0;
    let rule = StepRule::Diminishing { s0, power: 1.0 };
    let lengths: Vec<f64> = (0..1000).map(|k| rule.length(k)).collect();
    assert!(lengths.windows(2).all(|w| w[1] < w[0]));
    assert!(lengths[999] <= s0 / 1000.0 + 1e-12);
    let partial = |n: usize| lengths[..n].iter().sum::<f64>();
    // harmonic growth: each doubling adds about s0·ln 2
    for n in [125, 250, 500] {
        assert!(partial(2 * n) - partial(n) > 0.99 * s0 * std::f64::consts::LN_2);
    }
    assert!(partial(1000) > 7.0 * s0);

    let geo = StepRule::Geometric { s0, alpha: 0.98 };
    let total: f64 = (0..1000).map(|k| geo.length(k)).sum();
    assert!(total < s0 / (1.0 - 0.98));
}

#[test]
fn multipliers_move_against_the_residual() {
    let mut lambda = vec![1.0, 1.0];
    let s = update_multipliers(&mut lambda, &[3.0, -4.0], 5.0, 0).unwrap();
    assert!((s - 1.0).abs() < 1e-12);
    assert_eq!(lambda, vec![-2.0, 5.0]);
    assert!(update_multipliers(&mut lambda, &[f64::NAN, 0.0], 1.0, 7).is_err());
    assert!(update_multipliers(&mut lambda, &[0.0], 1.0, 0).is_err());
}

#[test]
fn dual_bounds_never_exceed_the_optimum() {
    let sys = three_unit_system();
    let exact = solve_monolithic(&hard(&sys), &backend(), &tight()).unwrap();
    let p = relaxed(&sys);
    let b = backend();
    let cfg = SlrConfig {
        full_solve_every: 4,
        ..config(30)
    };
    let mut state = SlrState::new(&sys, &p, &b, cfg.clone()).unwrap();
    // a feasible plan has no residual, so its relaxed value is its cost
    let feasible = &exact.values[..p.model.num_vars()];
    for _ in 0..16 {
        let rec = state.iterate().unwrap();
        assert!(rec.dual_bound <= exact.objective * (1.0 + 1e-6), "{} > {}", rec.dual_bound, exact.objective);
        assert!((state.lagrangian(feasible) - p.objective.eval(feasible)).abs() <= 1e-9 * exact.objective);
    }
    assert!(state.best_dual_bound.is_finite());
    let out = solve_slr(&sys, &p, &b, &cfg).unwrap();
    assert!(out.dual_bound <= out.objective);
    assert!(out.objective >= exact.objective * (1.0 - 1e-6));
}

#[test]
fn residuals_match_the_hard_balance_audit() {
    let sys = three_unit_system();
    let p = relaxed(&sys);
    let b = backend();
    let mut state = SlrState::new(&sys, &p, &b, config(10)).unwrap();
    for _ in 0..4 {
        state.iterate().unwrap();
    }
    let x = state.plan_values();
    let r = state.residuals();
    let tol = 1e-6;
    let mut expected: Vec<f64> = r.iter().map(|v| v.abs()).filter(|&a| a > tol).collect();
    let mut audited: Vec<f64> = hard_balance_model(&p)
        .audit(&x, tol)
        .into_iter()
        .filter(|v| v.family == Some(Family::Balance))
        .map(|v| v.amount)
        .collect();
    expected.sort_by(f64::total_cmp);
    audited.sort_by(f64::total_cmp);
    assert_eq!(expected.len(), audited.len());
    for (e, a) in expected.iter().zip(&audited) {
        assert!((e - a).abs() < 1e-9);
    }
    // nothing but the balance is violated by a relaxed iterate
    assert!(p.model.audit(&x, 1e-6).is_empty());
}

#[test]
fn identical_runs_give_identical_logs() {
    let sys = three_unit_system();
    let p = relaxed(&sys);
    let cfg = config(15);
    let a = solve_slr(&sys, &p, &backend(), &cfg).unwrap();
    let b = solve_slr(&sys, &p, &backend(), &cfg).unwrap();
    assert_eq!(a.iterations.len(), b.iterations.len());
    for (x, y) in a.iterations.iter().zip(&b.iterations) {
        assert_eq!(x.dual_value, y.dual_value);
        assert_eq!(x.max_residual, y.max_residual);
        assert_eq!(x.subset, y.subset);
    }
    assert_eq!(a.multipliers, b.multipliers);
    assert_eq!(a.objective, b.objective);
}

#[test]
fn recovery_releases_binaries_when_the_fixing_is_infeasible() {
    let sys = three_unit_system();
    let p = relaxed(&sys);
    let b = backend();
    let cfg = SlrConfig {
        rho0: 0.0,
        ..config(0)
    };
    // all units off: fixing almost every commitment at zero cannot meet load
    let state = SlrState::new(&sys, &p, &b, cfg.clone()).unwrap();
    let incumbent = state.plan_values();
    let stable = vec![0; p.model.num_binaries()];
    let rec = recover_primal(&p, &b, &incumbent, &stable, &cfg).unwrap();
    assert!(rec.rounds > 1, "first fixing was feasible");
    assert!(rec.fixed < (0.95 * rec.binaries as f64) as usize);
    let exact = solve_monolithic(&hard(&sys), &b, &tight()).unwrap();
    assert!(rec.objective >= exact.objective * (1.0 - 1e-6));
    assert!(hard_balance_model(&p).audit(&rec.values, 1e-6).is_empty());
}

#[test]
fn hard_mode_plans_are_rejected() {
    let sys = three_unit_system();
    let p = hard(&sys);
    let b = backend();
    assert!(SlrState::new(&sys, &p, &b, config(1)).is_err());
}
