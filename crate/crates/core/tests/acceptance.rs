//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (visible with `cargo test --test acceptance -- --nocapture`).

mod common;

use std::time::Instant;

use common::{ln_gamma, Lcg};
use fracmap_core::analysis::{
    bifurcation_1d, classify_period, control_interval, multistability_probe,
    multistability_sweep, phase_diagram_2d, PeriodKind, SweepAxis, SweepConfig,
};
use fracmap_core::dynamics::{
    simulate, simulate_controlled, simulate_coupled, sync_gain_interval, ControlConfig,
    Controller, HistoryRule, SyncConfig,
};
use fracmap_core::frackernel::{memory_sum, KernelWeights};
use fracmap_core::glmap::{equilibria, eval_derivative, eval_map, MapParams};
use fracmap_core::grid::Grid;

fn report(n: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {n} ({name}): {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} ({name}) failed: {detail}");
}

#[test]
fn criterion_1_classical_equivalence() {
    let start = Instant::now();
    let mut rng = Lcg::new(0xC1A551C);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let mu = rng.next_in(0.0, 4.0);
        let x0 = rng.next_in(f64::MIN_POSITIVE, 1.0);
        let params = MapParams::new(1.0, mu, 0.0).unwrap();
        let traj = simulate(&params, x0, 1000).unwrap();
        // every engine step must equal one direct logistic application of
        // the previous engine state
        for t in 1..traj.states.len() {
            let prev = traj.states[t - 1];
            let direct = mu * prev * (1.0 - prev);
            worst = worst.max((traj.states[t] - direct).abs());
        }
        // short-horizon global comparison, before rounding noise can be
        // amplified by the dynamics
        let mut x = x0;
        for t in 1..=10.min(traj.states.len() - 1) {
            x = mu * x * (1.0 - x);
            worst = worst.max((traj.states[t] - x).abs());
        }
    }
    let elapsed = start.elapsed();
    let pass = worst <= 1e-12 && elapsed.as_secs_f64() < 1.0;
    report(
        1,
        "classical equivalence",
        pass,
        &format!("worst per-step deviation {worst:.2e} over 20 draws, {elapsed:.2?}"),
    );
}

#[test]
fn criterion_2_stability_strip() {
    let start = Instant::now();
    let mut violations = Vec::new();
    for alpha in [0.2, 0.5, 0.8] {
        let lower = 1.0 - 2f64.powf(alpha);
        for (mu, inside) in [
            (lower + 0.05, true),
            (lower - 0.05, false),
            (0.95, true),
            (1.05, false),
        ] {
            let params = MapParams::new(alpha, mu, 0.1).unwrap();
            let traj = simulate(&params, 0.01, 800).unwrap();
            let x800 = traj.states[800].abs();
            let converged = x800 < 1e-3;
            println!(
                "  strip sample alpha={alpha} mu={mu:+.4}: |x(800)|={x800:.3e}, \
                 expected {} -> {}",
                if inside { "convergent" } else { "non-convergent" },
                if converged == inside { "ok" } else { "violation" }
            );
            if converged != inside {
                violations.push(format!("(alpha={alpha}, mu={mu:.4}, |x(800)|={x800:.3e})"));
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = violations.is_empty() && elapsed.as_secs_f64() < 5.0;
    report(
        2,
        "stability strip",
        pass,
        &format!(
            "{} of 12 samples violate the |x(800)| < 1e-3 threshold{}{}, {elapsed:.2?}",
            violations.len(),
            if violations.is_empty() { "" } else { ": " },
            violations.join(", ")
        ),
    );
}

/// Longest contiguous run of grid points classified Period(p).
fn longest_run(points: &[(f64, PeriodKind)], p: u32) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut cur: Option<usize> = None;
    for (i, (_, kind)) in points.iter().enumerate() {
        if *kind == PeriodKind::Period(p) {
            let start = *cur.get_or_insert(i);
            if best.is_none_or(|(b, e)| i + 1 - start > e - b) {
                best = Some((start, i + 1));
            }
        } else {
            cur = None;
        }
    }
    best
}

/// Transition point from the longest Period(p) run to the next Period(q)
/// point after it: midpoint between the run's last grid value and the first
/// Period(q) value that follows.
fn transition(points: &[(f64, PeriodKind)], p: u32, q: u32) -> Option<f64> {
    let (_, end) = longest_run(points, p)?;
    let last_p = points[end - 1].0;
    let first_q = points[end..]
        .iter()
        .find(|(_, kind)| *kind == PeriodKind::Period(q))?
        .0;
    Some(0.5 * (last_p + first_q))
}

#[test]
fn criterion_3_bifurcation_bands_positive_quadrant() {
    let start = Instant::now();
    let grid = Grid::new(0.0, 4.0, 400).unwrap();
    let cfg = SweepConfig::default();
    let sweep = bifurcation_1d(0.8, SweepAxis::Mu, 0.1, &grid, 0.3, &cfg).unwrap();
    let points: Vec<(f64, PeriodKind)> = sweep
        .points
        .iter()
        .map(|pt| (pt.value, pt.class.kind))
        .collect();

    let t12 = transition(&points, 1, 2).unwrap_or(f64::NAN);
    let t24 = transition(&points, 2, 4).unwrap_or(f64::NAN);
    let t48 = transition(&points, 4, 8).unwrap_or(f64::NAN);

    let chaotic_tail: Vec<&(f64, PeriodKind)> = points
        .iter()
        .filter(|(mu, _)| *mu > 3.80 && *mu < 4.00)
        .collect();
    let only_chaos_or_windows = chaotic_tail
        .iter()
        .all(|(_, k)| matches!(k, PeriodKind::Chaotic | PeriodKind::Period(_)));
    let quarters_have_chaos = (0..4).all(|q| {
        let lo = 3.80 + 0.05 * q as f64;
        chaotic_tail
            .iter()
            .any(|(mu, k)| *mu >= lo && *mu < lo + 0.05 && *k == PeriodKind::Chaotic)
    });

    let elapsed = start.elapsed();
    let pass = (t12 - 3.00).abs() <= 0.05
        && (t24 - 3.58).abs() <= 0.05
        && (t48 - 3.71).abs() <= 0.05
        && only_chaos_or_windows
        && quarters_have_chaos
        && elapsed.as_secs_f64() < 120.0;
    report(
        3,
        "bifurcation bands mu in [0,4]",
        pass,
        &format!(
            "transitions 1->2 at {t12:.4}, 2->4 at {t24:.4}, 4->8 at {t48:.4}; \
             chaos-or-window tail: {only_chaos_or_windows}, chaos in every quarter: \
             {quarters_have_chaos}, {elapsed:.2?}"
        ),
    );
}

#[test]
fn criterion_4_bifurcation_bands_negative_quadrant() {
    let start = Instant::now();
    let grid = Grid::new(-4.0, 0.0, 400).unwrap();
    let cfg = SweepConfig::default();
    let sweep = bifurcation_1d(0.2, SweepAxis::Mu, 3.5, &grid, 0.15, &cfg).unwrap();
    let points: Vec<(f64, PeriodKind)> = sweep
        .points
        .iter()
        .map(|pt| (pt.value, pt.class.kind))
        .collect();

    let (run_start, run_end) = longest_run(&points, 2).expect("no period-2 band found");
    let left = points[run_start].0;
    let right = points[run_end - 1].0;

    let elapsed = start.elapsed();
    let pass = (left - (-2.07)).abs() <= 0.05
        && (right - (-0.15)).abs() <= 0.05
        && elapsed.as_secs_f64() < 120.0;
    report(
        4,
        "period-2 band mu in [-4,0]",
        pass,
        &format!("band [{left:.4}, {right:.4}] vs (-2.07, -0.15), {elapsed:.2?}"),
    );
}

#[test]
fn criterion_5_control_interval_and_runs() {
    let start = Instant::now();
    let cfg = SweepConfig::default();

    let iv1 = control_interval(0.2, -3.85, 1e-4).unwrap();
    let iv1_ok = iv1.len() == 1
        && (iv1[0].0 - 3.22).abs() <= 0.05
        && (iv1[0].1 - 5.03).abs() <= 0.05;

    let params1 = MapParams::new(0.2, -3.85, 3.5).unwrap();
    let classify = |params: &MapParams, b: f64| {
        let control = ControlConfig::new(b, 1).unwrap();
        let traj =
            simulate_controlled(params, &control, 0.01, HistoryRule::HoldX0, cfg.steps).unwrap();
        cfg.classify(&traj).unwrap().kind
    };
    let free1 = classify(&params1, 0.0);
    let held1 = classify(&params1, 3.3);

    let iv2 = control_interval(0.8, -3.0, 1e-4).unwrap();
    let iv2_ok = iv2.len() == 1
        && (iv2[0].0 - 1.29).abs() <= 0.05
        && (iv2[0].1 - 1.48).abs() <= 0.05;
    let params2 = MapParams::new(0.8, -3.0, 2.0).unwrap();
    let held2 = classify(&params2, 1.4);

    let elapsed = start.elapsed();
    let pass = iv1_ok
        && iv2_ok
        && free1 == PeriodKind::Chaotic
        && held1 == PeriodKind::Period(1)
        && held2 == PeriodKind::Period(1)
        && elapsed.as_secs_f64() < 10.0;
    report(
        5,
        "delayed-feedback control",
        pass,
        &format!(
            "intervals {iv1:?} and {iv2:?}; classes b=0 -> {free1:?}, b=3.3 -> {held1:?}, \
             b=1.4 -> {held2:?}, {elapsed:.2?}"
        ),
    );
}

#[test]
fn criterion_6_synchronization() {
    let start = Instant::now();

    let params1 = MapParams::new(0.8, 3.8, 0.1).unwrap();
    let (_, hi1) = sync_gain_interval(&params1, Controller::H1).unwrap();
    let params2 = MapParams::new(0.2, -3.8, 3.5).unwrap();
    let (_, hi2) = sync_gain_interval(&params2, Controller::H2).unwrap();
    let endpoints_ok = (hi1 - 0.741101).abs() <= 5e-7 && (hi2 - 0.148698).abs() <= 5e-7;

    let sync1 = SyncConfig::new(Controller::H1, 3.8, 0.7).unwrap();
    let run1 = simulate_coupled(&params1, &sync1, 0.1, 0.2, 300).unwrap();
    let worst1 = run1.error[100..=300]
        .iter()
        .fold(0.0f64, |m, e| m.max(e.abs()));

    let sync2 = SyncConfig::new(Controller::H2, -3.8, -0.5).unwrap();
    let run2 = simulate_coupled(&params2, &sync2, 0.01, 0.04, 300).unwrap();
    let worst2 = run2.error[150..=300]
        .iter()
        .fold(0.0f64, |m, e| m.max(e.abs()));

    // sufficiency spot-check: five gains inside the guaranteed interval
    let mut grid_ok = true;
    for i in 0..5 {
        let k = -1.0 + (hi1 + 1.0) * (i as f64 + 0.5) / 5.0;
        let sync = SyncConfig::new(Controller::H1, 3.8, k).unwrap();
        let run = simulate_coupled(&params1, &sync, 0.1, 0.2, 300).unwrap();
        let worst = run.error[200..=300]
            .iter()
            .fold(0.0f64, |m, e| m.max(e.abs()));
        grid_ok &= worst < 1e-2;
    }

    let elapsed = start.elapsed();
    let pass = endpoints_ok
        && worst1 < 1e-2
        && worst2 < 1e-2
        && grid_ok
        && elapsed.as_secs_f64() < 5.0;
    report(
        6,
        "synchronization",
        pass,
        &format!(
            "endpoints {hi1:.6}/{hi2:.6}; worst |E| {worst1:.2e} on [100,300] and \
             {worst2:.2e} on [150,300]; 5-gain grid ok: {grid_ok}, {elapsed:.2?}"
        ),
    );
}

#[test]
fn criterion_7_multistability() {
    let start = Instant::now();
    let cfg = SweepConfig::default();

    let params = MapParams::new(0.2, -3.8, 3.5).unwrap();
    let probe = multistability_probe(&params, &[0.3, 0.4], &cfg).unwrap();
    let distinct_point = probe.has_distinct_classes();

    let grid = Grid::new(0.0, 2.0, 101).unwrap();
    let sweep = multistability_sweep(1.0, -0.97, &grid, &[0.9, 1.1], &cfg).unwrap();
    let distinct_count = sweep.distinct_mu_values().len();

    let elapsed = start.elapsed();
    let pass = distinct_point && distinct_count > 0 && elapsed.as_secs_f64() < 30.0;
    report(
        7,
        "multistability",
        pass,
        &format!(
            "x0=0.3 -> {:?} vs x0=0.4 -> {:?}; sweep has {distinct_count} distinct grid \
             points, {elapsed:.2?}",
            probe.runs[0].class.kind, probe.runs[1].class.kind
        ),
    );
}

#[test]
fn criterion_8_property_suite() {
    let start = Instant::now();
    let mut failures = Vec::new();

    // kernel recurrence vs log-gamma, single large-horizon coefficient
    let weights = KernelWeights::build(0.8, 1000).unwrap();
    let oracle = (ln_gamma(1000.0 + 0.8) - ln_gamma(0.8) - ln_gamma(1001.0)).exp();
    let rel = ((weights.coeffs()[1000] - oracle) / oracle).abs();
    if rel > 1e-10 {
        failures.push(format!("kernel c_1000 off by {rel:.2e}"));
    }

    // memory sum vs direct log-gamma evaluation, t <= 50
    let mut rng = Lcg::new(0xFACADE);
    for alpha in [0.2, 0.5, 0.8] {
        let w = KernelWeights::build(alpha, 64).unwrap();
        let incr: Vec<f64> = (0..50).map(|_| rng.next_in(-1.0, 1.0)).collect();
        for t in [1usize, 2, 7, 25, 50] {
            let got = memory_sum(&w, &incr, t).unwrap();
            let mut want = 0.0;
            for j in 1..=t {
                let lag = (t - j) as f64;
                let coeff =
                    (ln_gamma(lag + alpha) - ln_gamma(alpha) - ln_gamma(lag + 1.0)).exp();
                want += coeff * incr[j - 1];
            }
            let scale = want.abs().max(1.0);
            if ((got - want) / scale).abs() > 1e-10 {
                failures.push(format!("memory_sum alpha={alpha} t={t}"));
            }
        }
    }

    // derivative vs central finite differences at 100 pole-free points;
    // pole-free means a healthy denominator, since the finite-difference
    // truncation error blows up like 1/d^4 as the pole is approached
    let params = MapParams::new(0.5, 3.8, 0.1).unwrap();
    let h = 1e-6;
    let mut checked = 0;
    while checked < 100 {
        let x = rng.next_in(-2.0, 3.0);
        if (1.0 + params.r * params.mu * x * (1.0 - x)).abs() < 0.2 {
            continue;
        }
        let fd =
            (eval_map(&params, x + h).unwrap() - eval_map(&params, x - h).unwrap()) / (2.0 * h);
        let got = eval_derivative(&params, x).unwrap();
        if (got - fd).abs() > 1e-6 {
            failures.push(format!("derivative at x={x}"));
        }
        checked += 1;
    }

    // fixed-point residuals across a parameter sample
    for i in 0..40 {
        let mu = -4.0 + 8.0 * (i as f64 + 0.5) / 40.0;
        for r in [-2.0, -0.5, 0.0, 0.1, 1.0, 3.5] {
            let params = MapParams::new(0.6, mu, r).unwrap();
            for pt in equilibria(&params).points {
                let fx = eval_map(&params, pt.value).unwrap();
                if (fx - pt.value).abs() > 1e-9 * pt.value.abs().max(1.0) {
                    failures.push(format!("residual at mu={mu} r={r} x*={}", pt.value));
                }
            }
        }
    }

    // smallest-period property on synthetic cycles
    let make = |cycle: &[f64]| fracmap_core::dynamics::Trajectory {
        params: MapParams::new(0.5, 3.5, 0.0).unwrap(),
        x0: cycle[0],
        states: (0..900).map(|i| cycle[i % cycle.len()]).collect(),
        outcome: fracmap_core::dynamics::Outcome::Completed,
    };
    for (cycle, expect) in [
        (vec![0.7], 1u32),
        (vec![0.2, 0.8], 2),
        (vec![0.1, 0.6, 0.3, 0.9], 4),
        (vec![0.1, 0.5, 0.2, 0.7, 0.35, 0.92], 6),
        (vec![0.05, 0.3, 0.55, 0.8, 0.15, 0.4, 0.65, 0.9], 8),
    ] {
        let class = classify_period(&make(&cycle), 500, 256, 64, 1e-4).unwrap();
        if class.kind != PeriodKind::Period(expect) {
            failures.push(format!("cycle of length {} -> {:?}", cycle.len(), class.kind));
        }
    }

    // parallel determinism: phase diagram rendered under 1 and 4 workers
    let render = |workers: usize| {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .unwrap();
        pool.install(|| {
            let mu = Grid::new(-4.0, 4.0, 24).unwrap();
            let r = Grid::new(-4.0, 4.0, 24).unwrap();
            let cfg = SweepConfig::default();
            let diagram = phase_diagram_2d(0.5, &mu, &r, 0.3, &cfg).unwrap();
            let mut out = String::new();
            for cell in &diagram.cells {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    cell.mu,
                    cell.r,
                    cell.class.kind.label(),
                    cell.class.kind.period()
                ));
            }
            out
        })
    };
    if render(1) != render(4) {
        failures.push("phase diagram differs across worker counts".into());
    }

    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed.as_secs_f64() < 60.0;
    report(
        8,
        "property suite",
        pass,
        &format!(
            "{}{}, {elapsed:.2?}",
            if failures.is_empty() {
                "kernel oracle, derivative, residuals, smallest-period, determinism all hold"
            } else {
                "failures: "
            },
            failures.join("; ")
        ),
    );
}
