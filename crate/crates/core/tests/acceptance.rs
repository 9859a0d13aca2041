//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ccount_core::applications::{gamma_shape_from_moment, gamma_shape_variance};
use ccount_core::bounds::{gm_rate_approx, plan_samples, solve, solve_gm_left, solve_gm_right, Side, TailEstimator};
use ccount_core::estimators::{
    estimate_gm, estimate_gm_b, estimate_hm, estimate_hm_c, estimate_sketch, gm_bracket, variance_factor_gm,
    variance_factor_hm,
};
use ccount_core::log_functionals::log_norm_from_moment;
use ccount_core::oracle::{exact_log_norm, exact_moment, replay, Signal};
use ccount_core::special::{euler_gamma, ln_gamma};
use ccount_core::{EstimatorKind, ProjectionKind, Sketch, SketchConfig, StreamUpdate};
use rand::{Rng, RngCore};

use common::{alpha, draws, mean_stat, rng, stable_abs_moment, SyntheticSketches};

const ALPHA_GRID: [f64; 7] = [0.25, 0.5, 0.75, 0.9, 1.1, 1.5, 2.0];

type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn within_budget(outcome: Outcome, elapsed: Duration, budget: Option<Duration>) -> Outcome {
    match budget {
        Some(b) if elapsed > b => Outcome {
            pass: false,
            detail: format!("{}; runtime {:.1}s exceeds {:.0}s", outcome.detail, elapsed.as_secs_f64(), b.as_secs_f64()),
        },
        _ => Outcome {
            detail: format!("{} ({:.1}s)", outcome.detail, elapsed.as_secs_f64()),
            ..outcome
        },
    }
}

/// Test signal with D entries and values 1..=7.
fn signal(d: u64) -> Signal {
    (0..d).map(|i| (i * 7919 + 3, 1.0 + (i % 7) as f64)).collect()
}

fn moment_fidelity() -> Outcome {
    let mut worst = (0.0f64, 0.0f64);
    for (i, &a) in ALPHA_GRID.iter().enumerate() {
        let lambda = a / 2.0;
        let z = draws(alpha(a), ProjectionKind::Skewed, 1_000_000, 100 + i as u64);
        let powers: Vec<f64> = z.iter().map(|x| x.abs().powf(lambda)).collect();
        let score = mean_stat(&powers).z(stable_abs_moment(a, 1.0, lambda));
        if score > worst.1 {
            worst = (a, score);
        }
    }
    check(
        worst.1 <= 4.0,
        format!("E|Z|^(a/2) over 1e6 draws, worst |z| = {:.2} at alpha = {}", worst.1, worst.0),
    )
}

fn unbiasedness() -> Outcome {
    let sig = signal(1000);
    let k = 100;
    let mut lines = Vec::new();
    let mut pass = true;
    for (i, &a) in [0.5, 0.9, 1.1, 1.5].iter().enumerate() {
        let al = alpha(a);
        let f = exact_moment(&sig, a).unwrap();
        let mut gen = SyntheticSketches::new(al, ProjectionKind::Skewed, f, 200 + i as u64);
        let mut x = vec![0.0; k];
        let est: Vec<f64> = (0..10_000)
            .map(|_| {
                gen.fill(&mut x);
                estimate_gm(&x, al).unwrap().value / f
            })
            .collect();
        let z = mean_stat(&est).z(1.0);
        // The same check through the real update path, at smaller scale.
        let real: Vec<f64> = (0..60u64)
            .map(|rep| {
                let mut s = Sketch::new(SketchConfig::new(a, k, 10_000 + rep, ProjectionKind::Skewed).unwrap()).unwrap();
                s.extend(sig.iter().map(|(i, v)| StreamUpdate::new(*i, *v))).unwrap();
                estimate_sketch(&s, EstimatorKind::Gm).unwrap().value / f
            })
            .collect();
        let zr = mean_stat(&real).z(1.0);
        pass &= z <= 4.0 && zr <= 4.0;
        lines.push(format!("a={a}: |z|={z:.2} (real sketches {zr:.2})"));
    }
    check(pass, format!("GM mean / F over 1e4 sketches, k=100, D=1000: {}", lines.join(", ")))
}

fn empirical_factor(a: f64, kind: EstimatorKind, seed: u64) -> f64 {
    let k = 100;
    let al = alpha(a);
    let mut gen = SyntheticSketches::new(al, ProjectionKind::Skewed, 1.0, seed);
    let mut x = vec![0.0; k];
    let est: Vec<f64> = (0..10_000)
        .map(|_| {
            gen.fill(&mut x);
            match kind {
                EstimatorKind::Gm => estimate_gm(&x, al).unwrap().value,
                EstimatorKind::HmC => estimate_hm_c(&x, al).unwrap().value,
                _ => unreachable!(),
            }
        })
        .collect();
    k as f64 * mean_stat(&est).variance
}

fn variance_constants() -> Outcome {
    let mut worst = (0.0f64, 0.0f64, "");
    for (i, &a) in ALPHA_GRID.iter().enumerate() {
        let v = variance_factor_gm(alpha(a));
        let r = (empirical_factor(a, EstimatorKind::Gm, 300 + i as u64) / v - 1.0).abs();
        if r > worst.1 {
            worst = (a, r, "gm");
        }
        if a < 1.0 {
            let v = variance_factor_hm(alpha(a)).unwrap();
            let r = (empirical_factor(a, EstimatorKind::HmC, 400 + i as u64) / v - 1.0).abs();
            if r > worst.1 {
                worst = (a, r, "hm_c");
            }
        }
    }
    let collapse = empirical_factor(0.99, EstimatorKind::Gm, 500);
    check(
        worst.1 <= 0.15 && collapse < 0.05,
        format!(
            "k*Var/F^2 vs analytic, worst deviation {:.1}% ({} at alpha = {}); gm factor at alpha=0.99 = {:.4} (analytic {:.4})",
            100.0 * worst.1,
            worst.2,
            worst.0,
            collapse,
            variance_factor_gm(alpha(0.99))
        ),
    )
}

fn monotone_limit() -> Outcome {
    let mut pass = true;
    let mut gaps = Vec::new();
    for a in [0.5, 1.5] {
        let al = alpha(a);
        let seq: Vec<f64> = (1..=12).map(|p| gm_bracket(al, 1 << p)).collect();
        let inc = seq.windows(2).all(|w| w[1] >= w[0]);
        let dec = seq.windows(2).all(|w| w[1] <= w[0]);
        let gap = (seq[11] - (-euler_gamma() * (a - 1.0)).exp()).abs();
        pass &= (inc || dec) && gap < 1e-3;
        gaps.push(format!("a={a}: {}, gap at k=4096 {gap:.2e}", if dec { "decreasing" } else if inc { "increasing" } else { "not monotone" }));
    }
    check(pass, gaps.join("; "))
}

fn small_delta_rates() -> Outcome {
    let mut worst = 0.0f64;
    for delta in [1e-4, 1e-3] {
        for eps in [0.05, 0.1] {
            for (a, side) in [(1.0 - delta, Side::Right), (1.0 + delta, Side::Right), (1.0 + delta, Side::Left)] {
                let al = alpha(a);
                let g = match side {
                    Side::Right => solve_gm_right(al, eps).unwrap().g,
                    Side::Left => solve_gm_left(al, eps).unwrap().g,
                };
                let approx = gm_rate_approx(al, eps, side).unwrap();
                worst = worst.max((g / approx - 1.0).abs());
            }
        }
    }
    check(worst <= 0.10, format!("worst |G_solver/G_approx - 1| = {:.2}%", 100.0 * worst))
}

fn tail_validity() -> Outcome {
    let n = 100_000usize;
    let mut pass = true;
    let mut lines = Vec::new();
    for (case, &(a, eps, k, est)) in [(0.9, 0.2, 200, TailEstimator::GmB), (1.1, 0.2, 200, TailEstimator::GmB), (0.5, 0.2, 200, TailEstimator::Hm)]
        .iter()
        .enumerate()
    {
        let al = alpha(a);
        let bound_r = solve(al, eps, Side::Right, est).unwrap().probability_bound(k);
        let bound_l = solve(al, eps, Side::Left, est).unwrap().probability_bound(k);
        let mut gen = SyntheticSketches::new(al, ProjectionKind::Skewed, 1.0, 600 + case as u64);
        let mut x = vec![0.0; k];
        let (mut over, mut under) = (0usize, 0usize);
        for _ in 0..n {
            gen.fill(&mut x);
            let v = match est {
                TailEstimator::GmB => estimate_gm_b(&x, al).unwrap().value,
                TailEstimator::Hm => estimate_hm(&x, al).unwrap().value,
            };
            over += (v >= 1.0 + eps) as usize;
            under += (v <= 1.0 - eps) as usize;
        }
        let ok = |count: usize, bound: f64| {
            let p = count as f64 / n as f64;
            p - 3.0 * (p * (1.0 - p) / n as f64).sqrt() <= bound
        };
        pass &= ok(over, bound_r) && ok(under, bound_l);
        lines.push(format!(
            "{est} a={a}: right {:.1e} <= {bound_r:.1e}, left {:.1e} <= {bound_l:.1e}",
            over as f64 / n as f64,
            under as f64 / n as f64
        ));
    }
    check(pass, format!("1e5 sketches, eps=0.2, k=200: {}", lines.join("; ")))
}

fn plan_coverage() -> Outcome {
    let (a, eps, delta) = (0.9, 0.2, 0.1);
    let al = alpha(a);
    let plan = plan_samples(al, eps, delta, TailEstimator::GmB).unwrap();
    let mut gen = SyntheticSketches::new(al, ProjectionKind::Skewed, 1.0, 700);
    let mut x = vec![0.0; plan.k];
    let n = 10_000;
    let mut fail_b = 0usize;
    let mut fail_gm = 0usize;
    for _ in 0..n {
        gen.fill(&mut x);
        fail_b += ((estimate_gm_b(&x, al).unwrap().value - 1.0).abs() > eps) as usize;
        fail_gm += ((estimate_gm(&x, al).unwrap().value - 1.0).abs() > eps) as usize;
    }
    let frac = fail_b as f64 / n as f64;
    check(
        frac <= delta,
        format!(
            "planned k = {} (G = {:.4}); gm_b failure fraction {frac:.4} <= {delta} (gm: {:.4})",
            plan.k,
            plan.g,
            fail_gm as f64 / n as f64
        ),
    )
}

fn log_norm_accuracy() -> Outcome {
    let sig: Signal = [(0, 1.0), (1, 2.0), (2, 4.0)].into();
    let exact = exact_log_norm(&sig).unwrap();
    let err = |a: f64| (log_norm_from_moment(exact_moment(&sig, a).unwrap(), a, 3).unwrap() - exact).abs();
    let (e1, e2) = (err(0.01), err(0.005));
    check(
        e1 <= 5e-3 && e2 < e1 && (exact - 2.07944).abs() < 1e-5,
        format!("sum log A = {exact:.5}; error {e1:.2e} at alpha=0.01, {e2:.2e} at alpha=0.005"),
    )
}

fn determinism_and_linearity() -> Outcome {
    let mut r = rng(900);
    let updates: Vec<StreamUpdate> = (0..100_000)
        .map(|_| {
            let index = r.next_u64() & ((1u64 << 40) - 1);
            let inc = if r.random_bool(0.3) { -r.random_range(0.0..5.0) } else { r.random_range(0.0..10.0) };
            StreamUpdate::new(index, inc)
        })
        .collect();
    let cfg = SketchConfig::new(0.9, 64, 42, ProjectionKind::Skewed).unwrap();
    let build = |ups: &[StreamUpdate]| {
        let mut s = Sketch::new(cfg).unwrap();
        s.extend(ups.iter().copied()).unwrap();
        s
    };
    let whole = build(&updates);
    let identical = whole.to_json() == build(&updates).to_json();

    let shards = 5;
    let mut merged = Sketch::new(cfg).unwrap();
    for s in 0..shards {
        let part: Vec<StreamUpdate> = updates.iter().skip(s).step_by(shards).copied().collect();
        merged.merge_from(&build(&part)).unwrap();
    }
    // Accumulator error is measured against Σ r|Δ|, the scale of the summands
    // (entries are positive for alpha < 1).
    let scale = build(&updates.iter().map(|u| StreamUpdate::new(u.index, u.increment.abs())).collect::<Vec<_>>());
    let worst = whole
        .samples()
        .iter()
        .zip(merged.samples())
        .zip(scale.samples())
        .map(|((a, b), s)| (a - b).abs() / s)
        .fold(0.0f64, f64::max);
    let memory = whole.samples().len() == cfg.k && merged.update_count() == updates.len() as u64;
    let distinct = replay(updates.iter().copied()).len();
    check(
        identical && worst <= 1e-9 && memory,
        format!(
            "byte-identical rebuild: {identical}; merge of {shards} shards vs single pass: max rel diff {worst:.1e}; {} accumulators for {distinct} distinct indices",
            cfg.k
        ),
    )
}

fn gamma_round_trip() -> Outcome {
    let mut worst = 0.0f64;
    for theta in [0.5, 1.0, 3.0, 10.0] {
        for a in [0.5, 0.9, 1.0, 1.5] {
            let m = (ln_gamma(a + theta).unwrap() - ln_gamma(theta).unwrap()).exp();
            let back = gamma_shape_from_moment(m, a).unwrap();
            worst = worst.max((back - theta).abs() / theta);
        }
    }
    let vs: Vec<f64> = [0.5, 1.0, 1.5, 2.0].iter().map(|&a| gamma_shape_variance(2.0, a, 1000).unwrap()).collect();
    let increasing = vs.windows(2).all(|w| w[1] > w[0]);
    check(
        worst <= 1e-8 && increasing,
        format!("worst relative round-trip error {worst:.1e}; variance at theta=2 increasing in alpha: {increasing}"),
    )
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria: [Criterion; 10] = [
        ("moment-formula fidelity", moment_fidelity, Some(secs(60))),
        ("unbiasedness", unbiasedness, Some(secs(300))),
        ("variance constants", variance_constants, None),
        ("monotone limit", monotone_limit, None),
        ("tail-bound solver vs small-delta rates", small_delta_rates, Some(secs(10))),
        ("tail-bound validity", tail_validity, Some(secs(600))),
        ("sample-complexity coverage", plan_coverage, None),
        ("log-norm accuracy", log_norm_accuracy, None),
        ("determinism and linearity", determinism_and_linearity, None),
        ("gamma-shape round trip", gamma_round_trip, None),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = within_budget(run(), start.elapsed(), *budget);
        failed += !outcome.pass as usize;
        println!("{} {:>2} {name}: {}", if outcome.pass { "PASS" } else { "FAIL" }, i + 1, outcome.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
