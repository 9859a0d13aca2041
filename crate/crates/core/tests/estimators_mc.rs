mod common;

use ccount_core::estimators::{
    estimate_gm, estimate_gm_b, estimate_hm, estimate_hm_c, estimate_sketch, estimate_sym_gm, gm_denominator,
    variance_factor_gm, variance_factor_hm,
};
use ccount_core::oracle::exact_moment;
use ccount_core::special::euler_gamma;
use ccount_core::{EstimatorKind, ProjectionKind, Sketch, SketchConfig, StreamUpdate};
use proptest::prelude::*;

use common::{alpha, mean_stat, SyntheticSketches};

#[test]
fn denominator_matches_high_precision() {
    // 40-digit evaluations of the closed form.
    for (a, expect) in [(0.5, 2.0150581131337724), (1.5, 1.2137324145187245)] {
        let d = gm_denominator(alpha(a), 10).unwrap();
        assert!(((d - expect) / expect).abs() < 1e-10, "alpha={a}: {d}");
    }
}

#[test]
fn gm_is_unbiased_on_unit_signal() {
    let al = alpha(0.9);
    let mut gen = SyntheticSketches::new(al, ProjectionKind::Skewed, 1000.0, 11);
    let mut x = vec![0.0; 100];
    let est: Vec<f64> = (0..10_000)
        .map(|_| {
            gen.fill(&mut x);
            estimate_gm(&x, al).unwrap().value
        })
        .collect();
    assert!(mean_stat(&est).z(1000.0) < 4.0);
}

#[test]
fn sym_gm_is_unbiased() {
    for (i, &a) in [0.05, 0.5, 1.5].iter().enumerate() {
        let al = alpha(a);
        let mut gen = SyntheticSketches::new(al, ProjectionKind::Symmetric, 50.0, 20 + i as u64);
        let mut x = vec![0.0; 50];
        let est: Vec<f64> = (0..10_000)
            .map(|_| {
                gen.fill(&mut x);
                estimate_sym_gm(&x, al).unwrap().value
            })
            .collect();
        assert!(mean_stat(&est).z(50.0) < 4.0, "alpha={a}");
    }
}

#[test]
fn hm_c_has_smaller_variance_than_gm() {
    let al = alpha(0.5);
    let mut gen = SyntheticSketches::new(al, ProjectionKind::Skewed, 1.0, 30);
    let mut x = vec![0.0; 100];
    let (mut gm, mut hm) = (Vec::new(), Vec::new());
    for _ in 0..10_000 {
        gen.fill(&mut x);
        gm.push(estimate_gm(&x, al).unwrap().value);
        hm.push(estimate_hm_c(&x, al).unwrap().value);
    }
    let ratio = mean_stat(&hm).variance / mean_stat(&gm).variance;
    let expect = variance_factor_hm(al).unwrap() / variance_factor_gm(al);
    let closed = (std::f64::consts::FRAC_PI_2 - 1.0) / (std::f64::consts::PI.powi(2) / 8.0);
    assert!((expect - closed).abs() < 1e-14 && (expect - 0.4628).abs() < 2e-4);
    assert!((ratio / expect - 1.0).abs() < 0.25, "ratio {ratio} vs {expect}");
}

#[test]
fn hm_c_bias_is_small() {
    let al = alpha(0.7);
    let mut gen = SyntheticSketches::new(al, ProjectionKind::Skewed, 1.0, 31);
    let mut x = vec![0.0; 20];
    let (mut raw, mut corrected) = (Vec::new(), Vec::new());
    for _ in 0..40_000 {
        gen.fill(&mut x);
        raw.push(estimate_hm(&x, al).unwrap().value);
        corrected.push(estimate_hm_c(&x, al).unwrap().value);
    }
    let c = mean_stat(&corrected);
    assert!(c.z(1.0) < 4.0, "hm_c mean {}", c.mean);
    // The uncorrected estimator is biased upward by about V/k.
    assert!(mean_stat(&raw).mean > c.mean);
}

#[test]
fn gm_b_to_gm_ratio_is_the_constant() {
    let al = alpha(1.3);
    let x = [0.3, -1.2, 4.0, 2.2, -0.7];
    let ratio = estimate_gm_b(&x, al).unwrap().value / estimate_gm(&x, al).unwrap().value;
    let expect = gm_denominator(al, 5).unwrap()
        * (euler_gamma() * 0.3).exp()
        * (std::f64::consts::FRAC_PI_2 * al.kappa()).cos();
    assert!((ratio / expect - 1.0).abs() < 1e-13);
}

#[test]
fn sketch_estimates_check_projection_kind() {
    let cfg = SketchConfig::new(0.5, 10, 1, ProjectionKind::Symmetric).unwrap();
    let mut s = Sketch::new(cfg).unwrap();
    s.update(StreamUpdate::new(3, 1.0)).unwrap();
    assert!(estimate_sketch(&s, EstimatorKind::Gm).is_err());
    assert!(estimate_sketch(&s, EstimatorKind::SymGm).is_ok());
}

#[test]
fn real_sketch_recovers_moment() {
    let cfg = SketchConfig::new(0.8, 400, 77, ProjectionKind::Skewed).unwrap();
    let mut s = Sketch::new(cfg).unwrap();
    let ups: Vec<StreamUpdate> = (0..300u64).map(|i| StreamUpdate::new(i * 31, 1.0 + (i % 5) as f64)).collect();
    s.extend(ups.iter().copied()).unwrap();
    let exact = exact_moment(&ccount_core::oracle::replay(ups), 0.8).unwrap();
    for kind in [EstimatorKind::Gm, EstimatorKind::HmC] {
        let e = estimate_sketch(&s, kind).unwrap();
        assert!((e.value - exact).abs() < 4.0 * e.asymptotic_stderr, "{kind}: {} vs {exact}", e.value);
    }
}

proptest! {
    #[test]
    fn homogeneous_of_degree_alpha(
        a in prop::sample::select(vec![0.3, 0.7, 1.4, 1.9]),
        xs in prop::collection::vec(0.01f64..100.0, 2..40),
        c in 0.1f64..10.0,
    ) {
        let al = alpha(a);
        let scaled: Vec<f64> = xs.iter().map(|x| c * x).collect();
        let factor = c.powf(a);
        let mut kinds = vec![EstimatorKind::Gm, EstimatorKind::GmB, EstimatorKind::SymGm];
        if a < 1.0 {
            kinds.extend([EstimatorKind::Hm, EstimatorKind::HmC]);
        }
        for kind in kinds {
            let e0 = ccount_core::estimators::estimate_with(kind, &xs, al).unwrap().value;
            let e1 = ccount_core::estimators::estimate_with(kind, &scaled, al).unwrap().value;
            prop_assert!((e1 / (factor * e0) - 1.0).abs() < 1e-12, "{kind}");
        }
    }

    #[test]
    fn permutation_invariant(xs in prop::collection::vec(-50.0f64..50.0, 2..30).prop_shuffle()) {
        let al = alpha(0.6);
        let mut sorted = xs.clone();
        sorted.sort_by(f64::total_cmp);
        prop_assert_eq!(estimate_gm(&xs, al).unwrap().value, estimate_gm(&sorted, al).unwrap().value);
        prop_assert_eq!(estimate_hm(&xs, al).unwrap().value, estimate_hm(&sorted, al).unwrap().value);
    }
}
