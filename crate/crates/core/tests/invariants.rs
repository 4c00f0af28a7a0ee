//! Cross-module properties on random states.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use hopf_sr::classifier::{classify, GeodesicClass};
use hopf_sr::dynamics::{hamiltonian, theta0_period_analytic, Flow, PhaseState};
use hopf_sr::hopf::{fold, hopf_to_euclidean, metric, HopfPoint, MetricKind};
use hopf_sr::integrator::{
    closure_of, integrate, sr_arc_length, theta0_oscillations, IntegratorConfig,
};
use hopf_sr::spectrum::{
    closure_data, realize_length, synthesize_initial_conditions, Realization, DEFAULT_Q_MAX,
};
use num_rational::Ratio;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn nonzero() -> impl Strategy<Value = f64> {
    prop_oneof![0.2..2.0f64, -2.0..-0.2f64]
}

fn coarse() -> IntegratorConfig {
    IntegratorConfig {
        drift_budget: 1e-6,
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generic_states_never_bounce(
        t0 in 0.2..1.37f64,
        x0 in nonzero(),
        x1 in nonzero(),
        x2 in nonzero(),
    ) {
        let s = PhaseState::new(t0, 0.0, 0.0, x0, x1, x2);
        prop_assume!(matches!(classify(&s), Ok(GeodesicClass::Generic3 { .. })));
        let t = 1.2 * theta0_period_analytic(&s).unwrap();
        let tr = integrate(&s, t, 1e-3, Flow::SubRiemannian, &coarse()).unwrap();
        prop_assert_eq!(tr.bounce_count(), 0);
        prop_assert!(theta0_oscillations(&tr) >= 1);
    }

    #[test]
    fn boundary_states_always_bounce(
        t0 in 0.1..1.47f64,
        x0 in nonzero(),
        x in nonzero(),
        low in any::<bool>(),
    ) {
        let (x1, x2) = if low { (0.0, x) } else { (x, 0.0) };
        let s = PhaseState::new(t0, 0.0, 0.0, x0, x1, x2);
        let boundary = matches!(classify(&s), Ok(GeodesicClass::Boundary4 { .. }));
        prop_assert!(boundary);
        let t = theta0_period_analytic(&s).unwrap();
        let tr = integrate(&s, t, 1e-3, Flow::SubRiemannian, &coarse()).unwrap();
        prop_assert!(tr.bounce_count() >= 1);
    }

    #[test]
    fn oscillations_equal_lifted_q(
        p in 1u64..6,
        dq in 1u64..6,
        x1 in nonzero(),
        x2 in nonzero(),
    ) {
        let r = Ratio::new(p, p + dq);
        let Ok(s) = synthesize_initial_conditions(r, x1, x2) else {
            return Ok(());
        };
        let c = closure_data(&s, DEFAULT_Q_MAX).unwrap();
        let tr = integrate(&s, c.period, 2e-4, Flow::SubRiemannian, &coarse()).unwrap();
        prop_assert_eq!(theta0_oscillations(&tr) as u64, c.oscillations());
        prop_assert!(closure_of(&tr, 1e-6).closed);
        let len = sr_arc_length(&tr);
        prop_assert!((len - c.length()).abs() / c.length() < 1e-6);
    }

    #[test]
    fn penalty_one_is_round(t0 in 0.05..1.52f64, t1 in 0.0..TAU, t2 in 0.0..TAU) {
        let p = HopfPoint::new(t0, t1, t2);
        let a = metric(MetricKind::Penalty(1.0), &p).unwrap().entries;
        let b = metric(MetricKind::Round, &p).unwrap().entries;
        prop_assert!((a - b).amax() <= 1e-12);
    }

    #[test]
    fn reversibility(
        t0 in 0.2..1.37f64,
        x0 in nonzero(),
        x1 in nonzero(),
        x2 in nonzero(),
    ) {
        let s = PhaseState::new(t0, 0.4, 1.1, x0, x1, x2);
        let cfg = IntegratorConfig::default();
        let fwd = integrate(&s, 2.0, 5e-4, Flow::SubRiemannian, &cfg).unwrap();
        let back = integrate(&fwd.last().state.with_negated_momenta(), 2.0, 5e-4, Flow::SubRiemannian, &cfg).unwrap();
        let gap = back.last().euclid.distance(&fwd.first().euclid);
        prop_assert!(gap < 1e-7, "gap {gap}");
    }
}

#[test]
fn end_to_end_with_every_sign_pattern() {
    let cfg = IntegratorConfig::default();
    for n in 2..=20u64 {
        let Realization::Pair { p, q, .. } = realize_length(n).unwrap().realization else {
            unreachable!()
        };
        let target = 2.0 * PI * (n as f64).sqrt();
        for (x1, x2) in [
            (0.6, 0.7),
            (-0.6, -0.7),
            (0.2, -0.9),
            (0.0, 1.0),
            (1.0, 0.0),
        ] {
            let Ok(s) = synthesize_initial_conditions(Ratio::new(p, q), x1, x2) else {
                continue;
            };
            let c = closure_data(&s, DEFAULT_Q_MAX).unwrap();
            assert_eq!(c.n, n);
            let tr = integrate(&s, c.period, 1e-4, Flow::SubRiemannian, &cfg).unwrap();
            let closure = closure_of(&tr, 1e-6);
            assert!(
                closure.closed,
                "n = {n}, ({x1}, {x2}): gap {}",
                closure.position_gap
            );
            let len = sr_arc_length(&tr);
            assert!((len - target).abs() / target < 1e-6, "n = {n}: {len}");
        }
    }
}

#[test]
fn fold_soundness_on_ten_thousand_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let raw = [
            rng.gen_range(-20.0..20.0),
            rng.gen_range(-20.0..20.0),
            rng.gen_range(-20.0..20.0),
        ];
        let direct = hopf_to_euclidean(&HopfPoint::new(raw[0], raw[1], raw[2]));
        let folded = fold(raw);
        assert!((0.0..=FRAC_PI_2).contains(&folded.theta0));
        assert!(hopf_to_euclidean(&folded).sup_distance(&direct) <= 1e-12);
    }
}

#[test]
fn partition_over_a_hundred_thousand_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let snapped = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.3) {
            0.0
        } else {
            rng.gen_range(-3.0..3.0)
        }
    };
    let mut counts = [0usize; 5];
    for _ in 0..100_000 {
        let theta0 = rng.gen_range(0.0..=FRAC_PI_2);
        let (x0, x1, x2) = (snapped(&mut rng), snapped(&mut rng), snapped(&mut rng));
        let s = PhaseState::new(theta0, 0.0, 0.0, x0, x1, x2);
        let Ok(e) = hamiltonian(&s) else {
            // infinite energy on a face with the offending momentum nonzero
            continue;
        };
        let class = classify(&s).expect("snapped states are never ambiguous");
        let k = match class {
            GeodesicClass::Degenerate1a { .. } => {
                assert_eq!(e.h, 0.0);
                0
            }
            GeodesicClass::HopfFiber1b { .. } => 1,
            GeodesicClass::Meridian2 { .. } => 2,
            GeodesicClass::Generic3 { .. } => 3,
            GeodesicClass::Boundary4 { .. } => 4,
        };
        counts[k] += 1;
    }
    // Hopf fibres need the well bottom exactly and are not hit at random
    assert!([0, 2, 3, 4].iter().all(|&k| counts[k] > 0), "{counts:?}");
    let fibre = PhaseState::new(std::f64::consts::FRAC_PI_4, 0.0, 0.0, 0.0, 1.5, -1.5);
    assert!(matches!(
        classify(&fibre),
        Ok(GeodesicClass::HopfFiber1b { .. })
    ));
}
