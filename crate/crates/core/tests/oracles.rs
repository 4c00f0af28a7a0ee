//! Checks against oracles that share no code with the library.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use hopf_sr::dynamics::{Flow, PhaseState};
use hopf_sr::integrator::{integrate, sr_arc_length, IntegratorConfig, Trajectory};
use hopf_sr::spectrum::{
    closure_data, realize_length, spectrum_bruteforce_oracle, synthesize_initial_conditions,
    Realization, DEFAULT_Q_MAX,
};
use num_rational::Ratio;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Squared lengths over 4π² from a direct scan of integer pairs: equal-parity
/// pairs `(P, Q)` with `P < Q` and `gcd(P, Q) ∈ {1, 2}` give `(Q² − P²)/4`.
fn naive_spectrum(q_bound: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::from([1]);
    for q in 2..=q_bound {
        for p in 1..q {
            if gcd(p, q) != 1 {
                continue;
            }
            let (pp, qq) = if (p + q) % 2 == 0 {
                (p, q)
            } else {
                (2 * p, 2 * q)
            };
            out.insert((qq * qq - pp * pp) / 4);
        }
    }
    out
}

/// Length of the embedded polyline; horizontal curves have sR length equal
/// to their round length.
fn chord_length(tr: &Trajectory) -> f64 {
    tr.samples
        .windows(2)
        .map(|w| w[0].euclid.distance(&w[1].euclid))
        .sum()
}

#[test]
fn spectrum_matches_naive_scan() {
    for q in [2, 3, 10, 57, 101] {
        assert_eq!(
            spectrum_bruteforce_oracle(q),
            naive_spectrum(q),
            "q_bound {q}"
        );
    }
    let low: Vec<u64> = naive_spectrum(101).range(1..=100).copied().collect();
    assert_eq!(low, (1..=100).collect::<Vec<_>>());
}

#[test]
fn five_loop_length_from_embedding() {
    let s = synthesize_initial_conditions(Ratio::new(1, 5), 0.6, 0.7).unwrap();
    let tr = integrate(
        &s,
        PI / 1.3,
        1e-4,
        Flow::SubRiemannian,
        &IntegratorConfig::default(),
    )
    .unwrap();
    let target = PI * 24f64.sqrt();
    let chords = chord_length(&tr);
    assert!((chords - target).abs() / target < 1e-6, "{chords}");
    assert!((sr_arc_length(&tr) - target).abs() / target < 1e-9);
}

#[test]
fn realized_lengths_from_embedding() {
    for n in [2u64, 3, 7, 12] {
        let Realization::Pair { p, q, .. } = realize_length(n).unwrap().realization else {
            unreachable!()
        };
        let s = synthesize_initial_conditions(Ratio::new(p, q), -0.4, -0.9).unwrap();
        let t = closure_data(&s, DEFAULT_Q_MAX).unwrap().period;
        let tr = integrate(
            &s,
            t,
            1e-4,
            Flow::SubRiemannian,
            &IntegratorConfig::default(),
        )
        .unwrap();
        let target = 2.0 * PI * (n as f64).sqrt();
        let chords = chord_length(&tr);
        assert!((chords - target).abs() / target < 1e-6, "n = {n}: {chords}");
        let (a, b) = (tr.first().euclid, tr.last().euclid);
        assert!(a.distance(&b) < 1e-6, "n = {n}");
    }
}

#[test]
fn horizontal_velocity_is_orthogonal_to_fibre() {
    let s = PhaseState::new(0.9, 0.2, -0.4, 1.3, 0.5, -1.1);
    let tr = integrate(
        &s,
        3.0,
        1e-3,
        Flow::SubRiemannian,
        &IntegratorConfig::default(),
    )
    .unwrap();
    for w in tr.samples.windows(3) {
        let (a, m, b) = (
            w[0].euclid.to_vector(),
            w[1].euclid.to_vector(),
            w[2].euclid.to_vector(),
        );
        let vel = (b - a) / (w[2].t - w[0].t);
        // the fibre direction at (x1, y1, x2, y2) is (−y1, x1, −y2, x2)
        let fibre = nalgebra::Vector4::new(-m[1], m[0], -m[3], m[2]);
        assert!(vel.dot(&fibre).abs() < 1e-5, "{}", vel.dot(&fibre));
    }
}

#[test]
fn riemannian_orbit_is_a_unit_circle() {
    let s = PhaseState::new(0.6, 1.0, 2.0, 0.7, 0.3, 0.8);
    let h1 = hopf_sr::dynamics::hamiltonian(&s).unwrap().h1;
    let t = 2.0 * PI / (2.0 * h1).sqrt();
    let tr = integrate(
        &s,
        t,
        1e-4,
        Flow::Penalty(1.0),
        &IntegratorConfig::default(),
    )
    .unwrap();
    // a great circle has round length 2π
    assert!((chord_length(&tr) - 2.0 * PI).abs() < 1e-6);
}
