//! Browser bindings: trace a closed geodesic, draw the reduced phase portrait
//! and list the length spectrum. Every export returns a JSON string.

use hopf_sr::classifier::reduced_portrait;
use hopf_sr::dynamics::{hamiltonian, potential_minimum, Flow, PhaseState};
use hopf_sr::integrator::{
    closure_of, integrate, sr_arc_length, theta0_oscillations, IntegratorConfig,
};
use hopf_sr::spectrum::{
    closure_data, length_label, realize_length, synthesize_initial_conditions, Realization,
    DEFAULT_Q_MAX,
};
use num_rational::Ratio;
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

/// Samples kept per curve, enough for a smooth canvas path.
const CURVE_POINTS: usize = 4000;

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Curve {
    p: u64,
    q: u64,
    n: u64,
    length_label: String,
    length: f64,
    period: f64,
    oscillations: usize,
    closure_gap: f64,
    drift: f64,
    state: PhaseState,
    /// Stereographic image in R³ from (0, 0, 0, −1).
    points: Vec<[f64; 3]>,
    /// Folded (θ₀, ξ₀) along the curve, for the phase-plane overlay.
    phase: Vec<[f64; 2]>,
}

/// Synthesize the closed geodesic with ratio `p/q` and fibre momenta
/// `(xi1, xi2)`, integrate `periods` closing periods and project it to R³.
#[wasm_bindgen]
pub fn trace_closed(p: u32, q: u32, xi1: f64, xi2: f64, periods: u32) -> Result<String, String> {
    if q == 0 || periods == 0 {
        return Err("q and periods must be positive".into());
    }
    let s = synthesize_initial_conditions(Ratio::new(p as u64, q as u64), xi1, xi2)
        .map_err(|e| e.to_string())?;
    let c = closure_data(&s, DEFAULT_Q_MAX).map_err(|e| e.to_string())?;
    let t_end = c.period * periods as f64;
    let h = (c.period / 20_000.0).min(1e-3);
    let steps = (t_end / h).ceil() as usize;
    let cfg = IntegratorConfig {
        stride: (steps / CURVE_POINTS).max(1),
        drift_budget: 1e-6,
        ..Default::default()
    };
    let tr = integrate(&s, t_end, h, Flow::SubRiemannian, &cfg).map_err(|e| e.to_string())?;
    let points = tr
        .samples
        .iter()
        .map(|x| {
            let e = x.euclid;
            let d = 1.0 + e.y2;
            [e.x1 / d, e.y1 / d, e.x2 / d]
        })
        .collect();
    let phase = tr
        .samples
        .iter()
        .map(|x| {
            let f = x.state.folded();
            [f.theta0, f.xi0]
        })
        .collect();
    to_json(&Curve {
        p: c.p,
        q: c.q,
        n: c.n,
        length_label: length_label(c.n),
        length: sr_arc_length(&tr),
        period: c.period,
        oscillations: theta0_oscillations(&tr),
        closure_gap: closure_of(&tr, 1e-6).position_gap,
        drift: tr.conserved_drift,
        state: s,
        points,
        phase,
    })
}

/// Level sets of `½ξ₀² + U(θ₀)` for `levels` energies spaced geometrically
/// above the potential minimum, `max_factor` times it at the top.
#[wasm_bindgen]
pub fn phase_portrait(xi1: f64, xi2: f64, levels: u32, max_factor: f64) -> Result<String, String> {
    if levels == 0 || max_factor.is_nan() || max_factor <= 1.0 {
        return Err("need at least one level and max_factor > 1".into());
    }
    let min = potential_minimum(xi1, xi2)
        .ok_or("no interior potential minimum for these fibre momenta")?
        .value;
    let base = if min > 0.0 {
        min
    } else {
        0.5 * (xi1 * xi1 + xi2 * xi2)
    };
    let energies: Vec<f64> = (1..=levels)
        .map(|k| base * max_factor.powf(k as f64 / levels as f64))
        .collect();
    let curves = reduced_portrait(xi1, xi2, &energies, 200).map_err(|e| e.to_string())?;
    let hv = 0.5 * (xi1 + xi2) * (xi1 + xi2);
    let rows: Vec<_> = curves
        .iter()
        .map(|c| {
            let r = (hv / (c.level + hv)).sqrt();
            json!({ "level": c.level, "r": r, "upper": c.upper, "lower": c.lower })
        })
        .collect();
    to_json(&json!({ "minimum": min, "curves": rows }))
}

/// The spectrum `2π√n` for `n ≤ n_max` with the canonical realizing pairs.
#[wasm_bindgen]
pub fn spectrum_table(n_max: u32) -> Result<String, String> {
    if n_max == 0 || n_max > 10_000 {
        return Err("n_max must lie in 1..=10000".into());
    }
    let rows: Vec<_> = (1..=n_max as u64)
        .map(|n| {
            let e = realize_length(n).expect("n is positive");
            let (p, q) = match e.realization {
                Realization::Pair { p, q, .. } => (Some(p), Some(q)),
                Realization::HopfFiber => (None, None),
            };
            json!({ "n": n, "length": e.length(), "label": length_label(n), "p": p, "q": q, "epsilon": e.epsilon() })
        })
        .collect();
    to_json(&rows)
}

/// Energies and closure ratio of a state, for the page's readout.
#[wasm_bindgen]
pub fn energies(theta0: f64, xi0: f64, xi1: f64, xi2: f64) -> Result<String, String> {
    let e = hamiltonian(&PhaseState::new(theta0, 0.0, 0.0, xi0, xi1, xi2))
        .map_err(|e| e.to_string())?;
    to_json(&e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: Result<String, String>) -> Value {
        serde_json::from_str(&s.unwrap()).unwrap()
    }

    #[test]
    fn five_loop_curve() {
        let v = parse(trace_closed(1, 5, 0.6, 0.7, 1));
        assert_eq!(v["n"], 6);
        assert_eq!(v["oscillations"], 5);
        assert!(v["closure_gap"].as_f64().unwrap() < 1e-6);
        let len = v["length"].as_f64().unwrap();
        assert!((len - std::f64::consts::PI * 24f64.sqrt()).abs() < 1e-9);
        let pts = v["points"].as_array().unwrap();
        assert!(pts.len() > 1000 && pts.len() <= CURVE_POINTS + 2);
    }

    #[test]
    fn trace_reports_bad_input() {
        assert!(trace_closed(1, 0, 0.6, 0.7, 1).is_err());
        assert!(trace_closed(2, 4, 0.6, -0.6, 1).is_err());
    }

    #[test]
    fn portrait_levels_sit_above_minimum() {
        let v = parse(phase_portrait(0.6, 0.7, 5, 8.0));
        let min = v["minimum"].as_f64().unwrap();
        let curves = v["curves"].as_array().unwrap();
        assert_eq!(curves.len(), 5);
        for c in curves {
            assert!(c["level"].as_f64().unwrap() > min);
            let r = c["r"].as_f64().unwrap();
            assert!(r > 0.0 && r < 1.0);
        }
        assert!(phase_portrait(0.6, 0.7, 0, 8.0).is_err());
    }

    #[test]
    fn spectrum_rows() {
        let v = parse(spectrum_table(4));
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0]["p"], Value::Null);
        assert_eq!(
            (rows[1]["p"].as_u64(), rows[1]["q"].as_u64()),
            (Some(1), Some(3))
        );
        assert!(spectrum_table(0).is_err());
    }

    #[test]
    fn energies_readout() {
        let v = parse(energies(0.3, 1.0, 0.0, 0.0));
        assert_eq!(v["h"], 0.5);
    }
}
