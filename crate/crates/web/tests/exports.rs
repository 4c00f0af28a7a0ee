use hopf_sr_web::{phase_portrait, spectrum_table, trace_closed};
use serde_json::Value;

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.unwrap()).unwrap()
}

#[test]
fn mixed_parity_curve_uses_lifted_pair() {
    let v = parse(trace_closed(1, 2, 0.6, 0.7, 1));
    assert_eq!(v["n"], 3);
    assert_eq!(v["oscillations"], 4);
    assert!(v["closure_gap"].as_f64().unwrap() < 1e-6);
}

#[test]
fn projected_curve_is_finite_and_closed() {
    let v = parse(trace_closed(3, 5, -0.5, -0.3, 2));
    let pts = v["points"].as_array().unwrap();
    let coords = |p: &Value| -> Vec<f64> {
        p.as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_f64().unwrap())
            .collect()
    };
    assert!(pts.iter().all(|p| coords(p).iter().all(|x| x.is_finite())));
    let (a, b) = (coords(&pts[0]), coords(&pts[pts.len() - 1]));
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-6));
}

#[test]
fn portrait_and_table_agree_on_shapes() {
    let v = parse(phase_portrait(1.0, -0.5, 3, 4.0));
    for c in v["curves"].as_array().unwrap() {
        assert!(!c["upper"].as_array().unwrap().is_empty());
    }
    let rows = parse(spectrum_table(100));
    let n: Vec<u64> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["n"].as_u64().unwrap())
        .collect();
    assert_eq!(n, (1..=100).collect::<Vec<_>>());
}
