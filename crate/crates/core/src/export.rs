//! Plot-ready CSV and JSON output for trajectories, spectrum and eigenvalue
//! tables. Floats in CSV carry 17 significant digits.

use std::io::Write;

use serde::Serialize;

use crate::eigen::EigenRow;
use crate::integrator::{Event, Trajectory};
use crate::spectrum::{length_label, Realization, SpectrumEntry};

pub const TRAJECTORY_HEADER: [&str; 11] = [
    "t", "theta0", "theta1", "theta2", "xi0", "xi1", "xi2", "x1", "y1", "x2", "y2",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn io(e: csv::Error) -> std::io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => std::io::Error::other(format!("{other:?}")),
    }
}

/// One row per sample, positions folded into the closed chart.
pub fn write_trajectory_csv<W: Write>(tr: &Trajectory, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_HEADER).map_err(io)?;
    for s in &tr.samples {
        let f = s.state.folded();
        let e = s.euclid;
        let row = [
            s.t, f.theta0, f.theta1, f.theta2, f.xi0, f.xi1, f.xi2, e.x1, e.y1, e.x2, e.y2,
        ];
        w.write_record(row.iter().map(|&x| float(x))).map_err(io)?;
    }
    w.flush()
}

#[derive(Serialize)]
struct TrajectoryRow {
    t: f64,
    theta0: f64,
    theta1: f64,
    theta2: f64,
    xi0: f64,
    xi1: f64,
    xi2: f64,
    x1: f64,
    y1: f64,
    x2: f64,
    y2: f64,
}

#[derive(Serialize)]
struct TrajectoryJson<'a> {
    flow: &'a crate::dynamics::Flow,
    h: f64,
    conserved_drift: f64,
    samples: Vec<TrajectoryRow>,
    events: &'a [Event],
}

pub fn write_trajectory_json<W: Write>(tr: &Trajectory, out: W) -> std::io::Result<()> {
    let samples = tr
        .samples
        .iter()
        .map(|s| {
            let f = s.state.folded();
            TrajectoryRow {
                t: s.t,
                theta0: f.theta0,
                theta1: f.theta1,
                theta2: f.theta2,
                xi0: f.xi0,
                xi1: f.xi1,
                xi2: f.xi2,
                x1: s.euclid.x1,
                y1: s.euclid.y1,
                x2: s.euclid.x2,
                y2: s.euclid.y2,
            }
        })
        .collect();
    let doc = TrajectoryJson {
        flow: &tr.flow,
        h: tr.h,
        conserved_drift: tr.conserved_drift,
        samples,
        events: &tr.events,
    };
    write_json(&doc, out)
}

pub fn write_trajectory<W: Write>(tr: &Trajectory, format: Format, out: W) -> std::io::Result<()> {
    match format {
        Format::Csv => write_trajectory_csv(tr, out),
        Format::Json => write_trajectory_json(tr, out),
    }
}

fn realization_name(r: &Realization) -> &'static str {
    match r {
        Realization::HopfFiber => "hopf_fiber",
        Realization::Pair { .. } => "pair",
    }
}

/// `n,length,p,q,epsilon,realization`; `p`, `q` and `epsilon` are empty for
/// Hopf fibres.
pub fn write_spectrum_csv<W: Write>(entries: &[SpectrumEntry], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "length", "p", "q", "epsilon", "realization"])
        .map_err(io)?;
    for e in entries {
        let (p, q) = match e.realization {
            Realization::Pair { p, q, .. } => (p.to_string(), q.to_string()),
            Realization::HopfFiber => (String::new(), String::new()),
        };
        let eps = e.epsilon().map(|x| x.to_string()).unwrap_or_default();
        w.write_record([
            e.n.to_string(),
            length_label(e.n),
            p,
            q,
            eps,
            realization_name(&e.realization).to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()
}

#[derive(Serialize)]
struct SpectrumRow<'a> {
    n: u64,
    length: f64,
    label: String,
    realization: &'a Realization,
}

pub fn write_spectrum_json<W: Write>(entries: &[SpectrumEntry], out: W) -> std::io::Result<()> {
    let rows: Vec<SpectrumRow> = entries
        .iter()
        .map(|e| SpectrumRow {
            n: e.n,
            length: e.length(),
            label: length_label(e.n),
            realization: &e.realization,
        })
        .collect();
    write_json(&rows, out)
}

/// `m,j,laplace,sublaplace,penalty(λ)…`, one penalty column per λ.
pub fn write_eigen_csv<W: Write>(
    rows: &[EigenRow],
    lambdas: &[f64],
    out: W,
) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["m", "j", "laplace", "sublaplace"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(lambdas.iter().map(|l| format!("penalty({l})")));
    w.write_record(&header).map_err(io)?;
    for r in rows {
        let mut rec = vec![
            r.m.to_string(),
            r.j.to_string(),
            r.laplace.to_string(),
            r.sublaplace.to_string(),
        ];
        rec.extend(r.penalty.iter().map(|&x| float(x)));
        w.write_record(&rec).map_err(io)?;
    }
    w.flush()
}

#[derive(Serialize)]
struct EigenJson<'a> {
    lambdas: &'a [f64],
    rows: &'a [EigenRow],
}

pub fn write_eigen_json<W: Write>(
    rows: &[EigenRow],
    lambdas: &[f64],
    out: W,
) -> std::io::Result<()> {
    write_json(&EigenJson { lambdas, rows }, out)
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Flow, PhaseState};
    use crate::eigen::eigen_table;
    use crate::integrator::{integrate, IntegratorConfig};
    use crate::spectrum::realize_length;

    fn fibre() -> Trajectory {
        let s = PhaseState::new(std::f64::consts::FRAC_PI_4, 0.0, 0.0, 0.0, 1.0, -1.0);
        integrate(
            &s,
            0.5,
            0.1,
            Flow::SubRiemannian,
            &IntegratorConfig::default(),
        )
        .unwrap()
    }

    #[test]
    fn trajectory_csv_layout() {
        let mut buf = Vec::new();
        write_trajectory_csv(&fibre(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), TRAJECTORY_HEADER.join(","));
        let first: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|x| x.parse().unwrap())
            .collect();
        assert_eq!(first.len(), 11);
        assert_eq!(first[1], std::f64::consts::FRAC_PI_4);
        assert_eq!(lines.count(), 5);
    }

    #[test]
    fn trajectory_json_round_trips_floats() {
        let tr = fibre();
        let mut buf = Vec::new();
        write_trajectory_json(&tr, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let samples = v["samples"].as_array().unwrap();
        assert_eq!(samples.len(), tr.samples.len());
        assert_eq!(samples[3]["x2"].as_f64().unwrap(), tr.samples[3].euclid.x2);
        assert!(v["events"].is_array());
    }

    #[test]
    fn spectrum_rows() {
        let entries: Vec<_> = (1..=3).map(|n| realize_length(n).unwrap()).collect();
        let mut buf = Vec::new();
        write_spectrum_csv(&entries, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,length,p,q,epsilon,realization");
        assert!(lines[1].starts_with("1,2*pi*sqrt(1)=6.2831853071795862e0,,,,hopf_fiber"));
        assert!(lines[2].ends_with(",1,3,1,pair"));
        assert!(lines[3].ends_with(",1,2,4,pair"));
    }

    #[test]
    fn eigen_rows() {
        let mut buf = Vec::new();
        write_eigen_csv(&eigen_table(2, &[1.0, 2.0]), &[1.0, 2.0], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "m,j,laplace,sublaplace,penalty(1),penalty(2)"
        );
        assert_eq!(text.lines().count(), 7);
        assert!(text.contains("\n2,1,8,8,8.0000000000000000e0,"));
    }
}
