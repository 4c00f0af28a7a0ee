//! Fixed-step RK4 integration of the sR and penalty flows in the extended
//! Hopf chart, with a step-doubling audit, Poincaré-section events and the
//! trajectory-level diagnostics built on top (periods, closure, arc length,
//! simplicity, great-circle fit).

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dynamics::{hamiltonian, Flow, PhaseState};
use crate::error::{Error, Result};
use crate::hopf::{hopf_to_euclidean, EuclideanPoint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    /// Budget for the step-doubling estimate, relative to `max(1, |state|∞)`.
    pub local_tol: f64,
    /// Halvings allowed inside one step before giving up.
    pub max_halvings: u32,
    /// Max relative H drift before a trajectory is flagged rejected.
    pub drift_budget: f64,
    /// Keep every `stride`-th step as a sample (first and last always kept).
    pub stride: usize,
    pub closure_tol: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            local_tol: 1e-8,
            max_halvings: 16,
            drift_budget: 1e-9,
            stride: 1,
            closure_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    /// State in the extended chart.
    pub state: PhaseState,
    pub euclid: EuclideanPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Xi0ZeroCrossing,
    Theta0BounceLow,
    Theta0BounceHigh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Rising,
    Falling,
}

/// For ξ₀ crossings the direction refers to the folded ξ₀, so that crossings
/// on either side of a chart face count alike; for bounces it is the
/// direction of the extended θ₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub t: f64,
    pub kind: EventKind,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub flow: Flow,
    /// Nominal step after fitting `t_end` exactly.
    pub h: f64,
    pub samples: Vec<Sample>,
    pub events: Vec<Event>,
    /// Max relative drift of the flow's Hamiltonian (ξ₁, ξ₂ are exact).
    pub conserved_drift: f64,
    pub rejected: bool,
}

impl Trajectory {
    pub fn first(&self) -> &Sample {
        &self.samples[0]
    }

    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has samples")
    }

    pub fn duration(&self) -> f64 {
        self.last().t - self.first().t
    }

    pub fn events_of(&self, kind: EventKind) -> impl Iterator<Item = &Event> + '_ {
        self.events.iter().filter(move |e| e.kind == kind)
    }

    /// Number of bounce events, low and high.
    pub fn bounce_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| e.kind != EventKind::Xi0ZeroCrossing)
            .count()
    }

    /// Append `other`, shifted in time so it starts where `self` ends.
    pub fn concatenate(&self, other: &Trajectory) -> Trajectory {
        let shift = self.last().t - other.first().t;
        let mut out = self.clone();
        out.samples
            .extend(other.samples.iter().skip(1).map(|s| Sample {
                t: s.t + shift,
                ..*s
            }));
        out.events.extend(other.events.iter().map(|e| Event {
            t: e.t + shift,
            ..*e
        }));
        out.conserved_drift = self.conserved_drift.max(other.conserved_drift);
        out.rejected |= other.rejected;
        out
    }
}

fn rk4(flow: Flow, s: &PhaseState, h: f64, t: f64) -> Result<PhaseState> {
    let f = |x: &PhaseState| {
        flow.vector_field(x).map_err(|e| match e {
            Error::SingularField { theta0, .. } | Error::BoundaryChart { theta0 } => {
                Error::SingularApproach { t, theta0 }
            }
            other => other,
        })
    };
    let k1 = f(s)?;
    let k2 = f(&(*s + (0.5 * h) * k1))?;
    let k3 = f(&(*s + (0.5 * h) * k2))?;
    let k4 = f(&(*s + h * k3))?;
    Ok(*s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
}

/// One audited step: a full RK4 step against two half steps, keeping the
/// half-step result, halving recursively when the estimate is over budget.
fn audited_step(
    flow: Flow,
    s: &PhaseState,
    t: f64,
    h: f64,
    cfg: &IntegratorConfig,
    depth: u32,
) -> Result<PhaseState> {
    let full = rk4(flow, s, h, t)?;
    let mid = rk4(flow, s, 0.5 * h, t)?;
    let half = rk4(flow, &mid, 0.5 * h, t + 0.5 * h)?;
    let err = (full - half).max_abs() / 15.0;
    let scale = half.max_abs().max(1.0);
    if err <= cfg.local_tol * scale {
        return Ok(half);
    }
    if depth >= cfg.max_halvings {
        return Err(Error::StepRejected {
            t,
            error: err / scale,
            h_min: h,
        });
    }
    let mid = audited_step(flow, s, t, 0.5 * h, cfg, depth + 1)?;
    audited_step(flow, &mid, t + 0.5 * h, 0.5 * h, cfg, depth + 1)
}

fn folded_sign(s: &PhaseState) -> f64 {
    if s.folded_with_parity().1 {
        -1.0
    } else {
        1.0
    }
}

/// Refine the root of `g` between the last two points of `window` by inverse
/// quadratic interpolation, then polish with Newton steps that re-integrate
/// from the nearest point.
fn refine_root<G, D>(
    flow: Flow,
    window: &[(f64, PhaseState)],
    g: G,
    dg: D,
) -> Result<(f64, PhaseState)>
where
    G: Fn(&PhaseState) -> f64,
    D: Fn(&PhaseState) -> Result<f64>,
{
    let n = window.len();
    let (t0, s0) = window[n - 2];
    let (t1, s1) = window[n - 1];
    let (g0, g1) = (g(&s0), g(&s1));
    let secant = t0 - g0 * (t1 - t0) / (g1 - g0);
    let mut t = secant;
    if n >= 3 {
        let (tm, sm) = window[n - 3];
        let gm = g(&sm);
        if gm != g0 && gm != g1 && g0 != g1 {
            let iqi = tm * g0 * g1 / ((gm - g0) * (gm - g1))
                + t0 * gm * g1 / ((g0 - gm) * (g0 - g1))
                + t1 * gm * g0 / ((g1 - gm) * (g1 - g0));
            if iqi.is_finite() && iqi >= t0 && iqi <= t1 {
                t = iqi;
            }
        }
    }
    if !t.is_finite() {
        t = 0.5 * (t0 + t1);
    }
    let mut state = s1;
    for _ in 0..2 {
        let (tb, sb) = if (t - t0).abs() <= (t1 - t).abs() {
            (t0, s0)
        } else {
            (t1, s1)
        };
        state = if t == tb {
            sb
        } else {
            rk4(flow, &sb, t - tb, tb)?
        };
        let slope = dg(&state)?;
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let next = t - g(&state) / slope;
        if !(next.is_finite() && next >= t0 - (t1 - t0) && next <= t1 + (t1 - t0)) {
            break;
        }
        t = next;
    }
    let (tb, sb) = if (t - t0).abs() <= (t1 - t).abs() {
        (t0, s0)
    } else {
        (t1, s1)
    };
    if t != tb {
        state = rk4(flow, &sb, t - tb, tb)?;
    }
    Ok((t, state))
}

fn detect_events(flow: Flow, window: &[(f64, PhaseState)], events: &mut Vec<Event>) -> Result<()> {
    let n = window.len();
    let (_, a) = window[n - 2];
    let (_, b) = window[n - 1];

    if (a.xi0 < 0.0 && b.xi0 >= 0.0) || (a.xi0 > 0.0 && b.xi0 <= 0.0) {
        let (t, at) = refine_root(flow, window, |s| s.xi0, |s| Ok(flow.vector_field(s)?.xi0))?;
        let extended = if b.xi0 > a.xi0 { 1.0 } else { -1.0 };
        let direction = if extended * folded_sign(&at) > 0.0 {
            Direction::Rising
        } else {
            Direction::Falling
        };
        events.push(Event {
            t,
            kind: EventKind::Xi0ZeroCrossing,
            direction,
        });
    }

    let (ka, kb) = (
        (a.theta0 / FRAC_PI_2).floor(),
        (b.theta0 / FRAC_PI_2).floor(),
    );
    if ka != kb {
        let k = ka.max(kb);
        let face = k * FRAC_PI_2;
        let (t, _) = refine_root(flow, window, |s| s.theta0 - face, |s| Ok(s.xi0))?;
        let kind = if k.rem_euclid(2.0) == 0.0 {
            EventKind::Theta0BounceLow
        } else {
            EventKind::Theta0BounceHigh
        };
        let direction = if kb > ka {
            Direction::Rising
        } else {
            Direction::Falling
        };
        events.push(Event { t, kind, direction });
    }
    Ok(())
}

/// Integrate `flow` from `s0` over `[0, t_end]`.
///
/// The step is shrunk to `t_end / ceil(t_end / h)` so the run ends exactly at
/// `t_end`. Positions stay in the extended chart; use
/// [`PhaseState::folded`] for cube coordinates.
pub fn integrate(
    s0: &PhaseState,
    t_end: f64,
    h: f64,
    flow: Flow,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "step must be positive, got {h}"
        )));
    }
    let steps = (t_end / h).ceil().max(1.0) as usize;
    let h = t_end / steps as f64;
    let stride = cfg.stride.max(1);

    // touch the field once so a bad initial state fails as itself
    flow.vector_field(s0)?;
    let e0 = flow.energy(s0)?;
    let drift_scale = if e0.abs() > 0.0 { e0.abs() } else { 1.0 };
    let mut drift = 0.0f64;

    let sample = |t: f64, s: PhaseState| Sample {
        t,
        state: s,
        euclid: hopf_to_euclidean(&s.position()),
    };
    let mut samples = Vec::with_capacity(steps / stride + 2);
    samples.push(sample(0.0, *s0));
    let mut events = Vec::new();
    let mut window: Vec<(f64, PhaseState)> = vec![(0.0, *s0)];

    let mut s = *s0;
    for i in 0..steps {
        let t = i as f64 * h;
        s = audited_step(flow, &s, t, h, cfg, 0)?;
        let t_next = if i + 1 == steps {
            t_end
        } else {
            (i + 1) as f64 * h
        };
        let e = flow.energy(&s)?;
        drift = drift.max((e - e0).abs() / drift_scale);

        if window.len() == 3 {
            window.remove(0);
        }
        window.push((t_next, s));
        detect_events(flow, &window, &mut events)?;

        if (i + 1) % stride == 0 || i + 1 == steps {
            samples.push(sample(t_next, s));
        }
    }
    events.sort_by(|a, b| a.t.total_cmp(&b.t));

    Ok(Trajectory {
        flow,
        h,
        samples,
        events,
        conserved_drift: drift,
        rejected: drift > cfg.drift_budget,
    })
}

/// Time between successive same-direction ξ₀ crossings, averaged over the
/// run. Falls back to same-kind bounce events when ξ₀ never vanishes.
pub fn measure_theta0_period(tr: &Trajectory) -> Result<f64> {
    let mut groups: HashMap<(EventKind, Direction), Vec<f64>> = HashMap::new();
    for e in &tr.events {
        let key = match e.kind {
            EventKind::Xi0ZeroCrossing => (e.kind, e.direction),
            // a bounce comes back the same way it left, so only its kind matters
            _ => (e.kind, Direction::Rising),
        };
        groups.entry(key).or_default().push(e.t);
    }
    let best = |kind_filter: &dyn Fn(EventKind) -> bool| {
        groups
            .iter()
            .filter(|((k, _), v)| kind_filter(*k) && v.len() >= 2)
            .max_by_key(|((_, d), v)| (v.len(), d.cmp_key()))
            .map(|(_, v)| (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64)
    };
    if let Some(p) = best(&|k| k == EventKind::Xi0ZeroCrossing) {
        return Ok(p);
    }
    if let Some(p) = best(&|k| k != EventKind::Xi0ZeroCrossing) {
        return Ok(p);
    }
    let found = groups.values().map(Vec::len).max().unwrap_or(0);
    Err(Error::InsufficientEvents { found })
}

impl Direction {
    fn cmp_key(&self) -> u8 {
        match self {
            Direction::Rising => 0,
            Direction::Falling => 1,
        }
    }
}

/// Number of θ₀ oscillations: ξ₀ crossings counted in one direction.
pub fn theta0_oscillations(tr: &Trajectory) -> usize {
    let (mut rising, mut falling) = (0, 0);
    for e in tr.events_of(EventKind::Xi0ZeroCrossing) {
        match e.direction {
            Direction::Rising => rising += 1,
            Direction::Falling => falling += 1,
        }
    }
    rising.max(falling)
}

/// Gap between two states modulo the chart identifications: Euclidean
/// sup-distance of the positions and sup-difference of the folded momenta.
///
/// Folding is discontinuous across a face, where `(θ₀, ξ₀)` and its mirror
/// image `(−θ₀, −ξ₀)` (or `(π−θ₀, −ξ₀)`) name nearly the same covector, so
/// `b` is also compared through its mirror at the nearer face.
pub fn identification_gap(a: &PhaseState, b: &PhaseState) -> f64 {
    let (fa, fb) = (a.folded(), b.folded());
    let mirrored = PhaseState {
        theta0: if fb.theta0 < FRAC_PI_4 {
            -fb.theta0
        } else {
            PI - fb.theta0
        },
        xi0: -fb.xi0,
        ..fb
    };
    raw_gap(&fa, &fb).min(raw_gap(&fa, &mirrored))
}

fn raw_gap(a: &PhaseState, b: &PhaseState) -> f64 {
    let pa = hopf_to_euclidean(&a.position());
    let pb = hopf_to_euclidean(&b.position());
    let dm = (a.xi0 - b.xi0)
        .abs()
        .max((a.xi1 - b.xi1).abs())
        .max((a.xi2 - b.xi2).abs());
    pa.sup_distance(&pb).max(dm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureTestResult {
    pub closed: bool,
    pub return_time: Option<f64>,
    pub position_gap: f64,
    pub conserved_drift: f64,
}

/// Integrate the sR flow to `predicted_t` and compare the end state with the start.
pub fn closure_test(
    s0: &PhaseState,
    predicted_t: f64,
    h: f64,
    cfg: &IntegratorConfig,
) -> Result<ClosureTestResult> {
    let tr = integrate(s0, predicted_t, h, Flow::SubRiemannian, cfg)?;
    Ok(closure_of(&tr, cfg.closure_tol))
}

pub fn closure_of(tr: &Trajectory, tol: f64) -> ClosureTestResult {
    let gap = identification_gap(&tr.first().state, &tr.last().state);
    let closed = gap <= tol;
    ClosureTestResult {
        closed,
        return_time: closed.then(|| tr.duration()),
        position_gap: gap,
        conserved_drift: tr.conserved_drift,
    }
}

/// `√(2H)·Δt`, the sR length of the trajectory.
pub fn sr_arc_length(tr: &Trajectory) -> f64 {
    let h = hamiltonian(&tr.first().state).map_or(0.0, |e| e.h);
    (2.0 * h).sqrt() * tr.duration()
}

/// sR speed `√(vᵀSv)` of a velocity in Hopf components, using the
/// degenerate metric `S = dθ₀² + sin²θ₀cos²θ₀ (dθ₁ − dθ₂)²`.
pub fn sr_speed(theta0: f64, velocity: &PhaseState) -> f64 {
    let sc = theta0.sin() * theta0.cos();
    let d = velocity.theta1 - velocity.theta2;
    (velocity.theta0 * velocity.theta0 + sc * sc * d * d).sqrt()
}

/// Independent length: composite Simpson quadrature of the sR speed over
/// the samples (trapezoid on a leftover interval).
pub fn sr_arc_length_quadrature(tr: &Trajectory) -> Result<f64> {
    let speeds: Vec<f64> = tr
        .samples
        .iter()
        .map(|s| {
            Ok(sr_speed(
                s.state.theta0,
                &crate::dynamics::sr_vector_field(&s.state)?,
            ))
        })
        .collect::<Result<_>>()?;
    let ts: Vec<f64> = tr.samples.iter().map(|s| s.t).collect();
    let n = ts.len();
    let mut total = 0.0;
    let mut i = 0;
    while i + 2 < n {
        let (h0, h1) = (ts[i + 1] - ts[i], ts[i + 2] - ts[i + 1]);
        // Simpson for possibly unequal panels
        let hs = h0 + h1;
        total += hs / 6.0
            * ((2.0 - h1 / h0) * speeds[i]
                + hs * hs / (h0 * h1) * speeds[i + 1]
                + (2.0 - h0 / h1) * speeds[i + 2]);
        i += 2;
    }
    if i + 1 < n {
        total += 0.5 * (ts[i + 1] - ts[i]) * (speeds[i] + speeds[i + 1]);
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimplicityAudit {
    pub collision_radius: f64,
    /// Samples closer than this in index are never compared.
    pub window: usize,
}

impl Default for SimplicityAudit {
    fn default() -> Self {
        Self {
            collision_radius: 1e-4,
            window: 10,
        }
    }
}

/// True when no two samples further apart than the window come within the
/// collision radius. If the curve returns to its start, indices are
/// compared cyclically so the closing point is not a collision.
pub fn self_intersection_audit(tr: &Trajectory, audit: &SimplicityAudit) -> bool {
    let pts: Vec<[f64; 4]> = tr
        .samples
        .iter()
        .map(|s| [s.euclid.x1, s.euclid.y1, s.euclid.x2, s.euclid.y2])
        .collect();
    let n = pts.len();
    if n < 2 {
        return true;
    }
    let radius = audit.collision_radius;
    let dist = |a: &[f64; 4], b: &[f64; 4]| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    };
    let closed = dist(&pts[0], &pts[n - 1]) < radius;
    // with a closed curve the last sample duplicates the first
    let m = if closed { n - 1 } else { n };
    let separation = |i: usize, j: usize| {
        let d = i.abs_diff(j);
        if closed {
            d.min(m - d)
        } else {
            d
        }
    };

    let cell = |p: &[f64; 4]| p.map(|x| (x / radius).floor() as i64);
    let mut grid: HashMap<[i64; 4], Vec<usize>> = HashMap::new();
    for (i, p) in pts.iter().take(m).enumerate() {
        grid.entry(cell(p)).or_default().push(i);
    }
    for (i, p) in pts.iter().take(m).enumerate() {
        let c = cell(p);
        for d in 0..81usize {
            let off = [d % 3, d / 3 % 3, d / 9 % 3, d / 27 % 3].map(|o| o as i64 - 1);
            let key = [c[0] + off[0], c[1] + off[1], c[2] + off[2], c[3] + off[3]];
            if let Some(bucket) = grid.get(&key) {
                for &j in bucket {
                    if j > i && separation(i, j) > audit.window && dist(p, &pts[j]) < radius {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Largest distance from a sample to the best-fit 2-plane through the origin.
pub fn great_circle_residual(tr: &Trajectory) -> f64 {
    let n = tr.samples.len();
    let m = DMatrix::from_fn(n, 4, |i, j| tr.samples[i].euclid.to_vector()[j]);
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("right singular vectors requested");
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let basis: Vec<_> = order[..2].iter().map(|&k| vt.row(k).transpose()).collect();
    (0..n)
        .map(|i| {
            let x = m.row(i).transpose();
            let proj = &basis[0] * basis[0].dot(&x) + &basis[1] * basis[1].dot(&x);
            (x - proj).norm()
        })
        .fold(0.0, f64::max)
}
