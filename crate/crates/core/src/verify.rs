//! The acceptance suite: ten end-to-end checks of the closed-form claims
//! against the integrator, the quadrature oracle and exact arithmetic.
//!
//! Reports contain only deterministic text, so two runs with the same
//! configuration print identical bytes.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt::Write as _;

use nalgebra::{Matrix3, Vector3};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classifier::{classify, GeodesicClass};
use crate::dynamics::{
    hamiltonian, poisson_bracket_h1_hv, theta0_period_analytic, theta0_period_quadrature, Flow,
    PhaseState,
};
use crate::eigen::{
    gaussian_beam_residual, laplace_eigenvalue, penalty_eigenvalue, sublaplace_eigenvalue,
    EigenIndex,
};
use crate::error::Result;
use crate::hopf::{
    frame_at, lie_bracket_euclidean, metric, penalty_determinant, penalty_inverse, HopfPoint,
    LinearField, MetricKind,
};
use crate::integrator::{
    closure_of, great_circle_residual, integrate, measure_theta0_period, self_intersection_audit,
    sr_arc_length, sr_arc_length_quadrature, theta0_oscillations, IntegratorConfig,
    SimplicityAudit, Trajectory,
};
use crate::par::map_ordered;
use crate::spectrum::{
    closed_length, closure_data, realize_length, spectrum_bruteforce_oracle,
    synthesize_initial_conditions, Realization, DEFAULT_Q_MAX,
};

pub const CRITERIA: u8 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Step for every integration in the suite.
    pub h: f64,
    /// Budget for the relative H drift in the conservation check.
    pub drift_budget: f64,
    pub closure_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            h: 1e-4,
            drift_budget: 1e-9,
            closure_tol: 1e-6,
        }
    }
}

impl VerifyConfig {
    fn integrator(&self) -> IntegratorConfig {
        IntegratorConfig {
            drift_budget: self.drift_budget,
            closure_tol: self.closure_tol,
            ..Default::default()
        }
    }

    fn rng(&self, criterion: u8) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ criterion as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    /// One line per sub-check.
    pub details: Vec<String>,
}

/// Collects sub-checks of one criterion.
struct Checks {
    passed: bool,
    details: Vec<String>,
}

impl Checks {
    fn new() -> Self {
        Self {
            passed: true,
            details: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, line: String) {
        self.passed &= ok;
        self.details
            .push(format!("{} {line}", if ok { "ok  " } else { "FAIL" }));
    }

    /// A failed computation fails the criterion and records the error.
    fn run<T>(&mut self, what: &str, r: Result<T>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, format!("{what}: {e}"));
                None
            }
        }
    }

    fn finish(self, id: u8, title: &'static str) -> CriterionReport {
        CriterionReport {
            id,
            title,
            passed: self.passed,
            details: self.details,
        }
    }
}

pub fn title(id: u8) -> &'static str {
    match id {
        1 => "length spectrum {2 pi sqrt(n)} for n <= 100",
        2 => "r = 1/5 closed geodesic",
        3 => "theta0 period pi/sqrt(2 H1)",
        4 => "conservation and convergence order",
        5 => "Hopf fibre and meridian have length 2 pi",
        6 => "Riemannian limit: great circles, two oscillations",
        7 => "eigenvalue tables",
        8 => "Gaussian beam residual",
        9 => "structural identities",
        10 => "closed geodesics are simple",
        _ => "unknown criterion",
    }
}

pub fn run(id: u8, cfg: &VerifyConfig) -> CriterionReport {
    let checks = match id {
        1 => spectrum_completeness(cfg),
        2 => five_loop_example(cfg),
        3 => period_formula(cfg),
        4 => conservation_and_order(cfg),
        5 => special_geodesics(cfg),
        6 => riemannian_limit(cfg),
        7 => eigen_tables(),
        8 => gaussian_beam(),
        9 => structural_identities(cfg),
        10 => simplicity(cfg),
        _ => {
            let mut c = Checks::new();
            c.check(false, format!("no criterion {id}"));
            c
        }
    };
    checks.finish(id, title(id))
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionReport> {
    (1..=CRITERIA).map(|id| run(id, cfg)).collect()
}

/// The pass/fail line of one criterion, followed by its details when
/// `verbose` is set or the criterion failed.
pub fn format_criterion(r: &CriterionReport, verbose: bool) -> String {
    let mut out = format!(
        "{} [{:>2}] {}\n",
        if r.passed { "PASS" } else { "FAIL" },
        r.id,
        r.title
    );
    if verbose || !r.passed {
        for d in &r.details {
            let _ = writeln!(out, "       {d}");
        }
    }
    out
}

/// Summary table, one line per criterion, and a final count.
pub fn format_report(reports: &[CriterionReport], verbose: bool) -> String {
    let mut out: String = reports
        .iter()
        .map(|r| format_criterion(r, verbose))
        .collect();
    let passed = reports.iter().filter(|r| r.passed).count();
    let _ = writeln!(out, "{passed}/{} criteria passed", reports.len());
    out
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Fibre momenta used for the synthesized realizations.
const FIBRE_MOMENTA: (f64, f64) = (0.6, 0.7);

struct Realized {
    n: u64,
    expected_oscillations: Option<u64>,
    trajectory: Trajectory,
}

/// A closed geodesic of length `2π√n` over one period: the Hopf fibre for
/// `n = 1`, otherwise the canonical pair synthesized with [`FIBRE_MOMENTA`].
fn realize(n: u64, cfg: &VerifyConfig) -> Result<Realized> {
    let entry = realize_length(n)?;
    let (s, t, expected) = match entry.realization {
        Realization::HopfFiber => (
            PhaseState::new(FRAC_PI_4, 0.0, 0.0, 0.0, 1.0, -1.0),
            PI,
            None,
        ),
        Realization::Pair { p, q, .. } => {
            let s =
                synthesize_initial_conditions(Ratio::new(p, q), FIBRE_MOMENTA.0, FIBRE_MOMENTA.1)?;
            let c = closure_data(&s, DEFAULT_Q_MAX)?;
            (s, c.period, Some(c.oscillations()))
        }
    };
    let trajectory = integrate(&s, t, cfg.h, Flow::SubRiemannian, &cfg.integrator())?;
    Ok(Realized {
        n,
        expected_oscillations: expected,
        trajectory,
    })
}

fn spectrum_completeness(cfg: &VerifyConfig) -> Checks {
    let mut c = Checks::new();
    let oracle = spectrum_bruteforce_oracle(101);
    let low: BTreeSet<u64> = oracle.range(1..=100).copied().collect();
    let want: BTreeSet<u64> = (1..=100).collect();
    c.check(
        low == want,
        format!(
            "oracle(q <= 101) restricted to [1, 100] has {} of 100 values",
            low.len()
        ),
    );
    let realized_ok = (2..=100u64).all(|n| match realize_length(n).map(|e| e.realization) {
        Ok(Realization::Pair { p, q, .. }) => closed_length(p, q).ok() == Some(n),
        _ => false,
    });
    c.check(
        realized_ok,
        "canonical pairs realize every 2 <= n <= 100".into(),
    );

    let runs = map_ordered((1..=20u64).collect(), |n| realize(n, cfg));
    let mut worst_gap = 0.0f64;
    let mut worst_len = 0.0f64;
    let mut all_ok = true;
    for run in runs {
        let Some(r) = c.run("realization", run) else {
            all_ok = false;
            continue;
        };
        let target = 2.0 * PI * (r.n as f64).sqrt();
        let closure = closure_of(&r.trajectory, cfg.closure_tol);
        let len = sr_arc_length(&r.trajectory);
        let quad = sr_arc_length_quadrature(&r.trajectory).unwrap_or(f64::NAN);
        let len_err = rel(len, target).max(rel(quad, target));
        let osc_ok = r
            .expected_oscillations
            .map_or(true, |q| theta0_oscillations(&r.trajectory) as u64 == q);
        worst_gap = worst_gap.max(closure.position_gap);
        worst_len = worst_len.max(len_err);
        if !(closure.closed && len_err <= 1e-6 && osc_ok) {
            all_ok = false;
            c.check(
                false,
                format!(
                    "n = {}: gap {:.2e}, length error {:.2e}, oscillations {}",
                    r.n,
                    closure.position_gap,
                    len_err,
                    theta0_oscillations(&r.trajectory)
                ),
            );
        }
    }
    c.check(
        all_ok,
        format!(
            "n <= 20 integrated: max gap {worst_gap:.2e} (<= {:.0e}), max length error {worst_len:.2e} (<= 1e-6)",
            cfg.closure_tol
        ),
    );
    c
}

fn five_loop_example(cfg: &VerifyConfig) -> Checks {
    let mut c = Checks::new();
    let Some(s) = c.run(
        "synthesis",
        synthesize_initial_conditions(Ratio::new(1, 5), 0.6, 0.7),
    ) else {
        return c;
    };
    c.check(
        (s.xi0 * s.xi0 - 40.56).abs() <= 1e-12,
        format!("xi0^2 = {:.15} (40.56 +- 1e-12)", s.xi0 * s.xi0),
    );
    let Some(data) = c.run("closure data", closure_data(&s, DEFAULT_Q_MAX)) else {
        return c;
    };
    c.check(
        (data.p, data.q, data.epsilon) == (1, 5, 1),
        format!(
            "detected p = {}, q = {}, epsilon = {}",
            data.p, data.q, data.epsilon
        ),
    );
    let period = data.period;
    c.check(
        rel(period, PI / 1.3) <= 1e-14,
        format!("closing period q pi/sqrt(2 H1) = pi/1.3 = {period:.10}"),
    );
    let icfg = cfg.integrator();
    if let Some(tr) = c.run(
        "integration",
        integrate(&s, period, cfg.h, Flow::SubRiemannian, &icfg),
    ) {
        let closure = closure_of(&tr, cfg.closure_tol);
        c.check(
            closure.closed,
            format!("closes at pi/1.3: gap {:.2e}", closure.position_gap),
        );
        let osc = theta0_oscillations(&tr);
        c.check(
            osc == 5,
            format!("theta0 oscillations over one period: {osc}"),
        );
        let target = PI * 24f64.sqrt();
        let len = sr_arc_length(&tr);
        let quad = sr_arc_length_quadrature(&tr).unwrap_or(f64::NAN);
        c.check(
            rel(len, target) <= 1e-6 && rel(quad, target) <= 1e-6,
            format!(
                "length pi sqrt(24): flow {:.2e}, metric quadrature {:.2e} relative error",
                rel(len, target),
                rel(quad, target)
            ),
        );
    }
    if let Some(tr) = c.run(
        "integration",
        integrate(&s, 5.0 * period, cfg.h, Flow::SubRiemannian, &icfg),
    ) {
        let closure = closure_of(&tr, cfg.closure_tol);
        c.check(
            closure.closed,
            format!(
                "also closed at 5 pi/1.3 (five periods, {} oscillations): gap {:.2e}",
                theta0_oscillations(&tr),
                closure.position_gap
            ),
        );
    }
    c
}

/// A random state with both fibre momenta nonzero and θ₀ in motion.
fn random_generic(rng: &mut ChaCha8Rng) -> PhaseState {
    let mut signed = |lo: f64, hi: f64| {
        let v: f64 = rng.gen_range(lo..hi);
        if rng.gen_bool(0.5) {
            -v
        } else {
            v
        }
    };
    let xi0 = signed(0.2, 2.0);
    let xi1 = signed(0.2, 2.0);
    let xi2 = signed(0.2, 2.0);
    let theta0 = rng.gen_range(0.2..1.37);
    let theta1 = rng.gen_range(0.0..std::f64::consts::TAU);
    let theta2 = rng.gen_range(0.0..std::f64::consts::TAU);
    PhaseState::new(theta0, theta1, theta2, xi0, xi1, xi2)
}

fn period_formula(cfg: &VerifyConfig) -> Checks {
    let mut c = Checks::new();
    let mut rng = cfg.rng(3);
    let states: Vec<PhaseState> = (0..20).map(|_| random_generic(&mut rng)).collect();
    let icfg = cfg.integrator();
    let results = map_ordered(states, |s| -> Result<(f64, f64, f64)> {
        let analytic = theta0_period_analytic(&s)?;
        let quad = theta0_period_quadrature(&s)?;
        let tr = integrate(&s, 3.5 * analytic, cfg.h, Flow::SubRiemannian, &icfg)?;
        Ok((analytic, measure_theta0_period(&tr)?, quad))
    });
    let (mut worst_m, mut worst_q) = (0.0f64, 0.0f64);
    let mut generic = true;
    for (i, r) in results.into_iter().enumerate() {
        if let Some((a, m, q)) = c.run(&format!("state {i}"), r) {
            worst_m = worst_m.max(rel(m, a));
            worst_q = worst_q.max(rel(q, a));
        }
    }
    let mut rng = cfg.rng(3);
    for _ in 0..20 {
        generic &= matches!(
            classify(&random_generic(&mut rng)),
            Ok(GeodesicClass::Generic3 { .. })
        );
    }
    c.check(generic, "all 20 sampled states are Generic3".into());
    c.check(
        worst_m <= 1e-8,
        format!("measured vs analytic: max relative error {worst_m:.2e} (<= 1e-8)"),
    );
    c.check(
        worst_q <= 1e-7,
        format!("quadrature vs analytic: max relative error {worst_q:.2e} (<= 1e-7)"),
    );
    c
}

/// Steps for the convergence-order check; coarse enough that truncation,
/// not rounding, dominates the drift.
pub const ORDER_STEPS: (f64, f64) = (4e-3, 2e-3);

fn conservation_and_order(cfg: &VerifyConfig) -> Checks {
    let mut c = Checks::new();
    let Some(s) = c.run(
        "synthesis",
        synthesize_initial_conditions(Ratio::new(1, 5), 0.6, 0.7),
    ) else {
        return c;
    };
    let period = PI / 1.3;
    if let Some(tr) = c.run(
        "integration",
        integrate(&s, period, cfg.h, Flow::SubRiemannian, &cfg.integrator()),
    ) {
        c.check(
            tr.conserved_drift <= cfg.drift_budget,
            format!(
                "relative H drift over one period at h = {:.0e}: {:.2e} (<= {:.0e})",
                cfg.h, tr.conserved_drift, cfg.drift_budget
            ),
        );
        let constant = tr
            .samples
            .iter()
            .all(|x| x.state.xi1 == s.xi1 && x.state.xi2 == s.xi2);
        c.check(constant, "xi1, xi2 exactly constant".into());
    }
    let free = IntegratorConfig {
        local_tol: f64::INFINITY,
        drift_budget: f64::INFINITY,
        ..Default::default()
    };
    let drift =
        |h: f64| integrate(&s, period, h, Flow::SubRiemannian, &free).map(|t| t.conserved_drift);
    if let (Some(a), Some(b)) = (
        c.run("coarse run", drift(ORDER_STEPS.0)),
        c.run("fine run", drift(ORDER_STEPS.1)),
    ) {
        let ratio = a / b;
        c.check(
            (8.0..=32.0).contains(&ratio),
            format!(
                "drift ratio h = {:.0e} -> {:.0e}: {ratio:.2} (in [8, 32])",
                ORDER_STEPS.0, ORDER_STEPS.1
            ),
        );
    }
    c
}

fn special_geodesics(cfg: &VerifyConfig) -> Checks {
    let mut c = Checks::new();
    let cases = [
        (
            "Hopf fibre",
            PhaseState::new(FRAC_PI_4, 0.0, 0.0, 0.0, 1.0, -1.0),
            PI,
        ),
        (
            "meridian",
            PhaseState::new(0.3, 0.0, 0.0, 1.0, 0.0, 0.0),
            2.0 * PI,
        ),
    ];
    for (name, s, t) in cases {
        let Some(tr) = c.run(
            name,
            integrate(&s, t, cfg.h, Flow::SubRiemannian, &cfg.integrator()),
        ) else {
            continue;
        };
        let closure = closure_of(&tr, 1e-8);
        let len = sr_arc_length(&tr);
        let quad = sr_arc_length_quadrature(&tr).unwrap_or(f64::NAN);
        let err = rel(len, 2.0 * PI).max(rel(quad, 2.0 * PI));
        c.check(
            closure.closed && err <= 1e-8,
            format!(
                "{name}: gap {:.2e}, length relative error {err:.2e} (both <= 1e-8)",
                closure.position_gap
            ),
        );
    }
    c
}

fn riemannian_limit(cfg: &VerifyConfig) -> Checks {
    let mut c = Checks::new();
    let mut rng = cfg.rng(6);
    let states: Vec<PhaseState> = (0..10).map(|_| random_generic(&mut rng)).collect();
    let icfg = cfg.integrator();
    let results = map_ordered(states, |s| -> Result<(f64, usize, f64)> {
        let h1 = hamiltonian(&s)?.h1;
        let t = 2.0 * PI / (2.0 * h1).sqrt();
        let tr = integrate(&s, t, cfg.h, Flow::Penalty(1.0), &icfg)?;
        Ok((
            great_circle_residual(&tr),
            theta0_oscillations(&tr),
            closure_of(&tr, cfg.closure_tol).position_gap,
        ))
    });
    let (mut worst_plane, mut worst_gap) = (0.0f64, 0.0f64);
    let mut osc = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        if let Some((plane, n, gap)) = c.run(&format!("state {i}"), r) {
            worst_plane = worst_plane.max(plane);
            worst_gap = worst_gap.max(gap);
            osc.push(n);
        }
    }
    c.check(
        worst_plane <= 1e-8,
        format!("max plane-fit residual {worst_plane:.2e} (<= 1e-8)"),
    );
    c.check(
        worst_gap <= cfg.closure_tol,
        format!("orbits close after 2 pi/sqrt(2 H1): max gap {worst_gap:.2e}"),
    );
    c.check(
        osc.iter().all(|&n| n == 2),
        format!("theta0 oscillations per orbit: {osc:?}"),
    );
    c
}

fn eigen_tables() -> Checks {
    let mut c = Checks::new();
    let round = EigenIndex::all(50)
        .all(|ix| penalty_eigenvalue(ix, 1.0) == laplace_eigenvalue(ix.m) as f64);
    c.check(round, "penalty(1) = m(m+2) exactly for m <= 50".into());
    let mut worst = f64::NEG_INFINITY;
    for ix in EigenIndex::all(50) {
        for lambda in [1.5, 2.0, 10.0, 1e3] {
            let gap = (penalty_eigenvalue(ix, lambda) - sublaplace_eigenvalue(ix) as f64).abs();
            worst = worst.max(gap - (ix.m * ix.m) as f64 / (lambda * lambda));
        }
    }
    c.check(
        worst <= 1e-9,
        "|penalty(lambda) - sublaplace| <= m^2/lambda^2 for m <= 50".into(),
    );
    let sym = EigenIndex::all(50).all(|ix| {
        sublaplace_eigenvalue(ix)
            == sublaplace_eigenvalue(EigenIndex {
                m: ix.m,
                j: ix.m - ix.j,
            })
    });
    c.check(
        sym,
        "sublaplace(m, j) = sublaplace(m, m - j) for m <= 50".into(),
    );
    c
}

fn gaussian_beam() -> Checks {
    let mut c = Checks::new();
    if let (Some(a), Some(b)) = (
        c.run("h = 1e-2", gaussian_beam_residual(3, 1e-2)),
        c.run("h = 5e-3", gaussian_beam_residual(3, 5e-3)),
    ) {
        c.check(
            a <= 1e-3,
            format!("k = 3 residual at h = 1e-2: {a:.3e} (<= 1e-3)"),
        );
        let ratio = a / b;
        c.check(
            (3.5..=4.5).contains(&ratio),
            format!("refinement ratio: {ratio:.3} (in [3.5, 4.5])"),
        );
    }
    c
}

fn structural_identities(cfg: &VerifyConfig) -> Checks {
    let mut c = Checks::new();
    let mut rng = cfg.rng(9);
    let tol = 1e-12;
    let (mut frame, mut kernel, mut inverse, mut det, mut bracket) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let p = HopfPoint::new(
            rng.gen_range(0.1..1.47),
            rng.gen_range(0.0..std::f64::consts::TAU),
            rng.gen_range(0.0..std::f64::consts::TAU),
        );
        let lambda: f64 = rng.gen_range(1.0..10.0);
        if let (Ok(f), Ok(round), Ok(sr), Ok(pen), Ok(inv)) = (
            frame_at(&p),
            metric(MetricKind::Round, &p),
            metric(MetricKind::SubRiemannian, &p),
            metric(MetricKind::Penalty(lambda), &p),
            penalty_inverse(lambda, &p),
        ) {
            let fields = [f.v, f.e1, f.e2];
            for i in 0..3 {
                for j in 0..3 {
                    let want = if i == j { 1.0 } else { 0.0 };
                    frame = frame.max((round.pairing(&fields[i], &fields[j]) - want).abs());
                }
            }
            kernel = kernel.max((sr.entries * Vector3::new(0.0, 1.0, 1.0)).amax());
            inverse = inverse.max((pen.entries * inv - Matrix3::identity()).amax());
            det =
                det.max((pen.entries.determinant() - penalty_determinant(lambda, p.theta0)).abs());
        } else {
            c.check(false, format!("interior point {p:?} rejected"));
        }
        let s = PhaseState::new(
            p.theta0,
            p.theta1,
            p.theta2,
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        );
        if let Some(b) = c.run("Poisson bracket", poisson_bracket_h1_hv(&s)) {
            bracket = bracket.max(b.abs());
        }
    }
    let (v, e1, e2) = (LinearField::v(), LinearField::e1(), LinearField::e2());
    let table = [
        (lie_bracket_euclidean(&v, &e1), e2.scale(-2.0)),
        (lie_bracket_euclidean(&e2, &v), e1.scale(-2.0)),
        (lie_bracket_euclidean(&e1, &e2), v.scale(-2.0)),
    ];
    let table_err = table
        .iter()
        .map(|(a, b)| (a.0 - b.0).amax())
        .fold(0.0, f64::max);
    c.check(
        frame <= tol,
        format!("round-metric Gram of (V, E1, E2) = I: {frame:.1e}"),
    );
    c.check(kernel <= tol, format!("S (0, 1, 1) = 0: {kernel:.1e}"));
    c.check(
        table_err == 0.0,
        "[V,E1] = -2E2, [E2,V] = -2E1, [E1,E2] = -2V exactly".into(),
    );
    c.check(inverse <= tol, format!("P P^-1 = I: {inverse:.1e}"));
    c.check(
        det <= tol,
        format!("det P = lambda^2 cos^2 sin^2: {det:.1e}"),
    );
    c.check(bracket <= tol, format!("{{H1, HV}} = 0: {bracket:.1e}"));
    c
}

fn simplicity(cfg: &VerifyConfig) -> Checks {
    let mut c = Checks::new();
    let audit = SimplicityAudit::default();
    let runs = map_ordered((1..=10u64).collect(), |n| realize(n, cfg));
    let mut simple = Vec::new();
    for run in runs {
        if let Some(r) = c.run("realization", run) {
            let ok = self_intersection_audit(&r.trajectory, &audit)
                && closure_of(&r.trajectory, cfg.closure_tol).closed;
            if !ok {
                simple.push(r.n);
            }
        }
    }
    let meridian = integrate(
        &PhaseState::new(0.3, 0.0, 0.0, 1.0, 0.0, 0.0),
        2.0 * PI,
        cfg.h,
        Flow::SubRiemannian,
        &cfg.integrator(),
    );
    if let Some(tr) = c.run("meridian", meridian) {
        c.check(
            self_intersection_audit(&tr, &audit),
            "meridian is simple".into(),
        );
    }
    c.check(
        simple.is_empty(),
        format!("closed geodesics n = 1..10 simple over one period (failures: {simple:?})"),
    );
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_criteria_pass() {
        let cfg = VerifyConfig::default();
        for id in [7, 8, 9] {
            let r = run(id, &cfg);
            assert!(r.passed, "{}", format_report(&[r], true));
        }
    }

    #[test]
    fn report_format() {
        let r = CriterionReport {
            id: 3,
            title: "x",
            passed: false,
            details: vec!["FAIL y".into()],
        };
        assert_eq!(
            format_report(&[r], false),
            "FAIL [ 3] x\n       FAIL y\n0/1 criteria passed\n"
        );
        assert!(!run(11, &VerifyConfig::default()).passed);
    }
}
