//! Hamiltonians and Hamiltonian vector fields on the cotangent bundle of the
//! Hopf chart, the reduced one-dimensional problem for θ₀, and the θ₀ period.
//!
//! Every function here accepts the *extended* chart: θ₀ may lie outside
//! `[0, π/2]`. The formulas are invariant under the identifications, and the
//! only real singularities are the faces `sin θ₀ = 0` (with ξ₁ ≠ 0) and
//! `cos θ₀ = 0` (with ξ₂ ≠ 0). When the offending momentum is exactly zero
//! the corresponding term is dropped, which is its limiting value.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hopf::{fold_with_parity, HopfPoint, BOUNDARY_EPS};
use crate::quad;

/// Absolute tolerance for the quadrature oracle.
pub const QUADRATURE_TOL: f64 = 1e-9;

/// Cotangent state `(θ₀, θ₁, θ₂, ξ₀, ξ₁, ξ₂)`.
///
/// Vector fields return their rates in the same layout.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhaseState {
    pub theta0: f64,
    pub theta1: f64,
    pub theta2: f64,
    pub xi0: f64,
    pub xi1: f64,
    pub xi2: f64,
}

impl PhaseState {
    pub const fn new(theta0: f64, theta1: f64, theta2: f64, xi0: f64, xi1: f64, xi2: f64) -> Self {
        Self {
            theta0,
            theta1,
            theta2,
            xi0,
            xi1,
            xi2,
        }
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4], a[5])
    }

    pub fn to_array(&self) -> [f64; 6] {
        [
            self.theta0,
            self.theta1,
            self.theta2,
            self.xi0,
            self.xi1,
            self.xi2,
        ]
    }

    pub fn position(&self) -> HopfPoint {
        HopfPoint::new(self.theta0, self.theta1, self.theta2)
    }

    /// Fold the position into the Hopf cube. A reflection of θ₀ flips ξ₀;
    /// ξ₁ and ξ₂ are unchanged by every identification.
    pub fn folded(&self) -> Self {
        self.folded_with_parity().0
    }

    pub fn folded_with_parity(&self) -> (Self, bool) {
        let (p, reflected) = fold_with_parity([self.theta0, self.theta1, self.theta2]);
        let xi0 = if reflected { -self.xi0 } else { self.xi0 };
        (
            Self::new(p.theta0, p.theta1, p.theta2, xi0, self.xi1, self.xi2),
            reflected,
        )
    }

    /// Scale all momenta by `c`.
    pub fn with_scaled_momenta(&self, c: f64) -> Self {
        Self {
            xi0: c * self.xi0,
            xi1: c * self.xi1,
            xi2: c * self.xi2,
            ..*self
        }
    }

    pub fn with_negated_momenta(&self) -> Self {
        self.with_scaled_momenta(-1.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

impl Add for PhaseState {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (a, b) = (self.to_array(), o.to_array());
        Self::from_array(std::array::from_fn(|i| a[i] + b[i]))
    }
}

impl Sub for PhaseState {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let (a, b) = (self.to_array(), o.to_array());
        Self::from_array(std::array::from_fn(|i| a[i] - b[i]))
    }
}

impl Mul<PhaseState> for f64 {
    type Output = PhaseState;
    fn mul(self, s: PhaseState) -> PhaseState {
        PhaseState::from_array(s.to_array().map(|v| self * v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    /// sub-Riemannian energy H
    pub h: f64,
    /// Riemannian energy H₁ = H + H_V
    pub h1: f64,
    /// vertical energy H_V = ½(ξ₁ + ξ₂)²
    pub h_v: f64,
    /// closure ratio |ξ₁ + ξ₂| / √(2H₁)
    pub r: f64,
}

/// Trig factors with the face guards applied.
#[derive(Debug, Clone, Copy)]
struct Chart {
    cot: f64,
    tan: f64,
    csc2: f64,
    sec2: f64,
    low_face: bool,
    high_face: bool,
}

impl Chart {
    fn at(theta0: f64) -> Self {
        let (s, c) = theta0.sin_cos();
        Self {
            cot: c / s,
            tan: s / c,
            csc2: 1.0 / (s * s),
            sec2: 1.0 / (c * c),
            low_face: s.abs() <= BOUNDARY_EPS,
            high_face: c.abs() <= BOUNDARY_EPS,
        }
    }

    /// Refuse faces where the offending momentum is nonzero.
    fn check(&self, theta0: f64, xi1: f64, xi2: f64, field: bool) -> Result<()> {
        let offending = if self.low_face && xi1 != 0.0 {
            Some("xi1")
        } else if self.high_face && xi2 != 0.0 {
            Some("xi2")
        } else {
            None
        };
        match offending {
            Some(momentum) if field => Err(Error::SingularField { theta0, momentum }),
            Some(_) => Err(Error::BoundaryChart { theta0 }),
            None => Ok(()),
        }
    }
}

/// `cot θ₀ ξ₁`, zero when ξ₁ is exactly zero.
fn cot_term(ch: &Chart, xi1: f64) -> f64 {
    if xi1 == 0.0 {
        0.0
    } else {
        ch.cot * xi1
    }
}

fn tan_term(ch: &Chart, xi2: f64) -> f64 {
    if xi2 == 0.0 {
        0.0
    } else {
        ch.tan * xi2
    }
}

/// `cot θ₀ ξ₁ − tan θ₀ ξ₂`; the potential is half its square.
fn horizontal_momentum(theta0: f64, xi1: f64, xi2: f64) -> Result<f64> {
    let ch = Chart::at(theta0);
    ch.check(theta0, xi1, xi2, false)?;
    Ok(cot_term(&ch, xi1) - tan_term(&ch, xi2))
}

/// `U = ½(cot θ₀ ξ₁ − tan θ₀ ξ₂)²`
pub fn potential_u(theta0: f64, xi1: f64, xi2: f64) -> Result<f64> {
    let g = horizontal_momentum(theta0, xi1, xi2)?;
    Ok(0.5 * g * g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialMinimum {
    pub theta0: f64,
    pub value: f64,
}

/// Location and value of min U over `[0, π/2]`; `None` when U ≡ 0.
///
/// With both momenta nonzero the minimizer satisfies `tan²θ₀ = |ξ₁/ξ₂|`,
/// where `cot θ₀ |ξ₁| = tan θ₀ |ξ₂| = √|ξ₁ξ₂|`, so the minimum is 0 for equal
/// signs and `2|ξ₁ξ₂|` for opposite signs. With one momentum zero the
/// minimum sits on a face of the cube.
pub fn potential_minimum(xi1: f64, xi2: f64) -> Option<PotentialMinimum> {
    match (xi1 == 0.0, xi2 == 0.0) {
        (true, true) => None,
        (true, false) => Some(PotentialMinimum {
            theta0: 0.0,
            value: 0.0,
        }),
        (false, true) => Some(PotentialMinimum {
            theta0: PI / 2.0,
            value: 0.0,
        }),
        (false, false) => {
            let theta0 = (xi1 / xi2).abs().sqrt().atan();
            let value = if xi1.signum() == xi2.signum() {
                0.0
            } else {
                2.0 * (xi1 * xi2).abs()
            };
            Some(PotentialMinimum { theta0, value })
        }
    }
}

/// Energies and closure ratio of a state.
///
/// Face points are accepted when the offending momentum vanishes (the
/// limit is finite); otherwise [`Error::BoundaryChart`].
pub fn hamiltonian(s: &PhaseState) -> Result<EnergyReport> {
    let g = horizontal_momentum(s.theta0, s.xi1, s.xi2)?;
    let h = 0.5 * s.xi0 * s.xi0 + 0.5 * g * g;
    let sum = s.xi1 + s.xi2;
    let h_v = 0.5 * sum * sum;
    let h1 = h + h_v;
    let r = if h1 > 0.0 {
        sum.abs() / (2.0 * h1).sqrt()
    } else {
        0.0
    };
    Ok(EnergyReport { h, h1, h_v, r })
}

/// `H₁ = ½ξ₀² + ½(csc²θ₀ ξ₁² + sec²θ₀ ξ₂²)`, evaluated directly.
pub fn riemannian_energy(s: &PhaseState) -> Result<f64> {
    let ch = Chart::at(s.theta0);
    ch.check(s.theta0, s.xi1, s.xi2, false)?;
    let a = if s.xi1 == 0.0 {
        0.0
    } else {
        ch.csc2 * s.xi1 * s.xi1
    };
    let b = if s.xi2 == 0.0 {
        0.0
    } else {
        ch.sec2 * s.xi2 * s.xi2
    };
    Ok(0.5 * s.xi0 * s.xi0 + 0.5 * (a + b))
}

/// `ξ̇₀ = cot θ₀ csc²θ₀ ξ₁² − tan θ₀ sec²θ₀ ξ₂²`, common to every flow here.
fn xi0_rate(ch: &Chart, xi1: f64, xi2: f64) -> f64 {
    let a = if xi1 == 0.0 {
        0.0
    } else {
        ch.cot * ch.csc2 * xi1 * xi1
    };
    let b = if xi2 == 0.0 {
        0.0
    } else {
        ch.tan * ch.sec2 * xi2 * xi2
    };
    a - b
}

/// Hamilton's equations for the sR Hamiltonian H.
pub fn sr_vector_field(s: &PhaseState) -> Result<PhaseState> {
    let ch = Chart::at(s.theta0);
    ch.check(s.theta0, s.xi1, s.xi2, true)?;
    Ok(PhaseState::new(
        s.xi0,
        cot_term(&ch, cot_term(&ch, s.xi1)) - s.xi2,
        tan_term(&ch, tan_term(&ch, s.xi2)) - s.xi1,
        xi0_rate(&ch, s.xi1, s.xi2),
        0.0,
        0.0,
    ))
}

/// Hamilton's equations for `H_λ = H + (ξ₁+ξ₂)²/(2λ²)`.
pub fn penalty_vector_field(s: &PhaseState, lambda: f64) -> Result<PhaseState> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "penalty parameter must be positive and finite, got {lambda}"
        )));
    }
    let mut v = sr_vector_field(s)?;
    let vertical = (s.xi1 + s.xi2) / (lambda * lambda);
    v.theta1 += vertical;
    v.theta2 += vertical;
    Ok(v)
}

/// Field of the Riemannian Hamiltonian H₁, using `θ̇₁ = csc²θ₀ ξ₁`, `θ̇₂ = sec²θ₀ ξ₂`.
pub fn riemannian_vector_field(s: &PhaseState) -> Result<PhaseState> {
    let ch = Chart::at(s.theta0);
    ch.check(s.theta0, s.xi1, s.xi2, true)?;
    let t1 = if s.xi1 == 0.0 { 0.0 } else { ch.csc2 * s.xi1 };
    let t2 = if s.xi2 == 0.0 { 0.0 } else { ch.sec2 * s.xi2 };
    Ok(PhaseState::new(
        s.xi0,
        t1,
        t2,
        xi0_rate(&ch, s.xi1, s.xi2),
        0.0,
        0.0,
    ))
}

/// Field of `H_V = ½(ξ₁+ξ₂)²`: uniform motion along the Hopf fibre.
pub fn vertical_vector_field(s: &PhaseState) -> PhaseState {
    let w = s.xi1 + s.xi2;
    PhaseState::new(0.0, w, w, 0.0, 0.0, 0.0)
}

/// The flows this crate integrates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Flow {
    SubRiemannian,
    Penalty(f64),
}

impl Flow {
    pub fn vector_field(&self, s: &PhaseState) -> Result<PhaseState> {
        match *self {
            Flow::SubRiemannian => sr_vector_field(s),
            Flow::Penalty(lambda) => penalty_vector_field(s, lambda),
        }
    }

    /// The conserved Hamiltonian of this flow.
    pub fn energy(&self, s: &PhaseState) -> Result<f64> {
        let e = hamiltonian(s)?;
        Ok(match *self {
            Flow::SubRiemannian => e.h,
            Flow::Penalty(lambda) => e.h + e.h_v / (lambda * lambda),
        })
    }
}

/// Hamiltonians with hard-coded gradients, for Poisson brackets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hamiltonian {
    SubRiemannian,
    Riemannian,
    Vertical,
    Penalty(f64),
}

impl Hamiltonian {
    /// `(∂/∂θ, ∂/∂ξ)` at an interior state.
    pub fn gradient(&self, s: &PhaseState) -> Result<([f64; 3], [f64; 3])> {
        crate::hopf::require_interior(s.theta0)?;
        let ch = Chart::at(s.theta0);
        let g = ch.cot * s.xi1 - ch.tan * s.xi2;
        let sr_theta0 = g * (-ch.csc2 * s.xi1 - ch.sec2 * s.xi2);
        let w = s.xi1 + s.xi2;
        Ok(match *self {
            Hamiltonian::SubRiemannian => ([sr_theta0, 0.0, 0.0], [s.xi0, ch.cot * g, -ch.tan * g]),
            Hamiltonian::Riemannian => (
                [
                    -ch.csc2 * ch.cot * s.xi1 * s.xi1 + ch.sec2 * ch.tan * s.xi2 * s.xi2,
                    0.0,
                    0.0,
                ],
                [s.xi0, ch.csc2 * s.xi1, ch.sec2 * s.xi2],
            ),
            Hamiltonian::Vertical => ([0.0; 3], [0.0, w, w]),
            Hamiltonian::Penalty(lambda) => {
                let il2 = 1.0 / (lambda * lambda);
                (
                    [sr_theta0, 0.0, 0.0],
                    [s.xi0, ch.cot * g + il2 * w, -ch.tan * g + il2 * w],
                )
            }
        })
    }
}

/// Canonical bracket `{f, g} = Σ ∂f/∂θⱼ ∂g/∂ξⱼ − ∂f/∂ξⱼ ∂g/∂θⱼ`.
pub fn poisson_bracket(f: Hamiltonian, g: Hamiltonian, s: &PhaseState) -> Result<f64> {
    let (f_theta, f_xi) = f.gradient(s)?;
    let (g_theta, g_xi) = g.gradient(s)?;
    Ok((0..3)
        .map(|j| f_theta[j] * g_xi[j] - f_xi[j] * g_theta[j])
        .sum())
}

pub fn poisson_bracket_h1_hv(s: &PhaseState) -> Result<f64> {
    poisson_bracket(Hamiltonian::Riemannian, Hamiltonian::Vertical, s)
}

/// Turning points of the reduced θ₀ motion.
///
/// `x = cos²θ₀`, so the smaller angle `a` corresponds to the larger root `x_a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurningPoints {
    pub a: f64,
    pub b: f64,
    pub x_a: f64,
    pub x_b: f64,
}

impl TurningPoints {
    pub fn touches_low_face(&self) -> bool {
        self.x_a == 1.0
    }

    pub fn touches_high_face(&self) -> bool {
        self.x_b == 0.0
    }
}

/// Coefficients `(A, B, C)` of `A x² + B x + C`, whose roots in `x = cos²θ₀`
/// are where the reduced kinetic energy vanishes.
pub fn turning_quadratic(h: f64, xi1: f64, xi2: f64) -> (f64, f64, f64) {
    let w = xi1 + xi2;
    (
        -2.0 * h - w * w,
        2.0 * (h + xi1 * xi2 + xi2 * xi2),
        -xi2 * xi2,
    )
}

pub fn turning_points(s: &PhaseState) -> Result<TurningPoints> {
    let h = hamiltonian(s)?.h;
    turning_points_at(h, s.xi1, s.xi2)
}

/// Turning points of the energy level `U = h` for the given fibre momenta.
pub fn turning_points_at(h: f64, xi1: f64, xi2: f64) -> Result<TurningPoints> {
    if xi1 == 0.0 && xi2 == 0.0 {
        return Err(Error::NoOscillation("potential vanishes identically"));
    }
    let u_min = potential_minimum(xi1, xi2).map_or(0.0, |m| m.value);
    if h <= u_min * (1.0 + 1e-14) {
        return Err(Error::NoOscillation("reduced fixed point"));
    }
    let (a2, b1, c0) = turning_quadratic(h, xi1, xi2);
    let disc = b1 * b1 - 4.0 * a2 * c0;
    if disc <= 0.0 {
        return Err(Error::NoOscillation("reduced fixed point"));
    }
    let q = -0.5 * (b1 + b1.signum() * disc.sqrt());
    let r1 = q / a2;
    let r2 = if q == 0.0 { 0.0 } else { c0 / q };
    let (mut x_a, mut x_b) = if r1 >= r2 { (r1, r2) } else { (r2, r1) };
    if xi1 == 0.0 {
        x_a = 1.0;
    }
    if xi2 == 0.0 {
        x_b = 0.0;
    }
    x_a = x_a.clamp(0.0, 1.0);
    x_b = x_b.clamp(0.0, 1.0);
    Ok(TurningPoints {
        a: x_a.sqrt().acos(),
        b: x_b.sqrt().acos(),
        x_a,
        x_b,
    })
}

/// Closed-form θ₀ period `π/√(2H₁)`, half the Riemannian geodesic period.
pub fn theta0_period_analytic(s: &PhaseState) -> Result<f64> {
    turning_points(s)?;
    let e = hamiltonian(s)?;
    Ok(PI / (2.0 * e.h1).sqrt())
}

/// Independent numerical θ₀ period `2∫ₐᵇ dθ₀ / √(2H − (cot θ₀ ξ₁ − tan θ₀ ξ₂)²)`.
///
/// Uses `θ₀ = a + (b − a) sin²φ` so the inverse-square-root endpoint
/// singularities become a bounded integrand on `[0, π/2]`. The turning points
/// are Newton-polished against the raw integrand before integrating.
pub fn theta0_period_quadrature(s: &PhaseState) -> Result<f64> {
    let tp = turning_points(s)?;
    let h = hamiltonian(s)?.h;
    let (xi1, xi2) = (s.xi1, s.xi2);

    let kinetic = |theta: f64| -> f64 {
        let ch = Chart::at(theta);
        let g = cot_term(&ch, xi1) - tan_term(&ch, xi2);
        2.0 * h - g * g
    };
    let polish = |mut theta: f64| -> f64 {
        for _ in 0..3 {
            let ch = Chart::at(theta);
            let g = cot_term(&ch, xi1) - tan_term(&ch, xi2);
            let dg = -ch.csc2 * xi1 - ch.sec2 * xi2;
            let slope = -2.0 * g * dg;
            if slope == 0.0 || !slope.is_finite() {
                break;
            }
            let next = theta - (2.0 * h - g * g) / slope;
            if !next.is_finite() || (next - theta).abs() > 1e-6 {
                break;
            }
            theta = next;
        }
        theta
    };
    let a = if tp.touches_low_face() {
        0.0
    } else {
        polish(tp.a)
    };
    let b = if tp.touches_high_face() {
        PI / 2.0
    } else {
        polish(tp.b)
    };
    let span = b - a;

    let integrand = |phi: f64| -> f64 {
        let (sp, cp) = phi.sin_cos();
        let theta = a + span * sp * sp;
        let k = kinetic(theta);
        if k <= 0.0 {
            return 0.0;
        }
        2.0 * span * 2.0 * sp * cp / k.sqrt()
    };
    let res = quad::integrate(integrand, 0.0, PI / 2.0, QUADRATURE_TOL);
    if !res.converged || !res.value.is_finite() {
        return Err(Error::QuadratureFailure {
            tolerance: QUADRATURE_TOL,
            estimate: res.error_estimate,
        });
    }
    Ok(res.value)
}
