//! Hopf coordinates on the unit three-sphere.
//!
//! A point is `(θ₀, θ₁, θ₂)` with
//!
//! ```text
//! x₁ = cos θ₁ sin θ₀    y₁ = sin θ₁ sin θ₀
//! x₂ = cos θ₂ cos θ₀    y₂ = sin θ₂ cos θ₀
//! ```
//!
//! The fundamental domain ("Hopf cube") is `[0, π/2] × [0, 2π) × [0, 2π)`.
//! Leaving it through `θ₀ = 0` reflects θ₀ and shifts θ₁ by π; leaving
//! through `θ₀ = π/2` reflects θ₀ and shifts θ₂ by π. [`fold`] applies these
//! rules to arbitrary real triples.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute tolerance for geometric identities.
pub const GEOMETRY_TOL: f64 = 1e-12;

/// |sin θ₀| or |cos θ₀| at or below this counts as the chart boundary.
pub const BOUNDARY_EPS: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopfPoint {
    pub theta0: f64,
    pub theta1: f64,
    pub theta2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EuclideanPoint {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

impl HopfPoint {
    /// Raw constructor; no normalization.
    pub const fn new(theta0: f64, theta1: f64, theta2: f64) -> Self {
        Self {
            theta0,
            theta1,
            theta2,
        }
    }

    pub fn normalized(self) -> Self {
        fold([self.theta0, self.theta1, self.theta2])
    }

    /// True when θ₀ sits on either face of the cube where cot or tan blows up.
    pub fn is_boundary(&self) -> bool {
        on_boundary(self.theta0)
    }

    pub fn to_euclidean(&self) -> EuclideanPoint {
        hopf_to_euclidean(self)
    }
}

pub(crate) fn on_boundary(theta0: f64) -> bool {
    theta0.sin().abs() <= BOUNDARY_EPS || theta0.cos().abs() <= BOUNDARY_EPS
}

pub(crate) fn require_interior(theta0: f64) -> Result<()> {
    if on_boundary(theta0) {
        Err(Error::BoundaryChart { theta0 })
    } else {
        Ok(())
    }
}

impl EuclideanPoint {
    pub const fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Self {
        Self { x1, y1, x2, y2 }
    }

    pub fn to_vector(&self) -> Vector4<f64> {
        Vector4::new(self.x1, self.y1, self.x2, self.y2)
    }

    pub fn from_vector(v: &Vector4<f64>) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn norm_squared(&self) -> f64 {
        self.to_vector().norm_squared()
    }

    /// Max-norm distance in ℝ⁴.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        (self.to_vector() - other.to_vector()).amax()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self.to_vector() - other.to_vector()).norm()
    }

    pub fn to_hopf(&self) -> HopfPoint {
        euclidean_to_hopf(self)
    }
}

pub fn hopf_to_euclidean(p: &HopfPoint) -> EuclideanPoint {
    let p = p.normalized();
    let (s0, c0) = p.theta0.sin_cos();
    let (s1, c1) = p.theta1.sin_cos();
    let (s2, c2) = p.theta2.sin_cos();
    EuclideanPoint::new(c1 * s0, s1 * s0, c2 * c0, s2 * c0)
}

/// Inverse chart. On the boundary circles the collapsed angle is reported as 0.
pub fn euclidean_to_hopf(e: &EuclideanPoint) -> HopfPoint {
    let rho1 = e.x1.hypot(e.y1);
    let rho2 = e.x2.hypot(e.y2);
    let theta0 = rho1.atan2(rho2);
    let theta1 = if rho1 == 0.0 {
        0.0
    } else {
        normalize_angle(e.y1.atan2(e.x1))
    };
    let theta2 = if rho2 == 0.0 {
        0.0
    } else {
        normalize_angle(e.y2.atan2(e.x2))
    };
    HopfPoint::new(theta0, theta1, theta2)
}

/// Reduce an angle into `[0, 2π)`, never returning `-0.0` or `2π`.
pub fn normalize_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU || r == 0.0 {
        0.0
    } else {
        r
    }
}

/// Bring a raw angle triple into the fundamental domain.
pub fn fold(raw: [f64; 3]) -> HopfPoint {
    fold_with_parity(raw).0
}

/// Like [`fold`], also reporting whether θ₀ was reflected an odd number of
/// times. A reflection reverses the sign of the conjugate momentum ξ₀.
pub fn fold_with_parity(raw: [f64; 3]) -> (HopfPoint, bool) {
    let [mut t0, mut t1, mut t2] = raw;

    // θ₀ ↦ θ₀ − kπ with (θ₁, θ₂) ↦ (θ₁ + kπ, θ₂ + kπ) fixes the embedding.
    // Shift θ₀ into [−π/4, 3π/4) so that at most one reflection remains.
    let k = ((t0 + FRAC_PI_4) / PI).floor();
    if k != 0.0 {
        t0 -= k * PI;
        let shift = if k.rem_euclid(2.0) == 0.0 { 0.0 } else { PI };
        t1 += shift;
        t2 += shift;
    }

    let mut reflected = false;
    if t0 < 0.0 {
        // rule (ii)
        t0 = -t0;
        t1 += PI;
        reflected = true;
    } else if t0 > FRAC_PI_2 {
        // rule (iii)
        t0 = PI - t0;
        t2 += PI;
        reflected = true;
    }

    (
        HopfPoint::new(t0, normalize_angle(t1), normalize_angle(t2)),
        reflected,
    )
}

/// The three frame fields at a point, in Hopf components
/// (coefficients of ∂/∂θ₀, ∂/∂θ₁, ∂/∂θ₂) and Euclidean components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub v: Vector3<f64>,
    pub e1: Vector3<f64>,
    pub e2: Vector3<f64>,
    pub euclidean: EuclideanFrame,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EuclideanFrame {
    pub v: Vector4<f64>,
    pub e1: Vector4<f64>,
    pub e2: Vector4<f64>,
}

pub fn euclidean_frame(e: &EuclideanPoint) -> EuclideanFrame {
    let x = e.to_vector();
    EuclideanFrame {
        v: LinearField::v().apply(&x),
        e1: LinearField::e1().apply(&x),
        e2: LinearField::e2().apply(&x),
    }
}

/// Frame at an interior point. On the boundary only [`euclidean_frame`] is
/// defined and this returns [`Error::BoundaryChart`].
pub fn frame_at(p: &HopfPoint) -> Result<Frame> {
    let p = p.normalized();
    require_interior(p.theta0)?;
    let (s, c) = (p.theta1 + p.theta2).sin_cos();
    let cot = 1.0 / p.theta0.tan();
    let tan = p.theta0.tan();
    Ok(Frame {
        v: Vector3::new(0.0, 1.0, 1.0),
        e1: Vector3::new(-c, s * cot, -s * tan),
        e2: Vector3::new(-s, -c * cot, c * tan),
        euclidean: euclidean_frame(&p.to_euclidean()),
    })
}

/// A linear vector field `x ↦ A x` on ℝ⁴, coordinates ordered `(x₁, y₁, x₂, y₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearField(pub Matrix4<f64>);

impl LinearField {
    /// `V = −y₁∂x₁ + x₁∂y₁ − y₂∂x₂ + x₂∂y₂`
    #[rustfmt::skip]
    pub fn v() -> Self {
        Self(Matrix4::new(
            0.0, -1.0, 0.0, 0.0,
            1.0,  0.0, 0.0, 0.0,
            0.0,  0.0, 0.0, -1.0,
            0.0,  0.0, 1.0, 0.0,
        ))
    }

    /// `E₁ = −x₂∂x₁ + y₂∂y₁ + x₁∂x₂ − y₁∂y₂`
    #[rustfmt::skip]
    pub fn e1() -> Self {
        Self(Matrix4::new(
            0.0,  0.0, -1.0, 0.0,
            0.0,  0.0,  0.0, 1.0,
            1.0,  0.0,  0.0, 0.0,
            0.0, -1.0,  0.0, 0.0,
        ))
    }

    /// `E₂ = −y₂∂x₁ − x₂∂y₁ + y₁∂x₂ + x₁∂y₂`
    #[rustfmt::skip]
    pub fn e2() -> Self {
        Self(Matrix4::new(
            0.0, 0.0,  0.0, -1.0,
            0.0, 0.0, -1.0,  0.0,
            0.0, 1.0,  0.0,  0.0,
            1.0, 0.0,  0.0,  0.0,
        ))
    }

    pub fn apply(&self, x: &Vector4<f64>) -> Vector4<f64> {
        self.0 * x
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(self.0 * c)
    }
}

/// Lie bracket of linear fields. For `X = A x`, `Y = B x` the bracket
/// `[X, Y] = DY·X − DX·Y` is the linear field `(BA − AB) x`.
pub fn lie_bracket_euclidean(a: &LinearField, b: &LinearField) -> LinearField {
    LinearField(b.0 * a.0 - a.0 * b.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Round,
    SubRiemannian,
    Penalty(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricMatrix {
    pub entries: Matrix3<f64>,
    pub kind: MetricKind,
}

impl MetricMatrix {
    pub fn pairing(&self, u: &Vector3<f64>, w: &Vector3<f64>) -> f64 {
        (u.transpose() * self.entries * w)[(0, 0)]
    }

    pub fn norm_squared(&self, u: &Vector3<f64>) -> f64 {
        self.pairing(u, u)
    }
}

/// Metric matrix in `(θ₀, θ₁, θ₂)` coordinates.
///
/// The round metric is defined everywhere on the closed cube; the sR and
/// penalty kinds reject boundary points.
pub fn metric(kind: MetricKind, p: &HopfPoint) -> Result<MetricMatrix> {
    let p = p.normalized();
    let (s, c) = p.theta0.sin_cos();
    let (s2, c2) = (s * s, c * c);
    let entries = match kind {
        MetricKind::Round => Matrix3::from_diagonal(&Vector3::new(1.0, s2, c2)),
        MetricKind::SubRiemannian => {
            require_interior(p.theta0)?;
            let w = c2 * s2;
            Matrix3::new(1.0, 0.0, 0.0, 0.0, w, -w, 0.0, -w, w)
        }
        MetricKind::Penalty(lambda) => {
            check_lambda(lambda)?;
            require_interior(p.theta0)?;
            let k = lambda * lambda - 1.0;
            let off = k * c2 * s2;
            Matrix3::new(
                1.0,
                0.0,
                0.0,
                0.0,
                k * s2 * s2 + s2,
                off,
                0.0,
                off,
                k * c2 * c2 + c2,
            )
        }
    };
    Ok(MetricMatrix { entries, kind })
}

/// Closed-form inverse of the λ-penalty metric.
pub fn penalty_inverse(lambda: f64, p: &HopfPoint) -> Result<Matrix3<f64>> {
    check_lambda(lambda)?;
    let p = p.normalized();
    require_interior(p.theta0)?;
    let t = p.theta0.tan();
    let il2 = 1.0 / (lambda * lambda);
    Ok(Matrix3::new(
        1.0,
        0.0,
        0.0,
        0.0,
        1.0 / (t * t) + il2,
        il2 - 1.0,
        0.0,
        il2 - 1.0,
        t * t + il2,
    ))
}

/// `det P_λ = λ² cos²θ₀ sin²θ₀`.
pub fn penalty_determinant(lambda: f64, theta0: f64) -> f64 {
    let (s, c) = theta0.sin_cos();
    lambda * lambda * c * c * s * s
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "penalty parameter must be positive and finite, got {lambda}"
        )))
    }
}
