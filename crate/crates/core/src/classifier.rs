//! The disjoint taxonomy of sR geodesics and the reduced (θ₀, ξ₀) phase portrait.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::dynamics::{
    potential_minimum, potential_u, turning_points, turning_points_at, PhaseState, TurningPoints,
};
use crate::error::{Error, Result};
use crate::hopf::GEOMETRY_TOL;

/// Nonzero momenta at or below this magnitude are reported as ambiguous.
pub const ZERO_DEADBAND: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Momentum {
    Xi1,
    Xi2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Face {
    /// θ₀ = 0
    Low,
    /// θ₀ = π/2
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", content = "detail")]
pub enum GeodesicClass {
    Degenerate1a {
        theta0: f64,
    },
    HopfFiber1b {
        cube_speed: f64,
        period: f64,
        length: f64,
    },
    Meridian2 {
        xi0: f64,
        length: f64,
    },
    /// Includes relative equilibria (opposite-sign momenta at the bottom of
    /// the well, `a = b`), which close only when r is rational.
    Generic3 {
        turning_points: TurningPoints,
        u_minimizer: f64,
    },
    Boundary4 {
        vanishing: Momentum,
        bounce_face: Face,
        turning_points: TurningPoints,
    },
}

impl GeodesicClass {
    pub fn name(&self) -> &'static str {
        match self {
            GeodesicClass::Degenerate1a { .. } => "Degenerate1a",
            GeodesicClass::HopfFiber1b { .. } => "HopfFiber1b",
            GeodesicClass::Meridian2 { .. } => "Meridian2",
            GeodesicClass::Generic3 { .. } => "Generic3",
            GeodesicClass::Boundary4 { .. } => "Boundary4",
        }
    }

    /// Whether θ₀ oscillates between two distinct turning points.
    pub fn oscillates(&self) -> bool {
        match self {
            GeodesicClass::Generic3 { turning_points, .. } => turning_points.a < turning_points.b,
            GeodesicClass::Boundary4 { .. } => true,
            _ => false,
        }
    }
}

fn check_deadband(name: &'static str, value: f64, deadband: f64) -> Result<()> {
    if value != 0.0 && value.abs() <= deadband {
        Err(Error::AmbiguousZero { name, value })
    } else {
        Ok(())
    }
}

/// Classify with the default deadband.
pub fn classify(s: &PhaseState) -> Result<GeodesicClass> {
    classify_with(s, ZERO_DEADBAND)
}

/// Assign a state to exactly one case. Zero tests are exact; values inside
/// the deadband but not zero are refused with [`Error::AmbiguousZero`].
pub fn classify_with(s: &PhaseState, deadband: f64) -> Result<GeodesicClass> {
    check_deadband("xi0", s.xi0, deadband)?;
    check_deadband("xi1", s.xi1, deadband)?;
    check_deadband("xi2", s.xi2, deadband)?;
    let theta0 = s.folded().theta0;

    if s.xi1 == 0.0 && s.xi2 == 0.0 {
        return Ok(if s.xi0 == 0.0 {
            GeodesicClass::Degenerate1a { theta0 }
        } else {
            GeodesicClass::Meridian2 {
                xi0: s.xi0,
                length: 2.0 * PI,
            }
        });
    }

    let min = potential_minimum(s.xi1, s.xi2).expect("momenta not both zero");
    if s.xi0 == 0.0 && (theta0 - min.theta0).abs() <= GEOMETRY_TOL {
        if s.xi1 == -s.xi2 {
            let d = (s.xi1 - s.xi2).abs();
            return Ok(GeodesicClass::HopfFiber1b {
                cube_speed: 2f64.sqrt() * d,
                period: 2.0 * PI / d,
                length: 2.0 * PI,
            });
        }
        if min.value == 0.0 {
            return Ok(GeodesicClass::Degenerate1a { theta0 });
        }
        let x = theta0.cos().powi(2);
        return Ok(GeodesicClass::Generic3 {
            turning_points: TurningPoints {
                a: theta0,
                b: theta0,
                x_a: x,
                x_b: x,
            },
            u_minimizer: min.theta0,
        });
    }

    let folded = PhaseState { theta0, ..*s };
    let tp = turning_points(&folded)?;
    if s.xi1 == 0.0 || s.xi2 == 0.0 {
        let (vanishing, bounce_face) = if s.xi1 == 0.0 {
            (Momentum::Xi1, Face::Low)
        } else {
            (Momentum::Xi2, Face::High)
        };
        return Ok(GeodesicClass::Boundary4 {
            vanishing,
            bounce_face,
            turning_points: tp,
        });
    }
    Ok(GeodesicClass::Generic3 {
        turning_points: tp,
        u_minimizer: min.theta0,
    })
}

/// One energy level of the reduced problem: `ξ₀ = ±√(2(H − U(θ₀)))` on the
/// classically allowed interval, upper branch then lower branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelCurve {
    pub level: f64,
    pub upper: Vec<(f64, f64)>,
    pub lower: Vec<(f64, f64)>,
}

/// Level-set polylines of the reduced Hamiltonian in the (θ₀, ξ₀) plane,
/// `points` samples per branch, clustered toward the turning points.
pub fn reduced_portrait(
    xi1: f64,
    xi2: f64,
    levels: &[f64],
    points: usize,
) -> Result<Vec<LevelCurve>> {
    let min = potential_minimum(xi1, xi2)
        .ok_or(Error::NoOscillation("potential vanishes identically"))?;
    let points = points.max(2);
    levels
        .iter()
        .map(|&level| {
            if level.is_nan() || level < min.value * (1.0 - 1e-14) {
                return Err(Error::EmptyLevel {
                    level,
                    min: min.value,
                });
            }
            let (a, b) = match turning_points_at(level, xi1, xi2) {
                Ok(tp) => (tp.a, tp.b),
                // the level sits exactly at the bottom of the well
                Err(Error::NoOscillation(_)) => (min.theta0, min.theta0),
                Err(e) => return Err(e),
            };
            let mut upper = Vec::with_capacity(points);
            for i in 0..points {
                let phi = i as f64 / (points - 1) as f64 * FRAC_PI_2;
                let theta = a + (b - a) * phi.sin().powi(2);
                let u = potential_u(theta, xi1, xi2)?;
                upper.push((theta, (2.0 * (level - u)).max(0.0).sqrt()));
            }
            let lower = upper.iter().rev().map(|&(t, x)| (t, -x)).collect();
            Ok(LevelCurve {
                level,
                upper,
                lower,
            })
        })
        .collect()
}
