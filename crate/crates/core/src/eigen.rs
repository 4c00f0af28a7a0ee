//! Eigenvalues of the round Laplacian, the subLaplacian and the penalty
//! Laplacians on S³, and a finite-difference check of the Gaussian beam
//! `sin^k θ₀ cos(kθ₁)`.

use std::f64::consts::{FRAC_PI_4, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EigenIndex {
    pub m: u64,
    pub j: u64,
}

impl EigenIndex {
    pub fn new(m: u64, j: u64) -> Result<Self> {
        if j > m {
            return Err(Error::InvalidArgument(format!(
                "need j <= m, got m = {m}, j = {j}"
            )));
        }
        Ok(Self { m, j })
    }

    /// All indices with `m ≤ m_max`, ordered by `(m, j)`.
    pub fn all(m_max: u64) -> impl Iterator<Item = EigenIndex> {
        (0..=m_max).flat_map(|m| (0..=m).map(move |j| EigenIndex { m, j }))
    }
}

/// Eigenvalue `m(m+2)` of `−Δ` on the round sphere.
pub fn laplace_eigenvalue(m: u64) -> u64 {
    m * (m + 2)
}

/// Eigenvalue `4j(m−j) + 2m` of `−Δ_sR`.
pub fn sublaplace_eigenvalue(ix: EigenIndex) -> u64 {
    4 * ix.j * (ix.m - ix.j) + 2 * ix.m
}

/// Eigenvalue `(1−λ⁻²)·4j(m−j) + m(2 + λ⁻²m)` of the λ-penalty Laplacian.
pub fn penalty_eigenvalue(ix: EigenIndex, lambda: f64) -> f64 {
    let il2 = 1.0 / (lambda * lambda);
    let (m, j) = (ix.m as f64, ix.j as f64);
    (1.0 - il2) * 4.0 * j * (m - j) + m * (2.0 + il2 * m)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenRow {
    pub m: u64,
    pub j: u64,
    pub laplace: u64,
    pub sublaplace: u64,
    /// One entry per requested λ, in order.
    pub penalty: Vec<f64>,
}

pub fn eigen_table(m_max: u64, lambdas: &[f64]) -> Vec<EigenRow> {
    EigenIndex::all(m_max)
        .map(|ix| EigenRow {
            m: ix.m,
            j: ix.j,
            laplace: laplace_eigenvalue(ix.m),
            sublaplace: sublaplace_eigenvalue(ix),
            penalty: lambdas.iter().map(|&l| penalty_eigenvalue(ix, l)).collect(),
        })
        .collect()
}

/// Sample grid for the beam check: θ₀ on `π/4 ± 0.2`, a full θ₁ circle, fixed θ₂.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamGrid {
    pub theta0_half_width: f64,
    pub theta0_points: usize,
    pub theta1_points: usize,
    pub theta2: f64,
}

impl Default for BeamGrid {
    fn default() -> Self {
        Self {
            theta0_half_width: 0.2,
            theta0_points: 21,
            theta1_points: 64,
            theta2: 0.3,
        }
    }
}

impl BeamGrid {
    fn points(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let n0 = self.theta0_points.max(2);
        (0..n0).flat_map(move |i| {
            let t0 = FRAC_PI_4 - self.theta0_half_width
                + 2.0 * self.theta0_half_width * i as f64 / (n0 - 1) as f64;
            (0..self.theta1_points)
                .map(move |k| (t0, TAU * k as f64 / self.theta1_points as f64, self.theta2))
        })
    }
}

/// Second-order central-difference subLaplacian in Hopf coordinates,
/// `∂₀² + 2cot(2θ₀)∂₀ + cot²θ₀ ∂₁² − 2∂₁∂₂ + tan²θ₀ ∂₂²`, step `h` in every direction.
pub fn discrete_sublaplacian<F: Fn(f64, f64, f64) -> f64>(
    f: &F,
    t0: f64,
    t1: f64,
    t2: f64,
    h: f64,
) -> Result<f64> {
    if !(t0 - h > 0.0 && t0 + h < std::f64::consts::FRAC_PI_2) {
        return Err(Error::StencilOutOfDomain { theta0: t0, h });
    }
    let c = f(t0, t1, t2);
    let h2 = h * h;
    let d00 = (f(t0 + h, t1, t2) - 2.0 * c + f(t0 - h, t1, t2)) / h2;
    let d0 = (f(t0 + h, t1, t2) - f(t0 - h, t1, t2)) / (2.0 * h);
    let d11 = (f(t0, t1 + h, t2) - 2.0 * c + f(t0, t1 - h, t2)) / h2;
    let d22 = (f(t0, t1, t2 + h) - 2.0 * c + f(t0, t1, t2 - h)) / h2;
    let d12 = (f(t0, t1 + h, t2 + h) - f(t0, t1 + h, t2 - h) - f(t0, t1 - h, t2 + h)
        + f(t0, t1 - h, t2 - h))
        / (4.0 * h2);
    let cot2 = 1.0 / (2.0 * t0).tan();
    let tan = t0.tan();
    let cot = 1.0 / tan;
    Ok(d00 + 2.0 * cot2 * d0 + cot * cot * d11 - 2.0 * d12 + tan * tan * d22)
}

/// `‖(Δ_sR,h + 2k) f‖∞ / ‖f‖∞` for `f = sin^k θ₀ cos(kθ₁)` on the grid.
pub fn gaussian_beam_residual_on(k: u32, h: f64, grid: &BeamGrid) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument(
            "beam order must be at least 1".into(),
        ));
    }
    let kf = k as f64;
    let f = |t0: f64, t1: f64, _t2: f64| t0.sin().powi(k as i32) * (kf * t1).cos();
    let (mut worst, mut scale) = (0.0f64, 0.0f64);
    for (t0, t1, t2) in grid.points() {
        let lap = discrete_sublaplacian(&f, t0, t1, t2, h)?;
        let v = f(t0, t1, t2);
        worst = worst.max((lap + 2.0 * kf * v).abs());
        scale = scale.max(v.abs());
    }
    Ok(worst / scale)
}

pub fn gaussian_beam_residual(k: u32, h: f64) -> Result<f64> {
    gaussian_beam_residual_on(k, h, &BeamGrid::default())
}

/// `‖Δ_h(V_h f) − V_h(Δ_h f)‖∞ / ‖f‖∞` on the beam, with `V_h` the centered
/// difference along `∂₁ + ∂₂`.
pub fn beam_commutator_residual(k: u32, h: f64) -> Result<f64> {
    let kf = k as f64;
    let f = |t0: f64, t1: f64, _t2: f64| t0.sin().powi(k as i32) * (kf * t1).cos();
    let v = |g: &dyn Fn(f64, f64, f64) -> f64, t0: f64, t1: f64, t2: f64| {
        (g(t0, t1 + h, t2 + h) - g(t0, t1 - h, t2 - h)) / (2.0 * h)
    };
    let vf = |t0: f64, t1: f64, t2: f64| v(&f, t0, t1, t2);
    let grid = BeamGrid::default();
    let (mut worst, mut scale) = (0.0f64, 0.0f64);
    for (t0, t1, t2) in grid.points() {
        let a = discrete_sublaplacian(&vf, t0, t1, t2, h)?;
        let lap =
            |x: f64, y: f64, z: f64| discrete_sublaplacian(&f, x, y, z, h).unwrap_or(f64::NAN);
        let b = v(&lap, t0, t1, t2);
        worst = worst.max((a - b).abs());
        scale = scale.max(f(t0, t1, t2).abs());
    }
    if !worst.is_finite() {
        return Err(Error::StencilOutOfDomain {
            theta0: FRAC_PI_4,
            h,
        });
    }
    Ok(worst / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn laplace_examples() {
        assert_eq!(laplace_eigenvalue(0), 0);
        assert_eq!(laplace_eigenvalue(1), 3);
        assert_eq!(laplace_eigenvalue(7), 63);
    }

    #[test]
    fn sublaplace_examples() {
        assert_eq!(sublaplace_eigenvalue(EigenIndex::new(1, 0).unwrap()), 2);
        assert_eq!(sublaplace_eigenvalue(EigenIndex::new(2, 1).unwrap()), 8);
        for k in 0..=50 {
            assert_eq!(sublaplace_eigenvalue(EigenIndex::new(k, 0).unwrap()), 2 * k);
        }
        assert!(EigenIndex::new(2, 3).is_err());
    }

    #[test]
    fn penalty_examples() {
        for ix in EigenIndex::all(50) {
            assert_eq!(penalty_eigenvalue(ix, 1.0), laplace_eigenvalue(ix.m) as f64);
        }
        let ix = EigenIndex::new(2, 1).unwrap();
        assert_abs_diff_eq!(penalty_eigenvalue(ix, 1e6), 8.0, epsilon = 1e-10);
    }

    #[test]
    fn penalty_splits_as_sublaplace_plus_vertical() {
        for ix in EigenIndex::all(50) {
            for lambda in [1.0, 2.0, 10.0] {
                let d = ix.m as f64 - 2.0 * ix.j as f64;
                let expected = sublaplace_eigenvalue(ix) as f64 + d * d / (lambda * lambda);
                assert_abs_diff_eq!(penalty_eigenvalue(ix, lambda), expected, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn symmetry_and_limits() {
        for ix in EigenIndex::all(50) {
            let mirror = EigenIndex::new(ix.m, ix.m - ix.j).unwrap();
            assert_eq!(sublaplace_eigenvalue(ix), sublaplace_eigenvalue(mirror));
            for lambda in [1.5, 3.0, 100.0] {
                let gap = (penalty_eigenvalue(ix, lambda) - sublaplace_eigenvalue(ix) as f64).abs();
                assert!(gap <= (ix.m * ix.m) as f64 / (lambda * lambda) + 1e-9);
            }
        }
    }

    #[test]
    fn table_shape() {
        let t = eigen_table(2, &[2.0]);
        assert_eq!(t.len(), 6);
        let row = t.iter().find(|r| r.m == 2 && r.j == 1).unwrap();
        assert_eq!(row.sublaplace, 8);
        assert_eq!(row.laplace, 8);
        assert_abs_diff_eq!(row.penalty[0], 8.0);
    }

    #[test]
    fn beam_residual_is_second_order() {
        let r1 = gaussian_beam_residual(3, 1e-2).unwrap();
        let r2 = gaussian_beam_residual(3, 5e-3).unwrap();
        assert!(r1 <= 1e-3, "{r1}");
        let ratio = r1 / r2;
        assert!((3.5..=4.5).contains(&ratio), "{ratio}");
        // k = 1 is the (m, j) = (1, 0) eigenfunction, eigenvalue 2
        assert!(gaussian_beam_residual(1, 1e-3).unwrap() < 1e-5);
        assert!(matches!(
            gaussian_beam_residual(3, 0.7),
            Err(Error::StencilOutOfDomain { .. })
        ));
    }

    #[test]
    fn vertical_field_commutes_with_sublaplacian() {
        assert!(beam_commutator_residual(3, 1e-2).unwrap() < 1e-8);
    }
}
