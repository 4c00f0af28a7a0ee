//! Closure of sR geodesics and the length spectrum `{2π√n}`.
//!
//! A geodesic with fibre momenta `ξ₁, ξ₂` closes iff its closure ratio
//! `r = |ξ₁+ξ₂|/√(2H₁)` is rational. Writing `r = p/q` in lowest terms, the
//! closing time is `q` θ₀-periods when `p` and `q` are both odd (the round
//! flow and the fibre flow are then both at their antipodal half-turn) and
//! `2q` θ₀-periods otherwise. Everything after the detection of `p/q` is
//! integer arithmetic.

use std::collections::BTreeSet;
use std::f64::consts::PI;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::classifier::{classify, GeodesicClass};
use crate::dynamics::{hamiltonian, PhaseState};
use crate::error::{Error, Result};

pub const RATIONAL_TOL: f64 = 1e-9;
pub const DEFAULT_Q_MAX: u64 = 1000;

/// The fraction `p/q` in `(0, 1)` with the smallest `q ≤ q_max` lying within
/// `tol` of `r`, searched over continued-fraction convergents.
///
/// Any fraction within `1/(2q²)` of `r` is a convergent, so no candidate is
/// missed as long as `tol < 1/(2 q_max²)`.
pub fn detect_rational(r: f64, q_max: u64, tol: f64) -> Option<Ratio<u64>> {
    if !(r > 0.0 && r < 1.0) || q_max < 2 {
        return None;
    }
    let (mut p_prev, mut q_prev, mut p, mut q) = (0u64, 1u64, 1u64, 0u64);
    let mut x = r;
    loop {
        let a = x.floor();
        if a > u64::MAX as f64 / 2.0 {
            return None;
        }
        let a = a as u64;
        let p_next = a.checked_mul(p)?.checked_add(p_prev)?;
        let q_next = a.checked_mul(q)?.checked_add(q_prev)?;
        if q_next > q_max {
            return None;
        }
        (p_prev, q_prev, p, q) = (p, q, p_next, q_next);
        if p > 0 && p < q && (r - p as f64 / q as f64).abs() <= tol {
            return Some(Ratio::new(p, q));
        }
        let frac = x - a as f64;
        if frac <= 0.0 {
            return None;
        }
        x = 1.0 / frac;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    BothOdd,
    Mixed,
}

impl Parity {
    pub fn of(p: u64, q: u64) -> Self {
        if p.is_odd() && q.is_odd() {
            Parity::BothOdd
        } else {
            Parity::Mixed
        }
    }

    /// Factor in `length² = ε(q² − p²)π²`.
    pub fn epsilon(self) -> u64 {
        match self {
            Parity::BothOdd => 1,
            Parity::Mixed => 4,
        }
    }

    /// Multiplier taking the coprime pair to the least pair of equal parity.
    pub fn lift(self) -> u64 {
        match self {
            Parity::BothOdd => 1,
            Parity::Mixed => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosureData {
    /// Coprime numerator and denominator of the closure ratio.
    pub p: u64,
    pub q: u64,
    pub epsilon: u64,
    pub parity_class: Parity,
    pub r: Ratio<u64>,
    /// Flow time to close: the lifted `q` times the θ₀-period `π/√(2H₁)`.
    pub period: f64,
    /// `length²/π² = ε(q² − p²)`.
    pub length_squared_over_pi_squared: u64,
    /// `length = 2π√n`.
    pub n: u64,
}

impl ClosureData {
    pub fn from_ratio(r: Ratio<u64>, h1: f64) -> Result<Self> {
        let (p, q) = (*r.numer(), *r.denom());
        let n = closed_length(p, q)?;
        let parity = Parity::of(p, q);
        Ok(Self {
            p,
            q,
            epsilon: parity.epsilon(),
            parity_class: parity,
            r,
            period: (parity.lift() * q) as f64 * PI / (2.0 * h1).sqrt(),
            length_squared_over_pi_squared: parity.epsilon() * (q * q - p * p),
            n,
        })
    }

    /// The least pair of equal parity, `(p, q)` or `(2p, 2q)`.
    pub fn closing_pair(&self) -> (u64, u64) {
        let k = self.parity_class.lift();
        (k * self.p, k * self.q)
    }

    pub fn length(&self) -> f64 {
        2.0 * PI * (self.n as f64).sqrt()
    }

    /// θ₀-oscillations in one closing period.
    pub fn oscillations(&self) -> u64 {
        self.closing_pair().1
    }
}

/// Closure data of a state, detecting the ratio with the given tolerance.
pub fn closure_data_with(s: &PhaseState, q_max: u64, tol: f64) -> Result<ClosureData> {
    match classify(s)? {
        GeodesicClass::Degenerate1a { .. } => return Err(Error::NotOscillating("degenerate")),
        GeodesicClass::HopfFiber1b { .. } => return Err(Error::NotOscillating("Hopf fibre")),
        GeodesicClass::Meridian2 { .. } => return Err(Error::NotOscillating("meridian")),
        c if !c.oscillates() => return Err(Error::NotOscillating("relative equilibrium")),
        _ => {}
    }
    let e = hamiltonian(s)?;
    if e.h_v == 0.0 {
        return Err(Error::ZeroVerticalEnergy);
    }
    let r = detect_rational(e.r, q_max, tol).ok_or(Error::NotClosed { r: e.r, q_max })?;
    ClosureData::from_ratio(r, e.h1)
}

pub fn closure_data(s: &PhaseState, q_max: u64) -> Result<ClosureData> {
    closure_data_with(s, q_max, RATIONAL_TOL)
}

/// A state `(θ₀, 0, 0, ξ₀, ξ₁, ξ₂)` with closure ratio `r`.
///
/// θ₀ is placed where `ξ₀² = (ξ₁+ξ₂)²/r² − csc²θ₀ ξ₁² − sec²θ₀ ξ₂²` is
/// largest: `tan²θ₀ = |ξ₁/ξ₂|`, or the face where the vanishing momentum
/// makes its term disappear.
pub fn synthesize_initial_conditions(r: Ratio<u64>, xi1: f64, xi2: f64) -> Result<PhaseState> {
    let (p, q) = (*r.numer(), *r.denom());
    if p == 0 || p >= q {
        return Err(Error::InvalidArgument(format!(
            "ratio {p}/{q} is not in (0, 1)"
        )));
    }
    if !(xi1.is_finite() && xi2.is_finite()) || (xi1 == 0.0 && xi2 == 0.0) {
        return Err(Error::InvalidArgument(
            "fibre momenta must be finite and not both zero".into(),
        ));
    }
    let rf = p as f64 / q as f64;
    let w = xi1 + xi2;
    let (theta0, barrier) = if xi1 == 0.0 {
        (0.0, xi2 * xi2)
    } else if xi2 == 0.0 {
        (std::f64::consts::FRAC_PI_2, xi1 * xi1)
    } else {
        let s = xi1.abs() + xi2.abs();
        ((xi1 / xi2).abs().sqrt().atan(), s * s)
    };
    let xi0_sq = w * w / (rf * rf) - barrier;
    if xi0_sq.is_nan() || xi0_sq <= 0.0 {
        return Err(Error::InfeasibleRatio { r: rf, xi1, xi2 });
    }
    Ok(PhaseState::new(theta0, 0.0, 0.0, xi0_sq.sqrt(), xi1, xi2))
}

/// `n` with `length = 2π√n` for the closed geodesics of coprime ratio `p/q`.
pub fn closed_length(p: u64, q: u64) -> Result<u64> {
    if p == 0 || p >= q {
        return Err(Error::InvalidArgument(format!(
            "need 0 < p < q, got {p}, {q}"
        )));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NotCoprime { p, q });
    }
    let d = q * q - p * p;
    Ok(match Parity::of(p, q) {
        Parity::BothOdd => d / 4,
        Parity::Mixed => d,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Realization {
    /// Hopf fibres and meridians, length 2π.
    HopfFiber,
    Pair {
        p: u64,
        q: u64,
        parity: Parity,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub n: u64,
    pub realization: Realization,
}

impl SpectrumEntry {
    pub fn length(&self) -> f64 {
        2.0 * PI * (self.n as f64).sqrt()
    }

    pub fn epsilon(&self) -> Option<u64> {
        match self.realization {
            Realization::HopfFiber => None,
            Realization::Pair { parity, .. } => Some(parity.epsilon()),
        }
    }
}

/// Canonical closed geodesic of length `2π√n`: odd `n ≥ 3` from the mixed
/// pair `((n−1)/2, (n+1)/2)`, even `n` from the odd pair `(n−1, n+1)`.
pub fn realize_length(n: u64) -> Result<SpectrumEntry> {
    let realization = match n {
        0 => return Err(Error::InvalidArgument("n must be positive".into())),
        1 => Realization::HopfFiber,
        n if n.is_odd() => Realization::Pair {
            p: (n - 1) / 2,
            q: n.div_ceil(2),
            parity: Parity::Mixed,
        },
        n => Realization::Pair {
            p: n - 1,
            q: n + 1,
            parity: Parity::BothOdd,
        },
    };
    if let Realization::Pair { p, q, .. } = realization {
        debug_assert_eq!(closed_length(p, q).ok(), Some(n));
    }
    Ok(SpectrumEntry { n, realization })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairValue {
    pub p: u64,
    pub q: u64,
    pub parity: Parity,
    pub n: u64,
}

/// Every coprime `0 < p < q ≤ q_bound` with its `n`, ordered by `(q, p)`.
pub fn enumerate_pairs(q_bound: u64) -> Vec<PairValue> {
    let row = |q: u64| -> Vec<PairValue> {
        (1..q)
            .filter(|p| p.gcd(&q) == 1)
            .map(|p| PairValue {
                p,
                q,
                parity: Parity::of(p, q),
                n: closed_length(p, q).expect("coprime pair"),
            })
            .collect()
    };
    crate::par::flat_map_ordered((2..=q_bound).collect(), row)
}

/// The set of `n` realized by coprime pairs with `q ≤ q_bound`, plus `n = 1`
/// from the Hopf fibres.
pub fn spectrum_bruteforce_oracle(q_bound: u64) -> BTreeSet<u64> {
    let mut set: BTreeSet<u64> = enumerate_pairs(q_bound).into_iter().map(|v| v.n).collect();
    set.insert(1);
    set
}

/// `2*pi*sqrt(n)=<decimal>`, the symbolic length next to its value.
pub fn length_label(n: u64) -> String {
    format!("2*pi*sqrt({n})={:.16e}", 2.0 * PI * (n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::theta0_period_analytic;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    #[test]
    fn detect_rational_examples() {
        assert_eq!(
            detect_rational(0.2, 100, RATIONAL_TOL),
            Some(Ratio::new(1, 5))
        );
        assert_eq!(detect_rational(0.5f64.sqrt(), 50, 1e-9), None);
        // 29/41 is the best convergent of 1/√2 below 50 and misses by 2.4e−4
        assert_abs_diff_eq!((0.5f64.sqrt() - 29.0 / 41.0).abs(), 2.4e-4, epsilon = 1e-4);
        assert_eq!(
            detect_rational(0.333333333, 1000, 1e-8),
            Some(Ratio::new(1, 3))
        );
        assert_eq!(detect_rational(0.333333333, 1000, 1e-10), None);
        assert_eq!(detect_rational(0.0, 100, 1e-9), None);
        assert_eq!(detect_rational(1.0, 100, 1e-9), None);
        assert_eq!(detect_rational(1e-12, 100, 1e-9), None);
    }

    #[test]
    fn synthesis_examples() {
        let s = synthesize_initial_conditions(Ratio::new(1, 5), 0.6, 0.7).unwrap();
        assert_abs_diff_eq!(s.theta0.tan().powi(2), 6.0 / 7.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.theta0, 0.7468, epsilon = 1e-4);
        assert_abs_diff_eq!(s.xi0 * s.xi0, 40.56, epsilon = 1e-12);
        assert_abs_diff_eq!(s.xi0, 6.368674, epsilon = 1e-6);
        // the general display at the chosen θ₀
        let (sn, cs) = s.theta0.sin_cos();
        let display = 1.3f64.powi(2) / 0.04 - 0.36 / (sn * sn) - 0.49 / (cs * cs);
        assert_abs_diff_eq!(display, 40.56, epsilon = 1e-12);

        assert!(matches!(
            synthesize_initial_conditions(Ratio::new(1, 2), 0.1, -0.2),
            Err(Error::InfeasibleRatio { .. })
        ));
        assert!(synthesize_initial_conditions(Ratio::new(1, 4), 0.1, -0.2).is_ok());
        assert!(synthesize_initial_conditions(Ratio::new(1, 5), 0.0, 0.0).is_err());
    }

    #[test]
    fn synthesis_on_faces() {
        let s = synthesize_initial_conditions(Ratio::new(2, 3), 0.0, 0.9).unwrap();
        assert_eq!(s.theta0, 0.0);
        assert_abs_diff_eq!(hamiltonian(&s).unwrap().r, 2.0 / 3.0, epsilon = 1e-14);
        let s = synthesize_initial_conditions(Ratio::new(2, 3), -0.9, 0.0).unwrap();
        assert_abs_diff_eq!(hamiltonian(&s).unwrap().r, 2.0 / 3.0, epsilon = 1e-14);
        assert_eq!(classify(&s).unwrap().name(), "Boundary4");
    }

    #[test]
    fn closure_data_examples() {
        let s = synthesize_initial_conditions(Ratio::new(1, 5), 0.6, 0.7).unwrap();
        let c = closure_data(&s, DEFAULT_Q_MAX).unwrap();
        assert_eq!(
            (c.p, c.q, c.epsilon, c.parity_class),
            (1, 5, 1, Parity::BothOdd)
        );
        assert_eq!(c.length_squared_over_pi_squared, 24);
        assert_eq!(c.n, 6);
        assert_relative_eq!(c.period, PI / 1.3, max_relative = 1e-13);
        assert_relative_eq!(
            c.period,
            5.0 * theta0_period_analytic(&s).unwrap(),
            max_relative = 1e-13
        );
        assert_relative_eq!(c.length(), PI * 24f64.sqrt(), max_relative = 1e-15);

        let s = synthesize_initial_conditions(Ratio::new(1, 2), 0.6, 0.7).unwrap();
        let c = closure_data(&s, DEFAULT_Q_MAX).unwrap();
        assert_eq!((c.epsilon, c.closing_pair()), (4, (2, 4)));
        assert_eq!(c.n, 3);
        assert_eq!(c.length_squared_over_pi_squared, 12);
        assert_relative_eq!(c.period, 2.0 * PI / 1.3, max_relative = 1e-13);

        let fibre = PhaseState::new(std::f64::consts::FRAC_PI_4, 0.0, 0.0, 0.0, 1.0, -1.0);
        assert!(matches!(
            closure_data(&fibre, 100),
            Err(Error::NotOscillating(_))
        ));
        let meridian = PhaseState::new(0.4, 0.0, 0.0, 1.0, 0.0, 0.0);
        assert!(matches!(
            closure_data(&meridian, 100),
            Err(Error::NotOscillating(_))
        ));
        let horizontal = PhaseState::new(0.4, 0.0, 0.0, 1.0, 0.5, -0.5);
        assert_eq!(
            closure_data(&horizontal, 100),
            Err(Error::ZeroVerticalEnergy)
        );
        let irrational = synthesize_initial_conditions(Ratio::new(1, 2), 0.6, 0.7)
            .map(|s| PhaseState {
                xi0: s.xi0 * 1.1,
                ..s
            })
            .unwrap();
        assert!(matches!(
            closure_data(&irrational, 100),
            Err(Error::NotClosed { .. })
        ));
    }

    #[test]
    fn closed_length_examples() {
        assert_eq!(closed_length(1, 5).unwrap(), 6);
        assert_eq!(closed_length(1, 2).unwrap(), 3);
        assert_eq!(closed_length(3, 5).unwrap(), 4);
        assert_eq!(closed_length(2, 4), Err(Error::NotCoprime { p: 2, q: 4 }));
        assert!(closed_length(0, 1).is_err());
        assert!(closed_length(3, 3).is_err());
    }

    #[test]
    fn realize_length_examples() {
        assert_eq!(
            realize_length(2).unwrap().realization,
            Realization::Pair {
                p: 1,
                q: 3,
                parity: Parity::BothOdd
            }
        );
        assert_eq!(
            realize_length(3).unwrap().realization,
            Realization::Pair {
                p: 1,
                q: 2,
                parity: Parity::Mixed
            }
        );
        assert_eq!(
            realize_length(1).unwrap().realization,
            Realization::HopfFiber
        );
        assert_relative_eq!(realize_length(2).unwrap().length(), PI * 8f64.sqrt());
        assert!(realize_length(0).is_err());
        for n in 2..=500 {
            if let Realization::Pair { p, q, .. } = realize_length(n).unwrap().realization {
                assert_eq!(p.gcd(&q), 1);
                assert_eq!(closed_length(p, q).unwrap(), n);
            }
        }
    }

    #[test]
    fn oracle_covers_every_n() {
        let set = spectrum_bruteforce_oracle(101);
        for n in 1..=100 {
            assert!(set.contains(&n), "{n} missing");
        }
        assert!(set.contains(&(101 * 101 - 4)));
        assert!(set.contains(&((101 * 101 - 1) / 4)));
        for v in enumerate_pairs(101) {
            match v.parity {
                Parity::Mixed => assert!(v.n.is_odd()),
                Parity::BothOdd => {
                    assert!(v.n.is_even());
                    assert_eq!((v.q * v.q - v.p * v.p) % 8, 0);
                }
            }
        }
    }

    #[test]
    fn length_label_format() {
        assert_eq!(length_label(6), "2*pi*sqrt(6)=1.5390597961942367e1");
    }

    proptest! {
        #[test]
        fn synthesized_ratio_is_exact(
            p in 1u64..20, dq in 1u64..20, x1 in 0.05..3.0f64, x2 in 0.05..3.0f64, neg in proptest::bool::ANY
        ) {
            let q = p + dq;
            let r = Ratio::new(p, q);
            let x2 = if neg { -x2 } else { x2 };
            match synthesize_initial_conditions(r, x1, x2) {
                Ok(s) => {
                    let e = hamiltonian(&s).unwrap();
                    let target = *r.numer() as f64 / *r.denom() as f64;
                    prop_assert!((e.r - target).abs() <= 1e-12);
                }
                Err(Error::InfeasibleRatio { .. }) => {
                    prop_assert!(neg);
                    let target = *r.numer() as f64 / *r.denom() as f64;
                    prop_assert!(((x1 + x2) / (x1 - x2)).abs() <= target * (1.0 + 1e-12));
                }
                Err(e) => prop_assert!(false, "{e}"),
            }
        }

        #[test]
        fn detect_recovers_small_fractions(p in 1u64..200, dq in 1u64..200) {
            let r = Ratio::new(p, p + dq);
            let x = *r.numer() as f64 / *r.denom() as f64;
            prop_assert_eq!(detect_rational(x, DEFAULT_Q_MAX, RATIONAL_TOL), Some(r));
        }
    }
}
