//! Weierstrass ℘ engine.
//!
//! ℘ is evaluated from its Laurent series near the origin and carried outward
//! with the duplication formula
//!
//! ```text
//! ℘(2w)  = A² − 2℘(w),            A = ℘''(w) / (2℘'(w)),  ℘'' = 6℘² − g₂/2
//! ℘'(2w) = A(6℘(w) − 2A²) − ℘'(w)
//! ```
//!
//! When the lattice is known (Δ ≠ 0) the argument is first reduced to the
//! nearest lattice point, so at most a few doublings are ever needed.

mod carlson;
mod cubic;
mod lattice;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{is_finite, ExtendedComplex, C64, ZERO};
use crate::taylor::Taylor3;

pub use carlson::{carlson_rf, carlson_rf_rotated};
pub use cubic::{stationary_values, StationaryValues};
pub use lattice::{half_periods, Lattice, LatticeData};

/// Lattice distance below which ℘ reports the point at infinity.
pub const POLE_EPSILON: f64 = 1e-6;
/// Relative threshold for Δ ≠ 0.
pub const DISCRIMINANT_EPSILON: f64 = 1e-10;

const MAX_LAURENT_TERMS: usize = 48;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EllipticError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate lattice: discriminant g2^3 - 27 g3^2 vanishes")]
    DegenerateLattice,
    #[error("half-period computation did not reproduce the invariants")]
    HalfPeriodFailure,
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeierstrassInvariants {
    pub g2: C64,
    pub g3: C64,
}

impl WeierstrassInvariants {
    pub fn new(g2: C64, g3: C64) -> Self {
        WeierstrassInvariants { g2, g3 }
    }

    pub fn discriminant(&self) -> C64 {
        self.g2 * self.g2 * self.g2 - 27.0 * self.g3 * self.g3
    }

    /// |Δ| ≤ εΔ · max(|g₂|³, |g₃|², 1).
    pub fn is_degenerate(&self) -> bool {
        let scale = self.g2.norm().powi(3).max(self.g3.norm_sqr()).max(1.0);
        self.discriminant().norm() <= DISCRIMINANT_EPSILON * scale
    }

    /// Invariants of the lattice scaled by `t`: (t⁻⁴g₂, t⁻⁶g₃).
    pub fn scaled(&self, t: C64) -> Self {
        let t2 = t * t;
        let t4 = t2 * t2;
        WeierstrassInvariants::new(self.g2 / t4, self.g3 / (t4 * t2))
    }

    pub(crate) fn validate(&self) -> Result<(), EllipticError> {
        if is_finite(self.g2) && is_finite(self.g3) {
            Ok(())
        } else {
            Err(EllipticError::InvalidArgument("invariants must be finite".into()))
        }
    }
}

/// Coefficients c₂ … c_order of ℘(z) = z⁻² + Σ_{k≥2} c_k z^{2k−2}.
pub fn laurent_coefficients(
    inv: &WeierstrassInvariants,
    order: usize,
) -> Result<Vec<C64>, EllipticError> {
    if order < 2 {
        return Err(EllipticError::InvalidArgument(format!(
            "Laurent order must be at least 2, got {order}"
        )));
    }
    inv.validate()?;
    // index k holds c_k; slots 0 and 1 unused
    let mut c = vec![ZERO; order + 1];
    c[2] = inv.g2 / 20.0;
    if order >= 3 {
        c[3] = inv.g3 / 28.0;
    }
    for k in 4..=order {
        let mut s = ZERO;
        for m in 2..=k - 2 {
            s += c[m] * c[k - m];
        }
        c[k] = s * (3.0 / ((2 * k + 1) as f64 * (k - 3) as f64));
    }
    Ok(c.split_off(2))
}

/// A prepared ℘(z; g₂, g₃): Laurent coefficients, series radius and, for a
/// nondegenerate lattice, the half-periods used to reduce arguments.
#[derive(Debug, Clone)]
pub struct WeierstrassP {
    inv: WeierstrassInvariants,
    coeffs: Vec<C64>,
    series_radius: f64,
    lattice: Option<(Lattice, LatticeData)>,
}

impl WeierstrassP {
    /// Requires Δ ≠ 0.
    pub fn new(inv: WeierstrassInvariants) -> Result<Self, EllipticError> {
        let data = half_periods(&inv)?;
        let lattice = data.lattice();
        let coeffs = laurent_coefficients(&inv, MAX_LAURENT_TERMS)?;
        let series_radius = 0.5 * lattice.shortest_period();
        Ok(WeierstrassP {
            inv,
            coeffs,
            series_radius,
            lattice: Some((lattice, data)),
        })
    }

    /// Series plus duplication only, no lattice reduction. Works for Δ = 0 too.
    pub fn unreduced(inv: WeierstrassInvariants) -> Result<Self, EllipticError> {
        inv.validate()?;
        let coeffs = laurent_coefficients(&inv, MAX_LAURENT_TERMS)?;
        let series_radius = 0.5 * coefficient_radius(&coeffs);
        Ok(WeierstrassP {
            inv,
            coeffs,
            series_radius,
            lattice: None,
        })
    }

    pub fn invariants(&self) -> WeierstrassInvariants {
        self.inv
    }

    pub fn lattice(&self) -> Option<&Lattice> {
        self.lattice.as_ref().map(|(l, _)| l)
    }

    pub fn lattice_data(&self) -> Option<&LatticeData> {
        self.lattice.as_ref().map(|(_, d)| d)
    }

    /// (℘(z), ℘'(z)), or `None` within [`POLE_EPSILON`] of a lattice point.
    pub fn eval(&self, z: C64) -> Option<(C64, C64)> {
        let z = match &self.lattice {
            Some((lat, _)) => lat.reduce(z),
            None => z,
        };
        if z.norm() < POLE_EPSILON {
            return None;
        }
        let mut halvings = 0;
        let mut w = z;
        while w.norm() > self.series_radius {
            w /= 2.0;
            halvings += 1;
        }
        let (mut p, mut dp) = self.series(w);
        let half_g2 = self.inv.g2 / 2.0;
        for _ in 0..halvings {
            let a = (6.0 * p * p - half_g2) / (2.0 * dp);
            let p2 = a * a - 2.0 * p;
            dp = a * (6.0 * p - 2.0 * a * a) - dp;
            p = p2;
        }
        (is_finite(p) && is_finite(dp)).then_some((p, dp))
    }

    fn series(&self, w: C64) -> (C64, C64) {
        let s = w * w;
        // Σ c_k s^{k−1} and its s-derivative by Horner, from the top
        let (mut f, mut df) = (ZERO, ZERO);
        for ck in self.coeffs.iter().rev() {
            df = df * s + f;
            f = f * s + ck;
        }
        // f(s) = Σ c_k s^{k−2}; value term is s·f(s), its derivative f + s f'
        let p = 1.0 / s + s * f;
        let dp_ds = -1.0 / (s * s) + f + s * df;
        (p, 2.0 * w * dp_ds)
    }

    pub fn wp(&self, z: C64) -> ExtendedComplex {
        self.eval(z).map_or(ExtendedComplex::Infinity, |(p, _)| ExtendedComplex::Finite(p))
    }

    pub fn wp_prime(&self, z: C64) -> ExtendedComplex {
        self.eval(z).map_or(ExtendedComplex::Infinity, |(_, dp)| ExtendedComplex::Finite(dp))
    }

    pub fn wp_second(&self, z: C64) -> ExtendedComplex {
        self.eval(z).map_or(ExtendedComplex::Infinity, |(p, _)| {
            ExtendedComplex::Finite(6.0 * p * p - self.inv.g2 / 2.0)
        })
    }

    /// Jet of ℘ at `z` from ℘'' = 6℘² − g₂/2 and ℘''' = 12℘℘'.
    pub fn jet(&self, z: C64) -> Option<Taylor3> {
        let (p, dp) = self.eval(z)?;
        Some(Taylor3::from_derivatives(
            p,
            dp,
            6.0 * p * p - self.inv.g2 / 2.0,
            12.0 * p * dp,
        ))
    }

    /// Some `w` with ℘(w) = `value`; the full preimage set is ±w + lattice.
    pub fn inverse(&self, value: ExtendedComplex) -> Result<C64, EllipticError> {
        let v = match value {
            ExtendedComplex::Infinity => return Ok(ZERO),
            ExtendedComplex::Finite(v) => v,
        };
        let data = self
            .lattice_data()
            .ok_or(EllipticError::DegenerateLattice)?;
        let e = data.stationary_values;
        let scale = e.iter().map(|x| x.norm()).fold(1.0, f64::max);
        for (k, half) in [data.omega1, data.omega2(), data.omega3].into_iter().enumerate() {
            if (v - e[[0, 1, 2][k]]).norm() <= 1e-12 * scale {
                return Ok(half);
            }
        }
        let mut w = carlson_rf_rotated(v - e[0], v - e[1], v - e[2])?;
        for _ in 0..8 {
            let Some((p, dp)) = self.eval(w) else { break };
            if dp.norm() <= 1e-12 * scale.powf(1.5) {
                break;
            }
            let step = (p - v) / dp;
            w -= step;
            if step.norm() <= 1e-15 * w.norm().max(1e-300) {
                break;
            }
        }
        match self.eval(w) {
            Some((p, _)) if (p - v).norm() <= 1e-8 * v.norm().max(1.0) => Ok(w),
            _ => Err(EllipticError::NoConvergence("inverse of ℘")),
        }
    }

    /// Distance from `z` to the nearest point of ℘⁻¹(value).
    pub fn distance_to_preimage(&self, z: C64, value: ExtendedComplex) -> Result<f64, EllipticError> {
        let (lat, _) = self.lattice.as_ref().ok_or(EllipticError::DegenerateLattice)?;
        let w = self.inverse(value)?;
        Ok(lat.distance(z - w).min(lat.distance(z + w)))
    }
}

/// Root-test estimate of the Laurent radius of convergence, taken over
/// c₁₆ … c₂₄ where the estimate is within ~10% of the true radius.
fn coefficient_radius(coeffs: &[C64]) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .skip(14)
        .take(9)
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(idx, c)| c.norm().powf(-1.0 / (2 * (idx + 2)) as f64))
        .fold(f64::INFINITY, f64::min)
}

fn prepared(inv: &WeierstrassInvariants) -> Result<WeierstrassP, EllipticError> {
    if inv.is_degenerate() {
        WeierstrassP::unreduced(*inv)
    } else {
        WeierstrassP::new(*inv)
    }
}

fn check_point(z: C64) -> Result<(), EllipticError> {
    if is_finite(z) {
        Ok(())
    } else {
        Err(EllipticError::InvalidArgument(format!("non-finite argument {z}")))
    }
}

/// ℘(z; g₂, g₃). Returns the point at infinity within [`POLE_EPSILON`] of a
/// lattice point.
pub fn wp(z: C64, inv: &WeierstrassInvariants) -> Result<ExtendedComplex, EllipticError> {
    check_point(z)?;
    Ok(prepared(inv)?.wp(z))
}

pub fn wp_prime(z: C64, inv: &WeierstrassInvariants) -> Result<ExtendedComplex, EllipticError> {
    check_point(z)?;
    Ok(prepared(inv)?.wp_prime(z))
}

/// 6℘(z)² − g₂/2.
pub fn wp_second(z: C64, inv: &WeierstrassInvariants) -> Result<ExtendedComplex, EllipticError> {
    check_point(z)?;
    Ok(prepared(inv)?.wp_second(z))
}
