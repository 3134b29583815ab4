//! The Schwarzian derivative S(f, z) = f'''/f' − (3/2)(f''/f')², from exact
//! jets or from samples on a circle.

use std::f64::consts::TAU;

use thiserror::Error;

use crate::complex::{is_finite, C64, ZERO};
use crate::taylor::Taylor3;

/// Default number of ring samples for [`schwarzian_numeric`].
pub const DEFAULT_RING_SAMPLES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchwarzianError {
    #[error("critical point: f'(z) = {0} vanishes")]
    CriticalPoint(C64),
    #[error("non-finite sample at {0}: singularity inside the sampling disk")]
    SingularityInDisk(C64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// (f, f', f'', f''') at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetValue {
    pub f: C64,
    pub f1: C64,
    pub f2: C64,
    pub f3: C64,
}

impl JetValue {
    pub fn new(f: C64, f1: C64, f2: C64, f3: C64) -> Self {
        JetValue { f, f1, f2, f3 }
    }

    pub fn is_finite(&self) -> bool {
        [self.f, self.f1, self.f2, self.f3].into_iter().all(is_finite)
    }
}

impl From<Taylor3> for JetValue {
    fn from(t: Taylor3) -> Self {
        let [f, f1, f2, f3] = t.derivatives();
        JetValue { f, f1, f2, f3 }
    }
}

impl From<JetValue> for Taylor3 {
    fn from(j: JetValue) -> Self {
        Taylor3::from_derivatives(j.f, j.f1, j.f2, j.f3)
    }
}

pub fn schwarzian_of_jet(j: &JetValue) -> Result<C64, SchwarzianError> {
    if j.f1.norm() <= 1e-10 * j.f.norm().max(1.0) {
        return Err(SchwarzianError::CriticalPoint(j.f1));
    }
    let a = j.f2 / j.f1;
    Ok(j.f3 / j.f1 - 1.5 * a * a)
}

/// Derivatives up to order 3 at `z0` from `samples` equally spaced values on
/// the circle of the given radius (discrete Cauchy formula).
pub fn cauchy_jet<F>(f: F, z0: C64, radius: f64, samples: usize) -> Result<JetValue, SchwarzianError>
where
    F: Fn(C64) -> C64,
{
    if samples < 16 || !samples.is_power_of_two() {
        return Err(SchwarzianError::InvalidArgument(format!(
            "sample count must be a power of two ≥ 16, got {samples}"
        )));
    }
    if !(radius > 0.0 && radius.is_finite()) || !is_finite(z0) {
        return Err(SchwarzianError::InvalidArgument("radius and centre must be finite, radius > 0".into()));
    }
    let mut acc = [ZERO; 4];
    for j in 0..samples {
        let theta = TAU * j as f64 / samples as f64;
        let e = C64::from_polar(1.0, theta);
        let z = z0 + e * radius;
        let v = f(z);
        if !is_finite(v) {
            return Err(SchwarzianError::SingularityInDisk(z));
        }
        // e^{−ikθ}
        let mut w = C64::new(1.0, 0.0);
        let ec = e.conj();
        for a in acc.iter_mut() {
            *a += v * w;
            w *= ec;
        }
    }
    let n = samples as f64;
    let fact = [1.0, 1.0, 2.0, 6.0];
    let mut d = [ZERO; 4];
    for k in 0..4 {
        d[k] = acc[k] / n * fact[k] / radius.powi(k as i32);
    }
    Ok(JetValue::new(d[0], d[1], d[2], d[3]))
}

/// S(f, z0) with derivatives taken by [`cauchy_jet`].
pub fn schwarzian_numeric<F>(f: F, z0: C64, radius: f64, samples: usize) -> Result<C64, SchwarzianError>
where
    F: Fn(C64) -> C64,
{
    schwarzian_of_jet(&cauchy_jet(f, z0, radius, samples)?)
}

/// min(0.3, half the distance to the nearest singularity).
pub fn default_ring_radius(singularity_distance: f64) -> f64 {
    (0.5 * singularity_distance).min(0.3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{c, real};

    #[test]
    fn jet_formula() {
        let z = c(0.3, -0.2);
        let e = z.exp();
        let s = schwarzian_of_jet(&JetValue::new(e, e, e, e)).unwrap();
        assert!((s - real(-0.5)).norm() < 1e-15);
        let (sn, cs) = (z.sin(), z.cos());
        let s = schwarzian_of_jet(&JetValue::new(sn, cs, -sn, -cs)).unwrap();
        let t = z.tan();
        assert!((s - (-1.0 - 1.5 * t * t)).norm() < 1e-14);
    }

    #[test]
    fn critical_point_is_an_error() {
        let err = schwarzian_of_jet(&JetValue::new(real(2.0), real(1e-12), ZERO, ZERO)).unwrap_err();
        assert!(matches!(err, SchwarzianError::CriticalPoint(_)));
    }

    #[test]
    fn numeric_exp() {
        let s = schwarzian_numeric(|z| z.exp(), real(0.3), 0.5, 64).unwrap();
        assert!((s - real(-0.5)).norm() < 1e-10, "{s}");
    }

    #[test]
    fn numeric_fixed_point() {
        let f = |z: C64| -1.5 / ((z + 1.0) * (z + 1.0));
        let z0 = real(0.5);
        let s = schwarzian_numeric(f, z0, 0.3, 64).unwrap();
        assert!((s - f(z0)).norm() < 1e-8);
        assert!((f(z0) - real(-2.0 / 3.0)).norm() < 1e-15);
    }

    #[test]
    fn numeric_mobius_vanishes() {
        let f = |z: C64| (c(1.0, 2.0) * z + 0.5) / (c(0.3, -1.0) * z + c(2.0, 1.0));
        let s = schwarzian_numeric(f, c(0.1, 0.2), 0.3, 64).unwrap();
        assert!(s.norm() < 1e-8, "{s}");
    }

    #[test]
    fn rejects_bad_rings() {
        assert!(schwarzian_numeric(|z| z, ZERO, 0.1, 24).is_err());
        let err = schwarzian_numeric(|z| 1.0 / (z - 0.1), ZERO, 0.1, 16).unwrap_err();
        assert!(matches!(err, SchwarzianError::SingularityInDisk(_)));
    }
}
