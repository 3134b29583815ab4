//! Möbius transformations z ↦ (az + b)/(cz + d) on the extended plane.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{is_finite, ExtendedComplex, C64, ONE, ZERO};
use crate::taylor::Taylor3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MobiusError {
    #[error("singular Möbius map: ad - bc = 0")]
    Singular,
    #[error("Möbius coefficients must be finite")]
    NonFinite,
}

/// A Möbius map stored with ad − bc = 1.
///
/// The normalization leaves a sign ambiguity, so equality is up to ±.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(try_from = "[C64; 4]", into = "[C64; 4]")]
pub struct MobiusTransform {
    a: C64,
    b: C64,
    c: C64,
    d: C64,
}

impl MobiusTransform {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self, MobiusError> {
        if ![a, b, c, d].into_iter().all(is_finite) {
            return Err(MobiusError::NonFinite);
        }
        let (ad, bc) = (a * d, b * c);
        let det = ad - bc;
        if det.norm() <= 1e-12 * ad.norm().max(bc.norm()).max(1.0) {
            return Err(MobiusError::Singular);
        }
        let s = det.sqrt().inv();
        Ok(MobiusTransform {
            a: a * s,
            b: b * s,
            c: c * s,
            d: d * s,
        })
    }

    pub fn identity() -> Self {
        MobiusTransform {
            a: ONE,
            b: ZERO,
            c: ZERO,
            d: ONE,
        }
    }

    /// z ↦ αz + β.
    pub fn affine(alpha: C64, beta: C64) -> Result<Self, MobiusError> {
        Self::new(alpha, beta, ZERO, ONE)
    }

    /// The unique map sending `from[k]` to `to[k]` for three distinct points
    /// on each side.
    pub fn from_three_points(from: [C64; 3], to: [C64; 3]) -> Result<Self, MobiusError> {
        Ok(cross_ratio_map(to)?.inverse().compose(&cross_ratio_map(from)?))
    }

    pub fn coefficients(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn apply(&self, z: ExtendedComplex) -> ExtendedComplex {
        match z {
            ExtendedComplex::Infinity => {
                if self.c == ZERO {
                    ExtendedComplex::Infinity
                } else {
                    ExtendedComplex::Finite(self.a / self.c)
                }
            }
            ExtendedComplex::Finite(z) => self.apply_finite(z),
        }
    }

    pub fn apply_finite(&self, z: C64) -> ExtendedComplex {
        let den = self.c * z + self.d;
        if den == ZERO {
            ExtendedComplex::Infinity
        } else {
            ExtendedComplex::from((self.a * z + self.b) / den)
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusTransform) -> MobiusTransform {
        let (p, q) = (self, other);
        MobiusTransform {
            a: p.a * q.a + p.b * q.c,
            b: p.a * q.b + p.b * q.d,
            c: p.c * q.a + p.d * q.c,
            d: p.c * q.b + p.d * q.d,
        }
    }

    pub fn inverse(&self) -> MobiusTransform {
        MobiusTransform {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Coefficient-wise equality up to sign within `tol`.
    pub fn approx_eq(&self, other: &MobiusTransform, tol: f64) -> bool {
        let x = self.coefficients();
        let y = other.coefficients();
        let diff = |sign: f64| {
            x.iter()
                .zip(y.iter())
                .map(|(u, v)| (u - v * sign).norm())
                .fold(0.0, f64::max)
        };
        let scale = x.iter().map(|u| u.norm()).fold(1.0, f64::max);
        diff(1.0).min(diff(-1.0)) <= tol * scale
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.approx_eq(&MobiusTransform::identity(), tol)
    }

    /// Derivatives (m, m', m'', m''') at a finite `w` with `cw + d ≠ 0`.
    pub fn derivatives_at(&self, w: C64) -> Option<[C64; 4]> {
        let den = self.c * w + self.d;
        if den == ZERO {
            return None;
        }
        // with ad − bc = 1: m' = (cw+d)⁻², m'' = −2c(cw+d)⁻³, m''' = 6c²(cw+d)⁻⁴
        let r = den.inv();
        let r2 = r * r;
        Some([
            (self.a * w + self.b) * r,
            r2,
            -2.0 * self.c * r2 * r,
            6.0 * self.c * self.c * r2 * r2,
        ])
    }

    /// Jet of `m ∘ f` from the jet of `f`.
    pub fn apply_jet(&self, f: Taylor3) -> Option<Taylor3> {
        Some(f.compose(self.derivatives_at(f.value())?))
    }
}

/// Sends (z₁, z₂, z₃) to (0, ∞, 1).
fn cross_ratio_map(z: [C64; 3]) -> Result<MobiusTransform, MobiusError> {
    let [z1, z2, z3] = z;
    // w = (z − z₁)(z₃ − z₂) / ((z − z₂)(z₃ − z₁))
    MobiusTransform::new(z3 - z2, -z1 * (z3 - z2), z3 - z1, -z2 * (z3 - z1))
}

impl PartialEq for MobiusTransform {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, 1e-10)
    }
}

impl TryFrom<[C64; 4]> for MobiusTransform {
    type Error = MobiusError;

    fn try_from(v: [C64; 4]) -> Result<Self, Self::Error> {
        MobiusTransform::new(v[0], v[1], v[2], v[3])
    }
}

impl From<MobiusTransform> for [C64; 4] {
    fn from(m: MobiusTransform) -> Self {
        m.coefficients()
    }
}

impl std::fmt::Display for MobiusTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({})z + ({}) / ({})z + ({})", self.a, self.b, self.c, self.d)
    }
}
