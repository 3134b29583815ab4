//! Scalars on the complex plane and on the Riemann sphere.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

#[inline]
pub fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `|x - y| / max(|x|, |y|, 1)`.
///
/// Relative difference with a unit floor, so values crossing zero are
/// compared absolutely.
pub fn rel_diff(x: C64, y: C64) -> f64 {
    (x - y).norm() / x.norm().max(y.norm()).max(1.0)
}

/// Principal n-th root.
pub fn principal_root(z: C64, n: u32) -> C64 {
    if z == ZERO {
        return ZERO;
    }
    C64::from_polar(z.norm().powf(1.0 / n as f64), z.arg() / n as f64)
}

/// Descending by real part; near-equal real parts (within 1e-9 relative) are
/// ordered by descending imaginary part.
pub fn cmp_desc(a: C64, b: C64) -> std::cmp::Ordering {
    let tol = 1e-9 * a.norm().max(b.norm()).max(1.0);
    if (a.re - b.re).abs() > tol {
        b.re.total_cmp(&a.re)
    } else {
        b.im.total_cmp(&a.im)
    }
}

/// A point of the extended complex plane ℂ ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExtendedComplex {
    Finite(C64),
    #[serde(with = "infinity_tag")]
    Infinity,
}

mod infinity_tag {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("inf")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let tag = String::deserialize(d)?;
        if tag == "inf" {
            Ok(())
        } else {
            Err(D::Error::custom(format!("expected \"inf\", found {tag:?}")))
        }
    }
}

impl ExtendedComplex {
    pub fn finite(self) -> Option<C64> {
        match self {
            ExtendedComplex::Finite(z) => Some(z),
            ExtendedComplex::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtendedComplex::Infinity)
    }

    /// Chordal distance on the Riemann sphere; bounded by 1.
    pub fn chordal_distance(self, other: ExtendedComplex) -> f64 {
        match (self, other) {
            (ExtendedComplex::Infinity, ExtendedComplex::Infinity) => 0.0,
            (ExtendedComplex::Finite(z), ExtendedComplex::Infinity)
            | (ExtendedComplex::Infinity, ExtendedComplex::Finite(z)) => {
                1.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (ExtendedComplex::Finite(z), ExtendedComplex::Finite(w)) => {
                (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
            }
        }
    }
}

impl From<C64> for ExtendedComplex {
    fn from(z: C64) -> Self {
        if is_finite(z) {
            ExtendedComplex::Finite(z)
        } else {
            ExtendedComplex::Infinity
        }
    }
}

impl std::fmt::Display for ExtendedComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtendedComplex::Finite(z) => write!(f, "{z}"),
            ExtendedComplex::Infinity => write!(f, "∞"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extended_json_forms() {
        let z = ExtendedComplex::Finite(c(1.5, -2.0));
        assert_eq!(serde_json::to_string(&z).unwrap(), "[1.5,-2.0]");
        assert_eq!(serde_json::to_string(&ExtendedComplex::Infinity).unwrap(), "\"inf\"");
        let back: ExtendedComplex = serde_json::from_str("\"inf\"").unwrap();
        assert!(back.is_infinite());
        let back: ExtendedComplex = serde_json::from_str("[0,1]").unwrap();
        assert_eq!(back, ExtendedComplex::Finite(I));
        assert!(serde_json::from_str::<ExtendedComplex>("\"nan\"").is_err());
    }

    #[test]
    fn chordal_distance_to_infinity() {
        let d = ExtendedComplex::Finite(ZERO).chordal_distance(ExtendedComplex::Infinity);
        assert!((d - 1.0).abs() < 1e-15);
        assert_eq!(
            ExtendedComplex::Infinity.chordal_distance(ExtendedComplex::Infinity),
            0.0
        );
    }

    #[test]
    fn principal_roots() {
        let r = principal_root(real(-64.0 / 27.0 * -27.0 / 64.0), 6);
        assert!((r - ONE).norm() < 1e-15);
        let r = principal_root(real(-1.0), 2);
        assert!((r - I).norm() < 1e-15);
    }
}
