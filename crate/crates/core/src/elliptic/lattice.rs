//! Period lattices: reduction, half-periods from R_F, and an Eisenstein-series
//! consistency check of the computed basis.

use std::f64::consts::PI;

use serde::Serialize;

use crate::complex::{C64, ZERO};

use super::carlson::carlson_rf_rotated;
use super::cubic::stationary_values;
use super::{EllipticError, WeierstrassInvariants};

/// A period lattice 2ω₁ℤ + 2ω₃ℤ stored with a Gauss-reduced basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    short: C64,
    long: C64,
}

impl Lattice {
    /// Reduce the basis `(p1, p2)` of full periods. The periods must be
    /// linearly independent over ℝ.
    pub fn from_periods(p1: C64, p2: C64) -> Option<Lattice> {
        if (p1.conj() * p2).im.abs() <= 1e-12 * p1.norm() * p2.norm() {
            return None;
        }
        let (mut a, mut b) = (p1, p2);
        if b.norm() < a.norm() {
            std::mem::swap(&mut a, &mut b);
        }
        for _ in 0..200 {
            let mu = (b * a.conj()).re / a.norm_sqr();
            let m = mu.round();
            if m != 0.0 {
                b -= a * m;
            }
            if b.norm() < a.norm() {
                std::mem::swap(&mut a, &mut b);
            } else {
                break;
            }
        }
        Some(Lattice { short: a, long: b })
    }

    pub fn shortest_period(&self) -> f64 {
        self.short.norm()
    }

    pub fn basis(&self) -> (C64, C64) {
        (self.short, self.long)
    }

    /// Real coordinates of `z` in the reduced basis.
    fn coordinates(&self, z: C64) -> (f64, f64) {
        let (a, b) = (self.short, self.long);
        let det = a.re * b.im - a.im * b.re;
        let x = (z.re * b.im - z.im * b.re) / det;
        let y = (a.re * z.im - a.im * z.re) / det;
        (x, y)
    }

    /// The lattice point closest to `z`.
    pub fn nearest_point(&self, z: C64) -> C64 {
        let (x, y) = self.coordinates(z);
        let (x0, y0) = (x.round(), y.round());
        let mut best = ZERO;
        let mut best_d = f64::INFINITY;
        for dx in -1..=1 {
            for dy in -1..=1 {
                let p = self.short * (x0 + dx as f64) + self.long * (y0 + dy as f64);
                let d = (z - p).norm();
                if d < best_d {
                    best_d = d;
                    best = p;
                }
            }
        }
        best
    }

    /// `z` minus its nearest lattice point.
    pub fn reduce(&self, z: C64) -> C64 {
        z - self.nearest_point(z)
    }

    pub fn distance(&self, z: C64) -> f64 {
        self.reduce(z).norm()
    }

    /// Invariants (g₂, g₃) of this lattice from the q-expansions of E₄, E₆.
    pub fn eisenstein_invariants(&self) -> (C64, C64) {
        let (w, mut w2) = (self.short, self.long);
        let mut tau = w2 / w;
        if tau.im < 0.0 {
            w2 = -w2;
            tau = w2 / w;
        }
        let q = (C64::new(0.0, 2.0 * PI) * tau).exp();
        let (mut s3, mut s5) = (ZERO, ZERO);
        let mut qn = C64::new(1.0, 0.0);
        for n in 1..=24u32 {
            qn *= q;
            let (d3, d5) = divisor_sums(n);
            s3 += qn * d3;
            s5 += qn * d5;
            if qn.norm() < 1e-30 {
                break;
            }
        }
        let e4 = 1.0 + 240.0 * s3;
        let e6 = 1.0 - 504.0 * s5;
        let k = C64::new(PI, 0.0) / w;
        let k4 = k * k * k * k;
        (4.0 / 3.0 * k4 * e4, 8.0 / 27.0 * k4 * k * k * e6)
    }
}

fn divisor_sums(n: u32) -> (f64, f64) {
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .fold((0.0, 0.0), |(a, b), d| {
            let d = d as f64;
            (a + d.powi(3), b + d.powi(5))
        })
}

/// Half-periods and stationary values of a nondegenerate ℘.
///
/// Labelling: the stationary values are ordered e₁, e₂, e₃ (descending real
/// part, then imaginary part); ℘(ω₁) = e₁, ℘(ω₃) = e₃ and ℘(ω₁ + ω₃) = e₂.
/// The sign of ω₃ is chosen so that Im(ω₃/ω₁) > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeData {
    pub omega1: C64,
    pub omega3: C64,
    pub stationary_values: [C64; 3],
}

impl LatticeData {
    pub fn lattice(&self) -> Lattice {
        Lattice::from_periods(2.0 * self.omega1, 2.0 * self.omega3)
            .expect("half-periods are independent")
    }

    pub fn omega2(&self) -> C64 {
        self.omega1 + self.omega3
    }
}

pub fn half_periods(inv: &WeierstrassInvariants) -> Result<LatticeData, EllipticError> {
    inv.validate()?;
    if inv.is_degenerate() {
        return Err(EllipticError::DegenerateLattice);
    }
    let e = stationary_values(inv).values;
    let raw: Vec<C64> = (0..3)
        .map(|a| {
            let (b, c) = ((a + 1) % 3, (a + 2) % 3);
            carlson_rf_rotated(ZERO, e[a] - e[b], e[a] - e[c])
        })
        .collect::<Result<_, _>>()?;

    // Each raw value is a half-period in the right class; the pair (ω₁, ω₃)
    // must also generate the full lattice rather than a sublattice. The
    // alternatives ±ωᵢ ± ωⱼ stay in the same class.
    let class_candidates = |k: usize| -> Vec<C64> {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        vec![
            raw[k],
            raw[i] + raw[j],
            raw[i] - raw[j],
            -raw[i] + raw[j],
        ]
    };
    for w1 in class_candidates(0) {
        for w3 in class_candidates(2) {
            let Some(lat) = Lattice::from_periods(2.0 * w1, 2.0 * w3) else {
                continue;
            };
            if lattice_matches(&lat, inv) {
                let w3 = if (w3 / w1).im < 0.0 { -w3 } else { w3 };
                return Ok(LatticeData {
                    omega1: w1,
                    omega3: w3,
                    stationary_values: e,
                });
            }
        }
    }
    Err(EllipticError::HalfPeriodFailure)
}

fn lattice_matches(lat: &Lattice, inv: &WeierstrassInvariants) -> bool {
    let (g2, g3) = lat.eisenstein_invariants();
    let k = PI / lat.shortest_period();
    let (n2, n3) = (k.powi(4), k.powi(6));
    (g2 - inv.g2).norm() <= 1e-8 * n2 && (g3 - inv.g3).norm() <= 1e-8 * n3
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{c, real};

    #[test]
    fn reduction_finds_short_basis() {
        let lat = Lattice::from_periods(c(1.0, 0.0), c(7.3, 1.0)).unwrap();
        assert!((lat.shortest_period() - 1.0).abs() < 1e-14);
        let (_, long) = lat.basis();
        assert!((long - c(0.3, 1.0)).norm() < 1e-12, "{long}");
    }

    #[test]
    fn nearest_point_and_reduce() {
        let lat = Lattice::from_periods(c(2.0, 0.0), c(0.5, 1.5)).unwrap();
        let p = c(2.0, 0.0) * 3.0 - c(0.5, 1.5) * 2.0;
        let z = p + c(0.1, -0.05);
        assert!((lat.nearest_point(z) - p).norm() < 1e-12);
        assert!((lat.reduce(z) - c(0.1, -0.05)).norm() < 1e-12);
    }

    #[test]
    fn lemniscatic_half_period() {
        // ∫₁^∞ dt/√(4t³ − 4t) = 1.311028777146...
        let d = half_periods(&WeierstrassInvariants::new(real(4.0), ZERO)).unwrap();
        assert!((d.omega1 - real(1.311_028_777_146_06)).norm() < 1e-12, "{}", d.omega1);
        assert!((d.omega3 - c(0.0, 1.311_028_777_146_06)).norm() < 1e-12, "{}", d.omega3);
    }

    #[test]
    fn eisenstein_round_trip_for_square_lattice() {
        let lat = Lattice::from_periods(real(2.0 * 1.311_028_777_146_06), c(0.0, 2.0 * 1.311_028_777_146_06))
            .unwrap();
        let (g2, g3) = lat.eisenstein_invariants();
        assert!((g2 - real(4.0)).norm() < 1e-12, "{g2}");
        assert!(g3.norm() < 1e-12, "{g3}");
    }

    #[test]
    fn degenerate_is_rejected() {
        let err = half_periods(&WeierstrassInvariants::new(real(3.0), real(1.0))).unwrap_err();
        assert!(matches!(err, EllipticError::DegenerateLattice));
    }
}
