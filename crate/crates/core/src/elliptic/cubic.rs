//! Roots of the Weierstrass cubic 4t³ − g₂t − g₃.

use std::cmp::Ordering;

use serde::Serialize;

use crate::complex::{C64, ZERO};

use super::WeierstrassInvariants;

/// The three stationary values e₁, e₂, e₃ of ℘.
///
/// Ordered by descending real part, then descending imaginary part, so a real
/// cubic with three real roots gives e₁ > e₂ > e₃.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationaryValues {
    pub values: [C64; 3],
    /// Δ = 0 within tolerance: at least two roots coincide.
    pub degenerate: bool,
}

impl StationaryValues {
    /// Distinct values with multiplicities. Repeated roots are merged only
    /// when the cubic is flagged degenerate.
    pub fn with_multiplicity(&self) -> Vec<(C64, usize)> {
        let v = self.values;
        if !self.degenerate {
            return v.iter().map(|e| (*e, 1)).collect();
        }
        let scale = v.iter().map(|e| e.norm()).fold(0.0, f64::max);
        let spread = (v[0] - v[1]).norm().max((v[1] - v[2]).norm()).max((v[0] - v[2]).norm());
        if spread <= 1e-6 * scale.max(1e-300) || scale == 0.0 {
            return vec![((v[0] + v[1] + v[2]) / 3.0, 3)];
        }
        // the closest pair is the double root
        let pairs = [(0, 1, 2), (1, 2, 0), (0, 2, 1)];
        let (i, j, k) = pairs
            .into_iter()
            .min_by(|a, b| (v[a.0] - v[a.1]).norm().total_cmp(&(v[b.0] - v[b.1]).norm()))
            .unwrap();
        let double = (v[i] + v[j]) / 2.0;
        let mut out = vec![(double, 2), (v[k], 1)];
        out.sort_by(|a, b| order_desc(a.0, b.0, scale));
        out
    }
}

pub fn stationary_values(inv: &WeierstrassInvariants) -> StationaryValues {
    let (g2, g3) = (inv.g2, inv.g3);
    let mut roots = cardano(g2, g3);
    for r in roots.iter_mut() {
        *r = polish(*r, g2, g3);
    }
    let scale = roots.iter().map(|e| e.norm()).fold(0.0, f64::max);
    roots.sort_by(|a, b| order_desc(*a, *b, scale));
    StationaryValues {
        values: roots,
        degenerate: inv.is_degenerate(),
    }
}

/// Descending by real part, ties (within roundoff) broken by imaginary part.
fn order_desc(a: C64, b: C64, scale: f64) -> Ordering {
    let tol = 1e-12 * scale.max(1e-300);
    if (a.re - b.re).abs() > tol {
        b.re.total_cmp(&a.re)
    } else {
        b.im.total_cmp(&a.im)
    }
}

/// Depressed cubic t³ + pt + q with p = −g₂/4, q = −g₃/4.
fn cardano(g2: C64, g3: C64) -> [C64; 3] {
    let p = -g2 / 4.0;
    let q = -g3 / 4.0;
    if p == ZERO && q == ZERO {
        return [ZERO; 3];
    }
    let disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
    let s = disc.sqrt();
    let (a1, a2) = (-q / 2.0 + s, -q / 2.0 - s);
    let a = if a1.norm() >= a2.norm() { a1 } else { a2 };
    let u = a.cbrt();
    let v = if u == ZERO { ZERO } else { -p / (3.0 * u) };
    let w = C64::new(-0.5, 3f64.sqrt() / 2.0);
    let w2 = w.conj();
    [u + v, w * u + w2 * v, w2 * u + w * v]
}

fn polish(mut t: C64, g2: C64, g3: C64) -> C64 {
    for _ in 0..3 {
        let f = 4.0 * t * t * t - g2 * t - g3;
        let df = 12.0 * t * t - g2;
        let scale = 12.0 * t.norm_sqr() + g2.norm();
        if df.norm() <= 1e-8 * scale.max(1e-300) {
            break;
        }
        let step = f / df;
        t -= step;
        if step.norm() <= 1e-16 * t.norm() {
            break;
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{c, real};

    fn sv(g2: C64, g3: C64) -> StationaryValues {
        stationary_values(&WeierstrassInvariants::new(g2, g3))
    }

    #[test]
    fn real_split_case() {
        let s = sv(real(16.0), ZERO);
        let want = [2.0, 0.0, -2.0];
        for (got, w) in s.values.iter().zip(want) {
            assert!((got - real(w)).norm() < 1e-14, "{got}");
        }
        assert!(!s.degenerate);
    }

    #[test]
    fn cube_roots_of_unity() {
        let s = sv(ZERO, real(4.0));
        let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let want = [real(1.0), w, w.conj()];
        for (got, w) in s.values.iter().zip(want) {
            assert!((got - w).norm() < 1e-14, "{got} vs {w}");
        }
        let sum: C64 = s.values.iter().sum();
        assert!(sum.norm() < 1e-14);
    }

    #[test]
    fn degenerate_double_root() {
        // 4t³ − 3t − 1 = (t − 1)(2t + 1)²
        let s = sv(real(3.0), real(1.0));
        assert!(s.degenerate);
        let m = s.with_multiplicity();
        assert_eq!(m.len(), 2);
        assert!((m[0].0 - real(1.0)).norm() < 1e-12 && m[0].1 == 1);
        assert!((m[1].0 - real(-0.5)).norm() < 1e-7 && m[1].1 == 2);
    }

    #[test]
    fn roots_reconstruct_cubic() {
        for (g2, g3) in [(c(1.0, 2.0), c(-0.5, 0.3)), (c(-7.0, 0.0), c(2.0, 0.0)), (ZERO, c(0.0, 3.0))] {
            let s = sv(g2, g3);
            let [a, b, cc] = s.values;
            // 4(t−a)(t−b)(t−c) = 4t³ − 4(ab+bc+ca)... compare with −g2, −g3
            let e2 = a * b + b * cc + a * cc;
            let e3 = a * b * cc;
            assert!((a + b + cc).norm() < 1e-13);
            assert!((4.0 * e2 + g2).norm() < 1e-12 * (1.0 + g2.norm()));
            assert!((4.0 * e3 - g3).norm() < 1e-12 * (1.0 + g3.norm()));
        }
    }
}
