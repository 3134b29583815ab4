//! Carlson's symmetric integral of the first kind for complex arguments.

use crate::complex::{C64, ZERO};

use super::EllipticError;

const ERRTOL: f64 = 1.0e-3;
const MAX_ITER: usize = 200;

/// R_F(x, y, z) = ½ ∫₀^∞ dt / √((t+x)(t+y)(t+z)) by the duplication iteration.
///
/// Arguments must lie off the closed negative real axis, with at most one of
/// them zero. The truncation error after convergence is below 1e-15 relative.
pub fn carlson_rf(x: C64, y: C64, z: C64) -> Result<C64, EllipticError> {
    let args = [x, y, z];
    if args.iter().any(|a| !crate::complex::is_finite(*a)) {
        return Err(EllipticError::InvalidArgument("R_F argument is not finite".into()));
    }
    if args.iter().filter(|a| **a == ZERO).count() > 1 {
        return Err(EllipticError::InvalidArgument(
            "R_F needs at most one zero argument".into(),
        ));
    }
    if args.iter().any(|a| on_cut(*a)) {
        return Err(EllipticError::InvalidArgument(
            "R_F argument on the negative real axis".into(),
        ));
    }

    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..MAX_ITER {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lambda = sx * sy + sx * sz + sy * sz;
        x = (x + lambda) * 0.25;
        y = (y + lambda) * 0.25;
        z = (z + lambda) * 0.25;
        let mean = (x + y + z) / 3.0;
        let dx = (mean - x) / mean;
        let dy = (mean - y) / mean;
        let dz = (mean - z) / mean;
        if dx.norm().max(dy.norm()).max(dz.norm()) < ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            let series = 1.0 + (e2 / 24.0 - 0.1 - 3.0 / 44.0 * e3) * e2 + e3 / 14.0;
            return Ok(series / mean.sqrt());
        }
    }
    Err(EllipticError::NoConvergence("R_F duplication"))
}

fn on_cut(a: C64) -> bool {
    a.re < 0.0 && a.im.abs() <= 1e-14 * a.re.abs()
}

/// R_F evaluated along a rotated integration ray when an argument sits on
/// (or next to) the branch cut: `λ^{1/2} R_F(λx, λy, λz)` with `|λ| = 1`.
///
/// The result is the same path integral taken along a different ray, so it
/// agrees with R_F up to sign and a period. That is all the inversion of ℘
/// needs.
pub fn carlson_rf_rotated(x: C64, y: C64, z: C64) -> Result<C64, EllipticError> {
    let clearance = |rot: C64| -> f64 {
        [x, y, z]
            .iter()
            .filter(|a| **a != ZERO)
            .map(|a| std::f64::consts::PI - (a * rot).arg().abs())
            .fold(f64::INFINITY, f64::min)
    };
    if clearance(C64::new(1.0, 0.0)) > 0.2 {
        return carlson_rf(x, y, z);
    }
    let best = (0..16)
        .map(|k| C64::from_polar(1.0, std::f64::consts::PI * k as f64 / 8.0))
        .max_by(|a, b| clearance(*a).total_cmp(&clearance(*b)))
        .expect("non-empty rotation set");
    Ok(best.sqrt() * carlson_rf(best * x, best * y, best * z)?)
}
