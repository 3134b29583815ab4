//! Residual certification of a solution against an equation at seeded
//! generic points.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{ExtendedComplex, C64, ZERO};
use crate::equations::SchwarzianEquation;
use crate::schwarzian::schwarzian_of_jet;
use crate::solution::PreparedSolution;

/// Sampling and acceptance settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub samples: usize,
    pub tolerance: f64,
    pub seed: u64,
    /// Points closer than this to a pole or critical point are skipped.
    pub exclusion: f64,
    /// Points are drawn from the square [−h, h]².
    pub half_width: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 200,
            tolerance: 1e-6,
            seed: 42,
            exclusion: 1e-2,
            half_width: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub sample_count: usize,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    pub worst_point: C64,
    pub excluded_points: usize,
    pub pass: bool,
    pub tolerance: f64,
}

/// Seeded points of the sampling square at least `exclusion` away from the
/// known singular set, together with the number of rejected draws.
pub fn generic_points(prepared: &PreparedSolution, opts: &VerifyOptions) -> (Vec<C64>, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let h = opts.half_width;
    let mut points = Vec::with_capacity(opts.samples);
    let mut excluded = 0;
    let max_draws = 50 * opts.samples.max(1);
    for _ in 0..max_draws {
        if points.len() == opts.samples {
            break;
        }
        let z = C64::new(rng.gen_range(-h..h), rng.gen_range(-h..h));
        if prepared.singularity_distance(z) < opts.exclusion {
            excluded += 1;
        } else {
            points.push(z);
        }
    }
    (points, excluded)
}

/// |S(u, z)^p − R(u(z))| and the same divided by max(1, |R(u(z))|), or `None`
/// where the jet or R(u) is unavailable.
pub fn residual_at(prepared: &PreparedSolution, eq: &SchwarzianEquation, z: C64) -> Option<(f64, f64)> {
    let jet = prepared.jet(z).ok()?;
    let s = schwarzian_of_jet(&jet.into()).ok()?;
    let lhs = s.powu(eq.p);
    let rhs = match eq.r.eval_finite(jet.value()) {
        ExtendedComplex::Finite(v) => v,
        ExtendedComplex::Infinity => return None,
    };
    let abs = (lhs - rhs).norm();
    Some((abs, abs / rhs.norm().max(1.0)))
}

pub fn residual_report(
    prepared: &PreparedSolution,
    eq: &SchwarzianEquation,
    opts: &VerifyOptions,
) -> ResidualReport {
    let (points, mut excluded) = generic_points(prepared, opts);
    let mut count = 0;
    let (mut max_abs, mut max_rel, mut worst) = (0.0f64, 0.0f64, ZERO);
    for z in points {
        match residual_at(prepared, eq, z) {
            Some((abs, rel)) => {
                count += 1;
                max_abs = max_abs.max(abs);
                // NaN never compares greater, so fail it explicitly
                if rel > max_rel || rel.is_nan() {
                    max_rel = if rel.is_nan() { f64::INFINITY } else { rel };
                    worst = z;
                }
            }
            None => excluded += 1,
        }
    }
    ResidualReport {
        sample_count: count,
        max_abs_residual: max_abs,
        max_rel_residual: max_rel,
        worst_point: worst,
        excluded_points: excluded,
        pass: count > 0 && max_rel <= opts.tolerance,
        tolerance: opts.tolerance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{real, ONE};
    use crate::mobius::MobiusTransform;
    use crate::solution::{ExpSolution, Solution, TrigSolution};

    fn sine() -> PreparedSolution {
        PreparedSolution::new(Solution::Trig(TrigSolution { alpha: ONE, beta: ZERO, outer: MobiusTransform::identity() }))
            .unwrap()
    }

    #[test]
    fn points_are_seeded_and_avoid_singularities() {
        let p = sine();
        let opts = VerifyOptions { samples: 100, ..VerifyOptions::default() };
        let (a, _) = generic_points(&p, &opts);
        let (b, _) = generic_points(&p, &opts);
        assert_eq!(a, b);
        assert_eq!(a.len(), 100);
        assert!(a.iter().all(|z| p.singularity_distance(*z) >= opts.exclusion));
        assert!(a.iter().all(|z| z.re.abs() <= 2.0 && z.im.abs() <= 2.0));
    }

    #[test]
    fn report_passes_and_fails() {
        let p = PreparedSolution::new(Solution::Exp(ExpSolution { alpha: ONE, outer: MobiusTransform::identity() }))
            .unwrap();
        let good = SchwarzianEquation::from_coefficients(1, vec![real(-0.5)], vec![ONE]).unwrap();
        let r = residual_report(&p, &good, &VerifyOptions::default());
        assert!(r.pass && r.sample_count == 200 && r.max_rel_residual < 1e-12);
        let bad = SchwarzianEquation::from_coefficients(1, vec![real(-0.6)], vec![ONE]).unwrap();
        let r = residual_report(&p, &bad, &VerifyOptions::default());
        assert!(!r.pass);
        assert!((r.max_abs_residual - 0.1).abs() < 1e-12);
    }
}
