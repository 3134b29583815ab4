//! Dense complex polynomials and their roots.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::complex::{is_finite, C64, ONE, ZERO};
use crate::taylor::Taylor3;

/// Roots closer than this (relative to `max(1, |root|)`) are one root.
pub const CLUSTER_TOL: f64 = 1e-7;

/// Ascending coefficients with exact trailing zeros removed; the zero
/// polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<C64>", into = "Vec<C64>")]
pub struct PolynomialC {
    coeffs: Vec<C64>,
}

/// Roots with multiplicities, or the reason they could not be separated.
#[derive(Debug, Clone, PartialEq)]
pub enum RootError {
    /// Roots that are neither clearly equal nor clearly distinct.
    AmbiguousMultiplicity(C64),
    ZeroPolynomial,
}

impl std::fmt::Display for RootError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RootError::AmbiguousMultiplicity(z) => {
                write!(f, "ambiguous root multiplicity near {z}")
            }
            RootError::ZeroPolynomial => write!(f, "the zero polynomial has no root set"),
        }
    }
}

impl std::error::Error for RootError {}

impl PolynomialC {
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        PolynomialC { coeffs }
    }

    pub fn zero() -> Self {
        PolynomialC { coeffs: vec![] }
    }

    pub fn constant(v: C64) -> Self {
        Self::new(vec![v])
    }

    /// The monic linear factor u − r.
    pub fn linear(r: C64) -> Self {
        Self::new(vec![-r, ONE])
    }

    /// ∏(u − rₖ).
    pub fn from_roots(roots: &[C64]) -> Self {
        roots
            .iter()
            .fold(Self::constant(ONE), |acc, r| &acc * &Self::linear(*r))
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|z| is_finite(*z))
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> C64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops leading coefficients below `rel · max|coefficient|`.
    pub fn trim_relative(mut self, rel: f64) -> Self {
        let cut = rel * self.max_abs_coefficient();
        while self.coeffs.last().is_some_and(|c| c.norm() <= cut) {
            self.coeffs.pop();
        }
        self
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        self.scale(self.leading().inv())
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    pub fn eval_jet(&self, z: Taylor3) -> Taylor3 {
        self.coeffs
            .iter()
            .rev()
            .fold(Taylor3::constant(ZERO), |acc, c| acc * z + *c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(ONE), |acc, _| &acc * self)
    }

    /// Taylor coefficients about `c`: P(c + x) = Σ tₖ xᵏ.
    pub fn shifted(&self, c: C64) -> Self {
        let mut t = self.coeffs.clone();
        let n = t.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let hi = t[j + 1];
                t[j] += c * hi;
            }
        }
        Self::new(t)
    }

    /// Quotient by (u − r), remainder discarded.
    pub fn deflate(&self, r: C64) -> Self {
        let n = self.coeffs.len();
        if n <= 1 {
            return Self::zero();
        }
        let mut q = vec![ZERO; n - 1];
        let mut carry = ZERO;
        for k in (1..n).rev() {
            carry = self.coeffs[k] + carry * r;
            q[k - 1] = carry;
        }
        Self::new(q)
    }

    /// All roots, repeated by multiplicity, from the Aberth iteration.
    pub fn roots(&self) -> Vec<C64> {
        let Some(n) = self.degree() else {
            return vec![];
        };
        if n == 0 {
            return vec![];
        }
        // exact zero roots first; they would stall the iteration
        let lead_zeros = self.coeffs.iter().take_while(|c| **c == ZERO).count();
        if lead_zeros > 0 {
            let rest = Self::new(self.coeffs[lead_zeros..].to_vec());
            let mut out = vec![ZERO; lead_zeros];
            out.extend(rest.roots());
            return out;
        }
        let monic = self.monic();
        let a = monic.coefficients();
        if n == 1 {
            return vec![-a[0]];
        }
        let dp = monic.derivative();
        let bound = 1.0 + a[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let radius = a[..n]
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm().powf(1.0 / (n - k) as f64))
            .fold(0.0, f64::max)
            .clamp(1e-3, bound);
        let mut z: Vec<C64> = (0..n)
            .map(|k| C64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / n as f64))
            .collect();
        for _ in 0..5000 {
            let mut moved = 0.0f64;
            for i in 0..n {
                let p = monic.eval(z[i]);
                if p == ZERO {
                    continue;
                }
                let ratio = p / dp.eval(z[i]);
                let repulsion: C64 = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| {
                        let d = z[i] - z[j];
                        if d == ZERO {
                            ZERO
                        } else {
                            d.inv()
                        }
                    })
                    .sum();
                let step = ratio / (ONE - ratio * repulsion);
                if is_finite(step) {
                    z[i] -= step;
                    moved = moved.max(step.norm() / z[i].norm().max(1.0));
                }
            }
            if moved < 1e-16 {
                break;
            }
        }
        z
    }

    /// Distinct roots with multiplicities.
    ///
    /// A multiple root of multiplicity m is perturbed by about ε^{1/m} in
    /// floating point, so roots are first grouped with a loose radius and each
    /// group is accepted only if the Taylor coefficients of P about the group
    /// centre confirm the multiplicity; otherwise it is regrouped at a smaller
    /// radius. Groups that fail the test but whose members lie within
    /// [`CLUSTER_TOL`] of each other are still merged; members further apart than 100·[`CLUSTER_TOL`] are distinct roots and
    /// anything in between is reported as ambiguous.
    pub fn roots_with_multiplicity(&self) -> Result<Vec<(C64, usize)>, RootError> {
        if self.is_zero() {
            return Err(RootError::ZeroPolynomial);
        }
        let mut out = Vec::new();
        self.resolve_group(self.roots(), 5e-2, &mut out)?;
        for (r, _) in out.iter_mut() {
            *r = snap_negligible(*r);
        }
        Ok(out)
    }

    /// Single-linkage groups at `radius`; each group is confirmed as one
    /// multiple root or split again at a smaller radius.
    fn resolve_group(
        &self,
        points: Vec<C64>,
        radius: f64,
        out: &mut Vec<(C64, usize)>,
    ) -> Result<(), RootError> {
        for g in single_linkage(points, radius) {
            let m = g.len();
            let mean = g.iter().sum::<C64>() / m as f64;
            if m == 1 {
                out.push((mean, 1));
                continue;
            }
            let spread = g.iter().map(|x| (x - mean).norm()).fold(0.0, f64::max);
            let centre = polish_multiple(self, mean, m, radius);
            if spread <= CLUSTER_TOL * mean.norm().max(1.0) || self.confirms_multiplicity(centre, m) {
                out.push((centre, m));
            } else if radius / 8.0 > 100.0 * CLUSTER_TOL {
                self.resolve_group(g, radius / 8.0, out)?;
            } else if g
                .iter()
                .enumerate()
                .all(|(i, x)| g.iter().skip(i + 1).all(|y| !near_tol(*x, *y)))
            {
                out.extend(g.into_iter().map(|x| (x, 1)));
            } else {
                return Err(RootError::AmbiguousMultiplicity(mean));
            }
        }
        Ok(())
    }

    /// Taylor coefficients t₀ … t_{m−1} about `c`, scaled to the unit disk
    /// around `c`, are negligible against the largest one.
    fn confirms_multiplicity(&self, c: C64, m: usize) -> bool {
        let rho = c.norm().max(1.0);
        let t = self.shifted(c);
        let scaled: Vec<f64> = t
            .coefficients()
            .iter()
            .enumerate()
            .map(|(k, x)| x.norm() * rho.powi(k as i32))
            .collect();
        let top = scaled.iter().copied().fold(0.0, f64::max);
        // roundoff floor: the same expansion with all magnitudes added
        let magnitudes = PolynomialC::new(self.coeffs.iter().map(|x| C64::new(x.norm(), 0.0)).collect());
        let bound = magnitudes
            .shifted(C64::new(c.norm(), 0.0))
            .coefficients()
            .iter()
            .enumerate()
            .map(|(k, x)| x.norm() * rho.powi(k as i32))
            .fold(0.0, f64::max);
        let floor = 1e-12 * bound;
        scaled
            .iter()
            .take(m)
            .enumerate()
            .all(|(k, v)| *v <= (top * CLUSTER_TOL.powi((m - k) as i32)).max(floor))
    }
}

fn single_linkage(points: Vec<C64>, radius: f64) -> Vec<Vec<C64>> {
    let near = |x: C64, y: C64| (x - y).norm() <= radius * x.norm().max(y.norm()).max(1.0);
    let mut groups: Vec<Vec<C64>> = Vec::new();
    for r in points {
        let hits: Vec<usize> = groups
            .iter()
            .enumerate()
            .filter(|(_, g)| g.iter().any(|x| near(*x, r)))
            .map(|(k, _)| k)
            .collect();
        let mut merged = vec![r];
        for k in hits.iter().rev() {
            merged.extend(groups.remove(*k));
        }
        groups.push(merged);
    }
    groups
}

fn near_tol(x: C64, y: C64) -> bool {
    (x - y).norm() <= 100.0 * CLUSTER_TOL * x.norm().max(y.norm()).max(1.0)
}

/// Newton on P^{(m−1)}, whose root at a multiplicity-m zero is simple.
fn polish_multiple(p: &PolynomialC, mut z: C64, m: usize, radius: f64) -> C64 {
    let mut d = p.clone();
    for _ in 1..m {
        d = d.derivative();
    }
    let dd = d.derivative();
    for _ in 0..8 {
        let den = dd.eval(z);
        if den == ZERO {
            break;
        }
        let step = d.eval(z) / den;
        if !is_finite(step) || step.norm() > radius * z.norm().max(1.0) {
            break;
        }
        z -= step;
    }
    z
}

impl From<Vec<C64>> for PolynomialC {
    fn from(v: Vec<C64>) -> Self {
        PolynomialC::new(v)
    }
}

impl From<PolynomialC> for Vec<C64> {
    fn from(p: PolynomialC) -> Self {
        p.coeffs
    }
}

impl Add for &PolynomialC {
    type Output = PolynomialC;

    fn add(self, rhs: &PolynomialC) -> PolynomialC {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let get = |v: &[C64], k: usize| v.get(k).copied().unwrap_or(ZERO);
        PolynomialC::new((0..n).map(|k| get(&self.coeffs, k) + get(&rhs.coeffs, k)).collect())
    }
}

impl Neg for &PolynomialC {
    type Output = PolynomialC;

    fn neg(self) -> PolynomialC {
        self.scale(-ONE)
    }
}

impl Sub for &PolynomialC {
    type Output = PolynomialC;

    fn sub(self, rhs: &PolynomialC) -> PolynomialC {
        self + &(-rhs)
    }
}

impl Mul for &PolynomialC {
    type Output = PolynomialC;

    fn mul(self, rhs: &PolynomialC) -> PolynomialC {
        if self.is_zero() || rhs.is_zero() {
            return PolynomialC::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        PolynomialC::new(out)
    }
}

/// Zero a component below roundoff relative to the modulus.
fn snap_negligible(z: C64) -> C64 {
    let tol = 1e-15 * z.norm();
    C64::new(
        if z.re.abs() <= tol { 0.0 } else { z.re },
        if z.im.abs() <= tol { 0.0 } else { z.im },
    )
}
