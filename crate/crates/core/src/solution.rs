//! Closed-form solution families and their jets.
//!
//! Every ℘-based family is u = γ(A(℘)·℘'^ε / B(℘)) at argument z − z₀, with
//! polynomials A, B, ε ∈ {0, 1} and an outer Möbius map γ:
//!
//! | family | A | B | ε |
//! |---|---|---|---|
//! | elliptic-fractional | a℘ − (ad + b) | ℘ − d | 0 |
//! | II | −3c | c − 74088℘³ | 0 |
//! | III | 81℘ + 9L² | 2L(81℘² − 9L²℘ + L⁴) | 1 |
//! | IV | −(8℘ + L²)² | 2L℘(64℘² + L⁴) | 1 |

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{principal_root, rel_diff, ExtendedComplex, C64, I, ONE, ZERO};
use crate::elliptic::{EllipticError, WeierstrassInvariants, WeierstrassP};
use crate::mobius::MobiusTransform;
use crate::poly::PolynomialC;
use crate::taylor::Taylor3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolutionError {
    #[error("pole of the construction at z = {z}; limit value {limit}")]
    Pole { z: C64, limit: ExtendedComplex },
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error("invalid solution: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WpFamily {
    II,
    III,
    IV,
}

/// u = a − b/(℘(z − z₀) − d).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticFractionalSolution {
    pub a: C64,
    pub b: C64,
    pub d: C64,
    pub z0: C64,
    pub inv: WeierstrassInvariants,
}

/// Rational expressions in ℘ and ℘' for equation kinds II–IV, in the
/// normalized τ positions, followed by `outer`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WpRationalSolution {
    pub family: WpFamily,
    /// Scale with L⁶ = −27c/64 (III) or c = 9L⁴/4 (IV); unused for II.
    pub l: Option<C64>,
    pub c: C64,
    pub z0: C64,
    pub inv: WeierstrassInvariants,
    pub outer: MobiusTransform,
}

impl WpRationalSolution {
    /// Principal-branch L when `l` is `None`.
    pub fn new(family: WpFamily, c: C64, l: Option<C64>) -> Result<Self, SolutionError> {
        if c == ZERO {
            return Err(SolutionError::Invalid("c must be nonzero".into()));
        }
        let (l, inv) = match family {
            WpFamily::II => (None, WeierstrassInvariants::new(ZERO, c / 10584.0)),
            WpFamily::III => {
                let l = l.unwrap_or_else(|| principal_root(-27.0 * c / 64.0, 6));
                (Some(l), WeierstrassInvariants::new(ZERO, c / 432.0))
            }
            WpFamily::IV => {
                let l = l.unwrap_or_else(|| principal_root(4.0 * c / 9.0, 4));
                (Some(l), WeierstrassInvariants::new(-c / 36.0, ZERO))
            }
        };
        let s = WpRationalSolution {
            family,
            l,
            c,
            z0: ZERO,
            inv,
            outer: MobiusTransform::identity(),
        };
        s.check_scale()?;
        Ok(s)
    }

    fn check_scale(&self) -> Result<(), SolutionError> {
        let ok = match (self.family, self.l) {
            (WpFamily::II, _) => true,
            (WpFamily::III, Some(l)) => rel_diff(l.powi(6), -27.0 * self.c / 64.0) <= 1e-9,
            (WpFamily::IV, Some(l)) => rel_diff(9.0 * l.powi(4) / 4.0, self.c) <= 1e-9,
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(SolutionError::Invalid(format!(
                "scale L = {:?} does not match c = {}",
                self.l, self.c
            )))
        }
    }

    /// (A, B, ε) of the table in the module docs.
    fn form(&self) -> (PolynomialC, PolynomialC, bool) {
        let c = self.c;
        match self.family {
            WpFamily::II => (
                PolynomialC::constant(-3.0 * c),
                PolynomialC::new(vec![c, ZERO, ZERO, C64::new(-74088.0, 0.0)]),
                false,
            ),
            WpFamily::III => {
                let l = self.l.expect("checked at construction");
                let l2 = l * l;
                (
                    PolynomialC::new(vec![9.0 * l2, C64::new(81.0, 0.0)]),
                    PolynomialC::new(vec![l2 * l2, -9.0 * l2, C64::new(81.0, 0.0)]).scale(2.0 * l),
                    true,
                )
            }
            WpFamily::IV => {
                let l = self.l.expect("checked at construction");
                let l2 = l * l;
                (
                    PolynomialC::new(vec![l2, C64::new(8.0, 0.0)]).pow(2).scale(-ONE),
                    PolynomialC::new(vec![ZERO, l2 * l2, ZERO, C64::new(64.0, 0.0)]).scale(2.0 * l),
                    true,
                )
            }
        }
    }
}

/// u = γ(sin(αz + β)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigSolution {
    pub alpha: C64,
    pub beta: C64,
    pub outer: MobiusTransform,
}

/// u = γ(e^{αz}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpSolution {
    pub alpha: C64,
    pub outer: MobiusTransform,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "SolutionDocument", try_from = "SolutionDocument")]
pub enum Solution {
    EllipticFractional(EllipticFractionalSolution),
    WpRational(WpRationalSolution),
    Trig(TrigSolution),
    Exp(ExpSolution),
}

impl Solution {
    pub fn family_name(&self) -> &'static str {
        match self {
            Solution::EllipticFractional(_) => "elliptic-fractional",
            Solution::WpRational(s) => match s.family {
                WpFamily::II => "wp-rational-II",
                WpFamily::III => "wp-rational-III",
                WpFamily::IV => "wp-rational-IV",
            },
            Solution::Trig(_) => "trig",
            Solution::Exp(_) => "exp",
        }
    }

    /// Whether the family can solve an equation with exponent `p`.
    pub fn accepts_exponent(&self, p: u32) -> bool {
        match self {
            Solution::EllipticFractional(_) | Solution::Trig(_) => p == 1,
            Solution::WpRational(s) => match s.family {
                WpFamily::II | WpFamily::III => p == 3,
                WpFamily::IV => p == 2,
            },
            Solution::Exp(_) => true,
        }
    }

    pub fn invariants(&self) -> Option<WeierstrassInvariants> {
        match self {
            Solution::EllipticFractional(s) => Some(s.inv),
            Solution::WpRational(s) => Some(s.inv),
            _ => None,
        }
    }

    pub fn outer(&self) -> MobiusTransform {
        match self {
            Solution::EllipticFractional(_) => MobiusTransform::identity(),
            Solution::WpRational(s) => s.outer,
            Solution::Trig(s) => s.outer,
            Solution::Exp(s) => s.outer,
        }
    }

    /// The same solution with z₀ (or β, or the exponential scale) shifted so
    /// that u_new(z) = u(z − shift).
    pub fn translated(&self, shift: C64) -> Solution {
        match *self {
            Solution::EllipticFractional(mut s) => {
                s.z0 += shift;
                Solution::EllipticFractional(s)
            }
            Solution::WpRational(mut s) => {
                s.z0 += shift;
                Solution::WpRational(s)
            }
            Solution::Trig(mut s) => {
                s.beta -= s.alpha * shift;
                Solution::Trig(s)
            }
            Solution::Exp(mut s) => {
                // e^{α(z − h)} = e^{−αh}·e^{αz}: absorb the factor into γ
                let k = (-s.alpha * shift).exp();
                s.outer = s.outer.compose(&MobiusTransform::affine(k, ZERO).expect("e^x ≠ 0"));
                Solution::Exp(s)
            }
        }
    }

    pub fn prepare(&self) -> Result<PreparedSolution, SolutionError> {
        PreparedSolution::new(*self)
    }
}

#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
enum Engine {
    Wp {
        wp: WeierstrassP,
        z0: C64,
        num: PolynomialC,
        den: PolynomialC,
        with_prime: bool,
        /// Preimages w with ℘(w) at a singular value; the singular set of u
        /// is ±w + lattice.
        singular_preimages: Vec<C64>,
        limit_at_lattice: ExtendedComplex,
    },
    Trig {
        alpha: C64,
        beta: C64,
        /// Points t of the singular set of sin-space, each with period π or 2π.
        singular: Vec<(C64, f64)>,
    },
    Exp {
        alpha: C64,
        /// Points of the singular set in t = αz space, period 2πi.
        singular: Vec<C64>,
    },
}

/// A solution with everything needed for repeated evaluation precomputed.
#[derive(Debug, Clone)]
pub struct PreparedSolution {
    solution: Solution,
    outer: MobiusTransform,
    engine: Engine,
}

impl PreparedSolution {
    pub fn new(solution: Solution) -> Result<Self, SolutionError> {
        let outer = solution.outer();
        // value of the inner function that γ sends to ∞
        let outer_pole = outer.inverse().apply(ExtendedComplex::Infinity).finite();
        let engine = match solution {
            Solution::EllipticFractional(s) => {
                if s.b == ZERO {
                    return Err(SolutionError::Invalid("b must be nonzero".into()));
                }
                let num = PolynomialC::new(vec![-(s.a * s.d + s.b), s.a]);
                let den = PolynomialC::new(vec![-s.d, ONE]);
                wp_engine(s.inv, s.z0, num, den, false, outer_pole)?
            }
            Solution::WpRational(s) => {
                s.check_scale()?;
                let (num, den, with_prime) = s.form();
                wp_engine(s.inv, s.z0, num, den, with_prime, outer_pole)?
            }
            Solution::Trig(s) => {
                if s.alpha == ZERO {
                    return Err(SolutionError::Invalid("alpha must be nonzero".into()));
                }
                let mut singular = vec![(C64::new(PI / 2.0, 0.0), PI)];
                if let Some(p) = outer_pole {
                    let t = p.asin();
                    singular.push((t, TAU));
                    singular.push((PI - t, TAU));
                }
                Engine::Trig {
                    alpha: s.alpha,
                    beta: s.beta,
                    singular,
                }
            }
            Solution::Exp(s) => {
                if s.alpha == ZERO {
                    return Err(SolutionError::Invalid("alpha must be nonzero".into()));
                }
                let singular = match outer_pole {
                    Some(p) if p != ZERO => vec![p.ln()],
                    _ => vec![],
                };
                Engine::Exp {
                    alpha: s.alpha,
                    singular,
                }
            }
        };
        Ok(PreparedSolution {
            solution,
            outer,
            engine,
        })
    }

    pub fn solution(&self) -> &Solution {
        &self.solution
    }

    pub fn weierstrass(&self) -> Option<&WeierstrassP> {
        match &self.engine {
            Engine::Wp { wp, .. } => Some(wp),
            _ => None,
        }
    }

    /// Jet of the inner function (before γ).
    fn inner_jet(&self, z: C64) -> Result<Taylor3, SolutionError> {
        match &self.engine {
            Engine::Wp {
                wp,
                z0,
                num,
                den,
                with_prime,
                limit_at_lattice,
                ..
            } => {
                let inner_limit = *limit_at_lattice;
                let p = wp.jet(z - z0).ok_or(SolutionError::Pole {
                    z,
                    limit: self.outer.apply(inner_limit),
                })?;
                let b = den.eval_jet(p);
                if b.value() == ZERO {
                    return Err(SolutionError::Pole {
                        z,
                        limit: self.outer.apply(ExtendedComplex::Infinity),
                    });
                }
                let mut u = num.eval_jet(p) / b;
                if *with_prime {
                    // ℘'''' = 12(℘'² + ℘℘'')
                    let [v, dv, d2v, _] = p.derivatives();
                    let dp = Taylor3::from_derivatives(dv, d2v, 12.0 * v * dv, 12.0 * (dv * dv + v * d2v));
                    u = u * dp;
                }
                Ok(u)
            }
            Engine::Trig { alpha, beta, .. } => {
                Ok((Taylor3::variable(z).scale(*alpha) + *beta).sin())
            }
            Engine::Exp { alpha, .. } => Ok(Taylor3::variable(z).scale(*alpha).exp()),
        }
    }

    /// (u, u', u'', u''') at `z`.
    pub fn jet(&self, z: C64) -> Result<Taylor3, SolutionError> {
        let inner = self.inner_jet(z)?;
        let out = if self.outer.is_identity(0.0) {
            inner
        } else {
            self.outer.apply_jet(inner).ok_or(SolutionError::Pole {
                z,
                limit: ExtendedComplex::Infinity,
            })?
        };
        if out.is_finite() {
            Ok(out)
        } else {
            Err(SolutionError::Pole {
                z,
                limit: ExtendedComplex::Infinity,
            })
        }
    }

    /// u(z) on the extended plane, using limit values at removable
    /// singularities of the construction.
    pub fn value(&self, z: C64) -> ExtendedComplex {
        match self.jet(z) {
            Ok(j) => ExtendedComplex::Finite(j.value()),
            Err(SolutionError::Pole { limit, .. }) => limit,
            Err(_) => ExtendedComplex::Infinity,
        }
    }

    /// Distance from `z` to the nearest pole of u or zero of u'.
    pub fn singularity_distance(&self, z: C64) -> f64 {
        match &self.engine {
            Engine::Wp {
                wp,
                z0,
                singular_preimages,
                ..
            } => {
                let lat = wp.lattice().expect("nondegenerate lattice");
                let w = z - z0;
                singular_preimages
                    .iter()
                    .map(|p| lat.distance(w - p).min(lat.distance(w + p)))
                    .fold(f64::INFINITY, f64::min)
            }
            Engine::Trig {
                alpha,
                beta,
                singular,
            } => {
                let t = alpha * z + beta;
                singular
                    .iter()
                    .map(|(s, period)| periodic_distance(t - s, C64::new(*period, 0.0)))
                    .fold(f64::INFINITY, f64::min)
                    / alpha.norm()
            }
            Engine::Exp { alpha, singular } => {
                let t = alpha * z;
                singular
                    .iter()
                    .map(|s| periodic_distance(t - s, I * TAU))
                    .fold(f64::INFINITY, f64::min)
                    / alpha.norm()
            }
        }
    }
}

/// Distance from `d` to the set period·ℤ.
fn periodic_distance(d: C64, period: C64) -> f64 {
    let k = (d / period).re.round();
    (d - period * k).norm()
}

fn wp_engine(
    inv: WeierstrassInvariants,
    z0: C64,
    num: PolynomialC,
    den: PolynomialC,
    with_prime: bool,
    outer_pole: Option<C64>,
) -> Result<Engine, SolutionError> {
    let wp = WeierstrassP::new(inv)?;
    let (g2, g3) = (inv.g2, inv.g3);
    // ℘'² and ℘'' as polynomials in ℘
    let cubic = PolynomialC::new(vec![-g3, -g2, ZERO, C64::new(4.0, 0.0)]);
    let second = PolynomialC::new(vec![-g2 / 2.0, ZERO, C64::new(6.0, 0.0)]);
    let wronskian = &(&num.derivative() * &den) - &(&num * &den.derivative());
    let critical = if with_prime {
        &(&wronskian * &cubic) + &(&(&num * &den) * &second)
    } else {
        wronskian
    };
    let mut values: Vec<C64> = Vec::new();
    values.extend(den.roots());
    values.extend(critical.trim_relative(1e-13).roots());
    values.extend(wp.lattice_data().expect("nondegenerate").stationary_values);
    if let Some(s) = outer_pole {
        let level = if with_prime {
            &(&num.pow(2) * &cubic) - &den.pow(2).scale(s * s)
        } else {
            &num - &den.scale(s)
        };
        values.extend(level.trim_relative(1e-13).roots());
    }
    let mut singular_preimages = vec![ZERO];
    for v in values {
        match wp.inverse(ExtendedComplex::Finite(v)) {
            Ok(w) => singular_preimages.push(w),
            Err(e) => log::warn!("no preimage for singular value {v}: {e}"),
        }
    }
    let limit_at_lattice = lattice_limit(&num, &den, with_prime);
    Ok(Engine::Wp {
        wp,
        z0,
        num,
        den,
        with_prime,
        singular_preimages,
        limit_at_lattice,
    })
}

/// lim A(℘)℘'^ε/B(℘) as ℘ → ∞, with ℘' ~ ℘^{3/2}.
fn lattice_limit(num: &PolynomialC, den: &PolynomialC, with_prime: bool) -> ExtendedComplex {
    let Some(n) = num.degree() else {
        return ExtendedComplex::Finite(ZERO);
    };
    let d = den.degree().unwrap_or(0);
    let (top, bottom) = if with_prime { (2 * n + 3, 2 * d) } else { (2 * n, 2 * d) };
    if top < bottom {
        ExtendedComplex::Finite(ZERO)
    } else if top > bottom {
        ExtendedComplex::Infinity
    } else {
        ExtendedComplex::Finite(num.leading() / den.leading())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "family")]
enum SolutionDocument {
    #[serde(rename = "elliptic-fractional")]
    EllipticFractional {
        a: C64,
        b: C64,
        d: C64,
        #[serde(default)]
        z0: C64,
        invariants: WeierstrassInvariants,
    },
    #[serde(rename = "wp-rational-II")]
    WpRationalII(WpDocument),
    #[serde(rename = "wp-rational-III")]
    WpRationalIII(WpDocument),
    #[serde(rename = "wp-rational-IV")]
    WpRationalIV(WpDocument),
    #[serde(rename = "trig")]
    Trig {
        alpha: C64,
        #[serde(default)]
        beta: C64,
        #[serde(default = "MobiusTransform::identity")]
        outer: MobiusTransform,
    },
    #[serde(rename = "exp")]
    Exp {
        alpha: C64,
        #[serde(default = "MobiusTransform::identity")]
        outer: MobiusTransform,
    },
}

#[derive(Serialize, Deserialize)]
struct WpDocument {
    c: C64,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    l: Option<C64>,
    #[serde(default)]
    z0: C64,
    #[serde(default = "MobiusTransform::identity")]
    outer: MobiusTransform,
    invariants: WeierstrassInvariants,
}

impl From<Solution> for SolutionDocument {
    fn from(s: Solution) -> Self {
        match s {
            Solution::EllipticFractional(s) => SolutionDocument::EllipticFractional {
                a: s.a,
                b: s.b,
                d: s.d,
                z0: s.z0,
                invariants: s.inv,
            },
            Solution::WpRational(s) => {
                let doc = WpDocument {
                    c: s.c,
                    l: s.l,
                    z0: s.z0,
                    outer: s.outer,
                    invariants: s.inv,
                };
                match s.family {
                    WpFamily::II => SolutionDocument::WpRationalII(doc),
                    WpFamily::III => SolutionDocument::WpRationalIII(doc),
                    WpFamily::IV => SolutionDocument::WpRationalIV(doc),
                }
            }
            Solution::Trig(s) => SolutionDocument::Trig {
                alpha: s.alpha,
                beta: s.beta,
                outer: s.outer,
            },
            Solution::Exp(s) => SolutionDocument::Exp {
                alpha: s.alpha,
                outer: s.outer,
            },
        }
    }
}

impl TryFrom<SolutionDocument> for Solution {
    type Error = SolutionError;

    fn try_from(doc: SolutionDocument) -> Result<Self, Self::Error> {
        let wp = |family: WpFamily, d: WpDocument| -> Result<Solution, SolutionError> {
            let mut s = WpRationalSolution::new(family, d.c, d.l)?;
            let same = rel_diff(s.inv.g2, d.invariants.g2) <= 1e-9 && rel_diff(s.inv.g3, d.invariants.g3) <= 1e-9;
            if !same {
                return Err(SolutionError::Invalid(format!(
                    "invariants ({}, {}) do not match c = {} (expected ({}, {}))",
                    d.invariants.g2, d.invariants.g3, d.c, s.inv.g2, s.inv.g3
                )));
            }
            s.z0 = d.z0;
            s.outer = d.outer;
            Ok(Solution::WpRational(s))
        };
        match doc {
            SolutionDocument::EllipticFractional { a, b, d, z0, invariants } => {
                if b == ZERO {
                    return Err(SolutionError::Invalid("b must be nonzero".into()));
                }
                Ok(Solution::EllipticFractional(EllipticFractionalSolution {
                    a,
                    b,
                    d,
                    z0,
                    inv: invariants,
                }))
            }
            SolutionDocument::WpRationalII(d) => wp(WpFamily::II, d),
            SolutionDocument::WpRationalIII(d) => wp(WpFamily::III, d),
            SolutionDocument::WpRationalIV(d) => wp(WpFamily::IV, d),
            SolutionDocument::Trig { alpha, beta, outer } => {
                if alpha == ZERO {
                    return Err(SolutionError::Invalid("alpha must be nonzero".into()));
                }
                Ok(Solution::Trig(TrigSolution { alpha, beta, outer }))
            }
            SolutionDocument::Exp { alpha, outer } => {
                if alpha == ZERO {
                    return Err(SolutionError::Invalid("alpha must be nonzero".into()));
                }
                Ok(Solution::Exp(ExpSolution { alpha, outer }))
            }
        }
    }
}
