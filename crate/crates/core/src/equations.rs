//! Autonomous Schwarzian equations S(u, z)^p = P(u)/Q(u) and their canonical
//! shapes.
//!
//! | kind | p | Q multiplicities | P |
//! |------|---|------------------|---|
//! | I    | 1 | (1, 1, 1, 1)     | degree ≤ 4 |
//! | II   | 3 | (3, 2, 1)        | (3, 3) or (6) |
//! | III  | 3 | (2, 2, 2)        | (3, 3) or (6) |
//! | IV   | 2 | (2, 1, 1)        | (2, 2) or (4) |
//! | V    | 1 | (1, 1)           | degree 2 |
//! | VI   | any | constant       | constant |

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{cmp_desc, ExtendedComplex, C64, ONE, ZERO};
use crate::mobius::MobiusTransform;
use crate::poly::{PolynomialC, RootError, CLUSTER_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EquationError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("ambiguous root multiplicity near {0}")]
    AmbiguousMultiplicity(C64),
}

impl From<RootError> for EquationError {
    fn from(e: RootError) -> Self {
        match e {
            RootError::AmbiguousMultiplicity(z) => EquationError::AmbiguousMultiplicity(z),
            RootError::ZeroPolynomial => EquationError::InvalidArgument(e.to_string()),
        }
    }
}

/// P/Q with common roots cancelled.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFunctionC {
    numerator: PolynomialC,
    denominator: PolynomialC,
}

impl RationalFunctionC {
    pub fn new(numerator: PolynomialC, denominator: PolynomialC) -> Result<Self, EquationError> {
        if denominator.is_zero() {
            return Err(EquationError::InvalidArgument("zero denominator".into()));
        }
        if !numerator.is_finite() || !denominator.is_finite() {
            return Err(EquationError::InvalidArgument("non-finite coefficient".into()));
        }
        let (mut num, mut den) = (numerator, denominator);
        if num.degree().unwrap_or(0) > 0 && den.degree().unwrap_or(0) > 0 {
            let nr = num.roots_with_multiplicity()?;
            let dr = den.roots_with_multiplicity()?;
            for (r, a) in &nr {
                let tol = 1e-6 * r.norm().max(1.0);
                if let Some((s, b)) = dr.iter().find(|(s, _)| (s - r).norm() <= tol) {
                    let common = (r + s) / 2.0;
                    for _ in 0..(*a).min(*b) {
                        num = num.deflate(common);
                        den = den.deflate(common);
                    }
                }
            }
        }
        Ok(RationalFunctionC {
            numerator: num,
            denominator: den,
        })
    }

    pub fn constant(v: C64) -> Self {
        RationalFunctionC {
            numerator: PolynomialC::constant(v),
            denominator: PolynomialC::constant(ONE),
        }
    }

    pub fn numerator(&self) -> &PolynomialC {
        &self.numerator
    }

    pub fn denominator(&self) -> &PolynomialC {
        &self.denominator
    }

    /// Degree of the numerator, with −∞ (the zero polynomial) read as 0.
    fn num_degree(&self) -> usize {
        self.numerator.degree().unwrap_or(0)
    }

    fn den_degree(&self) -> usize {
        self.denominator.degree().unwrap_or(0)
    }

    /// R(w) on the extended plane.
    pub fn eval(&self, w: ExtendedComplex) -> ExtendedComplex {
        match w {
            ExtendedComplex::Infinity => {
                if self.numerator.is_zero() {
                    return ExtendedComplex::Finite(ZERO);
                }
                let (n, d) = (self.num_degree(), self.den_degree());
                if n > d {
                    ExtendedComplex::Infinity
                } else if n == d {
                    ExtendedComplex::from(self.numerator.leading() / self.denominator.leading())
                } else {
                    ExtendedComplex::Finite(ZERO)
                }
            }
            ExtendedComplex::Finite(w) => {
                let q = self.denominator.eval(w);
                if q == ZERO {
                    ExtendedComplex::Infinity
                } else {
                    ExtendedComplex::from(self.numerator.eval(w) / q)
                }
            }
        }
    }

    pub fn eval_finite(&self, w: C64) -> ExtendedComplex {
        self.eval(ExtendedComplex::Finite(w))
    }

    pub fn is_constant(&self) -> bool {
        self.num_degree() == 0 && self.den_degree() == 0
    }
}

/// R(f) as a free function.
pub fn eval_r(r: &RationalFunctionC, w: ExtendedComplex) -> ExtendedComplex {
    r.eval(w)
}

/// S(u, z)^p = R(u).
#[derive(Debug, Clone, PartialEq)]
pub struct SchwarzianEquation {
    pub p: u32,
    pub r: RationalFunctionC,
}

impl SchwarzianEquation {
    pub fn new(p: u32, r: RationalFunctionC) -> Result<Self, EquationError> {
        if p == 0 {
            return Err(EquationError::InvalidArgument("exponent p must be positive".into()));
        }
        Ok(SchwarzianEquation { p, r })
    }

    pub fn from_coefficients(
        p: u32,
        numerator: Vec<C64>,
        denominator: Vec<C64>,
    ) -> Result<Self, EquationError> {
        Self::new(
            p,
            RationalFunctionC::new(PolynomialC::new(numerator), PolynomialC::new(denominator))?,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CanonicalKind {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

impl CanonicalKind {
    /// The exponent p fixed by the shape; `None` for VI.
    pub fn exponent(self) -> Option<u32> {
        match self {
            CanonicalKind::I | CanonicalKind::V => Some(1),
            CanonicalKind::II | CanonicalKind::III => Some(3),
            CanonicalKind::IV => Some(2),
            CanonicalKind::VI => None,
        }
    }

    /// Multiplicities of the τ factors in the denominator, in τ order.
    pub fn tau_multiplicities(self) -> &'static [u32] {
        match self {
            CanonicalKind::I => &[1, 1, 1, 1],
            CanonicalKind::II => &[3, 2, 1],
            CanonicalKind::III => &[2, 2, 2],
            CanonicalKind::IV => &[2, 1, 1],
            CanonicalKind::V => &[1, 1],
            CanonicalKind::VI => &[],
        }
    }

    /// Power carried by each σ factor in the numerator.
    pub fn sigma_power(self) -> u32 {
        match self {
            CanonicalKind::II | CanonicalKind::III => 3,
            CanonicalKind::IV => 2,
            _ => 1,
        }
    }

    pub fn sigma_count(self) -> usize {
        match self {
            CanonicalKind::I => 4,
            CanonicalKind::VI => 0,
            _ => 2,
        }
    }
}

impl fmt::Display for CanonicalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A canonical equation S(u)^p = c ∏(u − σⱼ)^{k}/∏(u − τⱼ)^{mⱼ}.
///
/// For kind I a σ at infinity stands for a missing numerator factor. For kind
/// VI, `c` is the constant right-hand side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub kind: CanonicalKind,
    pub p: u32,
    pub c: C64,
    pub sigma: Vec<ExtendedComplex>,
    pub tau: Vec<C64>,
}

impl CanonicalForm {
    pub fn validate(&self) -> Result<(), EquationError> {
        let bad = |m: String| Err(EquationError::InvalidArgument(m));
        let k = self.kind;
        if let Some(p) = k.exponent() {
            if self.p != p {
                return bad(format!("kind {k} needs p = {p}, got {}", self.p));
            }
        } else if self.p == 0 {
            return bad("exponent p must be positive".into());
        }
        if self.tau.len() != k.tau_multiplicities().len() {
            return bad(format!("kind {k} needs {} τ values", k.tau_multiplicities().len()));
        }
        if self.sigma.len() != k.sigma_count() {
            return bad(format!("kind {k} needs {} σ values", k.sigma_count()));
        }
        if k != CanonicalKind::I && self.sigma.iter().any(|s| s.is_infinite()) {
            return bad(format!("kind {k} needs finite σ"));
        }
        if !distinct(&self.tau) {
            return bad("τ values must be distinct".into());
        }
        Ok(())
    }

    pub fn to_equation(&self) -> Result<SchwarzianEquation, EquationError> {
        self.validate()?;
        let k = self.kind;
        let mut num = PolynomialC::constant(self.c);
        for s in self.sigma.iter().filter_map(|s| s.finite()) {
            num = &num * &PolynomialC::linear(s).pow(k.sigma_power());
        }
        let mut den = PolynomialC::constant(ONE);
        for (t, m) in self.tau.iter().zip(k.tau_multiplicities()) {
            den = &den * &PolynomialC::linear(*t).pow(*m);
        }
        Ok(SchwarzianEquation {
            p: self.p,
            r: RationalFunctionC::new(num, den)?,
        })
    }
}

fn distinct(v: &[C64]) -> bool {
    v.iter().enumerate().all(|(i, a)| {
        v.iter()
            .skip(i + 1)
            .all(|b| (a - b).norm() > 1e-12 * a.norm().max(b.norm()).max(1.0))
    })
}

/// Observed shape of an equation that matched no canonical form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Signature {
    pub p: u32,
    pub numerator_degree: Option<usize>,
    pub denominator_degree: usize,
    pub numerator_multiplicities: Vec<usize>,
    pub denominator_multiplicities: Vec<usize>,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let deg = self
            .numerator_degree
            .map_or("-inf".to_string(), |d| d.to_string());
        write!(
            f,
            "p = {}, numerator degree {deg} with root multiplicities {:?}, denominator degree {} with root multiplicities {:?}",
            self.p, self.numerator_multiplicities, self.denominator_degree, self.denominator_multiplicities
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("not canonical: {0}")]
    NotCanonical(Signature),
    #[error("ambiguous root multiplicity near {0}")]
    AmbiguousMultiplicity(C64),
}

fn grouped_roots(p: &PolynomialC) -> Result<Vec<(C64, usize)>, ClassifyError> {
    if p.degree().unwrap_or(0) == 0 {
        return Ok(vec![]);
    }
    let mut roots = p.roots_with_multiplicity().map_err(|e| match e {
        RootError::AmbiguousMultiplicity(z) => ClassifyError::AmbiguousMultiplicity(z),
        RootError::ZeroPolynomial => unreachable!("degree checked"),
    })?;
    roots.sort_by(|a, b| b.1.cmp(&a.1).then(cmp_desc(a.0, b.0)));
    Ok(roots)
}

/// Match the equation against the six canonical shapes. No Möbius change of
/// variable is searched for.
pub fn classify(eq: &SchwarzianEquation) -> Result<CanonicalForm, ClassifyError> {
    let (num, den) = (eq.r.numerator(), eq.r.denominator());
    let nroots = grouped_roots(num)?;
    let droots = grouped_roots(den)?;
    let npat: Vec<usize> = nroots.iter().map(|r| r.1).collect();
    let dpat: Vec<usize> = droots.iter().map(|r| r.1).collect();
    let ndeg = num.degree();
    let c = if num.is_zero() { ZERO } else { num.leading() / den.leading() };

    let expand = |roots: &[(C64, usize)], per: usize| -> Vec<ExtendedComplex> {
        let mut out: Vec<C64> = Vec::new();
        for (r, m) in roots {
            for _ in 0..m / per {
                out.push(*r);
            }
        }
        out.sort_by(|a, b| cmp_desc(*a, *b));
        out.into_iter().map(ExtendedComplex::Finite).collect()
    };
    let taus = |sorted: bool| -> Vec<C64> {
        let mut t: Vec<C64> = droots.iter().map(|r| r.0).collect();
        if sorted {
            t.sort_by(|a, b| cmp_desc(*a, *b));
        } else if t.len() > 1 {
            // leading entries fixed by multiplicity; equal-multiplicity tail sorted
            let first_simple = droots.iter().position(|r| r.1 == droots.last().unwrap().1).unwrap();
            t[first_simple..].sort_by(|a, b| cmp_desc(*a, *b));
        }
        t
    };
    let form = |kind: CanonicalKind, sigma: Vec<ExtendedComplex>, tau: Vec<C64>| CanonicalForm {
        kind,
        p: eq.p,
        c,
        sigma,
        tau,
    };
    let pat = |v: &[usize]| npat.as_slice() == v;

    let found = match (eq.p, dpat.as_slice()) {
        (_, []) if ndeg.unwrap_or(0) == 0 => {
            Some(form(CanonicalKind::VI, vec![], vec![]))
        }
        (1, [1, 1, 1, 1]) if ndeg.unwrap_or(0) <= 4 && !num.is_zero() => {
            let mut sigma = expand(&nroots, 1);
            sigma.resize(4, ExtendedComplex::Infinity);
            Some(form(CanonicalKind::I, sigma, taus(true)))
        }
        (1, [1, 1]) if ndeg == Some(2) => Some(form(CanonicalKind::V, expand(&nroots, 1), taus(true))),
        (3, [3, 2, 1]) if pat(&[3, 3]) || pat(&[6]) => {
            Some(form(CanonicalKind::II, expand(&nroots, 3), taus(false)))
        }
        (3, [2, 2, 2]) if pat(&[3, 3]) || pat(&[6]) => {
            Some(form(CanonicalKind::III, expand(&nroots, 3), taus(true)))
        }
        (2, [2, 1, 1]) if pat(&[2, 2]) || pat(&[4]) => {
            Some(form(CanonicalKind::IV, expand(&nroots, 2), taus(false)))
        }
        _ => None,
    };
    found.ok_or_else(|| {
        ClassifyError::NotCanonical(Signature {
            p: eq.p,
            numerator_degree: ndeg,
            denominator_degree: den.degree().unwrap_or(0),
            numerator_multiplicities: npat,
            denominator_multiplicities: dpat,
        })
    })
}

/// The equation for v when u = m(v): S(v)^p = R(m(v)).
pub fn transform_equation(
    eq: &SchwarzianEquation,
    m: &MobiusTransform,
) -> Result<SchwarzianEquation, EquationError> {
    let [a, b, c, d] = m.coefficients();
    let (num, den) = (eq.r.numerator(), eq.r.denominator());
    let n = num.degree().unwrap_or(0).max(den.degree().unwrap_or(0));
    let top = PolynomialC::new(vec![b, a]);
    let bottom = PolynomialC::new(vec![d, c]);
    // Σ pₖ (av + b)ᵏ (cv + d)^{n−k}
    let homogenize = |p: &PolynomialC| -> PolynomialC {
        p.coefficients()
            .iter()
            .enumerate()
            .fold(PolynomialC::zero(), |acc, (k, pk)| {
                let term = (&top.pow(k as u32) * &bottom.pow((n - k) as u32)).scale(*pk);
                &acc + &term
            })
            .trim_relative(1e-13)
    };
    let r = RationalFunctionC::new(homogenize(num), homogenize(den))?;
    SchwarzianEquation::new(eq.p, r)
}

/// (e₁, e₂, e₃, e₄) of four values.
pub fn elementary_symmetric(tau: &[C64; 4]) -> [C64; 4] {
    let [t1, t2, t3, t4] = *tau;
    [
        t1 + t2 + t3 + t4,
        t1 * t2 + t1 * t3 + t1 * t4 + t2 * t3 + t2 * t4 + t3 * t4,
        t1 * t2 * t3 + t1 * t2 * t4 + t1 * t3 * t4 + t2 * t3 * t4,
        t1 * t2 * t3 * t4,
    ]
}

/// qᵢ = ∏_{j≠i}(τᵢ − τⱼ) for `i` in 1..=4.
pub fn q_factor(tau: &[C64; 4], i: usize) -> Result<C64, EquationError> {
    if !(1..=4).contains(&i) {
        return Err(EquationError::InvalidArgument(format!("index {i} outside 1..=4")));
    }
    if !distinct(tau) {
        return Err(EquationError::InvalidArgument("τ values must be distinct".into()));
    }
    let ti = tau[i - 1];
    Ok(tau
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i - 1)
        .map(|(_, t)| ti - t)
        .product())
}

/// Numerator coefficients r₀ … r₄ of a type I equation written over the monic
/// denominator ∏(u − τⱼ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TypeICoefficients {
    pub r: [C64; 5],
    pub tau: [C64; 4],
}

impl TypeICoefficients {
    pub fn new(r: [C64; 5], tau: [C64; 4]) -> Result<Self, EquationError> {
        if !distinct(&tau) {
            return Err(EquationError::InvalidArgument("τ values must be distinct".into()));
        }
        if r.iter().all(|x| *x == ZERO) {
            return Err(EquationError::InvalidArgument("r-vector is zero".into()));
        }
        Ok(TypeICoefficients { r, tau })
    }

    /// From an equation of kind I: r is P divided by the leading coefficient of Q.
    pub fn from_equation(eq: &SchwarzianEquation) -> Result<Self, EquationError> {
        let form = classify(eq).map_err(|e| EquationError::InvalidArgument(e.to_string()))?;
        if form.kind != CanonicalKind::I {
            return Err(EquationError::InvalidArgument(format!(
                "expected kind I, found kind {}",
                form.kind
            )));
        }
        let lead = eq.r.denominator().leading();
        let mut r = [ZERO; 5];
        for (k, x) in eq.r.numerator().coefficients().iter().enumerate() {
            r[k] = x / lead;
        }
        Self::new(r, form.tau.try_into().expect("kind I has four τ"))
    }

    pub fn from_form(form: &CanonicalForm) -> Result<Self, EquationError> {
        if form.kind != CanonicalKind::I {
            return Err(EquationError::InvalidArgument(format!(
                "expected kind I, found kind {}",
                form.kind
            )));
        }
        form.validate()?;
        let finite: Vec<C64> = form.sigma.iter().filter_map(|s| s.finite()).collect();
        let num = PolynomialC::from_roots(&finite).scale(form.c);
        let mut r = [ZERO; 5];
        for (k, x) in num.coefficients().iter().enumerate() {
            r[k] = *x;
        }
        Self::new(r, form.tau.clone().try_into().expect("kind I has four τ"))
    }

    pub fn to_equation(&self) -> Result<SchwarzianEquation, EquationError> {
        SchwarzianEquation::new(
            1,
            RationalFunctionC::new(PolynomialC::new(self.r.to_vec()), PolynomialC::from_roots(&self.tau))?,
        )
    }

    /// max |rⱼ|.
    pub fn scale(&self) -> f64 {
        self.r.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }
}

/// Whether two root values agree at the clustering tolerance.
pub fn same_root(a: C64, b: C64) -> bool {
    (a - b).norm() <= CLUSTER_TOL * a.norm().max(b.norm()).max(1.0)
}
