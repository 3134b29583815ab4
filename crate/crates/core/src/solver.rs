//! Construction of exact solutions for each canonical kind.

use thiserror::Error;

use crate::complex::{principal_root, rel_diff, ExtendedComplex, C64, I, ONE, ZERO};
use crate::elliptic::WeierstrassInvariants;
use crate::equations::{
    classify, elementary_symmetric, q_factor, transform_equation, CanonicalForm, CanonicalKind,
    ClassifyError, EquationError, SchwarzianEquation, TypeICoefficients,
};
use crate::mobius::MobiusTransform;
use crate::solution::{
    EllipticFractionalSolution, ExpSolution, PreparedSolution, Solution, SolutionError, TrigSolution,
    WpFamily, WpRationalSolution,
};
use crate::verify::{residual_report, ResidualReport, VerifyOptions};

/// Relative tolerance for each of the five r-relations.
pub const RELATION_TOL: f64 = 1e-8;
/// Relative tolerance for σ patterns.
const SIGMA_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("no solution: {reason}")]
    NoSolution { reason: String, diagnostics: Vec<String> },
    #[error("degenerate relations: every bracket factor vanishes")]
    DegenerateRelations,
    #[error("unresolved: {0}")]
    Unresolved(String),
    #[error("no transcendental solution: {0}")]
    NoTranscendental(String),
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
    #[error("constructed solution failed certification (max relative residual {})", .0.max_rel_residual)]
    CertificationFailed(Box<ResidualReport>),
    #[error("not canonical: {0}")]
    NotCanonical(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Solution(#[from] SolutionError),
}

impl From<EquationError> for SolverError {
    fn from(e: EquationError) -> Self {
        SolverError::InvalidArgument(e.to_string())
    }
}

impl From<ClassifyError> for SolverError {
    fn from(e: ClassifyError) -> Self {
        SolverError::NotCanonical(e.to_string())
    }
}

/// The brackets Vⱼ(τ) with rⱼ = (b/qᵢ)·Vⱼ for every admissible i.
pub fn relation_brackets(tau: &[C64; 4]) -> [C64; 5] {
    let [e1, e2, e3, e4] = elementary_symmetric(tau);
    [
        (3.0 * e3 * e3 - 8.0 * e2 * e4) / 2.0,
        2.0 * (6.0 * e1 * e4 - e2 * e3),
        2.0 * e2 * e2 - 3.0 * e1 * e3 - 24.0 * e4,
        2.0 * (6.0 * e3 - e1 * e2),
        (3.0 * e1 * e1 - 8.0 * e2) / 2.0,
    ]
}

/// d, g₂, g₃ and the closed-form discriminant for a = τᵢ and a given b.
fn type1_parameters(tau: &[C64; 4], i: usize, b: C64) -> Result<(C64, WeierstrassInvariants, C64), SolverError> {
    let q = q_factor(tau, i)?;
    let [e1, e2, e3, e4] = elementary_symmetric(tau);
    let ti = tau[i - 1];
    let others: Vec<C64> = (0..4).filter(|&j| j != i - 1).map(|j| tau[j]).collect();
    let mut pair_sum = ZERO;
    for j in 0..3 {
        for k in j + 1..3 {
            pair_sum += (others[j] - others[k]).powi(2);
        }
    }
    let spoke_sum: C64 = others.iter().map(|t| (ti - t).powi(2)).sum();
    let d = b / (6.0 * q) * (pair_sum - 2.0 * spoke_sum);
    let bq = b / q;
    let g2 = 4.0 * bq * bq / 3.0 * (e2 * e2 - 3.0 * e1 * e3 + 12.0 * e4);
    let g3 = 4.0 * bq * bq * bq / 27.0
        * (2.0 * e2 * e2 * e2 - 9.0 * e1 * e2 * e3 - 72.0 * e2 * e4 + 27.0 * e3 * e3 + 27.0 * e1 * e1 * e4);
    let mut vandermonde = ONE;
    for j in 0..4 {
        for k in j + 1..4 {
            vandermonde *= (tau[j] - tau[k]).powi(2);
        }
    }
    let delta = 16.0 * bq.powi(6) * vandermonde;
    Ok((d, WeierstrassInvariants::new(g2, g3), delta))
}

fn check_discriminant(inv: &WeierstrassInvariants, delta: C64) -> Result<(), SolverError> {
    if inv.is_degenerate() {
        return Err(SolverError::InternalConsistency("degenerate lattice: Δ = 0".into()));
    }
    let computed = inv.discriminant();
    let scale = delta
        .norm()
        .max(inv.g2.norm().powi(3))
        .max(27.0 * inv.g3.norm_sqr());
    if (computed - delta).norm() > 1e-8 * scale {
        return Err(SolverError::InternalConsistency(format!(
            "g2^3 - 27 g3^2 = {computed} differs from the closed form {delta}"
        )));
    }
    Ok(())
}

/// Forward direction: the r-vector and the solution for a = τᵢ, z₀ = 0.
pub fn generate_type1(
    tau: [C64; 4],
    i: usize,
    b: C64,
) -> Result<(TypeICoefficients, EllipticFractionalSolution), SolverError> {
    if b == ZERO {
        return Err(SolverError::InvalidArgument("b must be nonzero".into()));
    }
    let q = q_factor(&tau, i)?;
    let v = relation_brackets(&tau);
    let r = v.map(|vj| b / q * vj);
    let coeffs = TypeICoefficients::new(r, tau)?;
    let (d, inv, delta) = type1_parameters(&tau, i, b)?;
    check_discriminant(&inv, delta)?;
    Ok((
        coeffs,
        EllipticFractionalSolution {
            a: tau[i - 1],
            b,
            d,
            z0: ZERO,
            inv,
        },
    ))
}

/// Solve for a = τᵢ with a fixed index `i` in 1..=4.
pub fn solve_type1_at(coeffs: &TypeICoefficients, i: usize) -> Result<EllipticFractionalSolution, SolverError> {
    let tau = coeffs.tau;
    let v = relation_brackets(&tau);
    let vscale = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let tscale = tau.iter().map(|t| t.norm()).fold(1.0, f64::max);
    if vscale <= 1e-12 * tscale.powi(4) {
        return Err(SolverError::DegenerateRelations);
    }
    let q = q_factor(&tau, i)?;
    // b from the largest of the r₄, r₃, r₁, r₀ brackets, or from r₂ when
    // those four all vanish
    let mut j = [4, 3, 1, 0]
        .into_iter()
        .max_by(|x, y| v[*x].norm().total_cmp(&v[*y].norm()))
        .expect("non-empty");
    if v[j].norm() <= 1e-12 * vscale {
        j = 2;
    }
    let b = q * coeffs.r[j] / v[j];
    let rscale = coeffs.scale();
    let mut diagnostics = Vec::new();
    for (k, (rk, vk)) in coeffs.r.iter().zip(v).enumerate() {
        let res = (rk - b / q * vk).norm();
        if res > RELATION_TOL * rscale {
            diagnostics.push(format!("i = {i}: relation r{k} off by {:.3e} (relative)", res / rscale));
        }
    }
    if b == ZERO {
        diagnostics.push(format!("i = {i}: b = 0"));
    }
    if !diagnostics.is_empty() {
        return Err(SolverError::NoSolution {
            reason: format!("parameter relations fail for a = τ{i}"),
            diagnostics,
        });
    }
    let (d, inv, delta) = type1_parameters(&tau, i, b)?;
    check_discriminant(&inv, delta)?;
    Ok(EllipticFractionalSolution {
        a: tau[i - 1],
        b,
        d,
        z0: ZERO,
        inv,
    })
}

/// Every index with its outcome.
pub fn solve_type1_candidates(
    coeffs: &TypeICoefficients,
) -> Vec<(usize, Result<EllipticFractionalSolution, SolverError>)> {
    (1..=4).map(|i| (i, solve_type1_at(coeffs, i))).collect()
}

/// The first index i whose relations hold.
pub fn solve_type1(coeffs: &TypeICoefficients) -> Result<EllipticFractionalSolution, SolverError> {
    let mut diagnostics = Vec::new();
    for (_, outcome) in solve_type1_candidates(coeffs) {
        match outcome {
            Ok(s) => return Ok(s),
            Err(SolverError::NoSolution { diagnostics: d, .. }) => diagnostics.extend(d),
            Err(e) => return Err(e),
        }
    }
    Err(SolverError::NoSolution {
        reason: "no index i satisfies all five parameter relations".into(),
        diagnostics,
    })
}

fn sigma_matches(sigma: &[C64], want: C64) -> bool {
    if sigma.len() != 2 {
        return false;
    }
    let tol = SIGMA_TOL * want.norm().max(1.0);
    let close = |x: C64, y: C64| (x - y).norm() <= tol;
    (close(sigma[0], want) && close(sigma[1], -want)) || (close(sigma[0], -want) && close(sigma[1], want))
}

fn family_pattern(family: WpFamily) -> (C64, [C64; 3], &'static str) {
    match family {
        WpFamily::II => (
            I * 5f64.sqrt(),
            [C64::new(4.0, 0.0), C64::new(-3.0, 0.0), ZERO],
            "sigma pattern inadmissible: solutions need {σ1, σ2} = {±√5 i} at τ = (4, -3, 0)",
        ),
        WpFamily::III => (
            I / 3f64.sqrt(),
            [ONE, ZERO, -ONE],
            "sigma pattern inadmissible: solutions need {σ1, σ2} = {±i/√3} at τ = {0, 1, -1}",
        ),
        WpFamily::IV => (
            I * 0.5,
            [ZERO, ONE, -ONE],
            "sigma pattern inadmissible: solutions need {σ1, σ2} = {±i/2} at τ = (0, 1, -1)",
        ),
    }
}

fn solve_family(family: WpFamily, c: C64, sigma: [C64; 2]) -> Result<WpRationalSolution, SolverError> {
    let (want, _, reason) = family_pattern(family);
    if c == ZERO {
        return Err(SolverError::NoTranscendental("c = 0".into()));
    }
    if !sigma_matches(&sigma, want) {
        return Err(SolverError::NoSolution {
            reason: reason.into(),
            diagnostics: vec![format!("sigma = {{{}, {}}}", sigma[0], sigma[1])],
        });
    }
    Ok(WpRationalSolution::new(family, c, None)?)
}

/// Kind II at τ = (4, −3, 0).
pub fn solve_type2(c: C64, sigma: [C64; 2]) -> Result<WpRationalSolution, SolverError> {
    solve_family(WpFamily::II, c, sigma)
}

/// Kind III at τ = {0, 1, −1}.
pub fn solve_type3(c: C64, sigma: [C64; 2]) -> Result<WpRationalSolution, SolverError> {
    solve_family(WpFamily::III, c, sigma)
}

/// Kind IV at τ = (0, 1, −1).
pub fn solve_type4(c: C64, sigma: [C64; 2]) -> Result<WpRationalSolution, SolverError> {
    solve_family(WpFamily::IV, c, sigma)
}

fn finite_sigma(form: &CanonicalForm) -> Result<[C64; 2], SolverError> {
    let s: Vec<C64> = form.sigma.iter().filter_map(|s| s.finite()).collect();
    s.try_into()
        .map_err(|_| SolverError::InvalidArgument("expected two finite σ".into()))
}

/// Kinds II–IV at arbitrary τ: move τ to the normalized positions with a
/// Möbius map m, solve there, and return the solution composed with m.
pub fn solve_wp_kind(eq: &SchwarzianEquation, form: &CanonicalForm) -> Result<WpRationalSolution, SolverError> {
    let family = match form.kind {
        CanonicalKind::II => WpFamily::II,
        CanonicalKind::III => WpFamily::III,
        CanonicalKind::IV => WpFamily::IV,
        k => return Err(SolverError::InvalidArgument(format!("kind {k} is not II, III or IV"))),
    };
    let (_, standard, reason) = family_pattern(family);
    let tau: [C64; 3] = form
        .tau
        .clone()
        .try_into()
        .map_err(|_| SolverError::InvalidArgument("expected three τ".into()))?;
    let m = MobiusTransform::from_three_points(standard, tau)
        .map_err(|e| SolverError::InvalidArgument(e.to_string()))?;
    let at_standard = tau.iter().zip(standard).all(|(t, s)| (t - s).norm() <= 1e-12);
    let (c, sigma) = if at_standard {
        (form.c, finite_sigma(form)?)
    } else {
        // σ pulled back through m; c from the leading coefficients of R∘m
        let back = m.inverse();
        let mut sigma = [ZERO; 2];
        for (slot, s) in sigma.iter_mut().zip(finite_sigma(form)?) {
            *slot = back.apply_finite(s).finite().ok_or_else(|| SolverError::NoSolution {
                reason: reason.into(),
                diagnostics: vec![format!("σ = {s} is sent to infinity by the normalization")],
            })?;
        }
        let moved = transform_equation(eq, &m)?;
        let (num, den) = (moved.r.numerator(), moved.r.denominator());
        if num.degree() != den.degree() {
            return Err(SolverError::NoSolution {
                reason: reason.into(),
                diagnostics: vec!["normalized equation changed shape".into()],
            });
        }
        (num.leading() / den.leading(), sigma)
    };
    let mut s = solve_family(family, c, sigma)?;
    if !at_standard {
        s.outer = m;
    }
    Ok(s)
}

/// Kind V: sin solutions when the σ pattern is {±√2 i} after moving τ to ±1.
pub fn solve_type5(c: C64, form: &CanonicalForm) -> Result<TrigSolution, SolverError> {
    if form.kind != CanonicalKind::V {
        return Err(SolverError::InvalidArgument(format!("kind {} is not V", form.kind)));
    }
    let (t1, t2) = (form.tau[0], form.tau[1]);
    // m(1) = τ₁, m(−1) = τ₂
    let m = MobiusTransform::affine((t1 - t2) / 2.0, (t1 + t2) / 2.0)
        .map_err(|e| SolverError::InvalidArgument(e.to_string()))?;
    let back = m.inverse();
    let sigma: Vec<C64> = form
        .sigma
        .iter()
        .map(|s| back.apply(*s).finite().unwrap_or(C64::new(f64::INFINITY, 0.0)))
        .collect();
    if c == ZERO {
        return Err(SolverError::NoTranscendental("c = 0".into()));
    }
    if !sigma_matches(&sigma, I * 2f64.sqrt()) {
        return Err(SolverError::Unresolved(format!(
            "normalized sigma {{{}, {}}} is not {{±√2 i}}; solutions without a Picard exceptional value are not characterized",
            sigma[0], sigma[1]
        )));
    }
    Ok(TrigSolution {
        alpha: (2.0 * c).sqrt(),
        beta: ZERO,
        outer: m,
    })
}

/// Kind VI, S^p = A: u = e^{αz} with α = √(−2·A^{1/p}).
pub fn solve_type6(a: C64, p: u32) -> Result<ExpSolution, SolverError> {
    if p == 0 {
        return Err(SolverError::InvalidArgument("p must be positive".into()));
    }
    if a == ZERO {
        return Err(SolverError::NoTranscendental(
            "S = 0 forces a Möbius map, which is rational".into(),
        ));
    }
    let w = -2.0 * principal_root(a, p);
    // drop a signed zero so that the principal square root is taken
    let w = C64::new(w.re + 0.0, w.im + 0.0);
    Ok(ExpSolution {
        alpha: w.sqrt(),
        outer: MobiusTransform::identity(),
    })
}

/// First-order equation u'ⁿ = K ∏(u − ρₖ)^{mₖ}.
#[derive(Debug, Clone, PartialEq)]
pub struct SubequationSpec {
    pub n: u32,
    pub k: C64,
    pub factors: Vec<(C64, u32)>,
}

impl SubequationSpec {
    pub fn new(n: u32, k: C64, factors: Vec<(C64, u32)>) -> Result<Self, SolverError> {
        if k == ZERO {
            return Err(SolverError::InvalidArgument("K = 0 describes constant u only".into()));
        }
        let mut m: Vec<u32> = factors.iter().map(|f| f.1).collect();
        m.sort_unstable();
        let ok = match n {
            2 => m == [1, 1, 1, 1],
            3 => m == [2, 2, 2],
            4 => m == [2, 3, 3],
            6 => m == [3, 4, 5],
            _ => false,
        };
        if !ok {
            return Err(SolverError::InvalidArgument(format!(
                "multiplicities {m:?} do not fit n = {n}"
            )));
        }
        Ok(SubequationSpec { n, k, factors })
    }

    /// u'² = K∏(u − τⱼ) with K = −4b/qᵢ.
    pub fn type1(tau: &[C64; 4], i: usize, b: C64) -> Result<Self, SolverError> {
        let q = q_factor(tau, i)?;
        Self::new(2, -4.0 * b / q, tau.iter().map(|t| (*t, 1)).collect())
    }

    /// The subequation satisfied by a family II–IV solution at the
    /// normalized τ (no outer map).
    pub fn for_family(s: &WpRationalSolution) -> Result<Self, SolverError> {
        let r = |x: f64| C64::new(x, 0.0);
        match s.family {
            WpFamily::II => Self::new(6, -s.c / 2744.0, vec![(r(4.0), 3), (r(-3.0), 4), (ZERO, 5)]),
            WpFamily::III => {
                let l = s.l.expect("family III carries L");
                Self::new(3, l.powi(3), vec![(ZERO, 2), (ONE, 2), (-ONE, 2)])
            }
            WpFamily::IV => {
                let l = s.l.expect("family IV carries L");
                Self::new(4, l.powi(4), vec![(ZERO, 2), (ONE, 3), (-ONE, 3)])
            }
        }
    }

    /// Ratio u'ⁿ/∏(u − ρₖ)^{mₖ} at a point, the K a solution would need.
    pub fn fitted_constant(prepared: &PreparedSolution, n: u32, factors: &[(C64, u32)], z: C64) -> Result<C64, SolutionError> {
        let [u, u1, _, _] = prepared.jet(z)?.derivatives();
        let prod: C64 = factors.iter().map(|(r, m)| (u - r).powu(*m)).product();
        Ok(u1.powu(n) / prod)
    }
}

/// u'(z)ⁿ − K ∏(u(z) − ρₖ)^{mₖ}.
pub fn subequation_residual(
    prepared: &PreparedSolution,
    spec: &SubequationSpec,
    z: C64,
) -> Result<C64, SolutionError> {
    let [u, u1, _, _] = prepared.jet(z)?.derivatives();
    let prod: C64 = spec.factors.iter().map(|(r, m)| (u - r).powu(*m)).product();
    Ok(u1.powu(spec.n) - spec.k * prod)
}

/// Options for [`solve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub z0: C64,
    pub beta: C64,
    /// For kind I: pick a = τᵢ closest to this value instead of the first
    /// consistent index.
    pub a: Option<C64>,
    pub certification: VerifyOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            z0: ZERO,
            beta: ZERO,
            a: None,
            certification: VerifyOptions {
                samples: 50,
                ..VerifyOptions::default()
            },
        }
    }
}

/// A certified solution.
#[derive(Debug, Clone, PartialEq)]
pub struct Solved {
    pub form: CanonicalForm,
    pub solution: Solution,
    pub report: ResidualReport,
}

/// Classify, construct and certify.
pub fn solve(eq: &SchwarzianEquation, opts: &SolveOptions) -> Result<Solved, SolverError> {
    let form = classify(eq)?;
    let solution = match form.kind {
        CanonicalKind::I => {
            let coeffs = TypeICoefficients::from_equation(eq)?;
            let mut s = match opts.a {
                Some(a) => {
                    let (i, t) = coeffs
                        .tau
                        .iter()
                        .enumerate()
                        .min_by(|x, y| (x.1 - a).norm().total_cmp(&(y.1 - a).norm()))
                        .expect("four τ");
                    if rel_diff(*t, a) > 1e-6 {
                        return Err(SolverError::InvalidArgument(format!("a = {a} is not one of the τ values")));
                    }
                    solve_type1_at(&coeffs, i + 1)?
                }
                None => solve_type1(&coeffs)?,
            };
            s.z0 = opts.z0;
            Solution::EllipticFractional(s)
        }
        CanonicalKind::II | CanonicalKind::III | CanonicalKind::IV => {
            let mut s = solve_wp_kind(eq, &form)?;
            s.z0 = opts.z0;
            Solution::WpRational(s)
        }
        CanonicalKind::V => {
            let mut s = solve_type5(form.c, &form)?;
            s.beta = opts.beta;
            Solution::Trig(s).translated(opts.z0)
        }
        CanonicalKind::VI => Solution::Exp(solve_type6(form.c, eq.p)?),
    };
    let prepared = PreparedSolution::new(solution)?;
    let mut cert = opts.certification;
    cert.samples = cert.samples.max(50);
    let report = residual_report(&prepared, eq, &cert);
    if !report.pass {
        return Err(SolverError::CertificationFailed(Box::new(report)));
    }
    Ok(Solved {
        form,
        solution,
        report,
    })
}

/// σ values of a form as finite numbers, with ∞ mapped to a non-finite
/// placeholder for display.
pub fn display_sigma(form: &CanonicalForm) -> Vec<String> {
    form.sigma
        .iter()
        .map(|s| match s {
            ExtendedComplex::Finite(z) => z.to_string(),
            ExtendedComplex::Infinity => "inf".into(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{c, real};

    fn tau_examples() -> [C64; 4] {
        [ZERO, ONE, -ONE, real(-1.0 / 3.0)]
    }

    #[test]
    fn example_one_parameters() {
        let r = [0.5, 2.0, 7.0, 10.0, 12.5].map(real);
        let coeffs = TypeICoefficients::new(r, tau_examples()).unwrap();
        let s = solve_type1(&coeffs).unwrap();
        assert!(s.a.norm() < 1e-15);
        assert!((s.b - real(-1.0)).norm() < 1e-12);
        assert!((s.d - real(1.0)).norm() < 1e-12);
        assert!((s.inv.g2 - real(16.0)).norm() < 1e-11);
        assert!(s.inv.g3.norm() < 1e-11);
    }

    #[test]
    fn example_two_through_generate() {
        let (coeffs, s) = generate_type1(tau_examples(), 2, real(16.0)).unwrap();
        assert!((s.d - real(-12.0)).norm() < 1e-12);
        assert!((s.inv.g2 - real(64.0)).norm() < 1e-10);
        let want = [1.0, 4.0, 14.0, 20.0, 25.0];
        for (x, w) in coeffs.r.iter().zip(want) {
            assert!((x - real(w)).norm() < 1e-12, "{x}");
        }
    }

    #[test]
    fn perturbed_relations_are_rejected() {
        let mut r = [0.5, 2.0, 7.0, 10.0, 12.5].map(real);
        r[2] += 1e-3;
        let coeffs = TypeICoefficients::new(r, tau_examples()).unwrap();
        assert!(matches!(solve_type1(&coeffs), Err(SolverError::NoSolution { .. })));
    }

    #[test]
    fn generate_is_linear_in_b() {
        let tau = [c(0.3, 1.0), c(-1.0, 0.2), c(2.0, -0.5), c(0.1, 0.1)];
        let (c1, s1) = generate_type1(tau, 3, c(0.7, 0.4)).unwrap();
        let (c2, s2) = generate_type1(tau, 3, c(1.4, 0.8)).unwrap();
        for (x, y) in c1.r.iter().zip(c2.r.iter()) {
            assert!((2.0 * x - y).norm() < 1e-12 * y.norm().max(1.0));
        }
        assert!((4.0 * s1.inv.g2 - s2.inv.g2).norm() < 1e-12 * s2.inv.g2.norm().max(1.0));
        assert!((8.0 * s1.inv.g3 - s2.inv.g3).norm() < 1e-12 * s2.inv.g3.norm().max(1.0));
    }

    #[test]
    fn family_patterns() {
        let s = solve_type2(real(10584.0), [I * 5f64.sqrt(), -I * 5f64.sqrt()]).unwrap();
        assert!((s.inv.g3 - ONE).norm() < 1e-14 && s.inv.g2 == ZERO);
        assert!(solve_type2(real(10584.0), [ONE, real(2.0)]).is_err());
        assert!(solve_type3(real(1.0), [I, -I]).is_err());
        assert!(solve_type4(real(1.0), [I, -I]).is_err());
        let s = solve_type4(real(2.25), [I * 0.5, -I * 0.5]).unwrap();
        assert!((s.l.unwrap() - ONE).norm() < 1e-14);
        assert!((s.inv.g2 - real(-1.0 / 16.0)).norm() < 1e-15);
        let s = solve_type3(real(-64.0 / 27.0), [I / 3f64.sqrt(), -I / 3f64.sqrt()]).unwrap();
        assert!((s.l.unwrap() - ONE).norm() < 1e-14);
        assert!((s.inv.g3 - real(-64.0 / 27.0 / 432.0)).norm() < 1e-15);
    }

    #[test]
    fn exponential_branch() {
        assert!((solve_type6(real(-0.5), 1).unwrap().alpha - ONE).norm() < 1e-15);
        assert!((solve_type6(real(-2.0), 1).unwrap().alpha - real(2.0)).norm() < 1e-15);
        let a = solve_type6(real(0.25), 2).unwrap().alpha;
        assert!((a - I).norm() < 1e-15, "{a}");
        let s = -a * a / 2.0;
        assert!((s * s - real(0.25)).norm() < 1e-15);
        assert!(matches!(solve_type6(ZERO, 1), Err(SolverError::NoTranscendental(_))));
    }

    #[test]
    fn subequation_guards() {
        assert!(SubequationSpec::new(2, ZERO, vec![(ONE, 1); 4]).is_err());
        assert!(SubequationSpec::new(3, ONE, vec![(ONE, 1); 4]).is_err());
        assert!(SubequationSpec::new(6, ONE, vec![(ONE, 5), (ZERO, 3), (I, 4)]).is_ok());
    }

    fn form(kind: CanonicalKind, p: u32, cc: C64, sigma: &[C64], tau: &[C64]) -> SchwarzianEquation {
        CanonicalForm {
            kind,
            p,
            c: cc,
            sigma: sigma.iter().map(|s| ExtendedComplex::Finite(*s)).collect(),
            tau: tau.to_vec(),
        }
        .to_equation()
        .unwrap()
    }

    #[test]
    fn solves_and_certifies_every_kind() {
        let opts = SolveOptions::default();
        let r = [0.5, 2.0, 7.0, 10.0, 12.5].map(real);
        let eq = TypeICoefficients::new(r, tau_examples()).unwrap().to_equation().unwrap();
        assert!(solve(&eq, &opts).unwrap().report.pass);

        let s5 = I * 5f64.sqrt();
        let eq = form(CanonicalKind::II, 3, real(10584.0), &[s5, -s5], &[real(4.0), real(-3.0), ZERO]);
        assert!(solve(&eq, &opts).unwrap().report.pass);

        let s3 = I / 3f64.sqrt();
        let eq = form(CanonicalKind::III, 3, real(-1.0), &[s3, -s3], &[ZERO, ONE, -ONE]);
        assert!(solve(&eq, &opts).unwrap().report.pass);

        let eq = form(CanonicalKind::IV, 2, c(0.7, 0.2), &[I * 0.5, -I * 0.5], &[ZERO, ONE, -ONE]);
        assert!(solve(&eq, &opts).unwrap().report.pass);

        let s2 = I * 2f64.sqrt();
        let eq = form(CanonicalKind::V, 1, real(0.5), &[s2, -s2], &[ONE, -ONE]);
        assert!(solve(&eq, &opts).unwrap().report.pass);

        let eq = SchwarzianEquation::from_coefficients(2, vec![real(0.25)], vec![ONE]).unwrap();
        assert!(solve(&eq, &opts).unwrap().report.pass);
    }

    #[test]
    fn moved_tau_is_normalized() {
        let m = MobiusTransform::new(c(1.0, 0.5), real(2.0), c(0.2, 0.0), ONE).unwrap();
        let opts = SolveOptions::default();
        let s2 = I * 0.5;
        let eq = form(CanonicalKind::IV, 2, real(1.3), &[s2, -s2], &[ZERO, ONE, -ONE]);
        let moved = transform_equation(&eq, &m.inverse()).unwrap();
        let solved = solve(&moved, &opts).unwrap();
        assert!(solved.report.pass, "{:?}", solved.report);
    }
}
