//! The acceptance suite shared by `schwarzian selftest` and the `acceptance`
//! test target. Each criterion reports one pass/fail line with a short
//! detail string. Reference values here come from closed forms or from
//! oracles independent of the code under test.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cli::{self, CommonArgs};
use crate::complex::{c, real, rel_diff, ExtendedComplex, C64, I, ONE, ZERO};
use crate::elliptic::{half_periods, WeierstrassInvariants, WeierstrassP};
use crate::equations::{CanonicalForm, CanonicalKind, SchwarzianEquation, TypeICoefficients};
use crate::mobius::MobiusTransform;
use crate::schwarzian::{default_ring_radius, schwarzian_numeric, schwarzian_of_jet, DEFAULT_RING_SAMPLES};
use crate::solution::{EllipticFractionalSolution, PreparedSolution, Solution, WpFamily, WpRationalSolution};
use crate::solver::{
    generate_type1, solve_type1, solve_type1_candidates, solve_type2, solve_type3, solve_type4, solve_type5,
    solve_type6, subequation_residual, SolverError, SubequationSpec,
};
use crate::verify::{generic_points, residual_at, residual_report, VerifyOptions};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl CriterionResult {
    /// `PASS [n] name: detail`
    pub fn line(&self) -> String {
        format!(
            "{} [{}] {}: {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

type Check = Result<String, String>;

fn finish(id: u32, name: &'static str, check: Check) -> CriterionResult {
    let (pass, detail) = match check {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    CriterionResult { id, name, pass, detail }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn run_all() -> Vec<CriterionResult> {
    vec![
        finish(1, "worked kind I examples", worked_examples()),
        finish(2, "family II solution and sigma rejection", family_two()),
        finish(3, "family III solution", family_three()),
        finish(4, "family IV solution", family_four()),
        finish(5, "sin and exp solutions", trig_and_exp()),
        finish(6, "kind I generate/solve roundtrip", type1_roundtrip()),
        finish(7, "weierstrass engine invariants", weierstrass_engine()),
        finish(8, "mobius invariance", mobius_invariance()),
        finish(9, "rational fixed point of S", fixed_point()),
        finish(10, "negative controls", negative_controls()),
    ]
}

/// Raw coefficients (ascending) of the four worked equations and their
/// known solutions (a, b, d, g₂, g₃).
pub struct WorkedExample {
    pub numerator: [f64; 5],
    pub denominator: [f64; 5],
    pub a: f64,
    pub b: f64,
    pub d: f64,
    pub g2: f64,
    pub g3: f64,
}

pub const WORKED_EXAMPLES: [WorkedExample; 4] = [
    WorkedExample {
        numerator: [3.0, 12.0, 42.0, 60.0, 75.0],
        denominator: [0.0, -2.0, -6.0, 2.0, 6.0],
        a: 0.0,
        b: -1.0,
        d: 1.0,
        g2: 16.0,
        g3: 0.0,
    },
    WorkedExample {
        numerator: [3.0, 12.0, 42.0, 60.0, 75.0],
        denominator: [0.0, -1.0, -3.0, 1.0, 3.0],
        a: 1.0,
        b: 16.0,
        d: -12.0,
        g2: 64.0,
        g3: 0.0,
    },
    WorkedExample {
        numerator: [-3.0, -12.0, -42.0, -60.0, -75.0],
        denominator: [0.0, -1.0, -3.0, 1.0, 3.0],
        a: -1.0,
        b: 8.0,
        d: 8.0,
        g2: 64.0,
        g3: 0.0,
    },
    WorkedExample {
        numerator: [27.0, 108.0, 378.0, 540.0, 675.0],
        denominator: [0.0, -1.0, -3.0, 1.0, 3.0],
        a: -1.0 / 3.0,
        b: 16.0,
        d: 12.0,
        g2: 5184.0,
        g3: 0.0,
    },
];

impl WorkedExample {
    pub fn equation_json(&self) -> String {
        let enc = |v: &[f64; 5]| v.iter().map(|x| format!("[{x},0]")).collect::<Vec<_>>().join(",");
        format!(
            r#"{{"p":1,"numerator":[{}],"denominator":[{}]}}"#,
            enc(&self.numerator),
            enc(&self.denominator)
        )
    }

    pub fn equation(&self) -> SchwarzianEquation {
        SchwarzianEquation::from_coefficients(1, self.numerator.map(real).to_vec(), self.denominator.map(real).to_vec())
            .expect("valid example")
    }

    pub fn solution(&self) -> Solution {
        Solution::EllipticFractional(EllipticFractionalSolution {
            a: real(self.a),
            b: real(self.b),
            d: real(self.d),
            z0: ZERO,
            inv: WeierstrassInvariants::new(real(self.g2), real(self.g3)),
        })
    }

    pub fn solution_json(&self) -> String {
        serde_json::to_string(&self.solution()).expect("serializable")
    }
}

fn default_common() -> CommonArgs {
    CommonArgs { samples: 200, tol: 1e-6, seed: 42, z0: None, output: None }
}

fn worked_examples() -> Check {
    let mut worst = 0.0f64;
    let mut worst_res = 0.0f64;
    for (k, ex) in WORKED_EXAMPLES.iter().enumerate() {
        let n = k + 1;
        let a = format!("{}", ex.a);
        let out = cli::run(["schwarzian", "solve", &ex.equation_json(), "--a", &a]);
        ensure(out.code == 0, || format!("example {n}: solve exited {}: {}", out.code, out.stderr))?;
        let sol: Solution = serde_json::from_str(&out.stdout).map_err(|e| format!("example {n}: {e}"))?;
        let Solution::EllipticFractional(s) = sol else {
            return Err(format!("example {n}: unexpected family {}", sol.family_name()));
        };
        for (got, want, label) in [
            (s.a, ex.a, "a"),
            (s.b, ex.b, "b"),
            (s.d, ex.d, "d"),
            (s.inv.g2, ex.g2, "g2"),
            (s.inv.g3, ex.g3, "g3"),
        ] {
            let e = rel_diff(got, real(want));
            worst = worst.max(e);
            ensure(e <= 1e-9, || format!("example {n}: {label} = {got}, expected {want}"))?;
        }
        let out = cli::cmd_verify(&ex.equation_json(), &out.stdout, &default_common());
        ensure(out.code == 0, || format!("example {n}: verify exited {}", out.code))?;
        let report: crate::verify::ResidualReport =
            serde_json::from_str(&out.stdout).map_err(|e| e.to_string())?;
        ensure(report.sample_count == 200, || format!("example {n}: {} samples", report.sample_count))?;
        worst_res = worst_res.max(report.max_rel_residual);
    }
    Ok(format!(
        "parameters within {worst:.1e}, max residual {worst_res:.1e} over 200 points each"
    ))
}

fn form_equation(kind: CanonicalKind, cc: C64, sigma: [C64; 2], tau: &[C64]) -> SchwarzianEquation {
    CanonicalForm {
        kind,
        p: kind.exponent().unwrap_or(1),
        c: cc,
        sigma: sigma.iter().map(|s| ExtendedComplex::Finite(*s)).collect(),
        tau: tau.to_vec(),
    }
    .to_equation()
    .expect("valid canonical form")
}

fn certify(sol: Solution, eq: &SchwarzianEquation, samples: usize, tol: f64) -> Result<f64, String> {
    let prepared = PreparedSolution::new(sol).map_err(|e| e.to_string())?;
    let opts = VerifyOptions { samples, tolerance: tol, ..VerifyOptions::default() };
    let r = residual_report(&prepared, eq, &opts);
    ensure(r.pass && r.sample_count == samples, || {
        format!(
            "{}: {} points, max relative residual {:.3e} at {}",
            sol.family_name(),
            r.sample_count,
            r.max_rel_residual,
            r.worst_point
        )
    })?;
    Ok(r.max_rel_residual)
}

fn family_two() -> Check {
    let s5 = I * 5f64.sqrt();
    let cc = real(10584.0);
    let s = solve_type2(cc, [s5, -s5]).map_err(|e| e.to_string())?;
    ensure(s.inv.g2 == ZERO && rel_diff(s.inv.g3, ONE) <= 1e-15, || {
        format!("invariants ({}, {})", s.inv.g2, s.inv.g3)
    })?;
    let eq = form_equation(CanonicalKind::II, cc, [s5, -s5], &[real(4.0), real(-3.0), ZERO]);
    let res = certify(Solution::WpRational(s), &eq, 50, 1e-6)?;
    // first-order equation u'^6 = K u^5 (u-4)^3 (u+3)^4
    let spec = SubequationSpec::for_family(&s).map_err(|e| e.to_string())?;
    let sub = subequation_worst(Solution::WpRational(s), &spec, 50)?;
    ensure(sub <= 1e-6, || format!("subequation residual {sub:.3e}"))?;
    match solve_type2(cc, [real(1.0), real(2.0)]) {
        Err(SolverError::NoSolution { .. }) => {}
        other => return Err(format!("sigma = {{1, 2}} gave {other:?}")),
    }
    Ok(format!("inv = (0, 1), residual {res:.1e}, subequation {sub:.1e}, sigma {{1, 2}} rejected"))
}

fn subequation_worst(sol: Solution, spec: &SubequationSpec, samples: usize) -> Result<f64, String> {
    let prepared = PreparedSolution::new(sol).map_err(|e| e.to_string())?;
    let opts = VerifyOptions { samples, ..VerifyOptions::default() };
    let (points, _) = generic_points(&prepared, &opts);
    let mut worst = 0.0f64;
    for z in points {
        let jet = prepared.jet(z).map_err(|e| e.to_string())?;
        let scale = jet.derivatives()[1].norm().powi(spec.n as i32).max(1.0);
        let r = subequation_residual(&prepared, spec, z).map_err(|e| e.to_string())?;
        worst = worst.max(r.norm() / scale);
    }
    Ok(worst)
}

fn family_three() -> Check {
    let cc = real(-64.0 / 27.0);
    let s3 = I / 3f64.sqrt();
    let s = solve_type3(cc, [s3, -s3]).map_err(|e| e.to_string())?;
    let l = s.l.ok_or("missing L")?;
    ensure(rel_diff(l, ONE) <= 1e-14, || format!("L = {l}"))?;
    ensure(rel_diff(s.inv.g3, cc / 432.0) <= 1e-15 && s.inv.g2 == ZERO, || {
        format!("invariants ({}, {})", s.inv.g2, s.inv.g3)
    })?;
    // S^3 = c (u^2 + 1/3)^3 / (u^2 (u^2 - 1)^2), built from its expanded coefficients
    let num = [1.0 / 27.0, 0.0, 1.0 / 3.0, 0.0, 1.0, 0.0, 1.0].map(|x| cc * x).to_vec();
    let den = [0.0, 0.0, 1.0, 0.0, -2.0, 0.0, 1.0].map(real).to_vec();
    let eq = SchwarzianEquation::from_coefficients(3, num, den).map_err(|e| e.to_string())?;
    let res = certify(Solution::WpRational(s), &eq, 50, 1e-6)?;
    let spec = SubequationSpec::for_family(&s).map_err(|e| e.to_string())?;
    let sub = subequation_worst(Solution::WpRational(s), &spec, 50)?;
    ensure(sub <= 1e-6, || format!("subequation residual {sub:.3e}"))?;
    Ok(format!("L = 1, g3 = c/432, residual {res:.1e}, subequation {sub:.1e}"))
}

fn family_four() -> Check {
    let cc = real(2.25);
    let s = solve_type4(cc, [I * 0.5, -I * 0.5]).map_err(|e| e.to_string())?;
    ensure(rel_diff(s.l.ok_or("missing L")?, ONE) <= 1e-14, || "L != 1".into())?;
    ensure(rel_diff(s.inv.g2, real(-1.0 / 16.0)) <= 1e-15 && s.inv.g3 == ZERO, || {
        format!("invariants ({}, {})", s.inv.g2, s.inv.g3)
    })?;
    // S^2 = c (u^2 + 1/4)^2 / (u^2 (u^2 - 1))
    let num = [1.0 / 16.0, 0.0, 0.5, 0.0, 1.0].map(|x| cc * x).to_vec();
    let den = [0.0, 0.0, -1.0, 0.0, 1.0].map(real).to_vec();
    let eq = SchwarzianEquation::from_coefficients(2, num, den).map_err(|e| e.to_string())?;
    let res = certify(Solution::WpRational(s), &eq, 50, 1e-6)?;
    let spec = SubequationSpec::for_family(&s).map_err(|e| e.to_string())?;
    let sub = subequation_worst(Solution::WpRational(s), &spec, 50)?;
    ensure(sub <= 1e-6, || format!("subequation residual {sub:.3e}"))?;
    Ok(format!("inv = (-1/16, 0), residual {res:.1e}, subequation {sub:.1e}"))
}

fn trig_and_exp() -> Check {
    let s2 = I * 2f64.sqrt();
    let cc = real(0.5);
    let form = CanonicalForm {
        kind: CanonicalKind::V,
        p: 1,
        c: cc,
        sigma: vec![s2.into(), (-s2).into()],
        tau: vec![ONE, -ONE],
    };
    let trig = solve_type5(cc, &form).map_err(|e| e.to_string())?;
    ensure(rel_diff(trig.alpha, ONE) <= 1e-15 && trig.outer.is_identity(1e-12), || {
        format!("alpha = {}, outer = {}", trig.alpha, trig.outer)
    })?;
    // S(sin z) = (1/2)(u^2 + 2)/(u^2 - 1)
    let eq = SchwarzianEquation::from_coefficients(1, vec![real(1.0), ZERO, real(0.5)], vec![real(-1.0), ZERO, ONE])
        .map_err(|e| e.to_string())?;
    let r_sin = certify(Solution::Trig(trig), &eq, 200, 1e-8)?;

    let e = solve_type6(real(-0.5), 1).map_err(|e| e.to_string())?;
    ensure(rel_diff(e.alpha, ONE) <= 1e-15, || format!("alpha = {}", e.alpha))?;
    let eq = SchwarzianEquation::from_coefficients(1, vec![real(-0.5)], vec![ONE]).map_err(|e| e.to_string())?;
    let r_exp = certify(Solution::Exp(e), &eq, 200, 1e-10)?;

    let e2 = solve_type6(real(0.25), 2).map_err(|e| e.to_string())?;
    let eq = SchwarzianEquation::from_coefficients(2, vec![real(0.25)], vec![ONE]).map_err(|e| e.to_string())?;
    let r_p2 = certify(Solution::Exp(e2), &eq, 200, 1e-10)?;
    Ok(format!(
        "sin z residual {r_sin:.1e}, e^z residual {r_exp:.1e}, S^2 = 1/4 residual {r_p2:.1e} (alpha = {})",
        e2.alpha
    ))
}

fn random_c(rng: &mut ChaCha8Rng, h: f64) -> C64 {
    c(rng.gen_range(-h..h), rng.gen_range(-h..h))
}

fn random_tau(rng: &mut ChaCha8Rng) -> [C64; 4] {
    loop {
        let t = [0; 4].map(|_| random_c(rng, 2.0));
        let separated = (0..4).all(|j| (j + 1..4).all(|k| (t[j] - t[k]).norm() >= 0.25));
        if separated {
            return t;
        }
    }
}

fn type1_roundtrip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20240601);
    let (mut worst_param, mut worst_res, mut worst_sub, mut worst_delta) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for n in 0..100 {
        let tau = random_tau(&mut rng);
        let i = rng.gen_range(1..=4usize);
        let b = C64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..TAU));
        let (coeffs, gen) = generate_type1(tau, i, b).map_err(|e| format!("instance {n}: {e}"))?;
        let coeffs = TypeICoefficients::new(coeffs.r, coeffs.tau).map_err(|e| e.to_string())?;

        // the index used for generation is recovered exactly
        let (_, at_i) = solve_type1_candidates(&coeffs).swap_remove(i - 1);
        let rec = at_i.map_err(|e| format!("instance {n}, i = {i}: {e}"))?;
        for (x, y) in [(rec.a, gen.a), (rec.b, b), (rec.d, gen.d), (rec.inv.g2, gen.inv.g2), (rec.inv.g3, gen.inv.g3)] {
            worst_param = worst_param.max(rel_diff(x, y));
        }
        // the first consistent index agrees with the forward map at that index
        let first = solve_type1(&coeffs).map_err(|e| format!("instance {n}: {e}"))?;
        let j = tau.iter().position(|t| *t == first.a).ok_or("a is not a tau")? + 1;
        let (_, regen) = generate_type1(tau, j, first.b).map_err(|e| e.to_string())?;
        for (x, y) in [(first.d, regen.d), (first.inv.g2, regen.inv.g2), (first.inv.g3, regen.inv.g3)] {
            worst_param = worst_param.max(rel_diff(x, y));
        }

        // discriminant: direct against 16 b^6/q_i^6 prod (tau_j - tau_k)^2
        let qi: C64 = (0..4).filter(|&k| k != i - 1).map(|k| tau[i - 1] - tau[k]).product();
        let mut vdm = ONE;
        for j in 0..4 {
            for k in j + 1..4 {
                vdm *= (tau[j] - tau[k]).powi(2);
            }
        }
        let closed = 16.0 * (b / qi).powi(6) * vdm;
        let direct = gen.inv.g2.powi(3) - 27.0 * gen.inv.g3.powi(2);
        worst_delta = worst_delta.max((closed - direct).norm() / closed.norm());

        let eq = coeffs.to_equation().map_err(|e| e.to_string())?;
        let sol = Solution::EllipticFractional(gen);
        worst_res = worst_res.max(certify(sol, &eq, 50, 1e-6).map_err(|e| format!("instance {n}: {e}"))?);
        let spec = SubequationSpec::type1(&tau, i, b).map_err(|e| e.to_string())?;
        worst_sub = worst_sub.max(subequation_worst(sol, &spec, 50)?);
    }
    ensure(worst_param <= 1e-9, || format!("parameter recovery error {worst_param:.3e}"))?;
    ensure(worst_sub <= 1e-6, || format!("subequation residual {worst_sub:.3e}"))?;
    ensure(worst_delta <= 1e-8, || format!("discriminant mismatch {worst_delta:.3e}"))?;
    Ok(format!(
        "100 instances: recovery {worst_param:.1e}, residual {worst_res:.1e}, subequation {worst_sub:.1e}, discriminant {worst_delta:.1e}"
    ))
}

/// Real half-period for (g₂, g₃) = (4, 0) by quadrature: with t = 1 + tan²θ
/// the integral of dt/√(4t³ − 4t) over [1, ∞) becomes ∫₀^{π/2} dθ/√(1 + cos²θ),
/// whose periodic integrand makes the trapezoidal rule spectrally accurate.
pub fn lemniscatic_half_period_oracle() -> f64 {
    let n = 256;
    let h = FRAC_PI_2 / n as f64;
    let f = |t: f64| 1.0 / (1.0 + t.cos().powi(2)).sqrt();
    let inner: f64 = (1..n).map(|k| f(k as f64 * h)).sum();
    h * (inner + 0.5 * (f(0.0) + f(FRAC_PI_2)))
}

fn engine_invariants() -> Vec<WeierstrassInvariants> {
    let mut v = vec![
        WeierstrassInvariants::new(real(4.0), ZERO),
        WeierstrassInvariants::new(real(16.0), ZERO),
        WeierstrassInvariants::new(ZERO, ONE),
        WeierstrassInvariants::new(real(-1.0 / 16.0), ZERO),
        WeierstrassInvariants::new(c(1.0, 1.0), c(0.5, -0.3)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        v.push(WeierstrassInvariants::new(random_c(&mut rng, 8.0), random_c(&mut rng, 8.0)));
    }
    v
}

fn weierstrass_engine() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (mut ode, mut parity, mut dup, mut homog, mut period) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for inv in engine_invariants() {
        let wp = WeierstrassP::new(inv).map_err(|e| e.to_string())?;
        let raw = WeierstrassP::unreduced(inv).map_err(|e| e.to_string())?;
        let data = half_periods(&inv).map_err(|e| e.to_string())?;
        let lat = data.lattice();
        let scaled: Vec<(C64, WeierstrassP)> = [real(2.0), c(1.0, 1.0)]
            .into_iter()
            .map(|t| Ok((t, WeierstrassP::new(inv.scaled(t)).map_err(|e| e.to_string())?)))
            .collect::<Result<_, String>>()?;
        let mut used = 0;
        while used < 200 {
            let z = C64::from_polar(rng.gen_range(0.1..3.0), rng.gen_range(0.0..TAU));
            if lat.distance(z) < 1e-2 || lat.distance(2.0 * z) < 1e-2 {
                continue;
            }
            used += 1;
            let (p, dp) = wp.eval(z).ok_or("unexpected pole")?;
            let res = dp * dp - (4.0 * p * p * p - inv.g2 * p - inv.g3);
            ode = ode.max(res.norm() / p.norm().powi(3).max(1.0));

            let (pm, dpm) = wp.eval(-z).ok_or("unexpected pole")?;
            parity = parity.max(rel_diff(pm, p)).max(rel_diff(dpm, -dp));

            let p2 = wp.eval(2.0 * z).ok_or("unexpected pole")?.0;
            let ddp = 6.0 * p * p - inv.g2 / 2.0;
            let formula = ddp * ddp / (4.0 * dp * dp) - 2.0 * p;
            dup = dup.max(rel_diff(p2, formula));

            for (t, wt) in &scaled {
                let v = wt.eval(t * z).ok_or("unexpected pole")?.0;
                homog = homog.max(rel_diff(v, p / (t * t)));
            }

            if used % 10 == 0 {
                let base = raw.eval(z).ok_or("unexpected pole")?.0;
                for shift in [2.0 * data.omega1, 2.0 * data.omega3] {
                    let shifted = raw.eval(z + shift).ok_or("unexpected pole")?.0;
                    period = period.max(rel_diff(shifted, base));
                }
            }
        }
    }
    let omega = half_periods(&WeierstrassInvariants::new(real(4.0), ZERO))
        .map_err(|e| e.to_string())?
        .omega1;
    let oracle = lemniscatic_half_period_oracle();
    let half = (omega - real(oracle)).norm() / oracle;
    let checks = [
        ("ODE", ode, 1e-9),
        ("parity", parity, 1e-12),
        ("duplication", dup, 1e-8),
        ("homogeneity", homog, 1e-9),
        ("periodicity", period, 1e-8),
        ("half-period", half, 1e-8),
    ];
    for (name, v, tol) in checks {
        ensure(v <= tol, || format!("{name} error {v:.3e} exceeds {tol:.0e}"))?;
    }
    Ok(checks
        .iter()
        .map(|(n, v, _)| format!("{n} {v:.1e}"))
        .collect::<Vec<_>>()
        .join(", "))
}

fn family_samples() -> Result<Vec<Solution>, String> {
    let s5 = I * 5f64.sqrt();
    let s3 = I / 3f64.sqrt();
    let err = |e: SolverError| e.to_string();
    Ok(vec![
        WORKED_EXAMPLES[0].solution(),
        Solution::WpRational(solve_type2(real(10584.0), [s5, -s5]).map_err(err)?),
        Solution::WpRational(solve_type3(real(-64.0 / 27.0), [s3, -s3]).map_err(err)?),
        Solution::WpRational(solve_type4(real(2.25), [I * 0.5, -I * 0.5]).map_err(err)?),
        Solution::WpRational(WpRationalSolution::new(WpFamily::IV, c(0.4, 0.9), None).map_err(|e| e.to_string())?),
        Solution::Trig(crate::solution::TrigSolution {
            alpha: ONE,
            beta: ZERO,
            outer: MobiusTransform::identity(),
        }),
        Solution::Exp(solve_type6(real(-0.5), 1).map_err(err)?),
    ])
}

fn random_mobius(rng: &mut ChaCha8Rng) -> MobiusTransform {
    loop {
        let [a, b, cc, d] = [0; 4].map(|_| random_c(rng, 1.0));
        if (a * d - b * cc).norm() > 0.1 {
            if let Ok(m) = MobiusTransform::new(a, b, cc, d) {
                return m;
            }
        }
    }
}

fn mobius_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let maps: Vec<MobiusTransform> = (0..20).map(|_| random_mobius(&mut rng)).collect();
    let (mut worst, mut compared) = (0.0f64, 0usize);
    for sol in family_samples()? {
        let prepared = PreparedSolution::new(sol).map_err(|e| e.to_string())?;
        let opts = VerifyOptions { samples: 10, seed: 5, ..VerifyOptions::default() };
        let (points, _) = generic_points(&prepared, &opts);
        for z in points {
            let jet = prepared.jet(z).map_err(|e| e.to_string())?;
            let s = schwarzian_of_jet(&jet.into()).map_err(|e| e.to_string())?;
            for m in &maps {
                let [_, _, mc, md] = m.coefficients();
                // skip points where m sends u(z) near infinity
                if (mc * jet.value() + md).norm() < 1e-2 {
                    continue;
                }
                let Some(composed) = m.apply_jet(jet) else { continue };
                let sm = schwarzian_of_jet(&composed.into()).map_err(|e| e.to_string())?;
                worst = worst.max((sm - s).norm() / s.norm().max(1.0));
                compared += 1;
            }
        }
    }
    ensure(worst <= 1e-8, || format!("composition changes S by {worst:.3e}"))?;

    let mut bare = 0.0f64;
    for m in &maps {
        let [_, _, mc, md] = m.coefficients();
        let pole = (mc != ZERO).then(|| -md / mc);
        let mut taken = 0;
        while taken < 20 {
            let z = random_c(&mut rng, 2.0);
            let dist = pole.map_or(f64::INFINITY, |p| (z - p).norm());
            if dist < 0.1 {
                continue;
            }
            taken += 1;
            let s = schwarzian_numeric(|w| m.apply_finite(w).finite().unwrap_or(C64::new(f64::NAN, 0.0)), z, default_ring_radius(dist), DEFAULT_RING_SAMPLES)
                .map_err(|e| e.to_string())?;
            bare = bare.max(s.norm());
        }
    }
    ensure(bare <= 1e-8, || format!("|S| of a bare Mobius map reached {bare:.3e}"))?;
    Ok(format!(
        "{compared} comparisons over 7 solutions and 20 maps, max change {worst:.1e}; bare maps |S| <= {bare:.1e}"
    ))
}

fn fixed_point() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for a in [ZERO, c(1.0, 1.0)] {
        let f = |z: C64| -1.5 / ((z + a) * (z + a));
        let mut taken = 0;
        while taken < 20 {
            let z = random_c(&mut rng, 2.0);
            let dist = (z + a).norm();
            if dist < 0.3 {
                continue;
            }
            taken += 1;
            let s = schwarzian_numeric(f, z, default_ring_radius(dist), DEFAULT_RING_SAMPLES)
                .map_err(|e| e.to_string())?;
            worst = worst.max((s - f(z)).norm() / f(z).norm());
        }
    }
    ensure(worst <= 1e-8, || format!("S(f) - f relative error {worst:.3e}"))?;
    Ok(format!("40 points, max relative error {worst:.1e}"))
}

fn negative_controls() -> Check {
    let ex1 = &WORKED_EXAMPLES[0];
    let base = TypeICoefficients::from_equation(&ex1.equation()).map_err(|e| e.to_string())?;
    for j in 0..5 {
        let mut r = base.r;
        r[j] += 1e-3;
        let perturbed = TypeICoefficients::new(r, base.tau).map_err(|e| e.to_string())?;
        match solve_type1(&perturbed) {
            Err(SolverError::NoSolution { .. }) => {}
            other => return Err(format!("perturbed r{j} gave {other:?}")),
        }
    }
    let common = default_common();
    let ex2 = &WORKED_EXAMPLES[1];
    for (eq, sol, label) in [(ex1, ex2, "example 1 equation with example 2 solution"), (ex2, ex1, "example 2 equation with example 1 solution")] {
        let out = cli::cmd_verify(&eq.equation_json(), &sol.solution_json(), &common);
        ensure(out.code != 0, || format!("{label} passed verification"))?;
    }
    // sanity: the unswapped pairs do pass at a point
    let prepared = PreparedSolution::new(ex1.solution()).map_err(|e| e.to_string())?;
    let (abs, _) = residual_at(&prepared, &ex1.equation(), c(0.3, 0.2)).ok_or("no residual")?;
    ensure(abs < 1e-8, || format!("example 1 residual {abs:.3e}"))?;
    Ok("all five single-entry perturbations rejected; swapped solutions fail verification".into())
}
