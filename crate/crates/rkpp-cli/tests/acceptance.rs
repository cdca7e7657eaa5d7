//! Acceptance suite: ten end-to-end criteria covering the catalog, the
//! combination formulas, the printed closed forms, movable singularities,
//! the scaling law, seed audits, special functions, figure reproduction,
//! the symmetry adjudication, and the negative controls.
//!
//! Each criterion is one test that prints a single `PASS` line with the
//! measured numbers (visible under `--nocapture`); a failure carries the
//! same detail in the assertion message.

use std::process::Command;

use rkpp_core::burgers::solve_burgers_system;
use rkpp_core::catalog::{Catalog, Solution};
use rkpp_core::coeffs::CoefficientSet;
use rkpp_core::error::Result;
use rkpp_core::kernel::{kernel_functions, solve_characteristic, CharConvention};
use rkpp_core::riccati::{
    combine_ermakov, combine_riccati, find_singularity, residual_riccati_system,
    InitialData, ParameterFunctions,
};
use rkpp_core::seeds::{BurgersSeed, FisherSeed};
use rkpp_core::specfun::{
    elliptic_k, erfc, jacobi_sd, jacobi_sncndn, upper_gamma, EllipticModulus,
};
use rkpp_core::transform::{build_gbe_solution, build_gnlh_solution, SymmetryCandidate};
use rkpp_core::verify::{
    audit_burgers_symmetry, convergence_order, residual_gbe_with, residual_gnlh_with,
    viscosity_audit, GridSpec, GBE_CORRUPTIONS, GNLH_CORRUPTIONS,
};

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / ((n - 1) as f64);
    (0..n).map(|i| lo + step * i as f64).collect()
}

/// The window-derived default grid the CLI uses for `verify`.
fn default_grid(window: (f64, f64)) -> GridSpec {
    let span = window.1 - window.0;
    GridSpec::new(
        -1.2,
        1.2,
        25,
        window.0 + 0.15 * span,
        window.1 - 0.15 * span,
        9,
    )
    .unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

// ---------------------------------------------------------------------------
// 1. Every catalog family verifies with defaults via its declared route.
// ---------------------------------------------------------------------------

#[test]
fn criterion_01_all_catalog_families_verify_with_defaults() {
    let catalog = Catalog::builtin().unwrap();
    let mut worst_residual = (0.0f64, String::new());
    let mut order_lo = f64::INFINITY;
    let mut order_hi = f64::NEG_INFINITY;
    for entry in catalog.entries() {
        let inst = entry.instantiate(&[]).unwrap_or_else(|e| {
            panic!("{}: instantiate failed: {e}", entry.id);
        });
        let sol = inst
            .construct()
            .unwrap_or_else(|e| panic!("{}: construct failed: {e}", entry.id));
        let grid = default_grid(inst.window);
        let residual = |h: f64| -> Result<f64> {
            Ok(match &sol {
                Solution::Gnlh(s) => residual_gnlh_with(s, &grid, h, None)?.max_residual,
                Solution::Gbe(s) => residual_gbe_with(s, &grid, h, None)?.max_residual,
            })
        };
        let at_tol = residual(1e-3)
            .unwrap_or_else(|e| panic!("{}: residual failed: {e}", entry.id));
        assert!(
            at_tol <= 1e-3,
            "{}: max residual {at_tol:.3e} exceeds 1e-3 at h = 1e-3",
            entry.id
        );
        // Families this accurate sit near the dense-output noise floor at
        // h = 1e-3; the order is measured one octave coarser, where the
        // h^2 truncation still dominates.
        let check = convergence_order(residual, 4e-3)
            .unwrap_or_else(|e| panic!("{}: order estimate failed: {e}", entry.id));
        assert!(
            (1.7..=2.3).contains(&check.order),
            "{}: convergence order {:.3} outside [1.7, 2.3] (coarse {:.3e}, fine {:.3e})",
            entry.id,
            check.order,
            check.coarse,
            check.fine
        );
        if at_tol > worst_residual.0 {
            worst_residual = (at_tol, entry.id.clone());
        }
        order_lo = order_lo.min(check.order);
        order_hi = order_hi.max(check.order);
    }
    println!(
        "acceptance 01 catalog sweep: PASS ({} families; worst residual {:.3e} at {}; \
         orders in [{:.2}, {:.2}])",
        catalog.entries().len(),
        worst_residual.0,
        worst_residual.1,
        order_lo,
        order_hi
    );
}

// ---------------------------------------------------------------------------
// 2. Combined parameter families satisfy their governing ODE system.
// ---------------------------------------------------------------------------

/// Finite-difference residual of the seven-equation system, sampled away
/// from the window edges.
fn system_residual(
    params: &ParameterFunctions,
    coeffs: &CoefficientSet,
    lo: f64,
    hi: f64,
) -> f64 {
    let ts = linspace(lo, hi, 10);
    residual_riccati_system(params, coeffs, &ts, 1e-4).unwrap()
}

#[test]
fn criterion_02_combined_families_satisfy_the_parameter_system() {
    let tol = 1e-6;
    let mut lines: Vec<String> = Vec::new();

    // Free diffusion: a = 1, everything else zero.
    let coeffs = CoefficientSet::parse("1", "0", "0", "0", "0", "0", 0, 0.0, -1.0, 2.0).unwrap();
    let pair = solve_characteristic(&coeffs, CharConvention::Appendix, 2.2).unwrap();
    let kernels = kernel_functions(pair, &coeffs).unwrap();
    let init = InitialData { alpha: 0.05, delta: 0.1, ..InitialData::default() };
    let params = combine_riccati(kernels, init).unwrap();
    let r = system_residual(&params, &coeffs, 0.1, 1.9);
    assert!(r <= tol, "free case: system residual {r:.3e}");
    lines.push(format!("free {r:.1e}"));

    // Constant restoring term: a = 1, b = 1.
    let coeffs = CoefficientSet::parse("1", "1", "0", "0", "0", "0", 0, 0.0, -1.0, 2.0).unwrap();
    let pair = solve_characteristic(&coeffs, CharConvention::Appendix, 2.2).unwrap();
    let kernels = kernel_functions(pair, &coeffs).unwrap();
    let init = InitialData { alpha: 0.05, delta: 0.2, epsilon: 0.1, ..InitialData::default() };
    let params = combine_riccati(kernels, init).unwrap();
    let r = system_residual(&params, &coeffs, 0.1, 1.9);
    assert!(r <= tol, "a=1/b=1 case: system residual {r:.3e}");
    lines.push(format!("a1b1 {r:.1e}"));

    let catalog = Catalog::builtin().unwrap();

    // Singular-drift coefficient set (EX.3.2). Its coefficients blow up at
    // t = 0, so the kernel combination anchored there does not exist; the
    // declared route for this family integrates the same system anchored
    // inside the window, and that output is checked against the ODEs.
    let inst = catalog.get("EX.3.2").unwrap().instantiate(&[]).unwrap();
    let sol = inst.construct().unwrap();
    let params = match &sol {
        Solution::Gnlh(s) => s.params(),
        Solution::Gbe(_) => unreachable!(),
    };
    let r = system_residual(params, &inst.coeffs, 0.2, 1.9);
    assert!(r <= tol, "singular-drift set: system residual {r:.3e}");
    lines.push(format!("singular-drift {r:.1e}"));

    // Hyperbolic-drift coefficient set (EX.3.3): regular at t = 0, so the
    // kernel combination applies directly with the family's own data.
    let inst = catalog.get("EX.3.3").unwrap().instantiate(&[]).unwrap();
    let pair = solve_characteristic(&inst.coeffs, CharConvention::Appendix, 2.2).unwrap();
    let kernels = kernel_functions(pair, &inst.coeffs).unwrap();
    let init = InitialData { alpha: 0.0, delta: -1.0, ..InitialData::default() };
    let params = combine_riccati(kernels, init).unwrap();
    let r = system_residual(&params, &inst.coeffs, 0.1, 1.9);
    assert!(r <= tol, "hyperbolic-drift set: system residual {r:.3e}");
    lines.push(format!("hyperbolic-drift {r:.1e}"));

    // Oscillator configuration (EX.2.1), nonlinear branch.
    let inst = catalog.get("EX.2.1").unwrap().instantiate(&[]).unwrap();
    let pair = solve_characteristic(&inst.coeffs, CharConvention::Appendix, 2.2).unwrap();
    let kernels = kernel_functions(pair, &inst.coeffs).unwrap();
    let params = combine_ermakov(kernels, inst.init).unwrap();
    let r = system_residual(&params, &inst.coeffs, 0.1, 1.9);
    assert!(r <= tol, "oscillator set: system residual {r:.3e}");
    lines.push(format!("oscillator {r:.1e}"));

    println!(
        "acceptance 02 parameter-system self-consistency: PASS ({})",
        lines.join(", ")
    );
}

// ---------------------------------------------------------------------------
// 3. The five worked examples match their closed-form parameter functions.
// ---------------------------------------------------------------------------

struct ParamForms {
    mu: fn(f64) -> f64,
    alpha: fn(f64) -> f64,
    beta: fn(f64) -> f64,
    gamma: fn(f64) -> f64,
    delta: fn(f64) -> f64,
    kappa: fn(f64) -> f64,
}

fn check_forms(id: &str, params: &ParameterFunctions, forms: &ParamForms) -> f64 {
    let tol = 1e-6;
    let mut worst = 0.0f64;
    for &t in &linspace(0.1, 2.0, 39) {
        let s = params.eval(t).unwrap_or_else(|e| panic!("{id}: eval({t}) failed: {e}"));
        for (name, got, want) in [
            ("mu", s.mu, (forms.mu)(t)),
            ("alpha", s.alpha, (forms.alpha)(t)),
            ("beta", s.beta, (forms.beta)(t)),
            ("gamma", s.gamma, (forms.gamma)(t)),
            ("delta", s.delta, (forms.delta)(t)),
            ("kappa", s.kappa, (forms.kappa)(t)),
        ] {
            assert!(
                close(got, want, tol),
                "{id}: {name}({t}) = {got:.12e}, closed form {want:.12e}"
            );
            worst = worst.max((got - want).abs());
        }
    }
    worst
}

#[test]
fn criterion_03_worked_examples_match_their_closed_forms() {
    let catalog = Catalog::builtin().unwrap();
    let mut lines: Vec<String> = Vec::new();

    // Oscillator pair: both families share one transformation.
    let oscillator = ParamForms {
        mu: |t| (0.5 * ((-2.0 * t).exp() + 1.0)).sqrt(),
        alpha: |t| {
            let e = (-2.0 * t).exp();
            -(e + 2.0) / (4.0 * (1.0 + e))
        },
        beta: |t| (-t).exp() / (2.0 * ((-2.0 * t).exp() + 1.0)).sqrt(),
        gamma: |t| -0.25 * (0.5 * ((-2.0 * t).exp() + 1.0)).ln(),
        delta: |_| 0.0,
        kappa: |_| 0.0,
    };
    for id in ["EX.2.1", "EX.2.2"] {
        let inst = catalog.get(id).unwrap().instantiate(&[]).unwrap();
        let sol = inst.construct().unwrap();
        let params = match &sol {
            Solution::Gnlh(s) => s.params(),
            Solution::Gbe(_) => unreachable!(),
        };
        let w = check_forms(id, params, &oscillator);
        lines.push(format!("{id} {w:.1e}"));
    }

    // Logistic-drift family; the catalog window stops at t = 0.5, so widen
    // it to cover the comparison range (the coefficients stay regular).
    let mut inst = catalog.get("EX.3.1").unwrap().instantiate(&[]).unwrap();
    inst.window = (0.0, 2.05);
    let sol = inst.construct().unwrap();
    let params = match &sol {
        Solution::Gnlh(s) => s.params(),
        Solution::Gbe(_) => unreachable!(),
    };
    let logistic = ParamForms {
        mu: |t| 2.0 * (-t).exp() / (t.exp() + 1.0),
        alpha: |t| -1.0 / (4.0 * (t.exp() + 1.0)),
        beta: |_| 1.0,
        gamma: |t| t,
        delta: |t| (0.5 * t).exp(),
        kappa: |t| 1.0 - t.exp(),
    };
    let w = check_forms("EX.3.1", params, &logistic);
    lines.push(format!("EX.3.1 {w:.1e}"));

    // Singular-drift family, anchored at t = 0.1: the printed mu carries a
    // free constant C in C e^{-t}, pinned here by mu(0.1) = 1.
    let inst = catalog.get("EX.3.2").unwrap().instantiate(&[]).unwrap();
    let sol = inst.construct().unwrap();
    let params = match &sol {
        Solution::Gnlh(s) => s.params(),
        Solution::Gbe(_) => unreachable!(),
    };
    let singular_drift = ParamForms {
        mu: |t| (0.1f64).exp() * (-t).exp(),
        alpha: |t| -1.0 / (2.0 * (2.0 * t).sinh()),
        beta: |_| 1.0,
        gamma: |t| t,
        delta: |_| 0.0,
        kappa: |_| 0.0,
    };
    let w = check_forms("EX.3.2", params, &singular_drift);
    lines.push(format!("EX.3.2 {w:.1e}"));

    // Hyperbolic-drift family (kappa(0) defaults to 0.5).
    let inst = catalog.get("EX.3.3").unwrap().instantiate(&[]).unwrap();
    let sol = inst.construct().unwrap();
    let params = match &sol {
        Solution::Gnlh(s) => s.params(),
        Solution::Gbe(_) => unreachable!(),
    };
    let hyperbolic = ParamForms {
        mu: |t| t.cosh() * (-2.0 * t).exp(),
        alpha: |t| -0.25 * t.tanh(),
        beta: |_| 1.0,
        gamma: |t| t,
        delta: |t| -1.0 / t.cosh(),
        kappa: |t| 0.5 - t.tanh(),
    };
    let w = check_forms("EX.3.3", params, &hyperbolic);
    lines.push(format!("EX.3.3 {w:.1e}"));

    println!(
        "acceptance 03 printed parameter functions: PASS (worst |err|: {})",
        lines.join(", ")
    );
}

// ---------------------------------------------------------------------------
// 4. The movable singularity of the free family sits at 1/(4 alpha(0)).
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_free_family_singularity_closed_form() {
    let mut lines: Vec<String> = Vec::new();
    for alpha0 in [0.05, 0.25, 2.0] {
        let coeffs =
            CoefficientSet::parse("1", "0", "0", "0", "0", "0", 0, 1.0, -1.0, 1.0).unwrap();
        let pair = solve_characteristic(&coeffs, CharConvention::Appendix, 1.0e3).unwrap();
        let kernels = kernel_functions(pair, &coeffs).unwrap();
        let init = InitialData { alpha: alpha0, ..InitialData::default() };
        let params = combine_riccati(kernels, init).unwrap();
        let t_star =
            find_singularity(params.kernels().unwrap(), alpha0, (1e-6, 1e3), 1e-12).unwrap();
        let expected = 1.0 / (4.0 * alpha0);
        assert!(
            close(t_star, expected, 1e-8),
            "alpha(0) = {alpha0}: t* = {t_star:.12e}, expected {expected:.12e}"
        );
        let mu = params.mu(t_star).unwrap();
        assert!(
            mu.abs() <= 1e-8,
            "alpha(0) = {alpha0}: mu(t*) = {mu:.3e}, expected 0"
        );
        lines.push(format!("alpha0={alpha0}: t*={t_star:.10}, mu(t*)={mu:.1e}"));
    }
    println!("acceptance 04 singularity closed form: PASS ({})", lines.join("; "));
}

// ---------------------------------------------------------------------------
// 5. Scaling law: mu(0) -> lambda mu(0) rescales the field by lambda^(-1/2).
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_mu0_scaling_law() {
    let catalog = Catalog::builtin().unwrap();
    let mut worst = 0.0f64;
    for id in ["EX.2.1", "EX.2.2"] {
        let entry = catalog.get(id).unwrap();
        let base = entry.instantiate(&[]).unwrap().construct().unwrap();
        for lambda in [2.0, 4.0, 10.0] {
            let scaled = entry
                .instantiate(&[("mu0".to_string(), lambda)])
                .unwrap()
                .construct()
                .unwrap();
            for &x in &linspace(-5.0, 5.0, 21) {
                for &t in &linspace(0.1, 9.9, 15) {
                    let u1 = base.eval(x, t).unwrap();
                    let ul = scaled.eval(x, t).unwrap();
                    let err = (ul - u1 / lambda.sqrt()).abs();
                    assert!(
                        err <= 1e-12,
                        "{id}, lambda = {lambda}: |u_scaled - u/sqrt(lambda)| = {err:.3e} \
                         at (x, t) = ({x}, {t})"
                    );
                    worst = worst.max(err);
                }
            }
        }
    }
    println!("acceptance 05 scaling law: PASS (worst deviation {worst:.1e})");
}

// ---------------------------------------------------------------------------
// 6. Seed audits: viscosity winners and reaction-model residuals.
// ---------------------------------------------------------------------------

/// Relative residual of a reaction-diffusion seed against its bound model
/// `v_tau = v_xixi + v (r0 + h0 |v|^p sgn(v)^p)`.
fn model_residual(seed: FisherSeed, xi: f64, tau: f64, k1: f64, k2: f64) -> f64 {
    let h = 2e-4;
    let v = |x: f64, t: f64| seed.eval(x, t, k1, k2).unwrap();
    let vc = v(xi, tau);
    let vt = (v(xi, tau + h) - v(xi, tau - h)) / (2.0 * h);
    let vxx = (v(xi + h, tau) - 2.0 * vc + v(xi - h, tau)) / (h * h);
    let (r0, h0, p) = seed.model();
    let reaction = vc * (r0 + h0 * vc.abs().powf(p) * vc.signum().powf(p));
    let r = vt - vxx - reaction;
    r.abs() / (1.0 + vt.abs() + vxx.abs() + reaction.abs())
}

#[test]
fn criterion_06_seed_audits() {
    // Viscosity normalization winners, pinned by BurgersSeed::viscosity.
    let grid = GridSpec::parse("-3:3:17x0.3:1.5:9").unwrap();
    let kampe_grid = GridSpec::parse("-0.4:1.6:17x0.3:1.2:9").unwrap();
    let seeds = [
        (BurgersSeed::Shock { speed: 0.5, amplitude: 1.0, center: 0.0 }, &grid),
        (BurgersSeed::Triangular { re: 1.5 }, &grid),
        (BurgersSeed::NWave { mass: 1.0 }, &grid),
        (BurgersSeed::Kampe { coeffs: vec![1.0, 1.0] }, &kampe_grid),
    ];
    let mut lines: Vec<String> = Vec::new();
    for (seed, g) in &seeds {
        let audit = viscosity_audit(seed, g, 5e-4).unwrap();
        let pinned = seed.viscosity();
        assert_eq!(
            audit.best,
            pinned,
            "{}: audit winner {} disagrees with pinned viscosity {}",
            seed.id(),
            audit.best,
            pinned
        );
        let (win, lose) = if pinned == 1.0 {
            (audit.residual_unit, audit.residual_half)
        } else {
            (audit.residual_half, audit.residual_unit)
        };
        assert!(win <= 1e-5, "{}: winner residual {win:.3e}", seed.id());
        assert!(lose >= 1e-2, "{}: loser residual {lose:.3e}", seed.id());
        lines.push(format!("{} nu={pinned} ({win:.1e} vs {lose:.1e})", seed.id()));
    }

    // Reaction-diffusion seeds against their bound models.
    for seed in FisherSeed::ALL {
        let (k1, k2) = match seed {
            FisherSeed::U4 => (2.0, 0.5), // keep clear of the pole line
            _ => (0.7, 0.3),
        };
        let mut worst = 0.0f64;
        for &xi in &linspace(-1.5, 1.3, 15) {
            for &tau in &linspace(0.2, 0.6, 5) {
                worst = worst.max(model_residual(seed, xi, tau, k1, k2));
            }
        }
        assert!(worst <= 1e-5, "{}: model residual {worst:.3e}", seed.id());
        lines.push(format!("{} {worst:.1e}", seed.id()));
    }
    println!("acceptance 06 seed audits: PASS ({})", lines.join(", "));
}

// ---------------------------------------------------------------------------
// 7. Special-function identities.
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_special_function_identities() {
    // Deterministic 64-bit LCG; no external RNG needed for a fixed check.
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut uniform = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut worst_sc = 0.0f64;
    let mut worst_dn = 0.0f64;
    for _ in 0..200 {
        let u = -5.0 + 10.0 * uniform();
        let k = 0.01 + 0.98 * uniform();
        let m = EllipticModulus::new(k).unwrap();
        let (sn, cn, dn) = jacobi_sncndn(u, m);
        let e1 = (sn * sn + cn * cn - 1.0).abs();
        let e2 = (dn * dn + k * k * sn * sn - 1.0).abs();
        assert!(e1 <= 1e-10, "sn^2+cn^2 defect {e1:.3e} at (u, k) = ({u}, {k})");
        assert!(e2 <= 1e-10, "dn^2+k^2 sn^2 defect {e2:.3e} at (u, k) = ({u}, {k})");
        worst_sc = worst_sc.max(e1);
        worst_dn = worst_dn.max(e2);
    }

    let m = EllipticModulus::new(std::f64::consts::FRAC_1_SQRT_2).unwrap();
    let sd = jacobi_sd(elliptic_k(m), m);
    let sd_err = (sd - std::f64::consts::SQRT_2).abs();
    assert!(sd_err <= 1e-9, "sd(K) = {sd:.15}, expected sqrt(2)");

    let mut worst_gamma = 0.0f64;
    for (s, x) in [(0.5, 0.3), (1.5, 1.0), (2.5, 4.0), (3.3, 0.7)] {
        let lhs = upper_gamma(s + 1.0, x).unwrap();
        let rhs = s * upper_gamma(s, x).unwrap() + x.powf(s) * (-x).exp();
        let err = (lhs - rhs).abs() / (1.0 + lhs.abs());
        assert!(err <= 1e-9, "recurrence defect {err:.3e} at (s, x) = ({s}, {x})");
        worst_gamma = worst_gamma.max(err);
    }

    let mut worst_erfc = 0.0f64;
    for x in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let err = (erfc(-x) + erfc(x) - 2.0).abs();
        assert!(err <= 1e-12, "reflection defect {err:.3e} at x = {x}");
        worst_erfc = worst_erfc.max(err);
    }

    println!(
        "acceptance 07 special functions: PASS (sn/cn {worst_sc:.1e}, dn {worst_dn:.1e}, \
         sd(K) {sd_err:.1e}, gamma {worst_gamma:.1e}, erfc {worst_erfc:.1e})"
    );
}

// ---------------------------------------------------------------------------
// 8. Figure configurations solve to CSV and verify through the CLI.
// ---------------------------------------------------------------------------

struct FigureConfig {
    label: &'static str,
    family: &'static str,
    sets: &'static [(&'static str, f64)],
    solve_grid: &'static str,
    verify_grid: &'static str,
}

const FIGURES: &[FigureConfig] = &[
    FigureConfig {
        label: "1a",
        family: "EX.2.1",
        sets: &[("k1", 1.0), ("k2", 1.0), ("gamma0", 0.0), ("mu0", 1.0)],
        solve_grid: "-5:5:41x0:10:41",
        verify_grid: "-5:5:25x0.1:9.9:9",
    },
    FigureConfig {
        label: "1b",
        family: "EX.2.1",
        sets: &[("k1", 1.0), ("k2", 1.0), ("gamma0", 1.0), ("mu0", 1.0)],
        solve_grid: "-5:5:41x0:10:41",
        verify_grid: "-5:5:25x0.1:9.9:9",
    },
    FigureConfig {
        label: "1c",
        family: "EX.2.1",
        sets: &[("k1", 1.0), ("k2", 1.0), ("gamma0", 1.0), ("mu0", 5.0)],
        solve_grid: "-5:5:41x0:10:41",
        verify_grid: "-5:5:25x0.1:9.9:9",
    },
    FigureConfig {
        label: "1d",
        family: "EX.2.1",
        sets: &[("k1", 2.0), ("k2", -0.5), ("gamma0", 1.0), ("mu0", 5.0)],
        solve_grid: "-5:5:41x0:10:41",
        verify_grid: "-5:5:25x0.1:9.9:9",
    },
    FigureConfig {
        label: "2a",
        family: "EX.3.1",
        sets: &[("k1", 1.0), ("k2", 2.0), ("kappa0", 0.0), ("mu0", 1.0)],
        solve_grid: "2:3:41x0:0.5:41",
        verify_grid: "2:3:25x0.02:0.48:9",
    },
    FigureConfig {
        label: "2b",
        family: "EX.3.1",
        sets: &[("k1", 1.0), ("k2", 2.0), ("kappa0", 5.0), ("mu0", 10.0)],
        solve_grid: "2:3:41x0:0.5:41",
        verify_grid: "2:3:25x0.02:0.48:9",
    },
    FigureConfig {
        label: "2c",
        family: "EX.3.1",
        sets: &[("k1", 3.0), ("k2", 0.5), ("kappa0", 1.0), ("mu0", 5.0)],
        solve_grid: "2:3:41x0:0.5:41",
        verify_grid: "2:3:25x0.02:0.48:9",
    },
    FigureConfig {
        label: "3a",
        family: "EX.3.3",
        sets: &[("k1", 1.0), ("kappa0", -0.5), ("mu0", 20.0)],
        solve_grid: "0:5:41x0:5:41",
        verify_grid: "0:5:25x0.1:4.9:9",
    },
    FigureConfig {
        label: "3b",
        family: "EX.3.3",
        sets: &[("k1", 1.0), ("kappa0", 0.5), ("mu0", 1.0)],
        solve_grid: "0:5:41x0:5:41",
        verify_grid: "0:5:25x0.1:4.9:9",
    },
    FigureConfig {
        label: "3c",
        family: "EX.3.3",
        sets: &[("k1", 3.0), ("kappa0", 0.5), ("mu0", 10.0)],
        solve_grid: "0:5:41x0:5:41",
        verify_grid: "0:5:25x0.1:4.9:9",
    },
    FigureConfig {
        label: "3d",
        family: "EX.3.3",
        sets: &[("k1", 7.0), ("kappa0", 0.5), ("mu0", 10.0)],
        solve_grid: "0:5:41x0:5:41",
        verify_grid: "0:5:25x0.1:4.9:9",
    },
];

#[test]
fn criterion_08_figure_configurations_solve_and_verify() {
    let bin = env!("CARGO_BIN_EXE_rkpp");
    let dir = std::env::temp_dir();
    for fig in FIGURES {
        let csv = dir.join(format!("rkpp-acceptance-fig{}.csv", fig.label));
        let mut solve = Command::new(bin);
        solve.args(["solve", "--family", fig.family]);
        for (name, value) in fig.sets {
            solve.args(["--set", &format!("{name}={value}")]);
        }
        solve.args(["--grid", fig.solve_grid, "--out"]).arg(&csv);
        let out = solve.output().expect("spawn solve");
        assert!(
            out.status.success(),
            "figure {}: solve failed: {}",
            fig.label,
            String::from_utf8_lossy(&out.stderr)
        );
        let text = std::fs::read_to_string(&csv).expect("read csv");
        assert!(text.starts_with("x,t,u\n"), "figure {}: bad CSV header", fig.label);
        assert_eq!(
            text.lines().count(),
            41 * 41 + 1,
            "figure {}: unexpected CSV row count",
            fig.label
        );
        assert!(
            !text.contains("NaN"),
            "figure {}: CSV contains non-finite samples",
            fig.label
        );

        let mut verify = Command::new(bin);
        verify.args(["verify", "--family", fig.family]);
        for (name, value) in fig.sets {
            verify.args(["--set", &format!("{name}={value}")]);
        }
        verify.args(["--grid", fig.verify_grid, "--tol", "1e-3"]);
        let out = verify.output().expect("spawn verify");
        assert!(
            out.status.success(),
            "figure {}: verify failed: {}{}",
            fig.label,
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        );
    }
    println!(
        "acceptance 08 figure configurations: PASS ({} panels solved and verified)",
        FIGURES.len()
    );
}

// ---------------------------------------------------------------------------
// 9. Symmetry adjudication for the constant-coefficient similarity map.
// ---------------------------------------------------------------------------

#[test]
fn criterion_09_symmetry_audit_records_its_verdict() {
    let data = InitialData {
        alpha: 0.2,
        beta: 1.0,
        gamma: 0.05,
        delta: 0.3,
        epsilon: 0.2,
        ..InitialData::default()
    };
    let grid = GridSpec::parse("-2:2:17x0.2:1:9").unwrap();
    let shock = BurgersSeed::Shock { speed: 0.4, amplitude: 0.8, center: 0.0 };

    let zero = audit_burgers_symmetry(&data, None, &grid, 1e-3).unwrap();
    let seeded = audit_burgers_symmetry(&data, Some(&shock), &grid, 1e-3).unwrap();

    // Measured verdict: the data-anchored candidate satisfies the equation,
    // the pole-anchored display form does not. Recorded here and in the
    // transform module docs.
    for (name, audit) in [("zero", &zero), ("shock", &seeded)] {
        assert_eq!(
            audit.verdict(),
            SymmetryCandidate::DataAnchored,
            "{name}: unexpected verdict (pole {:.3e}, data {:.3e})",
            audit.pole_anchored,
            audit.data_anchored
        );
        assert!(
            audit.data_anchored <= 1e-5,
            "{name}: data-anchored residual {:.3e}",
            audit.data_anchored
        );
        assert!(
            audit.pole_anchored >= 1e-2,
            "{name}: pole-anchored residual {:.3e} does not separate",
            audit.pole_anchored
        );
    }
    println!(
        "acceptance 09 symmetry audit: PASS (verdict data-anchored; zero seed {:.1e} vs {:.1e}, \
         shock seed {:.1e} vs {:.1e})",
        zero.data_anchored, zero.pole_anchored, seeded.data_anchored, seeded.pole_anchored
    );
}

// ---------------------------------------------------------------------------
// 10. Negative controls: every corruption hook inflates the residual.
// ---------------------------------------------------------------------------

#[test]
fn criterion_10_corruption_hooks_inflate_residuals() {
    let mut min_ratio = f64::INFINITY;
    let mut lines: Vec<String> = Vec::new();

    // Diffusion-type solution with every induced term active.
    let coeffs =
        CoefficientSet::parse("1", "0", "1", "1", "0", "0", 1, -1.0, -1.0, 2.0).unwrap();
    let pair = solve_characteristic(&coeffs, CharConvention::Appendix, 2.0).unwrap();
    let kernels = kernel_functions(pair, &coeffs).unwrap();
    let init = InitialData { alpha: -0.375, beta: 0.5, ..InitialData::default() };
    let params = combine_ermakov(kernels, init).unwrap();
    let sol = build_gnlh_solution(params, coeffs, FisherSeed::U4, 1.0, 1.0).unwrap();
    let grid = GridSpec::parse("-1.5:1.5:17x0.2:1:9").unwrap();
    let clean = residual_gnlh_with(&sol, &grid, 1e-3, None).unwrap().max_residual;
    for hook in GNLH_CORRUPTIONS {
        let bad = residual_gnlh_with(&sol, &grid, 1e-3, Some(hook)).unwrap().max_residual;
        let ratio = bad / clean;
        assert!(ratio >= 100.0, "{hook:?}: ratio {ratio:.1} (clean {clean:.3e}, bad {bad:.3e})");
        min_ratio = min_ratio.min(ratio);
        lines.push(format!("{hook:?} {:.0e}x", ratio));
    }

    // Burgers-type solution with restoring and forcing terms active.
    let coeffs =
        CoefficientSet::parse("-0.25", "0.3", "0", "0", "sin(t)", "0", 0, 0.0, 0.0, 0.0).unwrap();
    let init = InitialData { alpha: 0.1, delta: 0.2, epsilon: 0.1, ..InitialData::default() };
    let params = solve_burgers_system(&coeffs, &init, (0.0, 2.0)).unwrap();
    let seed = BurgersSeed::Shock { speed: 0.4, amplitude: 0.8, center: 0.0 };
    let sol = build_gbe_solution(params, coeffs, seed).unwrap();
    let grid = GridSpec::parse("-2:2:17x0.2:1.6:9").unwrap();
    let clean = residual_gbe_with(&sol, &grid, 1e-3, None).unwrap().max_residual;
    for hook in GBE_CORRUPTIONS {
        let bad = residual_gbe_with(&sol, &grid, 1e-3, Some(hook)).unwrap().max_residual;
        let ratio = bad / clean;
        assert!(ratio >= 100.0, "{hook:?}: ratio {ratio:.1} (clean {clean:.3e}, bad {bad:.3e})");
        min_ratio = min_ratio.min(ratio);
        lines.push(format!("{hook:?} {:.0e}x", ratio));
    }

    println!(
        "acceptance 10 negative controls: PASS (min inflation {min_ratio:.0}x; {})",
        lines.join(", ")
    );
}
