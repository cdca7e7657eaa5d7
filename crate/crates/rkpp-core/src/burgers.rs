//! Parameter families for the Burgers-type construction.
//!
//! The linearizing substitution for `v_t + 4a (v v_x - v_xx) = -b x + f`
//! uses five time-dependent parameters satisfying
//!
//! ```text
//! alpha'   = -b - 4 a alpha^2
//! beta'    = -4 a alpha beta
//! gamma'   = a beta^2
//! delta'   = f - 4 a alpha delta
//! epsilon' = -2 a delta beta
//! mu'/mu   = 4 a alpha
//! ```
//!
//! (`kappa` has no equation here and stays at its initial value; `mu` is the
//! auxiliary norm whose zeros mark the movable singularities.) Two solvers
//! are provided: [`combine_burgers`] assembles the general solution from the
//! Burgers kernel functions, and [`solve_burgers_system`] integrates the
//! system directly from data at an arbitrary anchor time, which also covers
//! coefficient sets whose characteristic problem is not anchorable at t = 0
//! (for example `a(0) = 0`).

use crate::coeffs::CoefficientSet;
use crate::error::{Error, Result};
use crate::kernel::{KernelFlavor, KernelSet};
use crate::ode::{integrate_dense, DenseOutput};
use crate::riccati::{InitialData, ParamInner, ParamSnapshot, ParameterFunctions};

const RTOL: f64 = 1e-11;
const ATOL: f64 = 1e-12;

/// Combine the Burgers kernels into the general family through `init` at
/// t = 0.
///
/// With `D(t) = alpha(0) - gamma0(t)` and `s = delta(0) - epsilon0(t)`:
///
/// ```text
/// mu      = 2 mu(0) mu0 D
/// alpha   = alpha0 - beta0^2 / (4D)
/// beta    = beta(0) beta0 / (2D)
/// gamma   = gamma(0) + beta(0)^2 / (4D)
/// delta   = delta0 + beta0 s / (2D)
/// epsilon = epsilon(0) - beta(0) s / (2D)
/// kappa   = kappa(0)
/// ```
///
/// Zeros of `D` are the movable singularities; `mu` vanishes there.
pub fn combine_burgers(kernels: KernelSet, init: InitialData) -> Result<ParameterFunctions> {
    if kernels.flavor() != KernelFlavor::Burgers {
        return Err(Error::InvalidData(
            "combine_burgers expects Burgers kernels".into(),
        ));
    }
    validate_burgers_data(&init)?;
    let t_max = kernels.t_max();
    Ok(ParameterFunctions {
        inner: ParamInner::BurgersCombine(kernels),
        init,
        t_anchor: 0.0,
        t_max,
    })
}

fn validate_burgers_data(init: &InitialData) -> Result<()> {
    let fields = [
        init.mu,
        init.alpha,
        init.beta,
        init.gamma,
        init.delta,
        init.epsilon,
        init.kappa,
    ];
    if fields.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidData(format!(
            "initial data must be finite, got {init:?}"
        )));
    }
    if init.beta == 0.0 {
        return Err(Error::InvalidData(
            "beta(0) must be nonzero; the similarity variable degenerates otherwise".into(),
        ));
    }
    if init.mu == 0.0 {
        return Err(Error::InvalidData("mu(0) must be nonzero".into()));
    }
    if init.l0 != 1 {
        return Err(Error::InvalidData(
            "the Burgers system has a fixed orientation; l0 must be +1".into(),
        ));
    }
    Ok(())
}

pub(crate) fn eval_combine(k: &KernelSet, d: &InitialData, t: f64) -> Result<ParamSnapshot> {
    let alpha0 = k.alpha0(t)?;
    let beta0 = k.beta0(t)?;
    let gamma0 = k.gamma0(t)?;
    let delta0 = k.delta0(t)?;
    let eps0 = k.epsilon0(t)?;
    let d_big = d.alpha - gamma0;
    if d_big == 0.0 {
        return Err(Error::Singular {
            t,
            msg: "movable singularity: alpha(0) - gamma0(t) = 0".into(),
        });
    }
    let s = d.delta - eps0;
    Ok(ParamSnapshot {
        mu: 2.0 * d.mu * k.pair().mu0(t)? * d_big,
        alpha: alpha0 - beta0 * beta0 / (4.0 * d_big),
        beta: d.beta * beta0 / (2.0 * d_big),
        gamma: d.gamma + d.beta * d.beta / (4.0 * d_big),
        delta: delta0 + beta0 * s / (2.0 * d_big),
        epsilon: d.epsilon - d.beta * s / (2.0 * d_big),
        kappa: d.kappa,
    })
}

/// Solve the Burgers parameter system directly by adaptive integration from
/// data at `window.0`. Works for any coefficients smooth on the window,
/// including ones singular or degenerate at t = 0.
pub fn solve_burgers_system(
    coeffs: &CoefficientSet,
    init: &InitialData,
    window: (f64, f64),
) -> Result<ParameterFunctions> {
    let (t_ref, t_max) = window;
    if !(t_ref.is_finite() && t_max.is_finite() && t_ref < t_max) {
        return Err(Error::InvalidData(format!(
            "window must be a finite forward interval, got [{t_ref}, {t_max}]"
        )));
    }
    validate_burgers_data(init)?;
    let cs = coeffs.clone();
    let y0 = [
        init.alpha,
        init.beta,
        init.gamma,
        init.delta,
        init.epsilon,
        0.0, // ln(mu / mu(t_ref))
    ];
    let dense = integrate_dense(
        move |t, y, dy| {
            let a = cs.a.eval(t)?;
            let b = cs.b.eval(t)?;
            let f = cs.f.eval(t)?;
            let four_a_alpha = 4.0 * a * y[0];
            dy[0] = -b - four_a_alpha * y[0];
            dy[1] = -four_a_alpha * y[1];
            dy[2] = a * y[1] * y[1];
            dy[3] = f - four_a_alpha * y[3];
            dy[4] = -2.0 * a * y[3] * y[1];
            dy[5] = four_a_alpha;
            Ok(())
        },
        t_ref,
        &y0,
        t_max,
        RTOL,
        ATOL,
    )?;
    Ok(ParameterFunctions {
        inner: ParamInner::BurgersDirect { dense },
        init: *init,
        t_anchor: t_ref,
        t_max,
    })
}

pub(crate) fn eval_direct(
    dense: &DenseOutput,
    init: &InitialData,
    t: f64,
) -> Result<ParamSnapshot> {
    let mut y = [0.0; 6];
    dense.eval_into(t, &mut y)?;
    Ok(ParamSnapshot {
        mu: init.mu * y[5].exp(),
        alpha: y[0],
        beta: y[1],
        gamma: y[2],
        delta: y[3],
        epsilon: y[4],
        kappa: init.kappa,
    })
}

/// Maximum relative residual of the six Burgers parameter equations over the
/// sample times `ts`, derivatives by central differences of step `h`.
pub fn residual_burgers_system(
    params: &ParameterFunctions,
    coeffs: &CoefficientSet,
    ts: &[f64],
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidData(format!("step must be positive, got {h}")));
    }
    let mut worst = 0.0f64;
    for &t in ts {
        let lo = params.eval(t - h)?;
        let mid = params.eval(t)?;
        let hi = params.eval(t + h)?;
        let a = coeffs.a.eval(t)?;
        let b = coeffs.b.eval(t)?;
        let f = coeffs.f.eval(t)?;
        let d2 = 2.0 * h;

        let dalpha = (hi.alpha - lo.alpha) / d2;
        let dbeta = (hi.beta - lo.beta) / d2;
        let dgamma = (hi.gamma - lo.gamma) / d2;
        let ddelta = (hi.delta - lo.delta) / d2;
        let deps = (hi.epsilon - lo.epsilon) / d2;
        let dmu = (hi.mu - lo.mu) / d2;

        let four_a_alpha = 4.0 * a * mid.alpha;
        let checks = [
            rel(
                dalpha + b + four_a_alpha * mid.alpha,
                &[dalpha, b, four_a_alpha * mid.alpha],
            ),
            rel(
                dbeta + four_a_alpha * mid.beta,
                &[dbeta, four_a_alpha * mid.beta],
            ),
            rel(
                dgamma - a * mid.beta * mid.beta,
                &[dgamma, a * mid.beta * mid.beta],
            ),
            rel(
                ddelta - f + four_a_alpha * mid.delta,
                &[ddelta, f, four_a_alpha * mid.delta],
            ),
            rel(
                deps + 2.0 * a * mid.delta * mid.beta,
                &[deps, 2.0 * a * mid.delta * mid.beta],
            ),
            {
                let log_mu = dmu / mid.mu;
                rel(log_mu - four_a_alpha, &[log_mu, four_a_alpha])
            },
        ];
        for r in checks {
            worst = worst.max(r);
        }
    }
    Ok(worst)
}

fn rel(residual: f64, terms: &[f64]) -> f64 {
    let scale = 1.0 + terms.iter().map(|v| v.abs()).sum::<f64>();
    residual.abs() / scale
}

// ---------------------------------------------------------------------------
