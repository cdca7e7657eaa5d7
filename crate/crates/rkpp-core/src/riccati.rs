//! Time-dependent parameter families for the quadratic-exponential
//! substitution.
//!
//! A family is a septuple `(mu, alpha, beta, gamma, delta, epsilon, kappa)`
//! of functions of `t` satisfying the coupled first-order system
//!
//! ```text
//! alpha'   = -b + 2 c alpha + 4 a alpha^2 + c0 a beta^4
//! beta'    = (c + 4 a alpha) beta
//! gamma'   = l0 a beta^2
//! delta'   = (c + 4 a alpha) delta + f - 2 alpha g + 2 c0 a beta^3 epsilon
//! epsilon' = -(g - 2 a delta) beta
//! kappa'   = -g delta + a delta^2 + c0 a epsilon^2 beta^2
//! mu'/mu   = -(4 a alpha + 2 d)
//! ```
//!
//! with `c0` either 0 (Riccati branch) or 1 (Ermakov branch) and `l0 = +1`
//! in the standard orientation. Three constructions are provided:
//!
//! * [`combine_riccati`]: the general c0 = 0 solution through arbitrary data
//!   at t = 0, assembled from the kernel functions of the characteristic
//!   equation.
//! * [`combine_ermakov`]: the general c0 = 1 solution, valid while
//!   `4 G^2 > beta(0)^4` where `G = gamma0 + alpha(0)`.
//! * [`solve_alternative`]: a closed-form family for unit diffusion with
//!   `beta = 1`, `epsilon = 0`, valid when `b = c0 + (c' - c^2)/4` and
//!   `f = (g' - c g)/2`.
//!
//! [`residual_riccati_system`] measures how well any family satisfies the
//! system by finite differences; every construction in this crate is checked
//! against it rather than trusted on faith.

use crate::coeffs::CoefficientSet;
use crate::error::{Error, Result};
use crate::expr::{differentiate, Expression};
use crate::kernel::{KernelFlavor, KernelSet};
use crate::ode::{find_root, integrate_dense, DenseOutput};
use serde::Serialize;

/// Integration tolerances for the auxiliary quadratures; one decade looser
/// than the kernel tolerances so the kernels dominate the error budget.
const RTOL: f64 = 1e-11;
const ATOL: f64 = 1e-12;

/// Number of sample points for coefficient-consistency checks.
const CHECK_SAMPLES: usize = 129;

/// Data prescribed at the anchor time of a parameter family.
///
/// `l0` is the sign in `gamma' = l0 a beta^2`; the standard orientation is
/// `+1` (forward model time). It scales no other equation and no data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InitialData {
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub kappa: f64,
    pub l0: i8,
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData {
            mu: 1.0,
            alpha: 0.0,
            beta: 1.0,
            gamma: 0.0,
            delta: 0.0,
            epsilon: 0.0,
            kappa: 0.0,
            l0: 1,
        }
    }
}

impl InitialData {
    fn validate_common(&self) -> Result<()> {
        let fields = [
            self.mu,
            self.alpha,
            self.beta,
            self.gamma,
            self.delta,
            self.epsilon,
            self.kappa,
        ];
        if fields.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidData(format!(
                "initial data must be finite, got {self:?}"
            )));
        }
        if self.l0 != 1 && self.l0 != -1 {
            return Err(Error::InvalidData(format!(
                "l0 must be +1 or -1, got {}",
                self.l0
            )));
        }
        if self.beta == 0.0 {
            return Err(Error::InvalidData(
                "beta(0) must be nonzero; the combined family degenerates otherwise".into(),
            ));
        }
        Ok(())
    }

    fn snapshot(&self) -> ParamSnapshot {
        ParamSnapshot {
            mu: self.mu,
            alpha: self.alpha,
            beta: self.beta,
            gamma: self.gamma,
            delta: self.delta,
            epsilon: self.epsilon,
            kappa: self.kappa,
        }
    }
}

/// Parameter values at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamSnapshot {
    pub mu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub kappa: f64,
}

/// Closed-form ingredients of the `beta = 1` family.
pub(crate) struct AltParams {
    pub(crate) c: Expression,
    pub(crate) g: Expression,
    /// Cumulative integrals `[int (c - 2d), int g^2]` from the anchor.
    pub(crate) dense: DenseOutput,
}

pub(crate) enum ParamInner {
    Riccati(KernelSet),
    Ermakov(KernelSet),
    Alternative(Box<AltParams>),
    BurgersCombine(KernelSet),
    BurgersDirect { dense: DenseOutput },
}

/// A solved parameter family, evaluable anywhere in its time window.
pub struct ParameterFunctions {
    pub(crate) inner: ParamInner,
    pub(crate) init: InitialData,
    pub(crate) t_anchor: f64,
    pub(crate) t_max: f64,
}

impl ParameterFunctions {
    /// The prescribed data at the anchor time.
    pub fn initial_data(&self) -> &InitialData {
        &self.init
    }

    /// Time at which the initial data is attached.
    pub fn t_anchor(&self) -> f64 {
        self.t_anchor
    }

    /// Upper end of the evaluable window.
    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Whether this family solves the diffusion-type system (as opposed to
    /// the Burgers-type one).
    pub fn is_diffusion(&self) -> bool {
        matches!(
            self.inner,
            ParamInner::Riccati(_) | ParamInner::Ermakov(_) | ParamInner::Alternative(_)
        )
    }

    /// The kernel set behind this family, when one exists (kernel-based
    /// combinations only).
    pub fn kernels(&self) -> Option<&KernelSet> {
        match &self.inner {
            ParamInner::Riccati(k) | ParamInner::Ermakov(k) | ParamInner::BurgersCombine(k) => {
                Some(k)
            }
            _ => None,
        }
    }

    /// Evaluate the full septuple at `t`.
    pub fn eval(&self, t: f64) -> Result<ParamSnapshot> {
        if t == self.t_anchor {
            return Ok(self.init.snapshot());
        }
        let snap = match &self.inner {
            ParamInner::Riccati(k) => eval_riccati(k, &self.init, t)?,
            ParamInner::Ermakov(k) => eval_ermakov(k, &self.init, t)?,
            ParamInner::Alternative(alt) => eval_alternative(alt, &self.init, self.t_anchor, t)?,
            ParamInner::BurgersCombine(k) => crate::burgers::eval_combine(k, &self.init, t)?,
            ParamInner::BurgersDirect { dense } => {
                crate::burgers::eval_direct(dense, &self.init, t)?
            }
        };
        ensure_finite(&snap, t)?;
        Ok(snap)
    }

    /// Evaluate only `mu(t)`. Unlike [`Self::eval`], this stays finite at a
    /// movable singularity of the family (where `mu` has its zero and the
    /// other parameters blow up), so it can certify `mu(t*) = 0`.
    pub fn mu(&self, t: f64) -> Result<f64> {
        if t == self.t_anchor {
            return Ok(self.init.mu);
        }
        match &self.inner {
            ParamInner::Riccati(k) => {
                let g_big = self.init.alpha + k.gamma0(t)?;
                Ok(-2.0 * self.init.mu * k.pair().mu0(t)? * g_big)
            }
            ParamInner::Ermakov(k) => {
                let (_, r) = ermakov_radicand(k, &self.init, t)?;
                Ok(self.init.mu * k.pair().mu0(t)? * r)
            }
            ParamInner::Alternative(alt) => {
                Ok(self.init.mu * alt.dense.eval_component(t, 0)?.exp())
            }
            ParamInner::BurgersCombine(k) => {
                let d_big = self.init.alpha - k.gamma0(t)?;
                Ok(2.0 * self.init.mu * k.pair().mu0(t)? * d_big)
            }
            ParamInner::BurgersDirect { dense } => {
                Ok(self.init.mu * dense.eval_component(t, 5)?.exp())
            }
        }
    }
}

fn ensure_finite(snap: &ParamSnapshot, t: f64) -> Result<()> {
    let fields = [
        snap.mu,
        snap.alpha,
        snap.beta,
        snap.gamma,
        snap.delta,
        snap.epsilon,
        snap.kappa,
    ];
    if fields.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular {
            t,
            msg: format!("parameter family left the finite domain: {snap:?}"),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// c0 = 0 combination
// ---------------------------------------------------------------------------

/// Combine the diffusion kernels into the general c0 = 0 family through
/// `init` at t = 0.
///
/// With `G(t) = alpha(0) + gamma0(t)` and `s = delta(0) + epsilon0(t)`:
///
/// ```text
/// mu      = -2 mu(0) mu0 G
/// alpha   = alpha0 - beta0^2 / (4G)
/// beta    = -beta(0) beta0 / (2G)
/// gamma   = gamma(0) - l0 beta(0)^2 / (4G)
/// delta   = delta0 - beta0 s / (2G)
/// epsilon = epsilon(0) - beta(0) s / (2G)
/// kappa   = kappa(0) + kappa0 - s^2 / (4G)
/// ```
///
/// The family has a movable singularity at each zero of `G`; `mu` vanishes
/// there and the remaining parameters blow up.
pub fn combine_riccati(kernels: KernelSet, init: InitialData) -> Result<ParameterFunctions> {
    if kernels.flavor() != KernelFlavor::Diffusion {
        return Err(Error::InvalidData(
            "combine_riccati expects diffusion kernels".into(),
        ));
    }
    if kernels.coeffs().c0 != 0 {
        return Err(Error::InvalidData(
            "combine_riccati solves the c0 = 0 system; use combine_ermakov for c0 = 1".into(),
        ));
    }
    init.validate_common()?;
    if init.mu == 0.0 {
        return Err(Error::InvalidData("mu(0) must be nonzero".into()));
    }
    let t_max = kernels.t_max();
    Ok(ParameterFunctions {
        inner: ParamInner::Riccati(kernels),
        init,
        t_anchor: 0.0,
        t_max,
    })
}

fn eval_riccati(k: &KernelSet, d: &InitialData, t: f64) -> Result<ParamSnapshot> {
    let alpha0 = k.alpha0(t)?;
    let beta0 = k.beta0(t)?;
    let gamma0 = k.gamma0(t)?;
    let delta0 = k.delta0(t)?;
    let eps0 = k.epsilon0(t)?;
    let kappa0 = k.kappa0(t)?;
    let g_big = d.alpha + gamma0;
    if g_big == 0.0 {
        return Err(Error::Singular {
            t,
            msg: "movable singularity: alpha(0) + gamma0(t) = 0".into(),
        });
    }
    let s = d.delta + eps0;
    let l0 = f64::from(d.l0);
    Ok(ParamSnapshot {
        mu: -2.0 * d.mu * k.pair().mu0(t)? * g_big,
        alpha: alpha0 - beta0 * beta0 / (4.0 * g_big),
        beta: -d.beta * beta0 / (2.0 * g_big),
        gamma: d.gamma - l0 * d.beta * d.beta / (4.0 * g_big),
        delta: delta0 - beta0 * s / (2.0 * g_big),
        epsilon: d.epsilon - d.beta * s / (2.0 * g_big),
        kappa: d.kappa + kappa0 - s * s / (4.0 * g_big),
    })
}

// ---------------------------------------------------------------------------
// c0 = 1 combination
// ---------------------------------------------------------------------------

/// Combine the diffusion kernels into the general c0 = 1 family through
/// `init` at t = 0.
///
/// With `G(t) = gamma0(t) + alpha(0)` and `R = sqrt(4 G^2 - beta(0)^4)`:
///
/// ```text
/// mu      = mu(0) mu0 R
/// alpha   = alpha0 - beta0^2 G / R^2
/// beta    = beta(0) beta0 / R
/// gamma   = gamma(0) - (l0/4) ln[(G + beta(0)^2/2) / (G - beta(0)^2/2)]
/// delta   = delta0 + beta0 (epsilon(0) beta(0)^3 - 2 G (epsilon0 + delta(0))) / R^2
/// epsilon = (beta(0) (delta(0) + epsilon0) - 2 epsilon(0) G) / R
/// kappa   = kappa0 + kappa(0) + beta(0)^3 epsilon(0) (epsilon0 + delta(0)) / R^2
///           - G (beta(0)^2 epsilon(0)^2 + (epsilon0 + delta(0))^2) / R^2
/// ```
///
/// The factor 2 on `epsilon(0) G` in the epsilon line is forced by the
/// system: without it epsilon would start from epsilon(0)/2 and miss its own
/// equation by a factor of two (see the unit tests, which check both the
/// t -> 0 limit and the differential equation).
///
/// Requires `mu(0) > 0` and holds while `4 G^2 > beta(0)^4`.
pub fn combine_ermakov(kernels: KernelSet, init: InitialData) -> Result<ParameterFunctions> {
    if kernels.flavor() != KernelFlavor::Diffusion {
        return Err(Error::InvalidData(
            "combine_ermakov expects diffusion kernels".into(),
        ));
    }
    if kernels.coeffs().c0 != 1 {
        return Err(Error::InvalidData(
            "combine_ermakov solves the c0 = 1 system; use combine_riccati for c0 = 0".into(),
        ));
    }
    init.validate_common()?;
    if !(init.mu > 0.0) {
        return Err(Error::InvalidData(format!(
            "the c0 = 1 combination requires mu(0) > 0, got {}",
            init.mu
        )));
    }
    let t_max = kernels.t_max();
    Ok(ParameterFunctions {
        inner: ParamInner::Ermakov(kernels),
        init,
        t_anchor: 0.0,
        t_max,
    })
}

/// `(G, R)` for the c0 = 1 combination, or an error once `R^2 <= 0`.
fn ermakov_radicand(k: &KernelSet, d: &InitialData, t: f64) -> Result<(f64, f64)> {
    let g_big = k.gamma0(t)? + d.alpha;
    let b_sq = d.beta * d.beta;
    let r_sq = 4.0 * g_big * g_big - b_sq * b_sq;
    if r_sq <= 0.0 {
        return Err(Error::Singular {
            t,
            msg: format!(
                "the c0 = 1 combination requires 4 G^2 > beta(0)^4; radicand is {r_sq:.6e}"
            ),
        });
    }
    Ok((g_big, r_sq.sqrt()))
}

fn eval_ermakov(k: &KernelSet, d: &InitialData, t: f64) -> Result<ParamSnapshot> {
    let alpha0 = k.alpha0(t)?;
    let beta0 = k.beta0(t)?;
    let delta0 = k.delta0(t)?;
    let eps0 = k.epsilon0(t)?;
    let kappa0 = k.kappa0(t)?;
    let (g_big, r) = ermakov_radicand(k, d, t)?;
    let r_sq = r * r;
    let b_sq = d.beta * d.beta;
    let half = b_sq / 2.0;
    let sum = eps0 + d.delta;
    let l0 = f64::from(d.l0);
    Ok(ParamSnapshot {
        mu: d.mu * k.pair().mu0(t)? * r,
        alpha: alpha0 - beta0 * beta0 * g_big / r_sq,
        beta: d.beta * beta0 / r,
        gamma: d.gamma - l0 * 0.25 * ((g_big + half) / (g_big - half)).ln(),
        delta: delta0 + beta0 * (d.epsilon * d.beta * b_sq - 2.0 * g_big * sum) / r_sq,
        epsilon: (d.beta * (d.delta + eps0) - 2.0 * d.epsilon * g_big) / r,
        kappa: kappa0 + d.kappa + d.beta * b_sq * d.epsilon * sum / r_sq
            - g_big * (b_sq * d.epsilon * d.epsilon + sum * sum) / r_sq,
    })
}

// ---------------------------------------------------------------------------
// beta = 1 closed-form family
// ---------------------------------------------------------------------------

/// Closed-form family for unit diffusion with `beta = 1` and `epsilon = 0`:
///
/// ```text
/// alpha = -c/4          delta = g/2           gamma = gamma(tr) + (t - tr)
/// mu    = mu(tr) exp int_tr^t (c - 2d)        kappa = kappa(tr) - (1/4) int_tr^t g^2
/// ```
///
/// anchored at `tr = window.0`. This solves the full system exactly when the
/// coefficients satisfy the two structural identities
///
/// ```text
/// b = c0 + (c' - c^2)/4        g' = c g + 2 f
/// ```
///
/// both of which are checked by dense sampling, as are `a = 1`,
/// `alpha(tr) = -c(tr)/4` and `delta(tr) = g(tr)/2`. Unlike the kernel
/// combinations this family tolerates coefficients singular at t = 0, since
/// nothing is anchored there.
pub fn solve_alternative(
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
    init.validate_common()?;
    if init.mu == 0.0 {
        return Err(Error::InvalidData("mu(tr) must be nonzero".into()));
    }
    if init.l0 != 1 {
        return Err(Error::InvalidData(
            "the beta = 1 family is derived for l0 = +1".into(),
        ));
    }
    if init.beta != 1.0 {
        return Err(Error::InvalidData(format!(
            "the beta = 1 family requires beta(tr) = 1, got {}",
            init.beta
        )));
    }
    if init.epsilon != 0.0 {
        return Err(Error::InvalidData(format!(
            "the beta = 1 family requires epsilon(tr) = 0, got {}",
            init.epsilon
        )));
    }
    let c_ref = coeffs.c.eval(t_ref)?;
    if (init.alpha + c_ref / 4.0).abs() > 1e-9 * (1.0 + c_ref.abs() / 4.0) {
        return Err(Error::InvalidData(format!(
            "alpha(tr) must equal -c(tr)/4 = {}, got {}",
            -c_ref / 4.0,
            init.alpha
        )));
    }
    let g_ref = coeffs.g.eval(t_ref)?;
    if (init.delta - g_ref / 2.0).abs() > 1e-9 * (1.0 + g_ref.abs() / 2.0) {
        return Err(Error::InvalidData(format!(
            "delta(tr) must equal g(tr)/2 = {}, got {}",
            g_ref / 2.0,
            init.delta
        )));
    }

    let c_prime = differentiate(&coeffs.c);
    let g_prime = differentiate(&coeffs.g);
    let c0 = f64::from(coeffs.c0);
    for i in 0..CHECK_SAMPLES {
        let t = t_ref + (t_max - t_ref) * (i as f64) / ((CHECK_SAMPLES - 1) as f64);
        let a = coeffs.a.eval(t)?;
        if (a - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidData(format!(
                "the beta = 1 family requires unit diffusion; a({t}) = {a}"
            )));
        }
        let b = coeffs.b.eval(t)?;
        let c = coeffs.c.eval(t)?;
        let want_b = c0 + (c_prime.eval(t)? - c * c) / 4.0;
        if (b - want_b).abs() > 1e-8 * (1.0 + b.abs()) {
            return Err(Error::InvalidData(format!(
                "coefficients violate b = c0 + (c' - c^2)/4 at t = {t}: b = {b}, required {want_b}"
            )));
        }
        let g = coeffs.g.eval(t)?;
        let f = coeffs.f.eval(t)?;
        let gp = g_prime.eval(t)?;
        if (gp - c * g - 2.0 * f).abs() > 1e-8 * (1.0 + gp.abs()) {
            return Err(Error::InvalidData(format!(
                "coefficients violate g' = c g + 2 f at t = {t}"
            )));
        }
    }

    let ce = coeffs.c.clone();
    let de = coeffs.d.clone();
    let ge = coeffs.g.clone();
    let dense = integrate_dense(
        move |t, _y, dy| {
            let g = ge.eval(t)?;
            dy[0] = ce.eval(t)? - 2.0 * de.eval(t)?;
            dy[1] = g * g;
            Ok(())
        },
        t_ref,
        &[0.0, 0.0],
        t_max,
        RTOL,
        ATOL,
    )?;
    Ok(ParameterFunctions {
        inner: ParamInner::Alternative(Box::new(AltParams {
            c: coeffs.c.clone(),
            g: coeffs.g.clone(),
            dense,
        })),
        init: *init,
        t_anchor: t_ref,
        t_max,
    })
}

fn eval_alternative(
    alt: &AltParams,
    init: &InitialData,
    t_anchor: f64,
    t: f64,
) -> Result<ParamSnapshot> {
    let int_c2d = alt.dense.eval_component(t, 0)?;
    let int_g2 = alt.dense.eval_component(t, 1)?;
    Ok(ParamSnapshot {
        mu: init.mu * int_c2d.exp(),
        alpha: -alt.c.eval(t)? / 4.0,
        beta: 1.0,
        gamma: init.gamma + (t - t_anchor),
        delta: alt.g.eval(t)? / 2.0,
        epsilon: 0.0,
        kappa: init.kappa - int_g2 / 4.0,
    })
}

/// Reconstruct the drift `g` from the forcing `f` by integrating
/// `g' = c g + 2 f` forward from `g(t_ref) = g_ref`. The returned dense
/// output has one component, `g(t)`.
pub fn g_from_f(
    c: &Expression,
    f: &Expression,
    g_ref: f64,
    t_ref: f64,
    t_max: f64,
) -> Result<DenseOutput> {
    let ce = c.clone();
    let fe = f.clone();
    integrate_dense(
        move |t, y, dy| {
            dy[0] = ce.eval(t)? * y[0] + 2.0 * fe.eval(t)?;
            Ok(())
        },
        t_ref,
        &[g_ref],
        t_max,
        RTOL,
        ATOL,
    )
}

// ---------------------------------------------------------------------------
// Singularities
// ---------------------------------------------------------------------------

/// Locate the movable singularity of a combined family inside `bracket`:
/// the zero of `alpha(0) + gamma0(t)` (diffusion) or of
/// `alpha(0) - gamma0(t)` (Burgers). `mu` vanishes there.
///
/// Fails with a root-finding error if the expression does not change sign
/// over the bracket.
pub fn find_singularity(
    kernels: &KernelSet,
    alpha_init: f64,
    bracket: (f64, f64),
    tol: f64,
) -> Result<f64> {
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidData(format!(
            "bracket must be a finite forward interval, got [{lo}, {hi}]"
        )));
    }
    let sign = match kernels.flavor() {
        KernelFlavor::Diffusion => 1.0,
        KernelFlavor::Burgers => -1.0,
    };
    find_root(|t| Ok(alpha_init + sign * kernels.gamma0(t)?), lo, hi, tol)
}

// ---------------------------------------------------------------------------
// System residual
// ---------------------------------------------------------------------------

/// Maximum relative residual of the seven system equations over the sample
/// times `ts`, with derivatives approximated by central differences of step
/// `h`. Each equation is scaled by one plus the sum of the magnitudes of its
/// terms, so the result is meaningful near blow-up as well as near zero.
///
/// All of `t - h`, `t + h` must lie inside the family's window.
pub fn residual_riccati_system(
    params: &ParameterFunctions,
    coeffs: &CoefficientSet,
    ts: &[f64],
    h: f64,
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidData(format!("step must be positive, got {h}")));
    }
    let c0 = f64::from(coeffs.c0);
    let l0 = f64::from(params.init.l0);
    let mut worst = 0.0f64;
    for &t in ts {
        let lo = params.eval(t - h)?;
        let mid = params.eval(t)?;
        let hi = params.eval(t + h)?;
        let v = coeffs.eval(t)?;
        let d2 = 2.0 * h;

        let dalpha = (hi.alpha - lo.alpha) / d2;
        let dbeta = (hi.beta - lo.beta) / d2;
        let dgamma = (hi.gamma - lo.gamma) / d2;
        let ddelta = (hi.delta - lo.delta) / d2;
        let deps = (hi.epsilon - lo.epsilon) / d2;
        let dkappa = (hi.kappa - lo.kappa) / d2;
        let dmu = (hi.mu - lo.mu) / d2;

        let b4 = mid.beta.powi(4);
        let lin = v.c + 4.0 * v.a * mid.alpha;

        let checks = [
            rel(
                dalpha + v.b - 2.0 * v.c * mid.alpha
                    - 4.0 * v.a * mid.alpha * mid.alpha
                    - c0 * v.a * b4,
                &[
                    dalpha,
                    v.b,
                    2.0 * v.c * mid.alpha,
                    4.0 * v.a * mid.alpha * mid.alpha,
                    c0 * v.a * b4,
                ],
            ),
            rel(dbeta - lin * mid.beta, &[dbeta, lin * mid.beta]),
            rel(
                dgamma - l0 * v.a * mid.beta * mid.beta,
                &[dgamma, v.a * mid.beta * mid.beta],
            ),
            rel(
                ddelta
                    - lin * mid.delta
                    - (v.f - 2.0 * mid.alpha * v.g)
                    - 2.0 * c0 * v.a * mid.beta.powi(3) * mid.epsilon,
                &[
                    ddelta,
                    lin * mid.delta,
                    v.f - 2.0 * mid.alpha * v.g,
                    2.0 * c0 * v.a * mid.beta.powi(3) * mid.epsilon,
                ],
            ),
            rel(
                deps + (v.g - 2.0 * v.a * mid.delta) * mid.beta,
                &[deps, (v.g - 2.0 * v.a * mid.delta) * mid.beta],
            ),
            rel(
                dkappa + v.g * mid.delta
                    - v.a * mid.delta * mid.delta
                    - c0 * v.a * mid.epsilon * mid.epsilon * mid.beta * mid.beta,
                &[
                    dkappa,
                    v.g * mid.delta,
                    v.a * mid.delta * mid.delta,
                    c0 * v.a * mid.epsilon * mid.epsilon * mid.beta * mid.beta,
                ],
            ),
            {
                let log_mu = dmu / mid.mu;
                rel(
                    log_mu + 4.0 * v.a * mid.alpha + 2.0 * v.d,
                    &[log_mu, 4.0 * v.a * mid.alpha, 2.0 * v.d],
                )
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
