//! Assembly of explicit solutions from parameter families and seeds.
//!
//! A diffusion-type solution is
//!
//! ```text
//! u(x, t) = mu(t)^{-1/2} exp(alpha x^2 + delta x + kappa) v(beta x + epsilon, gamma)
//! ```
//!
//! where `v(xi, tau)` solves the autonomous model
//! `v_tau = v_xixi + v (r0 + h0 |v|^p)` and the parameters solve the
//! Riccati/Ermakov system for a coefficient set `(a, b, c, d, f, g; c0)`.
//! The substitution turns `v` into a solution of
//!
//! ```text
//! u_t = a u_xx - (g - c x) u_x + (d + L + M x - B x^2) u + h(x, t) |u|^p u
//! ```
//!
//! with induced coefficients
//!
//! ```text
//! B = b - c0 a beta^4,        M = f + 2 c0 a beta^3 epsilon,
//! L = a beta^2 (c0 epsilon^2 + r0),
//! h = h0 a beta^2 mu^{p/2} exp(-p (alpha x^2 + delta x + kappa)).
//! ```
//!
//! A Burgers-type solution is the affine-plus-scaled composition
//!
//! ```text
//! v(x, t) = alpha x + delta + beta u(beta x + 2 epsilon, 4 gamma)
//! ```
//!
//! where `u` solves `u_tau + u u_xi = u_xixi` and the parameters solve the
//! Burgers system; `v` then solves `v_t + 4a (v v_x - v_xx) = -b x + f`.

use crate::coeffs::CoefficientSet;
use crate::error::{Error, Result};
use crate::riccati::{InitialData, ParamSnapshot, ParameterFunctions};
use crate::seeds::{BurgersSeed, FisherSeed};

/// How the nonlinear term `N_p(u)` multiplying `h` is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Nonlinearity {
    /// `|u|^p u`. Real for every real `p`, coincides with `u^{p+1}` on
    /// `u >= 0`, and keeps odd symmetry for the even-`p` seed models.
    #[default]
    AbsPower,
    /// Literal `u^{p+1}`. Only meaningful for integer `p`; rejected
    /// otherwise at evaluation time.
    PlainPower,
}

/// How a non-positive `mu(t)` is treated when forming `mu^{-1/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MuHandling {
    /// Evaluation fails on `mu <= 0`; the window must avoid sign changes.
    #[default]
    RequirePositive,
    /// Use `|mu|^{-1/2}`. The substitution algebra only involves
    /// `mu^{p/2} mu^{-p/2}` and `(mu^{-1/2})' / mu^{-1/2}`, both of which
    /// survive a global sign flip, so the construction stays valid on
    /// negative stretches away from zeros of `mu`.
    AbsValue,
}

/// Pointwise values of the coefficients of the induced linear/nonlinear
/// equation `u_t = a u_xx - drift u_x + potential u + h N_p(u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedCoefficients {
    /// Diffusion coefficient `a(t)`.
    pub a: f64,
    /// Drift `g(t) - c(t) x`.
    pub drift: f64,
    /// Potential `d(t) + L(t) + M(t) x - B(t) x^2`.
    pub potential: f64,
    /// Nonlinear coupling `h(x, t)`.
    pub h: f64,
    /// Nonlinearity exponent `p`.
    pub p: f64,
}

/// A fully assembled solution of a variable-coefficient Fisher-KPP-type
/// equation.
pub struct GnlhSolution {
    params: ParameterFunctions,
    coeffs: CoefficientSet,
    seed: FisherSeed,
    k1: f64,
    k2: f64,
    nonlinearity: Nonlinearity,
    mu_handling: MuHandling,
}

impl std::fmt::Debug for GnlhSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GnlhSolution")
            .field("seed", &self.seed.id())
            .field("k1", &self.k1)
            .field("k2", &self.k2)
            .field("nonlinearity", &self.nonlinearity)
            .field("mu_handling", &self.mu_handling)
            .finish_non_exhaustive()
    }
}

/// Composes a diffusion-type parameter family with a seed solution.
///
/// The seed must solve the autonomous model `(r0, h0, p)` declared by the
/// coefficient set, the family must come from the diffusion-type system,
/// and the family must run with `l0 = +1` so that `gamma` is a forward
/// model time.
pub fn build_gnlh_solution(
    params: ParameterFunctions,
    coeffs: CoefficientSet,
    seed: FisherSeed,
    k1: f64,
    k2: f64,
) -> Result<GnlhSolution> {
    if !params.is_diffusion() {
        return Err(Error::InvalidData(
            "parameter family solves the Burgers-type system; use build_gbe_solution".into(),
        ));
    }
    if params.initial_data().l0 != 1 {
        return Err(Error::InvalidData(
            "seed composition needs l0 = +1 so that gamma is a forward model time".into(),
        ));
    }
    let declared = (coeffs.r0, coeffs.h0, coeffs.p);
    if seed.model() != declared {
        return Err(Error::InvalidData(format!(
            "seed {} solves the model (r0, h0, p) = {:?} but the coefficient set declares {:?}",
            seed.id(),
            seed.model(),
            declared
        )));
    }
    if !(k1.is_finite() && k2.is_finite()) {
        return Err(Error::InvalidData("seed parameters k1, k2 must be finite".into()));
    }
    Ok(GnlhSolution {
        params,
        coeffs,
        seed,
        k1,
        k2,
        nonlinearity: Nonlinearity::default(),
        mu_handling: MuHandling::default(),
    })
}

impl GnlhSolution {
    /// Replaces the nonlinear term convention.
    pub fn with_nonlinearity(mut self, nonlinearity: Nonlinearity) -> Self {
        self.nonlinearity = nonlinearity;
        self
    }

    /// Replaces the `mu <= 0` policy.
    pub fn with_mu_handling(mut self, mu_handling: MuHandling) -> Self {
        self.mu_handling = mu_handling;
        self
    }

    /// The underlying parameter family.
    pub fn params(&self) -> &ParameterFunctions {
        &self.params
    }

    /// The coefficient set the family was built from.
    pub fn coeffs(&self) -> &CoefficientSet {
        &self.coeffs
    }

    /// The seed in use.
    pub fn seed(&self) -> FisherSeed {
        self.seed
    }

    /// The seed parameters `(k1, k2)`.
    pub fn seed_params(&self) -> (f64, f64) {
        (self.k1, self.k2)
    }

    fn mu_magnitude(&self, t: f64, mu: f64) -> Result<f64> {
        let m = match self.mu_handling {
            MuHandling::RequirePositive => {
                if mu <= 0.0 {
                    return Err(Error::Domain(format!(
                        "mu({t}) = {mu} is not positive; restrict the time window \
                         or opt into MuHandling::AbsValue"
                    )));
                }
                mu
            }
            MuHandling::AbsValue => mu.abs(),
        };
        if m == 0.0 {
            return Err(Error::Singular {
                t,
                msg: "mu vanishes; the solution has a movable singularity here".into(),
            });
        }
        Ok(m)
    }

    /// Evaluates the solution at `(x, t)`.
    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        let s = self.params.eval(t)?;
        let m = self.mu_magnitude(t, s.mu)?;
        let shape = s.alpha * x * x + s.delta * x + s.kappa;
        let v = self.seed.eval(s.beta * x + s.epsilon, s.gamma, self.k1, self.k2)?;
        Ok(m.powf(-0.5) * shape.exp() * v)
    }

    /// The induced equation coefficients at `(x, t)`.
    pub fn induced_at(&self, x: f64, t: f64) -> Result<InducedCoefficients> {
        let s = self.params.eval(t)?;
        let m = self.mu_magnitude(t, s.mu)?;
        let cv = self.coeffs.eval(t)?;
        let c0 = f64::from(self.coeffs.c0);
        let p = self.coeffs.p;
        let beta2 = s.beta * s.beta;
        let big_b = cv.b - c0 * cv.a * beta2 * beta2;
        let big_m = cv.f + 2.0 * c0 * cv.a * beta2 * s.beta * s.epsilon;
        let big_l = cv.a * beta2 * (c0 * s.epsilon * s.epsilon + self.coeffs.r0);
        let shape = s.alpha * x * x + s.delta * x + s.kappa;
        let h = self.coeffs.h0 * cv.a * beta2 * m.powf(p / 2.0) * (-p * shape).exp();
        Ok(InducedCoefficients {
            a: cv.a,
            drift: cv.g - cv.c * x,
            potential: cv.d + big_l + big_m * x - big_b * x * x,
            h,
            p,
        })
    }

    /// The nonlinear term `N_p(u)` under the configured convention.
    pub fn nonlinear_term(&self, u: f64) -> Result<f64> {
        nonlinear_term(self.nonlinearity, self.coeffs.p, u)
    }

    /// The parameter snapshot at `t` (convenience passthrough).
    pub fn snapshot(&self, t: f64) -> Result<ParamSnapshot> {
        self.params.eval(t)
    }
}

/// Evaluates `N_p(u)` under a given convention.
pub fn nonlinear_term(nonlinearity: Nonlinearity, p: f64, u: f64) -> Result<f64> {
    match nonlinearity {
        Nonlinearity::AbsPower => Ok(u.abs().powf(p) * u),
        Nonlinearity::PlainPower => {
            if p.fract() != 0.0 {
                return Err(Error::Domain(format!(
                    "plain power u^{{p+1}} needs integer p, got p = {p}"
                )));
            }
            Ok(u.powi(p as i32 + 1))
        }
    }
}

/// A fully assembled solution of a variable-coefficient Burgers-type
/// equation `v_t + 4a (v v_x - v_xx) = -b x + f`.
pub struct GbeSolution {
    params: ParameterFunctions,
    coeffs: CoefficientSet,
    seed: BurgersSeed,
}

impl std::fmt::Debug for GbeSolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GbeSolution").field("seed", &self.seed.id()).finish_non_exhaustive()
    }
}

/// Composes a Burgers-type parameter family with a seed solution of the
/// classical Burgers equation.
pub fn build_gbe_solution(
    params: ParameterFunctions,
    coeffs: CoefficientSet,
    seed: BurgersSeed,
) -> Result<GbeSolution> {
    if params.is_diffusion() {
        return Err(Error::InvalidData(
            "parameter family solves the diffusion-type system; use build_gnlh_solution".into(),
        ));
    }
    Ok(GbeSolution { params, coeffs, seed })
}

impl GbeSolution {
    /// The underlying parameter family.
    pub fn params(&self) -> &ParameterFunctions {
        &self.params
    }

    /// The coefficient set the family was built from.
    pub fn coeffs(&self) -> &CoefficientSet {
        &self.coeffs
    }

    /// The seed in use.
    pub fn seed(&self) -> &BurgersSeed {
        &self.seed
    }

    /// Evaluates the solution at `(x, t)`.
    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        let s = self.params.eval(t)?;
        let u = self.seed.eval_unit(s.beta * x + 2.0 * s.epsilon, 4.0 * s.gamma)?;
        Ok(s.alpha * x + s.delta + s.beta * u)
    }

    /// The parameter snapshot at `t` (convenience passthrough).
    pub fn snapshot(&self, t: f64) -> Result<ParamSnapshot> {
        self.params.eval(t)
    }
}

/// Candidate closed forms of the constant-coefficient similarity map that
/// sends a solution `u` of `u_tau + u u_xi = u_xixi` to another field
/// `v(x, t)` built from the free data
/// `(alpha(0), beta(0), gamma(0), delta(0), epsilon(0))`.
///
/// The two candidates circulate side by side; [`crate::verify::audit_burgers_symmetry`]
/// measures which of them actually maps solutions to solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryCandidate {
    /// Affine slope `-1/(2t) - 1/(t (alpha(0) t - 1))`: singular at `t = 0`
    /// and unable to attain the stated data there.
    PoleAnchored,
    /// Affine slope `alpha(0)/(1 + alpha(0) t)`: attains the data at
    /// `t = 0` and agrees with the kernel combination of the free family.
    DataAnchored,
}

/// Evaluates a symmetry candidate at `(x, t)` over a unit-viscosity seed
/// `u(xi, tau)`. Only `(alpha, beta, gamma, delta, epsilon)` from `data`
/// enter; `mu` and `kappa` do not appear in the field.
pub fn burgers_symmetry(
    candidate: SymmetryCandidate,
    data: &InitialData,
    u: impl Fn(f64, f64) -> Result<f64>,
    x: f64,
    t: f64,
) -> Result<f64> {
    if data.beta == 0.0 {
        return Err(Error::InvalidData("symmetry map needs beta(0) != 0".into()));
    }
    match candidate {
        SymmetryCandidate::PoleAnchored => {
            let q = data.alpha * t - 1.0;
            if t == 0.0 || q == 0.0 {
                return Err(Error::Singular {
                    t,
                    msg: "pole-anchored candidate has a pole here".into(),
                });
            }
            let slope = -1.0 / (2.0 * t) - 1.0 / (t * q);
            let xi = -data.beta * x / q + data.epsilon - t * data.beta * data.delta / (2.0 * q);
            let tau = data.gamma - data.beta * data.beta * t / (4.0 * q);
            Ok(slope * x - data.delta / q - data.beta / q * u(xi, tau)?)
        }
        SymmetryCandidate::DataAnchored => {
            let q = 1.0 + data.alpha * t;
            if q == 0.0 {
                return Err(Error::Singular {
                    t,
                    msg: "data-anchored candidate has its movable singularity here".into(),
                });
            }
            let xi = data.beta * x / q + 2.0 * data.epsilon - data.beta * data.delta * t / q;
            let tau = 4.0 * data.gamma + data.beta * data.beta * t / q;
            Ok((data.alpha * x + data.delta) / q + data.beta / q * u(xi, tau)?)
        }
    }
}
