//! Closed-form seed solutions of the canonical model equations.
//!
//! The diffusion construction maps the variable-coefficient equation onto
//! `v_tau = v_xixi + v (r0 + h0 v^p)`; the Burgers construction maps onto
//! the classical equation `u_tau + u u_xi = nu u_xixi`. Every seed here is
//! an explicit solution of one of those models, checked against the model by
//! finite differences in the tests.

use crate::error::{Error, Result};
use crate::specfun::{erfc, heat_polynomial, jacobi_sd, EllipticModulus};
use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

/// Divide with a pole guard: a denominator this small relative to the
/// numerator means the seed is evaluated on (or numerically at) a pole.
fn guard_div(numer: f64, denom: f64, what: &str, xi: f64, tau: f64) -> Result<f64> {
    if denom.abs() < 1e-12 * (1.0 + numer.abs()) {
        return Err(Error::Seed(format!(
            "{what} has a pole at (xi, tau) = ({xi}, {tau})"
        )));
    }
    Ok(numer / denom)
}

/// Jacobi sd with the fixed modulus sqrt(2)/2 used by every elliptic seed.
/// `|sd(z)| <= sqrt(2)` and the function has no real poles at this modulus.
fn sd_half(z: f64) -> f64 {
    let k = EllipticModulus::new(FRAC_1_SQRT_2).expect("sqrt(2)/2 is a valid modulus");
    jacobi_sd(z, k)
}

// ---------------------------------------------------------------------------
// Reaction-diffusion seeds
// ---------------------------------------------------------------------------

/// Seed solutions of `v_tau = v_xixi + v (r0 + h0 v^p)`.
///
/// Each variant fixes its own model constants `(r0, h0, p)`; they are not
/// adjustable, since the seed solves exactly one member of the family.
/// `u3` carries one shape parameter (`k1`), `u1` none, the rest two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FisherSeed {
    /// Algebraic-exponential front, model `(1, -1, 1)`.
    U1,
    /// Rational solution, model `(0, -1, 2)`.
    U2,
    /// Elliptic similarity solution, model `(0, 1, 2)`.
    U3,
    /// Trigonometric quotient, model `(-1, -1, 2)`.
    U4,
    /// Decaying elliptic envelope, model `(-2, 1, 2)`.
    U5,
    /// Growing elliptic envelope, model `(2, 1, 2)`.
    U6,
}

impl FisherSeed {
    pub const ALL: [FisherSeed; 6] = [
        FisherSeed::U1,
        FisherSeed::U2,
        FisherSeed::U3,
        FisherSeed::U4,
        FisherSeed::U5,
        FisherSeed::U6,
    ];

    pub fn id(self) -> &'static str {
        match self {
            FisherSeed::U1 => "u1",
            FisherSeed::U2 => "u2",
            FisherSeed::U3 => "u3",
            FisherSeed::U4 => "u4",
            FisherSeed::U5 => "u5",
            FisherSeed::U6 => "u6",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|s| s.id() == id)
            .ok_or_else(|| Error::Seed(format!("unknown diffusion seed '{id}'")))
    }

    /// Model constants `(r0, h0, p)` this seed solves.
    ///
    /// `u3` belongs to the cubic model `p = 2` (the same one `u5`/`u6`
    /// solve): substituting it into the `p = 3` model leaves an O(1)
    /// defect, which a test pins down.
    pub fn model(self) -> (f64, f64, f64) {
        match self {
            FisherSeed::U1 => (1.0, -1.0, 1.0),
            FisherSeed::U2 => (0.0, -1.0, 2.0),
            FisherSeed::U3 => (0.0, 1.0, 2.0),
            FisherSeed::U4 => (-1.0, -1.0, 2.0),
            FisherSeed::U5 => (-2.0, 1.0, 2.0),
            FisherSeed::U6 => (2.0, 1.0, 2.0),
        }
    }

    /// How many shape parameters the seed takes (leading `k1`, then `k2`).
    pub fn k_arity(self) -> usize {
        match self {
            FisherSeed::U1 => 0,
            FisherSeed::U3 => 1,
            _ => 2,
        }
    }

    /// Evaluate at model coordinates. Unused shape parameters are ignored.
    pub fn eval(self, xi: f64, tau: f64, k1: f64, k2: f64) -> Result<f64> {
        match self {
            FisherSeed::U1 => {
                let w = (xi / 6.0f64.sqrt() - 5.0 * tau / 6.0).exp();
                let den = 1.0 + (SQRT_2 - 1.0) * w;
                guard_div(1.0, den * den, "u1", xi, tau)
            }
            FisherSeed::U2 => {
                let numer = SQRT_2 * (2.0 * xi + k1);
                let den = xi * xi + k1 * xi + 6.0 * tau + k2;
                guard_div(numer, den, "u2", xi, tau)
            }
            FisherSeed::U3 => {
                let z = xi * xi / 2.0 + k1 * xi + 3.0 * tau;
                Ok(0.5 * SQRT_2 * (xi + k1) * sd_half(z))
            }
            FisherSeed::U4 => {
                let arg = FRAC_1_SQRT_2 * xi;
                let numer = k2 * arg.sin();
                let den = k1 * (1.5 * tau).exp() + k2 * arg.cos();
                guard_div(numer, den, "u4", xi, tau)
            }
            FisherSeed::U5 => {
                let e = (-3.0 * tau).exp();
                let z = k1 * (xi + k2).cos() * e;
                Ok(0.5 * SQRT_2 * k1 * (xi + k2).sin() * e * sd_half(z))
            }
            FisherSeed::U6 => {
                let e = (3.0 * tau).exp();
                let z = k1 * (xi + k2).cosh() * e;
                Ok(0.5 * SQRT_2 * k1 * (xi + k2).sinh() * e * sd_half(z))
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Burgers seeds
// ---------------------------------------------------------------------------

/// Seed solutions of `u_tau + u u_xi = nu u_xixi`, each with its natural
/// viscosity. [`BurgersSeed::eval_unit`] rescales any of them to the
/// `nu = 1` normalization used by the similarity reduction: if `w` solves
/// the `nu` equation then `w(xi, tau/nu)/nu` solves the unit one.
#[derive(Debug, Clone, PartialEq)]
pub enum BurgersSeed {
    /// Travelling front `speed - amplitude * tanh[(amplitude/2)(xi - speed
    /// tau + center)]`, `nu = 1`.
    Shock {
        speed: f64,
        amplitude: f64,
        center: f64,
    },
    /// Single-hump solution controlled by the Reynolds-like exponent `re`,
    /// `nu = 1/2`, defined for `tau > 0`.
    Triangular { re: f64 },
    /// N-wave of lobe mass parameter `mass > 0`, `nu = 1`, `tau > 0`.
    NWave { mass: f64 },
    /// Rational solution from a heat-polynomial ratio with the given
    /// coefficients `[a0, ..., ak]`, `nu = 1/2`.
    Kampe { coeffs: Vec<f64> },
}

impl BurgersSeed {
    pub fn id(&self) -> &'static str {
        match self {
            BurgersSeed::Shock { .. } => "shock",
            BurgersSeed::Triangular { .. } => "triangular",
            BurgersSeed::NWave { .. } => "nwave",
            BurgersSeed::Kampe { .. } => "kampe",
        }
    }

    /// The viscosity for which this seed solves the classical equation.
    pub fn viscosity(&self) -> f64 {
        match self {
            BurgersSeed::Shock { .. } | BurgersSeed::NWave { .. } => 1.0,
            BurgersSeed::Triangular { .. } | BurgersSeed::Kampe { .. } => 0.5,
        }
    }

    /// Evaluate the seed in its natural viscosity normalization.
    pub fn eval(&self, xi: f64, tau: f64) -> Result<f64> {
        match self {
            BurgersSeed::Shock {
                speed,
                amplitude,
                center,
            } => {
                let z = 0.5 * amplitude * (xi - speed * tau + center);
                Ok(speed - amplitude * z.tanh())
            }
            BurgersSeed::Triangular { re } => {
                if !(tau > 0.0) {
                    return Err(Error::Seed(format!(
                        "the triangular wave needs tau > 0, got {tau}"
                    )));
                }
                let q = re.exp_m1(); // e^re - 1
                let gaussian = (-xi * xi / (2.0 * tau)).exp() / (2.0 * PI * tau).sqrt();
                let numer = q * gaussian;
                let den = 1.0 + 0.5 * q * erfc(xi / (2.0 * tau).sqrt());
                guard_div(numer, den, "triangular wave", xi, tau)
            }
            BurgersSeed::NWave { mass } => {
                if !(tau > 0.0) {
                    return Err(Error::Seed(format!("the N-wave needs tau > 0, got {tau}")));
                }
                if !(*mass > 0.0) {
                    return Err(Error::Seed(format!(
                        "the N-wave mass parameter must be positive, got {mass}"
                    )));
                }
                let w = (mass / tau).sqrt() * (-xi * xi / (4.0 * tau)).exp();
                Ok(xi / tau * w / (1.0 + w))
            }
            BurgersSeed::Kampe { coeffs } => {
                if coeffs.len() < 2 {
                    return Err(Error::Seed(
                        "the heat-polynomial seed needs at least two coefficients".into(),
                    ));
                }
                if coeffs.len() > 170 {
                    return Err(Error::Seed(
                        "heat-polynomial order limited to 170 by f64 factorials".into(),
                    ));
                }
                let theta = tau / 2.0;
                let mut numer = 0.0;
                let mut den = 0.0;
                for (m, &am) in coeffs.iter().enumerate() {
                    let m32 = m as u32;
                    den += am * heat_polynomial(m32, xi, theta);
                    if m >= 1 {
                        numer += (m as f64) * am * heat_polynomial(m32 - 1, xi, theta);
                    }
                }
                guard_div(-numer, den, "heat-polynomial seed", xi, tau)
            }
        }
    }

    /// Evaluate rescaled to the unit-viscosity equation
    /// `u_tau + u u_xi = u_xixi`.
    pub fn eval_unit(&self, xi: f64, tau: f64) -> Result<f64> {
        let nu = self.viscosity();
        Ok(self.eval(xi, tau / nu)? / nu)
    }
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    // Second-derivative stencils amplify function noise by 1/H^2; 1e-3
    // balances that against O(H^2) truncation for the elliptic seeds.
    const H: f64 = 1e-3;

    /// Central second-order residual of v_tau - v_xixi - v (r0 + h0 v^p),
    /// relative to the size of its terms.
    fn fisher_residual(
        seed: FisherSeed,
        xi: f64,
        tau: f64,
        k1: f64,
        k2: f64,
        model: (f64, f64, f64),
    ) -> f64 {
        let v = |x: f64, t: f64| seed.eval(x, t, k1, k2).unwrap();
        let vc = v(xi, tau);
        let vt = (v(xi, tau + H) - v(xi, tau - H)) / (2.0 * H);
        let vxx = (v(xi + H, tau) - 2.0 * vc + v(xi - H, tau)) / (H * H);
        let (r0, h0, p) = model;
        let reaction = vc * (r0 + h0 * vc.abs().powf(p) * vc.signum().powf(p));
        // |v|^p sign(v)^p = v^p for integer p; written this way it also
        // covers seeds that change sign.
        let r = vt - vxx - reaction;
        r.abs() / (1.0 + vt.abs() + vxx.abs() + reaction.abs())
    }

    #[test]
    fn fisher_seeds_satisfy_their_models() {
        for seed in FisherSeed::ALL {
            let (k1, k2) = match seed {
                FisherSeed::U4 => (2.0, 0.5), // keep clear of the pole line
                _ => (0.7, 0.3),
            };
            for &xi in &[-1.5, -0.4, 0.6, 1.3] {
                for &tau in &[0.2, 0.6] {
                    let r = fisher_residual(seed, xi, tau, k1, k2, seed.model());
                    assert!(
                        r < 1e-5,
                        "{} residual {r} at ({xi}, {tau})",
                        seed.id()
                    );
                }
            }
        }
    }

    #[test]
    fn u3_belongs_to_the_cubic_model() {
        // Substituting u3 into the quartic model (p = 3) leaves an O(1)
        // defect; the cubic model (p = 2) absorbs it to rounding level.
        let (xi, tau, k1) = (0.8, 0.3, 0.7);
        let good = fisher_residual(FisherSeed::U3, xi, tau, k1, 0.0, (0.0, 1.0, 2.0));
        let bad = fisher_residual(FisherSeed::U3, xi, tau, k1, 0.0, (0.0, 1.0, 3.0));
        assert!(good < 1e-5, "cubic-model residual {good}");
        assert!(bad > 1e-2, "quartic-model residual unexpectedly small: {bad}");
    }

    #[test]
    fn u1_has_no_free_parameters() {
        let a = FisherSeed::U1.eval(0.3, 0.2, 0.0, 0.0).unwrap();
        let b = FisherSeed::U1.eval(0.3, 0.2, 5.0, -7.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(FisherSeed::U1.k_arity(), 0);
        assert_eq!(FisherSeed::U3.k_arity(), 1);
        assert_eq!(FisherSeed::U2.k_arity(), 2);
    }

    #[test]
    fn fisher_pole_guards() {
        assert!(matches!(
            FisherSeed::U2.eval(0.0, 0.0, 0.0, 0.0),
            Err(Error::Seed(_))
        ));
        assert!(matches!(
            FisherSeed::U4.eval(0.0, 0.0, 1.0, -1.0),
            Err(Error::Seed(_))
        ));
    }

    /// Residual of u_tau + u u_xi - nu u_xixi for a unit-rescaled seed.
    fn classical_residual(u: &dyn Fn(f64, f64) -> f64, xi: f64, tau: f64, nu: f64) -> f64 {
        let uc = u(xi, tau);
        let ut = (u(xi, tau + H) - u(xi, tau - H)) / (2.0 * H);
        let ux = (u(xi + H, tau) - u(xi - H, tau)) / (2.0 * H);
        let uxx = (u(xi + H, tau) - 2.0 * uc + u(xi - H, tau)) / (H * H);
        let r = ut + uc * ux - nu * uxx;
        r.abs() / (1.0 + ut.abs() + (uc * ux).abs() + (nu * uxx).abs())
    }

    #[test]
    fn burgers_seeds_satisfy_the_classical_equation() {
        let seeds: Vec<BurgersSeed> = vec![
            BurgersSeed::Shock {
                speed: 1.0,
                amplitude: 1.0,
                center: 0.0,
            },
            BurgersSeed::Triangular { re: 1.0 },
            BurgersSeed::NWave { mass: 1.0 },
            BurgersSeed::Kampe {
                coeffs: vec![1.0, 1.0],
            },
        ];
        for seed in &seeds {
            let nu = seed.viscosity();
            for &xi in &[-0.8, 0.3, 1.1] {
                for &tau in &[0.4, 0.9] {
                    let native = classical_residual(
                        &|x, t| seed.eval(x, t).unwrap(),
                        xi,
                        tau,
                        nu,
                    );
                    assert!(
                        native < 1e-5,
                        "{} native residual {native} at ({xi}, {tau})",
                        seed.id()
                    );
                    let unit = classical_residual(
                        &|x, t| seed.eval_unit(x, t).unwrap(),
                        xi,
                        tau,
                        1.0,
                    );
                    assert!(
                        unit < 1e-5,
                        "{} unit residual {unit} at ({xi}, {tau})",
                        seed.id()
                    );
                }
            }
        }
    }

    #[test]
    fn heat_polynomial_seed_oracle() {
        // k = 1, a = (1, 1): u = -1/(1 + xi) at tau = 0, so u(1, 0) = -1/2.
        let seed = BurgersSeed::Kampe {
            coeffs: vec![1.0, 1.0],
        };
        let got = seed.eval(1.0, 0.0).unwrap();
        assert!((got + 0.5).abs() < 1e-14, "got {got}");
    }

    #[test]
    fn shock_residual_is_tiny() {
        let seed = BurgersSeed::Shock {
            speed: 1.0,
            amplitude: 1.0,
            center: 0.0,
        };
        for &xi in &[-1.0, 0.0, 2.0] {
            let r = classical_residual(&|x, t| seed.eval(x, t).unwrap(), xi, 0.7, 1.0);
            assert!(r < 1e-7, "shock residual {r} at xi = {xi}");
        }
    }

    #[test]
    fn burgers_domain_guards() {
        assert!(BurgersSeed::Triangular { re: 1.0 }.eval(0.0, 0.0).is_err());
        assert!(BurgersSeed::NWave { mass: 1.0 }.eval(0.0, -0.1).is_err());
        assert!(BurgersSeed::NWave { mass: -1.0 }.eval(0.0, 0.5).is_err());
        assert!(BurgersSeed::Kampe { coeffs: vec![1.0] }.eval(0.0, 0.0).is_err());
        // Pole of the k = 1 rational seed at xi = -1, tau = 0.
        assert!(BurgersSeed::Kampe {
            coeffs: vec![1.0, 1.0]
        }
        .eval(-1.0, 0.0)
        .is_err());
    }
}
