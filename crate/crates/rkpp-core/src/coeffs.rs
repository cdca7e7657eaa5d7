//! Variable coefficient sets for the reaction-diffusion and Burgers models.

use crate::error::{Error, Result};
use crate::expr::{parse_expr, Expression};

/// Time-dependent coefficients of the linear part of a model, together with
/// the structural constants of its nonlinearity.
///
/// The reaction-diffusion model reads
/// `u_t = a(t) u_xx - (g(t) - c(t) x) u_x + (d(t) + L + M x - B x^2) u + h(x,t) |u|^p u`
/// where `L`, `M`, `B` and `h` are induced by the construction from
/// `(b, f, c0, r0, h0)`. The Burgers-type model uses the same container with
/// `d = g = 0` and `c0 = 0`.
#[derive(Debug, Clone)]
pub struct CoefficientSet {
    pub a: Expression,
    pub b: Expression,
    pub c: Expression,
    pub d: Expression,
    pub f: Expression,
    pub g: Expression,
    /// Ermakov switch: 0 selects the Riccati branch, 1 the Ermakov branch.
    pub c0: u8,
    /// Constant reaction-rate of the target autonomous model.
    pub r0: f64,
    /// Nonlinearity strength of the target autonomous model.
    pub h0: f64,
    /// Nonlinearity exponent (`p > 0`).
    pub p: f64,
}

/// Pointwise values of the six coefficient functions.
#[derive(Debug, Clone, Copy)]
pub struct CoeffValues {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub f: f64,
    pub g: f64,
}

impl CoefficientSet {
    /// Build from expression text. `c0` must be 0 or 1 and `p` positive.
    #[allow(clippy::too_many_arguments)]
    pub fn parse(
        a: &str,
        b: &str,
        c: &str,
        d: &str,
        f: &str,
        g: &str,
        c0: u8,
        r0: f64,
        h0: f64,
        p: f64,
    ) -> Result<Self> {
        let set = CoefficientSet {
            a: parse_expr(a)?,
            b: parse_expr(b)?,
            c: parse_expr(c)?,
            d: parse_expr(d)?,
            f: parse_expr(f)?,
            g: parse_expr(g)?,
            c0,
            r0,
            h0,
            p,
        };
        set.check_structure()?;
        Ok(set)
    }

    fn check_structure(&self) -> Result<()> {
        if self.c0 > 1 {
            return Err(Error::InvalidData(format!(
                "c0 must be 0 or 1, got {}",
                self.c0
            )));
        }
        if !(self.r0.is_finite() && self.h0.is_finite() && self.p.is_finite() && self.p >= 0.0) {
            return Err(Error::InvalidData(format!(
                "model constants (r0, h0, p) = ({}, {}, {}) must be finite with p >= 0",
                self.r0, self.h0, self.p
            )));
        }
        // p only enters through the coupling h = h0 a beta^2 mu^{p/2} e^{-pS},
        // so it may be zero exactly when the coupling itself is switched off.
        if self.h0 != 0.0 && self.p == 0.0 {
            return Err(Error::InvalidData(
                "nonlinearity exponent p must be positive when h0 != 0".into(),
            ));
        }
        Ok(())
    }

    /// Evaluate all six coefficient functions at `t`.
    pub fn eval(&self, t: f64) -> Result<CoeffValues> {
        Ok(CoeffValues {
            a: self.a.eval(t)?,
            b: self.b.eval(t)?,
            c: self.c.eval(t)?,
            d: self.d.eval(t)?,
            f: self.f.eval(t)?,
            g: self.g.eval(t)?,
        })
    }

    /// Check `a(t) > 0` on `[t_min, t_max]` by dense sampling. The diffusion
    /// construction divides by `a` and takes `mu^{-1/2}`, so a sign change
    /// inside the window invalidates the family.
    pub fn validate_diffusion(&self, t_min: f64, t_max: f64) -> Result<()> {
        const SAMPLES: usize = 257;
        for i in 0..SAMPLES {
            let t = t_min + (t_max - t_min) * (i as f64) / ((SAMPLES - 1) as f64);
            let a = self.a.eval(t)?;
            if !(a > 0.0) {
                return Err(Error::InvalidData(format!(
                    "diffusion coefficient a(t) must stay positive on the window; a({t}) = {a}"
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_eval_roundtrip() {
        let set = CoefficientSet::parse("1", "0", "tanh(t)", "1", "2*tanh(t)*sech(t)",
            "-2*sech(t)", 0, 0.0, 1.0, 2.0)
            .expect("parse");
        let v = set.eval(0.5).expect("eval");
        assert!((v.a - 1.0).abs() < 1e-15);
        assert!((v.c - 0.5f64.tanh()).abs() < 1e-15);
        assert!((v.g + 2.0 / 0.5f64.cosh()).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_structure() {
        assert!(CoefficientSet::parse("1", "0", "0", "0", "0", "0", 2, 0.0, 1.0, 2.0).is_err());
        assert!(CoefficientSet::parse("1", "0", "0", "0", "0", "0", 0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn diffusion_validation_catches_sign_change() {
        let ok = CoefficientSet::parse("1+t", "0", "0", "0", "0", "0", 0, 0.0, 1.0, 1.0).unwrap();
        assert!(ok.validate_diffusion(0.0, 2.0).is_ok());
        let bad = CoefficientSet::parse("1-t", "0", "0", "0", "0", "0", 0, 0.0, 1.0, 1.0).unwrap();
        assert!(bad.validate_diffusion(0.0, 2.0).is_err());
    }
}
