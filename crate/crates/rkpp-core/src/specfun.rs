//! Special functions needed by the seed solutions and reference forms:
//! complementary error function, upper incomplete gamma, complete elliptic
//! integral of the first kind, Jacobi elliptic functions, and heat
//! polynomials.
//!
//! Everything here is hand-written against frozen oracle values rather than
//! pulled from a numerics crate: the tolerances of the verification suite are
//! calibrated against these exact implementations.

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// erfc
// ---------------------------------------------------------------------------

/// Complementary error function, absolute error below 1e-12 everywhere.
///
/// Small arguments use the alternating Maclaurin series of `erf`; large
/// arguments use the Lentz evaluation of the classical continued fraction,
/// which keeps relative accuracy deep into the exponential tail. Negative
/// arguments reflect through `erfc(-x) = 2 - erfc(x)`.
pub fn erfc(x: f64) -> f64 {
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x < 1.5 {
        1.0 - erf_series(x)
    } else {
        erfc_cf(x)
    }
}

/// Maclaurin series of erf, adequate for |x| < 1.5.
fn erf_series(x: f64) -> f64 {
    let two_over_sqrt_pi = 2.0 / std::f64::consts::PI.sqrt();
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0.0f64;
    loop {
        n += 1.0;
        term *= -x2 / n;
        let contribution = term / (2.0 * n + 1.0);
        sum += contribution;
        if contribution.abs() < 1e-17 * (1.0 + sum.abs()) {
            break;
        }
    }
    two_over_sqrt_pi * sum
}

/// Continued fraction erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
/// with partial numerators a_n = n/2 and all partial denominators x,
/// evaluated by the modified Lentz algorithm.
fn erfc_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / x;
    let mut h = d;
    let mut a = 0.5f64;
    for _ in 0..200 {
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
        a += 0.5;
    }
    (-x * x).exp() / std::f64::consts::PI.sqrt() * h
}

// ---------------------------------------------------------------------------
// Gamma functions
// ---------------------------------------------------------------------------

/// Lanczos approximation (g = 7, 9 terms), relative error ~1e-13 for z > 0.
fn gamma_fn(z: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if z < 0.5 {
        // Reflection formula keeps small positive arguments accurate.
        std::f64::consts::PI / ((std::f64::consts::PI * z).sin() * gamma_fn(1.0 - z))
    } else {
        let z = z - 1.0;
        let mut x = COEF[0];
        for (i, &c) in COEF.iter().enumerate().skip(1) {
            x += c / (z + i as f64);
        }
        let t = z + G + 0.5;
        (2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * x
    }
}

/// Upper incomplete gamma function `Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt`
/// for `s > 0`, `x >= 0`, relative error below 1e-10.
///
/// `x < 0` is rejected deliberately: the analytic continuation is multivalued
/// and nothing in the constructed families requires it (reference forms that
/// would need it are computed by quadrature instead).
pub fn upper_gamma(s: f64, x: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!(
            "upper_gamma requires s > 0, got s = {s}"
        )));
    }
    if x < 0.0 {
        return Err(Error::Domain(format!(
            "upper_gamma is only implemented for x >= 0, got x = {x}"
        )));
    }
    if x == 0.0 {
        return Ok(gamma_fn(s));
    }
    let prefactor = (s * x.ln() - x).exp();
    if x < s + 1.0 {
        // Lower incomplete series: gamma_lower = x^s e^{-x} sum x^n / (s (s+1) ... (s+n)).
        let mut term = 1.0 / s;
        let mut sum = term;
        let mut n = 0.0f64;
        loop {
            n += 1.0;
            term *= x / (s + n);
            sum += term;
            if term.abs() < sum.abs() * 1e-16 {
                break;
            }
            if n > 10_000.0 {
                return Err(Error::Domain(format!(
                    "upper_gamma series failed to converge for s = {s}, x = {x}"
                )));
            }
        }
        Ok(gamma_fn(s) - prefactor * sum)
    } else {
        // Lentz continued fraction for the upper function.
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - s;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -(i as f64) * (i as f64 - s);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                return Ok(prefactor * h);
            }
        }
        Err(Error::Domain(format!(
            "upper_gamma continued fraction failed to converge for s = {s}, x = {x}"
        )))
    }
}

// ---------------------------------------------------------------------------
// Elliptic integrals and Jacobi functions
// ---------------------------------------------------------------------------

/// Elliptic modulus `k` with `0 <= k < 1`.
///
/// `k = 1` is excluded: `dn` would reach zero and `sd = sn/dn` would acquire
/// real poles, which the seed evaluations rely on never happening.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticModulus(f64);

impl EllipticModulus {
    pub fn new(k: f64) -> Result<Self> {
        if (0.0..1.0).contains(&k) {
            Ok(EllipticModulus(k))
        } else {
            Err(Error::Domain(format!(
                "elliptic modulus must satisfy 0 <= k < 1, got {k}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Complete elliptic integral of the first kind `K(k)` via the
/// arithmetic-geometric mean, absolute error below 1e-12.
pub fn elliptic_k(k: EllipticModulus) -> f64 {
    let mut a = 1.0f64;
    let mut b = (1.0 - k.0 * k.0).sqrt();
    // AGM converges quadratically; once |a - b| sits at ulp level the
    // iterates may alternate forever, so stop at machine epsilon with a
    // hard cap as backstop.
    for _ in 0..64 {
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    std::f64::consts::PI / (2.0 * a)
}

/// Jacobi elliptic functions `(sn, cn, dn)(u, k)` by the Bulirsch
/// descending-Landen recurrence, accurate to ~1e-15.
pub fn jacobi_sncndn(u: f64, k: EllipticModulus) -> (f64, f64, f64) {
    const CA: f64 = 1e-16;
    let mut emc = 1.0 - k.0 * k.0;
    if emc == 1.0 {
        // k = 0 degenerates to circular functions.
        return (u.sin(), u.cos(), 1.0);
    }
    let mut u = u;
    let mut em = [0.0f64; 14];
    let mut en = [0.0f64; 14];
    let mut a = 1.0f64;
    let mut dn = 1.0f64;
    let mut c = 0.0f64;
    let mut l = 0usize;
    for i in 0..14 {
        l = i;
        em[i] = a;
        emc = emc.sqrt();
        en[i] = emc;
        c = 0.5 * (a + emc);
        if (a - emc).abs() <= CA * a {
            break;
        }
        emc *= a;
        a = c;
    }
    u *= c;
    let mut sn = u.sin();
    let mut cn = u.cos();
    if sn != 0.0 {
        a = cn / sn;
        c *= a;
        for i in (0..=l).rev() {
            let b = em[i];
            a *= c;
            c *= dn;
            dn = (en[i] + a) / (b + a);
            a = c / b;
        }
        a = 1.0 / (c * c + 1.0).sqrt();
        sn = if sn < 0.0 { -a } else { a };
        cn = c * sn;
    }
    (sn, cn, dn)
}

/// Jacobi `sd(u, k) = sn(u, k) / dn(u, k)`.
///
/// For `k < 1`, `dn >= sqrt(1 - k^2) > 0`, so `sd` has no real poles; at the
/// modulus `sqrt(2)/2` used by the seed solutions it is bounded by `sqrt(2)`.
pub fn jacobi_sd(u: f64, k: EllipticModulus) -> f64 {
    let (sn, _, dn) = jacobi_sncndn(u, k);
    sn / dn
}

// ---------------------------------------------------------------------------
// Heat polynomials
// ---------------------------------------------------------------------------

/// Heat polynomial `H_m(xi, theta) = m! sum_k theta^k xi^{m-2k} / (k! (m-2k)!)`.
///
/// `H_m` solves the heat equation `dH/dtheta = d^2H/dxi^2` with
/// `H_m(xi, 0) = xi^m`; the rational Burgers seeds are built from them.
/// Supported for `m <= 170` (f64 factorial range), far beyond any seed order.
pub fn heat_polynomial(m: u32, xi: f64, theta: f64) -> f64 {
    debug_assert!(m <= 170, "heat polynomial order too large for f64 factorials");
    let m = m as usize;
    let mut sum = 0.0;
    for k in 0..=(m / 2) {
        let coeff = factorial(m) / (factorial(k) * factorial(m - 2 * k));
        sum += coeff * theta.powi(k as i32) * xi.powi((m - 2 * k) as i32);
    }
    sum
}

fn factorial(n: usize) -> f64 {
    let mut acc = 1.0f64;
    for i in 2..=n {
        acc *= i as f64;
    }
    acc
}
