//! Numerical workhorses: an adaptive Dormand-Prince 5(4) integrator with
//! dense output, adaptive Gauss-Kronrod quadrature, and bracketed root
//! finding.
//!
//! The characteristic functions and kernel quadratures are solved once per
//! family and then sampled at arbitrary times by the verification grids, so
//! the integrator stores a dense interpolant for every accepted step. RHS
//! callbacks are fallible: coefficient expressions may leave their domain,
//! and that must surface as an error rather than a NaN creeping into grids.

use crate::error::{Error, Result};

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [0.2];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const A7: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
// Error coefficients: b(5th) - b_hat(4th).
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Dense-output coefficients (Hairer's D vector).
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// One accepted step's quartic Hermite-style interpolant.
struct Segment {
    t0: f64,
    h: f64,
    /// Five interpolation vectors per component, Hairer's rcont1..rcont5.
    rcont: Vec<[f64; 5]>,
}

/// Dense solution of an initial value problem on `[t_start, t_end]`.
pub struct DenseOutput {
    t_start: f64,
    t_end: f64,
    dim: usize,
    segments: Vec<Segment>,
    end_state: Vec<f64>,
}

impl DenseOutput {
    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// State at the final time (exact accepted value, not interpolated).
    pub fn end_state(&self) -> &[f64] {
        &self.end_state
    }

    /// Evaluate all components at `t` inside the integration span.
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim];
        self.eval_into(t, &mut out)?;
        Ok(out)
    }

    /// Evaluate a single component at `t`.
    pub fn eval_component(&self, t: f64, index: usize) -> Result<f64> {
        debug_assert!(index < self.dim);
        let seg = self.locate(t)?;
        let theta = (t - seg.t0) / seg.h;
        Ok(interp(&seg.rcont[index], theta))
    }

    /// Evaluate all components at `t` into a caller-provided slice.
    pub fn eval_into(&self, t: f64, out: &mut [f64]) -> Result<()> {
        debug_assert_eq!(out.len(), self.dim);
        let seg = self.locate(t)?;
        let theta = (t - seg.t0) / seg.h;
        for (o, rc) in out.iter_mut().zip(&seg.rcont) {
            *o = interp(rc, theta);
        }
        Ok(())
    }

    fn locate(&self, t: f64) -> Result<&Segment> {
        let slack = 1e-10 * (1.0 + self.t_end.abs() + self.t_start.abs());
        if t < self.t_start - slack || t > self.t_end + slack {
            return Err(Error::Ode(format!(
                "t = {t} outside integration span [{}, {}]",
                self.t_start, self.t_end
            )));
        }
        let t = t.clamp(self.t_start, self.t_end);
        // Binary search for the segment whose [t0, t0+h] contains t.
        let idx = self
            .segments
            .partition_point(|s| s.t0 + s.h < t)
            .min(self.segments.len() - 1);
        Ok(&self.segments[idx])
    }
}

fn interp(rc: &[f64; 5], theta: f64) -> f64 {
    let th1 = 1.0 - theta;
    rc[0] + theta * (rc[1] + th1 * (rc[2] + theta * (rc[3] + th1 * rc[4])))
}

/// Integrate `y' = rhs(t, y)` from `t0` to `t_end > t0`, storing a dense
/// interpolant for every accepted step.
///
/// The controller targets a mixed error norm with the usual PI-free step
/// update `h <- h * clamp(0.9 err^(-1/5), 0.2, 5)`. The interpolant is
/// locally of order 4, which at the tolerances used here (1e-11 .. 1e-12)
/// keeps interpolation error well below the 1e-9 budget the kernel
/// consumers assume.
pub fn integrate_dense<F>(
    rhs: F,
    t0: f64,
    y0: &[f64],
    t_end: f64,
    rtol: f64,
    atol: f64,
) -> Result<DenseOutput>
where
    F: Fn(f64, &[f64], &mut [f64]) -> Result<()>,
{
    if !(t_end > t0) {
        return Err(Error::Ode(format!(
            "integration span must be forward and nonempty, got [{t0}, {t_end}]"
        )));
    }
    let dim = y0.len();
    let span = t_end - t0;
    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k: Vec<Vec<f64>> = (0..7).map(|_| vec![0.0; dim]).collect();
    let mut ytmp = vec![0.0; dim];
    let mut ynew = vec![0.0; dim];
    rhs(t, &y, &mut k[0])?;

    let mut h = initial_step(span, &y, &k[0], rtol, atol);
    let h_min = span * 1e-14;
    let mut segments = Vec::new();
    let mut steps = 0usize;
    const MAX_STEPS: usize = 4_000_000;

    while t < t_end {
        if steps >= MAX_STEPS {
            return Err(Error::Ode(format!(
                "step limit exceeded at t = {t} (span [{t0}, {t_end}])"
            )));
        }
        steps += 1;
        if t + h > t_end {
            h = t_end - t;
        }
        if h < h_min {
            return Err(Error::Ode(format!(
                "step size underflow at t = {t} (h = {h})"
            )));
        }

        // Stages 2..7 (k1 is fresh from FSAL or the initial call).
        combine(&y, h, &A2, &k, &mut ytmp);
        rhs(t + C[1] * h, &ytmp, &mut k[1])?;
        combine(&y, h, &A3, &k, &mut ytmp);
        rhs(t + C[2] * h, &ytmp, &mut k[2])?;
        combine(&y, h, &A4, &k, &mut ytmp);
        rhs(t + C[3] * h, &ytmp, &mut k[3])?;
        combine(&y, h, &A5, &k, &mut ytmp);
        rhs(t + C[4] * h, &ytmp, &mut k[4])?;
        combine(&y, h, &A6, &k, &mut ytmp);
        rhs(t + C[5] * h, &ytmp, &mut k[5])?;
        // y_new = y + h * sum A7 k (A7 doubles as the 5th-order b row).
        combine(&y, h, &A7, &k, &mut ynew);
        rhs(t + h, &ynew, &mut k[6])?;

        // Error norm.
        let mut err = 0.0f64;
        for i in 0..dim {
            let mut e = 0.0;
            for (j, &ej) in E.iter().enumerate() {
                e += ej * k[j][i];
            }
            e *= h;
            let scale = atol + rtol * y[i].abs().max(ynew[i].abs());
            err += (e / scale) * (e / scale);
        }
        err = (err / dim as f64).sqrt();

        if err <= 1.0 {
            // Accept: build the dense interpolant for this step.
            let mut rcont = Vec::with_capacity(dim);
            for i in 0..dim {
                let ydiff = ynew[i] - y[i];
                let bspl = h * k[0][i] - ydiff;
                let mut dsum = 0.0;
                for (j, &dj) in D.iter().enumerate() {
                    dsum += dj * k[j][i];
                }
                rcont.push([
                    y[i],
                    ydiff,
                    bspl,
                    ydiff - h * k[6][i] - bspl,
                    h * dsum,
                ]);
            }
            segments.push(Segment { t0: t, h, rcont });
            t += h;
            std::mem::swap(&mut y, &mut ynew);
            k.swap(0, 6); // FSAL: last stage becomes first stage of next step.
        }

        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }

    Ok(DenseOutput {
        t_start: t0,
        t_end,
        dim,
        segments,
        end_state: y,
    })
}

/// `out = y + h * sum_j a[j] k[j]` over the first `a.len()` stages.
fn combine(y: &[f64], h: f64, a: &[f64], k: &[Vec<f64>], out: &mut [f64]) {
    for i in 0..y.len() {
        let mut acc = 0.0;
        for (j, &aj) in a.iter().enumerate() {
            acc += aj * k[j][i];
        }
        out[i] = y[i] + h * acc;
    }
}

fn initial_step(span: f64, y0: &[f64], f0: &[f64], rtol: f64, atol: f64) -> f64 {
    // Conservative heuristic: small fraction of the span, shrunk further if
    // the initial derivative is large relative to the state.
    let mut d0 = 0.0f64;
    let mut d1 = 0.0f64;
    for i in 0..y0.len() {
        let scale = atol + rtol * y0[i].abs();
        d0 += (y0[i] / scale) * (y0[i] / scale);
        d1 += (f0[i] / scale) * (f0[i] / scale);
    }
    let d0 = (d0 / y0.len() as f64).sqrt();
    let d1 = (d1 / y0.len() as f64).sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6 * span
    } else {
        0.01 * d0 / d1
    };
    h0.min(span / 10.0).max(span * 1e-10)
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// Adaptive Gauss-Kronrod (G7, K15) quadrature of `f` over `[a, b]`.
///
/// All nodes are strictly interior, so integrable endpoint singularities
/// (logarithms, inverse square roots) converge under bisection without
/// special handling. The returned value satisfies
/// `|error| <= tol * (1 + |integral|)` barring pathological integrands.
pub fn quad<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let value = quad_interval(&f, lo, hi, tol, 0)?;
    Ok(sign * value)
}

fn quad_interval<F>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let fl = f(center - dx)?;
        let fr = f(center + dx)?;
        kronrod += WGK[i] * (fl + fr);
        if i % 2 == 1 {
            gauss += WG[i / 2] * (fl + fr);
        }
    }
    kronrod *= half;
    gauss *= half;
    let err = (kronrod - gauss).abs();
    if err <= tol.max(1e-17 * kronrod.abs()) || half.abs() < 1e-15 * (1.0 + center.abs()) {
        return Ok(kronrod);
    }
    if depth >= 52 {
        return Err(Error::Quadrature(format!(
            "failed to converge on [{a}, {b}] (error estimate {err:.3e})"
        )));
    }
    let left = quad_interval(f, a, center, 0.5 * tol, depth + 1)?;
    let right = quad_interval(f, center, b, 0.5 * tol, depth + 1)?;
    Ok(left + right)
}

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

/// Find a root of `f` inside `[a, b]` given a sign change, by bisection with
/// secant acceleration. Converges to `|interval| <= tol`.
pub fn find_root<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut lo = a;
    let mut hi = b;
    let mut flo = f(lo)?;
    let mut fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RootFind(format!(
            "no sign change on [{a}, {b}]: f({a}) = {flo:.6e}, f({b}) = {fhi:.6e}"
        )));
    }
    for _ in 0..200 {
        if (hi - lo).abs() <= tol {
            break;
        }
        // Secant proposal, clipped away from the ends; fall back to midpoint.
        let mut mid = if fhi != flo {
            lo - flo * (hi - lo) / (fhi - flo)
        } else {
            0.5 * (lo + hi)
        };
        let margin = 0.1 * (hi - lo);
        if !(mid > lo + margin && mid < hi - margin) {
            mid = 0.5 * (lo + hi);
        }
        let fmid = f(mid)?;
        if fmid == 0.0 {
            return Ok(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_output_matches_exponential() {
        let sol = integrate_dense(
            |_t, y, dy| {
                dy[0] = -y[0];
                Ok(())
            },
            0.0,
            &[1.0],
            5.0,
            1e-11,
            1e-12,
        )
        .expect("integrate");
        for i in 0..=500 {
            let t = 5.0 * (i as f64) / 500.0;
            let v = sol.eval_component(t, 0).unwrap();
            assert!(
                (v - (-t).exp()).abs() < 1e-9,
                "t = {t}: {v} vs {}",
                (-t).exp()
            );
        }
    }

    #[test]
    fn dense_output_matches_harmonic_oscillator() {
        let sol = integrate_dense(
            |_t, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
                Ok(())
            },
            0.0,
            &[0.0, 1.0],
            10.0,
            1e-12,
            1e-12,
        )
        .expect("integrate");
        for i in 0..=1000 {
            let t = 10.0 * (i as f64) / 1000.0;
            let s = sol.eval_component(t, 0).unwrap();
            let c = sol.eval_component(t, 1).unwrap();
            assert!((s - t.sin()).abs() < 1e-9, "sin at t = {t}");
            assert!((c - t.cos()).abs() < 1e-9, "cos at t = {t}");
        }
        assert!((sol.end_state()[0] - 10.0f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn integrator_propagates_rhs_domain_errors() {
        let res = integrate_dense(
            |t, _y, dy| {
                if t > 0.5 {
                    Err(Error::Domain("boom".into()))
                } else {
                    dy[0] = 1.0;
                    Ok(())
                }
            },
            0.0,
            &[0.0],
            1.0,
            1e-9,
            1e-9,
        );
        assert!(res.is_err());
    }

    #[test]
    fn eval_outside_span_is_an_error() {
        let sol = integrate_dense(
            |_t, _y, dy| {
                dy[0] = 1.0;
                Ok(())
            },
            0.0,
            &[0.0],
            1.0,
            1e-9,
            1e-9,
        )
        .unwrap();
        assert!(sol.eval_component(1.5, 0).is_err());
        assert!(sol.eval_component(-0.5, 0).is_err());
        assert!(sol.eval_component(1.0, 0).is_ok());
    }

    #[test]
    fn quadrature_smooth_integrands() {
        let v = quad(|x| Ok(x.exp()), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - (1.0f64.exp() - 1.0)).abs() < 1e-12);
        let v = quad(|x| Ok(x.sin()), 0.0, std::f64::consts::PI, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-12);
        // Orientation flip.
        let v = quad(|x| Ok(x.exp()), 1.0, 0.0, 1e-12).unwrap();
        assert!((v + (1.0f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn quadrature_integrable_endpoint_singularities() {
        // int_0^1 ln x dx = -1; nodes never touch x = 0.
        let v = quad(
            |x| {
                if x <= 0.0 {
                    Err(Error::Domain("log domain".into()))
                } else {
                    Ok(x.ln())
                }
            },
            0.0,
            1.0,
            1e-10,
        )
        .unwrap();
        assert!((v + 1.0).abs() < 1e-9, "got {v}");
        // int_0^1 x^{-1/2} dx = 2.
        let v = quad(|x| Ok(1.0 / x.sqrt()), 0.0, 1.0, 1e-10).unwrap();
        assert!((v - 2.0).abs() < 1e-7, "got {v}");
    }

    #[test]
    fn root_finding_basics() {
        let r = find_root(|x| Ok(x.cos()), 0.0, 3.0, 1e-12).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
        let r = find_root(|x| Ok(x * x - 2.0), 0.0, 2.0, 1e-13).unwrap();
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-11);
        assert!(find_root(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12).is_err());
    }
}
