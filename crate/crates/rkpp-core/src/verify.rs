//! Finite-difference verification of constructed solutions.
//!
//! Every solution the crate produces is checked against its own equation:
//! the field is sampled on a rectangular grid and the PDE residual is formed
//! from central differences with a stencil width `h` chosen independently of
//! the grid, so the check is meshfree in the sense that refining `h` must
//! shrink the residual at second order for a genuine solution.
//!
//! Residuals are reported relative to the local scale
//! `1 + |u| + |u_x| + |u_xx|`, which keeps the criterion meaningful both in
//! flat regions and near steep fronts.
//!
//! The module also provides deliberate corruption hooks. Flipping a sign or
//! dropping a term must inflate the reported residual by orders of
//! magnitude; this is the negative control showing the verifier actually
//! constrains every term of the equation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::riccati::InitialData;
use crate::seeds::BurgersSeed;
use crate::transform::{burgers_symmetry, GbeSolution, GnlhSolution, SymmetryCandidate};

/// Largest number of grid points a single verification may request.
const MAX_POINTS: usize = 10_000_000;

/// A rectangular sampling grid, parsed from `xmin:xmax:nx` `x` `tmin:tmax:nt`
/// (for example `-5:5:41x0.1:2:33`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub nx: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub nt: usize,
}

impl GridSpec {
    /// Builds a grid, enforcing the same invariants as [`GridSpec::parse`].
    pub fn new(x_min: f64, x_max: f64, nx: usize, t_min: f64, t_max: f64, nt: usize) -> Result<Self> {
        let spec = GridSpec { x_min, x_max, nx, t_min, t_max, nt };
        spec.validate()?;
        Ok(spec)
    }

    /// Parses the textual form `xmin:xmax:nx` + literal `x` + `tmin:tmax:nt`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('x').collect();
        if parts.len() != 2 {
            return Err(Error::Grid(format!(
                "expected exactly one 'x' separating the space and time ranges, got {s:?}"
            )));
        }
        let (x_min, x_max, nx) = parse_axis(parts[0], "space")?;
        let (t_min, t_max, nt) = parse_axis(parts[1], "time")?;
        GridSpec::new(x_min, x_max, nx, t_min, t_max, nt)
    }

    fn validate(&self) -> Result<()> {
        for (name, lo, hi, n) in [
            ("space", self.x_min, self.x_max, self.nx),
            ("time", self.t_min, self.t_max, self.nt),
        ] {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::Grid(format!("{name} range must be finite")));
            }
            if !(lo < hi) {
                return Err(Error::Grid(format!(
                    "{name} range needs min < max, got {lo}..{hi}"
                )));
            }
            if n < 8 {
                return Err(Error::Grid(format!(
                    "{name} axis needs at least 8 points, got {n}"
                )));
            }
        }
        if self.nx.saturating_mul(self.nt) > MAX_POINTS {
            return Err(Error::Grid(format!(
                "grid of {} x {} points exceeds the {MAX_POINTS} point budget",
                self.nx, self.nt
            )));
        }
        Ok(())
    }

    /// The space sample points (inclusive endpoints).
    pub fn xs(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.nx)
    }

    /// The time sample points (inclusive endpoints).
    pub fn ts(&self) -> Vec<f64> {
        linspace(self.t_min, self.t_max, self.nt)
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}:{}:{}x{}:{}:{}",
            self.x_min, self.x_max, self.nx, self.t_min, self.t_max, self.nt
        )
    }
}

impl std::str::FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GridSpec::parse(s)
    }
}

fn parse_axis(s: &str, name: &str) -> Result<(f64, f64, usize)> {
    let fields: Vec<&str> = s.split(':').collect();
    if fields.len() != 3 {
        return Err(Error::Grid(format!(
            "{name} axis must be min:max:count, got {s:?}"
        )));
    }
    let lo: f64 = fields[0]
        .trim()
        .parse()
        .map_err(|_| Error::Grid(format!("{name} minimum {:?} is not a number", fields[0])))?;
    let hi: f64 = fields[1]
        .trim()
        .parse()
        .map_err(|_| Error::Grid(format!("{name} maximum {:?} is not a number", fields[1])))?;
    let n: usize = fields[2]
        .trim()
        .parse()
        .map_err(|_| Error::Grid(format!("{name} count {:?} is not an integer", fields[2])))?;
    Ok((lo, hi, n))
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / ((n - 1) as f64);
    (0..n).map(|i| lo + step * i as f64).collect()
}

/// Outcome of a residual scan over a grid.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ResidualReport {
    /// Largest relative residual `|r| / (1 + |u| + |u_x| + |u_xx|)` seen.
    pub max_residual: f64,
    /// Grid point where the maximum occurred.
    pub worst_x: f64,
    /// Grid point where the maximum occurred.
    pub worst_t: f64,
    /// Number of grid points that contributed a residual.
    pub evaluated: usize,
    /// Number of grid points skipped because the field could not be
    /// evaluated there (seed pole, movable singularity, domain edge).
    pub skipped: usize,
}

/// Values of a five-point central stencil around one grid point.
struct Stencil {
    u: f64,
    ux: f64,
    uxx: f64,
    ut: f64,
}

/// Evaluates the field, treating pole/domain failures as skippable.
fn try_eval(field: &dyn Fn(f64, f64) -> Result<f64>, x: f64, t: f64) -> Result<Option<f64>> {
    match field(x, t) {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        Ok(_) => Ok(None),
        Err(Error::Seed(_)) | Err(Error::Singular { .. }) | Err(Error::Domain(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn stencil(
    field: &dyn Fn(f64, f64) -> Result<f64>,
    x: f64,
    t: f64,
    h: f64,
) -> Result<Option<Stencil>> {
    let Some(u) = try_eval(field, x, t)? else { return Ok(None) };
    let Some(xp) = try_eval(field, x + h, t)? else { return Ok(None) };
    let Some(xm) = try_eval(field, x - h, t)? else { return Ok(None) };
    let Some(tp) = try_eval(field, x, t + h)? else { return Ok(None) };
    let Some(tm) = try_eval(field, x, t - h)? else { return Ok(None) };
    Ok(Some(Stencil {
        u,
        ux: (xp - xm) / (2.0 * h),
        uxx: (xp - 2.0 * u + xm) / (h * h),
        ut: (tp - tm) / (2.0 * h),
    }))
}

fn check_step(h: f64) -> Result<()> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::Grid(format!("stencil width h must be positive, got {h}")));
    }
    Ok(())
}

/// Scans a grid, calling `point` for each node. `point` returns the relative
/// residual, or `None` to skip the node.
fn scan(
    grid: &GridSpec,
    mut point: impl FnMut(f64, f64) -> Result<Option<f64>>,
) -> Result<ResidualReport> {
    let mut report = ResidualReport {
        max_residual: 0.0,
        worst_x: grid.x_min,
        worst_t: grid.t_min,
        evaluated: 0,
        skipped: 0,
    };
    for &t in &grid.ts() {
        for &x in &grid.xs() {
            match point(x, t)? {
                Some(rel) => {
                    report.evaluated += 1;
                    if rel > report.max_residual {
                        report.max_residual = rel;
                        report.worst_x = x;
                        report.worst_t = t;
                    }
                }
                None => report.skipped += 1,
            }
        }
    }
    if report.evaluated == 0 {
        return Err(Error::Verify(
            "no grid point could be evaluated; the grid misses the solution's domain".into(),
        ));
    }
    Ok(report)
}

/// Requires the time stencil to stay inside the family's window.
fn check_time_window(grid: &GridSpec, h: f64, lo: f64, hi: f64) -> Result<()> {
    let slack = 1e-12 * (1.0 + hi.abs());
    if grid.t_min - h < lo - slack || grid.t_max + h > hi + slack {
        return Err(Error::Grid(format!(
            "time stencil [{}, {}] leaves the family window [{lo}, {hi}]; \
             shrink the grid or the stencil width",
            grid.t_min - h,
            grid.t_max + h
        )));
    }
    Ok(())
}

/// Deliberate defects for negative-control runs on diffusion-type solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GnlhCorruption {
    /// Flip the sign of the nonlinear coupling `h`.
    FlipCoupling,
    /// Drop the drift term `(g - c x) u_x`.
    DropDrift,
    /// Flip the sign of the potential `(d + L + M x - B x^2) u`.
    FlipPotential,
    /// Halve the diffusion coefficient `a`.
    HalveDiffusion,
}

/// All diffusion-type corruption hooks, for exhaustive negative controls.
pub const GNLH_CORRUPTIONS: [GnlhCorruption; 4] = [
    GnlhCorruption::FlipCoupling,
    GnlhCorruption::DropDrift,
    GnlhCorruption::FlipPotential,
    GnlhCorruption::HalveDiffusion,
];

/// Residual of a diffusion-type solution against its induced equation
/// `u_t = a u_xx - (g - c x) u_x + (d + L + M x - B x^2) u + h N_p(u)`.
pub fn residual_gnlh(sol: &GnlhSolution, grid: &GridSpec, h: f64) -> Result<ResidualReport> {
    residual_gnlh_with(sol, grid, h, None)
}

/// Same as [`residual_gnlh`], with an optional corruption hook applied to
/// the equation the field is checked against.
pub fn residual_gnlh_with(
    sol: &GnlhSolution,
    grid: &GridSpec,
    h: f64,
    corruption: Option<GnlhCorruption>,
) -> Result<ResidualReport> {
    check_step(h)?;
    check_time_window(grid, h, sol.params().t_anchor(), sol.params().t_max())?;
    let field = |x: f64, t: f64| sol.eval(x, t);
    scan(grid, |x, t| {
        let Some(st) = stencil(&field, x, t, h)? else { return Ok(None) };
        let mut ind = match sol.induced_at(x, t) {
            Ok(ind) => ind,
            Err(Error::Singular { .. }) | Err(Error::Domain(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        match corruption {
            Some(GnlhCorruption::FlipCoupling) => ind.h = -ind.h,
            Some(GnlhCorruption::DropDrift) => ind.drift = 0.0,
            Some(GnlhCorruption::FlipPotential) => ind.potential = -ind.potential,
            Some(GnlhCorruption::HalveDiffusion) => ind.a *= 0.5,
            None => {}
        }
        let nl = sol.nonlinear_term(st.u)?;
        let r = st.ut - ind.a * st.uxx + ind.drift * st.ux - ind.potential * st.u - ind.h * nl;
        let scale = 1.0 + st.u.abs() + st.ux.abs() + st.uxx.abs();
        Ok(Some((r / scale).abs()))
    })
}

/// Deliberate defects for negative-control runs on Burgers-type solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GbeCorruption {
    /// Flip the sign of the forcing `f`.
    FlipForcing,
    /// Drop the restoring term `b x`.
    DropRestoring,
    /// Halve the coefficient `a` in front of `v v_x - v_xx`.
    HalveDiffusion,
}

/// All Burgers-type corruption hooks, for exhaustive negative controls.
pub const GBE_CORRUPTIONS: [GbeCorruption; 3] = [
    GbeCorruption::FlipForcing,
    GbeCorruption::DropRestoring,
    GbeCorruption::HalveDiffusion,
];

/// Residual of a Burgers-type solution against
/// `v_t + 4a (v v_x - v_xx) = -b x + f`.
pub fn residual_gbe(sol: &GbeSolution, grid: &GridSpec, h: f64) -> Result<ResidualReport> {
    residual_gbe_with(sol, grid, h, None)
}

/// Same as [`residual_gbe`], with an optional corruption hook.
pub fn residual_gbe_with(
    sol: &GbeSolution,
    grid: &GridSpec,
    h: f64,
    corruption: Option<GbeCorruption>,
) -> Result<ResidualReport> {
    check_step(h)?;
    check_time_window(grid, h, sol.params().t_anchor(), sol.params().t_max())?;
    let field = |x: f64, t: f64| sol.eval(x, t);
    scan(grid, |x, t| {
        let Some(st) = stencil(&field, x, t, h)? else { return Ok(None) };
        let cv = sol.coeffs().eval(t)?;
        let (mut a, mut b, mut f) = (cv.a, cv.b, cv.f);
        match corruption {
            Some(GbeCorruption::FlipForcing) => f = -f,
            Some(GbeCorruption::DropRestoring) => b = 0.0,
            Some(GbeCorruption::HalveDiffusion) => a *= 0.5,
            None => {}
        }
        let r = st.ut + 4.0 * a * (st.u * st.ux - st.uxx) + b * x - f;
        let scale = 1.0 + st.u.abs() + st.ux.abs() + st.uxx.abs();
        Ok(Some((r / scale).abs()))
    })
}

/// Residual of an arbitrary field against the classical Burgers equation
/// `u_t + u u_x = nu u_xx`.
pub fn residual_burgers_classical(
    field: impl Fn(f64, f64) -> Result<f64>,
    nu: f64,
    grid: &GridSpec,
    h: f64,
) -> Result<ResidualReport> {
    check_step(h)?;
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::InvalidData(format!("viscosity must be positive, got {nu}")));
    }
    scan(grid, |x, t| {
        let Some(st) = stencil(&field, x, t, h)? else { return Ok(None) };
        let r = st.ut + st.u * st.ux - nu * st.uxx;
        let scale = 1.0 + st.u.abs() + st.ux.abs() + st.uxx.abs();
        Ok(Some((r / scale).abs()))
    })
}

/// Richardson-style order estimate from residuals at `h` and `h/2`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConvergenceCheck {
    /// Residual at the coarse stencil width `h`.
    pub coarse: f64,
    /// Residual at `h/2`.
    pub fine: f64,
    /// `log2(coarse / fine)`; near 2 for a genuine solution checked with
    /// second-order differences.
    pub order: f64,
}

/// Runs a residual functional at `h` and `h/2` and reports the observed
/// convergence order.
pub fn convergence_order(
    mut residual: impl FnMut(f64) -> Result<f64>,
    h: f64,
) -> Result<ConvergenceCheck> {
    check_step(h)?;
    let coarse = residual(h)?;
    let fine = residual(0.5 * h)?;
    if !(coarse > 0.0 && fine > 0.0) {
        return Err(Error::Verify(format!(
            "residuals must be positive to estimate an order, got {coarse} and {fine}"
        )));
    }
    Ok(ConvergenceCheck { coarse, fine, order: (coarse / fine).log2() })
}

/// Residuals of one seed against both viscosity normalizations.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ViscosityAudit {
    /// Max relative residual against `u_t + u u_x = (1/2) u_xx`.
    pub residual_half: f64,
    /// Max relative residual against `u_t + u u_x = u_xx`.
    pub residual_unit: f64,
    /// The winning viscosity (`1.0` on ties).
    pub best: f64,
}

/// Checks which viscosity normalization a seed natively satisfies.
pub fn viscosity_audit(seed: &BurgersSeed, grid: &GridSpec, h: f64) -> Result<ViscosityAudit> {
    let field = |xi: f64, tau: f64| seed.eval(xi, tau);
    let residual_half = residual_burgers_classical(field, 0.5, grid, h)?.max_residual;
    let residual_unit = residual_burgers_classical(field, 1.0, grid, h)?.max_residual;
    let best = if residual_unit <= residual_half { 1.0 } else { 0.5 };
    Ok(ViscosityAudit { residual_half, residual_unit, best })
}

/// Measured residuals of the two circulating closed forms of the
/// constant-coefficient similarity map (see
/// [`crate::transform::SymmetryCandidate`]).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SymmetryAudit {
    /// Max relative residual of the pole-anchored candidate against
    /// `v_t + v v_x = v_xx`.
    pub pole_anchored: f64,
    /// Max relative residual of the data-anchored candidate.
    pub data_anchored: f64,
}

impl SymmetryAudit {
    /// The candidate with the smaller measured residual.
    pub fn verdict(&self) -> SymmetryCandidate {
        if self.data_anchored <= self.pole_anchored {
            SymmetryCandidate::DataAnchored
        } else {
            SymmetryCandidate::PoleAnchored
        }
    }
}

/// Audits both symmetry candidates over a seed (`None` means the zero
/// solution). Each candidate's field is checked against the classical
/// Burgers equation with unit viscosity on the same grid.
pub fn audit_burgers_symmetry(
    data: &InitialData,
    seed: Option<&BurgersSeed>,
    grid: &GridSpec,
    h: f64,
) -> Result<SymmetryAudit> {
    let u = |xi: f64, tau: f64| match seed {
        Some(s) => s.eval_unit(xi, tau),
        None => Ok(0.0),
    };
    let run = |candidate: SymmetryCandidate| -> Result<f64> {
        let field = |x: f64, t: f64| burgers_symmetry(candidate, data, u, x, t);
        Ok(residual_burgers_classical(field, 1.0, grid, h)?.max_residual)
    };
    Ok(SymmetryAudit {
        pole_anchored: run(SymmetryCandidate::PoleAnchored)?,
        data_anchored: run(SymmetryCandidate::DataAnchored)?,
    })
}
