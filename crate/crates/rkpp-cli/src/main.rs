//! Command-line front end over the solution-family catalog: list families,
//! construct and sample solutions on grids, run finite-difference residual
//! verification, locate movable singularities, and sweep parameters.
//!
//! Exit codes: 0 success, 1 verification failure or root not found,
//! 2 usage or instantiation error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use rkpp_core::catalog::{
    Catalog, FamilyFilter, FamilyKind, ProblemInstance, Route, Solution,
};
use rkpp_core::kernel::{kernel_functions, solve_characteristic, CharConvention, KernelSet};
use rkpp_core::riccati::{combine_riccati, find_singularity, InitialData};
use rkpp_core::seeds::FisherSeed;
use rkpp_core::transform::build_gnlh_solution;
use rkpp_core::verify::{
    convergence_order, residual_gbe_with, residual_gnlh_with, GbeCorruption, GnlhCorruption,
    GridSpec, ResidualReport,
};
use rkpp_core::{CoefficientSet, Error};

/// Synthetic family id accepted everywhere a catalog id is: the free heat
/// kernel with data `alpha(0) = alpha0`, `mu(0) = mu0`, combined through the
/// uncoupled kernel combination. Its movable singularity sits at
/// `t = 1/(4 alpha0)`.
const FREE_HEAT: &str = "free-heat";

#[derive(Parser)]
#[command(
    name = "rkpp",
    version,
    about = "Explicit solutions of variable-coefficient reaction-diffusion and Burgers-type equations",
    long_about = None
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List catalog families, optionally filtered.
    Families(FamiliesArgs),
    /// Construct a solution and sample it on a grid (CSV or JSON).
    Solve(SolveArgs),
    /// Finite-difference residual verification of a constructed solution.
    Verify(VerifyArgs),
    /// Locate the movable singularity t* where mu vanishes.
    Singularity(SingularityArgs),
    /// Sweep one parameter and summarize the solution per value.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct FamiliesArgs {
    /// Keep only this model class (gnlh or gbe).
    #[arg(long)]
    kind: Option<String>,
    /// Keep only this construction route (ermakov, alternative or burgers).
    #[arg(long)]
    route: Option<String>,
    /// Keep only families flagged singular.
    #[arg(long)]
    singular: bool,
    /// Emit the matching entries as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FamilySelection {
    /// Family id from the catalog (or "free-heat").
    #[arg(long)]
    family: String,
    /// Set a parameter, e.g. --set k1=2 (repeatable).
    #[arg(long = "set", value_name = "NAME=VALUE")]
    sets: Vec<String>,
    /// Use the family defaults; rejects combination with --set.
    #[arg(long)]
    defaults: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    family: FamilySelection,
    /// Grid as xmin:xmax:nx x tmin:tmax:nt, e.g. -5:5:200x0.01:10:200.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<String>,
    /// Emit a JSON object instead of CSV.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    family: FamilySelection,
    /// Grid as xmin:xmax:nx x tmin:tmax:nt; defaults to a window-derived grid.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Maximum admissible relative residual.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Negative control: corrupt the equation (flips the coupling sign for
    /// diffusion families, the forcing sign for Burgers families).
    #[arg(long)]
    corrupt: bool,
}

#[derive(Args)]
struct SingularityArgs {
    /// Family id; defaults to the synthetic free-heat family.
    #[arg(long, default_value = FREE_HEAT)]
    family: String,
    /// Set a parameter, e.g. --set mu0=2 (repeatable).
    #[arg(long = "set", value_name = "NAME=VALUE")]
    sets: Vec<String>,
    /// Initial slope alpha(0); overrides the instantiated value.
    #[arg(long, allow_negative_numbers = true)]
    alpha0: Option<f64>,
    /// Search bracket as a:b; defaults to the family window.
    #[arg(long, allow_hyphen_values = true)]
    bracket: Option<String>,
    /// Root tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    family: FamilySelection,
    /// Parameter to sweep.
    #[arg(long)]
    param: String,
    /// Comma-separated values, e.g. 1,4,16.
    #[arg(long, allow_hyphen_values = true)]
    values: String,
    /// Grid for the per-value summaries; defaults to a window-derived grid.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

// ---------------------------------------------------------------------------
// Family resolution
// ---------------------------------------------------------------------------

/// A constructed problem, uniform over catalog entries and the synthetic
/// free-heat family.
struct Problem {
    id: String,
    kind: FamilyKind,
    c0: u8,
    coeffs: CoefficientSet,
    init_alpha: f64,
    window: (f64, f64),
    solution: Solution,
}

fn parse_sets(sets: &[String]) -> Result<Vec<(String, f64)>, Error> {
    sets.iter()
        .map(|s| {
            let (name, value) = s.split_once('=').ok_or_else(|| {
                Error::Catalog(format!("malformed --set '{s}' (expected NAME=VALUE)"))
            })?;
            let value: f64 = value.parse().map_err(|_| {
                Error::Catalog(format!("malformed value in --set '{s}'"))
            })?;
            Ok((name.trim().to_string(), value))
        })
        .collect()
}

fn check_defaults_flag(sel: &FamilySelection) -> Result<(), Error> {
    if sel.defaults && !sel.sets.is_empty() {
        return Err(Error::Catalog(
            "--defaults conflicts with --set; pass one or the other".into(),
        ));
    }
    Ok(())
}

fn free_heat_values(overrides: &[(String, f64)]) -> Result<BTreeMap<String, f64>, Error> {
    let mut values = BTreeMap::from([
        ("alpha0".to_string(), 0.25),
        ("mu0".to_string(), 1.0),
    ]);
    for (name, value) in overrides {
        if !values.contains_key(name) {
            return Err(Error::Catalog(format!(
                "family '{FREE_HEAT}' has no parameter '{name}' (available: alpha0, mu0)"
            )));
        }
        if !value.is_finite() {
            return Err(Error::Catalog(format!(
                "parameter '{name}' must be finite, got {value}"
            )));
        }
        values.insert(name.clone(), *value);
    }
    if values["mu0"] <= 0.0 {
        return Err(Error::Catalog("mu0 must be positive".into()));
    }
    Ok(values)
}

fn free_heat_coeffs() -> Result<CoefficientSet, Error> {
    // Heat equation closed by the algebraic-exponential front's model.
    CoefficientSet::parse("1", "0", "0", "0", "0", "0", 0, 1.0, -1.0, 1.0)
}

/// The window stops short of the movable singularity 1/(4 alpha0) when one
/// exists.
fn free_heat_window(alpha0: f64) -> (f64, f64) {
    if alpha0 > 0.0 {
        (0.0, 0.225 / alpha0)
    } else {
        (0.0, 10.0)
    }
}

fn free_heat_problem(overrides: &[(String, f64)]) -> Result<Problem, Error> {
    let values = free_heat_values(overrides)?;
    let (alpha0, mu0) = (values["alpha0"], values["mu0"]);
    let coeffs = free_heat_coeffs()?;
    let window = free_heat_window(alpha0);
    let pair = solve_characteristic(&coeffs, CharConvention::Appendix, window.1)?;
    let kernels = kernel_functions(pair, &coeffs)?;
    let init = InitialData {
        mu: mu0,
        alpha: alpha0,
        ..InitialData::default()
    };
    let params = combine_riccati(kernels, init)?;
    let solution = Solution::Gnlh(build_gnlh_solution(
        params,
        coeffs.clone(),
        FisherSeed::U1,
        0.0,
        0.0,
    )?);
    Ok(Problem {
        id: FREE_HEAT.to_string(),
        kind: FamilyKind::Gnlh,
        c0: 0,
        coeffs,
        init_alpha: alpha0,
        window,
        solution,
    })
}

fn resolve_problem(family: &str, overrides: &[(String, f64)]) -> Result<Problem, Error> {
    if family == FREE_HEAT {
        return free_heat_problem(overrides);
    }
    let catalog = Catalog::load()?;
    let entry = catalog.get(family)?;
    let inst: ProblemInstance = entry.instantiate(overrides)?;
    let solution = inst.construct()?;
    Ok(Problem {
        id: inst.id.clone(),
        kind: inst.kind,
        c0: inst.coeffs.c0,
        coeffs: inst.coeffs.clone(),
        init_alpha: inst.init.alpha,
        window: inst.window,
        solution,
    })
}

/// Window-derived grid: x in [-1.2, 1.2], t on the middle 70% of the window.
fn default_grid(window: (f64, f64), nx: usize, nt: usize) -> Result<GridSpec, Error> {
    let span = window.1 - window.0;
    GridSpec::new(
        -1.2,
        1.2,
        nx,
        window.0 + 0.15 * span,
        window.1 - 0.15 * span,
        nt,
    )
}

fn grid_or_default(
    spec: &Option<String>,
    window: (f64, f64),
    nx: usize,
    nt: usize,
) -> Result<GridSpec, Error> {
    match spec {
        Some(text) => GridSpec::parse(text),
        None => default_grid(window, nx, nt),
    }
}

// ---------------------------------------------------------------------------
// Number formatting (17 significant digits, reproducible across runs)
// ---------------------------------------------------------------------------

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn json_num(v: f64) -> String {
    if v.is_finite() {
        num(v)
    } else {
        "null".to_string()
    }
}

fn write_out(out: &Option<String>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Catalog(format!("cannot write {path:?}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Evaluate for output: NaN marks seed poles, singular times and domain
/// gaps; other errors abort.
fn sample(solution: &Solution, x: f64, t: f64) -> Result<f64, Error> {
    match solution.eval(x, t) {
        Ok(v) => Ok(v),
        Err(Error::Seed(_)) | Err(Error::Singular { .. }) | Err(Error::Domain(_)) => {
            Ok(f64::NAN)
        }
        Err(e) => Err(e),
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn cmd_families(args: &FamiliesArgs) -> Result<i32, Error> {
    let filter = FamilyFilter {
        kind: args.kind.as_deref().map(FamilyKind::from_str).transpose()?,
        route: args.route.as_deref().map(Route::from_str).transpose()?,
        singular: if args.singular { Some(true) } else { None },
    };
    let catalog = Catalog::load()?;
    let entries = catalog.list(&filter);
    if args.json {
        let doc = serde_json::to_string_pretty(&entries)
            .map_err(|e| Error::Catalog(format!("cannot serialize entries: {e}")))?;
        println!("{doc}");
    } else {
        for entry in entries {
            let params = entry
                .params
                .iter()
                .map(|p| format!("{}={}", p.name, p.default))
                .collect::<Vec<_>>()
                .join(" ");
            println!(
                "{:<8} {:<5} {:<12} {:<6} [{}, {}]{}{}",
                entry.id,
                entry.kind,
                entry.route,
                entry.seed.id,
                entry.window.t_min,
                entry.window.t_max,
                if entry.singular { " singular" } else { "" },
                if params.is_empty() {
                    String::new()
                } else {
                    format!("  {params}")
                },
            );
        }
    }
    Ok(0)
}

fn cmd_solve(args: &SolveArgs) -> Result<i32, Error> {
    check_defaults_flag(&args.family)?;
    let overrides = parse_sets(&args.family.sets)?;
    let problem = resolve_problem(&args.family.family, &overrides)?;
    let grid = grid_or_default(&args.grid, problem.window, 61, 21)?;
    let xs = grid.xs();
    let ts = grid.ts();

    let mut text = String::new();
    if args.json {
        let mut params = String::new();
        let values = match &problem.solution {
            _ if problem.id == FREE_HEAT => {
                free_heat_values(&overrides)?
            }
            _ => {
                let catalog = Catalog::load()?;
                let entry = catalog.get(&problem.id)?;
                entry.instantiate(&overrides)?.values
            }
        };
        for (i, (name, value)) in values.iter().enumerate() {
            if i > 0 {
                params.push_str(", ");
            }
            let _ = write!(params, "\"{name}\": {}", json_num(*value));
        }
        text.push_str(&format!(
            "{{\n  \"family\": \"{}\",\n  \"params\": {{{params}}},\n  \"grid\": \"{grid}\",\n  \"values\": [\n",
            problem.id
        ));
        for (i, &t) in ts.iter().enumerate() {
            text.push_str("    [");
            for (j, &x) in xs.iter().enumerate() {
                if j > 0 {
                    text.push_str(", ");
                }
                text.push_str(&json_num(sample(&problem.solution, x, t)?));
            }
            text.push_str(if i + 1 < ts.len() { "],\n" } else { "]\n" });
        }
        text.push_str("  ]\n}\n");
    } else {
        text.push_str("x,t,u\n");
        for &t in &ts {
            for &x in &xs {
                let u = sample(&problem.solution, x, t)?;
                let _ = writeln!(text, "{},{},{}", num(x), num(t), num(u));
            }
        }
    }
    write_out(&args.out, &text)?;
    Ok(0)
}

fn run_residual(
    problem: &Problem,
    grid: &GridSpec,
    h: f64,
    corrupt: bool,
) -> Result<ResidualReport, Error> {
    match &problem.solution {
        Solution::Gnlh(sol) => residual_gnlh_with(
            sol,
            grid,
            h,
            corrupt.then_some(GnlhCorruption::FlipCoupling),
        ),
        Solution::Gbe(sol) => residual_gbe_with(
            sol,
            grid,
            h,
            corrupt.then_some(GbeCorruption::FlipForcing),
        ),
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32, Error> {
    check_defaults_flag(&args.family)?;
    if !(args.tol > 0.0) {
        return Err(Error::Catalog(format!(
            "tolerance must be positive, got {}",
            args.tol
        )));
    }
    let overrides = parse_sets(&args.family.sets)?;
    let problem = resolve_problem(&args.family.family, &overrides)?;
    let grid = grid_or_default(&args.grid, problem.window, 25, 9)?;
    let h = 1e-3;
    let report = run_residual(&problem, &grid, h, args.corrupt)?;
    // The convergence check is informative for a valid solution only; the
    // corrupted equation has an O(1) defect that no step refinement removes.
    let order = if args.corrupt {
        None
    } else {
        Some(convergence_order(
            |step| Ok(run_residual(&problem, &grid, step, false)?.max_residual),
            h,
        )?)
    };
    let pass = report.max_residual <= args.tol;
    let order_text = match &order {
        Some(o) => format!(
            "{{\"coarse\": {}, \"fine\": {}, \"order\": {}}}",
            json_num(o.coarse),
            json_num(o.fine),
            json_num(o.order)
        ),
        None => "null".to_string(),
    };
    println!(
        "{{\n  \"family\": \"{}\",\n  \"grid\": \"{grid}\",\n  \"h\": {},\n  \"tol\": {},\n  \"corrupt\": {},\n  \"max_residual\": {},\n  \"worst_x\": {},\n  \"worst_t\": {},\n  \"evaluated\": {},\n  \"skipped\": {},\n  \"order\": {order_text},\n  \"pass\": {pass}\n}}",
        problem.id,
        json_num(h),
        json_num(args.tol),
        args.corrupt,
        json_num(report.max_residual),
        json_num(report.worst_x),
        json_num(report.worst_t),
        report.evaluated,
        report.skipped,
    );
    Ok(if pass { 0 } else { 1 })
}

/// Kernels for the c0 = 0 singularity search of a diffusion family.
fn singularity_kernels(coeffs: &CoefficientSet, t_max: f64) -> Result<KernelSet, Error> {
    let pair = solve_characteristic(coeffs, CharConvention::Appendix, t_max)?;
    kernel_functions(pair, coeffs)
}

fn cmd_singularity(args: &SingularityArgs) -> Result<i32, Error> {
    let overrides = parse_sets(&args.sets)?;
    let bracket = match &args.bracket {
        Some(text) => {
            let (a, b) = text.split_once(':').ok_or_else(|| {
                Error::Catalog(format!("malformed --bracket '{text}' (expected a:b)"))
            })?;
            let lo: f64 = a.parse().map_err(|_| {
                Error::Catalog(format!("malformed --bracket '{text}'"))
            })?;
            let hi: f64 = b.parse().map_err(|_| {
                Error::Catalog(format!("malformed --bracket '{text}'"))
            })?;
            (lo, hi)
        }
        None if args.family == FREE_HEAT => (1e-6, 1e3),
        None => (1e-6, f64::NAN), // replaced by the family window below
    };

    let (coeffs, alpha0, bracket) = if args.family == FREE_HEAT {
        let values = free_heat_values(&overrides)?;
        let alpha0 = args.alpha0.unwrap_or(values["alpha0"]);
        (free_heat_coeffs()?, alpha0, bracket)
    } else {
        let catalog = Catalog::load()?;
        let entry = catalog.get(&args.family)?;
        if entry.kind != FamilyKind::Gnlh || entry.coefficients.c0 != 0 {
            return Err(Error::Catalog(format!(
                "family '{}' is not on the uncoupled (c0 = 0) diffusion path",
                args.family
            )));
        }
        let inst = entry.instantiate(&overrides)?;
        let alpha0 = args.alpha0.unwrap_or(inst.init.alpha);
        let bracket = if bracket.1.is_nan() {
            (1e-6, inst.window.1)
        } else {
            bracket
        };
        (inst.coeffs, alpha0, bracket)
    };

    let kernels = singularity_kernels(&coeffs, bracket.1)?;
    match find_singularity(&kernels, alpha0, bracket, args.tol) {
        Ok(t_star) => {
            let check = alpha0 + kernels.gamma0(t_star)?;
            println!(
                "{{\"family\": \"{}\", \"alpha0\": {}, \"t_star\": {}, \"check\": {}}}",
                args.family,
                json_num(alpha0),
                json_num(t_star),
                json_num(check)
            );
            Ok(0)
        }
        Err(Error::RootFind(msg)) => {
            eprintln!("no singularity: {msg}");
            Ok(1)
        }
        Err(e) => Err(e),
    }
}

fn cmd_sweep(args: &SweepArgs) -> Result<i32, Error> {
    check_defaults_flag(&args.family)?;
    let fixed = parse_sets(&args.family.sets)?;
    if fixed.iter().any(|(name, _)| name == &args.param) {
        return Err(Error::Catalog(format!(
            "swept parameter '{}' also appears in --set",
            args.param
        )));
    }
    let values: Vec<f64> = args
        .values
        .split(',')
        .map(|s| {
            s.trim().parse().map_err(|_| {
                Error::Catalog(format!("malformed sweep value '{s}'"))
            })
        })
        .collect::<Result<_, Error>>()?;
    if values.is_empty() {
        return Err(Error::Catalog("no sweep values given".into()));
    }

    let mut text = String::from("param,value,max_abs_u,max_residual,t_star\n");
    for &value in &values {
        let mut overrides = fixed.clone();
        overrides.push((args.param.clone(), value));
        let problem = resolve_problem(&args.family.family, &overrides)?;
        let grid = grid_or_default(&args.grid, problem.window, 25, 9)?;
        let report = run_residual(&problem, &grid, 1e-3, false)?;
        let mut max_abs = 0.0f64;
        for &t in &grid.ts() {
            for &x in &grid.xs() {
                let u = sample(&problem.solution, x, t)?;
                if u.is_finite() {
                    max_abs = max_abs.max(u.abs());
                }
            }
        }
        // The movable singularity applies to uncoupled diffusion families;
        // elsewhere the column stays empty.
        let t_star = if problem.kind == FamilyKind::Gnlh && problem.c0 == 0 {
            let bracket = if args.family.family == FREE_HEAT {
                (1e-6, 1e3)
            } else {
                (1e-6, problem.window.1)
            };
            singularity_kernels(&problem.coeffs, bracket.1)
                .and_then(|k| find_singularity(&k, problem.init_alpha, bracket, 1e-10))
                .map(num)
                .unwrap_or_default()
        } else {
            String::new()
        };
        let _ = writeln!(
            text,
            "{},{},{},{},{t_star}",
            args.param,
            num(value),
            num(max_abs),
            num(report.max_residual)
        );
    }
    write_out(&args.out, &text)?;
    Ok(0)
}

// ---------------------------------------------------------------------------

fn run(cli: &Cli) -> Result<i32, Error> {
    match &cli.command {
        Command::Families(args) => cmd_families(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Singularity(args) => cmd_singularity(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
