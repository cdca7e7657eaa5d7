//! Registry of ready-made coefficient families with bound seed solutions.
//!
//! Each entry packages a named family: coefficient expressions (as template
//! strings over `t` and the entry's free parameters), the seed solution and
//! model constants it is closed by, default parameter values with admissible
//! domains, the validity window, and the construction route. Instantiating an
//! entry substitutes concrete parameter values into the templates and
//! produces a [`ProblemInstance`]; constructing that instance runs the
//! declared route end to end and yields an evaluable solution.
//!
//! Routes:
//!
//! - `ermakov`: solve the characteristic equation under the standard data at
//!   t = 0, form the kernel functions and combine them with the entry's data
//!   through the coupled (c0 = 1) combination. The `data` templates supply
//!   all seven parameter values at t = 0.
//! - `alternative`: the unit-dispersion family `beta = 1`, `epsilon = 0`,
//!   `gamma = t`, `alpha = -c/4`, `delta = g/2`, anchored at the window
//!   start. Only the `mu` and `kappa` data templates are consulted; the rest
//!   are determined by the coefficients.
//! - `burgers`: integrate the Burgers parameter system directly from the
//!   `data` templates evaluated at the window start.
//!
//! The built-in registry is compiled in from `data/catalog.json`; setting the
//! `RKPP_CATALOG` environment variable to a file path overrides it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::burgers::solve_burgers_system;
use crate::coeffs::CoefficientSet;
use crate::error::{Error, Result};
use crate::expr::parse_expr;
use crate::kernel::{kernel_functions, solve_characteristic, CharConvention};
use crate::riccati::{combine_ermakov, solve_alternative, InitialData};
use crate::seeds::{BurgersSeed, FisherSeed};
use crate::transform::{build_gbe_solution, build_gnlh_solution, GbeSolution, GnlhSolution};

/// The built-in registry document.
pub const DEFAULT_CATALOG: &str = include_str!("../data/catalog.json");

/// Environment variable naming an alternative catalog file.
pub const CATALOG_ENV: &str = "RKPP_CATALOG";

/// Which model class a family belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// Reaction-diffusion equation with a modulated nonlinear coupling.
    Gnlh,
    /// Forced Burgers-type equation.
    Gbe,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Gnlh => write!(out, "gnlh"),
            FamilyKind::Gbe => write!(out, "gbe"),
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gnlh" => Ok(FamilyKind::Gnlh),
            "gbe" => Ok(FamilyKind::Gbe),
            other => Err(Error::Catalog(format!(
                "unknown family kind '{other}' (expected 'gnlh' or 'gbe')"
            ))),
        }
    }
}

/// How an entry's parameter functions are constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Kernel combination for the coupled (c0 = 1) diffusion system.
    Ermakov,
    /// Unit-dispersion diffusion family anchored at the window start.
    Alternative,
    /// Direct integration of the Burgers parameter system.
    Burgers,
}

impl fmt::Display for Route {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Route::Ermakov => write!(out, "ermakov"),
            Route::Alternative => write!(out, "alternative"),
            Route::Burgers => write!(out, "burgers"),
        }
    }
}

impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ermakov" => Ok(Route::Ermakov),
            "alternative" => Ok(Route::Alternative),
            "burgers" => Ok(Route::Burgers),
            other => Err(Error::Catalog(format!(
                "unknown route '{other}' (expected 'ermakov', 'alternative' or 'burgers')"
            ))),
        }
    }
}

/// A free parameter of a family: substituted value, admissible interval.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSpec {
    pub name: String,
    pub default: f64,
    /// Inclusive `[lo, hi]` interval accepted by `instantiate`.
    pub domain: [f64; 2],
}

/// Seed solution bound to a family, with the model constants it solves.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SeedBinding {
    pub id: String,
    pub r0: f64,
    pub h0: f64,
    pub p: f64,
}

/// Validity window in source time.
#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub t_min: f64,
    pub t_max: f64,
}

/// Coefficient expression templates over `t` and the family parameters.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffTemplates {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    pub f: String,
    pub g: String,
    pub c0: u8,
}

/// Initial-data expression templates, evaluated at the entry's anchor time.
///
/// Omitted fields default to the identity data (`mu = 1`, `beta = 1`, the
/// rest zero). The `alternative` route consults only `mu` and `kappa`.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct DataTemplates {
    #[serde(default = "template_one")]
    pub mu: String,
    #[serde(default = "template_zero")]
    pub alpha: String,
    #[serde(default = "template_one")]
    pub beta: String,
    #[serde(default = "template_zero")]
    pub gamma: String,
    #[serde(default = "template_zero")]
    pub delta: String,
    #[serde(default = "template_zero")]
    pub epsilon: String,
    #[serde(default = "template_zero")]
    pub kappa: String,
}

fn template_one() -> String {
    "1".into()
}

fn template_zero() -> String {
    "0".into()
}

/// One named family in the registry.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyEntry {
    pub id: String,
    pub kind: FamilyKind,
    pub route: Route,
    pub coefficients: CoeffTemplates,
    #[serde(default)]
    pub params: Vec<ParamSpec>,
    pub seed: SeedBinding,
    pub window: Window,
    #[serde(default)]
    pub singular: bool,
    #[serde(default)]
    pub notes: String,
    #[serde(default)]
    pub source_row: String,
    pub data: DataTemplates,
}

/// Listing filter; `None` fields match everything.
#[derive(Debug, Clone, Copy, Default)]
pub struct FamilyFilter {
    pub kind: Option<FamilyKind>,
    pub route: Option<Route>,
    pub singular: Option<bool>,
}

/// A loaded, validated registry.
#[derive(Debug, Clone)]
pub struct Catalog {
    entries: Vec<FamilyEntry>,
}

impl Catalog {
    /// Load the registry: the `RKPP_CATALOG` file if the variable is set,
    /// the compiled-in document otherwise.
    pub fn load() -> Result<Catalog> {
        match std::env::var(CATALOG_ENV) {
            Ok(path) if !path.is_empty() => {
                let text = std::fs::read_to_string(&path).map_err(|e| {
                    Error::Catalog(format!("cannot read catalog file {path:?}: {e}"))
                })?;
                Catalog::from_json(&text)
            }
            _ => Catalog::builtin(),
        }
    }

    /// The compiled-in registry.
    pub fn builtin() -> Result<Catalog> {
        Catalog::from_json(DEFAULT_CATALOG)
    }

    /// Parse and validate a registry document.
    pub fn from_json(text: &str) -> Result<Catalog> {
        let entries: Vec<FamilyEntry> = serde_json::from_str(text)
            .map_err(|e| Error::Catalog(format!("malformed catalog document: {e}")))?;
        let catalog = Catalog { entries };
        catalog.validate()?;
        Ok(catalog)
    }

    pub fn entries(&self) -> &[FamilyEntry] {
        &self.entries
    }

    /// Look up one entry by id.
    pub fn get(&self, id: &str) -> Result<&FamilyEntry> {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::Catalog(format!("no family with id '{id}' in the catalog")))
    }

    /// Entries matching the filter, in id order.
    pub fn list(&self, filter: &FamilyFilter) -> Vec<&FamilyEntry> {
        self.entries
            .iter()
            .filter(|e| {
                filter.kind.map_or(true, |k| e.kind == k)
                    && filter.route.map_or(true, |r| e.route == r)
                    && filter.singular.map_or(true, |s| e.singular == s)
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        for pair in self.entries.windows(2) {
            if pair[0].id >= pair[1].id {
                return Err(Error::Catalog(format!(
                    "catalog ids must be unique and sorted; '{}' precedes '{}'",
                    pair[0].id, pair[1].id
                )));
            }
        }
        for entry in &self.entries {
            entry.validate().map_err(|e| {
                Error::Catalog(format!("invalid catalog entry '{}': {e}", entry.id))
            })?;
        }
        Ok(())
    }
}

/// Identifier names the expression grammar reserves.
const RESERVED_NAMES: [&str; 19] = [
    "t", "pi", "exp", "log", "sqrt", "sin", "cos", "tan", "cot", "sec", "csc", "sinh", "cosh",
    "tanh", "coth", "sech", "csch", "abs", "sign",
];

impl FamilyEntry {
    /// Default parameter values.
    pub fn defaults(&self) -> BTreeMap<String, f64> {
        self.params
            .iter()
            .map(|p| (p.name.clone(), p.default))
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if !(self.window.t_min.is_finite()
            && self.window.t_max.is_finite()
            && self.window.t_min < self.window.t_max)
        {
            return Err(Error::Catalog(format!(
                "window [{}, {}] is not a finite forward interval",
                self.window.t_min, self.window.t_max
            )));
        }
        if self.coefficients.c0 > 1 {
            return Err(Error::Catalog(format!(
                "c0 must be 0 or 1, got {}",
                self.coefficients.c0
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for p in &self.params {
            if RESERVED_NAMES.contains(&p.name.as_str()) {
                return Err(Error::Catalog(format!(
                    "parameter name '{}' is reserved by the expression grammar",
                    p.name
                )));
            }
            if !seen.insert(p.name.as_str()) {
                return Err(Error::Catalog(format!("duplicate parameter '{}'", p.name)));
            }
            let [lo, hi] = p.domain;
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Catalog(format!(
                    "parameter '{}' has malformed domain [{lo}, {hi}]",
                    p.name
                )));
            }
            if !(p.default >= lo && p.default <= hi) {
                return Err(Error::Catalog(format!(
                    "parameter '{}' default {} lies outside [{lo}, {hi}]",
                    p.name, p.default
                )));
            }
        }
        match (self.kind, self.route) {
            (FamilyKind::Gnlh, Route::Burgers) => {
                return Err(Error::Catalog(
                    "gnlh families cannot use the burgers route".into(),
                ));
            }
            (FamilyKind::Gbe, r) if r != Route::Burgers => {
                return Err(Error::Catalog(
                    "gbe families must use the burgers route".into(),
                ));
            }
            (FamilyKind::Gnlh, Route::Ermakov) if self.coefficients.c0 != 1 => {
                return Err(Error::Catalog(
                    "the ermakov route solves the c0 = 1 system".into(),
                ));
            }
            _ => {}
        }
        match self.kind {
            FamilyKind::Gnlh => {
                let seed = FisherSeed::from_id(&self.seed.id)?;
                if seed.model() != (self.seed.r0, self.seed.h0, self.seed.p) {
                    return Err(Error::Catalog(format!(
                        "seed '{}' solves the model {:?}, not ({}, {}, {})",
                        self.seed.id,
                        seed.model(),
                        self.seed.r0,
                        self.seed.h0,
                        self.seed.p
                    )));
                }
                let arity = seed.k_arity();
                let has = |n: &str| self.params.iter().any(|p| p.name == n);
                if (arity >= 1) != has("k1") || (arity >= 2) != has("k2") {
                    return Err(Error::Catalog(format!(
                        "seed '{}' takes {arity} shape parameter(s); declare exactly those of k1, k2",
                        self.seed.id
                    )));
                }
            }
            FamilyKind::Gbe => {
                default_burgers_seed(&self.seed.id)?;
                if (self.seed.r0, self.seed.h0, self.seed.p) != (0.0, 0.0, 0.0) {
                    return Err(Error::Catalog(
                        "gbe seed bindings carry no model constants; set r0 = h0 = p = 0".into(),
                    ));
                }
            }
        }
        // Every template must parse once defaults are substituted.
        self.instantiate(&[]).map(|_| ())
    }

    /// Resolve parameter values (defaults plus overrides), substitute them
    /// into the templates, and build the concrete problem.
    pub fn instantiate(&self, overrides: &[(String, f64)]) -> Result<ProblemInstance> {
        let mut values = self.defaults();
        for (name, value) in overrides {
            let spec = self
                .params
                .iter()
                .find(|p| &p.name == name)
                .ok_or_else(|| {
                    Error::Catalog(format!(
                        "family '{}' has no parameter '{name}' (available: {})",
                        self.id,
                        self.params
                            .iter()
                            .map(|p| p.name.as_str())
                            .collect::<Vec<_>>()
                            .join(", ")
                    ))
                })?;
            if !value.is_finite() {
                return Err(Error::Catalog(format!(
                    "parameter '{name}' must be finite, got {value}"
                )));
            }
            let [lo, hi] = spec.domain;
            if !(*value >= lo && *value <= hi) {
                return Err(Error::Catalog(format!(
                    "parameter '{name}' = {value} lies outside its domain [{lo}, {hi}]"
                )));
            }
            values.insert(name.clone(), *value);
        }

        let ct = &self.coefficients;
        let coeffs = CoefficientSet::parse(
            &substitute(&ct.a, &values),
            &substitute(&ct.b, &values),
            &substitute(&ct.c, &values),
            &substitute(&ct.d, &values),
            &substitute(&ct.f, &values),
            &substitute(&ct.g, &values),
            ct.c0,
            self.seed.r0,
            self.seed.h0,
            self.seed.p,
        )?;

        let window = (self.window.t_min, self.window.t_max);
        let t_ref = match self.route {
            // Kernel combinations anchor at t = 0 by construction.
            Route::Ermakov => 0.0,
            Route::Alternative | Route::Burgers => window.0,
        };
        let data_at = |template: &str| -> Result<f64> {
            parse_expr(&substitute(template, &values))?.eval(t_ref)
        };
        let init = match self.route {
            Route::Ermakov | Route::Burgers => InitialData {
                mu: data_at(&self.data.mu)?,
                alpha: data_at(&self.data.alpha)?,
                beta: data_at(&self.data.beta)?,
                gamma: data_at(&self.data.gamma)?,
                delta: data_at(&self.data.delta)?,
                epsilon: data_at(&self.data.epsilon)?,
                kappa: data_at(&self.data.kappa)?,
                l0: 1,
            },
            Route::Alternative => {
                let at_ref = coeffs.eval(t_ref)?;
                InitialData {
                    mu: data_at(&self.data.mu)?,
                    alpha: -at_ref.c / 4.0,
                    beta: 1.0,
                    gamma: t_ref,
                    delta: at_ref.g / 2.0,
                    epsilon: 0.0,
                    kappa: data_at(&self.data.kappa)?,
                    l0: 1,
                }
            }
        };

        Ok(ProblemInstance {
            id: self.id.clone(),
            kind: self.kind,
            route: self.route,
            coeffs,
            init,
            window,
            seed: self.seed.clone(),
            values,
        })
    }
}

/// A family with concrete parameter values: parsed coefficients, initial
/// data, window, and the seed binding.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub id: String,
    pub kind: FamilyKind,
    pub route: Route,
    pub coeffs: CoefficientSet,
    pub init: InitialData,
    pub window: (f64, f64),
    pub seed: SeedBinding,
    /// Resolved parameter values, defaults included.
    pub values: BTreeMap<String, f64>,
}

impl ProblemInstance {
    /// Run the declared construction route and assemble the solution.
    pub fn construct(&self) -> Result<Solution> {
        match self.route {
            Route::Ermakov => {
                self.coeffs.validate_diffusion(0.0, self.window.1)?;
                let pair =
                    solve_characteristic(&self.coeffs, CharConvention::Appendix, self.window.1)?;
                let kernels = kernel_functions(pair, &self.coeffs)?;
                let params = combine_ermakov(kernels, self.init)?;
                self.finish_gnlh(params)
            }
            Route::Alternative => {
                let params = solve_alternative(&self.coeffs, &self.init, self.window)?;
                self.finish_gnlh(params)
            }
            Route::Burgers => {
                let params = solve_burgers_system(&self.coeffs, &self.init, self.window)?;
                let seed = default_burgers_seed(&self.seed.id)?;
                Ok(Solution::Gbe(build_gbe_solution(
                    params,
                    self.coeffs.clone(),
                    seed,
                )?))
            }
        }
    }

    fn finish_gnlh(&self, params: crate::riccati::ParameterFunctions) -> Result<Solution> {
        let seed = FisherSeed::from_id(&self.seed.id)?;
        let k1 = self.values.get("k1").copied().unwrap_or(0.0);
        let k2 = self.values.get("k2").copied().unwrap_or(0.0);
        Ok(Solution::Gnlh(build_gnlh_solution(
            params,
            self.coeffs.clone(),
            seed,
            k1,
            k2,
        )?))
    }
}

/// A constructed solution of either model class.
#[derive(Debug)]
pub enum Solution {
    Gnlh(GnlhSolution),
    Gbe(GbeSolution),
}

impl Solution {
    pub fn kind(&self) -> FamilyKind {
        match self {
            Solution::Gnlh(_) => FamilyKind::Gnlh,
            Solution::Gbe(_) => FamilyKind::Gbe,
        }
    }

    /// Evaluate the solution field at `(x, t)`.
    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        match self {
            Solution::Gnlh(s) => s.eval(x, t),
            Solution::Gbe(s) => s.eval(x, t),
        }
    }

    pub fn as_gnlh(&self) -> Option<&GnlhSolution> {
        match self {
            Solution::Gnlh(s) => Some(s),
            Solution::Gbe(_) => None,
        }
    }

    pub fn as_gbe(&self) -> Option<&GbeSolution> {
        match self {
            Solution::Gnlh(_) => None,
            Solution::Gbe(s) => Some(s),
        }
    }
}

/// The default seed fields for each Burgers seed id.
fn default_burgers_seed(id: &str) -> Result<BurgersSeed> {
    match id {
        "shock" => Ok(BurgersSeed::Shock {
            speed: 0.5,
            amplitude: 1.0,
            center: 0.0,
        }),
        "triangular" => Ok(BurgersSeed::Triangular { re: 1.5 }),
        "nwave" => Ok(BurgersSeed::NWave { mass: 1.0 }),
        "kampe" => Ok(BurgersSeed::Kampe {
            coeffs: vec![1.0, 1.0],
        }),
        other => Err(Error::Seed(format!("unknown Burgers seed '{other}'"))),
    }
}

/// Replace each whole-identifier occurrence of a parameter name with its
/// value, parenthesized so signs and precedence survive.
fn substitute(template: &str, values: &BTreeMap<String, f64>) -> String {
    let bytes = template.as_bytes();
    let mut out = String::with_capacity(template.len());
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let ident = &template[start..i];
            match values.get(ident) {
                Some(v) => out.push_str(&format!("({v:?})")),
                None => out.push_str(ident),
            }
        } else {
            out.push(c);
            i += 1;
        }
    }
    out
}
