//! Scenario files: flat `key = value` lines, `#` comments, and optional
//! `[diagnostic.<id>]` sections holding per-diagnostic options.
//!
//! ```text
//! family = pareto
//! beta = 1
//! alpha = 2
//! theta = 1
//! diagnostics = T1f, T1h, rv
//! grid = 10:2:21
//!
//! [diagnostic.rv]
//! target = H
//! t = 2
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use httool_core::asymptotics::{geometric_grid, AuxiliarySpec, DeHaanTarget, DiagnosticItem};
use httool_core::models::{make_model, parse_samples, DistributionModel, FamilySpec};
use httool_core::quadrature::QuadratureConfig;

use crate::error::{from_core, CliError};

pub const OUTPUT_DIR_ENV: &str = "HTTOOL_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x0: f64,
    pub factor: f64,
    pub count: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            x0: 10.0,
            factor: 2.0,
            count: 21,
        }
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        geometric_grid(self.x0, self.factor, self.count)
    }

    fn validate(&self) -> Result<(), String> {
        if !(self.x0 > 0.0 && self.x0.is_finite()) {
            return Err(format!("x0 must be positive, got {}", self.x0));
        }
        if !(self.factor > 1.0 && self.factor.is_finite()) {
            return Err(format!("factor must exceed 1, got {}", self.factor));
        }
        if self.count < 4 {
            return Err(format!("count must be at least 4, got {}", self.count));
        }
        Ok(())
    }
}

impl FromStr for GridSpec {
    type Err = String;

    /// `x0:factor:count`
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [x0, factor, count] = parts[..] else {
            return Err(format!("expected x0:factor:count, got `{s}`"));
        };
        let grid = GridSpec {
            x0: x0.parse().map_err(|_| format!("bad x0 `{x0}`"))?,
            factor: factor.parse().map_err(|_| format!("bad factor `{factor}`"))?,
            count: count.parse().map_err(|_| format!("bad count `{count}`"))?,
        };
        grid.validate()?;
        Ok(grid)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.x0, self.factor, self.count)
    }
}

/// Function whose regular-variation index is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RvTarget {
    Tail,
    Gbar,
    W,
    H,
    Wbar,
    MMinusH,
}

impl RvTarget {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "tail" => RvTarget::Tail,
            "Gbar" => RvTarget::Gbar,
            "W" => RvTarget::W,
            "H" => RvTarget::H,
            "Wbar" => RvTarget::Wbar,
            "m_minus_H" => RvTarget::MMinusH,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RvTarget::Tail => "tail",
            RvTarget::Gbar => "Gbar",
            RvTarget::W => "W",
            RvTarget::H => "H",
            RvTarget::Wbar => "Wbar",
            RvTarget::MMinusH => "m_minus_H",
        }
    }

    /// Index implied by `theta`: for `theta <= alpha`, `x^alpha T(x)` has index
    /// `theta`; for `theta > alpha`, `T` has index `-theta`.
    pub fn expected_index(self, alpha: f64, theta: f64) -> Option<f64> {
        if theta <= alpha {
            match self {
                RvTarget::Tail | RvTarget::Gbar => Some(theta - alpha),
                RvTarget::W | RvTarget::H => Some(theta),
                RvTarget::Wbar | RvTarget::MMinusH => None,
            }
        } else {
            match self {
                RvTarget::Tail => Some(-theta),
                RvTarget::Gbar => Some(-alpha),
                RvTarget::W | RvTarget::H => Some(0.0),
                RvTarget::Wbar | RvTarget::MMinusH => Some(alpha - theta),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RvOptions {
    pub target: RvTarget,
    pub t: f64,
    /// Absolute tolerance on the final slope.
    pub tolerance: f64,
}

impl Default for RvOptions {
    fn default() -> Self {
        Self {
            target: RvTarget::Tail,
            t: 2.0,
            tolerance: 0.02,
        }
    }
}

/// Function handed to the Karamata check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KaramataFunction {
    /// `U(y) = T(y)`
    Tail,
    /// `U(y) = y^(alpha-1) T(y)`, the integrand of `W`.
    TailWeight,
}

impl KaramataFunction {
    pub fn expected_rho(self, alpha: f64, theta: f64) -> f64 {
        let tail_index = if theta <= alpha { theta - alpha } else { -theta };
        match self {
            KaramataFunction::Tail => tail_index,
            KaramataFunction::TailWeight => tail_index + alpha - 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KaramataOptions {
    pub function: KaramataFunction,
    pub rho: Option<f64>,
}

impl Default for KaramataOptions {
    fn default() -> Self {
        Self {
            function: KaramataFunction::TailWeight,
            rho: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeHaanOptions {
    pub target: DeHaanTarget,
    pub normalizer: AuxiliarySpec,
    pub t_values: Vec<f64>,
    /// Bound on `|beta - alpha lambda|` at the largest grid point.
    pub tolerance: f64,
}

impl Default for DeHaanOptions {
    fn default() -> Self {
        Self {
            target: DeHaanTarget::H,
            normalizer: AuxiliarySpec::Auto,
            t_values: vec![2.0, 4.0, 8.0],
            tolerance: 0.03,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloOptions {
    pub n: usize,
    /// Number of seeds, `seed, seed + 1, ...`.
    pub seeds: usize,
    /// How many seeds must pass the 99% KS test.
    pub required: usize,
}

impl Default for MonteCarloOptions {
    fn default() -> Self {
        Self {
            n: 10_000,
            seeds: 3,
            required: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DiagnosticRequest {
    Item(DiagnosticItem),
    Rv(RvOptions),
    Karamata(KaramataOptions),
    DeHaan(DeHaanOptions),
    Corollary,
    MonteCarlo(MonteCarloOptions),
}

impl DiagnosticRequest {
    pub fn id(&self) -> String {
        match self {
            DiagnosticRequest::Item(item) => item.id().to_string(),
            DiagnosticRequest::Rv(_) => "rv".into(),
            DiagnosticRequest::Karamata(_) => "karamata".into(),
            DiagnosticRequest::DeHaan(_) => "dehaan".into(),
            DiagnosticRequest::Corollary => "corollary".into(),
            DiagnosticRequest::MonteCarlo(_) => "montecarlo".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub family: FamilySpec,
    pub alpha: f64,
    pub theta: Option<f64>,
    pub diagnostics: Vec<DiagnosticRequest>,
    pub grid: GridSpec,
    pub ratio_rel: f64,
    pub quad: QuadratureConfig,
    pub output_dir: PathBuf,
    pub seed: u64,
}

impl ScenarioConfig {
    /// Builds the distribution model; empirical sample files are read here.
    pub fn build_model(&self) -> Result<DistributionModel, CliError> {
        let spec = match &self.family {
            FamilySpec::EmpiricalFile(path) => FamilySpec::EmpiricalSamples(load_samples(path)?),
            other => other.clone(),
        };
        make_model(&spec).map_err(|e| from_core(e, "family"))
    }
}

/// Reads and validates a samples file: I/O failures map to exit 3, bad lines to exit 2.
pub fn load_samples(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_samples(&text).map_err(|e| match e {
        httool_core::Error::Input(msg) => CliError::Data(format!("{}: {msg}", path.display())),
        other => CliError::Data(other.to_string()),
    })
}

type Section = BTreeMap<String, (usize, String)>;

struct RawConfig {
    top: Section,
    sections: BTreeMap<String, Section>,
}

fn parse_raw(text: &str) -> Result<RawConfig, CliError> {
    let mut top = Section::new();
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('[') {
            let name = header
                .strip_suffix(']')
                .and_then(|h| h.trim().strip_prefix("diagnostic."))
                .ok_or_else(|| {
                    CliError::config(line, format!("line {lineno}: sections must look like [diagnostic.<id>]"))
                })?
                .trim()
                .to_string();
            if sections.contains_key(&name) {
                return Err(CliError::config(format!("diagnostic.{name}"), format!("line {lineno}: duplicate section")));
            }
            sections.insert(name.clone(), Section::new());
            current = Some(name);
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::config(line, format!("line {lineno}: expected `key = value`")))?;
        let (key, value) = (key.trim().to_string(), value.trim().to_string());
        let (target, label) = match &current {
            Some(name) => (sections.get_mut(name).expect("section inserted"), format!("diagnostic.{name}.{key}")),
            None => (&mut top, key.clone()),
        };
        if target.insert(key, (lineno, value)).is_some() {
            return Err(CliError::config(label, format!("line {lineno}: duplicate key")));
        }
    }
    Ok(RawConfig { top, sections })
}

/// Typed access to one section, tracking which keys were consumed.
struct Fields {
    prefix: String,
    entries: Section,
}

impl Fields {
    fn new(prefix: &str, entries: Section) -> Self {
        Self {
            prefix: prefix.to_string(),
            entries,
        }
    }

    fn label(&self, key: &str) -> String {
        format!("{}{key}", self.prefix)
    }

    fn take_str(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key).map(|(_, v)| v)
    }

    fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, CliError> {
        match self.entries.remove(key) {
            None => Ok(None),
            Some((lineno, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| CliError::config(self.label(key), format!("line {lineno}: cannot parse `{v}`"))),
        }
    }

    fn require<T: FromStr>(&mut self, key: &str, why: &str) -> Result<T, CliError> {
        self.take(key)?
            .ok_or_else(|| CliError::config(self.label(key), format!("missing ({why})")))
    }

    fn finish(self) -> Result<(), CliError> {
        match self.entries.into_iter().next() {
            None => Ok(()),
            Some((key, (lineno, _))) => Err(CliError::config(
                format!("{}{key}", self.prefix),
                format!("line {lineno}: unknown or inapplicable key"),
            )),
        }
    }
}

fn parse_family(f: &mut Fields, base_dir: &Path) -> Result<FamilySpec, CliError> {
    let name: String = f.require("family", "family is required")?;
    let why = format!("required by family {name}");
    Ok(match name.as_str() {
        "pareto" => FamilySpec::Pareto {
            beta: f.require("beta", &why)?,
            scale: f.take("scale")?.unwrap_or(1.0),
        },
        "pareto_log" => FamilySpec::ParetoLog {
            beta: f.require("beta", &why)?,
            log_power: f.require("log_power", &why)?,
        },
        "boundary_rv" => FamilySpec::BoundaryRv {
            alpha0: f.require("alpha0", &why)?,
        },
        "exponential" => FamilySpec::Exponential {
            rate: f.take("rate")?.unwrap_or(1.0),
        },
        "degenerate" => FamilySpec::Degenerate {
            atom: f.require("atom", &why)?,
        },
        "empirical" => {
            let path: String = f.require("samples", &why)?;
            FamilySpec::EmpiricalFile(base_dir.join(path))
        }
        other => return Err(CliError::config("family", format!("unknown family `{other}`"))),
    })
}

fn parse_list<T: FromStr>(f: &Fields, key: &str, raw: &str) -> Result<Vec<T>, CliError> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| CliError::config(f.label(key), format!("cannot parse `{s}`"))))
        .collect()
}

fn parse_request(id: &str, section: Option<Section>) -> Result<DiagnosticRequest, CliError> {
    let mut f = Fields::new(&format!("diagnostic.{id}."), section.unwrap_or_default());
    let request = match id {
        "rv" => {
            let mut o = RvOptions::default();
            if let Some(t) = f.take_str("target") {
                o.target = RvTarget::parse(&t)
                    .ok_or_else(|| CliError::config(f.label("target"), format!("unknown target `{t}`")))?;
            }
            o.t = f.take("t")?.unwrap_or(o.t);
            o.tolerance = f.take("tolerance")?.unwrap_or(o.tolerance);
            if !(o.t > 1.0) {
                return Err(CliError::config(f.label("t"), "must exceed 1"));
            }
            DiagnosticRequest::Rv(o)
        }
        "karamata" => {
            let mut o = KaramataOptions::default();
            if let Some(u) = f.take_str("function") {
                o.function = match u.as_str() {
                    "tail" => KaramataFunction::Tail,
                    "tail_weight" => KaramataFunction::TailWeight,
                    other => return Err(CliError::config(f.label("function"), format!("unknown function `{other}`"))),
                };
            }
            o.rho = f.take("rho")?;
            DiagnosticRequest::Karamata(o)
        }
        "dehaan" => {
            let mut o = DeHaanOptions::default();
            if let Some(t) = f.take_str("target") {
                o.target = match t.as_str() {
                    "H" => DeHaanTarget::H,
                    "GbarScaled" => DeHaanTarget::GbarScaled,
                    other => return Err(CliError::config(f.label("target"), format!("unknown target `{other}`"))),
                };
            }
            if let Some(l) = f.take_str("L") {
                o.normalizer = match l.as_str() {
                    "auto" => AuxiliarySpec::Auto,
                    "constant_one" | "1" => AuxiliarySpec::ConstantOne,
                    other => return Err(CliError::config(f.label("L"), format!("unknown normalizer `{other}`"))),
                };
            }
            if let Some(raw) = f.take_str("t_values") {
                o.t_values = parse_list(&f, "t_values", &raw)?;
            }
            if o.t_values.is_empty() || o.t_values.iter().any(|&t| !(t > 1.0)) {
                return Err(CliError::config(f.label("t_values"), "need at least one value, all > 1"));
            }
            o.tolerance = f.take("tolerance")?.unwrap_or(o.tolerance);
            DiagnosticRequest::DeHaan(o)
        }
        "montecarlo" => {
            let mut o = MonteCarloOptions::default();
            o.n = f.take("n")?.unwrap_or(o.n);
            o.seeds = f.take("seeds")?.unwrap_or(o.seeds);
            o.required = f.take("required")?.unwrap_or(o.required);
            if o.n == 0 {
                return Err(CliError::config(f.label("n"), "must be positive"));
            }
            if o.required == 0 || o.required > o.seeds {
                return Err(CliError::config(f.label("required"), "must lie in 1..=seeds"));
            }
            DiagnosticRequest::MonteCarlo(o)
        }
        "corollary" => DiagnosticRequest::Corollary,
        other => DiagnosticRequest::Item(
            other
                .parse()
                .map_err(|_| CliError::config("diagnostics", format!("unknown diagnostic `{other}`")))?,
        ),
    };
    f.finish()?;
    Ok(request)
}

fn validate_theta(alpha: f64, theta: Option<f64>, diagnostics: &[DiagnosticRequest]) -> Result<(), CliError> {
    for d in diagnostics {
        if let DiagnosticRequest::Karamata(k) = d {
            if k.rho.is_none() && theta.is_none() {
                return Err(CliError::config("diagnostic.karamata.rho", "give rho, or theta to derive it"));
            }
            if k.rho == Some(-1.0) {
                return Err(CliError::config("diagnostic.karamata.rho", "rho = -1 is excluded"));
            }
        }
        let DiagnosticRequest::Item(item) = d else { continue };
        if !(item.is_regular_regime() || item.is_finite_moment_regime()) {
            continue;
        }
        let theta =
            theta.ok_or_else(|| CliError::config("theta", format!("theta is required by diagnostic {item}")))?;
        if item.is_regular_regime() && !(0.0..=alpha).contains(&theta) {
            return Err(CliError::config("theta", format!("{item} needs 0 <= theta <= alpha = {alpha}, got {theta}")));
        }
        if item.is_finite_moment_regime() && !(theta > alpha) {
            return Err(CliError::config("theta", format!("{item} needs theta > alpha = {alpha}, got {theta}")));
        }
    }
    if let Some(t) = theta {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(CliError::config("theta", format!("must be finite and nonnegative, got {t}")));
        }
    }
    Ok(())
}

/// Parses a scenario. Relative sample paths resolve against `base_dir`.
pub fn parse_config(text: &str, base_dir: &Path) -> Result<ScenarioConfig, CliError> {
    let raw = parse_raw(text)?;
    let mut f = Fields::new("", raw.top);

    let family = parse_family(&mut f, base_dir)?;
    let alpha: f64 = f.require("alpha", "alpha is required")?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(CliError::config("alpha", format!("must be positive, got {alpha}")));
    }
    let theta: Option<f64> = f.take("theta")?;

    let mut sections = raw.sections;
    let mut diagnostics = Vec::new();
    if let Some(list) = f.take_str("diagnostics") {
        for id in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            if diagnostics.iter().any(|d: &DiagnosticRequest| d.id() == id) {
                return Err(CliError::config("diagnostics", format!("`{id}` listed twice")));
            }
            diagnostics.push(parse_request(id, sections.remove(id))?);
        }
    }
    if let Some(name) = sections.keys().next() {
        return Err(CliError::config(
            format!("diagnostic.{name}"),
            "section given for a diagnostic that is not listed in `diagnostics`",
        ));
    }
    validate_theta(alpha, theta, &diagnostics)?;

    let grid = match f.take_str("grid") {
        Some(g) => g.parse().map_err(|e: String| CliError::config("grid", e))?,
        None => GridSpec::default(),
    };
    let ratio_rel: f64 = f.take("ratio_rel")?.unwrap_or(0.01);
    if !(ratio_rel > 0.0) {
        return Err(CliError::config("ratio_rel", "must be positive"));
    }
    let defaults = QuadratureConfig::default();
    let quad = QuadratureConfig {
        rel_tol: f.take("quad_rel_tol")?.unwrap_or(defaults.rel_tol),
        abs_tol: f.take("quad_abs_tol")?.unwrap_or(defaults.abs_tol),
        max_subdivisions: f.take("quad_max_subdivisions")?.unwrap_or(defaults.max_subdivisions),
    };
    quad.validate().map_err(|e| from_core(e, "quad"))?;
    let output_dir = f.take_str("output_dir").map(PathBuf::from).unwrap_or_else(|| PathBuf::from("httool_out"));
    let seed: u64 = f.take("seed")?.unwrap_or(0);
    f.finish()?;

    Ok(ScenarioConfig {
        family,
        alpha,
        theta,
        diagnostics,
        grid,
        ratio_rel,
        quad,
        output_dir: base_dir.join(output_dir),
        seed,
    })
}

/// Reads a scenario file; `HTTOOL_OUTPUT_DIR` overrides `output_dir`.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let mut cfg = parse_config(&text, base)?;
    if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV).filter(|d| !d.is_empty()) {
        cfg.output_dir = PathBuf::from(dir);
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ScenarioConfig, CliError> {
        parse_config(text, Path::new("/base"))
    }

    fn field_of(err: CliError) -> String {
        match err {
            CliError::Config { field, .. } => field,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn full_example() {
        let cfg = parse(
            "family = pareto\nbeta = 1 # comment\nalpha = 2\ntheta = 1\n\
             diagnostics = T1f, T1h, rv\ngrid = 10:10:6\nseed = 9\n\n[diagnostic.rv]\ntarget = H\nt = 2\n",
        )
        .unwrap();
        assert_eq!(cfg.family, FamilySpec::Pareto { beta: 1.0, scale: 1.0 });
        assert_eq!(cfg.alpha, 2.0);
        assert_eq!(cfg.theta, Some(1.0));
        assert_eq!(cfg.diagnostics.len(), 3);
        assert_eq!(cfg.grid.points().len(), 6);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.output_dir, PathBuf::from("/base/httool_out"));
        match &cfg.diagnostics[2] {
            DiagnosticRequest::Rv(o) => assert_eq!(o.target, RvTarget::H),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_theta_names_field() {
        let err = parse("family = pareto\nbeta = 1\nalpha = 2\ndiagnostics = T1f\n").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert_eq!(field_of(err), "theta");
    }

    #[test]
    fn theta_regime_checked() {
        let err = parse("family = pareto\nbeta = 1\nalpha = 2\ntheta = 1\ndiagnostics = T2d\n").unwrap_err();
        assert_eq!(field_of(err), "theta");
        // Not needed for the corollary.
        assert!(parse("family = degenerate\natom = 2\nalpha = 1\ndiagnostics = corollary\n").is_ok());
    }

    #[test]
    fn grid_rules() {
        assert_eq!("10:2:21".parse::<GridSpec>().unwrap(), GridSpec::default());
        assert!("10:1:21".parse::<GridSpec>().is_err());
        assert!("10:2:3".parse::<GridSpec>().is_err());
        assert!("10:2".parse::<GridSpec>().is_err());
        let err = parse("family = exponential\nalpha = 1\ngrid = 1:0.5:10\n").unwrap_err();
        assert_eq!(field_of(err), "grid");
    }

    #[test]
    fn unknown_keys_and_sections() {
        assert_eq!(field_of(parse("family = exponential\nalpha = 1\ncolour = red\n").unwrap_err()), "colour");
        assert_eq!(
            field_of(parse("family = exponential\nalpha = 1\nbeta = 2\n").unwrap_err()),
            "beta"
        );
        let err = parse("family = exponential\nalpha = 1\n[diagnostic.rv]\nt = 2\n").unwrap_err();
        assert_eq!(field_of(err), "diagnostic.rv");
        let err = parse("family = exponential\nalpha = 1\ndiagnostics = rv\n[diagnostic.rv]\nt = 0.5\n").unwrap_err();
        assert_eq!(field_of(err), "diagnostic.rv.t");
        let err = parse("family = exponential\nalpha = 1\ndiagnostics = T9\n").unwrap_err();
        assert_eq!(field_of(err), "diagnostics");
    }

    #[test]
    fn family_parameters() {
        assert_eq!(field_of(parse("family = pareto\nalpha = 1\n").unwrap_err()), "beta");
        assert_eq!(field_of(parse("alpha = 1\n").unwrap_err()), "family");
        assert_eq!(field_of(parse("family = cauchy\nalpha = 1\n").unwrap_err()), "family");
        assert_eq!(field_of(parse("family = exponential\nalpha = -1\n").unwrap_err()), "alpha");
        let cfg = parse("family = empirical\nsamples = data.txt\nalpha = 1\n").unwrap();
        assert_eq!(cfg.family, FamilySpec::EmpiricalFile(PathBuf::from("/base/data.txt")));
        let cfg = parse("family = pareto\nbeta = -1\nalpha = 1\n").unwrap();
        assert_eq!(field_of(cfg.build_model().unwrap_err()), "beta");
    }

    #[test]
    fn expected_indices() {
        assert_eq!(RvTarget::Tail.expected_index(2.0, 1.0), Some(-1.0));
        assert_eq!(RvTarget::H.expected_index(2.0, 1.0), Some(1.0));
        assert_eq!(RvTarget::Wbar.expected_index(2.0, 3.0), Some(-1.0));
        assert_eq!(RvTarget::MMinusH.expected_index(2.0, 1.0), None);
        assert_eq!(KaramataFunction::TailWeight.expected_rho(2.0, 1.0), 0.0);
        assert_eq!(KaramataFunction::Tail.expected_rho(2.0, 3.0), -3.0);
    }
}
