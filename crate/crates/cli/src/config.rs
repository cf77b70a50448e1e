//! Layered run configuration: schema defaults, figure preset, file, `--set`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use optomech::cavity::Mirror;
use optomech::{BathParams, CavitySetup, DiskGeometry, IntensityProfile, MaterialParams, OpticalParams};
use toml::Value;

use crate::schema::{self, Fallback, Kind};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.key, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    ModesDisk,
    Thermo,
    Tether,
    Spring,
    Coupling,
    Cavity,
    Budget,
    Figure,
}

impl Scenario {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "modes-disk" => Self::ModesDisk,
            "thermo" => Self::Thermo,
            "tether" => Self::Tether,
            "spring" => Self::Spring,
            "coupling" => Self::Coupling,
            "cavity" => Self::Cavity,
            "budget" => Self::Budget,
            "figure" => Self::Figure,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::ModesDisk => "modes-disk",
            Self::Thermo => "thermo",
            Self::Tether => "tether",
            Self::Spring => "spring",
            Self::Coupling => "coupling",
            Self::Cavity => "cavity",
            Self::Budget => "budget",
            Self::Figure => "figure",
        }
    }

    /// Default sweep `(start, stop, points, log)` along the scenario's axis.
    fn default_sweep(self) -> (f64, f64, i64, bool) {
        match self {
            Self::ModesDisk => (0.0, 5e11, 11, false),
            Self::Thermo => (1e5, 5e6, 11, true),
            Self::Tether => (0.0, 5e6, 51, false),
            Self::Spring => (1e8, 1e10, 11, true),
            Self::Coupling => (30e3, 300e3, 10, false),
            Self::Cavity => (0.4, 2.0, 8, true),
            Self::Budget => (5e-6, 14e-6, 10, false),
            Self::Figure => (0.0, 1.0, 1, false),
        }
    }

    /// Sweep axes that must stay strictly positive.
    fn positive_axis(self) -> bool {
        !matches!(self, Self::ModesDisk | Self::Tether)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3aInset,
    Fig3b,
    Fig3c,
    Fig4a,
    Fig4b,
    Fig5a,
    Fig5b,
    Fig5c,
}

impl Figure {
    pub fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "fig2a" => Self::Fig2a,
            "fig2b" => Self::Fig2b,
            "fig3a" => Self::Fig3a,
            "fig3a-inset" => Self::Fig3aInset,
            "fig3b" => Self::Fig3b,
            "fig3c" => Self::Fig3c,
            "fig4a" => Self::Fig4a,
            "fig4b" => Self::Fig4b,
            "fig5a" => Self::Fig5a,
            "fig5b" => Self::Fig5b,
            "fig5c" => Self::Fig5c,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig2a => "fig2a",
            Self::Fig2b => "fig2b",
            Self::Fig3a => "fig3a",
            Self::Fig3aInset => "fig3a-inset",
            Self::Fig3b => "fig3b",
            Self::Fig3c => "fig3c",
            Self::Fig4a => "fig4a",
            Self::Fig4b => "fig4b",
            Self::Fig5a => "fig5a",
            Self::Fig5b => "fig5b",
            Self::Fig5c => "fig5c",
        }
    }

    /// Scenario whose sweep axis the figure uses.
    pub fn base(self) -> Scenario {
        match self {
            Self::Fig2a => Scenario::ModesDisk,
            Self::Fig2b | Self::Fig3b => Scenario::Tether,
            Self::Fig3a | Self::Fig3c => Scenario::Thermo,
            Self::Fig3aInset => Scenario::Figure,
            Self::Fig4a | Self::Fig4b => Scenario::Coupling,
            Self::Fig5a | Self::Fig5b => Scenario::Cavity,
            Self::Fig5c => Scenario::Budget,
        }
    }

    fn preset(self) -> Vec<(&'static str, Value)> {
        let f = Value::Float;
        let s = |v: &str| Value::String(v.to_string());
        let i = Value::Integer;
        let gaussian = |w: f64| vec![("beam.kind", s("gaussian")), ("beam.waist", f(w))];
        let sweep = |a: f64, b: f64, n: i64, scale: &str| {
            vec![
                ("sweep.start", f(a)),
                ("sweep.stop", f(b)),
                ("sweep.points", i(n)),
                ("sweep.scale", s(scale)),
            ]
        };
        let fig4_disk = vec![("disk.radius", f(25e-6)), ("disk.thickness", f(30e-9))];
        let fig5_disk = vec![("disk.thickness", f(30e-9)), ("disk.profile", s("apodized"))];
        match self {
            Self::Fig2a => [vec![("beam.kind", s("plane_wave"))], sweep(0.0, 5e11, 26, "linear")].concat(),
            Self::Fig2b => sweep(0.0, 5e6, 201, "linear"),
            Self::Fig3a => [gaussian(35e-6), sweep(0.1e6, 5e6, 25, "log")].concat(),
            Self::Fig3aInset => [vec![("beam.kind", s("plane_wave"))], sweep(1.5, 8.0, 14, "linear")].concat(),
            Self::Fig3b => sweep(0.1e6, 5e6, 200, "linear"),
            Self::Fig3c => [gaussian(35e-6), sweep(0.1e6, 5e6, 50, "linear")].concat(),
            Self::Fig4a => [fig4_disk, gaussian(15e-6), sweep(30e3, 300e3, 10, "linear")].concat(),
            Self::Fig4b => [fig4_disk, gaussian(15e-6)].concat(),
            Self::Fig5a => [fig5_disk, sweep(0.4, 2.0, 8, "log")].concat(),
            Self::Fig5b => fig5_disk,
            Self::Fig5c => [fig5_disk, sweep(5e-6, 14e-6, 10, "linear")].concat(),
        }
    }
}

/// Raw configuration text format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Toml,
    Json,
}

impl Format {
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("json") => Self::Json,
            _ => Self::Toml,
        }
    }
}

/// Sweep along the scenario axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub log: bool,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.start];
        }
        (0..n)
            .map(|i| {
                let (i, m) = (i as f64, (n - 1) as f64);
                if self.log {
                    self.start * (self.stop / self.start).powf(i / m)
                } else {
                    // weighted form keeps both endpoints and round grid values exact
                    (self.start * (m - i) + self.stop * i) / m
                }
            })
            .collect()
    }
}

/// Validated configuration with every default resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub figure: Option<Figure>,
    pub output: PathBuf,
    values: BTreeMap<String, Value>,
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut BTreeMap<String, Value>, errors: &mut Vec<ConfigError>) {
    for (k, v) in table {
        let name = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Table(t) => flatten(&name, t, out, errors),
            Value::Array(_) | Value::Datetime(_) => errors.push(ConfigError::new(name, "expected a scalar value")),
            other => {
                out.insert(name, other.clone());
            }
        }
    }
}

/// Parse configuration text into flat `section.key` entries.
pub fn parse_text(raw: &str, format: Format) -> Result<BTreeMap<String, Value>, Vec<ConfigError>> {
    let table: toml::Table = match format {
        Format::Toml => toml::from_str(raw).map_err(|e| vec![ConfigError::new("<file>", e.message().to_string())])?,
        Format::Json => serde_json::from_str(raw).map_err(|e| vec![ConfigError::new("<file>", e.to_string())])?,
    };
    let mut out = BTreeMap::new();
    let mut errors = Vec::new();
    flatten("", &table, &mut out, &mut errors);
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(errors)
    }
}

/// Parse `key=value`; the value is read as a TOML scalar, or as a bare string.
pub fn parse_override(raw: &str) -> Result<(String, Value), ConfigError> {
    let (key, value) = raw
        .split_once('=')
        .ok_or_else(|| ConfigError::new(raw, "expected key=value"))?;
    let key = key.trim().to_string();
    let value = value.trim();
    let parsed = toml::from_str::<toml::Table>(&format!("v = {value}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .filter(|v| !matches!(v, Value::Table(_) | Value::Array(_)))
        .unwrap_or_else(|| Value::String(value.to_string()));
    Ok((key, parsed))
}

fn as_number(v: &Value) -> Option<f64> {
    match v {
        Value::Float(x) => Some(*x),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

fn check_value(key: &schema::Key, v: &Value) -> Result<Value, String> {
    let number = |ok: &dyn Fn(f64) -> bool, what: &str| -> Result<Value, String> {
        match as_number(v) {
            Some(x) if x.is_finite() && ok(x) => Ok(Value::Float(x)),
            Some(x) => Err(format!("must be {what}, got {x}")),
            None => Err(format!("expected a number, got {v}")),
        }
    };
    match key.kind {
        Kind::Positive => number(&|x| x > 0.0, "positive"),
        Kind::NonNegative => number(&|x| x >= 0.0, "non-negative"),
        Kind::Real => number(&|_| true, "finite"),
        Kind::Open(lo, hi) => number(&|x| x > lo && x < hi, &format!("inside ({lo}, {hi})")),
        Kind::UpTo(lo, hi) => number(&|x| x > lo && x <= hi, &format!("inside ({lo}, {hi}]")),
        Kind::Count(min) => match v {
            Value::Integer(i) if *i >= min => Ok(v.clone()),
            Value::Integer(i) => Err(format!("must be at least {min}, got {i}")),
            _ => Err(format!("expected an integer, got {v}")),
        },
        Kind::Choice(options) => match v {
            Value::String(s) if options.contains(&s.as_str()) => Ok(v.clone()),
            Value::String(s) => {
                let close = options.iter().max_by(|a, b| strsim::jaro_winkler(s, a).total_cmp(&strsim::jaro_winkler(s, b)));
                Err(format!(
                    "unknown value \"{s}\", expected one of {}{}",
                    options.join("|"),
                    close.map(|c| format!(" (did you mean \"{c}\"?)")).unwrap_or_default()
                ))
            }
            _ => Err(format!("expected a string, got {v}")),
        },
        Kind::Text => match v {
            Value::String(_) => Ok(v.clone()),
            _ => Err(format!("expected a string, got {v}")),
        },
    }
}

/// Merge the layers and validate every key, collecting all errors.
///
/// `scenario` and `output` come from the command line and take precedence
/// over the corresponding keys in `file`.
pub fn resolve(
    file: BTreeMap<String, Value>,
    overrides: &[(String, Value)],
    scenario: Option<&str>,
    output: Option<&str>,
) -> Result<RunConfig, Vec<ConfigError>> {
    let mut errors = Vec::new();
    let mut user: BTreeMap<String, Value> = BTreeMap::new();
    for (k, v) in file.into_iter().chain(overrides.iter().cloned()) {
        let Some(key) = schema::lookup(&k) else {
            let hint = schema::suggest(&k).map(|s| format!(" (did you mean `{s}`?)")).unwrap_or_default();
            errors.push(ConfigError::new(&k, format!("unknown key{hint}")));
            continue;
        };
        match check_value(key, &v) {
            Ok(v) => {
                user.insert(k, v);
            }
            Err(msg) => errors.push(ConfigError::new(k, msg)),
        }
    }
    if let Some(s) = scenario {
        user.insert("scenario".into(), Value::String(s.into()));
    }
    if let Some(o) = output {
        user.insert("output".into(), Value::String(o.into()));
    }

    let figure = user.get("figure").and_then(Value::as_str).and_then(Figure::parse);
    let scenario = match user.get("scenario").and_then(Value::as_str) {
        Some(s) => Scenario::parse(s),
        None if figure.is_some() => Some(Scenario::Figure),
        None => {
            errors.push(ConfigError::new("scenario", "missing; pass it on the command line or set `scenario`"));
            None
        }
    };
    if scenario.is_none() && user.contains_key("scenario") && errors.iter().all(|e| e.key != "scenario") {
        errors.push(ConfigError::new("scenario", "unknown scenario"));
    }
    match (scenario, figure) {
        (Some(Scenario::Figure), None) if errors.iter().all(|e| e.key != "figure") => {
            errors.push(ConfigError::new("figure", "required by the figure scenario"))
        }
        (Some(s), Some(_)) if s != Scenario::Figure => {
            errors.push(ConfigError::new("figure", "only applies to the figure scenario"))
        }
        _ => {}
    }

    let mut values: BTreeMap<String, Value> = BTreeMap::new();
    for key in schema::KEYS {
        let v = match key.default {
            Fallback::Float(x) => Value::Float(x),
            Fallback::Int(i) => Value::Integer(i),
            Fallback::Str(s) => Value::String(s.into()),
            Fallback::Derived(_) => continue,
        };
        values.insert(key.name.into(), v);
    }
    let axis = figure.map(Figure::base).or(scenario).unwrap_or(Scenario::Figure);
    let (a, b, n, log) = axis.default_sweep();
    values.insert("sweep.start".into(), Value::Float(a));
    values.insert("sweep.stop".into(), Value::Float(b));
    values.insert("sweep.points".into(), Value::Integer(n));
    values.insert("sweep.scale".into(), Value::String(if log { "log" } else { "linear" }.into()));
    if let Some(fig) = figure {
        for (k, v) in fig.preset() {
            values.insert(k.into(), v);
        }
    }
    values.extend(user);

    let mut cfg = RunConfig {
        scenario: scenario.unwrap_or(Scenario::Figure),
        figure,
        output: PathBuf::from(values.get("output").and_then(Value::as_str).unwrap_or("out")),
        values,
    };
    if errors.is_empty() {
        cfg.cross_check(axis, &mut errors);
    }
    if errors.is_empty() {
        cfg.output = PathBuf::from(cfg.str("output"));
        Ok(cfg)
    } else {
        Err(errors)
    }
}

/// Validate configuration text on its own, as if run without command-line flags.
pub fn validate_config(raw: &str, format: Format) -> Result<RunConfig, Vec<ConfigError>> {
    resolve(parse_text(raw, format)?, &[], None, None)
}

impl RunConfig {
    fn cross_check(&self, axis: Scenario, errors: &mut Vec<ConfigError>) {
        let sweep = self.sweep();
        if sweep.points == 0 {
            errors.push(ConfigError::new("sweep.points", "empty sweep range"));
        }
        if sweep.start > sweep.stop {
            errors.push(ConfigError::new("sweep.start", "empty sweep range: start exceeds sweep.stop"));
        }
        if (sweep.log || axis.positive_axis()) && sweep.start <= 0.0 {
            errors.push(ConfigError::new("sweep.start", "must be positive on this axis"));
        }
        if matches!(axis, Scenario::ModesDisk | Scenario::Tether) && sweep.start < 0.0 {
            errors.push(ConfigError::new("sweep.start", "must be non-negative on this axis"));
        }
        if let Err(e) = self.material().validate() {
            errors.push(ConfigError::new("material", e.to_string()));
        }
        if let Some(b) = self.opt_usize("plate.basis_size") {
            if b > self.usize("plate.grid_points") {
                errors.push(ConfigError::new("plate.basis_size", "must not exceed plate.grid_points"));
            }
        }
        if self.f64("cavity.length") >= 2.0 * self.f64("cavity.mirror_curvature") {
            errors.push(ConfigError::new(
                "cavity.length",
                "must be below twice cavity.mirror_curvature for a stable cavity",
            ));
        }
    }

    fn get(&self, key: &str) -> Option<&Value> {
        debug_assert!(schema::lookup(key).is_some(), "{key} is not in the schema");
        self.values.get(key)
    }

    pub fn f64(&self, key: &str) -> f64 {
        self.opt_f64(key).unwrap_or_else(|| panic!("{key} has no default"))
    }

    pub fn opt_f64(&self, key: &str) -> Option<f64> {
        self.get(key).and_then(as_number)
    }

    pub fn usize(&self, key: &str) -> usize {
        self.opt_usize(key).unwrap_or_else(|| panic!("{key} has no default"))
    }

    pub fn opt_usize(&self, key: &str) -> Option<usize> {
        self.get(key).and_then(Value::as_integer).map(|i| i as usize)
    }

    pub fn str(&self, key: &str) -> &str {
        self.get(key).and_then(Value::as_str).unwrap_or_else(|| panic!("{key} has no default"))
    }

    /// Every resolved key, for the metadata sidecar.
    pub fn echo(&self) -> serde_json::Value {
        let map = self
            .values
            .iter()
            .map(|(k, v)| {
                let j = match v {
                    Value::Float(x) => serde_json::json!(x),
                    Value::Integer(i) => serde_json::json!(i),
                    Value::Boolean(b) => serde_json::json!(b),
                    other => serde_json::json!(other.as_str().unwrap_or_default()),
                };
                (k.clone(), j)
            })
            .collect();
        serde_json::Value::Object(map)
    }

    pub fn sweep(&self) -> Sweep {
        Sweep {
            start: self.f64("sweep.start"),
            stop: self.f64("sweep.stop"),
            points: self.usize("sweep.points"),
            log: self.str("sweep.scale") == "log",
        }
    }

    pub fn material(&self) -> MaterialParams {
        let mut m = MaterialParams::silicon_nitride();
        let fields: [(&str, &mut f64); 7] = [
            ("material.youngs_modulus", &mut m.youngs_modulus),
            ("material.poisson_ratio", &mut m.poisson_ratio),
            ("material.density", &mut m.density),
            ("material.dielectric_constant", &mut m.dielectric_constant),
            ("material.heat_capacity_vol", &mut m.heat_capacity_vol),
            ("material.thermal_conductivity", &mut m.thermal_conductivity),
            ("material.thermal_expansion_vol", &mut m.thermal_expansion_vol),
        ];
        for (key, slot) in fields {
            if let Some(v) = self.opt_f64(key) {
                *slot = v;
            }
        }
        m
    }

    pub fn disk_with_radius(&self, radius: f64) -> DiskGeometry {
        let d = self.f64("disk.thickness");
        match self.str("disk.profile") {
            "apodized" => DiskGeometry::apodized(radius, d),
            _ => DiskGeometry::uniform(radius, d),
        }
    }

    pub fn disk(&self) -> DiskGeometry {
        self.disk_with_radius(self.f64("disk.radius"))
    }

    pub fn optics(&self) -> OpticalParams {
        OpticalParams {
            wavelength: self.f64("optics.wavelength"),
        }
    }

    pub fn bath(&self) -> BathParams {
        BathParams {
            temperature: self.f64("bath.temperature"),
        }
    }

    /// Trap profile with peak intensity `i0`.
    pub fn beam(&self, i0: f64) -> IntensityProfile {
        match self.str("beam.kind") {
            "gaussian" => IntensityProfile::Gaussian {
                i0,
                waist: self.f64("beam.waist"),
            },
            _ => IntensityProfile::PlaneWave { i0 },
        }
    }

    pub fn cavity(&self) -> CavitySetup {
        CavitySetup {
            length: self.f64("cavity.length"),
            mirror: Mirror {
                radius_of_curvature: self.f64("cavity.mirror_curvature"),
                reflectance: self.f64("cavity.reflectance"),
                aperture: self.f64("cavity.mirror_aperture"),
            },
            membrane: None,
            wavelength: self.f64("optics.wavelength"),
            n_points: self.usize("cavity.n_points"),
            grid_aperture: self.opt_f64("cavity.grid_aperture"),
        }
    }
}
