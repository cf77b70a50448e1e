//! Every accepted configuration key with its type, default and unit.

use std::fmt::Write;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    /// Finite and strictly positive.
    Positive,
    /// Finite and non-negative.
    NonNegative,
    /// Finite, any sign.
    Real,
    /// Strictly inside `(lo, hi)`.
    Open(f64, f64),
    /// In `(lo, hi]`.
    UpTo(f64, f64),
    /// Integer no smaller than the bound.
    Count(i64),
    Choice(&'static [&'static str]),
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Fallback {
    Float(f64),
    Int(i64),
    Str(&'static str),
    /// Optional key; the scenario derives a value when it is absent.
    Derived(&'static str),
}

#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    pub default: Fallback,
    pub unit: &'static str,
    pub help: &'static str,
}

pub const SCENARIOS: &[&str] = &["modes-disk", "thermo", "tether", "spring", "coupling", "cavity", "budget", "figure"];

pub const FIGURES: &[&str] = &[
    "fig2a",
    "fig2b",
    "fig3a",
    "fig3a-inset",
    "fig3b",
    "fig3c",
    "fig4a",
    "fig4b",
    "fig5a",
    "fig5b",
    "fig5c",
];

const fn key(name: &'static str, kind: Kind, default: Fallback, unit: &'static str, help: &'static str) -> Key {
    Key {
        name,
        kind,
        default,
        unit,
        help,
    }
}

use Fallback::{Derived, Float, Int, Str};
use Kind::{Choice, Count, NonNegative, Open, Positive, Real, Text, UpTo};

pub const KEYS: &[Key] = &[
    key("scenario", Choice(SCENARIOS), Derived("command line"), "", "scenario to run"),
    key("figure", Choice(FIGURES), Derived("none"), "", "figure preset, figure scenario only"),
    key("output", Text, Str("out"), "", "output directory"),
    key("disk.radius", Positive, Float(10e-6), "m", "membrane radius"),
    key("disk.thickness", Positive, Float(50e-9), "m", "thickness, peak thickness when apodized"),
    key("disk.profile", Choice(&["uniform", "apodized"]), Str("uniform"), "", "thickness profile"),
    key("material.preset", Choice(&["silicon_nitride"]), Str("silicon_nitride"), "", "base material"),
    key("material.youngs_modulus", Positive, Derived("preset"), "Pa", "Young's modulus"),
    key("material.poisson_ratio", Open(0.0, 0.5), Derived("preset"), "1", "Poisson ratio"),
    key("material.density", Positive, Derived("preset"), "kg/m^3", "mass density"),
    key("material.dielectric_constant", Open(1.0, f64::INFINITY), Derived("preset"), "1", "relative permittivity"),
    key("material.heat_capacity_vol", Positive, Derived("preset"), "J/(m^3 K)", "volumetric heat capacity"),
    key("material.thermal_conductivity", Positive, Derived("preset"), "W/(m K)", "thermal conductivity"),
    key("material.thermal_expansion_vol", NonNegative, Derived("preset"), "1/K", "volumetric expansion coefficient"),
    key("optics.wavelength", Positive, Float(1e-6), "m", "trapping and cavity wavelength"),
    key("beam.kind", Choice(&["plane_wave", "gaussian"]), Str("gaussian"), "", "transverse trap profile"),
    key("beam.waist", Positive, Float(35e-6), "m", "Gaussian trap waist"),
    key("bath.temperature", Positive, Float(300.0), "K", "bath temperature"),
    key("plate.grid_points", Count(8), Int(96), "", "radial quadrature nodes"),
    key("plate.basis_size", Count(2), Derived("grid_points / 3"), "", "radial trial functions"),
    key("modes.m_max", Count(0), Int(3), "", "largest number of nodal diameters reported"),
    key("modes.count", Count(1), Int(4), "", "modes reported per nodal-diameter family"),
    key("tether.length", Positive, Float(50e-6), "m", "tether length"),
    key("tether.width", Positive, Float(50e-9), "m", "square tether cross-section side"),
    key("tether.modes", Count(1), Int(6), "", "lowest roots reported"),
    key("tether.max_frequency", Positive, Float(20e6), "Hz", "root search ceiling"),
    key("spring.cavity_length", Positive, Float(0.01), "m", "cavity length"),
    key("spring.finesse", Positive, Float(1e5), "1", "cavity finesse"),
    key("spring.natural_frequency", Positive, Float(1e3), "Hz", "bare mechanical frequency"),
    key("spring.effective_mass", Positive, Derived("disk mass"), "kg", "oscillator mass"),
    key("spring.input_power", Positive, Derived("target"), "W", "pump power; derived from the targets when absent"),
    key("spring.target_frequency", Positive, Float(1e6), "Hz", "stiffened frequency used to derive the power"),
    key("spring.target_n_osc", Positive, Float(1e3), "1", "coherent oscillations used to derive the power"),
    key("coupling.readout_waist", Positive, Derived("beam.waist"), "m", "readout beam waist"),
    key("coupling.profile_frequency", Positive, Float(300e3), "Hz", "CM frequency of the displacement profile"),
    key("coupling.profile_points", Count(2), Int(101), "", "radial samples of the displacement profile"),
    key("cavity.length", Positive, Float(1.99e-2), "m", "mirror separation"),
    key("cavity.mirror_curvature", Positive, Float(1e-2), "m", "mirror radius of curvature"),
    key("cavity.mirror_aperture", Positive, Float(0.95e-3), "m", "mirror radius"),
    key("cavity.reflectance", UpTo(0.0, 1.0), Float(1.0), "1", "mirror power reflectance"),
    key("cavity.n_points", Count(16), Int(1024), "", "Hankel grid size"),
    key("cavity.grid_aperture", Positive, Derived("imaged mirror"), "m", "membrane-plane grid radius"),
    key("budget.cm_frequency", Positive, Float(0.5e6), "Hz", "CM frequency fixed by the circulating power"),
    key("sweep.start", Real, Derived("scenario"), "", "first sweep value, in the scenario's axis unit"),
    key("sweep.stop", Real, Derived("scenario"), "", "last sweep value"),
    key("sweep.points", Count(0), Derived("scenario"), "", "number of sweep points"),
    key("sweep.scale", Choice(&["linear", "log"]), Derived("scenario"), "", "point spacing"),
];

pub fn lookup(name: &str) -> Option<&'static Key> {
    KEYS.iter().find(|k| k.name == name)
}

/// Closest known key, if any is reasonably close.
pub fn suggest(name: &str) -> Option<&'static str> {
    let leaf = name.rsplit('.').next().unwrap_or(name);
    KEYS.iter()
        .map(|k| {
            let whole = strsim::jaro_winkler(name, k.name);
            let tail = strsim::jaro_winkler(leaf, k.name.rsplit('.').next().unwrap_or(k.name));
            (whole.max(tail), k.name)
        })
        .filter(|(score, _)| *score > 0.8)
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, n)| n)
}

/// Key reference appended to `--help`.
pub fn help_table() -> String {
    let mut out = String::from("Configuration keys (TOML or JSON file, or --set key=value):\n");
    for k in KEYS {
        let default = match k.default {
            Float(v) => format!("{v:e}"),
            Int(v) => v.to_string(),
            Str(s) => format!("\"{s}\""),
            Derived(from) => format!("<{from}>"),
        };
        let unit = if k.unit.is_empty() { String::new() } else { format!(" [{}]", k.unit) };
        let choices = match k.kind {
            Choice(c) => format!(" one of {}", c.join("|")),
            _ => String::new(),
        };
        let _ = writeln!(out, "  {:<32} {:<18} {}{unit}{choices}", k.name, default, k.help);
    }
    out.push_str(
        "\nSweep axes: modes-disk intensity [W/m^2], thermo and coupling CM frequency [Hz],\n\
         tether optical frequency [Hz], spring detuning [Hz], cavity w0/a [1], budget disk radius [m].\n",
    );
    out
}
