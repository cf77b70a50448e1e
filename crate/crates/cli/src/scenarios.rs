//! Scenario runners. Each sweep point is solved independently on the rayon
//! pool and rows are assembled in sweep order.

use std::f64::consts::PI;

use optomech::cavity::{coherence_budget, solve_default};
use optomech::coupling::{coupling_ratio, pinning_profile, rim_to_center_ratio};
use optomech::params::intensity_for_trap_frequency;
use optomech::spring::{decoherence_ratio, effective_frequency_and_damping, required_input_power, SpringRegime};
use optomech::tether::{cm_mode, composed_energy_ratio, solve_tether_spectrum};
use optomech::thermo::{analyze, qf_product_limit};
use optomech::{
    CavityModeResult, DiskProblem, IntensityProfile, RadialGrid, Result, RigidTetherSystem, SpringConfig,
    TetherGeometry,
};
use rayon::prelude::*;

use crate::config::{Figure, RunConfig, Scenario};
use crate::table::{Column, ResultTable};

const TWO_PI: f64 = 2.0 * PI;

fn par_rows<F>(xs: &[f64], f: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64) -> Result<Vec<f64>> + Sync,
{
    xs.par_iter().map(|&x| f(x)).collect()
}

fn fill(table: &mut ResultTable, rows: Vec<Vec<f64>>) {
    for r in rows {
        table.push(r);
    }
}

fn problem(cfg: &RunConfig) -> Result<DiskProblem> {
    let disk = cfg.disk();
    let points = cfg.usize("plate.grid_points");
    let basis = cfg.opt_usize("plate.basis_size").unwrap_or(points / 3);
    let grid = RadialGrid::with_basis(disk.radius, points, basis)?;
    Ok(DiskProblem::new(disk, cfg.material(), cfg.optics()).with_grid(grid))
}

fn tether_system(cfg: &RunConfig, omega_opt: f64) -> Result<RigidTetherSystem> {
    let material = cfg.material();
    RigidTetherSystem::new(
        cfg.disk().mass(&material),
        TetherGeometry {
            length: cfg.f64("tether.length"),
            width: cfg.f64("tether.width"),
        },
        material,
        omega_opt,
    )
}

/// Normal-mode frequencies against trap intensity.
pub fn modes_disk(cfg: &RunConfig) -> Result<ResultTable> {
    let p = problem(cfg)?;
    let m_max = cfg.usize("modes.m_max");
    let count = cfg.usize("modes.count");
    let mut columns = vec![Column {
        name: "i0".into(),
        unit: "W/m^2".into(),
    }];
    for m in 0..=m_max {
        for k in 0..count {
            columns.push(Column {
                name: format!("f_m{m}_k{k}"),
                unit: "Hz".into(),
            });
        }
    }
    columns.push(Column {
        name: "energy_ratio_cm".into(),
        unit: "1".into(),
    });
    let mut table = ResultTable::with_columns(columns);
    let rows = par_rows(&cfg.sweep().values(), |i0| {
        let beam = cfg.beam(i0);
        let mut row = vec![i0];
        let mut ratio = f64::NAN;
        for m in 0..=m_max {
            let modes = p.modes(&beam, m, count)?;
            if m == 0 {
                ratio = modes[0].energy_ratio();
            }
            row.extend(modes.iter().map(|s| s.frequency_hz()));
        }
        row.push(ratio);
        Ok(row)
    })?;
    fill(&mut table, rows);
    Ok(table)
}

/// CM-mode thermoelastic limits against CM frequency.
pub fn thermo(cfg: &RunConfig) -> Result<ResultTable> {
    let p = problem(cfg)?;
    let bath = cfg.bath();
    let shape = cfg.beam(1.0);
    let mut table = ResultTable::new(&[
        ("f_cm", "Hz"),
        ("i0", "W/m^2"),
        ("energy_ratio", "1"),
        ("qf_direct", "Hz"),
        ("qf_closed", "Hz"),
        ("n_th", "1"),
    ]);
    let d = p.disk.thickness.max_thickness();
    let rows = par_rows(&cfg.sweep().values(), |f| {
        let (beam, cm) = p.cm_mode_at_frequency(&shape, TWO_PI * f)?;
        let ratio = cm.energy_ratio();
        let direct = analyze(&cm, &p.disk, &p.material, &bath)?;
        let closed = qf_product_limit(&p.material, d, &bath, ratio)?;
        Ok(vec![f, beam.peak(), ratio, direct.qf_product, closed, direct.n_osc_th])
    })?;
    fill(&mut table, rows);
    Ok(table)
}

/// Rigid membrane on a tether against the optical restoring frequency.
pub fn tether(cfg: &RunConfig) -> Result<ResultTable> {
    let n = cfg.usize("tether.modes");
    let omega_max = TWO_PI * cfg.f64("tether.max_frequency");
    let mut columns = vec![Column {
        name: "f_opt".into(),
        unit: "Hz".into(),
    }];
    for k in 1..=n {
        columns.push(Column {
            name: format!("f_{k}"),
            unit: "Hz".into(),
        });
    }
    columns.push(Column {
        name: "f_cm".into(),
        unit: "Hz".into(),
    });
    columns.push(Column {
        name: "energy_ratio_cm".into(),
        unit: "1".into(),
    });
    let mut table = ResultTable::with_columns(columns);
    let rows = par_rows(&cfg.sweep().values(), |f| {
        let sys = tether_system(cfg, TWO_PI * f)?;
        let modes = solve_tether_spectrum(&sys, omega_max)?;
        let mut row = vec![f];
        row.extend((0..n).map(|k| modes.get(k).map_or(f64::NAN, |m| m.frequency_hz())));
        match cm_mode(&modes) {
            Some(cm) => row.extend([cm.frequency_hz(), cm.energy_ratio()]),
            None => row.extend([f64::NAN, f64::NAN]),
        }
        Ok(row)
    })?;
    fill(&mut table, rows);
    Ok(table)
}

fn spring_template(cfg: &RunConfig) -> SpringConfig {
    SpringConfig {
        cavity_length: cfg.f64("spring.cavity_length"),
        finesse: cfg.f64("spring.finesse"),
        wavelength: cfg.f64("optics.wavelength"),
        detuning: 0.0,
        input_power: 0.0,
        effective_mass: cfg
            .opt_f64("spring.effective_mass")
            .unwrap_or_else(|| cfg.disk().mass(&cfg.material())),
        natural_omega: TWO_PI * cfg.f64("spring.natural_frequency"),
        coupling: None,
    }
}

/// Optical-spring response against detuning at fixed pump power.
pub fn spring(cfg: &RunConfig) -> Result<ResultTable> {
    let template = spring_template(cfg);
    let power = match cfg.opt_f64("spring.input_power") {
        Some(p) => p,
        None => {
            let target = TWO_PI * cfg.f64("spring.target_frequency");
            required_input_power(cfg.f64("spring.target_n_osc"), target, &template)?.input_power
        }
    };
    let mut table = ResultTable::new(&[
        ("detuning", "Hz"),
        ("f_eff", "Hz"),
        ("gamma_eff", "1/s"),
        ("gamma_d", "1/s"),
        ("ratio_exact", "1"),
        ("ratio_asymptote", "1"),
        ("n_osc", "1"),
        ("spring_dominant", "1"),
    ]);
    table.derived.insert("input_power_W".into(), power);
    table.derived.insert("kappa_Hz".into(), template.kappa() / TWO_PI);
    let rows = par_rows(&cfg.sweep().values(), |f| {
        let c = SpringConfig {
            detuning: TWO_PI * f,
            input_power: power,
            ..template
        };
        let r = effective_frequency_and_damping(&c)?;
        let d = decoherence_ratio(&c)?;
        let dominant = if r.regime == SpringRegime::Dominant { 1.0 } else { 0.0 };
        Ok(vec![f, r.omega_eff / TWO_PI, r.gamma_eff, r.gamma_d, d.exact, d.asymptote, d.n_osc(), dominant])
    })?;
    fill(&mut table, rows);
    Ok(table)
}

fn readout_waist(cfg: &RunConfig) -> f64 {
    cfg.opt_f64("coupling.readout_waist").unwrap_or_else(|| cfg.f64("beam.waist"))
}

/// Readout coupling of the trapped CM mode against CM frequency.
pub fn coupling(cfg: &RunConfig) -> Result<ResultTable> {
    let p = problem(cfg)?;
    let shape = cfg.beam(1.0);
    let readout = readout_waist(cfg);
    let mut table =
        ResultTable::new(&[("f_cm", "Hz"), ("i0", "W/m^2"), ("g_over_g0", "1"), ("rim_to_center", "1")]);
    let rows = par_rows(&cfg.sweep().values(), |f| {
        let (beam, cm) = p.cm_mode_at_frequency(&shape, TWO_PI * f)?;
        Ok(vec![
            f,
            beam.peak(),
            coupling_ratio(&cm, readout, &p.disk)?,
            rim_to_center_ratio(&cm),
        ])
    })?;
    fill(&mut table, rows);
    Ok(table)
}

fn cavity_point(cfg: &RunConfig, profile: &str, w0_over_a: f64) -> Result<CavityModeResult> {
    let setup = cfg.cavity();
    let a = setup.empty_waist() / w0_over_a;
    let d = cfg.f64("disk.thickness");
    let disk = match profile {
        "apodized" => optomech::DiskGeometry::apodized(a, d),
        _ => optomech::DiskGeometry::uniform(a, d),
    };
    solve_default(&setup.with_membrane(disk, cfg.material()))
}

/// Membrane-limited cavity mode against `w0 / a`.
pub fn cavity(cfg: &RunConfig) -> Result<ResultTable> {
    let w0 = cfg.cavity().empty_waist();
    let profile = cfg.str("disk.profile");
    let mut table = ResultTable::new(&[
        ("w0_over_a", "1"),
        ("a", "m"),
        ("finesse", "1"),
        ("round_trip_loss", "1"),
        ("kappa", "Hz"),
        ("waist", "m"),
        ("degenerate", "1"),
    ]);
    table.derived.insert("empty_waist_m".into(), w0);
    let rows = par_rows(&cfg.sweep().values(), |x| {
        let r = cavity_point(cfg, profile, x)?;
        Ok(vec![
            x,
            w0 / x,
            r.finesse,
            r.round_trip_loss,
            r.kappa / TWO_PI,
            r.waist(),
            if r.degenerate { 1.0 } else { 0.0 },
        ])
    })?;
    fill(&mut table, rows);
    Ok(table)
}

/// Thermoelastic, recoil and total coherent oscillations against disk radius.
pub fn budget(cfg: &RunConfig) -> Result<ResultTable> {
    let bath = cfg.bath();
    let omega_m = TWO_PI * cfg.f64("budget.cm_frequency");
    let mut table = ResultTable::new(&[
        ("a", "m"),
        ("finesse", "1"),
        ("kappa", "Hz"),
        ("waist", "m"),
        ("mode_volume", "m^3"),
        ("power", "W"),
        ("n_th", "1"),
        ("n_sc", "1"),
        ("n_tot", "1"),
        ("scaling_estimate", "1"),
    ]);
    let rows = par_rows(&cfg.sweep().values(), |a| {
        let setup = cfg.cavity().with_membrane(cfg.disk_with_radius(a), cfg.material());
        let b = coherence_budget(&setup, &bath, omega_m)?;
        Ok(vec![
            a,
            b.finesse,
            b.kappa / TWO_PI,
            b.waist,
            b.mode_volume.volume,
            b.power,
            b.n_th,
            b.n_sc,
            b.n_tot,
            b.scaling_estimate,
        ])
    })?;
    fill(&mut table, rows);
    Ok(table)
}

/// Free-disk, tether and composed CM energy ratios against CM frequency.
fn composed(cfg: &RunConfig) -> Result<ResultTable> {
    let p = problem(cfg)?;
    let shape = cfg.beam(1.0);
    let omega_max = TWO_PI * cfg.f64("tether.max_frequency");
    let mut table = ResultTable::new(&[
        ("f_cm", "Hz"),
        ("energy_ratio_disk", "1"),
        ("energy_ratio_tether", "1"),
        ("energy_ratio_composed", "1"),
    ]);
    let rows = par_rows(&cfg.sweep().values(), |f| {
        let (_, cm) = p.cm_mode_at_frequency(&shape, TWO_PI * f)?;
        let sys = tether_system(cfg, TWO_PI * f)?;
        let modes = solve_tether_spectrum(&sys, omega_max.max(4.0 * TWO_PI * f))?;
        let tether = cm_mode(&modes).map_or(f64::NAN, |m| m.energy_ratio());
        let disk = cm.energy_ratio();
        Ok(vec![f, disk, tether, composed_energy_ratio(disk, tether)])
    })?;
    fill(&mut table, rows);
    Ok(table)
}

/// CM energy ratio against `w / a` at the intensity giving a 1 MHz plane-wave trap.
fn waist_ratio(cfg: &RunConfig) -> Result<ResultTable> {
    let p = problem(cfg)?;
    let i0 = intensity_for_trap_frequency(&p.material, &p.optics, TWO_PI * 1e6);
    let a = p.disk.radius;
    let mut table = ResultTable::new(&[("w_over_a", "1"), ("f_cm", "Hz"), ("energy_ratio", "1")]);
    let rows = par_rows(&cfg.sweep().values(), |x| {
        let cm = p.cm_mode(&IntensityProfile::Gaussian { i0, waist: x * a })?;
        Ok(vec![x, cm.frequency_hz(), cm.energy_ratio()])
    })?;
    fill(&mut table, rows);
    Ok(table)
}

/// Displacement profile of the CM mode at the configured frequency.
fn pinning(cfg: &RunConfig) -> Result<ResultTable> {
    let p = problem(cfg)?;
    let (_, cm) = p.cm_mode_at_frequency(&cfg.beam(1.0), TWO_PI * cfg.f64("coupling.profile_frequency"))?;
    let mut table = ResultTable::new(&[("r", "m"), ("displacement", "1")]);
    for (r, f) in pinning_profile(&cm, cfg.usize("coupling.profile_points")) {
        table.push(vec![r, f]);
    }
    Ok(table)
}

/// Finesse of flat and apodized membranes against `w0 / a`.
fn finesse_comparison(cfg: &RunConfig) -> Result<ResultTable> {
    let w0 = cfg.cavity().empty_waist();
    let mut table = ResultTable::new(&[("w0_over_a", "1"), ("a", "m"), ("finesse_flat", "1"), ("finesse_apodized", "1")]);
    let xs = cfg.sweep().values();
    let jobs: Vec<(f64, &str)> = xs.iter().flat_map(|&x| [(x, "uniform"), (x, "apodized")]).collect();
    let finesse: Vec<f64> = jobs
        .par_iter()
        .map(|&(x, profile)| cavity_point(cfg, profile, x).map(|r| r.finesse))
        .collect::<Result<_>>()?;
    for (i, &x) in xs.iter().enumerate() {
        table.push(vec![x, w0 / x, finesse[2 * i], finesse[2 * i + 1]]);
    }
    table.derived.insert("empty_waist_m".into(), w0);
    Ok(table)
}

/// Membrane-plane intensity for the empty cavity and apodized disks with
/// `a = w0` and `a = 2.5 w0`, per unit circulating power.
fn intensity_profiles(cfg: &RunConfig) -> Result<ResultTable> {
    let setup = cfg.cavity();
    let w0 = setup.empty_waist();
    let cases: [Option<f64>; 3] = [None, Some(1.0), Some(1.0 / 2.5)];
    let fields: Vec<CavityModeResult> = cases
        .par_iter()
        .map(|case| match case {
            None => solve_default(&setup),
            Some(x) => cavity_point(cfg, "apodized", *x),
        })
        .collect::<Result<_>>()?;
    let mut table = ResultTable::new(&[
        ("r", "m"),
        ("intensity_empty", "1/m^2"),
        ("intensity_a_w0", "1/m^2"),
        ("intensity_a_2p5w0", "1/m^2"),
    ]);
    let radii = setup.grid()?.radii();
    let intensities: Vec<Vec<f64>> = fields.iter().map(|r| r.field.intensity()).collect();
    for (i, &r) in radii.iter().enumerate().take_while(|(_, r)| **r <= 4.0 * w0) {
        table.push(vec![r, intensities[0][i], intensities[1][i], intensities[2][i]]);
    }
    table.derived.insert("empty_waist_m".into(), w0);
    Ok(table)
}

fn figure(cfg: &RunConfig, fig: Figure) -> Result<ResultTable> {
    let table = match fig {
        Figure::Fig2a => modes_disk(cfg)?.without("energy_ratio_cm"),
        Figure::Fig2b => tether(cfg)?.without("energy_ratio_cm"),
        Figure::Fig3a => thermo(cfg)?.select(&["f_cm", "energy_ratio"]),
        Figure::Fig3aInset => waist_ratio(cfg)?,
        Figure::Fig3b => tether(cfg)?.select(&["f_cm", "energy_ratio_cm"]),
        Figure::Fig3c => composed(cfg)?,
        Figure::Fig4a => coupling(cfg)?.select(&["f_cm", "g_over_g0"]),
        Figure::Fig4b => pinning(cfg)?,
        Figure::Fig5a => finesse_comparison(cfg)?,
        Figure::Fig5b => intensity_profiles(cfg)?,
        Figure::Fig5c => budget(cfg)?.select(&["a", "n_th", "n_sc", "n_tot"]),
    };
    Ok(table)
}

/// Run the configured scenario. Returns the table and the CSV file stem.
pub fn run_scenario(cfg: &RunConfig) -> Result<(ResultTable, String)> {
    let table = match cfg.scenario {
        Scenario::ModesDisk => modes_disk(cfg)?,
        Scenario::Thermo => thermo(cfg)?,
        Scenario::Tether => tether(cfg)?,
        Scenario::Spring => spring(cfg)?,
        Scenario::Coupling => coupling(cfg)?,
        Scenario::Cavity => cavity(cfg)?,
        Scenario::Budget => budget(cfg)?,
        Scenario::Figure => {
            let fig = cfg.figure.expect("validated figure scenario names a figure");
            return Ok((figure(cfg, fig)?, fig.name().to_string()));
        }
    };
    Ok((table, cfg.scenario.name().to_string()))
}
