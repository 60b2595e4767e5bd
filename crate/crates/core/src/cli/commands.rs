//! One function per subcommand, each turning a config into a [`Table`].

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use crate::dynamics::{
    evolve_stroboscopic, power_spectrum, prepare_state, scan_subharmonic, Normalization, ScanRequest,
    DEFAULT_PERIODS,
};
use crate::eigen::{diagonalize_with, EigenMethod};
use crate::floquet::{DriveParams, FloquetOperator};
use crate::lattice::Lattice;
use crate::majorana::{corner_spectral_functions, SpectralConfig};
use crate::spacing::spacing_stats;
use crate::transfer::{classify_phase, transfer_matrix};

use super::config::{ExperimentConfig, ScanRange, ScanVariable, Units};
use super::output::Table;
use super::CliError;

pub const DEFAULT_CHI: usize = 16;
pub const DEFAULT_WINDOW: f64 = 0.01;
pub const DEFAULT_GRID: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Spectrum,
    SpacingTable,
    Dynamics,
    Power,
    Scan,
    CornerSpectral,
    Phase1d,
}

impl Task {
    pub const ALL: [Task; 7] = [
        Task::Spectrum,
        Task::SpacingTable,
        Task::Dynamics,
        Task::Power,
        Task::Scan,
        Task::CornerSpectral,
        Task::Phase1d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Task::Spectrum => "spectrum",
            Task::SpacingTable => "spacing-table",
            Task::Dynamics => "dynamics",
            Task::Power => "power",
            Task::Scan => "scan",
            Task::CornerSpectral => "corner-spectral",
            Task::Phase1d => "phase1d",
        }
    }

    pub fn from_name(name: &str) -> Option<Task> {
        Task::ALL.into_iter().find(|t| t.name() == name)
    }
}

/// A finished table plus, for commands that report per-row failures, the
/// first failure encountered.
pub struct Outcome {
    pub table: Table,
    pub failure: Option<CliError>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Outcome { table, failure: None }
    }
}

pub fn execute(task: Task, config: &ExperimentConfig) -> Result<Outcome, CliError> {
    match task {
        Task::Spectrum => spectrum(config).map(Into::into),
        Task::SpacingTable => spacing_table(config),
        Task::Dynamics => dynamics(config).map(Into::into),
        Task::Power => power(config).map(Into::into),
        Task::Scan => scan(config).map(Into::into),
        Task::CornerSpectral => corner_spectral(config).map(Into::into),
        Task::Phase1d => phase1d(config).map(Into::into),
    }
}

fn drive_note(params: &DriveParams) -> String {
    format!(
        "drive (rad per unit time): j_x = {:?}, j_y = {:?}, h = {:?}, period = {:?}",
        params.j_x, params.j_y, params.h, params.period
    )
}

fn spectrum(config: &ExperimentConfig) -> Result<Table, CliError> {
    let lattice = config.lattice.build()?;
    let params = config.drive.resolve()?;
    let method = config.task.method.unwrap_or_default();
    let u = FloquetOperator::build(&lattice, &params, method == EigenMethod::Schur)?;
    let spec = diagonalize_with(&u, method)?;
    let mut t = Table::new(Task::Spectrum.name(), &["index", "quasienergy", "residual"]);
    t.note(format!("lattice: {}", lattice.label()));
    t.note(drive_note(&params));
    t.note("units: quasienergy in rad per unit time, folded into (-pi/T, pi/T]; residual = |U x - lambda x|");
    for (n, (&e, &r)) in spec.quasienergies().iter().zip(spec.residuals()).enumerate() {
        t.push(vec![n.into(), e.into(), r.into()]);
    }
    Ok(t)
}

fn spacing_table(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let params = config.drive.resolve()?;
    let method = config.task.method.unwrap_or_default();
    let mut t = Table::new(Task::SpacingTable.name(), &["size", "min_dev", "max_dev", "status"]);
    t.note(drive_note(&params));
    t.note("units: deviations in rad per unit time; min/max over levels of | |e_n - e_m| - pi/T |, m the level nearest e_n + pi/T");
    let mut failure = None;
    for (label, lattice) in config.task.lattices(&config.lattice)? {
        let result = lattice.and_then(|l| {
            let u = FloquetOperator::build(&l, &params, method == EigenMethod::Schur)?;
            let spec = diagonalize_with(&u, method)?;
            Ok(spacing_stats(&spec)?)
        });
        match result {
            Ok(s) => t.push(vec![label.into(), s.min_dev.into(), s.max_dev.into(), "ok".into()]),
            Err(e) => {
                t.push(vec![label.into(), f64::NAN.into(), f64::NAN.into(), format!("error: {e}").into()]);
                failure.get_or_insert(e);
            }
        }
    }
    Ok(Outcome { table: t, failure })
}

struct Trace {
    lattice: Lattice,
    params: DriveParams,
    normalization: Normalization,
    theta: f64,
    trace: crate::dynamics::MagnetizationTrace,
}

fn run_trace(config: &ExperimentConfig, default_norm: Normalization) -> Result<Trace, CliError> {
    let lattice = config.lattice.build()?;
    let params = config.drive.resolve()?;
    let periods = config.task.periods.unwrap_or(DEFAULT_PERIODS);
    let theta = config.task.theta_meas.unwrap_or(0.0);
    let normalization = config.task.normalization.unwrap_or(default_norm);
    let u = FloquetOperator::build(&lattice, &params, false)?;
    let v0 = prepare_state(&lattice, &config.task.init_state()?)?;
    let mut trace = evolve_stroboscopic(&u, &v0, periods, theta)?;
    if normalization == Normalization::PerSite {
        trace = trace.per_site();
    }
    Ok(Trace { lattice, params, normalization, theta, trace })
}

fn trace_notes(t: &mut Table, r: &Trace, config: &ExperimentConfig) {
    t.note(format!("lattice: {}", r.lattice.label()));
    t.note(drive_note(&r.params));
    t.note(format!(
        "initial state: {}; measurement axis: cos({:?}) z + sin({:?}) y; normalization: {}",
        config.task.init.as_deref().unwrap_or("up"),
        r.theta,
        r.theta,
        match r.normalization {
            Normalization::Total => "total",
            Normalization::PerSite => "per-site",
        }
    ));
}

fn dynamics(config: &ExperimentConfig) -> Result<Table, CliError> {
    let r = run_trace(config, Normalization::Total)?;
    let mut t = Table::new(Task::Dynamics.name(), &["n", "magnetization"]);
    trace_notes(&mut t, &r, config);
    t.note("units: n counts drive periods (t = nT)");
    for (n, &m) in r.trace.values.iter().enumerate() {
        t.push(vec![n.into(), m.into()]);
    }
    Ok(t)
}

fn power(config: &ExperimentConfig) -> Result<Table, CliError> {
    let r = run_trace(config, Normalization::Total)?;
    let ps = power_spectrum(&r.trace)?;
    let mut t = Table::new(Task::Power.name(), &["k", "omega", "magnitude"]);
    trace_notes(&mut t, &r, config);
    t.note("units: omega_k = 2 pi k / (M T) in rad per unit time; magnitude = |F_k|, F_k = (1/M) sum_{n=1..M} m_n exp(-2 pi i k n / M)");
    t.note(format!("subharmonic |F_M/2| = {:?}; dominance ratio = {:?}", ps.subharmonic(), ps.dominance_ratio()));
    for (k, m) in ps.magnitudes().into_iter().enumerate() {
        t.push(vec![k.into(), ps.frequency(k).into(), m.into()]);
    }
    Ok(t)
}

fn scan_range(config: &ExperimentConfig) -> Result<(ScanRange, Units), CliError> {
    let range = config
        .task
        .scan
        .ok_or_else(|| CliError::Config("task.scan = { start, stop, steps } is required".into()))?;
    Ok((range, range.units.unwrap_or(config.drive.units)))
}

fn scan(config: &ExperimentConfig) -> Result<Table, CliError> {
    let params = config.drive.resolve()?;
    let (range, units) = scan_range(config)?;
    if range.variable != ScanVariable::H {
        return Err(CliError::Config(format!("scan only varies h, got variable = {}", range.variable)));
    }
    let lattices = config
        .task
        .lattices(&config.lattice)?
        .into_iter()
        .map(|(_, l)| l)
        .collect::<Result<Vec<_>, _>>()?;
    let values = range.values();
    let raw: Vec<f64> = values.iter().map(|&v| units.to_raw(v, params.period)).collect();
    let init = config.task.init_state()?;
    let normalization = config.task.normalization.unwrap_or(Normalization::PerSite);
    let theta = config.task.theta_meas.unwrap_or(0.0);
    let points = scan_subharmonic(&ScanRequest {
        lattices: &lattices,
        template: params,
        h_values: &raw,
        init: &init,
        periods: config.task.periods.unwrap_or(DEFAULT_PERIODS),
        theta,
        normalization,
    })?;
    let mut t = Table::new(Task::Scan.name(), &["lattice", "h", "peak"]);
    t.note(drive_note(&params));
    t.note(format!(
        "units: h in {}; peak = |F_M/2| of the {} magnetization",
        units.describe(),
        match normalization {
            Normalization::Total => "total",
            Normalization::PerSite => "per-site",
        }
    ));
    for (p, &v) in points.iter().zip(values.iter().cycle()) {
        t.push(vec![p.lattice.clone().into(), v.into(), p.peak.into()]);
    }
    Ok(t)
}

fn corner_spectral(config: &ExperimentConfig) -> Result<Table, CliError> {
    let lattice = config.lattice.build()?;
    let params = config.drive.resolve()?;
    let (range, units) = scan_range(config)?;
    let sc = SpectralConfig {
        chi: config.task.chi.unwrap_or(DEFAULT_CHI),
        window: config.task.window.unwrap_or(DEFAULT_WINDOW),
    };
    let method = config.task.method.unwrap_or_default();
    let values = range.values();
    let rows = values
        .par_iter()
        .map(|&v| {
            let raw = units.to_raw(v, params.period);
            let p = match range.variable {
                ScanVariable::H => params.with_h(raw),
                ScanVariable::JX => DriveParams { j_x: raw, ..params },
                ScanVariable::JY => params.with_j_y(raw),
            };
            let u = FloquetOperator::build(&lattice, &p, method == EigenMethod::Schur)?;
            let spec = diagonalize_with(&u, method)?;
            Ok(corner_spectral_functions(&spec, &lattice, &sc)?)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut t = Table::new(Task::CornerSpectral.name(), &[&range.variable.to_string(), "s0_1", "s0_2", "spi_1", "spi_2"]);
    t.note(format!("lattice: {}", lattice.label()));
    t.note(drive_note(&params));
    t.note(format!(
        "units: {} in {}; chi = {}, window = {:?} rad per unit time; modes gamma_A(1,1) and gamma_B(n_x,n_y)",
        range.variable,
        units.describe(),
        sc.chi,
        sc.window
    ));
    for (&v, s) in values.iter().zip(&rows) {
        t.push(vec![v.into(), s.s0_1.into(), s.s0_2.into(), s.spi_1.into(), s.spi_2.into()]);
    }
    Ok(t)
}

fn phase1d(config: &ExperimentConfig) -> Result<Table, CliError> {
    let n = config.task.grid.unwrap_or(DEFAULT_GRID);
    let mut t = Table::new(Task::Phase1d.name(), &["h", "J", "label", "E_minus", "E_plus"]);
    t.note("units: h and J are kick angles in radians (T = 2 convention), cell centres of an n x n grid over (0, pi/2)^2");
    t.note("E_minus, E_plus: transfer-matrix eigenvalues; |E_minus| < 1 means a normalizable Majorana pi mode");
    let axis: Vec<f64> = (0..n).map(|k| (k as f64 + 0.5) / n as f64 * FRAC_PI_2).collect();
    for &h in &axis {
        for &j in &axis {
            let label = classify_phase(h, j)?;
            let (em, ep) = match transfer_matrix(h, j) {
                Ok(tm) => (tm.e_minus, tm.e_plus),
                Err(_) => (f64::NAN, f64::NAN),
            };
            t.push(vec![h.into(), j.into(), label.to_string().into(), em.into(), ep.into()]);
        }
    }
    Ok(t)
}
