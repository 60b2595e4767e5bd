//! Experiment configuration: a TOML document with `[lattice]`, `[drive]`,
//! `[task]` and `[output]` tables.
//!
//! Drive quantities are either bare numbers, interpreted in `drive.units`, or
//! inline tables `{ value = 0.85, units = "pi_over_t" }`. Conversion to raw
//! radians per unit time happens once, in [`DriveConfig::resolve`].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{InitialState, Normalization};
use crate::eigen::EigenMethod;
use crate::floquet::DriveParams;
use crate::lattice::{Boundary, Lattice};

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Units {
    /// Radians per unit time.
    #[default]
    Raw,
    /// Multiples of `π/T`.
    PiOverT,
    /// Multiples of `1/T`.
    InversePeriod,
}

impl Units {
    pub fn to_raw(self, value: f64, period: f64) -> f64 {
        match self {
            Units::Raw => value,
            Units::PiOverT => value * PI / period,
            Units::InversePeriod => value / period,
        }
    }

    pub fn from_raw(self, raw: f64, period: f64) -> f64 {
        match self {
            Units::Raw => raw,
            Units::PiOverT => raw * period / PI,
            Units::InversePeriod => raw * period,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Units::Raw => "rad per unit time",
            Units::PiOverT => "multiples of pi/T",
            Units::InversePeriod => "multiples of 1/T",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Bare(f64),
    Tagged { value: f64, units: Units },
}

impl Default for Quantity {
    fn default() -> Self {
        Quantity::Bare(0.0)
    }
}

impl Quantity {
    pub fn to_raw(self, default_units: Units, period: f64) -> f64 {
        match self {
            Quantity::Bare(v) => default_units.to_raw(v, period),
            Quantity::Tagged { value, units } => units.to_raw(value, period),
        }
    }

    pub fn units(self, default_units: Units) -> Units {
        match self {
            Quantity::Bare(_) => default_units,
            Quantity::Tagged { units, .. } => units,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LatticeConfig {
    pub n_x: usize,
    pub n_y: usize,
    pub bc_x: Boundary,
    pub bc_y: Boundary,
    pub dedup: bool,
}

impl Default for LatticeConfig {
    fn default() -> Self {
        LatticeConfig { n_x: 1, n_y: 4, bc_x: Boundary::Open, bc_y: Boundary::Open, dedup: true }
    }
}

impl LatticeConfig {
    pub fn build(&self) -> Result<Lattice, CliError> {
        self.build_sized(self.n_x, self.n_y)
    }

    /// Lattice of another size with this block's boundary settings.
    pub fn build_sized(&self, n_x: usize, n_y: usize) -> Result<Lattice, CliError> {
        Ok(Lattice::new(n_x, n_y, self.bc_x, self.bc_y, self.dedup)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DriveConfig {
    pub period: f64,
    /// Units of bare numbers in this block and of scan ranges.
    pub units: Units,
    pub j_x: Quantity,
    pub j_y: Quantity,
    pub h: Quantity,
}

impl Default for DriveConfig {
    fn default() -> Self {
        DriveConfig {
            period: 2.0,
            units: Units::Raw,
            j_x: Quantity::default(),
            j_y: Quantity::default(),
            h: Quantity::default(),
        }
    }
}

impl DriveConfig {
    pub fn resolve(&self) -> Result<DriveParams, CliError> {
        let t = self.period;
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Config(format!("drive.period must be finite and positive, got {t}")));
        }
        Ok(DriveParams::new(
            self.j_x.to_raw(self.units, t),
            self.j_y.to_raw(self.units, t),
            self.h.to_raw(self.units, t),
            t,
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ScanVariable {
    #[default]
    H,
    JX,
    JY,
}

impl fmt::Display for ScanVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanVariable::H => "h",
            ScanVariable::JX => "j_x",
            ScanVariable::JY => "j_y",
        })
    }
}

/// Inclusive, evenly spaced range of `steps` values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanRange {
    #[serde(default)]
    pub variable: ScanVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    /// Defaults to `drive.units`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<Units>,
}

impl ScanRange {
    pub fn values(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n)
                .map(|k| self.start + (self.stop - self.start) * k as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TaskConfig {
    /// Number of drive periods `M`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub periods: Option<usize>,
    /// Initial state: `up`, `down`, `second-flipped`, `rotated`, `uniform:<angle>` or a `u`/`d` pattern.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub init: Option<String>,
    /// Measurement axis angle in the z–y plane.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_meas: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalization: Option<Normalization>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<EigenMethod>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<f64>,
    /// Lattice sizes such as `"4x2"`; boundaries come from `[lattice]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanRange>,
    /// Points per axis of the phase raster.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
}

impl TaskConfig {
    pub fn init_state(&self) -> Result<InitialState, CliError> {
        let spec = self.init.as_deref().unwrap_or("up");
        Ok(spec.parse::<InitialState>()?)
    }

    /// `sizes` resolved against the lattice block; the block's own size if absent.
    pub fn lattices(&self, block: &LatticeConfig) -> Result<Vec<(String, Result<Lattice, CliError>)>, CliError> {
        match &self.sizes {
            None => Ok(vec![(format!("{}x{}", block.n_x, block.n_y), block.build())]),
            Some(list) => list
                .iter()
                .map(|s| {
                    let (nx, ny) = parse_size(s)?;
                    Ok((s.clone(), block.build_sized(nx, ny)))
                })
                .collect(),
        }
    }
}

/// Parses `"<n_x>x<n_y>"`.
pub fn parse_size(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Config(format!("size must look like \"4x2\", got {s:?}"));
    let (a, b) = s.trim().split_once(['x', 'X', '×']).ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub lattice: LatticeConfig,
    pub drive: DriveConfig,
    pub task: TaskConfig,
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(format!("cannot serialize config: {e}")))
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let table: toml::Table = text.parse().map_err(|e| CliError::Config(format!("{e}")))?;
        Self::from_table(table)
    }

    pub fn from_table(table: toml::Table) -> Result<Self, CliError> {
        table.try_into().map_err(|e: toml::de::Error| CliError::Config(format!("{e}")))
    }

    /// The config as embedded in output headers: everything but the output path.
    pub fn provenance(&self) -> ExperimentConfig {
        let mut c = self.clone();
        c.output.path = None;
        c
    }
}

/// Applies a `section.key=value` override to a raw config table. The value is
/// read as a TOML value, falling back to a plain string.
pub fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<(), CliError> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override must look like section.key=value, got {assignment:?}")))?;
    let value = parse_value(raw.trim());
    let keys: Vec<&str> = path.trim().split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(CliError::Config(format!("bad override key {path:?}")));
    }
    let (last, parents) = keys.split_last().expect("non-empty split");
    let mut cur = table;
    for k in parents {
        let entry = cur.entry(k.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("override {path:?} descends into a non-table")))?;
    }
    cur.insert(last.to_string(), value);
    Ok(())
}

fn parse_value(raw: &str) -> toml::Value {
    let doc = format!("v = {raw}");
    match doc.parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("key just written"),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

impl FromStr for ExperimentConfig {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Self::from_toml(s)
    }
}
