//! Stroboscopic magnetization dynamics and its power spectrum.
//!
//! Spins are prepared in product states aligned in the z–y plane,
//! `cos θ ẑ + sin θ ŷ`, evolved period by period with the matrix-free propagator,
//! and measured along an axis of the same family. The power spectrum is the DFT
//! of the samples `n = 1..M` with `1/M` normalization on the grid
//! `Ω_k = 2πk / (M T)`, so the subharmonic response sits exactly at `k = M/2`.

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floquet::{DriveParams, FloquetOperator};
use crate::lattice::Lattice;
use crate::state::StateVector;

/// Largest tolerated drift of the state norm during evolution.
pub const NORM_DRIFT_LIMIT: f64 = 1e-10;
/// Default number of periods.
pub const DEFAULT_PERIODS: usize = 2000;
/// Tilt of the rotated initial state and measurement axis, `cos(π/4) ẑ + sin(π/4) ŷ`.
pub const ROTATED_AXIS: f64 = PI / 4.0;
/// Fields (in units of `π/T`) near which the rotated state shows its strongest
/// period-doubled response.
pub const ROTATED_PRESETS: [f64; 2] = [1.225, 1.25];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiteSpin {
    Up,
    Down,
    /// Aligned along `cos θ ẑ + sin θ ŷ`.
    Angle(f64),
}

impl SiteSpin {
    /// Amplitudes on (up, down).
    fn spinor(self) -> [Complex64; 2] {
        match self {
            SiteSpin::Up => [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            SiteSpin::Down => [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            SiteSpin::Angle(t) => [Complex64::new((t / 2.0).cos(), 0.0), Complex64::new(0.0, (t / 2.0).sin())],
        }
    }

    /// `⟨cos φ σ_z + sin φ σ_y⟩` in this single-site state.
    pub fn expectation(self, phi: f64) -> f64 {
        let theta = match self {
            SiteSpin::Up => 0.0,
            SiteSpin::Down => PI,
            SiteSpin::Angle(t) => t,
        };
        (theta - phi).cos()
    }
}

/// Initial product state, described independently of the lattice size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialState {
    /// `|↑…↑⟩`.
    AllUp,
    /// `|↓…↓⟩`.
    AllDown,
    /// `|↑↓↑…↑⟩`: only the second spin flipped.
    SecondFlipped,
    /// Every spin along `cos θ ẑ + sin θ ŷ`.
    Uniform(f64),
    /// One `u`/`d` (or `↑`/`↓`) per site in canonical order.
    Pattern(String),
    /// One angle per site.
    Angles(Vec<f64>),
}

impl InitialState {
    pub fn sites(&self, n: usize) -> Result<Vec<SiteSpin>> {
        let out = match self {
            InitialState::AllUp => vec![SiteSpin::Up; n],
            InitialState::AllDown => vec![SiteSpin::Down; n],
            InitialState::SecondFlipped => {
                let mut v = vec![SiteSpin::Up; n];
                if n > 1 {
                    v[1] = SiteSpin::Down;
                }
                v
            }
            InitialState::Uniform(t) => {
                check_angle(*t)?;
                vec![SiteSpin::Angle(*t); n]
            }
            InitialState::Pattern(p) => {
                let v: Vec<SiteSpin> = p
                    .chars()
                    .map(|c| match c {
                        'u' | 'U' | '↑' => Ok(SiteSpin::Up),
                        'd' | 'D' | '↓' => Ok(SiteSpin::Down),
                        other => Err(Error::InvalidArgument(format!("unknown spin token `{other}`"))),
                    })
                    .collect::<Result<_>>()?;
                if v.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: v.len() });
                }
                v
            }
            InitialState::Angles(a) => {
                if a.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: a.len() });
                }
                a.iter().map(|&t| check_angle(t).map(|_| SiteSpin::Angle(t))).collect::<Result<_>>()?
            }
        };
        Ok(out)
    }
}

impl FromStr for InitialState {
    type Err = Error;

    /// `up`, `down`, `second-flipped`, `rotated` (uniform `π/4`),
    /// `uniform:<angle>` or a `u`/`d` pattern.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "up" | "all-up" => InitialState::AllUp,
            "down" | "all-down" => InitialState::AllDown,
            "second-flipped" => InitialState::SecondFlipped,
            "rotated" => InitialState::Uniform(ROTATED_AXIS),
            _ => {
                if let Some(angle) = s.strip_prefix("uniform:") {
                    let t: f64 = angle
                        .parse()
                        .map_err(|_| Error::InvalidArgument(format!("bad angle in `{s}`")))?;
                    InitialState::Uniform(t)
                } else if !s.is_empty() && s.chars().all(|c| "uUdD↑↓".contains(c)) {
                    InitialState::Pattern(s.to_string())
                } else {
                    return Err(Error::InvalidArgument(format!("unrecognized initial state `{s}`")));
                }
            }
        })
    }
}

fn check_angle(t: f64) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("spin angle must be finite, got {t}")))
    }
}

pub fn prepare_state(lattice: &Lattice, init: &InitialState) -> Result<StateVector> {
    let n = lattice.n_sites();
    let sites = init.sites(n)?;
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    // site k is bit k: each new site doubles the vector as its high half
    for site in &sites {
        let [up, down] = site.spinor();
        let mut next = Vec::with_capacity(amps.len() * 2);
        next.extend(amps.iter().map(|a| a * up));
        next.extend(amps.iter().map(|a| a * down));
        amps = next;
    }
    StateVector::from_amplitudes(n, amps)
}

/// `Σ_k ⟨cos θ σ_z,k + sin θ σ_y,k⟩`.
pub fn magnetization(v: &StateVector, theta: f64) -> f64 {
    magnetization_of(v.amplitudes(), v.n_sites(), theta)
}

fn magnetization_of(amps: &[Complex64], n: usize, theta: f64) -> f64 {
    let (c, s) = (theta.cos(), theta.sin());
    let mut total = 0.0;
    if c != 0.0 {
        let mut z = 0.0;
        for (idx, a) in amps.iter().enumerate() {
            // Σ_k (1 − 2 b_k) = N − 2 popcount
            z += a.norm_sqr() * (n as f64 - 2.0 * idx.count_ones() as f64);
        }
        total += c * z;
    }
    if s != 0.0 {
        let mut y = 0.0;
        for k in 0..n {
            let stride = 1usize << k;
            for block in amps.chunks_exact(2 * stride) {
                let (lo, hi) = block.split_at(stride);
                for (a0, a1) in lo.iter().zip(hi) {
                    // σ_y|↑⟩ = i|↓⟩
                    y += 2.0 * (a1.conj() * a0 * Complex64::new(0.0, 1.0)).re;
                }
            }
        }
        total += s * y;
    }
    total
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MagnetizationTrace {
    /// Measurement axis angle in the z–y plane.
    pub theta: f64,
    pub period: f64,
    pub n_sites: usize,
    /// Values at `n = 0..=M`.
    pub values: Vec<f64>,
}

impl MagnetizationTrace {
    pub fn periods(&self) -> usize {
        self.values.len() - 1
    }

    /// Same trace divided by the number of spins.
    pub fn per_site(&self) -> MagnetizationTrace {
        let n = self.n_sites as f64;
        MagnetizationTrace { values: self.values.iter().map(|v| v / n).collect(), ..self.clone() }
    }
}

pub fn evolve_stroboscopic(
    u: &FloquetOperator,
    v0: &StateVector,
    periods: usize,
    theta: f64,
) -> Result<MagnetizationTrace> {
    if periods == 0 {
        return Err(Error::InvalidArgument("at least one period is required".into()));
    }
    u.check_dim(v0.dim())?;
    let n = v0.n_sites();
    let start_norm = v0.norm();
    if (start_norm - 1.0).abs() > NORM_DRIFT_LIMIT {
        return Err(Error::Tolerance { what: "initial state norm drift", value: (start_norm - 1.0).abs(), limit: NORM_DRIFT_LIMIT });
    }
    let mut amps = v0.amplitudes().to_vec();
    let mut values = Vec::with_capacity(periods + 1);
    values.push(magnetization_of(&amps, n, theta));
    for _ in 0..periods {
        u.apply_in_place(&mut amps);
        values.push(magnetization_of(&amps, n, theta));
    }
    let drift = (amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt() - 1.0).abs();
    if drift > NORM_DRIFT_LIMIT {
        return Err(Error::Tolerance { what: "state norm drift", value: drift, limit: NORM_DRIFT_LIMIT });
    }
    Ok(MagnetizationTrace { theta, period: u.period(), n_sites: n, values })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerSpectrum {
    pub period: f64,
    /// DFT coefficients `F_k`, `k = 0..M`.
    #[serde(skip)]
    pub coefficients: Vec<Complex64>,
}

impl PowerSpectrum {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `Ω_k = 2πk / (M T)`.
    pub fn frequency(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / (self.len() as f64 * self.period)
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.norm()).collect()
    }

    /// `|F_{M/2}|`, the response at `Ω = π/T`.
    pub fn subharmonic(&self) -> f64 {
        self.coefficients[self.len() / 2].norm()
    }

    /// `|F_{M/2}|` over the largest magnitude among the other nonzero-frequency bins.
    pub fn dominance_ratio(&self) -> f64 {
        let half = self.len() / 2;
        let rival = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != 0 && k != half)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max);
        self.subharmonic() / rival
    }
}

/// Spectrum of the samples `n = 1..=M` of the trace.
pub fn power_spectrum(trace: &MagnetizationTrace) -> Result<PowerSpectrum> {
    power_spectrum_of(&trace.values[1..], trace.period)
}

/// `F_k = (1/M) Σ_{n=1..M} x_n e^{−2πi k n / M}` over an even-length real series
/// whose first element is sample `n = 1`.
pub fn power_spectrum_of(samples: &[f64], period: f64) -> Result<PowerSpectrum> {
    let m = samples.len();
    if m < 2 || m % 2 != 0 {
        return Err(Error::InvalidArgument(format!("power spectrum needs an even number (>= 2) of samples, got {m}")));
    }
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    // the FFT indexes the first sample as n = 0; shift to n = 1
    let scale = 1.0 / m as f64;
    for (k, c) in buf.iter_mut().enumerate() {
        *c *= Complex64::from_polar(scale, -2.0 * PI * k as f64 / m as f64);
    }
    Ok(PowerSpectrum { period, coefficients: buf })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `Σ_k ⟨σ_k⟩`.
    Total,
    /// `Σ_k ⟨σ_k⟩ / N`.
    #[default]
    PerSite,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanPoint {
    pub lattice: String,
    pub h: f64,
    pub peak: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRequest<'a> {
    pub lattices: &'a [Lattice],
    pub template: DriveParams,
    pub h_values: &'a [f64],
    pub init: &'a InitialState,
    pub periods: usize,
    pub theta: f64,
    pub normalization: Normalization,
}

/// Subharmonic peak `|F_{M/2}|` for every `(lattice, h)` pair, lattice-major.
pub fn scan_subharmonic(req: &ScanRequest<'_>) -> Result<Vec<ScanPoint>> {
    let jobs: Vec<(&Lattice, f64)> = req
        .lattices
        .iter()
        .flat_map(|l| req.h_values.iter().map(move |&h| (l, h)))
        .collect();
    jobs.par_iter()
        .map(|&(lattice, h)| {
            let params = req.template.with_h(h);
            let u = FloquetOperator::build(lattice, &params, false)?;
            let v0 = prepare_state(lattice, req.init)?;
            let mut trace = evolve_stroboscopic(&u, &v0, req.periods, req.theta)?;
            if req.normalization == Normalization::PerSite {
                trace = trace.per_site();
            }
            let spectrum = power_spectrum(&trace)?;
            Ok(ScanPoint { lattice: lattice.label(), h, peak: spectrum.subharmonic() })
        })
        .collect()
}
