//! Majorana operators from the column-ordered Jordan-Wigner transformation,
//! the spin dictionary they induce, Floquet-mode residuals and the corner
//! spectral functions.
//!
//! ```text
//! γ_{A,i,j} = Π_{l<i, m≤N_y} σ_x,l,m · Π_{n<j} σ_x,i,n · σ_z,i,j
//! γ_{B,i,j} = Π_{l<i, m≤N_y} σ_x,l,m · Π_{n<j} σ_x,i,n · σ_y,i,j
//! ```
//!
//! With column-major site numbering the string is the contiguous prefix of all
//! sites before `(i, j)`.

use std::f64::consts::PI;
use std::fmt;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::QuasienergySpectrum;
use crate::error::{Error, Result};
use crate::floquet::{fold_quasienergy, FloquetOperator};
use crate::lattice::Lattice;
use crate::pauli::{Pauli, PauliString, PauliSum};

/// Largest lattice for which [`verify_dictionary`] builds dense matrices.
pub const DICTIONARY_MAX_SITES: usize = 8;
/// Tolerance of the dense dictionary check.
pub const DICTIONARY_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MajoranaKind {
    A,
    B,
}

impl fmt::Display for MajoranaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MajoranaKind::A => "A",
            MajoranaKind::B => "B",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MajoranaMode {
    pub kind: MajoranaKind,
    /// 1-based `(i, j)`.
    pub site: (usize, usize),
    pub string: PauliString,
}

impl fmt::Display for MajoranaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "γ_{},{},{} = {}", self.kind, self.site.0, self.site.1, self.string)
    }
}

pub fn majorana(lattice: &Lattice, kind: MajoranaKind, i: usize, j: usize) -> Result<MajoranaMode> {
    let idx = lattice.site(i, j)?;
    let n = lattice.n_sites();
    let prefix = (1u64 << idx) - 1;
    let end = PauliString::single(n, idx, match kind {
        MajoranaKind::A => Pauli::Z,
        MajoranaKind::B => Pauli::Y,
    });
    let string = PauliString::from_masks(n, prefix, 0, 0) * end;
    Ok(MajoranaMode { kind, site: (i, j), string })
}

/// The two corner modes `γ_{A,1,1}` and `γ_{B,N_x,N_y}`.
pub fn corner_modes(lattice: &Lattice) -> (MajoranaMode, MajoranaMode) {
    let first = majorana(lattice, MajoranaKind::A, 1, 1).expect("corner site exists");
    let last = majorana(lattice, MajoranaKind::B, lattice.n_x(), lattice.n_y()).expect("corner site exists");
    (first, last)
}

/// Boundary string `γ_{B,1} (Π_{1<j<N} γ_{A,j} γ_{B,j}) γ_{A,N}` of a periodic chain.
pub fn gamma_pbc(lattice: &Lattice) -> Result<PauliString> {
    if lattice.n_x() != 1 || lattice.n_y() < 2 {
        return Err(Error::InvalidArgument(format!(
            "the boundary string is defined for 1 x N chains with N >= 2, got {}",
            lattice.label()
        )));
    }
    let n = lattice.n_y();
    let g = |kind, j| majorana(lattice, kind, 1, j).map(|m| m.string);
    let mut out = g(MajoranaKind::B, 1)?;
    for j in 2..n {
        out = out * g(MajoranaKind::A, j)? * g(MajoranaKind::B, j)?;
    }
    Ok(out * g(MajoranaKind::A, n)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct DictionaryReport {
    pub checks: usize,
    /// Largest entrywise deviation of `{γ, γ'} − 2δ I`.
    pub anticommutator_deviation: f64,
    /// `σ_x,i,j = i γ_A,i,j γ_B,i,j`.
    pub onsite_deviation: f64,
    /// `σ_z,i,j+1 σ_z,i,j = i γ_B,i,j γ_A,i,j+1`.
    pub rung_deviation: f64,
    /// Leg identity with every string factor written as `i γ_A γ_B = σ_x`.
    pub leg_deviation: f64,
    /// Leg identity with bare `γ_A γ_B` string factors; these differ from the
    /// above by the phase `i^{N_y − 1}`, so this vanishes only for `N_y ≡ 1 (mod 4)`.
    pub leg_deviation_bare_string: f64,
}

impl DictionaryReport {
    /// Largest deviation among the identities that must hold exactly.
    pub fn max_deviation(&self) -> f64 {
        self.anticommutator_deviation
            .max(self.onsite_deviation)
            .max(self.rung_deviation)
            .max(self.leg_deviation)
    }
}

/// Dense check of the anticommutation relations and of the spin dictionary on
/// every site and open bond:
///
/// ```text
/// σ_x,i,j             = i γ_A,i,j γ_B,i,j
/// σ_z,i,j+1 σ_z,i,j   = i γ_B,i,j γ_A,i,j+1
/// σ_z,i+1,j σ_z,i,j   = i γ_B,i,j γ_A,i+1,j Π_{j<n≤N_y} (i γ_A γ_B)_{i,n} Π_{m<j} (i γ_A γ_B)_{i+1,m}
/// ```
pub fn verify_dictionary(lattice: &Lattice) -> Result<DictionaryReport> {
    let n = lattice.n_sites();
    if n > DICTIONARY_MAX_SITES {
        return Err(Error::DenseCap { sites: n, cap: DICTIONARY_MAX_SITES });
    }
    let (nx, ny) = (lattice.n_x(), lattice.n_y());
    let d = lattice.dim();
    let eye = Array2::<Complex64>::eye(d);
    let i_unit = Complex64::new(0.0, 1.0);

    let mut ga = Vec::with_capacity(n);
    let mut gb = Vec::with_capacity(n);
    for i in 1..=nx {
        for j in 1..=ny {
            ga.push(majorana(lattice, MajoranaKind::A, i, j)?.string.to_dense());
            gb.push(majorana(lattice, MajoranaKind::B, i, j)?.string.to_dense());
        }
    }
    let dev = |a: &Array2<Complex64>, b: &Array2<Complex64>| {
        a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    };

    let modes: Vec<&Array2<Complex64>> = ga.iter().chain(gb.iter()).collect();
    let mut anti = 0.0f64;
    for (p, a) in modes.iter().enumerate() {
        for (q, b) in modes.iter().enumerate().skip(p) {
            let ac = a.dot(*b) + b.dot(*a);
            let target = if p == q { &eye * Complex64::new(2.0, 0.0) } else { Array2::zeros((d, d)) };
            anti = anti.max(dev(&ac, &target));
        }
    }

    let sx = |k: usize| PauliString::x(n, k).to_dense();
    let sz = |k: usize| PauliString::z(n, k).to_dense();
    let idx = |i: usize, j: usize| (i - 1) * ny + (j - 1);
    let mut report = DictionaryReport {
        checks: 0,
        anticommutator_deviation: anti,
        onsite_deviation: 0.0,
        rung_deviation: 0.0,
        leg_deviation: 0.0,
        leg_deviation_bare_string: 0.0,
    };
    for i in 1..=nx {
        for j in 1..=ny {
            let k = idx(i, j);
            report.onsite_deviation = report.onsite_deviation.max(dev(&sx(k), &(ga[k].dot(&gb[k]) * i_unit)));
            report.checks += 1;
            if j < ny {
                let k1 = idx(i, j + 1);
                let lhs = sz(k1).dot(&sz(k));
                report.rung_deviation = report.rung_deviation.max(dev(&lhs, &(gb[k].dot(&ga[k1]) * i_unit)));
                report.checks += 1;
            }
            if i < nx {
                let k1 = idx(i + 1, j);
                let lhs = sz(k1).dot(&sz(k));
                let mut rhs = gb[k].dot(&ga[k1]) * i_unit;
                let mut factors = 0;
                for m in ((j + 1)..=ny).map(|nn| idx(i, nn)).chain((1..j).map(|mm| idx(i + 1, mm))) {
                    rhs = rhs.dot(&ga[m].dot(&gb[m]));
                    factors += 1;
                }
                report.leg_deviation_bare_string = report.leg_deviation_bare_string.max(dev(&lhs, &rhs));
                let phase = i_unit.powu(factors);
                report.leg_deviation = report.leg_deviation.max(dev(&lhs, &(rhs * phase)));
                report.checks += 1;
            }
        }
    }
    if report.anticommutator_deviation > DICTIONARY_TOL {
        return Err(Error::Tolerance {
            what: "Majorana anticommutator deviation",
            value: report.anticommutator_deviation,
            limit: DICTIONARY_TOL,
        });
    }
    if report.max_deviation() > DICTIONARY_TOL {
        return Err(Error::Tolerance {
            what: "spin-Majorana dictionary deviation",
            value: report.max_deviation(),
            limit: DICTIONARY_TOL,
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeTarget {
    /// `U γ U† = γ`.
    Zero,
    /// `U γ U† = −γ`.
    Pi,
}

/// `‖U M U† ∓ M‖_max` (minus for [`ModeTarget::Zero`], plus for [`ModeTarget::Pi`]),
/// evaluated one basis column at a time with the matrix-free propagator.
pub fn mode_residual(u: &FloquetOperator, op: &PauliSum, target: ModeTarget) -> Result<f64> {
    let n = u.lattice().n_sites();
    if op.n_sites() != n {
        return Err(Error::DimensionMismatch { expected: n, found: op.n_sites() });
    }
    let d = u.dim();
    let sign = match target {
        ModeTarget::Zero => -1.0,
        ModeTarget::Pi => 1.0,
    };
    let worst = (0..d)
        .into_par_iter()
        .map_init(
            || (vec![Complex64::new(0.0, 0.0); d], vec![Complex64::new(0.0, 0.0); d]),
            |(col, tmp), b| {
                col.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
                col[b] = Complex64::new(1.0, 0.0);
                u.apply_adjoint_in_place(col);
                op.apply_into(col, tmp);
                u.apply_in_place(tmp);
                // add ± M e_b
                for (coef, p) in op.terms() {
                    let (t, c) = p.act_on_basis(b);
                    tmp[t] += coef * c * sign;
                }
                tmp.iter().map(|c| c.norm()).fold(0.0, f64::max)
            },
        )
        .reduce(|| 0.0, f64::max);
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralConfig {
    /// Number of sampled eigenstates.
    pub chi: usize,
    /// Half-width of the quasienergy window.
    pub window: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralFunctions {
    pub s0_1: f64,
    pub s0_2: f64,
    pub spi_1: f64,
    pub spi_2: f64,
}

/// Indices of the sampled eigenstates: `⌊k D / χ⌋` over the sorted spectrum.
pub fn sample_indices(dim: usize, chi: usize) -> Vec<usize> {
    (0..chi).map(|k| k * dim / chi).collect()
}

/// Windowed matrix-element masses of the corner modes `γ_{A,1,1}` and
/// `γ_{B,N_x,N_y}` around zero and `π/T` quasienergy difference.
pub fn corner_spectral_functions(
    spec: &QuasienergySpectrum,
    lattice: &Lattice,
    config: &SpectralConfig,
) -> Result<SpectralFunctions> {
    let d = spec.dim();
    if lattice.dim() != d {
        return Err(Error::DimensionMismatch { expected: lattice.dim(), found: d });
    }
    let period = spec.period();
    if config.chi == 0 || config.chi > d {
        return Err(Error::InvalidArgument(format!("chi must lie in 1..={d}, got {}", config.chi)));
    }
    if !(config.window > 0.0 && config.window < PI / (2.0 * period)) {
        return Err(Error::InvalidArgument(format!(
            "window must lie in (0, π/(2T)) = (0, {}), got {}",
            PI / (2.0 * period),
            config.window
        )));
    }
    let (g1, g2) = corner_modes(lattice);
    let samples = sample_indices(d, config.chi);
    let (z1, p1, t1) = windowed_masses(spec, &g1.string, &samples, config.window);
    let (z2, p2, t2) = windowed_masses(spec, &g2.string, &samples, config.window);
    Ok(SpectralFunctions { s0_1: z1 / t1, s0_2: z2 / t2, spi_1: p1 / t1, spi_2: p2 / t2 })
}

/// `(zero-window mass, π-window mass, total mass)` summed over the samples.
fn windowed_masses(spec: &QuasienergySpectrum, gamma: &PauliString, samples: &[usize], window: f64) -> (f64, f64, f64) {
    let period = spec.period();
    let eps = spec.quasienergies();
    let vectors = spec.eigenvectors();
    samples
        .par_iter()
        .map(|&n| {
            let mut image = vec![Complex64::new(0.0, 0.0); spec.dim()];
            gamma.apply_into(spec.eigenvector(n).as_slice().expect("contiguous rows"), &mut image);
            let (mut zero, mut pi, mut total) = (0.0, 0.0, 0.0);
            for (m, row) in vectors.outer_iter().enumerate() {
                let amp: Complex64 = row.iter().zip(&image).map(|(a, b)| a.conj() * b).sum();
                let w = amp.norm_sqr();
                total += w;
                let gap = fold_quasienergy(eps[n] - eps[m], period);
                if gap.abs() <= window {
                    zero += w;
                }
                if fold_quasienergy(gap - PI / period, period).abs() <= window {
                    pi += w;
                }
            }
            (zero, pi, total)
        })
        .collect::<Vec<_>>()
        .into_iter()
        // sequential sum keeps the result independent of thread scheduling
        .fold((0.0, 0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2))
}
