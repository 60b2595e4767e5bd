//! Closed-form analysis of the driven open chain (`N_x = 1`).
//!
//! Angles follow the `T = 2` convention: `h` and `J` below are the kick angles
//! `θ_h = hT/2` and `θ_J = J T/2`. An MPM localized at the left end has the form
//!
//! ```text
//! γ_π = γ_A,1 + Σ_{j≥1} (a_j γ_A,j+1 + b_j γ_B,j),   (a_j, b_j) = M_OBC^{j−1} (a_1, b_1),
//! ```
//!
//! and is normalizable iff the relevant transfer-matrix eigenvalue `E₋` has
//! modulus below one, which happens exactly for `h + J > π/2`. MZMs exist for
//! `J > h`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::majorana::{majorana, MajoranaKind};
use crate::pauli::PauliSum;

/// Below this `|sin 2h · sin 2J|` the transfer matrix is treated as singular.
const SINGULAR_TOL: f64 = 1e-14;
/// Half-width of the band around a phase boundary that is reported as such.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferMatrix {
    pub h: f64,
    pub j: f64,
    pub matrix: [[f64; 2]; 2],
    pub e_plus: f64,
    pub e_minus: f64,
    pub psi_plus: [f64; 2],
    pub psi_minus: [f64; 2],
}

impl TransferMatrix {
    pub fn determinant(&self) -> f64 {
        let m = &self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        let m = &self.matrix;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }
}

/// `M_OBC` and its eigenpairs. The entries and eigenvalues are evaluated in
/// factored form, `c2h + c2J = 2 cos(h+J) cos(h−J)`, `E₊ = −tan h tan J`,
/// `E₋ = −cot h cot J`, which avoids the cancellation of `1 − cos²` near the
/// singular lines; note `det M_OBC = E₊E₋ = 1`.
pub fn transfer_matrix(h: f64, j: f64) -> Result<TransferMatrix> {
    let s2h = (2.0 * h).sin();
    let s2j = (2.0 * j).sin();
    let denom = s2h * s2j;
    if denom.abs() < SINGULAR_TOL {
        return Err(Error::Singular { h, j });
    }
    let sum = 2.0 * (h + j).cos() * (h - j).cos();
    let off = sum / s2h;
    let matrix = [
        [-(sum * sum + s2h * s2h) / denom, off],
        [off, -s2j / s2h],
    ];
    let ratio = (h.sin() * j.sin()) / (h.cos() * j.cos());
    let e_plus = -ratio;
    let e_minus = -1.0 / ratio;
    Ok(TransferMatrix {
        h,
        j,
        matrix,
        e_plus,
        e_minus,
        psi_plus: [j.sin(), j.cos()],
        psi_minus: [j.cos(), -j.sin()],
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MpmSolution {
    pub h: f64,
    pub j: f64,
    /// `a_1, …, a_L`; coefficient of `γ_A,j+1`.
    pub a: Vec<f64>,
    /// `b_1, …, b_L`; coefficient of `γ_B,j`.
    pub b: Vec<f64>,
    pub seed: [f64; 2],
    /// Geometric ratio between consecutive `(a_j, b_j)`.
    pub decay: f64,
    pub normalizable: bool,
    /// `sqrt(1 + Σ a_j² + Σ b_j²)` over the stored coefficients.
    pub norm: f64,
}

/// Closed-form MPM coefficients `(a_j, b_j) = E₋^{j−1} (a_1, b_1)`, `j = 1..=length`,
/// with `(a_1, b_1) = −cos h / (sin h sin J) · ψ₋`.
pub fn mpm_solution(h: f64, j: f64, length: usize) -> Result<MpmSolution> {
    let tm = transfer_matrix(h, j)?;
    let seed = mpm_seed(h, j)?;
    let mut a = Vec::with_capacity(length);
    let mut b = Vec::with_capacity(length);
    let mut scale = 1.0;
    for _ in 0..length {
        a.push(scale * seed[0]);
        b.push(scale * seed[1]);
        scale *= tm.e_minus;
    }
    let norm = (1.0 + a.iter().chain(&b).map(|x| x * x).sum::<f64>()).sqrt();
    Ok(MpmSolution { h, j, a, b, seed, decay: tm.e_minus, normalizable: tm.e_minus.abs() < 1.0, norm })
}

pub fn mpm_seed(h: f64, j: f64) -> Result<[f64; 2]> {
    let denom = h.sin() * j.sin();
    if denom.abs() < SINGULAR_TOL {
        return Err(Error::Singular { h, j });
    }
    let f = -h.cos() / denom;
    Ok([f * j.cos(), -f * j.sin()])
}

/// Coefficients obtained by stepping `M_OBC` from the seed, one site at a time.
pub fn mpm_recursion(h: f64, j: f64, length: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let tm = transfer_matrix(h, j)?;
    let mut v = mpm_seed(h, j)?;
    let (mut a, mut b) = (Vec::with_capacity(length), Vec::with_capacity(length));
    for _ in 0..length {
        a.push(v[0]);
        b.push(v[1]);
        v = tm.apply(v);
    }
    Ok((a, b))
}

/// The ansatz `γ_π` on a `1 × L` chain as a combination of Pauli strings,
/// scaled to unit weight `Σ c² = 1` (so that `γ_π² = I`).
///
/// The transfer-matrix analysis is written for `exp(−h Σ γ_Aγ_B) exp(J Σ γ_Bγ_A′)`,
/// whose two factors rotate opposite to those of [`crate::FloquetOperator`]. The
/// engine with kick angles `(θ_h, θ_J) = (h, J)` therefore hosts the ansatz with
/// coefficients evaluated at `(h, −J)`.
pub fn mpm_ansatz_operator(lattice: &Lattice, h: f64, j: f64) -> Result<PauliSum> {
    if lattice.n_x() != 1 {
        return Err(Error::InvalidArgument(format!("ansatz defined for 1 x N chains, got {}", lattice.label())));
    }
    let len = lattice.n_y();
    let sol = mpm_solution(h, -j, len)?;
    let gamma = |kind, site| majorana(lattice, kind, 1, site).map(|m| m.string);
    let mut op = PauliSum::new(lattice.n_sites());
    op.push(1.0, gamma(MajoranaKind::A, 1)?)?;
    for site in 1..=len {
        if site < len {
            op.push(sol.a[site - 1], gamma(MajoranaKind::A, site + 1)?)?;
        }
        op.push(sol.b[site - 1], gamma(MajoranaKind::B, site)?)?;
    }
    let w = op.weight();
    op.scale(1.0 / w.sqrt());
    Ok(op)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PhaseLabel {
    PM,
    ZeroSG,
    PiSG,
    ZeroPiPM,
}

impl fmt::Display for PhaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseLabel::PM => "PM",
            PhaseLabel::ZeroSG => "0-SG",
            PhaseLabel::PiSG => "pi-SG",
            PhaseLabel::ZeroPiPM => "0pi-PM",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PhaseBoundary {
    /// `h + J = π/2`: MPMs appear or disappear.
    AntiDiagonal,
    /// `J = h`: MZMs appear or disappear.
    Diagonal,
    /// The crossing point `h = J = π/4`.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PhaseClass {
    Phase(PhaseLabel),
    Boundary(PhaseBoundary),
}

impl fmt::Display for PhaseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhaseClass::Phase(p) => p.fmt(f),
            PhaseClass::Boundary(PhaseBoundary::AntiDiagonal) => f.write_str("boundary:anti-diagonal"),
            PhaseClass::Boundary(PhaseBoundary::Diagonal) => f.write_str("boundary:diagonal"),
            PhaseClass::Boundary(PhaseBoundary::Both) => f.write_str("boundary:crossing"),
        }
    }
}

pub fn classify_phase(h: f64, j: f64) -> Result<PhaseClass> {
    let inside = |x: f64| x > 0.0 && x < FRAC_PI_2;
    if !(inside(h) && inside(j)) {
        return Err(Error::InvalidArgument(format!(
            "(h, J) = ({h}, {j}) lies outside the open square (0, π/2)²"
        )));
    }
    let anti = (h + j - FRAC_PI_2).abs() <= BOUNDARY_TOL;
    let diag = (j - h).abs() <= BOUNDARY_TOL;
    Ok(match (anti, diag) {
        (true, true) => PhaseClass::Boundary(PhaseBoundary::Both),
        (true, false) => PhaseClass::Boundary(PhaseBoundary::AntiDiagonal),
        (false, true) => PhaseClass::Boundary(PhaseBoundary::Diagonal),
        (false, false) => {
            let mpm = h + j > FRAC_PI_2;
            let mzm = j > h;
            PhaseClass::Phase(match (mzm, mpm) {
                (false, false) => PhaseLabel::PM,
                (true, false) => PhaseLabel::ZeroSG,
                (false, true) => PhaseLabel::PiSG,
                (true, true) => PhaseLabel::ZeroPiPM,
            })
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PbcLineCheck {
    pub eigenvalues: [Complex64; 2],
    pub mpm_exists: bool,
}

/// On the `J = π/2` line of the periodic chain the pair `(γ_A,1, γ_B,1)` rotates
/// into itself with eigenvalues `cos 2h ± i sin 2h`; an MPM needs one equal to −1.
pub fn pbc_line_check(h: f64) -> PbcLineCheck {
    let (c, s) = ((2.0 * h).cos(), (2.0 * h).sin());
    let eigenvalues = [Complex64::new(c, s), Complex64::new(c, -s)];
    let mpm_exists = eigenvalues.iter().any(|e| (e + 1.0).norm() < 1e-12);
    PbcLineCheck { eigenvalues, mpm_exists }
}
