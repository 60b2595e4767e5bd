//! The one-period propagator of the two-step kicked Ising drive.
//!
//! During the first half period the spins feel `-Σ (J_x z z + J_y z z)` over the
//! lattice bonds, during the second half a uniform transverse field `h Σ σ_x`.
//! The resulting Floquet operator factorizes as
//!
//! ```text
//! U = Π_k exp(-i θ_h σ_x,k) · exp(+i Σ_bonds θ_bond z_a z_b),
//! θ_h = h T / 2,  θ_x = J_x T / 2,  θ_y = J_y T / 2,
//! ```
//!
//! with the diagonal interaction factor acting first. [`FloquetOperator::apply`]
//! uses this structure directly: one diagonal phase multiply plus one 2×2
//! rotation per site, `O((N + 1) D)` per period.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{BondDir, Lattice};
use crate::state::StateVector;

/// Largest lattice for which a dense `D × D` unitary is built.
pub const DENSE_MAX_SITES: usize = 13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    pub j_x: f64,
    pub j_y: f64,
    pub h: f64,
    pub period: f64,
}

impl DriveParams {
    pub fn new(j_x: f64, j_y: f64, h: f64, period: f64) -> Result<Self> {
        let p = DriveParams { j_x, j_y, h, period };
        p.validate()?;
        Ok(p)
    }

    /// Couplings given in units of `π/T`.
    pub fn from_pi_units(j_x: f64, j_y: f64, h: f64, period: f64) -> Result<Self> {
        Self::new(j_x * PI / period, j_y * PI / period, h * PI / period, period)
    }

    /// Parameters whose kick angles are exactly `(θ_x, θ_y, θ_h)`.
    pub fn from_angles(theta_x: f64, theta_y: f64, theta_h: f64, period: f64) -> Result<Self> {
        Self::new(2.0 * theta_x / period, 2.0 * theta_y / period, 2.0 * theta_h / period, period)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.period.is_finite() && self.period > 0.0) {
            return Err(Error::InvalidArgument(format!("period must be finite and positive, got {}", self.period)));
        }
        for (name, v) in [("j_x", self.j_x), ("j_y", self.j_y), ("h", self.h)] {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be finite, got {v}")));
            }
        }
        Ok(())
    }

    pub fn theta_h(&self) -> f64 {
        self.h * self.period / 2.0
    }

    pub fn theta_x(&self) -> f64 {
        self.j_x * self.period / 2.0
    }

    pub fn theta_y(&self) -> f64 {
        self.j_y * self.period / 2.0
    }

    pub fn with_h(self, h: f64) -> Self {
        DriveParams { h, ..self }
    }

    pub fn with_j_y(self, j_y: f64) -> Self {
        DriveParams { j_y, ..self }
    }
}

/// Folds a quasienergy into `(-π/T, π/T]`.
pub fn fold_quasienergy(eps: f64, period: f64) -> f64 {
    let zone = 2.0 * PI / period;
    let half = PI / period;
    let mut e = (eps + half).rem_euclid(zone) - half;
    if e <= -half {
        e += zone;
    }
    e
}

/// Sum over bonds of `θ_bond z_a z_b` for every basis state.
pub(crate) fn bond_phases(lattice: &Lattice, params: &DriveParams) -> Vec<f64> {
    let (tx, ty) = (params.theta_x(), params.theta_y());
    let dim = lattice.dim();
    let mut phases = vec![0.0; dim];
    for (s, phase) in phases.iter_mut().enumerate() {
        let mut acc = 0.0;
        for bond in lattice.bonds() {
            let parity = ((s >> bond.a) ^ (s >> bond.b)) & 1;
            let zz = if parity == 0 { 1.0 } else { -1.0 };
            acc += match bond.dir {
                BondDir::X => tx * zz,
                BondDir::Y => ty * zz,
            };
        }
        *phase = acc;
    }
    phases
}

/// Applies `Π_k exp(-i θ σ_x,k)` in place.
pub(crate) fn apply_uniform_x_rotation(amps: &mut [Complex64], n_sites: usize, theta: f64) {
    let c = theta.cos();
    let ms = Complex64::new(0.0, -theta.sin());
    for k in 0..n_sites {
        let stride = 1usize << k;
        for block in amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x * c + y * ms;
                *b = y * c + x * ms;
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct FloquetOperator {
    lattice: Lattice,
    params: DriveParams,
    /// `exp(+i Σ θ z z)` per basis state.
    zz: Vec<Complex64>,
    dense: Option<Array2<Complex64>>,
}

impl FloquetOperator {
    pub fn build(lattice: &Lattice, params: &DriveParams, materialize_dense: bool) -> Result<Self> {
        params.validate()?;
        if materialize_dense && lattice.n_sites() > DENSE_MAX_SITES {
            return Err(Error::DenseCap { sites: lattice.n_sites(), cap: DENSE_MAX_SITES });
        }
        let zz = bond_phases(lattice, params)
            .into_iter()
            .map(|phi| Complex64::from_polar(1.0, phi))
            .collect();
        let mut op = FloquetOperator {
            lattice: lattice.clone(),
            params: *params,
            zz,
            dense: None,
        };
        if materialize_dense {
            op.dense = Some(op.build_dense());
        }
        Ok(op)
    }

    fn build_dense(&self) -> Array2<Complex64> {
        // U[a, b] = K[a, b] · zz[b],  K[a, b] = cos^{N-w} (-i sin)^w,  w = |a ⊕ b|
        let n = self.lattice.n_sites();
        let d = self.lattice.dim();
        let th = self.params.theta_h();
        let (c, s) = (Complex64::new(th.cos(), 0.0), Complex64::new(0.0, -th.sin()));
        let table: Vec<Complex64> = (0..=n).map(|w| c.powu((n - w) as u32) * s.powu(w as u32)).collect();
        Array2::from_shape_fn((d, d), |(a, b)| table[(a ^ b).count_ones() as usize] * self.zz[b])
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn params(&self) -> &DriveParams {
        &self.params
    }

    pub fn period(&self) -> f64 {
        self.params.period
    }

    pub fn dim(&self) -> usize {
        self.zz.len()
    }

    pub fn dense(&self) -> Option<&Array2<Complex64>> {
        self.dense.as_ref()
    }

    /// Diagonal of the interaction factor.
    pub fn interaction_diagonal(&self) -> &[Complex64] {
        &self.zz
    }

    /// One period applied to `amps` in place.
    pub fn apply_in_place(&self, amps: &mut [Complex64]) {
        debug_assert_eq!(amps.len(), self.zz.len());
        for (a, z) in amps.iter_mut().zip(&self.zz) {
            *a *= z;
        }
        apply_uniform_x_rotation(amps, self.lattice.n_sites(), self.params.theta_h());
    }

    /// `U† amps` in place.
    pub fn apply_adjoint_in_place(&self, amps: &mut [Complex64]) {
        apply_uniform_x_rotation(amps, self.lattice.n_sites(), -self.params.theta_h());
        for (a, z) in amps.iter_mut().zip(&self.zz) {
            *a *= z.conj();
        }
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        self.check_dim(v.dim())?;
        let mut out = v.clone();
        self.apply_in_place(out.amplitudes_mut());
        Ok(out)
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        if found != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found });
        }
        Ok(())
    }
}
