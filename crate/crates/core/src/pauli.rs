//! Pauli strings on up to 63 spins, stored as a pair of bit masks and a power of `i`.
//!
//! A string represents `i^phase · Π_k X_k^{x_k} Z_k^{z_k}` with the `X` factor to
//! the left of the `Z` factor on every site. A site present in both masks
//! therefore carries `X Z = -i Y`, and `Y_k` itself is stored as `phase = 1`
//! with both bits set.
//!
//! Basis convention: bit `k` of a basis index is `0` for spin up (`σ_z = +1`).

use std::fmt;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    /// Exponent of `i`, kept in `0..4`.
    phase: u8,
}

pub(crate) fn i_pow(p: u8) -> Complex64 {
    match p & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= 63, "Pauli strings support at most 63 sites");
        PauliString { n, x: 0, z: 0, phase: 0 }
    }

    /// Builds a string from raw masks. `phase` counts powers of `i`.
    pub fn from_masks(n: usize, x: u64, z: u64, phase: u8) -> Self {
        assert!(n <= 63, "Pauli strings support at most 63 sites");
        let mask = (1u64 << n) - 1;
        assert!(x & !mask == 0 && z & !mask == 0, "mask exceeds {n} sites");
        PauliString { n, x, z, phase: phase & 3 }
    }

    pub fn single(n: usize, site: usize, op: Pauli) -> Self {
        assert!(site < n, "site {site} out of range for {n} sites");
        let bit = 1u64 << site;
        match op {
            Pauli::I => Self::identity(n),
            Pauli::X => Self::from_masks(n, bit, 0, 0),
            Pauli::Z => Self::from_masks(n, 0, bit, 0),
            Pauli::Y => Self::from_masks(n, bit, bit, 1),
        }
    }

    pub fn x(n: usize, site: usize) -> Self {
        Self::single(n, site, Pauli::X)
    }

    pub fn y(n: usize, site: usize) -> Self {
        Self::single(n, site, Pauli::Y)
    }

    pub fn z(n: usize, site: usize) -> Self {
        Self::single(n, site, Pauli::Z)
    }

    /// Ordered product of single-site factors.
    pub fn from_ops(n: usize, ops: &[(usize, Pauli)]) -> Self {
        ops.iter()
            .fold(Self::identity(n), |acc, &(k, op)| acc * Self::single(n, k, op))
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Overall coefficient `i^phase`.
    pub fn coefficient(&self) -> Complex64 {
        i_pow(self.phase)
    }

    pub fn phase_exponent(&self) -> u8 {
        self.phase
    }

    pub fn scaled_by_i(self, power: u8) -> Self {
        PauliString { phase: (self.phase + power) & 3, ..self }
    }

    pub fn neg(self) -> Self {
        self.scaled_by_i(2)
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Single-site operator on `site`, ignoring the global phase.
    pub fn op_at(&self, site: usize) -> Pauli {
        let bit = 1u64 << site;
        match (self.x & bit != 0, self.z & bit != 0) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (false, true) => Pauli::Z,
            (true, true) => Pauli::Y,
        }
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase as u32 + (self.x & self.z).count_ones()) % 2 == 0
    }

    /// `P†`.
    pub fn adjoint(&self) -> Self {
        // (X^x Z^z)† = Z^z X^x = (-1)^{|x∧z|} X^x Z^z
        let sign = 2 * ((self.x & self.z).count_ones() & 1) as u8;
        PauliString { phase: (4 - self.phase + sign) & 3, ..*self }
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Exact product `self · other`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        // Z^{z1} X^{x2} = (-1)^{|z1∧x2|} X^{x2} Z^{z1}
        let swap = 2 * ((self.z & other.x).count_ones() & 1) as u8;
        Ok(PauliString {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + swap) & 3,
        })
    }

    /// Image of the basis state `s`: `P|s> = c · |s'>`.
    #[inline]
    pub fn act_on_basis(&self, s: usize) -> (usize, Complex64) {
        let sign = (self.z & s as u64).count_ones() & 1;
        let c = i_pow(self.phase + 2 * sign as u8);
        (s ^ self.x as usize, c)
    }

    /// `P v` in `O(D)`.
    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.n_sites() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: v.n_sites() });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); v.dim()];
        self.apply_into(v.amplitudes(), &mut out);
        Ok(StateVector::from_amplitudes_unchecked(self.n, out))
    }

    /// Writes `P v` into `out`; both slices must have length `2^n`.
    pub fn apply_into(&self, v: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(v.len(), 1 << self.n);
        debug_assert_eq!(out.len(), v.len());
        for (s, &amp) in v.iter().enumerate() {
            let (t, c) = self.act_on_basis(s);
            out[t] = c * amp;
        }
    }

    /// Dense `2^n × 2^n` matrix.
    pub fn to_dense(&self) -> Array2<Complex64> {
        let d = 1usize << self.n;
        let mut m = Array2::zeros((d, d));
        for s in 0..d {
            let (t, c) = self.act_on_basis(s);
            m[[t, s]] = c;
        }
        m
    }
}

impl std::ops::Mul for PauliString {
    type Output = PauliString;

    fn mul(self, rhs: PauliString) -> PauliString {
        self.try_mul(&rhs).expect("Pauli strings act on different numbers of sites")
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for PauliString {
    /// Prints the string with `Y` factors folded in, e.g. `-i·X0 Y2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // each Y site stored as X Z contributes a factor i back: X Z = -i Y
        let ys = (self.x & self.z).count_ones() as u8;
        let prefix = match (self.phase + 3 * (ys & 3)) & 3 {
            0 => "",
            1 => "i·",
            2 => "-",
            _ => "-i·",
        };
        f.write_str(prefix)?;
        if self.is_identity_up_to_phase() {
            return f.write_str("I");
        }
        let mut first = true;
        for k in 0..self.n {
            let c = match self.op_at(k) {
                Pauli::I => continue,
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            };
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{c}{k}")?;
            first = false;
        }
        Ok(())
    }
}

/// Linear combination `Σ_k c_k P_k` of Pauli strings on a common lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: Vec<(Complex64, PauliString)>,
}

impl PauliSum {
    pub fn new(n: usize) -> Self {
        PauliSum { n, terms: Vec::new() }
    }

    pub fn push(&mut self, coef: impl Into<Complex64>, p: PauliString) -> Result<()> {
        if p.n_sites() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: p.n_sites() });
        }
        self.terms.push((coef.into(), p));
        Ok(())
    }

    pub fn n_sites(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(Complex64, PauliString)] {
        &self.terms
    }

    /// Multiplies every coefficient by `factor`.
    pub fn scale(&mut self, factor: f64) {
        self.terms.iter_mut().for_each(|(c, _)| *c *= factor);
    }

    /// `Σ |c_k|²`; equals `M² / I` when the strings mutually anticommute and the
    /// coefficients are real.
    pub fn weight(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.norm_sqr()).sum()
    }

    /// Writes `M v` into `out`.
    pub fn apply_into(&self, v: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|o| *o = Complex64::new(0.0, 0.0));
        for (coef, p) in &self.terms {
            for (s, &amp) in v.iter().enumerate() {
                let (t, c) = p.act_on_basis(s);
                out[t] += coef * c * amp;
            }
        }
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.n_sites() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: v.n_sites() });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); v.dim()];
        self.apply_into(v.amplitudes(), &mut out);
        Ok(StateVector::from_amplitudes_unchecked(self.n, out))
    }

    pub fn to_dense(&self) -> Array2<Complex64> {
        let d = 1usize << self.n;
        let mut m = Array2::zeros((d, d));
        for (coef, p) in &self.terms {
            m.scaled_add(*coef, &p.to_dense());
        }
        m
    }
}

impl From<PauliString> for PauliSum {
    fn from(p: PauliString) -> Self {
        PauliSum { n: p.n_sites(), terms: vec![(Complex64::new(1.0, 0.0), p)] }
    }
}
