//! Rectangular `n_x × n_y` lattice geometry.
//!
//! Sites are numbered column by column: `idx(i, j) = (i - 1) * n_y + (j - 1)` with
//! 1-based `i ∈ [1, n_x]` (column) and `j ∈ [1, n_y]` (position inside the column).
//! This is the order in which the Jordan-Wigner string is laid down, so every
//! Majorana string is a contiguous prefix of sites.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default hard cap on the number of spins.
pub const MAX_SITES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Open,
    Periodic,
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "open" | "obc" => Ok(Boundary::Open),
            "periodic" | "pbc" => Ok(Boundary::Periodic),
            other => Err(Error::InvalidArgument(format!(
                "unknown boundary condition `{other}` (expected open or periodic)"
            ))),
        }
    }
}

impl std::fmt::Display for Boundary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        })
    }
}

/// Which coupling a bond carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BondDir {
    /// Leg bond between neighbouring columns, coupling `J_x`.
    X,
    /// Rung bond inside a column, coupling `J_y`.
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub dir: BondDir,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    n_x: usize,
    n_y: usize,
    bc_x: Boundary,
    bc_y: Boundary,
    dedup: bool,
    bonds: Vec<Bond>,
}

impl Lattice {
    pub fn new(n_x: usize, n_y: usize, bc_x: Boundary, bc_y: Boundary, dedup: bool) -> Result<Self> {
        Self::with_cap(n_x, n_y, bc_x, bc_y, dedup, MAX_SITES)
    }

    /// Open boundaries in both directions, coincident bonds deduplicated.
    pub fn open(n_x: usize, n_y: usize) -> Result<Self> {
        Self::new(n_x, n_y, Boundary::Open, Boundary::Open, true)
    }

    pub fn periodic(n_x: usize, n_y: usize) -> Result<Self> {
        Self::new(n_x, n_y, Boundary::Periodic, Boundary::Periodic, true)
    }

    pub fn with_cap(
        n_x: usize,
        n_y: usize,
        bc_x: Boundary,
        bc_y: Boundary,
        dedup: bool,
        cap: usize,
    ) -> Result<Self> {
        if n_x == 0 || n_y == 0 {
            return Err(Error::ZeroDimension { n_x, n_y });
        }
        let sites = n_x.checked_mul(n_y).unwrap_or(usize::MAX);
        // the bit-mask representation limits us to 63 sites regardless of cap
        if sites > cap || sites > 63 {
            return Err(Error::SizeCap { sites, cap: cap.min(63) });
        }
        let mut lattice = Lattice {
            n_x,
            n_y,
            bc_x,
            bc_y,
            dedup,
            bonds: Vec::new(),
        };
        lattice.bonds = lattice.build_bonds();
        Ok(lattice)
    }

    fn build_bonds(&self) -> Vec<Bond> {
        let idx = |i: usize, j: usize| (i - 1) * self.n_y + (j - 1);
        let mut bonds = Vec::new();
        for i in 1..=self.n_x {
            for j in 1..self.n_y {
                bonds.push(Bond { a: idx(i, j), b: idx(i, j + 1), dir: BondDir::Y });
            }
            // n_y == 1 would be a self-bond, which is a constant phase
            if self.bc_y == Boundary::Periodic && self.n_y > 1 && !(self.dedup && self.n_y == 2) {
                bonds.push(Bond { a: idx(i, self.n_y), b: idx(i, 1), dir: BondDir::Y });
            }
        }
        for j in 1..=self.n_y {
            for i in 1..self.n_x {
                bonds.push(Bond { a: idx(i, j), b: idx(i + 1, j), dir: BondDir::X });
            }
            if self.bc_x == Boundary::Periodic && self.n_x > 1 && !(self.dedup && self.n_x == 2) {
                bonds.push(Bond { a: idx(self.n_x, j), b: idx(1, j), dir: BondDir::X });
            }
        }
        bonds
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn n_y(&self) -> usize {
        self.n_y
    }

    pub fn bc_x(&self) -> Boundary {
        self.bc_x
    }

    pub fn bc_y(&self) -> Boundary {
        self.bc_y
    }

    pub fn dedup(&self) -> bool {
        self.dedup
    }

    pub fn n_sites(&self) -> usize {
        self.n_x * self.n_y
    }

    /// Hilbert-space dimension `2^N`.
    pub fn dim(&self) -> usize {
        1usize << self.n_sites()
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    /// Linear index of the 1-based site `(i, j)`.
    pub fn site(&self, i: usize, j: usize) -> Result<usize> {
        if i == 0 || j == 0 || i > self.n_x || j > self.n_y {
            return Err(Error::SiteOutOfRange { i, j, n_x: self.n_x, n_y: self.n_y });
        }
        Ok((i - 1) * self.n_y + (j - 1))
    }

    /// Inverse of [`Lattice::site`].
    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx / self.n_y + 1, idx % self.n_y + 1)
    }

    pub fn label(&self) -> String {
        format!("{}x{}", self.n_x, self.n_y)
    }
}
