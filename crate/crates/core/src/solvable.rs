//! Closed-form quasienergies at the perfect-flip point `h T / 2 = π/2`.
//!
//! There the kick is `(-i)^N F` with `F` the global spin flip, which commutes
//! with the diagonal interaction factor. The cat states `|s⟩ ± F|s⟩` are
//! eigenstates with quasienergies `-φ(s)/T + Nπ/(2T)` and that value `+ π/T`,
//! `φ(s) = Σ_bonds θ_bond z_a z_b`.

use std::f64::consts::PI;

use crate::floquet::{bond_phases, fold_quasienergy, DriveParams};
use crate::lattice::Lattice;

/// Levels closer than this are merged when counting multiplicities.
const MERGE_TOL: f64 = 1e-12;

/// Full solvable-point spectrum of any lattice, ascending. The field in
/// `params` is ignored; the kick is taken to be exactly `π/2`.
pub fn solvable_point_spectrum(lattice: &Lattice, params: &DriveParams) -> Vec<f64> {
    let t = params.period;
    let shift = lattice.n_sites() as f64 * PI / (2.0 * t);
    let all = lattice.dim() - 1;
    let phases = bond_phases(lattice, params);
    let mut levels = Vec::with_capacity(phases.len());
    // one representative per flip orbit {s, F s}
    for (_, phi) in phases.iter().enumerate().filter(|(s, _)| *s < s ^ all) {
        let e = -phi / t + shift;
        levels.push(fold_quasienergy(e, t));
        levels.push(fold_quasienergy(e + PI / t, t));
    }
    levels.sort_by(f64::total_cmp);
    levels
}

/// `1 × 4` open chain: `ε = -(J_y / 2)(s_1 + s_2 + s_3)` and the same `+ π/T`,
/// with `s_k = z_k z_{k+1}`.
pub fn solvable_point_spectrum_1x4(j_y: f64, period: f64) -> Vec<(f64, usize)> {
    let mut levels = Vec::with_capacity(16);
    for signs in 0..8u32 {
        let sum: f64 = (0..3).map(|k| if signs >> k & 1 == 0 { 1.0 } else { -1.0 }).sum();
        let e = -0.5 * j_y * sum;
        levels.push(fold_quasienergy(e, period));
        levels.push(fold_quasienergy(e + PI / period, period));
    }
    group(levels)
}

/// `2 × 2` open plaquette: `ε = -(J_y / 2)(s_1 + s_2) - (J_x / 2)(1 + s_1 s_2) s_3`
/// and the same `+ π/T`, with `s_1, s_2` the rung parities of the two columns and
/// `s_3` the parity of the first leg.
pub fn solvable_point_spectrum_2x2(j_x: f64, j_y: f64, period: f64) -> Vec<(f64, usize)> {
    let mut levels = Vec::with_capacity(16);
    for signs in 0..8u32 {
        let s: Vec<f64> = (0..3).map(|k| if signs >> k & 1 == 0 { 1.0 } else { -1.0 }).collect();
        let e = -0.5 * j_y * (s[0] + s[1]) - 0.5 * j_x * (1.0 + s[0] * s[1]) * s[2];
        levels.push(fold_quasienergy(e, period));
        levels.push(fold_quasienergy(e + PI / period, period));
    }
    group(levels)
}

/// Expands `(level, multiplicity)` pairs into a flat ascending list.
pub fn expand(levels: &[(f64, usize)]) -> Vec<f64> {
    levels.iter().flat_map(|&(e, m)| std::iter::repeat_n(e, m)).collect()
}

fn group(mut levels: Vec<f64>) -> Vec<(f64, usize)> {
    levels.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, usize)> = Vec::new();
    for e in levels {
        match out.last_mut() {
            Some((last, m)) if (e - *last).abs() < MERGE_TOL => *m += 1,
            _ => out.push((e, 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_levels_and_degeneracies() {
        let t = 2.0;
        let j_y = 0.05;
        let levels = solvable_point_spectrum_1x4(j_y, t);
        assert_eq!(levels.iter().map(|l| l.1).sum::<usize>(), 16);
        let find = |e: f64| levels.iter().find(|l| (l.0 - e).abs() < 1e-12).map(|l| l.1);
        assert_eq!(find(-1.5 * j_y), Some(1));
        assert_eq!(find(-1.5 * j_y + PI / t), Some(1));
        // one domain wall: three placements
        assert_eq!(find(-0.5 * j_y), Some(3));
    }

    #[test]
    fn zero_coupling_collapses() {
        let levels = solvable_point_spectrum_1x4(0.0, 2.0);
        assert_eq!(levels, vec![(0.0, 8), (PI / 2.0, 8)]);
    }

    #[test]
    fn generic_enumeration_matches_closed_forms() {
        let t = 2.0;
        let p = DriveParams::new(0.13, 0.41, 0.0, t).unwrap();
        let chain = solvable_point_spectrum(&Lattice::open(1, 4).unwrap(), &p);
        let closed = expand(&solvable_point_spectrum_1x4(p.j_y, t));
        for (a, b) in chain.iter().zip(&closed) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
        let plaquette = solvable_point_spectrum(&Lattice::open(2, 2).unwrap(), &p);
        let closed = expand(&solvable_point_spectrum_2x2(p.j_x, p.j_y, t));
        for (a, b) in plaquette.iter().zip(&closed) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }
}
