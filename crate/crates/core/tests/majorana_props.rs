mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use common::*;
use floquet_ladder::majorana::{
    corner_modes, corner_spectral_functions, gamma_pbc, mode_residual, sample_indices, verify_dictionary,
};
use floquet_ladder::{
    diagonalize, fold_quasienergy, majorana, Boundary, DriveParams, FloquetOperator, Lattice, MajoranaKind,
    ModeTarget, PauliString, PauliSum, QuasienergySpectrum, SpectralConfig,
};
use ndarray::Array2;
use num_complex::Complex64;
use proptest::prelude::*;

fn small_lattice() -> impl Strategy<Value = Lattice> {
    (1usize..=4, 1usize..=4)
        .prop_filter("at most 8 sites", |(nx, ny)| nx * ny <= 8)
        .prop_map(|(nx, ny)| Lattice::open(nx, ny).unwrap())
}

fn all_modes(lat: &Lattice) -> Vec<PauliString> {
    let mut out = Vec::new();
    for i in 1..=lat.n_x() {
        for j in 1..=lat.n_y() {
            for kind in [MajoranaKind::A, MajoranaKind::B] {
                out.push(majorana(lat, kind, i, j).unwrap().string);
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn modes_are_hermitian_involutions(lat in small_lattice()) {
        let d = lat.dim();
        for g in all_modes(&lat) {
            let m = g.to_dense();
            prop_assert!(max_matrix_diff(&m, &adjoint(&m)) < 1e-15);
            prop_assert!(max_matrix_diff(&m.dot(&m), &identity(d)) < 1e-15);
        }
    }

    #[test]
    fn modes_anticommute_densely(lat in small_lattice()) {
        let d = lat.dim();
        let mats: Vec<Array2<Complex64>> = all_modes(&lat).iter().map(|g| g.to_dense()).collect();
        for (a, ma) in mats.iter().enumerate() {
            for (b, mb) in mats.iter().enumerate().skip(a) {
                let anti = ma.dot(mb) + mb.dot(ma);
                let expect = if a == b { identity(d) * Complex64::new(2.0, 0.0) } else { Array2::zeros((d, d)) };
                prop_assert!(max_matrix_diff(&anti, &expect) < 1e-13);
            }
        }
    }

    #[test]
    fn dictionary_holds(lat in small_lattice()) {
        let report = verify_dictionary(&lat).unwrap();
        prop_assert!(report.max_deviation() < 1e-13, "{:?}", report);
    }

    /// `s` values do not depend on the phases attached to eigenvectors.
    #[test]
    fn spectral_functions_are_phase_invariant(seed in any::<u64>(), h in 0.1..0.95f64) {
        let lat = Lattice::open(2, 2).unwrap();
        let p = DriveParams::from_pi_units(0.05, 0.6, h, 2.0).unwrap();
        let spec = diagonalize(&FloquetOperator::build(&lat, &p, false).unwrap()).unwrap();
        let cfg = SpectralConfig { chi: 16, window: 0.01 };
        let lib = corner_spectral_functions(&spec, &lat, &cfg).unwrap();
        let mut r = rng(seed);
        let phases: Vec<Complex64> = (0..spec.dim())
            .map(|_| Complex64::from_polar(1.0, 2.0 * PI * rand::Rng::random::<f64>(&mut r)))
            .collect();
        let oracle = brute_force_spectral(&spec, &lat, &cfg, &phases);
        for (x, y) in [lib.s0_1, lib.s0_2, lib.spi_1, lib.spi_2].iter().zip(oracle.iter()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}

/// Windowed masses from dense mode matrices with eigenvectors rescaled by `phases`.
fn brute_force_spectral(
    spec: &QuasienergySpectrum,
    lat: &Lattice,
    cfg: &SpectralConfig,
    phases: &[Complex64],
) -> [f64; 4] {
    let d = spec.dim();
    let t = spec.period();
    let (g1, g2) = corner_modes(lat);
    let vecs: Vec<Vec<Complex64>> =
        (0..d).map(|n| spec.eigenvector(n).iter().map(|a| a * phases[n]).collect()).collect();
    let mut out = [0.0; 4];
    for (slot, g) in [g1.string, g2.string].iter().enumerate() {
        let m = g.to_dense();
        let (mut zero, mut pi, mut total) = (0.0, 0.0, 0.0);
        for k in 0..cfg.chi {
            let n = k * d / cfg.chi;
            let image = matvec(&m, &vecs[n]);
            for mm in 0..d {
                let amp: Complex64 = vecs[mm].iter().zip(&image).map(|(a, b)| a.conj() * b).sum();
                let w = amp.norm_sqr();
                total += w;
                let gap = fold_quasienergy(spec.quasienergies()[n] - spec.quasienergies()[mm], t);
                if gap.abs() <= cfg.window {
                    zero += w;
                }
                if (gap.abs() - PI / t).abs() <= cfg.window {
                    pi += w;
                }
            }
        }
        out[slot] = zero / total;
        out[2 + slot] = pi / total;
    }
    out
}

#[test]
fn spectral_functions_match_brute_force() {
    for (lat, h) in [(Lattice::open(2, 2).unwrap(), 0.8), (Lattice::periodic(3, 2).unwrap(), 0.5)] {
        let p = DriveParams::from_pi_units(0.05, 0.6, h, 2.0).unwrap();
        let spec = diagonalize(&FloquetOperator::build(&lat, &p, false).unwrap()).unwrap();
        for cfg in [SpectralConfig { chi: 4, window: 0.01 }, SpectralConfig { chi: lat.dim(), window: 0.3 }] {
            let lib = corner_spectral_functions(&spec, &lat, &cfg).unwrap();
            let oracle = brute_force_spectral(&spec, &lat, &cfg, &vec![ONE; spec.dim()]);
            for (x, y) in [lib.s0_1, lib.s0_2, lib.spi_1, lib.spi_2].iter().zip(oracle.iter()) {
                assert!((x - y).abs() < 1e-12, "{lib:?} vs {oracle:?}");
            }
        }
    }
}

/// `Σ_m |⟨ε_m|γ|ε_n⟩|² = 1` for every eigenstate.
#[test]
fn spectral_mass_is_unity() {
    let lat = Lattice::periodic(3, 2).unwrap();
    let p = DriveParams::from_pi_units(0.05, 0.6, 0.7, 2.0).unwrap();
    let spec = diagonalize(&FloquetOperator::build(&lat, &p, false).unwrap()).unwrap();
    let (g1, g2) = corner_modes(&lat);
    for g in [g1.string, g2.string] {
        let m = g.to_dense();
        for n in 0..spec.dim() {
            let image = matvec(&m, &spec.eigenvector(n).to_vec());
            let mass: f64 = (0..spec.dim())
                .map(|k| spec.eigenvector(k).iter().zip(&image).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr())
                .sum();
            assert!((mass - 1.0).abs() < 1e-10, "mass {mass}");
        }
    }
}

#[test]
fn ideal_flip_gives_exact_pi_windows() {
    let lat = Lattice::periodic(2, 2).unwrap();
    let p = DriveParams::from_angles(0.05 * FRAC_PI_2, 0.3 * PI, FRAC_PI_2, 2.0).unwrap();
    let spec = diagonalize(&FloquetOperator::build(&lat, &p, false).unwrap()).unwrap();
    let s = corner_spectral_functions(&spec, &lat, &SpectralConfig { chi: 16, window: 0.01 }).unwrap();
    assert!((s.spi_1 - 1.0).abs() < 1e-10 && (s.spi_2 - 1.0).abs() < 1e-10);
    assert!(s.s0_1 < 1e-10 && s.s0_2 < 1e-10);
}

/// Corner modes are exact π modes at `θ_h = π/2` on every lattice up to 12 spins.
#[test]
fn corner_modes_exact_at_perfect_flip() {
    for (nx, ny) in [(1, 2), (2, 2), (3, 2), (4, 2), (2, 3), (3, 3), (2, 4), (3, 4), (4, 3), (6, 2), (1, 12)] {
        for bc in [Boundary::Open, Boundary::Periodic] {
            let lat = Lattice::new(nx, ny, bc, bc, true).unwrap();
            let p = DriveParams::from_angles(0.37, 0.81, FRAC_PI_2, 2.0).unwrap();
            let u = FloquetOperator::build(&lat, &p, false).unwrap();
            let (g1, g2) = corner_modes(&lat);
            for g in [g1, g2] {
                let r = mode_residual(&u, &PauliSum::from(g.string), ModeTarget::Pi).unwrap();
                assert!(r < 1e-12, "{} {bc}: residual {r}", lat.label());
            }
        }
    }
}

#[test]
fn residual_matches_dense_conjugation() {
    let lat = Lattice::open(3, 2).unwrap();
    let p = DriveParams::from_pi_units(0.05, 0.6, 0.8, 2.0).unwrap();
    let u = FloquetOperator::build(&lat, &p, true).unwrap();
    let dense = u.dense().unwrap();
    let (g1, _) = corner_modes(&lat);
    let m = g1.string.to_dense();
    let conj = dense.dot(&m).dot(&adjoint(dense));
    for (target, sign) in [(ModeTarget::Pi, 1.0), (ModeTarget::Zero, -1.0)] {
        let oracle = (&conj + &(&m * Complex64::new(sign, 0.0))).iter().map(|c| c.norm()).fold(0.0, f64::max);
        let got = mode_residual(&u, &PauliSum::from(g1.string), target).unwrap();
        assert!((got - oracle).abs() < 1e-12);
    }
}

/// On the periodic chain at `θ_h = π/2` the end modes stay π modes and commute
/// with the boundary string.
#[test]
fn periodic_chain_keeps_pi_modes() {
    for n in 2..=10 {
        let lat = Lattice::new(1, n, Boundary::Open, Boundary::Periodic, true).unwrap();
        let p = DriveParams::from_angles(0.0, 0.63, FRAC_PI_2, 2.0).unwrap();
        let u = FloquetOperator::build(&lat, &p, false).unwrap();
        let boundary = gamma_pbc(&lat).unwrap();
        let (a1, bn) = corner_modes(&lat);
        for g in [a1.string, bn.string] {
            assert!(g.commutes_with(&boundary));
            assert!(mode_residual(&u, &PauliSum::from(g), ModeTarget::Pi).unwrap() < 1e-12);
        }
    }
}

#[test]
fn spectral_config_is_validated() {
    let lat = Lattice::open(2, 2).unwrap();
    let p = DriveParams::from_pi_units(0.05, 0.6, 0.8, 2.0).unwrap();
    let spec = diagonalize(&FloquetOperator::build(&lat, &p, false).unwrap()).unwrap();
    for cfg in [
        SpectralConfig { chi: 0, window: 0.01 },
        SpectralConfig { chi: 17, window: 0.01 },
        SpectralConfig { chi: 4, window: 0.0 },
        SpectralConfig { chi: 4, window: PI / 4.0 },
    ] {
        assert!(corner_spectral_functions(&spec, &lat, &cfg).is_err());
    }
    assert_eq!(sample_indices(16, 4), vec![0, 4, 8, 12]);
}
