use std::f64::consts::{FRAC_PI_2, PI};

use floquet_ladder::majorana::mode_residual;
use floquet_ladder::transfer::{
    classify_phase, mpm_ansatz_operator, mpm_recursion, mpm_seed, mpm_solution, pbc_line_check, transfer_matrix,
    PhaseBoundary, PhaseClass, PhaseLabel,
};
use floquet_ladder::{DriveParams, FloquetOperator, Lattice, ModeTarget};
use proptest::prelude::*;

/// Interior of the square, away from the singular lines and the boundaries.
fn generic_point() -> impl Strategy<Value = (f64, f64)> {
    (0.02..FRAC_PI_2 - 0.02, 0.02..FRAC_PI_2 - 0.02)
        .prop_filter("off the phase boundaries", |&(h, j)| (h + j - FRAC_PI_2).abs() > 1e-3 && (h - j).abs() > 1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eigenvalue_product_is_determinant((h, j) in generic_point()) {
        let tm = transfer_matrix(h, j).unwrap();
        let m = tm.matrix;
        // rounding of the determinant itself scales with its two products
        let scale = 1.0 + (m[0][0] * m[1][1]).abs() + (m[0][1] * m[1][0]).abs();
        prop_assert!((tm.e_plus * tm.e_minus - tm.determinant()).abs() < 1e-12 * scale);
        let trace = tm.matrix[0][0] + tm.matrix[1][1];
        prop_assert!((tm.e_plus + tm.e_minus - trace).abs() < 1e-12 * (1.0 + trace.abs()));
    }

    #[test]
    fn eigenvalues_are_unimodular_on_anti_diagonal(j in 0.001..FRAC_PI_2 - 0.001) {
        let tm = transfer_matrix(FRAC_PI_2 - j, j).unwrap();
        prop_assert!((tm.e_plus.abs() - 1.0).abs() < 1e-12);
        prop_assert!((tm.e_minus.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mpm_side_of_anti_diagonal((h, j) in generic_point()) {
        let tm = transfer_matrix(h, j).unwrap();
        if h + j > FRAC_PI_2 {
            prop_assert!(tm.e_minus.abs() < 1.0 && tm.e_plus.abs() > 1.0);
        } else {
            prop_assert!(tm.e_minus.abs() > 1.0 && tm.e_plus.abs() < 1.0);
        }
    }

    /// `(a_j, b_j) = E₋^{j−1} (a₁, b₁)`.
    #[test]
    fn recursion_is_geometric((h, j) in generic_point(), len in 2usize..30) {
        let (a, b) = mpm_recursion(h, j, len).unwrap();
        let tm = transfer_matrix(h, j).unwrap();
        let seed = mpm_seed(h, j).unwrap();
        for k in 0..len {
            let f = tm.e_minus.powi(k as i32);
            // forward stepping amplifies rounding along the other eigenvector
            let growth = tm.e_plus.abs().max(tm.e_minus.abs()).powi(k as i32);
            let scale = (1.0 + seed[0].abs() + seed[1].abs()) * growth;
            prop_assert!((a[k] - f * seed[0]).abs() < 1e-12 * scale);
            prop_assert!((b[k] - f * seed[1]).abs() < 1e-12 * scale);
        }
        let sol = mpm_solution(h, j, len).unwrap();
        prop_assert_eq!(sol.normalizable, tm.e_minus.abs() < 1.0);
    }

    #[test]
    fn phase_rule((h, j) in generic_point()) {
        let expect = match (j > h, h + j > FRAC_PI_2) {
            (false, false) => PhaseLabel::PM,
            (true, false) => PhaseLabel::ZeroSG,
            (false, true) => PhaseLabel::PiSG,
            (true, true) => PhaseLabel::ZeroPiPM,
        };
        prop_assert_eq!(classify_phase(h, j).unwrap(), PhaseClass::Phase(expect));
    }
}

#[test]
fn boundaries_are_tagged() {
    assert_eq!(classify_phase(0.5, 0.5).unwrap(), PhaseClass::Boundary(PhaseBoundary::Diagonal));
    assert_eq!(classify_phase(0.5, FRAC_PI_2 - 0.5).unwrap(), PhaseClass::Boundary(PhaseBoundary::AntiDiagonal));
    assert_eq!(classify_phase(PI / 4.0, PI / 4.0).unwrap(), PhaseClass::Boundary(PhaseBoundary::Both));
    assert!(classify_phase(0.0, 0.3).is_err());
    assert!(classify_phase(0.3, FRAC_PI_2).is_err());
}

#[test]
fn singular_lines_are_reported() {
    assert!(transfer_matrix(FRAC_PI_2, 0.3).is_err());
    assert!(transfer_matrix(0.3, 0.0).is_err());
}

/// The closed-form ansatz on a 10-site open chain is a π mode of the engine
/// deep inside the MPM phases and far from one where no MPM exists.
#[test]
fn ansatz_cross_check_on_chain() {
    let lat = Lattice::open(1, 10).unwrap();
    let residual = |h: f64, j: f64| {
        let u = FloquetOperator::build(&lat, &DriveParams::from_angles(0.0, j, h, 2.0).unwrap(), false).unwrap();
        mode_residual(&u, &mpm_ansatz_operator(&lat, h, j).unwrap(), ModeTarget::Pi).unwrap()
    };
    // MPM phases, with |E₋|^10 small
    for (h, j) in [(1.45, 0.35), (1.3, 0.6), (1.2, 0.9), (1.4, 1.2), (0.9, 1.4)] {
        let label = classify_phase(h, j).unwrap();
        assert!(matches!(label, PhaseClass::Phase(PhaseLabel::PiSG | PhaseLabel::ZeroPiPM)));
        let r = residual(h, j);
        assert!(r < 1e-3, "({h}, {j}) {label}: residual {r}");
    }
    // no MPM
    for (h, j) in [(0.3, 0.2), (0.6, 0.4), (0.2, 0.7), (0.3, 1.0)] {
        let label = classify_phase(h, j).unwrap();
        assert!(matches!(label, PhaseClass::Phase(PhaseLabel::PM | PhaseLabel::ZeroSG)));
        let r = residual(h, j);
        assert!(r > 0.1, "({h}, {j}) {label}: residual {r}");
    }
}

#[test]
fn phase_raster_layout() {
    let n = 40;
    let axis: Vec<f64> = (0..n).map(|k| (k as f64 + 0.5) / n as f64 * FRAC_PI_2).collect();
    let mut counts = [0usize; 4];
    for (a, &h) in axis.iter().enumerate() {
        for (b, &j) in axis.iter().enumerate() {
            let class = classify_phase(h, j).unwrap();
            match class {
                PhaseClass::Boundary(kind) => {
                    let expect = match (a + b == n - 1, a == b) {
                        (true, true) => PhaseBoundary::Both,
                        (true, false) => PhaseBoundary::AntiDiagonal,
                        (false, true) => PhaseBoundary::Diagonal,
                        (false, false) => panic!("({h}, {j}) tagged {kind:?} off the boundaries"),
                    };
                    assert_eq!(kind, expect);
                }
                PhaseClass::Phase(label) => {
                    assert!(a != b && a + b != n - 1);
                    counts[label as usize] += 1;
                    // every label agrees with its transfer-matrix side of the anti-diagonal
                    let tm = transfer_matrix(h, j).unwrap();
                    let mpm = matches!(label, PhaseLabel::PiSG | PhaseLabel::ZeroPiPM);
                    assert_eq!(mpm, tm.e_minus.abs() < 1.0);
                }
            }
        }
    }
    // the two lines cut the square into four congruent triangles
    let per_region = (n * n - 2 * n) / 4;
    assert_eq!(counts, [per_region; 4]);
}

#[test]
fn pbc_line_has_mpm_only_at_half_pi() {
    assert!(pbc_line_check(FRAC_PI_2).mpm_exists);
    assert!(!pbc_line_check(0.7).mpm_exists);
    let c = pbc_line_check(0.3);
    assert!((c.eigenvalues[0].norm() - 1.0).abs() < 1e-15);
}
