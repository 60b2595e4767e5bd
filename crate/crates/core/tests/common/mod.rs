//! Independent dense reference implementations shared by the integration tests.
#![allow(dead_code)]

use floquet_ladder::{BondDir, DriveParams, Lattice, Pauli};
use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// 2×2 matrix of a single-site Pauli in the (up, down) basis.
pub fn pauli_matrix(p: Pauli) -> [[Complex64; 2]; 2] {
    match p {
        Pauli::I => [[ONE, ZERO], [ZERO, ONE]],
        Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
        Pauli::Y => [[ZERO, -I], [I, ZERO]],
        Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
    }
}

/// Kronecker product with site 0 as the least significant factor.
pub fn kron_sites(ops: &[[[Complex64; 2]; 2]]) -> Array2<Complex64> {
    let mut m = Array2::from_elem((1, 1), ONE);
    for op in ops {
        let d = m.nrows();
        let mut next = Array2::zeros((2 * d, 2 * d));
        for (a, row) in op.iter().enumerate() {
            for (b, &v) in row.iter().enumerate() {
                if v == ZERO {
                    continue;
                }
                for ((r, c), &x) in m.indexed_iter() {
                    next[[a * d + r, b * d + c]] = v * x;
                }
            }
        }
        m = next;
    }
    m
}

pub fn dense_string(ops: &[Pauli], coef: Complex64) -> Array2<Complex64> {
    let mats: Vec<_> = ops.iter().map(|&p| pauli_matrix(p)).collect();
    kron_sites(&mats) * coef
}

/// Applies a 2×2 matrix to one site of a state vector.
pub fn apply_site(v: &mut [Complex64], site: usize, m: &[[Complex64; 2]; 2]) {
    let stride = 1usize << site;
    for s in 0..v.len() {
        if s & stride == 0 {
            let (a, b) = (v[s], v[s | stride]);
            v[s] = m[0][0] * a + m[0][1] * b;
            v[s | stride] = m[1][0] * a + m[1][1] * b;
        }
    }
}

pub fn matvec(m: &Array2<Complex64>, v: &[Complex64]) -> Vec<Complex64> {
    m.outer_iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn max_matrix_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn adjoint(m: &Array2<Complex64>) -> Array2<Complex64> {
    m.t().mapv(|c| c.conj())
}

pub fn identity(d: usize) -> Array2<Complex64> {
    Array2::from_shape_fn((d, d), |(a, b)| if a == b { ONE } else { ZERO })
}

/// Dense Floquet operator assembled independently: a diagonal `exp(+i Σ θ z z)`
/// followed by `exp(-i θ_h σ_x)` on each site, built by Kronecker products.
pub fn dense_floquet(lattice: &Lattice, params: &DriveParams) -> Array2<Complex64> {
    let n = lattice.n_sites();
    let d = 1usize << n;
    let th = params.theta_h();
    let rot = [
        [Complex64::new(th.cos(), 0.0), Complex64::new(0.0, -th.sin())],
        [Complex64::new(0.0, -th.sin()), Complex64::new(th.cos(), 0.0)],
    ];
    let kick = kron_sites(&vec![rot; n]);
    let mut diag = vec![0.0; d];
    for (s, phase) in diag.iter_mut().enumerate() {
        for bond in lattice.bonds() {
            let za = if s >> bond.a & 1 == 0 { 1.0 } else { -1.0 };
            let zb = if s >> bond.b & 1 == 0 { 1.0 } else { -1.0 };
            let theta = match bond.dir {
                BondDir::X => params.theta_x(),
                BondDir::Y => params.theta_y(),
            };
            *phase += theta * za * zb;
        }
    }
    Array2::from_shape_fn((d, d), |(a, b)| kick[[a, b]] * Complex64::from_polar(1.0, diag[b]))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> =
        (0..dim).map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)).collect();
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|c| *c /= norm);
    v
}

/// Matrix exponential by scaling and squaring with a Taylor series.
pub fn expm(a: &Array2<Complex64>) -> Array2<Complex64> {
    let norm = a.iter().map(|c| c.norm()).sum::<f64>();
    let squarings = norm.log2().ceil().max(0.0) as u32 + 4;
    let scaled = a / Complex64::new(2f64.powi(squarings as i32), 0.0);
    let d = a.nrows();
    let mut result = identity(d);
    let mut term = identity(d);
    for k in 1..40 {
        term = term.dot(&scaled) / Complex64::new(k as f64, 0.0);
        result = result + &term;
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    result
}

/// `(min, max)` of `| |e_n − e_m| − π/T |` with `m` taken over all levels, by
/// brute force on the circle.
pub fn brute_force_spacing(eps: &[f64], period: f64) -> (f64, f64) {
    let zone = 2.0 * std::f64::consts::PI / period;
    let half = std::f64::consts::PI / period;
    let mut devs = Vec::new();
    for (n, &e) in eps.iter().enumerate() {
        let mut best = f64::INFINITY;
        for (m, &f) in eps.iter().enumerate() {
            if m == n {
                continue;
            }
            let mut gap = (e - f).rem_euclid(zone);
            if gap > half {
                gap = zone - gap;
            }
            best = best.min((gap - half).abs());
        }
        devs.push(best);
    }
    (devs.iter().cloned().fold(f64::INFINITY, f64::min), devs.iter().cloned().fold(0.0, f64::max))
}
