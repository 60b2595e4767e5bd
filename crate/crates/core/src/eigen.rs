//! Diagonalization of the Floquet operator.
//!
//! The default route exploits the factor structure `U = K Z` with `K` the
//! uniform x-rotation and `Z` diagonal. The similar matrix
//! `W = K^{1/2} Z K^{1/2}` is unitary *and* complex symmetric, so its real and
//! imaginary parts `C`, `S` are commuting real symmetric matrices sharing a real
//! orthonormal eigenbasis. That basis is obtained from one real symmetric
//! eigensolve of a generic combination `cos α C + sin α S`; near-degenerate
//! clusters of that combination are resolved with a small complex Schur
//! decomposition of `W` restricted to the cluster. Eigenvectors of `U` follow as
//! `K^{1/2}` applied to those of `W`, which keeps the basis exactly orthonormal
//! inside degenerate subspaces.
//!
//! The general route is a complex Schur decomposition of the dense `U`; for a
//! normal matrix the Schur vectors are an orthonormal eigenbasis.

use std::f64::consts::PI;
use std::os::raw::{c_char, c_int};

use ndarray::{Array2, ArrayView1, Axis};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floquet::{apply_uniform_x_rotation, fold_quasienergy, FloquetOperator, DENSE_MAX_SITES};
use crate::state::StateVector;

/// Generic mixing angle for the real symmetric eigensolve.
const MIX_ANGLE: f64 = 0.381_966_011_250_105_1;
/// Eigenvalues of the mixed matrix closer than this are treated as one cluster.
const CLUSTER_GAP: f64 = 1e-4;
/// Largest acceptable eigen-residual `‖U x − λ x‖`.
pub const RESIDUAL_LIMIT: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EigenMethod {
    /// Real symmetric route through `K^{1/2} Z K^{1/2}`.
    #[default]
    Symmetric,
    /// Complex Schur decomposition of the dense unitary.
    Schur,
}

#[derive(Debug, Clone)]
pub struct QuasienergySpectrum {
    period: f64,
    n_sites: usize,
    quasienergies: Vec<f64>,
    eigenvalues: Vec<Complex64>,
    /// Row `n` holds eigenvector `n`.
    vectors: Array2<Complex64>,
    residuals: Vec<f64>,
}

impl QuasienergySpectrum {
    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.quasienergies.len()
    }

    /// Ascending, folded into `(-π/T, π/T]`.
    pub fn quasienergies(&self) -> &[f64] {
        &self.quasienergies
    }

    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }

    pub fn eigenvector(&self, n: usize) -> ArrayView1<'_, Complex64> {
        self.vectors.row(n)
    }

    pub fn eigenvector_state(&self, n: usize) -> StateVector {
        StateVector::from_amplitudes_unchecked(self.n_sites, self.vectors.row(n).to_vec())
    }

    /// All eigenvectors, one per row.
    pub fn eigenvectors(&self) -> &Array2<Complex64> {
        &self.vectors
    }

    /// `max |⟨v_m|v_n⟩ − δ_mn|`; costs `O(D³)`.
    pub fn orthonormality_error(&self) -> f64 {
        let v = &self.vectors;
        let gram = v.mapv(|c| c.conj()).dot(&v.t());
        gram.indexed_iter()
            .map(|((a, b), g)| {
                let target = if a == b { 1.0 } else { 0.0 };
                (g - Complex64::new(target, 0.0)).norm()
            })
            .fold(0.0, f64::max)
    }
}

pub fn diagonalize(u: &FloquetOperator) -> Result<QuasienergySpectrum> {
    diagonalize_with(u, EigenMethod::default())
}

pub fn diagonalize_with(u: &FloquetOperator, method: EigenMethod) -> Result<QuasienergySpectrum> {
    let n = u.lattice().n_sites();
    if n > DENSE_MAX_SITES {
        return Err(Error::DenseCap { sites: n, cap: DENSE_MAX_SITES });
    }
    let vectors = match method {
        EigenMethod::Symmetric => symmetric_route(u)?,
        EigenMethod::Schur => {
            let dense = u.dense().ok_or(Error::DenseUnavailable)?;
            schur_vectors(dense)?
        }
    };
    finish(u, vectors)
}

/// Rayleigh quotients, residuals, folding, canonical phase and ordering.
fn finish(u: &FloquetOperator, mut vectors: Array2<Complex64>) -> Result<QuasienergySpectrum> {
    let d = u.dim();
    let period = u.period();
    let mut entries: Vec<(f64, usize, Complex64, f64)> = Vec::with_capacity(d);
    let mut buf = vec![Complex64::new(0.0, 0.0); d];
    for mut row in vectors.axis_iter_mut(Axis(0)) {
        let x = row.as_slice_mut().expect("rows are contiguous");
        let pivot = canonical_phase(x);
        buf.copy_from_slice(x);
        u.apply_in_place(&mut buf);
        let rq: Complex64 = x.iter().zip(&buf).map(|(a, b)| a.conj() * b).sum();
        let lambda = rq / rq.norm();
        let res = x
            .iter()
            .zip(&buf)
            .map(|(a, b)| (b - lambda * a).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let eps = fold_quasienergy(-lambda.arg() / period, period);
        entries.push((eps, pivot, lambda, res));
    }
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        entries[a].0.total_cmp(&entries[b].0).then(entries[a].1.cmp(&entries[b].1))
    });
    let sorted = vectors.select(Axis(0), &order);
    let worst = order.iter().map(|&k| entries[k].3).fold(0.0, f64::max);
    if !(worst < RESIDUAL_LIMIT) {
        return Err(Error::Eigensolver(format!(
            "largest eigen-residual {worst:e} exceeds {RESIDUAL_LIMIT:e}"
        )));
    }
    Ok(QuasienergySpectrum {
        period,
        n_sites: u.lattice().n_sites(),
        quasienergies: order.iter().map(|&k| entries[k].0).collect(),
        eigenvalues: order.iter().map(|&k| entries[k].2).collect(),
        vectors: sorted,
        residuals: order.iter().map(|&k| entries[k].3).collect(),
    })
}

/// Rotates `x` so that its first largest-modulus entry is real positive.
/// Returns the index of that entry.
fn canonical_phase(x: &mut [Complex64]) -> usize {
    let mut pivot = 0;
    let mut best = -1.0;
    for (i, c) in x.iter().enumerate() {
        // small slack so that numerically tied entries resolve to the lowest index
        if c.norm() > best * (1.0 + 1e-9) {
            best = c.norm();
            pivot = i;
        }
    }
    let phase = x[pivot].conj() / x[pivot].norm();
    x.iter_mut().for_each(|c| *c *= phase);
    x[pivot] = Complex64::new(x[pivot].norm(), 0.0);
    pivot
}

fn symmetric_route(u: &FloquetOperator) -> Result<Array2<Complex64>> {
    let n = u.lattice().n_sites();
    let d = u.dim();
    let half = u.params().theta_h() / 2.0;
    let zz = u.interaction_diagonal();

    // columns of W = K^{1/2} Z K^{1/2}; W is symmetric so rows and columns agree
    let (c, s) = (Complex64::new(half.cos(), 0.0), Complex64::new(0.0, -half.sin()));
    let table: Vec<Complex64> = (0..=n).map(|w| c.powu((n - w) as u32) * s.powu(w as u32)).collect();
    let (ca, sa) = (MIX_ANGLE.cos(), MIX_ANGLE.sin());
    let mut mixed = Array2::<f64>::zeros((d, d));
    let mut imag = Array2::<f64>::zeros((d, d));
    let mut col = vec![Complex64::new(0.0, 0.0); d];
    for b in 0..d {
        for (a, v) in col.iter_mut().enumerate() {
            *v = table[(a ^ b).count_ones() as usize] * zz[a];
        }
        apply_uniform_x_rotation(&mut col, n, half);
        let mut mrow = mixed.row_mut(b);
        let mut srow = imag.row_mut(b);
        for (a, w) in col.iter().enumerate() {
            mrow[a] = ca * w.re + sa * w.im;
            srow[a] = w.im;
        }
    }

    // rows of `vt` are the real eigenvectors of the mixed matrix
    let (m, vt) = symmetric_eigen(mixed)?;
    let proj = vt.dot(&imag);
    drop(imag);

    let mut vectors = Array2::<Complex64>::zeros((d, d));
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && m[end] - m[end - 1] < CLUSTER_GAP {
            end += 1;
        }
        let k = end - start;
        if k == 1 {
            for (dst, &src) in vectors.row_mut(start).iter_mut().zip(vt.row(start)) {
                *dst = Complex64::new(src, 0.0);
            }
        } else {
            // W restricted to the cluster: C_k + i S_k with C_k from the mixed eigenvalues
            let mut block = Array2::<Complex64>::zeros((k, k));
            let mut off_diag = 0.0f64;
            for p in 0..k {
                for q in 0..k {
                    let s_pq = proj.row(start + p).dot(&vt.row(start + q));
                    let m_pq = if p == q { m[start + p] } else { 0.0 };
                    block[[p, q]] = Complex64::new((m_pq - sa * s_pq) / ca, s_pq);
                    if p != q {
                        off_diag = off_diag.max(s_pq.abs());
                    }
                }
            }
            if off_diag < 1e-14 {
                for p in 0..k {
                    for (dst, &src) in vectors.row_mut(start + p).iter_mut().zip(vt.row(start + p)) {
                        *dst = Complex64::new(src, 0.0);
                    }
                }
            } else {
                // rows of `q` are the Schur vectors of the block
                let q = schur_vectors(&block)?;
                for p in 0..k {
                    let mut row = vectors.row_mut(start + p);
                    for r in 0..k {
                        let coef = q[[p, r]];
                        for (dst, &src) in row.iter_mut().zip(vt.row(start + r)) {
                            *dst += coef * src;
                        }
                    }
                }
            }
        }
        start = end;
    }
    drop(proj);
    drop(vt);

    for mut row in vectors.axis_iter_mut(Axis(0)) {
        apply_uniform_x_rotation(row.as_slice_mut().expect("rows are contiguous"), n, half);
    }
    Ok(vectors)
}

/// Eigen-decomposition of a real symmetric matrix. Returns ascending eigenvalues
/// and the eigenvectors as rows.
fn symmetric_eigen(mut a: Array2<f64>) -> Result<(Vec<f64>, Array2<f64>)> {
    let d = a.nrows();
    let n = to_int(d)?;
    let mut w = vec![0.0; d];
    let (jobz, uplo) = (b'V' as c_char, b'U' as c_char);
    let mut info: c_int = 0;
    let mut lwork_q = 0.0f64;
    let mut liwork_q: c_int = 0;
    let buf = a.as_slice_mut().expect("standard layout");
    unsafe {
        lapack_sys::dsyevd_(
            &jobz, &uplo, &n, buf.as_mut_ptr(), &n, w.as_mut_ptr(),
            &mut lwork_q, &-1, &mut liwork_q, &-1, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Eigensolver(format!("dsyevd workspace query failed (info = {info})")));
    }
    let lwork = lwork_q as c_int;
    let mut work = vec![0.0; lwork.max(1) as usize];
    let mut iwork = vec![0 as c_int; liwork_q.max(1) as usize];
    unsafe {
        lapack_sys::dsyevd_(
            &jobz, &uplo, &n, buf.as_mut_ptr(), &n, w.as_mut_ptr(),
            work.as_mut_ptr(), &lwork, iwork.as_mut_ptr(), &liwork_q, &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Eigensolver(format!("dsyevd did not converge (info = {info})")));
    }
    // column-major output read row-major: row k is eigenvector k
    Ok((w, a))
}

/// Schur vectors of a square complex matrix, returned as rows. For a normal
/// matrix these form an orthonormal eigenbasis.
fn schur_vectors(a: &Array2<Complex64>) -> Result<Array2<Complex64>> {
    let d = a.nrows();
    let n = to_int(d)?;
    // column-major copy
    let mut buf: Vec<Complex64> = a.t().iter().cloned().collect();
    let mut w = vec![Complex64::new(0.0, 0.0); d];
    let mut vs = vec![Complex64::new(0.0, 0.0); d * d];
    let mut rwork = vec![0.0; d];
    let mut bwork = vec![0 as c_int; d];
    let (jobvs, sort) = (b'V' as c_char, b'N' as c_char);
    let mut sdim: c_int = 0;
    let mut info: c_int = 0;
    let mut query = Complex64::new(0.0, 0.0);
    unsafe {
        lapack_sys::zgees_(
            &jobvs, &sort, None, &n, buf.as_mut_ptr().cast(), &n, &mut sdim,
            w.as_mut_ptr().cast(), vs.as_mut_ptr().cast(), &n,
            (&mut query as *mut Complex64).cast(), &-1, rwork.as_mut_ptr(),
            bwork.as_mut_ptr(), &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Eigensolver(format!("zgees workspace query failed (info = {info})")));
    }
    let lwork = (query.re as c_int).max(1);
    let mut work = vec![Complex64::new(0.0, 0.0); lwork as usize];
    unsafe {
        lapack_sys::zgees_(
            &jobvs, &sort, None, &n, buf.as_mut_ptr().cast(), &n, &mut sdim,
            w.as_mut_ptr().cast(), vs.as_mut_ptr().cast(), &n,
            work.as_mut_ptr().cast(), &lwork, rwork.as_mut_ptr(),
            bwork.as_mut_ptr(), &mut info,
        );
    }
    if info != 0 {
        return Err(Error::Eigensolver(format!("zgees did not converge (info = {info})")));
    }
    // column k of the column-major result is row k here
    Ok(Array2::from_shape_vec((d, d), vs).expect("square buffer"))
}

fn to_int(d: usize) -> Result<c_int> {
    c_int::try_from(d).map_err(|_| Error::InvalidArgument(format!("matrix dimension {d} too large")))
}

/// Folded quasienergy of a unit-modulus eigenvalue.
pub fn quasienergy_of(lambda: Complex64, period: f64) -> f64 {
    fold_quasienergy(-lambda.arg() / period, period)
}

/// Distance on the quasienergy circle, in `[0, π/T]`.
pub fn circular_distance(a: f64, b: f64, period: f64) -> f64 {
    fold_quasienergy(a - b, period).abs().min(PI / period)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::DriveParams;
    use crate::lattice::Lattice;

    fn check(lat: &Lattice, p: &DriveParams) {
        let u = FloquetOperator::build(lat, p, true).unwrap();
        let a = diagonalize_with(&u, EigenMethod::Symmetric).unwrap();
        let b = diagonalize_with(&u, EigenMethod::Schur).unwrap();
        assert!(a.max_residual() < 1e-12, "residual {}", a.max_residual());
        assert!(a.orthonormality_error() < 1e-12);
        assert!(b.orthonormality_error() < 1e-12);
        for (x, y) in a.quasienergies().iter().zip(b.quasienergies()) {
            assert!(circular_distance(*x, *y, p.period) < 1e-11, "{x} vs {y}");
        }
    }

    #[test]
    fn routes_agree_generic() {
        check(&Lattice::open(2, 2).unwrap(), &DriveParams::new(0.31, 0.77, 1.13, 2.0).unwrap());
        check(&Lattice::periodic(1, 5).unwrap(), &DriveParams::new(0.0, 0.6, 0.4, 1.7).unwrap());
    }

    #[test]
    fn routes_agree_degenerate() {
        // solvable point: eightfold-degenerate levels
        let p = DriveParams::from_angles(0.0, 0.0, PI / 2.0, 2.0).unwrap();
        check(&Lattice::open(1, 4).unwrap(), &p);
        let p = DriveParams::from_angles(0.1, 0.3, PI / 2.0, 2.0).unwrap();
        check(&Lattice::open(2, 2).unwrap(), &p);
    }

    #[test]
    fn identity_has_zero_quasienergies() {
        let lat = Lattice::open(1, 3).unwrap();
        let u = FloquetOperator::build(&lat, &DriveParams::new(0.0, 0.0, 0.0, 1.0).unwrap(), false).unwrap();
        let spec = diagonalize(&u).unwrap();
        assert!(spec.quasienergies().iter().all(|e| e.abs() < 1e-15));
    }

    #[test]
    fn schur_requires_dense() {
        let lat = Lattice::open(1, 3).unwrap();
        let u = FloquetOperator::build(&lat, &DriveParams::new(0.1, 0.2, 0.3, 1.0).unwrap(), false).unwrap();
        assert!(matches!(diagonalize_with(&u, EigenMethod::Schur), Err(Error::DenseUnavailable)));
    }

    #[test]
    fn canonical_phase_is_real_positive() {
        let mut x = vec![Complex64::new(0.1, 0.2), Complex64::new(0.0, -0.9), Complex64::new(0.3, 0.0)];
        let p = canonical_phase(&mut x);
        assert_eq!(p, 1);
        assert!(x[1].im == 0.0 && x[1].re > 0.0);
    }
}
