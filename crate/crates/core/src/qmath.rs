//! Small dense complex linear algebra.
//!
//! Everything here is sized for the three- and four-level problems of this
//! crate: a cyclic Jacobi eigensolver for Hermitian matrices, propagation of
//! a state through a spectral decomposition, and a fixed-step RK4 integrator
//! kept around as an independent check on the spectral route.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest matrix the eigensolver accepts.
pub const MAX_DIM: usize = 64;

/// Relative Hermiticity tolerance: `max |M - M^dagger| <= HERMITIAN_TOL * maxabs(M)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Normalization tolerance for input states.
pub const NORM_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 100;

#[derive(Clone, PartialEq)]
pub struct CVector(Vec<C64>);

impl CVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDimension("vector must be non-empty".into()));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("vector entry is NaN or infinite".into()));
        }
        Ok(Self(entries))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![C64::new(0.0, 0.0); dim];
        v[k] = C64::new(1.0, 0.0);
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &CVector) -> C64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, s: C64) -> CVector {
        CVector(self.0.iter().map(|z| z * s).collect())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_normalized(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::UnnormalizedState { norm });
        }
        Ok(())
    }
}

impl Index<usize> for CVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl fmt::Debug for CVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C64>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidDimension("matrix must be non-empty".into()));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("matrix entry is NaN or infinite".into()));
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Self {
        let mut m = Self::zeros(N);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = C64::new(x, 0.0);
            }
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &x) in values.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, j: usize) -> CVector {
        CVector((0..self.dim).map(|i| self[(i, j)]).collect())
    }

    pub fn adjoint(&self) -> CMatrix {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn conj(&self) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    m[(i, j)] += a * other[(k, j)];
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &CVector) -> Result<CVector> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        Ok(CVector(self.apply(v.entries())))
    }

    fn apply(&self, v: &[C64]) -> Vec<C64> {
        (0..self.dim)
            .map(|i| {
                self.data[i * self.dim..(i + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, other.dim, "add dimension mismatch");
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |M[i][j] - conj(M[j][i])|`.
    pub fn hermitian_check(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_check() <= HERMITIAN_TOL * self.max_abs()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self[(i, j)];
                for k in 0..m {
                    for l in 0..m {
                        out[(i * m + k, j * m + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for i in 0..self.dim {
            list.entry(&&self.data[i * self.dim..(i + 1) * self.dim]);
        }
        list.finish()
    }
}

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as the columns of `eigenvectors`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix {
        &self.eigenvectors
    }

    pub fn eigenvector(&self, i: usize) -> CVector {
        self.eigenvectors.column(i)
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(f(E)) V^dagger`.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = CMatrix::zeros(n);
        for (k, &e) in self.eigenvalues.iter().enumerate() {
            let w = f(e);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let a = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += a * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map_eigenvalues(|e| e)
    }

    /// `max |V^dagger V - I|`.
    pub fn orthonormality_error(&self) -> f64 {
        let v = &self.eigenvectors;
        v.adjoint()
            .matmul(v)
            .max_abs_diff(&CMatrix::identity(self.dim()))
    }
}

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
pub fn hermitian_eigendecompose(m: &CMatrix) -> Result<SpectralDecomposition> {
    let n = m.dim();
    if n == 0 || n > MAX_DIM {
        return Err(Error::InvalidDimension(format!(
            "eigensolver supports 1..={MAX_DIM}, got {n}"
        )));
    }
    let scale = m.max_abs();
    let deviation = m.hermitian_check();
    let tolerance = HERMITIAN_TOL * scale;
    if deviation > tolerance {
        return Err(Error::NonHermitianInput {
            deviation,
            tolerance,
        });
    }

    // work on the exactly Hermitian part
    let mut a = m.add(&m.adjoint()).scale(C64::new(0.5, 0.0));
    for i in 0..n {
        a[(i, i)].im = 0.0;
    }
    let mut v = CMatrix::identity(n);
    let negligible = f64::EPSILON * 1e-3 * scale;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let h = apq.norm();
                if h == 0.0 {
                    continue;
                }
                if h <= negligible {
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                rotated = true;
                jacobi_rotate(&mut a, &mut v, p, q);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));

    let eigenvalues = order.iter().map(|&k| a[(k, k)].re).collect();
    let mut eigenvectors = CMatrix::zeros(n);
    for (col, &k) in order.iter().enumerate() {
        let phase = canonical_phase(&v, k);
        for i in 0..n {
            eigenvectors[(i, col)] = v[(i, k)] * phase;
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// One two-sided rotation zeroing `a[p][q]`, accumulated into `v`.
fn jacobi_rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let n = a.dim();
    let apq = a[(p, q)];
    let h = apq.norm();
    let phase = apq / h;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * h);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + theta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    let s = t * c;

    // J = diag(1, e^{-i phi}) * [[c, s], [-s, c]] on the (p, q) plane
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = -phase.conj() * s;
    let jqq = phase.conj() * c;

    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, p)] = C64::new(app - t * h, 0.0);
    a[(q, q)] = C64::new(aqq + t * h, 0.0);
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);

    for k in 0..n {
        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Phase factor making the dominant entry of column `k` real and positive.
fn canonical_phase(v: &CMatrix, k: usize) -> C64 {
    let n = v.dim();
    let biggest = (0..n).map(|i| v[(i, k)].norm()).fold(0.0, f64::max);
    let lead = (0..n)
        .find(|&i| v[(i, k)].norm() >= biggest * (1.0 - 1e-9))
        .unwrap_or(0);
    let z = v[(lead, k)];
    if z.norm() == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        z.conj() / z.norm()
    }
}

/// `sum_i exp(-i E_i t) <phi_i|psi0> |phi_i>` with hbar = 1.
pub fn evolve_spectral(decomp: &SpectralDecomposition, psi0: &CVector, t: f64) -> Result<CVector> {
    let n = decomp.dim();
    if psi0.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: psi0.dim(),
        });
    }
    psi0.check_normalized()?;
    if !t.is_finite() {
        return Err(Error::NonFinite(format!("time {t}")));
    }
    let v = decomp.eigenvectors();
    let mut out = vec![C64::new(0.0, 0.0); n];
    for (k, &e) in decomp.eigenvalues().iter().enumerate() {
        let overlap: C64 = (0..n).map(|i| v[(i, k)].conj() * psi0[i]).sum();
        let coeff = overlap * C64::from_polar(1.0, -e * t);
        for (i, slot) in out.iter_mut().enumerate() {
            *slot += coeff * v[(i, k)];
        }
    }
    Ok(CVector(out))
}

/// Classic fixed-step RK4 for `d psi/dt = -i H psi`.
///
/// The interval is split into `ceil(t_final / dt)` equal steps, so the step
/// actually taken never exceeds `dt`. No renormalization is applied.
pub fn rk4_schrodinger(h: &CMatrix, psi0: &CVector, t_final: f64, dt: f64) -> Result<CVector> {
    if psi0.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            found: psi0.dim(),
        });
    }
    psi0.check_normalized()?;
    if !(dt > 0.0) || !dt.is_finite() || !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::InvalidStep { dt, t_final });
    }
    if t_final == 0.0 {
        return Ok(psi0.clone());
    }
    if dt > t_final {
        return Err(Error::InvalidStep { dt, t_final });
    }

    let steps = (t_final / dt).ceil() as usize;
    let step = t_final / steps as f64;
    let minus_i = C64::new(0.0, -1.0);
    let deriv = |psi: &[C64]| -> Vec<C64> { h.apply(psi).into_iter().map(|z| minus_i * z).collect() };
    let axpy = |psi: &[C64], k: &[C64], s: f64| -> Vec<C64> {
        psi.iter().zip(k).map(|(a, b)| a + b * s).collect()
    };

    let mut psi = psi0.entries().to_vec();
    for _ in 0..steps {
        let k1 = deriv(&psi);
        let k2 = deriv(&axpy(&psi, &k1, 0.5 * step));
        let k3 = deriv(&axpy(&psi, &k2, 0.5 * step));
        let k4 = deriv(&axpy(&psi, &k3, step));
        for i in 0..psi.len() {
            psi[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (step / 6.0);
        }
    }
    CVector::new(psi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h3(g1: f64, rddi: f64) -> CMatrix {
        CMatrix::from_real_rows([[0.0, g1, 0.0], [g1, 0.0, rddi], [0.0, rddi, 0.0]])
    }

    #[test]
    fn identity_spectrum() {
        let d = hermitian_eigendecompose(&CMatrix::identity(3)).unwrap();
        assert_eq!(d.eigenvalues(), &[1.0, 1.0, 1.0]);
        assert!(d.orthonormality_error() < 1e-15);
    }

    #[test]
    fn vacuum_rabi_doublet() {
        let d = hermitian_eigendecompose(&h3(1.0, 0.0)).unwrap();
        let e = d.eigenvalues();
        assert!((e[0] + 1.0).abs() < 1e-14);
        assert!(e[1].abs() < 1e-14);
        assert!((e[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rddi_shifts_doublet() {
        let d = hermitian_eigendecompose(&h3(1.0, 0.5)).unwrap();
        let omega = 1.25_f64.sqrt();
        let e = d.eigenvalues();
        assert!((e[0] + omega).abs() < 1e-14);
        assert!(e[1].abs() < 1e-14);
        assert!((e[2] - omega).abs() < 1e-14);
        assert!((e[2] - 1.118033989).abs() < 1e-9);
    }

    #[test]
    fn complex_hermitian_residual() {
        let i = C64::new(0.0, 1.0);
        let r = |x: f64| C64::new(x, 0.0);
        let m = CMatrix::from_rows(vec![
            vec![r(2.0), r(1.0) + i, r(0.0), i * 0.3],
            vec![r(1.0) - i, r(-1.0), r(0.5) * i, r(0.0)],
            vec![r(0.0), -r(0.5) * i, r(0.25), r(2.0)],
            vec![-i * 0.3, r(0.0), r(2.0), r(0.0)],
        ])
        .unwrap();
        let d = hermitian_eigendecompose(&m).unwrap();
        assert!(d.reconstruct().max_abs_diff(&m) <= 1e-12 * m.max_abs());
        assert!(d.orthonormality_error() <= 1e-12);
        assert!(d.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_real_rows([[0.0, 1.0], [0.5, 0.0]]);
        assert!(matches!(
            hermitian_eigendecompose(&m),
            Err(Error::NonHermitianInput { .. })
        ));
    }

    #[test]
    fn deterministic_output() {
        let m = h3(0.3, 0.7);
        assert_eq!(
            hermitian_eigendecompose(&m).unwrap(),
            hermitian_eigendecompose(&m).unwrap()
        );
    }

    #[test]
    fn zero_time_is_identity() {
        let d = hermitian_eigendecompose(&h3(1.0, 0.5)).unwrap();
        let psi0 = CVector::new(vec![
            C64::new(0.6, 0.0),
            C64::new(0.0, 0.8),
            C64::new(0.0, 0.0),
        ])
        .unwrap();
        let psi = evolve_spectral(&d, &psi0, 0.0).unwrap();
        assert!(psi.max_abs_diff(&psi0) <= 1e-14);
    }

    #[test]
    fn spectral_matches_closed_form() {
        let omega = 1.25_f64.sqrt();
        let t = 2.0 * std::f64::consts::PI / (3.0 * omega);
        let d = hermitian_eigendecompose(&h3(1.0, 0.5)).unwrap();
        let psi = evolve_spectral(&d, &CVector::basis(3, 0), t).unwrap();
        let want = CVector::new(vec![
            C64::new(-0.2, 0.0),
            C64::new(0.0, -(0.6_f64).sqrt()),
            C64::new(-0.6, 0.0),
        ])
        .unwrap();
        assert!(psi.max_abs_diff(&want) < 1e-13, "{psi:?}");
        assert!((psi[1].im + 0.774597).abs() < 1e-6);
    }

    #[test]
    fn dark_state_is_stationary() {
        let d = hermitian_eigendecompose(&h3(1.0, 0.5)).unwrap();
        let dark = d.eigenvector(1);
        for t in [0.5, 3.0, 40.0] {
            let psi = evolve_spectral(&d, &dark, t).unwrap();
            assert!(psi.max_abs_diff(&dark) < 1e-13);
        }
    }

    #[test]
    fn spectral_errors() {
        let d = hermitian_eigendecompose(&h3(1.0, 0.5)).unwrap();
        assert!(matches!(
            evolve_spectral(&d, &CVector::basis(2, 0), 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
        let unnormalized = CVector::from_real(&[1.0, 1.0, 0.0]).unwrap();
        assert!(matches!(
            evolve_spectral(&d, &unnormalized, 1.0),
            Err(Error::UnnormalizedState { .. })
        ));
    }

    #[test]
    fn rk4_agrees_with_spectral() {
        let omega = 1.25_f64.sqrt();
        let t = 2.0 * std::f64::consts::PI / (3.0 * omega);
        let h = h3(1.0, 0.5);
        let d = hermitian_eigendecompose(&h).unwrap();
        let psi0 = CVector::basis(3, 0);
        let exact = evolve_spectral(&d, &psi0, t).unwrap();
        let rk = rk4_schrodinger(&h, &psi0, t, 1e-3).unwrap();
        assert!(rk.max_abs_diff(&exact) <= 1e-8);
    }

    #[test]
    fn rk4_trivial_cases() {
        let psi0 = CVector::basis(3, 1);
        assert_eq!(rk4_schrodinger(&h3(1.0, 0.5), &psi0, 0.0, 0.1).unwrap(), psi0);
        let still = rk4_schrodinger(&CMatrix::zeros(3), &psi0, 5.0, 0.01).unwrap();
        assert_eq!(still, psi0);
    }

    #[test]
    fn rk4_step_validation() {
        let psi0 = CVector::basis(3, 0);
        let h = h3(1.0, 0.0);
        for (t, dt) in [(1.0, 0.0), (1.0, -0.1), (1.0, 2.0)] {
            assert!(matches!(
                rk4_schrodinger(&h, &psi0, t, dt),
                Err(Error::InvalidStep { .. })
            ));
        }
    }
}
