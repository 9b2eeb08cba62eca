//! Dense complex linear algebra sized for desk-scale Hilbert spaces.
//!
//! The central type is [`Operator`], a dense `dim × dim` complex matrix
//! carrying a [`Layout`] of local factor dimensions (qubits are factors of
//! dimension 2, truncated bosonic links factors of dimension 2Λ). Matrix
//! products route through `faer`'s gemm; eigendecompositions of Hermitian
//! operators also come from `faer`. Everything else (Kronecker products,
//! spectral norm by power iteration, the principal logarithm of a unitary,
//! eigenphase clustering) is implemented here on top of those kernels.

mod spectral;
mod statevec_kernel;

pub use spectral::{
    eigphases_unitary, expm_hermitian, principal_log_unitary, singular_values, spectral_norm,
    HermitianEig, UnitaryEigen,
};
pub use statevec_kernel::{apply_diag, apply_qubitwise, LocalPlan};

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Complex double-precision scalar used throughout.
pub type C64 = Complex<f64>;

/// Hard cap on the dense backend dimension (~1 GiB per matrix).
pub const DENSE_DIM_CAP: usize = 8192;

/// Errors from the dense kernel.
#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("dimension {0} exceeds the dense backend cap {DENSE_DIM_CAP}")]
    DimCapExceeded(usize),
    #[error("matrix is not Hermitian: max |H - H^dag| = {0:.3e}")]
    NotHermitian(f64),
    #[error("matrix is not unitary: max |U^dag U - I| = {0:.3e}")]
    NotUnitary(f64),
    #[error("eigensolver failed to converge")]
    EigNonConvergence,
    #[error("eigenphase within {0:.1e} of the +-pi branch cut")]
    BranchAmbiguity(f64),
}

/// Ordered local factor dimensions of a tensor-product Hilbert space.
///
/// The first factor is the most significant in basis-index arithmetic, so
/// `kron(a, b)` concatenates layouts and indexes as `i_a * b.dim + i_b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout(pub Vec<usize>);

impl Layout {
    /// `n` qubit factors.
    pub fn qubits(n: usize) -> Self {
        Layout(vec![2; n])
    }

    /// A single factor of dimension `dim`.
    pub fn single(dim: usize) -> Self {
        Layout(vec![dim])
    }

    /// Total Hilbert-space dimension, the product of all factor dimensions.
    pub fn dim(&self) -> usize {
        self.0.iter().product()
    }

    pub fn factors(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, other: &Layout) -> Layout {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Layout(v)
    }

    /// Stride of factor `f`: the product of the dimensions of all later factors.
    pub fn stride(&self, f: usize) -> usize {
        self.0[f + 1..].iter().product()
    }
}

/// Dense complex square matrix over a tensor-product layout, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    dim: usize,
    layout: Layout,
    data: Vec<C64>,
}

impl Operator {
    pub fn zeros(layout: Layout) -> Self {
        let dim = layout.dim();
        Operator {
            dim,
            layout,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(layout: Layout) -> Self {
        let mut m = Self::zeros(layout);
        for i in 0..m.dim {
            m.data[i * m.dim + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(layout: Layout, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let dim = layout.dim();
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Operator { dim, layout, data }
    }

    /// Row-major construction from a flat slice of `dim * dim` entries.
    pub fn from_rows(layout: Layout, entries: &[C64]) -> Self {
        let dim = layout.dim();
        assert_eq!(entries.len(), dim * dim, "entry count must be dim^2");
        Operator {
            dim,
            layout,
            data: entries.to_vec(),
        }
    }

    /// Diagonal operator from complex diagonal entries.
    pub fn from_diag(layout: Layout, diag: &[C64]) -> Self {
        let dim = layout.dim();
        assert_eq!(diag.len(), dim);
        let mut m = Self::zeros(layout);
        for i in 0..dim {
            m.data[i * dim + i] = diag[i];
        }
        m
    }

    /// Diagonal operator from real diagonal entries.
    pub fn from_diag_real(layout: Layout, diag: &[f64]) -> Self {
        let dim = layout.dim();
        assert_eq!(diag.len(), dim);
        let mut m = Self::zeros(layout);
        for i in 0..dim {
            m.data[i * dim + i] = C64::new(diag[i], 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] = v;
    }

    pub(crate) fn as_faer(&self) -> faer::MatRef<'_, C64> {
        faer::MatRef::from_row_major_slice(&self.data, self.dim, self.dim)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Operator {
        let d = self.dim;
        let mut out = Self::zeros(self.layout.clone());
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j].conj();
            }
        }
        out
    }

    /// Matrix product `self * rhs` through faer's gemm.
    pub fn mul(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "operator dimensions must match");
        let mut out = Self::zeros(self.layout.clone());
        matmul_into(&mut out, self, rhs);
        out
    }

    /// Matrix-vector product `self * v`.
    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        let d = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); d];
        for i in 0..d {
            let row = &self.data[i * d..(i + 1) * d];
            let mut acc = C64::new(0.0, 0.0);
            for (a, x) in row.iter().zip(v.iter()) {
                acc += a * x;
            }
            out[i] = acc;
        }
        out
    }

    /// Adjoint matrix-vector product `self^dag * v` without materializing the adjoint.
    pub fn matvec_adjoint(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        let d = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); d];
        for i in 0..d {
            let row = &self.data[i * d..(i + 1) * d];
            let vi = v[i];
            for (o, a) in out.iter_mut().zip(row.iter()) {
                *o += a.conj() * vi;
            }
        }
        out
    }

    pub fn add(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *a -= b;
        }
        out
    }

    pub fn add_assign(&mut self, rhs: &Operator) {
        assert_eq!(self.dim, rhs.dim);
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a += b;
        }
    }

    pub fn scale(&self, s: C64) -> Operator {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn scale_real(&self, s: f64) -> Operator {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max-entry deviation from Hermiticity, `max |A - A^dag|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                let dev = (self.data[i * d + j] - self.data[j * d + i].conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// Max-entry deviation from unitarity, `max |U^dag U - I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.dagger().mul(self);
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                worst = worst.max((p.data[i * d + j] - target).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }
}

/// `dst = a * b`. Reuses `dst`'s storage; all three must share dimensions.
pub fn matmul_into(dst: &mut Operator, a: &Operator, b: &Operator) {
    assert_eq!(a.dim, b.dim);
    assert_eq!(dst.dim, a.dim);
    let dim = a.dim;
    let out = faer::MatMut::from_row_major_slice_mut(&mut dst.data, dim, dim);
    faer::linalg::matmul::matmul(
        out,
        faer::Accum::Replace,
        a.as_faer(),
        b.as_faer(),
        C64::new(1.0, 0.0),
        faer::get_global_parallelism(),
    );
}

/// Kronecker product; layouts concatenate.
pub fn kron(a: &Operator, b: &Operator) -> Result<Operator, LinalgError> {
    let dim = a.dim * b.dim;
    if dim > DENSE_DIM_CAP {
        return Err(LinalgError::DimCapExceeded(dim));
    }
    let layout = a.layout.concat(&b.layout);
    let (da, db) = (a.dim, b.dim);
    let mut out = Operator::zeros(layout);
    for ia in 0..da {
        for ja in 0..da {
            let f = a.data[ia * da + ja];
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for ib in 0..db {
                let dst = (ia * db + ib) * dim + ja * db;
                let src = ib * db;
                for jb in 0..db {
                    out.data[dst + jb] = f * b.data[src + jb];
                }
            }
        }
    }
    Ok(out)
}

/// Commutator `[a, b] = ab - ba`.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator, LinalgError> {
    if a.dim != b.dim {
        return Err(LinalgError::DimMismatch(a.dim, b.dim));
    }
    Ok(a.mul(b).sub(&b.mul(a)))
}

/// Dense complex state vector over a tensor-product layout.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVec {
    layout: Layout,
    amps: Vec<C64>,
}

impl StateVec {
    pub fn new(layout: Layout, amps: Vec<C64>) -> Self {
        assert_eq!(amps.len(), layout.dim());
        StateVec { layout, amps }
    }

    /// Computational basis state `|index>`.
    pub fn basis_state(layout: Layout, index: usize) -> Self {
        let dim = layout.dim();
        assert!(index < dim);
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        StateVec { layout, amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            for a in self.amps.iter_mut() {
                *a /= n;
            }
        }
    }

    /// Inner product `<self|other>`.
    pub fn inner(&self, other: &StateVec) -> C64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &StateVec) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn apply_dense(&self, op: &Operator) -> StateVec {
        assert_eq!(op.dim(), self.dim());
        StateVec {
            layout: self.layout.clone(),
            amps: op.matvec(&self.amps),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::pauli;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn kron_identity_case() {
        let i2 = Operator::identity(Layout::qubits(1));
        let i4 = kron(&i2, &i2).unwrap();
        assert_eq!(i4.dim(), 4);
        assert_eq!(i4.layout().factors(), &[2, 2]);
        let expect = Operator::identity(Layout::qubits(2));
        assert!(i4.sub(&expect).max_abs() == 0.0);
    }

    #[test]
    fn kron_pauli_entries() {
        let xz = kron(&pauli::x(), &pauli::z()).unwrap();
        assert_eq!(xz.get(0, 2), c(1.0, 0.0));
        assert_eq!(xz.get(1, 3), c(-1.0, 0.0));
        assert_eq!(xz.get(0, 0), c(0.0, 0.0));
    }

    #[test]
    fn kron_diagonal_case() {
        let a = Operator::from_diag_real(Layout::single(2), &[1.0, 2.0]);
        let b = Operator::from_diag_real(Layout::single(2), &[3.0, 4.0]);
        let ab = kron(&a, &b).unwrap();
        let expect = Operator::from_diag_real(Layout(vec![2, 2]), &[3.0, 4.0, 6.0, 8.0]);
        assert!(ab.sub(&expect).max_abs() == 0.0);
    }

    #[test]
    fn kron_rejects_cap_overflow() {
        let big = Operator::identity(Layout::single(4096));
        let q = Operator::identity(Layout::qubits(2));
        assert!(matches!(
            kron(&big, &q),
            Err(LinalgError::DimCapExceeded(16384))
        ));
    }

    #[test]
    fn commutator_pauli_algebra() {
        // [X, Z] = -2iY
        let xz = commutator(&pauli::x(), &pauli::z()).unwrap();
        let expect = pauli::y().scale(c(0.0, -2.0));
        assert!(xz.sub(&expect).max_abs() < 1e-15);
    }

    #[test]
    fn commutator_self_is_zero() {
        let a = pauli::y();
        assert!(commutator(&a, &a).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn commutator_xx_yy_vanishes() {
        let xx = kron(&pauli::x(), &pauli::x()).unwrap();
        let yy = kron(&pauli::y(), &pauli::y()).unwrap();
        assert!(commutator(&xx, &yy).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn commutator_dim_mismatch() {
        let a = pauli::x();
        let b = Operator::identity(Layout::qubits(2));
        assert!(matches!(
            commutator(&a, &b),
            Err(LinalgError::DimMismatch(2, 4))
        ));
    }

    #[test]
    fn dagger_and_defects() {
        let h = pauli::y();
        assert_eq!(h.hermiticity_defect(), 0.0);
        assert!(h.is_unitary(1e-12));
        let mut skew = Operator::zeros(Layout::qubits(1));
        skew.set(0, 1, c(1.0, 0.0));
        assert_eq!(skew.hermiticity_defect(), 1.0);
    }

    #[test]
    fn statevec_basics() {
        let mut s = StateVec::new(Layout::qubits(1), vec![c(1.0, 0.0), c(1.0, 0.0)]);
        s.normalize();
        assert!((s.norm() - 1.0).abs() < 1e-15);
        let b = StateVec::basis_state(Layout::qubits(1), 0);
        assert!((s.fidelity(&b) - 0.5).abs() < 1e-15);
    }
}
