//! Dense complex linear algebra on a truncated Fock basis.
//!
//! States and operators carry their dimension explicitly. Multi-mode states
//! are Kronecker products with the first subsystem most significant, so the
//! joint index of `|n_0, n_1, ...⟩` is `(n_0 * d_1 + n_1) * d_2 + ...`.
//!
//! Rotation-type operators are diagonal in the Fock basis and are stored as
//! [`FockOperator::Diagonal`]; products, sandwiches and expectation values
//! take a fast path whenever both sides are diagonal.

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Norm tolerance for a vector to count as normalized.
pub const NORM_TOL: f64 = 1e-10;
/// Largest probability mass a truncated coherent state may lose.
pub const COHERENT_LEAKAGE_TOL: f64 = 1e-8;
/// Largest `|A - A†|` entry that is symmetrized away before eigensolves.
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const UNITARY_TOL: f64 = 1e-8;
pub const PROJECTOR_TOL: f64 = 1e-8;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Default Fock truncation for an experiment whose largest mean photon
/// number is `n_bar`: `ceil(n̄ + 8√n̄ + 20)`.
pub fn default_dim(n_bar: f64) -> usize {
    let n_bar = n_bar.max(0.0);
    (n_bar + 8.0 * n_bar.sqrt() + 20.0).ceil() as usize
}

/// `e^{iπ·num/den}` with the numerator reduced modulo `2·den`, so integer
/// powers of rotation operators close exactly.
pub(crate) fn root_of_unity(num: u64, den: u64) -> C64 {
    let r = num % (2 * den);
    C64::from_polar(1.0, PI * r as f64 / den as f64)
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Split `dims` around `mode` into (product before, dims[mode], product after).
pub(crate) fn strides(dims: &[usize], mode: usize) -> (usize, usize, usize) {
    let left = dims[..mode].iter().product();
    let right = dims[mode + 1..].iter().product();
    (left, dims[mode], right)
}

// ---------------------------------------------------------------------------
// FockVector

#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: DVector<C64>,
    truncation_loss: f64,
}

impl FockVector {
    pub fn new(amps: DVector<C64>) -> Self {
        Self {
            amps,
            truncation_loss: 0.0,
        }
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Self {
        Self::new(DVector::from_vec(amps))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(DVector::zeros(dim))
    }

    /// Fock ket `|n⟩`.
    pub fn basis(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::InvalidParameter(format!(
                "Fock level {n} outside truncation {dim}"
            )));
        }
        let mut v = DVector::zeros(dim);
        v[n] = ONE;
        Ok(Self::new(v))
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &DVector<C64> {
        &self.amps
    }

    pub fn amp(&self, n: usize) -> C64 {
        self.amps[n]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if !(n2 > 1e-300) {
            return Err(Error::InvalidParameter("cannot normalize a null vector".into()));
        }
        Ok(Self {
            amps: self.amps.unscale(n2.sqrt()),
            truncation_loss: self.truncation_loss,
        })
    }

    /// Population of the highest retained Fock level, `|amps_{D-1}|²`.
    pub fn leakage(&self) -> f64 {
        self.amps.iter().next_back().map_or(0.0, |z| z.norm_sqr())
    }

    /// Probability mass discarded by truncation before renormalization
    /// (nonzero only for analytically infinite states such as `|α⟩`).
    pub fn truncation_loss(&self) -> f64 {
        self.truncation_loss
    }

    /// `⟨self|other⟩`.
    ///
    /// # Panics
    /// If the dimensions differ.
    pub fn inner(&self, other: &FockVector) -> C64 {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        self.amps.dotc(&other.amps)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.amps.map(|z| z * c))
    }

    pub fn mean_photon_number(&self) -> f64 {
        let num: f64 = self
            .amps
            .iter()
            .enumerate()
            .map(|(n, z)| n as f64 * z.norm_sqr())
            .sum();
        num / self.norm_sqr()
    }

    /// Population outside the Fock levels `n ≡ residue (mod modulus)`.
    pub fn residue_leakage(&self, modulus: usize, residue: usize) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(n, _)| n % modulus != residue)
            .map(|(_, z)| z.norm_sqr())
            .sum()
    }

    /// Pure-state density matrix `|ψ⟩⟨ψ|` (not renormalized).
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            dims: vec![self.dim()],
            mat: &self.amps * self.amps.adjoint(),
        }
    }

    /// Kronecker product `|self⟩ ⊗ |other⟩`.
    pub fn tensor(&self, other: &FockVector) -> FockVector {
        Self::new(self.amps.kronecker(&other.amps))
    }

    pub fn max_amp_diff(&self, other: &FockVector) -> f64 {
        assert_eq!(self.dim(), other.dim(), "vector comparison dimension mismatch");
        self.amps
            .iter()
            .zip(other.amps.iter())
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).norm()))
    }
}

impl Add for &FockVector {
    type Output = FockVector;

    fn add(self, rhs: &FockVector) -> FockVector {
        assert_eq!(self.dim(), rhs.dim(), "vector sum dimension mismatch");
        FockVector::new(&self.amps + &rhs.amps)
    }
}

impl Mul<C64> for &FockVector {
    type Output = FockVector;

    fn mul(self, rhs: C64) -> FockVector {
        self.scale(rhs)
    }
}

// ---------------------------------------------------------------------------
// FockOperator

#[derive(Debug, Clone, PartialEq)]
pub enum FockOperator {
    /// Operator diagonal in the (joint) Fock basis.
    Diagonal(DVector<C64>),
    Dense(DMatrix<C64>),
}

impl FockOperator {
    pub fn identity(dim: usize) -> Self {
        Self::Diagonal(DVector::from_element(dim, ONE))
    }

    pub fn from_diagonal<I: IntoIterator<Item = C64>>(entries: I) -> Self {
        Self::Diagonal(DVector::from_vec(entries.into_iter().collect()))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Diagonal(d) => d.len(),
            Self::Dense(m) => m.nrows(),
        }
    }

    pub fn as_diagonal(&self) -> Option<&DVector<C64>> {
        match self {
            Self::Diagonal(d) => Some(d),
            Self::Dense(_) => None,
        }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        match self {
            Self::Diagonal(d) => DMatrix::from_diagonal(d),
            Self::Dense(m) => m.clone(),
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        match self {
            Self::Diagonal(d) => {
                if i == j {
                    d[i]
                } else {
                    ZERO
                }
            }
            Self::Dense(m) => m[(i, j)],
        }
    }

    pub fn dagger(&self) -> Self {
        match self {
            Self::Diagonal(d) => Self::Diagonal(d.map(|z| z.conj())),
            Self::Dense(m) => Self::Dense(m.adjoint()),
        }
    }

    pub fn trace(&self) -> C64 {
        match self {
            Self::Diagonal(d) => d.iter().sum(),
            Self::Dense(m) => m.trace(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        match self {
            Self::Diagonal(d) => Self::Diagonal(d.map(|z| z * c)),
            Self::Dense(m) => Self::Dense(m.map(|z| z * c)),
        }
    }

    /// Operator product `self · rhs`.
    ///
    /// # Panics
    /// If the dimensions differ.
    pub fn compose(&self, rhs: &FockOperator) -> FockOperator {
        assert_eq!(self.dim(), rhs.dim(), "operator product dimension mismatch");
        match (self, rhs) {
            (Self::Diagonal(a), Self::Diagonal(b)) => Self::Diagonal(a.component_mul(b)),
            (Self::Diagonal(a), Self::Dense(b)) => Self::Dense(scale_rows(b, a)),
            (Self::Dense(a), Self::Diagonal(b)) => Self::Dense(scale_cols(a, b)),
            (Self::Dense(a), Self::Dense(b)) => Self::Dense(a * b),
        }
    }

    pub fn sum(&self, rhs: &FockOperator) -> FockOperator {
        assert_eq!(self.dim(), rhs.dim(), "operator sum dimension mismatch");
        match (self, rhs) {
            (Self::Diagonal(a), Self::Diagonal(b)) => Self::Diagonal(a + b),
            _ => Self::Dense(self.to_dense() + rhs.to_dense()),
        }
    }

    pub fn pow(&self, k: u32) -> FockOperator {
        match self {
            Self::Diagonal(d) => Self::Diagonal(d.map(|z| z.powu(k))),
            Self::Dense(_) => {
                let mut acc = FockOperator::identity(self.dim());
                for _ in 0..k {
                    acc = acc.compose(self);
                }
                acc
            }
        }
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        assert_eq!(self.dim(), v.dim(), "operator/vector dimension mismatch");
        match self {
            Self::Diagonal(d) => FockVector::new(d.component_mul(v.amps())),
            Self::Dense(m) => FockVector::new(m * v.amps()),
        }
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &FockOperator) -> FockOperator {
        match (self, rhs) {
            (Self::Diagonal(a), Self::Diagonal(b)) => Self::Diagonal(a.kronecker(b)),
            _ => Self::Dense(self.to_dense().kronecker(&rhs.to_dense())),
        }
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        match self {
            Self::Diagonal(d) => d.iter().fold(0.0_f64, |acc, z| acc.max(2.0 * z.im.abs())),
            Self::Dense(m) => max_abs(&(m - m.adjoint())),
        }
    }

    pub fn unitarity_deviation(&self) -> f64 {
        match self {
            Self::Diagonal(d) => d
                .iter()
                .fold(0.0_f64, |acc, z| acc.max((z.norm_sqr() - 1.0).abs())),
            Self::Dense(m) => {
                let n = m.nrows();
                max_abs(&(m.adjoint() * m - DMatrix::<C64>::identity(n, n)))
            }
        }
    }

    pub fn idempotency_deviation(&self) -> f64 {
        match self {
            Self::Diagonal(d) => d.iter().fold(0.0_f64, |acc, z| acc.max((z * z - z).norm())),
            Self::Dense(m) => max_abs(&(m * m - m)),
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_deviation() <= HERMITIAN_TOL
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_deviation() <= UNITARY_TOL
    }

    pub fn is_projector(&self) -> bool {
        self.is_hermitian() && self.idempotency_deviation() <= PROJECTOR_TOL
    }

    /// Largest entry of `[self, rhs]`.
    pub fn commutator_deviation(&self, rhs: &FockOperator) -> f64 {
        let ab = self.compose(rhs).to_dense();
        let ba = rhs.compose(self).to_dense();
        max_abs(&(ab - ba))
    }

    pub fn max_abs_diff(&self, rhs: &FockOperator) -> f64 {
        match (self, rhs) {
            (Self::Diagonal(a), Self::Diagonal(b)) => {
                a.iter().zip(b.iter()).fold(0.0_f64, |acc, (x, y)| acc.max((x - y).norm()))
            }
            _ => max_abs(&(self.to_dense() - rhs.to_dense())),
        }
    }
}

impl Mul for &FockOperator {
    type Output = FockOperator;

    fn mul(self, rhs: &FockOperator) -> FockOperator {
        self.compose(rhs)
    }
}

fn scale_rows(m: &DMatrix<C64>, d: &DVector<C64>) -> DMatrix<C64> {
    let mut out = m.clone();
    for (i, mut row) in out.row_iter_mut().enumerate() {
        row *= d[i];
    }
    out
}

fn scale_cols(m: &DMatrix<C64>, d: &DVector<C64>) -> DMatrix<C64> {
    let mut out = m.clone();
    for (j, mut col) in out.column_iter_mut().enumerate() {
        col *= d[j];
    }
    out
}

/// `op · m`.
fn left_mul(op: &FockOperator, m: &DMatrix<C64>) -> DMatrix<C64> {
    match op {
        FockOperator::Diagonal(d) => scale_rows(m, d),
        FockOperator::Dense(a) => a * m,
    }
}

/// `m · op†`.
fn right_mul_adjoint(m: &DMatrix<C64>, op: &FockOperator) -> DMatrix<C64> {
    match op {
        FockOperator::Diagonal(d) => scale_cols(m, &d.map(|z| z.conj())),
        FockOperator::Dense(a) => m * a.adjoint(),
    }
}

/// Operator acting on subsystem `mode` of a product space, identity elsewhere.
pub fn embed(op: &FockOperator, dims: &[usize], mode: usize) -> Result<FockOperator> {
    if mode >= dims.len() {
        return Err(Error::InvalidParameter(format!(
            "mode {mode} outside a {}-mode system",
            dims.len()
        )));
    }
    if op.dim() != dims[mode] {
        return Err(Error::DimensionMismatch {
            expected: dims[mode],
            got: op.dim(),
        });
    }
    let (left, _, right) = strides(dims, mode);
    Ok(FockOperator::identity(left)
        .kron(op)
        .kron(&FockOperator::identity(right)))
}

// ---------------------------------------------------------------------------
// DensityMatrix

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    mat: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(dims: Vec<usize>, mat: DMatrix<C64>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::InvalidParameter("subsystem dimensions must be positive".into()));
        }
        if mat.nrows() != total || mat.ncols() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                got: mat.nrows().max(mat.ncols()),
            });
        }
        Ok(Self { dims, mat })
    }

    pub fn single_mode(mat: DMatrix<C64>) -> Result<Self> {
        let n = mat.nrows();
        Self::new(vec![n], mat)
    }

    pub fn from_pure(v: &FockVector) -> Self {
        v.density()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.mat.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        max_abs(&(&self.mat - self.mat.adjoint()))
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.mat)
    }

    /// Hermitian within 1e-10, unit trace within 1e-8 and eigenvalues ≥ -1e-8.
    pub fn is_valid(&self) -> bool {
        let tr = self.trace();
        if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
            return false;
        }
        match self.eigenvalues() {
            Ok(ev) => ev.iter().all(|&e| e >= -1e-8),
            Err(_) => false,
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let tr = self.trace().re;
        if !(tr > 1e-300) {
            return Err(Error::ProjectionImpossible(tr));
        }
        Ok(Self {
            dims: self.dims.clone(),
            mat: self.mat.unscale(tr),
        })
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            dims: self.dims.clone(),
            mat: self.mat.scale(c),
        }
    }

    fn check_operator(&self, op: &FockOperator) -> Result<()> {
        if op.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: op.dim(),
            });
        }
        Ok(())
    }

    /// `U ρ V†`. The result is generally not Hermitian.
    pub fn sandwich(&self, u: &FockOperator, v: &FockOperator) -> Result<Self> {
        self.check_operator(u)?;
        self.check_operator(v)?;
        let mat = match (u, v) {
            (FockOperator::Diagonal(du), FockOperator::Diagonal(dv)) => {
                DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
                    du[i] * self.mat[(i, j)] * dv[j].conj()
                })
            }
            _ => right_mul_adjoint(&left_mul(u, &self.mat), v),
        };
        Ok(Self {
            dims: self.dims.clone(),
            mat,
        })
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, u: &FockOperator) -> Result<Self> {
        self.sandwich(u, u)
    }

    /// `Tr[O ρ]`.
    pub fn expectation(&self, op: &FockOperator) -> Result<C64> {
        self.check_operator(op)?;
        Ok(match op {
            FockOperator::Diagonal(d) => d
                .iter()
                .enumerate()
                .map(|(i, z)| z * self.mat[(i, i)])
                .sum(),
            FockOperator::Dense(m) => {
                let mut acc = ZERO;
                for i in 0..self.dim() {
                    for j in 0..self.dim() {
                        acc += m[(i, j)] * self.mat[(j, i)];
                    }
                }
                acc
            }
        })
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn overlap_with_pure(&self, psi: &FockVector) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: psi.dim(),
            });
        }
        Ok(psi.amps().dotc(&(&self.mat * psi.amps())).re)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Self {
            dims,
            mat: self.mat.kronecker(&other.mat),
        }
    }

    /// Trace out subsystem `mode`.
    pub fn partial_trace(&self, mode: usize) -> Result<DensityMatrix> {
        if self.dims.len() < 2 {
            return Err(Error::InvalidParameter(
                "partial trace needs at least two subsystems".into(),
            ));
        }
        if mode >= self.dims.len() {
            return Err(Error::InvalidParameter(format!(
                "mode {mode} outside a {}-mode system",
                self.dims.len()
            )));
        }
        let (left, d, right) = strides(&self.dims, mode);
        let n = left * right;
        let mut out = DMatrix::zeros(n, n);
        for l in 0..left {
            for r in 0..right {
                for l2 in 0..left {
                    for r2 in 0..right {
                        let mut acc = ZERO;
                        for s in 0..d {
                            acc += self.mat[((l * d + s) * right + r, (l2 * d + s) * right + r2)];
                        }
                        out[(l * right + r, l2 * right + r2)] = acc;
                    }
                }
            }
        }
        let mut dims = self.dims.clone();
        dims.remove(mode);
        Ok(Self { dims, mat: out })
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        max_abs(&(&self.mat - &other.mat))
    }
}

/// Eigenvalues of a Hermitian matrix, ascending. Entries of `A - A†` up to
/// [`HERMITIAN_TOL`] are symmetrized away; anything larger is rejected.
pub fn hermitian_eigenvalues(a: &DMatrix<C64>) -> Result<Vec<f64>> {
    let dev = max_abs(&(a - a.adjoint()));
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let sym = (a + a.adjoint()).unscale(2.0);
    let mut ev: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    Ok(ev)
}

// ---------------------------------------------------------------------------
// Constructors

/// Truncated, renormalized coherent state `|α⟩`.
pub fn coherent_state(alpha: C64, dim: usize) -> Result<FockVector> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    let mut amps = Vec::with_capacity(dim);
    let mut a = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..dim {
        if n > 0 {
            a = a * alpha / (n as f64).sqrt();
        }
        amps.push(a);
    }
    let kept: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    let loss = (1.0 - kept).max(0.0);
    if loss > COHERENT_LEAKAGE_TOL {
        return Err(Error::TruncationTooSmall {
            dim,
            leakage: loss,
            tolerance: COHERENT_LEAKAGE_TOL,
        });
    }
    let scale = kept.sqrt();
    Ok(FockVector {
        amps: DVector::from_iterator(dim, amps.into_iter().map(|z| z / scale)),
        truncation_loss: loss,
    })
}

/// `(â, â†, N̂)` truncated to `dim` levels.
pub fn ladder_and_number(dim: usize) -> Result<(FockOperator, FockOperator, FockOperator)> {
    if dim < 2 {
        return Err(Error::InvalidParameter(
            "ladder operators need dimension ≥ 2".into(),
        ));
    }
    let mut a = DMatrix::zeros(dim, dim);
    for n in 1..dim {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    let adag = a.adjoint();
    let number = FockOperator::from_diagonal((0..dim).map(|n| C64::new(n as f64, 0.0)));
    Ok((FockOperator::Dense(a), FockOperator::Dense(adag), number))
}

/// `e^{iθN̂}`.
pub fn rotation_operator(theta: f64, dim: usize) -> FockOperator {
    FockOperator::from_diagonal((0..dim).map(|n| C64::from_polar(1.0, theta * n as f64)))
}

/// `e^{iπ·(num/den)·N̂}` with exact phase reduction.
pub fn rotation_by_fraction(num: u64, den: u64, dim: usize) -> FockOperator {
    FockOperator::from_diagonal((0..dim as u64).map(|n| root_of_unity(num * n, den)))
}

/// Logical Z power `Ẑ_M^k = e^{iπkN̂/M}`.
pub fn logical_z_power(order: usize, k: usize, dim: usize) -> FockOperator {
    rotation_by_fraction(k as u64, order as u64, dim)
}

/// Rotation stabilizer power `R̂_M^l = e^{i2πlN̂/M}`.
pub fn rotation_symmetry_power(order: usize, l: usize, dim: usize) -> FockOperator {
    rotation_by_fraction(2 * l as u64, order as u64, dim)
}

/// Two-mode controlled rotation `e^{iπ N̂⊗N̂ / (M M')}` on `mode_a ⊗ mode_b`.
pub fn crot_gate(order_a: usize, order_b: usize, dim_a: usize, dim_b: usize) -> Result<FockOperator> {
    if order_a == 0 || order_b == 0 {
        return Err(Error::InvalidParameter("rotation orders must be ≥ 1".into()));
    }
    let den = (order_a * order_b) as u64;
    Ok(FockOperator::from_diagonal((0..dim_a as u64).flat_map(|n| {
        (0..dim_b as u64).map(move |m| root_of_unity(n * m, den))
    })))
}

pub fn tensor(a: &DensityMatrix, b: &DensityMatrix) -> DensityMatrix {
    a.tensor(b)
}

pub fn partial_trace(rho: &DensityMatrix, mode: usize) -> Result<DensityMatrix> {
    rho.partial_trace(mode)
}

pub fn expectation(rho: &DensityMatrix, op: &FockOperator) -> Result<C64> {
    rho.expectation(op)
}

/// `½ Σ |eig(ρ - σ)|`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    for m in [rho, sigma] {
        let dev = m.hermiticity_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
    }
    let ev = hermitian_eigenvalues(&(rho.matrix() - sigma.matrix()))?;
    Ok(0.5 * ev.iter().map(|e| e.abs()).sum::<f64>())
}
