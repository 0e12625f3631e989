//! Rotation-symmetry projectors and the truncated number-translation map.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fock::{
    embed, logical_z_power, root_of_unity, rotation_symmetry_power, DensityMatrix, FockOperator,
    C64,
};

/// Probabilities at or below this are treated as a failed projection.
pub const MIN_PROJECTION_PROB: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectorKind {
    /// Fock levels `n ≡ l (mod 2M)`.
    FockResidue { order: usize, residue: usize },
    /// Residues `0` and `M` modulo `2M`.
    CodeSpace { order: usize },
    /// `(1/(L+1)) Σ_{k≤L} X_N^{2k}`.
    TruncatedX { order: usize, level: usize },
}

impl ProjectorKind {
    pub fn build(&self, dim: usize) -> Result<FockOperator> {
        match *self {
            ProjectorKind::FockResidue { order, residue } => rotation_projector(order, residue, dim),
            ProjectorKind::CodeSpace { order } => code_projector(order, dim),
            ProjectorKind::TruncatedX { order, level } => truncated_x_projector(order, level, dim),
        }
    }
}

fn check_order(order: usize) -> Result<()> {
    if order < 1 {
        return Err(Error::InvalidParameter("rotation order M must be ≥ 1".into()));
    }
    Ok(())
}

/// Diagonal mask onto `n ≡ residue (mod 2M)`.
pub fn rotation_projector(order: usize, residue: usize, dim: usize) -> Result<FockOperator> {
    check_order(order)?;
    if residue >= 2 * order {
        return Err(Error::InvalidParameter(format!(
            "residue {residue} outside [0, {})",
            2 * order
        )));
    }
    Ok(FockOperator::from_diagonal((0..dim).map(|n| {
        if n % (2 * order) == residue {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })))
}

/// The same projector as `(1/2M) Σ_k e^{-iπlk/M} Z_M^k`.
pub fn rotation_projector_phase_sum(order: usize, residue: usize, dim: usize) -> Result<FockOperator> {
    check_order(order)?;
    if residue >= 2 * order {
        return Err(Error::InvalidParameter(format!(
            "residue {residue} outside [0, {})",
            2 * order
        )));
    }
    let m2 = 2 * order as u64;
    let mut acc = FockOperator::from_diagonal(std::iter::repeat_n(C64::new(0.0, 0.0), dim));
    for k in 0..2 * order {
        let back = (m2 - (residue as u64 * k as u64) % m2) % m2;
        let phase = root_of_unity(back, order as u64);
        acc = acc.sum(&logical_z_power(order, k, dim).scale(phase));
    }
    Ok(acc.scale(C64::new(1.0 / m2 as f64, 0.0)))
}

/// Code-space projector `P⁽⁰⁾ + P⁽ᴹ⁾`: all multiples of `M`.
pub fn code_projector(order: usize, dim: usize) -> Result<FockOperator> {
    check_order(order)?;
    Ok(FockOperator::from_diagonal((0..dim).map(|n| {
        if n % order == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })))
}

/// The code-space projector as `(1/M) Σ_k R_M^k`.
pub fn code_projector_rotation_sum(order: usize, dim: usize) -> Result<FockOperator> {
    check_order(order)?;
    let mut acc = FockOperator::from_diagonal(std::iter::repeat_n(C64::new(0.0, 0.0), dim));
    for k in 0..order {
        acc = acc.sum(&rotation_symmetry_power(order, k, dim));
    }
    Ok(acc.scale(C64::new(1.0 / order as f64, 0.0)))
}

/// `(PρP/p, p)` with `p = Tr[Pρ]`.
pub fn project_state(rho: &DensityMatrix, p: &FockOperator) -> Result<(DensityMatrix, f64)> {
    let prob = rho.expectation(p)?.re;
    if !(prob > MIN_PROJECTION_PROB) {
        return Err(Error::ProjectionImpossible(prob));
    }
    let projected = rho.conjugate(p)?;
    Ok((projected.scaled(1.0 / prob), prob))
}

/// [`project_state`] with a single-mode projector applied to subsystem `mode`.
pub fn project_mode(rho: &DensityMatrix, p: &FockOperator, mode: usize) -> Result<(DensityMatrix, f64)> {
    project_state(rho, &embed(p, rho.dims(), mode)?)
}

/// Number-translation operator `X_N = Σ_m |m⟩⟨m+M|`, truncated.
pub fn number_translation(order: usize, dim: usize) -> Result<FockOperator> {
    check_order(order)?;
    let mut x = DMatrix::zeros(dim, dim);
    for m in 0..dim.saturating_sub(order) {
        x[(m, m + order)] = C64::new(1.0, 0.0);
    }
    Ok(FockOperator::Dense(x))
}

/// Map kernel `A = (1/(L+1)) Σ_{k=0}^{L} X_N^{2k}`. Neither Hermitian nor
/// idempotent; see [`apply_truncated_x`].
pub fn truncated_x_projector(order: usize, level: usize, dim: usize) -> Result<FockOperator> {
    check_order(order)?;
    if dim <= 2 * level * order {
        return Err(Error::TruncationTooSmall {
            dim,
            leakage: 1.0,
            tolerance: 0.0,
        });
    }
    let x2 = number_translation(order, dim)?.pow(2);
    let mut term = FockOperator::identity(dim).to_dense();
    let mut acc = term.clone();
    let x2 = x2.to_dense();
    for _ in 0..level {
        term = &x2 * term;
        acc += &term;
    }
    Ok(FockOperator::Dense(acc.unscale((level + 1) as f64)))
}

/// `AρA† / Tr[AρA†]`, returned with the normalization.
pub fn apply_truncated_x(rho: &DensityMatrix, a: &FockOperator) -> Result<(DensityMatrix, f64)> {
    let out = rho.conjugate(a)?;
    let norm = out.trace().re;
    if !(norm > MIN_PROJECTION_PROB) {
        return Err(Error::ProjectionImpossible(norm));
    }
    Ok((out.scaled(1.0 / norm), norm))
}
