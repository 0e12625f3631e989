//! Codewords created virtually by projecting a primitive state.

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, FockOperator};
use crate::projectors::{project_state, rotation_projector};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VirtualState {
    /// `Tr[O P⁽⁰⁾ρ_Φ P⁽⁰⁾] / p_Φ`.
    pub value: f64,
    /// `p_Φ = Tr[P⁽⁰⁾ρ_Φ]`; its inverse square is the sampling cost.
    pub p_phi: f64,
}

/// Expectation of `o` on the `|0_L⟩` obtained by projecting `primitive`.
pub fn virtual_code_state(primitive: &DensityMatrix, order: usize, o: &FockOperator) -> Result<VirtualState> {
    if primitive.dims().len() != 1 {
        return Err(Error::InvalidParameter("primitive must be a single mode".into()));
    }
    if (primitive.trace().re - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidParameter(format!(
            "primitive has trace {}",
            primitive.trace().re
        )));
    }
    let p = rotation_projector(order, 0, primitive.dim())?;
    let (rho_s, p_phi) = project_state(primitive, &p)?;
    Ok(VirtualState {
        value: rho_s.expectation(o)?.re,
        p_phi,
    })
}
