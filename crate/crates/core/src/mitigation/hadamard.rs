//! Generalized process `ρ ↦ UρV†` and its Hadamard-test realization.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, FockOperator, C64};

fn check_unitary(op: &FockOperator) -> Result<()> {
    if !op.is_unitary() {
        return Err(Error::NotUnitary(op.unitarity_deviation()));
    }
    Ok(())
}

/// `Tr[O U ρ V†]`.
pub fn generalized_expectation(
    rho: &DensityMatrix,
    u: &FockOperator,
    v: &FockOperator,
    o: &FockOperator,
) -> Result<C64> {
    check_unitary(u)?;
    check_unitary(v)?;
    rho.sandwich(u, v)?.expectation(o)
}

/// Joint ancilla ⊗ modes state after the Hadamard-test controls: the
/// ancilla starts in `|+⟩`, `V` fires on ancilla `|0⟩` and `U` on `|1⟩`.
/// The ancilla is the first subsystem.
pub fn hadamard_test_state(rho: &DensityMatrix, u: &FockOperator, v: &FockOperator) -> Result<DensityMatrix> {
    check_unitary(u)?;
    check_unitary(v)?;
    let n = rho.dim();
    let blocks = [
        [rho.sandwich(v, v)?, rho.sandwich(v, u)?],
        [rho.sandwich(u, v)?, rho.sandwich(u, u)?],
    ];
    let mut mat = DMatrix::zeros(2 * n, 2 * n);
    for (a, row) in blocks.iter().enumerate() {
        for (b, blk) in row.iter().enumerate() {
            mat.view_mut((a * n, b * n), (n, n))
                .copy_from(&blk.matrix().unscale(2.0));
        }
    }
    let mut dims = vec![2];
    dims.extend_from_slice(rho.dims());
    DensityMatrix::new(dims, mat)
}

/// `(⟨X₀ ⊗ O⟩, ⟨Y₀ ⊗ O⟩)` on a joint state from [`hadamard_test_state`].
pub fn ancilla_pauli_expectations(joint: &DensityMatrix, o: &FockOperator) -> Result<(C64, C64)> {
    let z = C64::new(0.0, 0.0);
    let x = FockOperator::Dense(DMatrix::from_row_slice(2, 2, &[z, C64::new(1.0, 0.0), C64::new(1.0, 0.0), z]));
    let y = FockOperator::Dense(DMatrix::from_row_slice(2, 2, &[z, C64::new(0.0, -1.0), C64::new(0.0, 1.0), z]));
    Ok((joint.expectation(&x.kron(o))?, joint.expectation(&y.kron(o))?))
}
