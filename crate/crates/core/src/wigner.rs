//! Wigner functions on rectangular phase-space grids.
//!
//! Quadratures follow `x = (a + a†)/√2`, `p = (a - a†)/(i√2)`, so a point
//! `(x, p)` corresponds to `β = (x + ip)/√2`. Values are the phase-space
//! density `W(x, p) = (1/π) Tr[D(β)† ρ D(β) Π]`, normalized so that
//! `∫ W dx dp = 1` (the vacuum peaks at `1/π`). The density with respect to
//! `d²β` is twice that; see [`WignerGrid::complex_plane_density`].
//!
//! Each point is evaluated with the Laguerre recurrence for the Wigner
//! functions of the Fock dyads `|m⟩⟨n|`, which costs `O(D²)` per point and
//! needs no displacement operators.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fock::{DensityMatrix, C64};

/// Beyond this `2|β|²` the Gaussian prefactor underflows.
const MAX_EXPONENT: f64 = 600.0;
/// Largest top-level population accepted as "fits in the truncation".
const TOP_LEVEL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    xs: Vec<f64>,
    ps: Vec<f64>,
    /// `values[(i, j)] = W(xs[i], ps[j])`.
    values: DMatrix<f64>,
}

impl WignerGrid {
    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ps(&self) -> &[f64] {
        &self.ps
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    fn step(v: &[f64]) -> f64 {
        if v.len() > 1 {
            (v[v.len() - 1] - v[0]) / (v.len() - 1) as f64
        } else {
            1.0
        }
    }

    /// `Σ W Δx Δp` for a uniform grid.
    pub fn integral(&self) -> f64 {
        self.values.sum() * Self::step(&self.xs) * Self::step(&self.ps)
    }

    pub fn min(&self) -> f64 {
        self.values.min()
    }

    pub fn max(&self) -> f64 {
        self.values.max()
    }

    /// `Σ_p W(x, p) Δp` for each `x`.
    pub fn marginal_x(&self) -> Vec<f64> {
        let dp = Self::step(&self.ps);
        self.values.row_iter().map(|r| r.sum() * dp).collect()
    }

    /// `Σ_x W(x, p) Δx` for each `p`.
    pub fn marginal_p(&self) -> Vec<f64> {
        let dx = Self::step(&self.xs);
        self.values.column_iter().map(|c| c.sum() * dx).collect()
    }

    /// Density with respect to `d²β`, `(2/π) Tr[D† ρ D Π]`.
    pub fn complex_plane_density(&self) -> DMatrix<f64> {
        self.values.scale(2.0)
    }
}

/// Uniform grid of `n` points over `[-extent, extent]`.
pub fn symmetric_axis(extent: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.0];
    }
    (0..n)
        .map(|i| -extent + 2.0 * extent * i as f64 / (n - 1) as f64)
        .collect()
}

fn check_state(rho: &DensityMatrix) -> Result<()> {
    if rho.dims().len() != 1 {
        return Err(Error::InvalidParameter("Wigner functions need a single-mode state".into()));
    }
    let d = rho.dim();
    let top = rho.entry(d - 1, d - 1).re;
    if top > TOP_LEVEL_TOL {
        return Err(Error::TruncationTooSmall {
            dim: d,
            leakage: top,
            tolerance: TOP_LEVEL_TOL,
        });
    }
    Ok(())
}

/// `(1/π) Tr[D(β)† ρ D(β) Π]` at one point, by the dyad recurrence.
fn wigner_point(rho: &DMatrix<C64>, beta: C64, scratch: &mut [C64]) -> f64 {
    let d = rho.nrows();
    let a = 2.0 * beta;
    let ac = a.conj();
    // scratch[n] holds the Wigner function of |m⟩⟨n| for the current row m.
    scratch[0] = C64::new((-2.0 * beta.norm_sqr()).exp() / PI, 0.0);
    let mut w = rho[(0, 0)].re * scratch[0].re;
    for n in 1..d {
        scratch[n] = a * scratch[n - 1] / (n as f64).sqrt();
        w += 2.0 * (rho[(0, n)] * scratch[n]).re;
    }
    for m in 1..d {
        let sm = (m as f64).sqrt();
        let mut prev_row = scratch[m];
        scratch[m] = (ac * prev_row - sm * scratch[m - 1]) / sm;
        w += (rho[(m, m)] * scratch[m]).re;
        for n in m + 1..d {
            let next = (a * scratch[n - 1] - sm * prev_row) / (n as f64).sqrt();
            prev_row = scratch[n];
            scratch[n] = next;
            w += 2.0 * (rho[(m, n)] * scratch[n]).re;
        }
    }
    w
}

/// Displaced parity `Tr[D(β)† ρ D(β) Π]`, in `[-1, 1]` for valid states.
pub fn displaced_parity(rho: &DensityMatrix, beta: C64) -> Result<f64> {
    check_state(rho)?;
    if 2.0 * beta.norm_sqr() > MAX_EXPONENT {
        return Err(Error::InvalidParameter(format!("|β|² = {} is too large", beta.norm_sqr())));
    }
    let mut scratch = vec![C64::new(0.0, 0.0); rho.dim()];
    Ok(PI * wigner_point(rho.matrix(), beta, &mut scratch))
}

pub fn wigner_grid(rho: &DensityMatrix, xs: &[f64], ps: &[f64]) -> Result<WignerGrid> {
    wigner_grid_with(rho, xs, ps, Exec::default())
}

pub fn wigner_grid_with(rho: &DensityMatrix, xs: &[f64], ps: &[f64], exec: Exec) -> Result<WignerGrid> {
    check_state(rho)?;
    if xs.is_empty() || ps.is_empty() {
        return Err(Error::InvalidParameter("empty Wigner grid".into()));
    }
    if xs.iter().chain(ps).any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite grid coordinate".into()));
    }
    let xmax = xs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let pmax = ps.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if xmax * xmax + pmax * pmax > MAX_EXPONENT {
        return Err(Error::InvalidParameter(format!(
            "grid reaches |β|² = {}, beyond the supported range",
            (xmax * xmax + pmax * pmax) / 2.0
        )));
    }
    let mat = rho.matrix();
    let d = rho.dim();
    let columns = exec.map(ps.len(), |j| {
        let mut scratch = vec![C64::new(0.0, 0.0); d];
        xs.iter()
            .map(|&x| {
                let beta = C64::new(x, ps[j]) / 2f64.sqrt();
                wigner_point(mat, beta, &mut scratch)
            })
            .collect::<Vec<_>>()
    });
    let values = DMatrix::from_fn(xs.len(), ps.len(), |i, j| columns[j][i]);
    Ok(WignerGrid {
        xs: xs.to_vec(),
        ps: ps.to_vec(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{codeword, CodeSpec, Logical};
    use crate::fock::{coherent_state, ladder_and_number, rotation_symmetry_power, FockVector};

    /// `D(β) = exp(βa† - β*a)` by scaling and squaring a Taylor series.
    fn displacement(beta: C64, dim: usize) -> DMatrix<C64> {
        let (a, adag, _) = ladder_and_number(dim).unwrap();
        let gen = adag.to_dense() * beta - a.to_dense() * beta.conj();
        let squarings = 8;
        let g = gen.unscale(2f64.powi(squarings));
        let mut term = DMatrix::identity(dim, dim);
        let mut sum = term.clone();
        for k in 1..30 {
            term = &term * &g / C64::new(k as f64, 0.0);
            sum += &term;
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }

    fn parity_oracle(rho: &DensityMatrix, beta: C64, big: usize) -> f64 {
        // Embed in a larger space so the truncated displacement is accurate.
        let d = rho.dim();
        let mut r = DMatrix::zeros(big, big);
        r.view_mut((0, 0), (d, d)).copy_from(rho.matrix());
        let disp = displacement(beta, big);
        let shifted = disp.adjoint() * r * &disp;
        (0..big)
            .map(|n| if n % 2 == 0 { shifted[(n, n)].re } else { -shifted[(n, n)].re })
            .sum()
    }

    #[test]
    fn vacuum_peak() {
        let vac = FockVector::basis(0, 10).unwrap().density();
        let g = wigner_grid(&vac, &[0.0], &[0.0]).unwrap();
        assert!((g.value(0, 0) - 1.0 / PI).abs() < 1e-12);
        assert!((g.complex_plane_density()[(0, 0)] - 2.0 / PI).abs() < 1e-6);
        assert!((displaced_parity(&vac, C64::new(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn recurrence_matches_displacement_oracle() {
        let spec = CodeSpec::cat(2, C64::new(1.5, 0.0), 24).unwrap();
        let rho = codeword(&spec, Logical::One).unwrap().density();
        for beta in [C64::new(0.3, -0.2), C64::new(1.1, 0.7), C64::new(-1.4, 0.2)] {
            let fast = displaced_parity(&rho, beta).unwrap();
            let slow = parity_oracle(&rho, beta, 70);
            assert!((fast - slow).abs() < 1e-9, "β={beta}: {fast} vs {slow}");
        }
    }

    #[test]
    fn coherent_state_is_a_shifted_gaussian() {
        let alpha = C64::new(1.0, -0.5);
        let rho = coherent_state(alpha, 30).unwrap().density();
        let (x0, p0) = (2f64.sqrt() * alpha.re, 2f64.sqrt() * alpha.im);
        for (x, p) in [(x0, p0), (x0 + 0.4, p0), (x0 - 0.3, p0 + 0.8)] {
            let g = wigner_grid(&rho, &[x], &[p]).unwrap();
            let expect = (-(x - x0).powi(2) - (p - p0).powi(2)).exp() / PI;
            assert!((g.value(0, 0) - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn normalization_and_marginals() {
        let spec = CodeSpec::cat(2, C64::new(2.0, 0.0), 40).unwrap();
        let psi = codeword(&spec, Logical::Zero).unwrap();
        let rho = psi.density();
        let axis = symmetric_axis(2f64.sqrt() * 2.0 + 4.0, 101);
        let g = wigner_grid(&rho, &axis, &axis).unwrap();
        assert!((g.integral() - 1.0).abs() < 0.02);

        // ⟨x|ψ⟩ from Hermite functions.
        let wave = |x: f64| -> f64 {
            let mut h_prev = 0.0;
            let mut h = PI.powf(-0.25) * (-x * x / 2.0).exp();
            let mut acc = psi.amp(0) * h;
            for n in 1..psi.dim() {
                let next = x * (2.0 / n as f64).sqrt() * h - ((n - 1) as f64 / n as f64).sqrt() * h_prev;
                h_prev = h;
                h = next;
                acc += psi.amp(n) * h;
            }
            acc.norm_sqr()
        };
        let marg = g.marginal_x();
        let peak = marg.iter().cloned().fold(0.0, f64::max);
        for (i, &x) in axis.iter().enumerate() {
            assert!((marg[i] - wave(x)).abs() < 0.02 * peak, "x={x}");
        }
    }

    #[test]
    fn rotation_covariance() {
        let spec = CodeSpec::cat(4, C64::new(2.2, 0.3), 50).unwrap();
        let rho = codeword(&spec, Logical::Zero).unwrap().density();
        // R̂_4 rotates phase space by π/2: W'(x, p) = W(p, -x).
        let r = rotation_symmetry_power(4, 1, 50);
        let rotated = rho.conjugate(&r).unwrap();
        let axis = symmetric_axis(5.0, 41);
        let a = wigner_grid(&rho, &axis, &axis).unwrap();
        let b = wigner_grid(&rotated, &axis, &axis).unwrap();
        let n = axis.len();
        for i in 0..n {
            for j in 0..n {
                assert!((b.value(i, j) - a.value(j, n - 1 - i)).abs() <= 5e-3);
            }
        }
    }

    #[test]
    fn strategies_agree() {
        let rho = coherent_state(C64::new(0.7, 0.7), 20).unwrap().density();
        let axis = symmetric_axis(3.0, 17);
        let a = wigner_grid_with(&rho, &axis, &axis, Exec::Sequential).unwrap();
        let b = wigner_grid_with(&rho, &axis, &axis, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_inputs() {
        let full = DensityMatrix::single_mode(DMatrix::identity(4, 4).unscale(4.0)).unwrap();
        assert!(matches!(
            wigner_grid(&full, &[0.0], &[0.0]),
            Err(Error::TruncationTooSmall { .. })
        ));
        let vac = FockVector::basis(0, 4).unwrap().density();
        assert!(wigner_grid(&vac, &[30.0], &[0.0]).is_err());
        assert!(wigner_grid(&vac, &[], &[0.0]).is_err());
    }
}
