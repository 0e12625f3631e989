//! Cat and binomial codewords of order-`M` rotation-symmetric codes.

use std::f64::consts::PI;

use crate::analytics::distinguishability_threshold;
use crate::error::{Error, Result};
use crate::fock::{coherent_state, default_dim, logical_z_power, FockVector, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CodeFamily {
    /// Coherent-state primitive `|α⟩`.
    Cat { alpha: C64 },
    /// Binomial code truncated at Fock level `(L + 1)·M`.
    Binomial { truncation: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeSpec {
    family: CodeFamily,
    order: usize,
    dim: usize,
}

impl CodeSpec {
    pub fn cat(order: usize, alpha: C64, dim: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidParameter("rotation order M must be ≥ 1".into()));
        }
        if dim < 1 {
            return Err(Error::InvalidParameter("dimension must be ≥ 1".into()));
        }
        Ok(Self {
            family: CodeFamily::Cat { alpha },
            order,
            dim,
        })
    }

    /// Cat code on the default truncation for `|α|²`.
    pub fn cat_auto(order: usize, alpha: C64) -> Result<Self> {
        Self::cat(order, alpha, default_dim(alpha.norm_sqr()))
    }

    pub fn binomial(order: usize, truncation: usize, dim: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidParameter("rotation order M must be ≥ 1".into()));
        }
        if truncation < 1 {
            return Err(Error::InvalidParameter("binomial truncation L must be ≥ 1".into()));
        }
        let top = (truncation + 1) * order;
        if dim <= top {
            return Err(Error::TruncationTooSmall {
                dim,
                leakage: 1.0,
                tolerance: 0.0,
            });
        }
        Ok(Self {
            family: CodeFamily::Binomial { truncation },
            order,
            dim,
        })
    }

    pub fn binomial_auto(order: usize, truncation: usize) -> Result<Self> {
        let n_bar = (order * (truncation + 1)) as f64 / 2.0;
        let dim = default_dim(n_bar).max((truncation + 1) * order + 1);
        Self::binomial(order, truncation, dim)
    }

    pub fn family(&self) -> CodeFamily {
        self.family
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        match self.family {
            CodeFamily::Cat { alpha } => Self::cat(self.order, alpha, dim),
            CodeFamily::Binomial { truncation } => Self::binomial(self.order, truncation, dim),
        }
    }

    pub fn alpha(&self) -> Option<C64> {
        match self.family {
            CodeFamily::Cat { alpha } => Some(alpha),
            CodeFamily::Binomial { .. } => None,
        }
    }

    /// Mean photon number of the primitive (`|α|²`) or of the binomial
    /// codewords (`M(L+1)/2`).
    pub fn mean_photons(&self) -> f64 {
        match self.family {
            CodeFamily::Cat { alpha } => alpha.norm_sqr(),
            CodeFamily::Binomial { truncation } => (self.order * (truncation + 1)) as f64 / 2.0,
        }
    }

    /// False for cat codes whose rotated legs overlap more than the
    /// `|α₀|² = 1.5` reference; closed forms assume distinguishable legs.
    pub fn legs_distinguishable(&self) -> bool {
        match self.family {
            CodeFamily::Cat { alpha } => {
                alpha.norm_sqr() >= distinguishability_threshold(self.order, 1.5)
            }
            CodeFamily::Binomial { .. } => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Logical {
    Zero,
    One,
}

/// Coefficients of `a|0_L⟩ + b|1_L⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogicalCoeffs {
    pub a: C64,
    pub b: C64,
}

impl LogicalCoeffs {
    /// Rejects coefficients that are not normalized within 1e-10.
    pub fn new(a: C64, b: C64) -> Result<Self> {
        let n = a.norm_sqr() + b.norm_sqr();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "|a|² + |b|² = {n} is not 1"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn normalized(a: C64, b: C64) -> Result<Self> {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if !(n > 0.0) {
            return Err(Error::InvalidParameter("null logical coefficients".into()));
        }
        Ok(Self { a: a / n, b: b / n })
    }

    fn half(b: C64) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            a: C64::new(s, 0.0),
            b: b * s,
        }
    }

    pub fn zero() -> Self {
        Self {
            a: C64::new(1.0, 0.0),
            b: C64::new(0.0, 0.0),
        }
    }

    pub fn one() -> Self {
        Self {
            a: C64::new(0.0, 0.0),
            b: C64::new(1.0, 0.0),
        }
    }

    pub fn plus() -> Self {
        Self::half(C64::new(1.0, 0.0))
    }

    pub fn minus() -> Self {
        Self::half(C64::new(-1.0, 0.0))
    }

    pub fn plus_i() -> Self {
        Self::half(C64::new(0.0, 1.0))
    }

    /// Magic state `(|0⟩ + e^{iπ/4}|1⟩)/√2`.
    pub fn magic_t() -> Self {
        Self::half(C64::from_polar(1.0, PI / 4.0))
    }

    /// Leg weights `c_m = a/√N₀ + (-1)^m b/√N₁` with `N₀ = N₁ = 2M`,
    /// returned as `(c₀, c₁)`.
    pub fn leg_weights(&self, order: usize) -> (C64, C64) {
        let n = (2 * order) as f64;
        let s = 1.0 / n.sqrt();
        (self.a * s + self.b * s, self.a * s - self.b * s)
    }
}

fn require_cat(spec: &CodeSpec) -> Result<C64> {
    spec.alpha()
        .ok_or_else(|| Error::InvalidParameter("operation requires a cat code".into()))
}

/// Cat codeword built as the superposition of `2M` rotated coherent states,
/// returned with its normalization constant `C₀` or `C₁`.
pub fn cat_codeword(spec: &CodeSpec, which: Logical) -> Result<(FockVector, f64)> {
    let alpha = require_cat(spec)?;
    let m = spec.order();
    let primitive = coherent_state(alpha, spec.dim())?;
    let mut sum = FockVector::zeros(spec.dim());
    for k in 0..2 * m {
        let sign = match which {
            Logical::One if k % 2 == 1 => -1.0,
            _ => 1.0,
        };
        let rotated = logical_z_power(m, k, spec.dim()).apply(&primitive);
        sum = &sum + &rotated.scale(C64::new(sign, 0.0));
    }
    let norm_const = sum.norm_sqr();
    if !(norm_const > 1e-24) {
        return Err(Error::InvalidParameter(format!(
            "codeword vanishes for |α|² = {}",
            alpha.norm_sqr()
        )));
    }
    Ok((sum.normalized()?, norm_const))
}

fn binomial_coefficient(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Binomial codeword with amplitudes `√(binom(L+1, m) / 2^L)` on `|mM⟩`.
pub fn binomial_codeword(spec: &CodeSpec, which: Logical) -> Result<FockVector> {
    let CodeFamily::Binomial { truncation } = spec.family() else {
        return Err(Error::InvalidParameter("operation requires a binomial code".into()));
    };
    let m = spec.order();
    let parity = match which {
        Logical::Zero => 0,
        Logical::One => 1,
    };
    let norm = 2f64.powi(truncation as i32);
    let mut amps = vec![C64::new(0.0, 0.0); spec.dim()];
    for k in (parity..=truncation + 1).step_by(2) {
        amps[k * m] = C64::new((binomial_coefficient(truncation + 1, k) / norm).sqrt(), 0.0);
    }
    Ok(FockVector::from_amplitudes(amps))
}

pub fn codeword(spec: &CodeSpec, which: Logical) -> Result<FockVector> {
    match spec.family() {
        CodeFamily::Cat { .. } => cat_codeword(spec, which).map(|(v, _)| v),
        CodeFamily::Binomial { .. } => binomial_codeword(spec, which),
    }
}

/// `a|0_L⟩ + b|1_L⟩` from normalized codewords, renormalized.
pub fn logical_state(spec: &CodeSpec, coeffs: LogicalCoeffs) -> Result<FockVector> {
    let zero = codeword(spec, Logical::Zero)?;
    let one = codeword(spec, Logical::One)?;
    (&zero.scale(coeffs.a) + &one.scale(coeffs.b)).normalized()
}

/// Cat logical state written directly as weighted coherent legs,
/// `Σ_m c_m |α e^{iπm/M}⟩` with the leg weights of
/// [`LogicalCoeffs::leg_weights`], renormalized.
///
/// Equal to [`logical_state`] in the large-photon limit. At moderate `|α|²`
/// the two differ by the `C₀ ≠ C₁` imbalance, and this form is the one the
/// closed-form trace distances describe exactly.
pub fn leg_superposition_state(spec: &CodeSpec, coeffs: LogicalCoeffs) -> Result<FockVector> {
    let alpha = require_cat(spec)?;
    let m = spec.order();
    let (c0, c1) = coeffs.leg_weights(m);
    let primitive = coherent_state(alpha, spec.dim())?;
    let mut sum = FockVector::zeros(spec.dim());
    for k in 0..2 * m {
        let w = if k % 2 == 0 { c0 } else { c1 };
        sum = &sum + &logical_z_power(m, k, spec.dim()).apply(&primitive).scale(w);
    }
    sum.normalized()
}

/// Leg weights and amplitudes of a leg superposition, for
/// [`crate::channels::loss_on_coherent_superposition`].
pub fn leg_decomposition(spec: &CodeSpec, coeffs: LogicalCoeffs) -> Result<(Vec<C64>, Vec<C64>)> {
    let alpha = require_cat(spec)?;
    let m = spec.order();
    let (c0, c1) = coeffs.leg_weights(m);
    let weights = (0..2 * m).map(|k| if k % 2 == 0 { c0 } else { c1 }).collect();
    let legs = (0..2 * m)
        .map(|k| alpha * C64::from_polar(1.0, PI * k as f64 / m as f64))
        .collect();
    Ok((weights, legs))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportCheck {
    pub passes: bool,
    pub leakage: f64,
}

/// Population outside the comb `n ≡ residue (mod 2M)`; passes at ≤ 1e-10.
pub fn codeword_support_check(v: &FockVector, order: usize, residue: usize) -> Result<SupportCheck> {
    if residue >= 2 * order {
        return Err(Error::InvalidParameter(format!(
            "residue {residue} outside [0, {})",
            2 * order
        )));
    }
    let total = v.norm_sqr();
    let leakage = v.residue_leakage(2 * order, residue) / total;
    Ok(SupportCheck {
        passes: leakage <= 1e-10,
        leakage,
    })
}

/// Mixed-state counterpart of [`codeword_support_check`].
pub fn density_support_check(
    rho: &crate::fock::DensityMatrix,
    order: usize,
    residue: usize,
) -> Result<SupportCheck> {
    if residue >= 2 * order {
        return Err(Error::InvalidParameter(format!(
            "residue {residue} outside [0, {})",
            2 * order
        )));
    }
    let pops = rho.populations();
    let total: f64 = pops.iter().sum();
    let leakage = pops
        .iter()
        .enumerate()
        .filter(|(n, _)| n % (2 * order) != residue)
        .map(|(_, p)| p)
        .sum::<f64>()
        / total;
    Ok(SupportCheck {
        passes: leakage <= 1e-10,
        leakage,
    })
}
