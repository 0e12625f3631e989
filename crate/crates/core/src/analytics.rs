//! Closed forms for cat codes under photon loss.
//!
//! Everything here is built on comb series over a residue class,
//! `Σ_{n ≡ r (mod K)} xⁿ/n!`. The two named series are
//! `f_M(x) = Σ_l x^{Ml}/(Ml)!` and its alternating form
//! `g_M(x) = Σ_l (-1)^l x^{Ml}/(Ml)!`.

use std::f64::consts::PI;

use crate::codes::LogicalCoeffs;
use crate::error::{Error, Result};
use crate::fock::C64;

/// Above this argument comb series switch from direct summation to the
/// roots-of-unity identity.
const DIRECT_SUM_LIMIT: f64 = 300.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CombKind {
    F,
    G,
}

/// `e^{-x} Σ_{n ≡ residue (mod modulus)} xⁿ/n!` for `x ≥ 0`.
///
/// A sum of Poisson weights, so it lies in `[0, 1]` and never overflows.
pub fn residue_series_scaled(modulus: usize, residue: usize, x: f64) -> f64 {
    assert!(modulus >= 1 && residue < modulus, "residue outside [0, modulus)");
    assert!(x >= 0.0, "residue series needs x ≥ 0");
    if x == 0.0 {
        return if residue == 0 { 1.0 } else { 0.0 };
    }
    if x <= DIRECT_SUM_LIMIT {
        // Walk the Poisson weights e^{-x}xⁿ/n! and keep every modulus-th one.
        let mut term = (-x).exp();
        let mut sum = 0.0;
        let mut n = 0usize;
        loop {
            if n % modulus == residue {
                sum += term;
                if n as f64 > x && term < 1e-17 * sum {
                    break;
                }
            }
            n += 1;
            term *= x / n as f64;
            if term == 0.0 && n as f64 > x {
                break;
            }
        }
        sum
    } else {
        // (1/K) Σ_j ω_j^{-r} e^{x(ω_j - 1)} over the K-th roots of unity.
        let k = modulus as f64;
        let s: C64 = (0..modulus)
            .map(|j| {
                let w = C64::from_polar(1.0, 2.0 * PI * j as f64 / k);
                let phase = C64::from_polar(1.0, -2.0 * PI * (j * residue) as f64 / k);
                phase * (x * (w - 1.0)).exp()
            })
            .sum();
        (s.re / k).max(0.0)
    }
}

/// `e^{-x} f_M(x)`.
pub fn comb_f_scaled(order: usize, x: f64) -> f64 {
    residue_series_scaled(order, 0, x)
}

/// `f_M(x)` or `g_M(x)`.
///
/// `f` needs `x ≥ 0` and overflows to infinity past `x ≈ 709`; use
/// [`comb_f_scaled`] there. `g` is evaluated as
/// `(1/M) Σ_j exp(x e^{iπ(2j+1)/M})`, which avoids the cancellation of the
/// alternating series and accepts any real `x`.
pub fn comb_series(kind: CombKind, order: usize, x: f64) -> f64 {
    assert!(order >= 1, "comb series order must be ≥ 1");
    match kind {
        CombKind::F => comb_f_scaled(order, x) * x.exp(),
        CombKind::G => {
            let m = order as f64;
            let s: C64 = (0..order)
                .map(|j| (C64::from_polar(x, PI * (2 * j + 1) as f64 / m)).exp())
                .sum();
            s.re / m
        }
    }
}

/// `1 - g_M(x)/f_M(x)` without cancellation: the difference `f - g` is
/// twice the odd-`l` part of the series.
pub fn one_minus_g_over_f(order: usize, x: f64) -> f64 {
    if order == 0 || x < 0.0 {
        return f64::NAN;
    }
    2.0 * residue_series_scaled(2 * order, order, x) / comb_f_scaled(order, x)
}

/// Photon-loss parameters of a cat code.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatNoiseContext {
    alpha: C64,
    order: usize,
    gamma_t: f64,
}

impl CatNoiseContext {
    pub fn new(alpha: C64, order: usize, gamma_t: f64) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidParameter("rotation order M must be ≥ 1".into()));
        }
        if !(gamma_t >= 0.0) || !gamma_t.is_finite() {
            return Err(Error::InvalidParameter(format!("γt = {gamma_t} must be ≥ 0")));
        }
        Ok(Self {
            alpha,
            order,
            gamma_t,
        })
    }

    pub fn from_alpha_sq(alpha_sq: f64, order: usize, gamma_t: f64) -> Result<Self> {
        if !(alpha_sq >= 0.0) {
            return Err(Error::InvalidParameter(format!("|α|² = {alpha_sq} must be ≥ 0")));
        }
        Self::new(C64::new(alpha_sq.sqrt(), 0.0), order, gamma_t)
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn gamma_t(&self) -> f64 {
        self.gamma_t
    }

    pub fn alpha_sq(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    /// Effective error rate `Γ = |α|²(1 - e^{-γt})`.
    pub fn big_gamma(&self) -> f64 {
        -self.alpha_sq() * (-self.gamma_t).exp_m1()
    }

    /// Damped amplitude `α e^{-γt/2}`.
    pub fn alpha_t(&self) -> C64 {
        self.alpha * (-self.gamma_t / 2.0).exp()
    }

    pub fn legs_distinguishable(&self) -> bool {
        self.alpha_sq() >= distinguishability_threshold(self.order, 1.5)
    }
}

/// Exact probability of projecting a lossy cat `|0_L⟩` back onto its
/// symmetric subspace: `f₂M(Γ) f₂M(|α(t)|²) / f₂M(|α|²)`.
///
/// Evaluated through the scaled series; the exponentials cancel because
/// `Γ + |α(t)|² = |α|²`.
pub fn p0_exact(ctx: &CatNoiseContext) -> f64 {
    let m2 = 2 * ctx.order;
    comb_f_scaled(m2, ctx.big_gamma()) * comb_f_scaled(m2, ctx.alpha_t().norm_sqr())
        / comb_f_scaled(m2, ctx.alpha_sq())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct P0Approximations {
    /// `e^{-Γ} f₂M(Γ)`.
    pub approx_f: f64,
    /// `e^{-Γ}`.
    pub approx_exp: f64,
    /// Relative gaps `(approx - exact)/exact`.
    pub rel_gap_f: f64,
    pub rel_gap_exp: f64,
}

pub fn p0_approximations(ctx: &CatNoiseContext) -> P0Approximations {
    let g = ctx.big_gamma();
    let exact = p0_exact(ctx);
    let approx_f = comb_f_scaled(2 * ctx.order, g);
    let approx_exp = (-g).exp();
    P0Approximations {
        approx_f,
        approx_exp,
        rel_gap_f: (approx_f - exact) / exact,
        rel_gap_exp: (approx_exp - exact) / exact,
    }
}

/// Code-space projection probability of a lossy logical state, assuming
/// orthogonal `|±(t)⟩`: `e^{-Γ} f_M(Γ)`.
pub fn p_psi_approx(ctx: &CatNoiseContext) -> f64 {
    comb_f_scaled(ctx.order, ctx.big_gamma())
}

/// `M_c / N_c = |c₀||c₁| / (|c₀|² + |c₁|²)` for the leg weights of `coeffs`.
pub fn leg_weight_ratio(order: usize, coeffs: LogicalCoeffs) -> f64 {
    let (c0, c1) = coeffs.leg_weights(order);
    c0.norm() * c1.norm() / (c0.norm_sqr() + c1.norm_sqr())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceDistanceForm {
    /// `(M_c/N_c)(1 - g_M(Γ)/f_M(Γ))`.
    pub exact_form: f64,
    /// `(2M_c/N_c) Γ^M / M!`.
    pub leading_order: f64,
}

/// Trace distance between the code-space-projected lossy logical state and
/// the ideal logical state at the damped amplitude.
pub fn trace_distance_formula(ctx: &CatNoiseContext, coeffs: LogicalCoeffs) -> TraceDistanceForm {
    let m = ctx.order;
    let ratio = leg_weight_ratio(m, coeffs);
    let g = ctx.big_gamma();
    let factorial: f64 = (1..=m).map(|k| k as f64).product();
    TraceDistanceForm {
        exact_form: ratio * one_minus_g_over_f(m, g),
        leading_order: 2.0 * ratio * g.powi(m as i32) / factorial,
    }
}

/// Smallest `|α|²` at which neighbouring legs `α` and `αe^{iπ/M}` are as
/// distinguishable as `±α₀`: `α₀² / sin²(π/2M)`.
pub fn distinguishability_threshold(order: usize, alpha0_sq: f64) -> f64 {
    let s = (PI / (2.0 * order as f64)).sin();
    alpha0_sq / (s * s)
}

/// Sampling-overhead bound `e^{2 n̄ γt N_QEM}`.
pub fn overhead_bound(n_bar: f64, gamma_t: f64, n_qem: u32) -> f64 {
    (2.0 * n_bar * gamma_t * n_qem as f64).exp()
}

/// Squared norm of the unnormalized rotated-leg sum,
/// `4M² e^{-|α|²} Σ_{n ≡ r (mod 2M)} |α|^{2n}/n!` with `r = 0` for `|0_L⟩`
/// and `r = M` for `|1_L⟩`.
pub fn cat_normalization(order: usize, alpha_sq: f64, one: bool) -> f64 {
    let m2 = 2 * order;
    let r = if one { order } else { 0 };
    (m2 * m2) as f64 * residue_series_scaled(m2, r, alpha_sq)
}
