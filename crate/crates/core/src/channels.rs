//! Photon loss, dephasing, and an RK4 Lindblad integrator used as an oracle.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fock::{coherent_state, strides, DensityMatrix, FockOperator, FockVector, C64};

/// Largest discarded Kraus weight tolerated by an explicit cutoff.
pub const KRAUS_DEFICIT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    PhotonLoss,
    Dephasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cutoff {
    Exact,
    Explicit(usize),
    /// Starting order, raised until the discarded weight is within tolerance.
    Floor(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    kind: NoiseKind,
    gamma_t: f64,
    cutoff: Cutoff,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, gamma_t: f64) -> Result<Self> {
        if !(gamma_t >= 0.0) || !gamma_t.is_finite() {
            return Err(Error::InvalidParameter(format!("γt = {gamma_t} must be ≥ 0")));
        }
        Ok(Self {
            kind,
            gamma_t,
            cutoff: Cutoff::Exact,
        })
    }

    pub fn photon_loss(gamma_t: f64) -> Result<Self> {
        Self::new(NoiseKind::PhotonLoss, gamma_t)
    }

    pub fn dephasing(gamma_t: f64) -> Result<Self> {
        Self::new(NoiseKind::Dephasing, gamma_t)
    }

    /// Keep Kraus orders `0..=cutoff` only. Without a cutoff every order that
    /// fits in the truncation is kept and the channel is exact.
    pub fn with_cutoff(mut self, cutoff: usize) -> Self {
        self.cutoff = Cutoff::Explicit(cutoff);
        self
    }

    /// Poisson-tail cutoff `ceil(n̄γt + 10√(n̄γt) + 10)`, raised where needed
    /// so that no Fock level in the truncation loses more than
    /// [`KRAUS_DEFICIT_TOL`].
    pub fn with_default_cutoff(mut self, n_bar: f64) -> Self {
        let lam = (n_bar * self.gamma_t).max(0.0);
        self.cutoff = Cutoff::Floor((lam + 10.0 * lam.sqrt() + 10.0).ceil() as usize);
        self
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn gamma_t(&self) -> f64 {
        self.gamma_t
    }

    /// Requested cutoff; `None` keeps every order.
    pub fn kraus_cutoff(&self) -> Option<usize> {
        match self.cutoff {
            Cutoff::Exact => None,
            Cutoff::Explicit(c) | Cutoff::Floor(c) => Some(c),
        }
    }

    /// Survival amplitude damping `η = e^{-γt}`.
    pub fn eta(&self) -> f64 {
        (-self.gamma_t).exp()
    }

    fn require(&self, kind: NoiseKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::InvalidParameter(format!(
                "operation needs a {kind:?} noise spec, got {:?}",
                self.kind
            )));
        }
        Ok(())
    }
}

/// `ln k!` for `k < n`.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut acc = 0.0;
    for k in 0..n {
        if k > 1 {
            acc += (k as f64).ln();
        }
        out.push(acc);
    }
    out
}

/// Binomial loss weights `w[L][j] = binom(j, L)(1-η)^L η^{j-L}` for
/// `L ≤ max_order`, `j < dim`.
struct LossWeights {
    w: Vec<Vec<f64>>,
}

impl LossWeights {
    fn new(gamma_t: f64, dim: usize, max_order: usize) -> Self {
        let lf = ln_factorials(dim);
        let ln_eta = -gamma_t;
        let ln_loss = (-(-gamma_t).exp_m1()).ln();
        let w = (0..=max_order)
            .map(|l| {
                (0..dim)
                    .map(|j| {
                        if j < l {
                            0.0
                        } else if l == 0 {
                            (j as f64 * ln_eta).exp()
                        } else if gamma_t == 0.0 {
                            0.0
                        } else {
                            (lf[j] - lf[l] - lf[j - l] + l as f64 * ln_loss
                                + (j - l) as f64 * ln_eta)
                                .exp()
                        }
                    })
                    .collect()
            })
            .collect();
        Self { w }
    }

    /// Largest weight discarded at any Fock level when only orders
    /// `0..=order` are kept.
    fn deficit_at(&self, order: usize) -> f64 {
        let dim = self.w[0].len();
        (0..dim)
            .map(|j| self.w[order + 1..].iter().map(|row| row[j]).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

fn loss_orders(spec: &NoiseSpec, dim: usize) -> Result<(usize, LossWeights)> {
    spec.require(NoiseKind::PhotonLoss)?;
    let top = dim.saturating_sub(1);
    let mut weights = LossWeights::new(spec.gamma_t(), dim, top);
    let order = match spec.cutoff {
        Cutoff::Exact => top,
        Cutoff::Explicit(c) => {
            let order = c.min(top);
            let deficit = weights.deficit_at(order);
            if deficit > KRAUS_DEFICIT_TOL {
                return Err(Error::KrausCutoff { cutoff: order, deficit });
            }
            order
        }
        Cutoff::Floor(c) => (c.min(top)..=top)
            .find(|&o| weights.deficit_at(o) <= KRAUS_DEFICIT_TOL)
            .unwrap_or(top),
    };
    weights.w.truncate(order + 1);
    Ok((order, weights))
}

/// Kraus operators `K_L = √((1-e^{-γt})^L/L!) e^{-γtN/2} a^L`.
pub fn photon_loss_kraus(spec: &NoiseSpec, dim: usize) -> Result<Vec<FockOperator>> {
    let (order, weights) = loss_orders(spec, dim)?;
    Ok((0..=order)
        .map(|l| {
            let mut k = DMatrix::zeros(dim, dim);
            for j in l..dim {
                k[(j - l, j)] = C64::new(weights.w[l][j].sqrt(), 0.0);
            }
            FockOperator::Dense(k)
        })
        .collect())
}

/// `max |Σ K†K - I|`.
pub fn completeness_deficit(kraus: &[FockOperator]) -> f64 {
    let Some(first) = kraus.first() else {
        return f64::INFINITY;
    };
    let dim = first.dim();
    let mut acc = FockOperator::identity(dim).scale(C64::new(-1.0, 0.0)).to_dense();
    for k in kraus {
        let d = k.to_dense();
        acc += d.adjoint() * d;
    }
    acc.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
}

/// `Σ_k K_k ρ K_k†`, summed in Kraus order.
pub fn apply_kraus(rho: &DensityMatrix, kraus: &[FockOperator], exec: Exec) -> Result<DensityMatrix> {
    let terms = exec.try_map(kraus.len(), |i| rho.conjugate(&kraus[i]))?;
    let mut mat = DMatrix::zeros(rho.dim(), rho.dim());
    for t in &terms {
        mat += t.matrix();
    }
    DensityMatrix::new(rho.dims().to_vec(), mat)
}

/// Photon loss on subsystem `mode`, exploiting the shift structure of the
/// Kraus operators.
pub fn apply_photon_loss(rho: &DensityMatrix, spec: &NoiseSpec, mode: usize) -> Result<DensityMatrix> {
    apply_photon_loss_with(rho, spec, mode, Exec::default())
}

pub fn apply_photon_loss_with(
    rho: &DensityMatrix,
    spec: &NoiseSpec,
    mode: usize,
    exec: Exec,
) -> Result<DensityMatrix> {
    if mode >= rho.dims().len() {
        return Err(Error::InvalidParameter(format!("no mode {mode}")));
    }
    let (_, d, right) = strides(rho.dims(), mode);
    let (order, weights) = loss_orders(spec, d)?;
    let amps: Vec<Vec<f64>> = weights.w.iter().map(|r| r.iter().map(|x| x.sqrt()).collect()).collect();
    let n = rho.dim();
    let src = rho.matrix();
    let level = |i: usize| (i / right) % d;
    let shift = |i: usize, ell: usize| i + ell * right;

    // Each output entry sums its Kraus orders in increasing order, so the
    // result does not depend on how columns are scheduled.
    let columns = exec.map(n, |j| {
        let sj = level(j);
        (0..n)
            .map(|i| {
                let si = level(i);
                let top = order.min(d - 1 - si.max(sj));
                let mut acc = C64::new(0.0, 0.0);
                for ell in 0..=top {
                    acc += src[(shift(i, ell), shift(j, ell))] * (amps[ell][si + ell] * amps[ell][sj + ell]);
                }
                acc
            })
            .collect::<Vec<_>>()
    });
    let mat = DMatrix::from_fn(n, n, |i, j| columns[j][i]);
    DensityMatrix::new(rho.dims().to_vec(), mat)
}

/// Closed-form photon loss on `Σ_m c_m |α_m⟩`:
/// `Σ c_m c*_{m'} e^{(1-η)α_m α*_{m'}} e^{-(|α_m|²+|α_{m'}|²)(1-η)/2} |α_m√η⟩⟨α_{m'}√η|`
/// with `η = e^{-γt}`.
pub fn loss_on_coherent_superposition(
    coeffs: &[C64],
    alphas: &[C64],
    gamma_t: f64,
    dim: usize,
) -> Result<DensityMatrix> {
    if coeffs.len() != alphas.len() {
        return Err(Error::DimensionMismatch {
            expected: coeffs.len(),
            got: alphas.len(),
        });
    }
    if !(gamma_t >= 0.0) {
        return Err(Error::InvalidParameter(format!("γt = {gamma_t} must be ≥ 0")));
    }
    let eta = (-gamma_t).exp();
    let lost = -(-gamma_t).exp_m1();
    let legs: Vec<FockVector> = alphas
        .iter()
        .map(|a| coherent_state(a * eta.sqrt(), dim))
        .collect::<Result<_>>()?;
    let mut mat = DMatrix::zeros(dim, dim);
    for (i, (ci, ai)) in coeffs.iter().zip(alphas).enumerate() {
        for (j, (cj, aj)) in coeffs.iter().zip(alphas).enumerate() {
            let w = ci * cj.conj()
                * (lost * ai * aj.conj() - (ai.norm_sqr() + aj.norm_sqr()) * lost / 2.0).exp();
            mat += (legs[i].amps() * legs[j].amps().adjoint()) * w;
        }
    }
    DensityMatrix::single_mode(mat)
}

/// Exact dephasing of a single-mode state,
/// `ρ_{mn} ↦ ρ_{mn} e^{-γt(m-n)²/2}`.
pub fn dephasing_channel(spec: &NoiseSpec, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dims().len() != 1 {
        return Err(Error::InvalidParameter("dephasing_channel expects one mode; use dephase_mode".into()));
    }
    dephase_mode(spec, rho, 0)
}

/// Dephasing on subsystem `mode` of a multi-mode state.
pub fn dephase_mode(spec: &NoiseSpec, rho: &DensityMatrix, mode: usize) -> Result<DensityMatrix> {
    spec.require(NoiseKind::Dephasing)?;
    if mode >= rho.dims().len() {
        return Err(Error::InvalidParameter(format!("no mode {mode}")));
    }
    let (_, d, right) = strides(rho.dims(), mode);
    let gt = spec.gamma_t();
    let damp: Vec<f64> = (0..d).map(|k| (-gt * (k * k) as f64 / 2.0).exp()).collect();
    let level = |i: usize| (i / right) % d;
    let src = rho.matrix();
    let mat = DMatrix::from_fn(rho.dim(), rho.dim(), |i, j| {
        src[(i, j)] * damp[level(i).abs_diff(level(j))]
    });
    DensityMatrix::new(rho.dims().to_vec(), mat)
}

pub const DEFAULT_LINDBLAD_STEPS: usize = 2000;
const LINDBLAD_MIN_STEPS: usize = 100;
const LINDBLAD_TOL: f64 = 1e-6;

fn rk4(rho0: &DMatrix<C64>, jump: &FockOperator, gamma_t: f64, steps: usize) -> DMatrix<C64> {
    let l = jump.to_dense();
    let ld = l.adjoint();
    let k = &ld * &l;
    let diag = jump.as_diagonal().cloned();
    let deriv = |r: &DMatrix<C64>| -> DMatrix<C64> {
        let (lrl, kr, rk) = match &diag {
            Some(d) => {
                let n = r.nrows();
                let lrl = DMatrix::from_fn(n, n, |i, j| d[i] * r[(i, j)] * d[j].conj());
                let kd = d.map(|z| z.norm_sqr());
                let kr = DMatrix::from_fn(n, n, |i, j| r[(i, j)] * kd[i]);
                let rk = DMatrix::from_fn(n, n, |i, j| r[(i, j)] * kd[j]);
                (lrl, kr, rk)
            }
            None => (&l * r * &ld, &k * r, r * &k),
        };
        lrl - (kr + rk) * C64::new(0.5, 0.0)
    };
    let h = gamma_t / steps as f64;
    let mut r = rho0.clone();
    for _ in 0..steps {
        let k1 = deriv(&r);
        let k2 = deriv(&(&r + &k1 * C64::new(h / 2.0, 0.0)));
        let k3 = deriv(&(&r + &k2 * C64::new(h / 2.0, 0.0)));
        let k4 = deriv(&(&r + &k3 * C64::new(h, 0.0)));
        r += (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * C64::new(h / 6.0, 0.0);
    }
    r
}

/// Fixed-step RK4 solution of `dρ/dτ = LρL† - ½{L†L, ρ}` from `τ = 0` to
/// `γt`. The run is repeated at half the step count and rejected if the two
/// disagree by more than 1e-6 in any entry.
pub fn lindblad_integrator(
    rho0: &DensityMatrix,
    jump: &FockOperator,
    gamma_t: f64,
    steps: usize,
) -> Result<DensityMatrix> {
    if steps < LINDBLAD_MIN_STEPS {
        return Err(Error::StepsTooFew {
            steps,
            difference: f64::INFINITY,
        });
    }
    if jump.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho0.dim(),
            got: jump.dim(),
        });
    }
    if !(gamma_t >= 0.0) {
        return Err(Error::InvalidParameter(format!("γt = {gamma_t} must be ≥ 0")));
    }
    let fine = rk4(rho0.matrix(), jump, gamma_t, steps);
    let coarse = rk4(rho0.matrix(), jump, gamma_t, steps / 2);
    let difference = (&fine - &coarse).iter().fold(0.0_f64, |m, z| m.max(z.norm()));
    if difference > LINDBLAD_TOL {
        return Err(Error::StepsTooFew { steps, difference });
    }
    DensityMatrix::new(rho0.dims().to_vec(), fine)
}
