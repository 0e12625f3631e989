//! Symmetry expansion (SE) for rotation-symmetric codes.
//!
//! Three variants share one mechanism, the generalized process
//! `ρ ↦ UρV†` read out through an ancilla Hadamard test:
//!
//! - state preparation ([`state_prep`]): noisy logical zeros are projected
//!   with `P₂M⁽⁰⁾` and resource states with the code-space projector;
//! - pre-measurement ([`measurement`]): the `Ẑ_M^{⊗N}` readout is restricted
//!   to the code space;
//! - virtual creation ([`virtual_state`]): a primitive state is projected
//!   into a codeword.
//!
//! Each variant has an exact path and a shot-level path. A shot collapses
//! the Hadamard test to a ±1 ancilla-X outcome with `P(+1) = (1 + Re c)/2`,
//! where `c` is the exact circuit amplitude.

pub mod cost;
pub mod hadamard;
pub mod measurement;
pub mod state_prep;
pub mod virtual_state;

pub use cost::{combined_cost, sampling_cost, shots_for_accuracy, verification_comparison, VerificationComparison};
pub use hadamard::{ancilla_pauli_expectations, generalized_expectation, hadamard_test_state};
pub use measurement::{se_measurement_exact, se_measurement_sampled, MeasurementExact};
pub use state_prep::{se_state_prep_exact, se_state_prep_sampled, StatePrepExact};
pub use virtual_state::{virtual_code_state, VirtualState};

use crate::codes::CodeSpec;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fock::{logical_z_power, FockOperator, C64};

/// Desk-scale cap on the number of bosonic modes in a plan.
pub const MAX_MODES: usize = 2;

/// Which projector each mode receives, the computation applied afterwards,
/// and the measured observable.
///
/// Modes are ordered zero modes first, then resource modes.
#[derive(Debug, Clone)]
pub struct SEPlan {
    zero_modes: Vec<CodeSpec>,
    resource_modes: Vec<CodeSpec>,
    computation: Option<FockOperator>,
    observables: Vec<Option<FockOperator>>,
}

impl SEPlan {
    /// Plan measuring `Ẑ_M` on every mode with no computation.
    pub fn new(zero_modes: Vec<CodeSpec>, resource_modes: Vec<CodeSpec>) -> Result<Self> {
        let n = zero_modes.len() + resource_modes.len();
        if n == 0 {
            return Err(Error::InvalidParameter("an SE plan needs at least one mode".into()));
        }
        if n > MAX_MODES {
            return Err(Error::InvalidParameter(format!(
                "{n} modes exceed the supported maximum of {MAX_MODES}"
            )));
        }
        let observables = zero_modes
            .iter()
            .chain(&resource_modes)
            .map(|s| Some(logical_z_power(s.order(), 1, s.dim())))
            .collect();
        Ok(Self {
            zero_modes,
            resource_modes,
            computation: None,
            observables,
        })
    }

    /// Joint unitary applied after the projections.
    pub fn with_computation(mut self, u: FockOperator) -> Result<Self> {
        let total: usize = self.dims().iter().product();
        if u.dim() != total {
            return Err(Error::DimensionMismatch {
                expected: total,
                got: u.dim(),
            });
        }
        if !u.is_unitary() {
            return Err(Error::NotUnitary(u.unitarity_deviation()));
        }
        self.computation = Some(u);
        Ok(self)
    }

    /// Replace the observable on `mode`; it must be unitary so that it can
    /// be absorbed into the controlled operations.
    pub fn with_observable(mut self, mode: usize, op: FockOperator) -> Result<Self> {
        let dims = self.dims();
        let Some(&d) = dims.get(mode) else {
            return Err(Error::InvalidParameter(format!("no mode {mode}")));
        };
        if op.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: op.dim() });
        }
        if !op.is_unitary() {
            return Err(Error::NotUnitary(op.unitarity_deviation()));
        }
        self.observables[mode] = Some(op);
        Ok(self)
    }

    /// Measure only the listed modes; the rest get the identity.
    pub fn measure_only(mut self, modes: &[usize]) -> Result<Self> {
        if let Some(&bad) = modes.iter().find(|&&m| m >= self.num_modes()) {
            return Err(Error::InvalidParameter(format!("no mode {bad}")));
        }
        for (i, obs) in self.observables.iter_mut().enumerate() {
            if !modes.contains(&i) {
                *obs = None;
            }
        }
        Ok(self)
    }

    pub fn zero_modes(&self) -> &[CodeSpec] {
        &self.zero_modes
    }

    pub fn resource_modes(&self) -> &[CodeSpec] {
        &self.resource_modes
    }

    pub fn num_modes(&self) -> usize {
        self.zero_modes.len() + self.resource_modes.len()
    }

    pub fn specs(&self) -> impl Iterator<Item = &CodeSpec> {
        self.zero_modes.iter().chain(&self.resource_modes)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.specs().map(|s| s.dim()).collect()
    }

    pub fn is_zero_mode(&self, mode: usize) -> bool {
        mode < self.zero_modes.len()
    }

    pub fn computation(&self) -> Option<&FockOperator> {
        self.computation.as_ref()
    }

    pub fn measured_modes(&self) -> Vec<usize> {
        (0..self.num_modes())
            .filter(|&i| self.observables[i].is_some())
            .collect()
    }

    /// `⊗_i O_i` with identities on unmeasured modes.
    pub fn joint_observable(&self) -> FockOperator {
        let dims = self.dims();
        let mut acc: Option<FockOperator> = None;
        for (i, obs) in self.observables.iter().enumerate() {
            let op = obs.clone().unwrap_or_else(|| FockOperator::identity(dims[i]));
            acc = Some(match acc {
                None => op,
                Some(a) => a.kron(&op),
            });
        }
        acc.expect("plan has at least one mode")
    }

    /// Symmetry operators sampled on `mode`: `Ẑ_M^k` for `k < 2M` on zero
    /// modes, `R̂_M^l = Ẑ_M^{2l}` for `l < M` on resource modes.
    pub(crate) fn symmetry_diagonals(&self, mode: usize) -> Vec<Vec<C64>> {
        let spec = self.specs().nth(mode).expect("mode in range");
        let m = spec.order();
        let (count, step) = if self.is_zero_mode(mode) { (2 * m, 1) } else { (m, 2) };
        (0..count)
            .map(|k| {
                let op = logical_z_power(m, step * k, spec.dim());
                op.as_diagonal().expect("rotation is diagonal").iter().copied().collect()
            })
            .collect()
    }
}

/// Where the projection probabilities in the estimator's denominator come
/// from.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbSource {
    /// Computed from the noisy states.
    Exact,
    /// Given by the caller, one per mode in plan order.
    Supplied(Vec<f64>),
    /// Estimated with this many extra Hadamard-test shots per mode.
    Sampled { shots: usize },
}

#[derive(Debug, Clone)]
pub struct SampleOptions {
    pub shots: usize,
    pub seed: u64,
    pub probs: ProbSource,
    pub keep_log: bool,
    pub exec: Exec,
}

impl SampleOptions {
    pub fn new(shots: usize, seed: u64) -> Self {
        Self {
            shots,
            seed,
            probs: ProbSource::Exact,
            keep_log: false,
            exec: Exec::default(),
        }
    }

    pub fn with_probs(mut self, probs: ProbSource) -> Self {
        self.probs = probs;
        self
    }

    pub fn with_log(mut self) -> Self {
        self.keep_log = true;
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }
}

/// One simulated Hadamard-test run.
#[derive(Debug, Clone, PartialEq)]
pub struct ShotRecord {
    /// Sampled symmetry indices: `(k⃗, l⃗)` followed by `(k⃗', l⃗')` for
    /// state preparation, `m⃗` for pre-measurement SE.
    pub indices: Vec<usize>,
    pub amplitude: C64,
    pub outcome: i8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SEEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub shots: usize,
    /// Probabilities used in the denominator, in plan order.
    pub proj_probs: Vec<f64>,
    /// `(∏ p)^{-2}`.
    pub cost_c: f64,
    pub per_shot_log: Option<Vec<ShotRecord>>,
}

impl SEEstimate {
    /// Shots needed for standard error `eps` at this estimate's per-shot
    /// variance.
    pub fn shots_for(&self, eps: f64) -> f64 {
        let per_shot_var = self.std_error * self.std_error * self.shots as f64;
        per_shot_var / (eps * eps)
    }
}

/// Ancilla outcome drawn with `P(+1) = (1 + Re c)/2`.
pub(crate) fn ancilla_outcome<R: rand::Rng>(rng: &mut R, c: C64) -> i8 {
    if rng.random::<f64>() < 0.5 * (1.0 + c.re) {
        1
    } else {
        -1
    }
}

/// Reject circuit amplitudes outside the unit disk.
pub(crate) fn check_amplitudes(table: &[C64]) -> Result<()> {
    match table.iter().map(|c| c.norm()).fold(0.0_f64, f64::max) {
        r if r > 1.0 + 1e-9 => Err(Error::AmplitudeOutOfRange(r)),
        _ => Ok(()),
    }
}

/// Mean and unbiased variance of ±1 outcomes.
pub(crate) fn outcome_moments(outcomes: &[i8]) -> (f64, f64) {
    let n = outcomes.len() as f64;
    let mean = outcomes.iter().map(|&o| o as f64).sum::<f64>() / n;
    let var = if outcomes.len() > 1 {
        outcomes
            .iter()
            .map(|&o| (o as f64 - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0)
    } else {
        0.0
    };
    (mean, var)
}

/// Decompose `flat` into mixed-radix digits, least significant last.
pub(crate) fn digits(mut flat: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (i, &r) in radices.iter().enumerate().rev() {
        out[i] = flat % r;
        flat /= r;
    }
    out
}
