//! SE at state preparation.
//!
//! Zero modes are projected with `P₂M⁽⁰⁾ = (1/2M) Σ_k Ẑ_M^k` and resource
//! modes with `P₂M⁽ᶜ⁾ = (1/M) Σ_l R̂_M^l`. The sampled estimator draws
//! `(k⃗, l⃗)` for `U` and `(k⃗', l⃗')` for `V` uniformly, so the mean of
//! `Tr[O U_C UρV† U_C†]` over draws equals `∏p∏q ⟨O_SE⟩`.

use nalgebra::DVector;
use rand::Rng;

use super::{
    ancilla_outcome, check_amplitudes, digits, outcome_moments, ProbSource, SEEstimate, SEPlan,
    SampleOptions, ShotRecord,
};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fock::{DensityMatrix, FockOperator, C64};
use crate::projectors::{code_projector, project_state, rotation_projector, MIN_PROJECTION_PROB};
use crate::rng::ShotStreams;

#[derive(Debug, Clone, PartialEq)]
pub struct StatePrepExact {
    /// `Re Tr[O U_C(⊗ρˢ)U_C†]`.
    pub value: f64,
    /// Imaginary part, zero for observables Hermitian on the code space.
    pub imag: f64,
    /// `pᵢ` then `qⱼ`, in plan order.
    pub proj_probs: Vec<f64>,
    pub cost_c: f64,
}

fn mode_projector(plan: &SEPlan, mode: usize) -> Result<FockOperator> {
    let spec = plan.specs().nth(mode).expect("mode in range");
    if plan.is_zero_mode(mode) {
        rotation_projector(spec.order(), 0, spec.dim())
    } else {
        code_projector(spec.order(), spec.dim())
    }
}

fn check_states(plan: &SEPlan, noisy: &[DensityMatrix]) -> Result<()> {
    if noisy.len() != plan.num_modes() {
        return Err(Error::DimensionMismatch {
            expected: plan.num_modes(),
            got: noisy.len(),
        });
    }
    for (rho, d) in noisy.iter().zip(plan.dims()) {
        if rho.dims() != [d] {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: rho.dim(),
            });
        }
    }
    Ok(())
}

fn joint_state(states: &[DensityMatrix]) -> DensityMatrix {
    let mut it = states.iter();
    let first = it.next().expect("at least one mode").clone();
    it.fold(first, |acc, s| acc.tensor(s))
}

/// Observable pulled back through the computation, `U_C† O U_C`.
fn effective_observable(plan: &SEPlan) -> FockOperator {
    let o = plan.joint_observable();
    match plan.computation() {
        Some(u) => u.dagger().compose(&o).compose(u),
        None => o,
    }
}

pub fn se_state_prep_exact(plan: &SEPlan, noisy: &[DensityMatrix]) -> Result<StatePrepExact> {
    check_states(plan, noisy)?;
    let mut projected = Vec::with_capacity(noisy.len());
    let mut probs = Vec::with_capacity(noisy.len());
    for (mode, rho) in noisy.iter().enumerate() {
        let (s, p) = project_state(rho, &mode_projector(plan, mode)?)?;
        projected.push(s);
        probs.push(p);
    }
    let mut joint = joint_state(&projected);
    if let Some(u) = plan.computation() {
        joint = joint.conjugate(u)?;
    }
    let v = joint.expectation(&plan.joint_observable())?;
    let cost_c = super::sampling_cost(&probs)?;
    Ok(StatePrepExact {
        value: v.re,
        imag: v.im,
        proj_probs: probs,
        cost_c,
    })
}

/// Diagonals of every joint symmetry operator `⊗ S_i`, indexed by the
/// mixed-radix combination of per-mode indices.
struct SymmetryCombos {
    radices: Vec<usize>,
    diagonals: Vec<DVector<C64>>,
}

impl SymmetryCombos {
    fn new(plan: &SEPlan) -> Self {
        let per_mode: Vec<Vec<Vec<C64>>> = (0..plan.num_modes()).map(|m| plan.symmetry_diagonals(m)).collect();
        let radices: Vec<usize> = per_mode.iter().map(|v| v.len()).collect();
        let count: usize = radices.iter().product();
        let diagonals = (0..count)
            .map(|flat| {
                let idx = digits(flat, &radices);
                let mut acc = DVector::from_element(1, C64::new(1.0, 0.0));
                for (mode, &k) in idx.iter().enumerate() {
                    acc = acc.kronecker(&DVector::from_column_slice(&per_mode[mode][k]));
                }
                acc
            })
            .collect();
        Self { radices, diagonals }
    }

    fn len(&self) -> usize {
        self.diagonals.len()
    }
}

/// `c[u][v] = Tr[O' U ρ V†]` for every pair of symmetry combinations,
/// flattened row-major.
fn amplitude_table(o: &FockOperator, rho: &DensityMatrix, combos: &SymmetryCombos, exec: Exec) -> Vec<C64> {
    let n = rho.dim();
    let r = rho.matrix();
    // Tr[O' U ρ V†] = Σ_ij O'_ji u_i ρ_ij v̄_j.
    let weighted: Vec<DVector<C64>> = match o.as_diagonal() {
        Some(d) => {
            let b: Vec<C64> = (0..n).map(|i| d[i] * r[(i, i)]).collect();
            exec.map(combos.len(), |v| {
                let vd = &combos.diagonals[v];
                DVector::from_fn(n, |i, _| b[i] * vd[i].conj())
            })
        }
        None => {
            let od = o.to_dense();
            let b = nalgebra::DMatrix::from_fn(n, n, |i, j| od[(j, i)] * r[(i, j)]);
            exec.map(combos.len(), |v| &b * combos.diagonals[v].map(|z| z.conj()))
        }
    };
    let nu = combos.len();
    exec.map(nu * nu, |flat| {
        let (u, v) = (flat / nu, flat % nu);
        combos.diagonals[u]
            .iter()
            .zip(weighted[v].iter())
            .map(|(a, b)| a * b)
            .sum()
    })
}

struct ProbEstimate {
    probs: Vec<f64>,
    /// Variance of the estimate of each probability.
    variances: Vec<f64>,
}

fn exact_probs(plan: &SEPlan, noisy: &[DensityMatrix]) -> Result<Vec<f64>> {
    noisy
        .iter()
        .enumerate()
        .map(|(mode, rho)| {
            let p = rho.expectation(&mode_projector(plan, mode)?)?.re;
            if p > MIN_PROJECTION_PROB {
                Ok(p)
            } else {
                Err(Error::ProjectionImpossible(p))
            }
        })
        .collect()
}

/// Hadamard-test estimates of each mode's projection probability, using
/// random streams after the estimator's own.
fn sampled_probs(
    plan: &SEPlan,
    noisy: &[DensityMatrix],
    shots: usize,
    opts: &SampleOptions,
    streams: &ShotStreams,
) -> Result<ProbEstimate> {
    if shots == 0 {
        return Err(Error::NoShots);
    }
    let mut probs = Vec::new();
    let mut variances = Vec::new();
    for (mode, rho) in noisy.iter().enumerate() {
        let diags = plan.symmetry_diagonals(mode);
        let k = diags.len();
        let pops = rho.populations();
        let table: Vec<C64> = (0..k * k)
            .map(|flat| {
                let (a, b) = (&diags[flat / k], &diags[flat % k]);
                (0..pops.len()).map(|n| a[n] * b[n].conj() * pops[n]).sum()
            })
            .collect();
        check_amplitudes(&table)?;
        let offset = opts.shots as u64 + (mode * shots) as u64;
        let outcomes = opts.exec.map(shots, |s| {
            let mut rng = streams.stream(offset + s as u64);
            let flat = rng.random_range(0..k * k);
            ancilla_outcome(&mut rng, table[flat])
        });
        let (mean, var) = outcome_moments(&outcomes);
        let se = (var / shots as f64).sqrt();
        if mean <= 3.0 * se {
            return Err(Error::UnstableRatio { value: mean, std_error: se });
        }
        probs.push(mean);
        variances.push(var / shots as f64);
    }
    Ok(ProbEstimate { probs, variances })
}

pub fn se_state_prep_sampled(plan: &SEPlan, noisy: &[DensityMatrix], opts: &SampleOptions) -> Result<SEEstimate> {
    check_states(plan, noisy)?;
    if opts.shots == 0 {
        return Err(Error::NoShots);
    }
    let streams = ShotStreams::new(opts.seed);
    let prob_est = match &opts.probs {
        ProbSource::Exact => ProbEstimate {
            probs: exact_probs(plan, noisy)?,
            variances: vec![0.0; noisy.len()],
        },
        ProbSource::Supplied(p) => {
            if p.len() != noisy.len() {
                return Err(Error::DimensionMismatch {
                    expected: noisy.len(),
                    got: p.len(),
                });
            }
            if let Some(&bad) = p.iter().find(|&&x| !(x > 0.0 && x <= 1.0)) {
                return Err(Error::InvalidParameter(format!("probability {bad} outside (0, 1]")));
            }
            ProbEstimate {
                probs: p.clone(),
                variances: vec![0.0; p.len()],
            }
        }
        ProbSource::Sampled { shots } => sampled_probs(plan, noisy, *shots, opts, &streams)?,
    };

    let combos = SymmetryCombos::new(plan);
    let rho = joint_state(noisy);
    let table = amplitude_table(&effective_observable(plan), &rho, &combos, opts.exec);
    check_amplitudes(&table)?;

    let nu = combos.len();
    let draws = opts.exec.map(opts.shots, |s| {
        let mut rng = streams.stream(s as u64);
        let u = rng.random_range(0..nu);
        let v = rng.random_range(0..nu);
        let c = table[u * nu + v];
        (u, v, c, ancilla_outcome(&mut rng, c))
    });
    let outcomes: Vec<i8> = draws.iter().map(|d| d.3).collect();
    let (x, var_x) = outcome_moments(&outcomes);
    let var_xbar = var_x / opts.shots as f64;

    let y: f64 = prob_est.probs.iter().product();
    let rel_var_y: f64 = prob_est
        .probs
        .iter()
        .zip(&prob_est.variances)
        .map(|(p, v)| v / (p * p))
        .sum();
    let mean = x / y;
    let var_mean = (var_xbar + mean * mean * y * y * rel_var_y) / (y * y);

    let per_shot_log = opts.keep_log.then(|| {
        draws
            .iter()
            .map(|&(u, v, c, o)| {
                let mut indices = digits(u, &combos.radices);
                indices.extend(digits(v, &combos.radices));
                ShotRecord {
                    indices,
                    amplitude: c,
                    outcome: o,
                }
            })
            .collect()
    });
    Ok(SEEstimate {
        mean,
        std_error: var_mean.sqrt(),
        shots: opts.shots,
        cost_c: super::sampling_cost(&prob_est.probs)?,
        proj_probs: prob_est.probs,
        per_shot_log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{apply_photon_loss, NoiseSpec};
    use crate::codes::{codeword, logical_state, CodeSpec, Logical, LogicalCoeffs};
    use crate::fock::{crot_gate, logical_z_power};
    use crate::projectors::project_state;

    fn cat(m: usize, alpha_sq: f64, dim: usize) -> CodeSpec {
        CodeSpec::cat(m, C64::new(alpha_sq.sqrt(), 0.0), dim).unwrap()
    }

    fn lossy(spec: &CodeSpec, coeffs: LogicalCoeffs, gt: f64) -> DensityMatrix {
        let rho = logical_state(spec, coeffs).unwrap().density();
        apply_photon_loss(&rho, &NoiseSpec::photon_loss(gt).unwrap(), 0).unwrap()
    }

    #[test]
    fn noiseless_zero_gives_plus_one() {
        let spec = cat(2, 4.0, 36);
        let plan = SEPlan::new(vec![spec], vec![]).unwrap();
        let rho = codeword(&spec, Logical::Zero).unwrap().density();
        let exact = se_state_prep_exact(&plan, std::slice::from_ref(&rho)).unwrap();
        assert!((exact.value - 1.0).abs() < 1e-10);
        assert!((exact.proj_probs[0] - 1.0).abs() < 1e-10);
        let est = se_state_prep_sampled(&plan, &[rho], &SampleOptions::new(500, 3).with_log()).unwrap();
        assert_eq!(est.mean, 1.0);
        assert!(est.per_shot_log.unwrap().iter().all(|r| r.outcome == 1));
    }

    #[test]
    fn lossy_zero_projects_to_ideal() {
        let spec = cat(2, 4.0, 40);
        let plan = SEPlan::new(vec![spec], vec![]).unwrap();
        let rho = lossy(&spec, LogicalCoeffs::zero(), 0.1);
        let exact = se_state_prep_exact(&plan, &[rho]).unwrap();
        assert!((exact.value - 1.0).abs() < 1e-8);
        assert!(exact.imag.abs() < 1e-10);
    }

    #[test]
    fn matches_project_then_measure() {
        let spec = cat(2, 4.0, 40);
        let plan = SEPlan::new(vec![], vec![spec]).unwrap();
        let rho = lossy(&spec, LogicalCoeffs::plus(), 0.1);
        let exact = se_state_prep_exact(&plan, std::slice::from_ref(&rho)).unwrap();
        let (s, q) = project_state(&rho, &code_projector(2, 40).unwrap()).unwrap();
        let direct = s.expectation(&logical_z_power(2, 1, 40)).unwrap().re;
        assert!((exact.value - direct).abs() <= 1e-12);
        assert!((exact.proj_probs[0] - q).abs() <= 1e-12);
    }

    #[test]
    fn sampled_estimate_tracks_exact() {
        let spec = cat(2, 4.0, 36);
        let plan = SEPlan::new(vec![spec], vec![]).unwrap();
        let rho = lossy(&spec, LogicalCoeffs::zero(), 0.1);
        let exact = se_state_prep_exact(&plan, std::slice::from_ref(&rho)).unwrap();
        let est = se_state_prep_sampled(&plan, &[rho], &SampleOptions::new(20_000, 11)).unwrap();
        assert!((est.mean - exact.value).abs() < 5.0 * est.std_error);
        assert!((est.cost_c - exact.cost_c).abs() < 1e-12);
    }

    #[test]
    fn two_mode_plan_with_crot() {
        let a = cat(2, 3.0, 24);
        let b = cat(2, 3.0, 24);
        let crot = crot_gate(2, 2, 24, 24).unwrap();
        let plan = SEPlan::new(vec![a], vec![b])
            .unwrap()
            .with_computation(crot)
            .unwrap()
            .measure_only(&[1])
            .unwrap();
        let states = [
            lossy(&a, LogicalCoeffs::zero(), 0.05),
            lossy(&b, LogicalCoeffs::plus(), 0.05),
        ];
        let exact = se_state_prep_exact(&plan, &states).unwrap();
        let seq = se_state_prep_sampled(&plan, &states, &SampleOptions::new(4000, 5).with_exec(Exec::Sequential)).unwrap();
        let par = se_state_prep_sampled(&plan, &states, &SampleOptions::new(4000, 5).with_exec(Exec::Parallel)).unwrap();
        assert_eq!(seq, par);
        assert!((seq.mean - exact.value).abs() < 5.0 * seq.std_error);
    }

    #[test]
    fn dense_observable_path_agrees_with_diagonal_path() {
        let spec = cat(2, 3.0, 24);
        let rho = lossy(&spec, LogicalCoeffs::plus_i(), 0.05);
        let plan = SEPlan::new(vec![], vec![spec]).unwrap();
        let z = logical_z_power(2, 1, 24);
        let dense = FockOperator::Dense(z.to_dense());
        let combos = SymmetryCombos::new(&plan);
        let a = amplitude_table(&z, &rho, &combos, Exec::Sequential);
        let b = amplitude_table(&dense, &rho, &combos, Exec::Sequential);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn probability_sources() {
        let spec = cat(2, 4.0, 36);
        let plan = SEPlan::new(vec![spec], vec![]).unwrap();
        let rho = lossy(&spec, LogicalCoeffs::zero(), 0.1);
        let exact = se_state_prep_exact(&plan, std::slice::from_ref(&rho)).unwrap();
        let supplied = se_state_prep_sampled(
            &plan,
            std::slice::from_ref(&rho),
            &SampleOptions::new(2000, 1).with_probs(ProbSource::Supplied(exact.proj_probs.clone())),
        )
        .unwrap();
        let default = se_state_prep_sampled(&plan, std::slice::from_ref(&rho), &SampleOptions::new(2000, 1)).unwrap();
        assert_eq!(supplied.mean, default.mean);

        let sampled = se_state_prep_sampled(
            &plan,
            std::slice::from_ref(&rho),
            &SampleOptions::new(20_000, 2).with_probs(ProbSource::Sampled { shots: 20_000 }),
        )
        .unwrap();
        let same_shots = se_state_prep_sampled(&plan, std::slice::from_ref(&rho), &SampleOptions::new(20_000, 2)).unwrap();
        assert!(sampled.std_error > same_shots.std_error * 0.9);
        assert!((sampled.proj_probs[0] - exact.proj_probs[0]).abs() < 0.05);
        assert!((sampled.mean - exact.value).abs() < 5.0 * sampled.std_error);

        assert!(se_state_prep_sampled(&plan, std::slice::from_ref(&rho), &SampleOptions::new(0, 1)).is_err());
        assert!(se_state_prep_sampled(
            &plan,
            &[rho],
            &SampleOptions::new(10, 1).with_probs(ProbSource::Supplied(vec![0.0]))
        )
        .is_err());
    }
}
