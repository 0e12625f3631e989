//! SE immediately before a `Ẑ_M^{⊗N}` readout.
//!
//! Numerator and denominator are both averages of rotation expectations:
//! `Tr[(Ẑ_M P⁽ᶜ⁾)^{⊗N} ρ] = M^{-N} Σ_{m⃗} Tr[⊗_h Ẑ_M^{2m_h+1} ρ]`, and the
//! same with even powers for `p_c = Tr[(P⁽ᶜ⁾)^{⊗N} ρ]`.

use nalgebra::DVector;
use rand::Rng;

use super::{ancilla_outcome, check_amplitudes, digits, outcome_moments, SEEstimate, SampleOptions, ShotRecord};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::fock::{logical_z_power, DensityMatrix, C64};
use crate::projectors::{code_projector, MIN_PROJECTION_PROB};
use crate::rng::ShotStreams;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementExact {
    pub value: f64,
    pub p_c: f64,
}

fn kron_all(parts: &[DVector<C64>]) -> DVector<C64> {
    parts
        .iter()
        .fold(DVector::from_element(1, C64::new(1.0, 0.0)), |acc, p| acc.kronecker(p))
}

fn check_order(order: usize) -> Result<()> {
    if order < 1 {
        return Err(Error::InvalidParameter("rotation order M must be ≥ 1".into()));
    }
    Ok(())
}

/// Mitigated `⟨Ẑ_M^{⊗N}⟩` over all `N` modes of `rho`.
pub fn se_measurement_exact(rho: &DensityMatrix, order: usize) -> Result<MeasurementExact> {
    check_order(order)?;
    let proj: Vec<_> = rho
        .dims()
        .iter()
        .map(|&d| code_projector(order, d).map(|p| p.as_diagonal().expect("diagonal").clone()))
        .collect::<Result<_>>()?;
    let zp: Vec<_> = rho
        .dims()
        .iter()
        .zip(&proj)
        .map(|(&d, p)| {
            let z = logical_z_power(order, 1, d);
            z.as_diagonal().expect("diagonal").component_mul(p)
        })
        .collect();
    let pops = rho.populations();
    let trace = |diag: DVector<C64>| -> C64 { diag.iter().zip(&pops).map(|(a, p)| a * p).sum() };
    let p_c = trace(kron_all(&proj)).re;
    if !(p_c > MIN_PROJECTION_PROB) {
        return Err(Error::ProjectionImpossible(p_c));
    }
    Ok(MeasurementExact {
        value: trace(kron_all(&zp)).re / p_c,
        p_c,
    })
}

/// Table of `Tr[⊗_h Ẑ_M^{2m_h + offset} ρ]` over all `m⃗ ∈ [0, M)^N`.
fn rotation_table(rho: &DensityMatrix, order: usize, offset: usize, exec: Exec) -> Vec<C64> {
    let n_modes = rho.dims().len();
    let radices = vec![order; n_modes];
    let pops = rho.populations();
    let count = order.pow(n_modes as u32);
    exec.map(count, |flat| {
        let m = digits(flat, &radices);
        let parts: Vec<_> = rho
            .dims()
            .iter()
            .zip(&m)
            .map(|(&d, &mh)| {
                logical_z_power(order, 2 * mh + offset, d)
                    .as_diagonal()
                    .expect("diagonal")
                    .clone()
            })
            .collect();
        kron_all(&parts).iter().zip(&pops).map(|(a, p)| a * p).sum()
    })
}

/// Ratio estimator with the shot budget split evenly between numerator and
/// denominator circuits. Only ancilla-X outcomes are used.
pub fn se_measurement_sampled(rho: &DensityMatrix, order: usize, opts: &SampleOptions) -> Result<SEEstimate> {
    check_order(order)?;
    if opts.shots < 2 {
        return Err(Error::NoShots);
    }
    let n_modes = rho.dims().len();
    let radices = vec![order; n_modes];
    let num_table = rotation_table(rho, order, 1, opts.exec);
    let den_table = rotation_table(rho, order, 0, opts.exec);
    check_amplitudes(&num_table)?;
    check_amplitudes(&den_table)?;

    let streams = ShotStreams::new(opts.seed);
    let n_num = opts.shots / 2;
    let n_den = opts.shots - n_num;
    let draws = opts.exec.map(opts.shots, |s| {
        let mut rng = streams.stream(s as u64);
        let table = if s < n_num { &num_table } else { &den_table };
        let flat = rng.random_range(0..table.len());
        let c = table[flat];
        (flat, c, ancilla_outcome(&mut rng, c))
    });
    let outcomes: Vec<i8> = draws.iter().map(|d| d.2).collect();
    let (x, var_x) = outcome_moments(&outcomes[..n_num]);
    let (y, var_y) = outcome_moments(&outcomes[n_num..]);
    let var_xbar = var_x / n_num as f64;
    let var_ybar = var_y / n_den as f64;
    let se_y = var_ybar.sqrt();
    if y <= 3.0 * se_y {
        return Err(Error::UnstableRatio { value: y, std_error: se_y });
    }
    let f = x / y;
    let var_f = (var_xbar + f * f * var_ybar) / (y * y);

    let per_shot_log = opts.keep_log.then(|| {
        draws
            .iter()
            .map(|&(flat, c, o)| ShotRecord {
                indices: digits(flat, &radices),
                amplitude: c,
                outcome: o,
            })
            .collect()
    });
    Ok(SEEstimate {
        mean: f,
        std_error: var_f.sqrt(),
        shots: opts.shots,
        proj_probs: vec![y],
        cost_c: 1.0 / (y * y),
        per_shot_log,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{apply_photon_loss, NoiseSpec};
    use crate::codes::{codeword, CodeSpec, Logical};

    fn spec() -> CodeSpec {
        CodeSpec::cat(2, C64::new(2.0, 0.0), 40).unwrap()
    }

    #[test]
    fn codewords_give_their_eigenvalues() {
        let zero = codeword(&spec(), Logical::Zero).unwrap().density();
        let one = codeword(&spec(), Logical::One).unwrap().density();
        assert!((se_measurement_exact(&zero, 2).unwrap().value - 1.0).abs() < 1e-10);
        assert!((se_measurement_exact(&one, 2).unwrap().value + 1.0).abs() < 1e-10);
        let est = se_measurement_sampled(&zero, 2, &SampleOptions::new(1000, 9)).unwrap();
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.proj_probs, vec![1.0]);
    }

    #[test]
    fn mitigation_moves_towards_plus_one() {
        let zero = codeword(&spec(), Logical::Zero).unwrap().density();
        let noisy = apply_photon_loss(&zero, &NoiseSpec::photon_loss(0.1).unwrap(), 0).unwrap();
        let raw = noisy.expectation(&logical_z_power(2, 1, 40)).unwrap().re;
        let se = se_measurement_exact(&noisy, 2).unwrap();
        assert!((1.0 - se.value).abs() < (1.0 - raw).abs());
        let est = se_measurement_sampled(&noisy, 2, &SampleOptions::new(40_000, 4)).unwrap();
        assert!((est.mean - se.value).abs() < 5.0 * est.std_error);
    }

    #[test]
    fn order_one_is_parity_post_selection() {
        let spec = CodeSpec::cat(1, C64::new(1.2, 0.0), 30).unwrap();
        let zero = codeword(&spec, Logical::Zero).unwrap().density();
        let noisy = apply_photon_loss(&zero, &NoiseSpec::photon_loss(0.2).unwrap(), 0).unwrap();
        let se = se_measurement_exact(&noisy, 1).unwrap();
        assert!((se.p_c - 1.0).abs() < 1e-12);
        let parity = noisy.expectation(&logical_z_power(1, 1, 30)).unwrap().re;
        assert!((se.value - parity).abs() < 1e-12);
    }

    #[test]
    fn two_mode_readout() {
        let s = CodeSpec::cat(2, C64::new(1.5, 0.0), 20).unwrap();
        let zero = codeword(&s, Logical::Zero).unwrap().density();
        let one = codeword(&s, Logical::One).unwrap().density();
        let rho = zero.tensor(&one);
        let noisy = apply_photon_loss(&rho, &NoiseSpec::photon_loss(0.05).unwrap(), 1).unwrap();
        let se = se_measurement_exact(&noisy, 2).unwrap();
        let zz = logical_z_power(2, 1, 20).kron(&logical_z_power(2, 1, 20));
        let raw = noisy.expectation(&zz).unwrap().re;
        // Two-photon losses map |1_L⟩ onto |0_L⟩ and survive the projection.
        assert!(se.value < raw && se.value > -1.0);
        let est = se_measurement_sampled(&noisy, 2, &SampleOptions::new(20_000, 8).with_log()).unwrap();
        assert!((est.mean - se.value).abs() < 5.0 * est.std_error + 1e-12);
        assert_eq!(est.per_shot_log.unwrap()[0].indices.len(), 2);
    }

    #[test]
    fn too_few_shots() {
        let zero = codeword(&spec(), Logical::Zero).unwrap().density();
        assert!(matches!(
            se_measurement_sampled(&zero, 2, &SampleOptions::new(1, 0)),
            Err(Error::NoShots)
        ));
    }
}
