//! One function per experiment; each evaluates a single sweep point.

use rsbc::analytics::{
    p0_approximations, p0_exact, p_psi_approx, overhead_bound, trace_distance_formula, CatNoiseContext,
};
use rsbc::channels::{apply_photon_loss, dephasing_channel, NoiseSpec};
use rsbc::codes::{codeword, leg_superposition_state, logical_state, CodeSpec, Logical};
use rsbc::fock::{logical_z_power, trace_distance, DensityMatrix, FockVector};
use rsbc::mitigation::{
    se_measurement_exact, se_measurement_sampled, se_state_prep_exact, se_state_prep_sampled, shots_for_accuracy,
    SEPlan, SampleOptions,
};
use rsbc::projectors::{
    apply_truncated_x, code_projector, project_state, rotation_projector, truncated_x_projector,
};
use rsbc::wigner::{symmetric_axis, wigner_grid};

use crate::config::{Experiment, ExperimentConfig, Family, StateName, Variant};
use crate::error::CliError;
use crate::output::{Cell, Table};

pub fn run(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    match cfg.experiment {
        Experiment::ProjProbSweep => proj_prob_sweep(cfg),
        Experiment::TraceDistanceSweep => trace_distance_sweep(cfg),
        Experiment::SeShotStudy => se_shot_study(cfg),
        Experiment::WignerPair => wigner_pair(cfg),
        Experiment::PhaseNoiseTruncation => phase_noise_truncation(cfg),
        Experiment::OverheadTable => overhead_table(cfg),
    }
}

/// Column names per experiment, in output order.
pub fn schema(experiment: Experiment) -> &'static [&'static str] {
    match experiment {
        Experiment::ProjProbSweep => &[
            "M", "gamma_t", "alpha_sq", "big_gamma", "p0_exact", "p0_approx_f", "p0_approx_exp", "p0_numeric",
        ],
        Experiment::TraceDistanceSweep => &[
            "family", "M", "gamma_t", "alpha_sq", "L", "n_bar", "big_gamma", "p_code", "p_psi_approx", "d_noisy",
            "d_mitigated", "d_formula", "d_leading",
        ],
        Experiment::SeShotStudy => &[
            "variant", "M", "gamma_t", "n_bar", "seed", "shots", "exact", "raw", "mean", "std_error", "proj_prob",
            "cost_c",
        ],
        Experiment::WignerPair => &["x", "p", "w_noisy", "w_mitigated"],
        Experiment::PhaseNoiseTruncation => {
            &["M", "alpha_sq", "gamma_t", "L", "fidelity_noisy", "fidelity", "norm"]
        }
        Experiment::OverheadTable => &["n_bar", "gamma_t", "n_qem", "exponent", "cost_bound", "shots_for_eps"],
    }
}

fn noise(cfg: &ExperimentConfig, spec: &CodeSpec) -> Result<NoiseSpec, CliError> {
    let n = NoiseSpec::photon_loss(cfg.gamma_t)?;
    Ok(match cfg.kraus_cutoff {
        Some(c) => n.with_cutoff(c),
        None => n.with_default_cutoff(spec.mean_photons()),
    })
}

fn lossy(cfg: &ExperimentConfig, spec: &CodeSpec, rho: &DensityMatrix) -> Result<DensityMatrix, CliError> {
    Ok(apply_photon_loss(rho, &noise(cfg, spec)?, 0)?)
}

fn cat_context(cfg: &ExperimentConfig) -> Result<CatNoiseContext, CliError> {
    Ok(CatNoiseContext::from_alpha_sq(cfg.alpha_sq, cfg.order, cfg.gamma_t)?)
}

fn alpha_sq_cell(cfg: &ExperimentConfig) -> Cell {
    match cfg.family {
        Family::Cat => Cell::Float(cfg.alpha_sq),
        Family::Binomial => Cell::Empty,
    }
}

fn proj_prob_sweep(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let spec = cfg.code_spec()?;
    let ctx = cat_context(cfg)?;
    let rho = codeword(&spec, Logical::Zero)?.density();
    let (_, numeric) = project_state(&lossy(cfg, &spec, &rho)?, &rotation_projector(cfg.order, 0, spec.dim())?)?;
    let approx = p0_approximations(&ctx);
    let mut t = Table::new(schema(cfg.experiment).iter().copied());
    t.push(vec![
        cfg.order.into(),
        cfg.gamma_t.into(),
        cfg.alpha_sq.into(),
        ctx.big_gamma().into(),
        p0_exact(&ctx).into(),
        approx.approx_f.into(),
        approx.approx_exp.into(),
        numeric.into(),
    ]);
    Ok(t)
}

/// Ideal and noisy versions of the configured logical state. Cat codes use
/// the leg-superposition form with the ideal at the damped amplitude, which
/// is what the closed-form distances describe.
fn ideal_and_noisy(cfg: &ExperimentConfig, spec: &CodeSpec) -> Result<(DensityMatrix, DensityMatrix), CliError> {
    let coeffs = cfg.state.coeffs();
    match cfg.family {
        Family::Cat => {
            let noisy = lossy(cfg, spec, &leg_superposition_state(spec, coeffs)?.density())?;
            let damped = CodeSpec::cat(cfg.order, cat_context(cfg)?.alpha_t(), spec.dim())?;
            Ok((leg_superposition_state(&damped, coeffs)?.density(), noisy))
        }
        Family::Binomial => {
            let ideal = logical_state(spec, coeffs)?.density();
            let noisy = lossy(cfg, spec, &ideal)?;
            Ok((ideal, noisy))
        }
    }
}

fn trace_distance_sweep(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let spec = cfg.code_spec()?;
    let (ideal, noisy) = ideal_and_noisy(cfg, &spec)?;
    let (mitigated, p_code) = project_state(&noisy, &code_projector(cfg.order, spec.dim())?)?;
    let n_bar = spec.mean_photons();
    let (family, l_cell, p_psi, formula, leading) = match cfg.family {
        Family::Cat => {
            let ctx = cat_context(cfg)?;
            let form = trace_distance_formula(&ctx, cfg.state.coeffs());
            (
                "cat",
                Cell::Empty,
                Cell::Float(p_psi_approx(&ctx)),
                Cell::Float(form.exact_form),
                Cell::Float(form.leading_order),
            )
        }
        Family::Binomial => ("binomial", cfg.truncation.into(), Cell::Empty, Cell::Empty, Cell::Empty),
    };
    let mut t = Table::new(schema(cfg.experiment).iter().copied());
    t.push(vec![
        family.into(),
        cfg.order.into(),
        cfg.gamma_t.into(),
        alpha_sq_cell(cfg),
        l_cell,
        n_bar.into(),
        (-n_bar * (-cfg.gamma_t).exp_m1()).into(),
        p_code.into(),
        p_psi,
        trace_distance(&noisy, &ideal)?.into(),
        trace_distance(&mitigated, &ideal)?.into(),
        formula,
        leading,
    ]);
    Ok(t)
}

fn se_shot_study(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let spec = cfg.code_spec()?;
    let noisy = lossy(cfg, &spec, &logical_state(&spec, cfg.state.coeffs())?.density())?;
    let raw = noisy.expectation(&logical_z_power(cfg.order, 1, spec.dim()))?.re;
    let mut t = Table::new(schema(cfg.experiment).iter().copied());
    let states = std::slice::from_ref(&noisy);
    match cfg.variant {
        Variant::StatePrep => {
            let plan = if cfg.state == StateName::Zero {
                SEPlan::new(vec![spec], vec![])?
            } else {
                SEPlan::new(vec![], vec![spec])?
            };
            let exact = se_state_prep_exact(&plan, states)?.value;
            for i in 0..cfg.study_seeds {
                let seed = cfg.seed.wrapping_add(i as u64);
                let est = se_state_prep_sampled(&plan, states, &SampleOptions::new(cfg.shots, seed))?;
                push_estimate(&mut t, cfg, "state_prep", seed, exact, raw, &est);
            }
        }
        Variant::Measurement => {
            let exact = se_measurement_exact(&noisy, cfg.order)?.value;
            for i in 0..cfg.study_seeds {
                let seed = cfg.seed.wrapping_add(i as u64);
                let est = se_measurement_sampled(&noisy, cfg.order, &SampleOptions::new(cfg.shots, seed))?;
                push_estimate(&mut t, cfg, "measurement", seed, exact, raw, &est);
            }
        }
    }
    Ok(t)
}

fn push_estimate(
    t: &mut Table,
    cfg: &ExperimentConfig,
    variant: &str,
    seed: u64,
    exact: f64,
    raw: f64,
    est: &rsbc::mitigation::SEEstimate,
) {
    t.push(vec![
        variant.into(),
        cfg.order.into(),
        cfg.gamma_t.into(),
        cfg.mean_photons().into(),
        seed.into(),
        est.shots.into(),
        exact.into(),
        raw.into(),
        est.mean.into(),
        est.std_error.into(),
        est.proj_probs.iter().product::<f64>().into(),
        est.cost_c.into(),
    ]);
}

fn wigner_pair(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let spec = cfg.code_spec()?;
    let noisy = lossy(cfg, &spec, &logical_state(&spec, cfg.state.coeffs())?.density())?;
    let projector = if cfg.state == StateName::Zero {
        rotation_projector(cfg.order, 0, spec.dim())?
    } else {
        code_projector(cfg.order, spec.dim())?
    };
    let (mitigated, _) = project_state(&noisy, &projector)?;
    let extent = cfg
        .wigner_extent
        .unwrap_or_else(|| (2.0 * spec.mean_photons()).sqrt() + 4.0);
    let axis = symmetric_axis(extent, cfg.wigner_points);
    let a = wigner_grid(&noisy, &axis, &axis)?;
    let b = wigner_grid(&mitigated, &axis, &axis)?;
    let mut t = Table::new(schema(cfg.experiment).iter().copied());
    for (i, &x) in axis.iter().enumerate() {
        for (j, &p) in axis.iter().enumerate() {
            t.push(vec![x.into(), p.into(), a.value(i, j).into(), b.value(i, j).into()]);
        }
    }
    Ok(t)
}

fn phase_noise_truncation(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let spec = cfg.code_spec()?;
    let ideal: FockVector = logical_state(&spec, cfg.state.coeffs())?;
    let noisy = dephasing_channel(&NoiseSpec::dephasing(cfg.gamma_t)?, &ideal.density())?;
    let fidelity_noisy = noisy.overlap_with_pure(&ideal)?;
    let mut t = Table::new(schema(cfg.experiment).iter().copied());
    for level in 0..=cfg.phase_max_level {
        let a = truncated_x_projector(cfg.order, level, spec.dim())?;
        let (out, norm) = apply_truncated_x(&noisy, &a)?;
        t.push(vec![
            cfg.order.into(),
            cfg.alpha_sq.into(),
            cfg.gamma_t.into(),
            level.into(),
            fidelity_noisy.into(),
            out.overlap_with_pure(&ideal)?.into(),
            norm.into(),
        ]);
    }
    Ok(t)
}

fn overhead_table(cfg: &ExperimentConfig) -> Result<Table, CliError> {
    let cost = overhead_bound(cfg.n_bar, cfg.gamma_t, cfg.n_qem);
    let mut t = Table::new(schema(cfg.experiment).iter().copied());
    t.push(vec![
        cfg.n_bar.into(),
        cfg.gamma_t.into(),
        (cfg.n_qem as usize).into(),
        (cfg.n_bar * cfg.gamma_t * cfg.n_qem as f64).into(),
        cost.into(),
        shots_for_accuracy(cost, cfg.epsilon)?.into(),
    ]);
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{typed, RawConfig};

    fn cfg(text: &str) -> ExperimentConfig {
        typed(&RawConfig::parse(text).unwrap()).unwrap()
    }

    fn float(t: &Table, row: usize, col: &str) -> f64 {
        match &t.rows()[row][t.column(col).unwrap()] {
            Cell::Float(v) => *v,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn every_experiment_matches_its_schema() {
        let base = "code.M=2\ncode.alpha_sq=2\nnoise.gamma_t=0.05\nshots=200\nwigner.points=5\n";
        for e in Experiment::ALL {
            let kind = if e == Experiment::PhaseNoiseTruncation { "dephasing" } else { "photon_loss" };
            let t = run(&cfg(&format!("experiment={e}\nnoise.kind={kind}\n{base}"))).unwrap();
            assert_eq!(t.header(), schema(e), "{e}");
            assert!(!t.rows().is_empty());
        }
    }

    #[test]
    fn projection_probability_columns_agree() {
        let t = run(&cfg("experiment=proj_prob_sweep\ncode.M=2\ncode.alpha_sq=4\nnoise.gamma_t=0.1")).unwrap();
        let exact = float(&t, 0, "p0_exact");
        assert!((float(&t, 0, "p0_numeric") - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn mitigation_helps_in_trace_distance_sweep() {
        for text in [
            "experiment=trace_distance_sweep\ncode.M=2\ncode.alpha_sq=6\ncode.state=t\nnoise.gamma_t=0.01",
            "experiment=trace_distance_sweep\ncode.family=binomial\ncode.M=2\ncode.L=2\ncode.state=t\nnoise.gamma_t=0.01",
        ] {
            let t = run(&cfg(text)).unwrap();
            assert!(float(&t, 0, "d_mitigated") < float(&t, 0, "d_noisy"));
        }
    }

    #[test]
    fn overhead_reaches_e_to_the_fourth() {
        let t = run(&cfg("experiment=overhead_table\nnoise.gamma_t=0.1\noverhead.n_bar=10")).unwrap();
        assert!((float(&t, 0, "cost_bound") - 4f64.exp()).abs() < 1e-12);
    }

    #[test]
    fn shot_study_rows_per_seed() {
        let t = run(&cfg(
            "experiment=se_shot_study\ncode.M=2\ncode.alpha_sq=4\nnoise.gamma_t=0.1\nshots=2000\nstudy.seeds=3\nseed=5",
        ))
        .unwrap();
        assert_eq!(t.rows().len(), 3);
        assert_eq!(t.rows()[2][t.column("seed").unwrap()], Cell::Int(7));
    }
}
