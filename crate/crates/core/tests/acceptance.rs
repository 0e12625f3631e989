//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.
//!
//! Run: cargo test -p rsbc-core --test acceptance

use std::process::ExitCode;
use std::time::Instant;

use rsbc::analytics::{
    distinguishability_threshold, overhead_bound, p0_exact, trace_distance_formula, CatNoiseContext,
};
use rsbc::channels::{apply_photon_loss, dephasing_channel, NoiseSpec};
use rsbc::codes::{cat_codeword, codeword, leg_superposition_state, logical_state, CodeSpec, Logical, LogicalCoeffs};
use rsbc::fock::{coherent_state, default_dim, logical_z_power, trace_distance, DensityMatrix, C64};
use rsbc::mitigation::{
    se_state_prep_exact, se_state_prep_sampled, virtual_code_state, SEPlan, SampleOptions,
};
use rsbc::projectors::{apply_truncated_x, code_projector, project_state, rotation_projector, truncated_x_projector};
use rsbc::wigner::{symmetric_axis, wigner_grid};

type Outcome = Result<String, String>;

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn cat(order: usize, alpha_sq: f64) -> CodeSpec {
    CodeSpec::cat(order, real(alpha_sq.sqrt()), default_dim(alpha_sq)).unwrap()
}

fn lossy(rho: &DensityMatrix, gamma_t: f64) -> DensityMatrix {
    apply_photon_loss(rho, &NoiseSpec::photon_loss(gamma_t).unwrap(), 0).unwrap()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    let mut max_dim = 0;
    for m in [2, 3, 4] {
        for a2 in [1.0, 2.0, 4.0, 6.0, 8.0, 10.0] {
            for gt in [0.01, 0.1] {
                let spec = cat(m, a2);
                max_dim = max_dim.max(spec.dim());
                let rho = cat_codeword(&spec, Logical::Zero).unwrap().0.density();
                let p = rotation_projector(m, 0, spec.dim()).unwrap();
                let (_, numeric) = project_state(&lossy(&rho, gt), &p).unwrap();
                let analytic = p0_exact(&CatNoiseContext::from_alpha_sq(a2, m, gt).unwrap());
                worst = worst.max((numeric - analytic).abs() / analytic);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        worst <= 1e-6 && secs < 30.0 && max_dim <= 160,
        format!("max rel err {worst:.2e}, {secs:.2} s, D ≤ {max_dim}"),
    )
}

fn c2_perfect_projection() -> Outcome {
    let (m, a2, gt) = (2, 4.0, 0.1);
    let spec = cat(m, a2);
    let rho = codeword(&spec, Logical::Zero).unwrap().density();
    let p = rotation_projector(m, 0, spec.dim()).unwrap();
    let (projected, _) = project_state(&lossy(&rho, gt), &p).unwrap();
    let alpha_t = CatNoiseContext::from_alpha_sq(a2, m, gt).unwrap().alpha_t();
    let ideal = codeword(&CodeSpec::cat(m, alpha_t, spec.dim()).unwrap(), Logical::Zero)
        .unwrap()
        .density();
    let d = trace_distance(&projected, &ideal).unwrap();
    check(d <= 1e-7, format!("trace distance {d:.2e}"))
}

fn c3_asymptote() -> Outcome {
    let p0 = p0_exact(&CatNoiseContext::from_alpha_sq(250.0, 2, 0.1).unwrap());
    check((p0 - 0.25).abs() <= 1e-3, format!("p0 = {p0:.6}"))
}

/// Trace distance between the code-projected lossy T state and the ideal T
/// state at the damped amplitude.
fn numeric_t_distance(m: usize, a2: f64, gt: f64) -> f64 {
    let t = LogicalCoeffs::magic_t();
    let spec = cat(m, a2);
    let rho = leg_superposition_state(&spec, t).unwrap().density();
    let p = code_projector(m, spec.dim()).unwrap();
    let (projected, _) = project_state(&lossy(&rho, gt), &p).unwrap();
    let alpha_t = CatNoiseContext::from_alpha_sq(a2, m, gt).unwrap().alpha_t();
    let ideal = leg_superposition_state(&CodeSpec::cat(m, alpha_t, spec.dim()).unwrap(), t)
        .unwrap()
        .density();
    trace_distance(&projected, &ideal).unwrap()
}

fn c4_trace_distance_formula() -> Outcome {
    let gt = 0.01;
    let t = LogicalCoeffs::magic_t();
    let sweeps: [(usize, &[f64]); 2] = [
        (2, &[3.0, 5.0, 8.0, 12.0, 16.0, 20.0, 25.0, 30.0]),
        (4, &[10.25, 12.0, 16.0, 20.0, 25.0, 30.0]),
    ];
    let mut worst_abs = 0.0_f64;
    let mut worst_lead = 0.0_f64;
    let mut curves = Vec::new();
    for (m, alphas) in sweeps {
        let mut curve = Vec::new();
        for &a2 in alphas {
            let ctx = CatNoiseContext::from_alpha_sq(a2, m, gt).unwrap();
            let form = trace_distance_formula(&ctx, t);
            let numeric = numeric_t_distance(m, a2, gt);
            worst_abs = worst_abs.max((form.exact_form - numeric).abs());
            if ctx.big_gamma() <= 0.3 {
                worst_lead = worst_lead.max((form.leading_order - numeric).abs() / numeric);
            }
            curve.push((a2, numeric));
        }
        curves.push(curve);
    }
    // Equal α² at fixed γt means equal Γ.
    let suppressed = curves[1]
        .iter()
        .filter_map(|&(a2, d4)| curves[0].iter().find(|c| c.0 == a2).map(|c| d4 < c.1))
        .collect::<Vec<_>>();
    let below = !suppressed.is_empty() && suppressed.iter().all(|&b| b);
    check(
        worst_abs <= 1e-3 && worst_lead <= 0.1 && below,
        format!(
            "max |formula-numeric| {worst_abs:.2e}, leading-order rel gap {worst_lead:.3}, M=4 below M=2 at {} shared points: {below}",
            suppressed.len()
        ),
    )
}

fn c5_mitigation_improves() -> Outcome {
    let gt = 0.01;
    let t = LogicalCoeffs::magic_t();
    let mut worst_ratio = 0.0_f64;
    let mut points = 0;
    for a2 in [2.0, 4.0, 6.0, 8.0, 10.0, 14.0] {
        let spec = cat(2, a2);
        let noisy = lossy(&leg_superposition_state(&spec, t).unwrap().density(), gt);
        let alpha_t = CatNoiseContext::from_alpha_sq(a2, 2, gt).unwrap().alpha_t();
        let ideal = leg_superposition_state(&CodeSpec::cat(2, alpha_t, spec.dim()).unwrap(), t)
            .unwrap()
            .density();
        let (mitigated, _) = project_state(&noisy, &code_projector(2, spec.dim()).unwrap()).unwrap();
        let (dm, dn) = (trace_distance(&mitigated, &ideal).unwrap(), trace_distance(&noisy, &ideal).unwrap());
        worst_ratio = worst_ratio.max(dm / dn);
        points += 1;
    }
    for l in 1..=5 {
        let spec = CodeSpec::binomial_auto(2, l).unwrap();
        let ideal = logical_state(&spec, t).unwrap().density();
        let noisy = lossy(&ideal, gt);
        let (mitigated, _) = project_state(&noisy, &code_projector(2, spec.dim()).unwrap()).unwrap();
        let (dm, dn) = (trace_distance(&mitigated, &ideal).unwrap(), trace_distance(&noisy, &ideal).unwrap());
        worst_ratio = worst_ratio.max(dm / dn);
        points += 1;
    }
    check(
        worst_ratio < 1.0,
        format!("{points} sweep points, worst mitigated/unmitigated ratio {worst_ratio:.3}"),
    )
}

fn c6_estimator_statistics() -> Outcome {
    let (shots, seeds) = (100_000, 20u64);
    let spec = cat(2, 4.0);
    let t = logical_state(&spec, LogicalCoeffs::magic_t()).unwrap().density();
    let plan = SEPlan::new(vec![], vec![spec]).unwrap();
    let mut worst_z = 0.0_f64;
    let mut scaled = Vec::new();
    let mut across_seeds = Vec::new();
    for gt in [0.02, 0.05, 0.1, 0.2] {
        let noisy = [lossy(&t, gt)];
        let exact = se_state_prep_exact(&plan, &noisy).unwrap();
        let mut means = Vec::new();
        let mut per_shot_var = 0.0;
        let mut se_sq = 0.0;
        for seed in 0..seeds {
            let est = se_state_prep_sampled(&plan, &noisy, &SampleOptions::new(shots, seed)).unwrap();
            means.push(est.mean);
            se_sq += est.std_error * est.std_error;
            per_shot_var += est.std_error * est.std_error * shots as f64;
        }
        let n = seeds as f64;
        let pooled_mean = means.iter().sum::<f64>() / n;
        let pooled_se = se_sq.sqrt() / n;
        worst_z = worst_z.max((pooled_mean - exact.value).abs() / pooled_se);
        let p: f64 = exact.proj_probs.iter().product();
        scaled.push(per_shot_var / n * p * p);
        let seed_var = means.iter().map(|x| (x - pooled_mean).powi(2)).sum::<f64>() / (n - 1.0);
        across_seeds.push(seed_var * shots as f64 * p * p);
    }
    let ratio = |v: &[f64]| v.iter().cloned().fold(0.0, f64::max) / v.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = ratio(&scaled);
    check(
        worst_z <= 3.0 && spread <= 1.5,
        format!(
            "max |pooled mean - exact| = {worst_z:.2} pooled SE, per-shot variance·p² spread ×{spread:.3} (between-seed estimate ×{:.2}, 19 dof)",
            ratio(&across_seeds)
        ),
    )
}

fn c7_overhead_numbers() -> Outcome {
    let c = overhead_bound(10.0, 0.1, 2);
    let c_ok = format!("{c:.3}") == "54.598" && (c - 54.598).abs() < 5e-4;
    let a2 = 20.0;
    let dim = default_dim(a2);
    let primitive = coherent_state(real(a2.sqrt()), dim).unwrap().density();
    let v = virtual_code_state(&primitive, 2, &logical_z_power(2, 1, dim)).unwrap();
    check(
        c_ok && (v.p_phi - 0.25).abs() <= 1e-3,
        format!("C = {c:.5}, p_Φ = {:.6}", v.p_phi),
    )
}

fn c8_thresholds() -> Outcome {
    let t2 = distinguishability_threshold(2, 1.5);
    let t4 = distinguishability_threshold(4, 1.5);
    check(
        (t2 - 3.0).abs() < 1e-12 && (t4 - 10.243).abs() <= 0.01,
        format!("M=2: {t2:.6}, M=4: {t4:.4}"),
    )
}

fn c9_wigner_fringes() -> Outcome {
    let (m, a2, gt) = (2, 4.0, 0.1);
    let spec = cat(m, a2);
    let rho = codeword(&spec, Logical::Zero).unwrap().density();
    let noisy = lossy(&rho, gt);
    let (mitigated, _) = project_state(&noisy, &rotation_projector(m, 0, spec.dim()).unwrap()).unwrap();
    let axis = symmetric_axis(5.0, 121);
    let w_noisy = wigner_grid(&noisy, &axis, &axis).unwrap().min();
    let w_mit = wigner_grid(&mitigated, &axis, &axis).unwrap().min();
    let gain = (w_noisy - w_mit) / w_noisy.abs();
    check(
        w_noisy < 0.0 && gain >= 0.25,
        format!("min W noisy {w_noisy:.5}, mitigated {w_mit:.5}, gain {:.1}%", 100.0 * gain),
    )
}

fn c10_truncated_projector() -> Outcome {
    let (m, a2, gt) = (2, 2.0, 0.1);
    let spec = cat(m, a2);
    let ideal = codeword(&spec, Logical::Zero).unwrap();
    let noisy = dephasing_channel(&NoiseSpec::dephasing(gt).unwrap(), &ideal.density()).unwrap();
    let fidelities: Vec<f64> = (0..=3)
        .map(|l| {
            let a = truncated_x_projector(m, l, spec.dim()).unwrap();
            let (out, _) = apply_truncated_x(&noisy, &a).unwrap();
            out.overlap_with_pure(&ideal).unwrap()
        })
        .collect();
    let monotone = fidelities.windows(2).all(|w| w[1] > w[0]);
    let shown: Vec<String> = fidelities.iter().map(|f| format!("{f:.6}")).collect();
    check(monotone, format!("fidelity over L=0..3: [{}]", shown.join(", ")))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 oracle equivalence of p0", c1_oracle_equivalence),
        ("2 perfect projection", c2_perfect_projection),
        ("3 p0 asymptote", c3_asymptote),
        ("4 trace-distance formula", c4_trace_distance_formula),
        ("5 mitigation improves states", c5_mitigation_improves),
        ("6 estimator statistics", c6_estimator_statistics),
        ("7 sampling-overhead numbers", c7_overhead_numbers),
        ("8 distinguishability thresholds", c8_thresholds),
        ("9 Wigner fringe recovery", c9_wigner_fringes),
        ("10 truncated X projector", c10_truncated_projector),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
