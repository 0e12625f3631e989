//! Sequential vs rayon execution of the data-parallel kernels.
//!
//! Without the `parallel` feature both arms run the sequential path.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use rsbc::channels::{apply_photon_loss_with, NoiseSpec};
use rsbc::codes::{codeword, logical_state, CodeSpec, Logical, LogicalCoeffs};
use rsbc::fock::{crot_gate, default_dim, C64};
use rsbc::mitigation::{se_state_prep_sampled, SEPlan, SampleOptions};
use rsbc::wigner::{symmetric_axis, wigner_grid_with};
use rsbc::Exec;

const STRATEGIES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn cat(order: usize, alpha_sq: f64) -> CodeSpec {
    CodeSpec::cat(order, C64::new(alpha_sq.sqrt(), 0.0), default_dim(alpha_sq)).unwrap()
}

fn wigner(c: &mut Criterion) {
    let rho = codeword(&cat(2, 4.0), Logical::Zero).unwrap().density();
    let mut group = c.benchmark_group("wigner_grid");
    for n in [41, 101] {
        let axis = symmetric_axis(5.0, n);
        for (name, exec) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, n), &axis, |b, axis| {
                b.iter(|| wigner_grid_with(black_box(&rho), axis, axis, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn photon_loss(c: &mut Criterion) {
    let spec = cat(2, 3.0);
    let single = codeword(&spec, Logical::Zero).unwrap().density();
    let two_mode = single.tensor(&single);
    let noise = NoiseSpec::photon_loss(0.1).unwrap();
    let mut group = c.benchmark_group("photon_loss");
    group.sample_size(20);
    for (label, rho) in [("one_mode", &single), ("two_mode", &two_mode)] {
        for (name, exec) in STRATEGIES {
            group.bench_function(BenchmarkId::new(name, label), |b| {
                b.iter(|| apply_photon_loss_with(black_box(rho), &noise, 0, exec).unwrap())
            });
        }
    }
    group.finish();
}

fn se_sampling(c: &mut Criterion) {
    let spec = cat(2, 2.0);
    let noise = NoiseSpec::photon_loss(0.05).unwrap();
    let noisy = |coeffs| {
        let rho = logical_state(&spec, coeffs).unwrap().density();
        rsbc::channels::apply_photon_loss(&rho, &noise, 0).unwrap()
    };
    let states = [noisy(LogicalCoeffs::zero()), noisy(LogicalCoeffs::magic_t())];
    let crot = crot_gate(2, 2, spec.dim(), spec.dim()).unwrap();
    let plan = SEPlan::new(vec![spec], vec![spec]).unwrap().with_computation(crot).unwrap();
    let mut group = c.benchmark_group("se_state_prep_sampled");
    group.sample_size(10);
    for shots in [10_000, 100_000] {
        for (name, exec) in STRATEGIES {
            let opts = SampleOptions::new(shots, 7).with_exec(exec);
            group.bench_with_input(BenchmarkId::new(name, shots), &opts, |b, opts| {
                b.iter(|| se_state_prep_sampled(&plan, black_box(&states), opts).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, wigner, photon_loss, se_sampling);
criterion_main!(benches);
