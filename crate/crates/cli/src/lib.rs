//! Config-driven experiment runner behind the `rsbc` binary.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

use config::{is_sweepable, sweep_of, typed, value_text, RawConfig, Sweep};
use error::CliError;
use output::{Cell, Table};

/// Column that already carries a swept key's value, if the experiment
/// reports one.
fn column_for(param: &str) -> &str {
    match param {
        "code.M" => "M",
        "code.alpha_sq" => "alpha_sq",
        "code.L" => "L",
        "noise.gamma_t" => "gamma_t",
        "overhead.n_bar" => "n_bar",
        "overhead.n_qem" => "n_qem",
        other => other,
    }
}

/// Sweeps applied to a run, outermost first. A command-line sweep replaces
/// a config sweep over the same key.
pub fn plan_sweeps(raw: &RawConfig, cli: Option<Sweep>) -> Result<Vec<Sweep>, CliError> {
    let mut sweeps = Vec::new();
    if let Some(s) = &cli {
        if !is_sweepable(&s.param) {
            return Err(CliError::Config(format!("{:?} is not a sweepable numeric key", s.param)));
        }
    }
    let own = sweep_of(raw)?;
    if let Some(s) = cli {
        sweeps.push(s);
    }
    if let Some(s) = own {
        if sweeps.iter().all(|o| o.param != s.param) {
            sweeps.push(s);
        }
    }
    Ok(sweeps)
}

/// Every sweep point's raw config, with the swept values, in output order.
pub fn sweep_points(raw: &RawConfig, sweeps: &[Sweep]) -> Vec<(RawConfig, Vec<(String, f64)>)> {
    let mut points = vec![(raw.clone(), Vec::new())];
    for s in sweeps {
        points = points
            .into_iter()
            .flat_map(|(r, vals)| {
                s.values.iter().map(move |&v| {
                    let mut r = r.clone();
                    r.set(&s.param, value_text(v));
                    let mut vals = vals.clone();
                    vals.push((s.param.clone(), v));
                    (r, vals)
                })
            })
            .collect();
    }
    points
}

/// Type every sweep point first so config errors surface before any work.
pub fn run(raw: &RawConfig, sweeps: &[Sweep]) -> Result<Table, CliError> {
    let points = sweep_points(raw, sweeps);
    let typed_points = points
        .iter()
        .map(|(r, vals)| typed(r).map(|c| (c, vals)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out: Option<Table> = None;
    for (cfg, vals) in typed_points {
        let mut t = experiments::run(&cfg)?;
        for (param, v) in vals.iter().rev() {
            if t.column(column_for(param)).is_none() {
                t = t.with_leading(param, Cell::Float(*v));
            }
        }
        match &mut out {
            None => out = Some(t),
            Some(acc) => acc.extend(t)?,
        }
    }
    Ok(out.expect("at least one sweep point"))
}
