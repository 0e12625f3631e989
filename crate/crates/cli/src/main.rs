use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rsbc_cli::config::{check, parse_values, RawConfig, Sweep};
use rsbc_cli::error::CliError;
use rsbc_cli::output::{config_hash, emit_csv, emit_meta};
use rsbc_cli::{plan_sweeps, run, sweep_points};

#[derive(Parser)]
#[command(name = "rsbc", version, about = "Symmetry-expansion experiments on rotation-symmetric bosonic codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        flags: Flags,
    },
    /// Check a config and report the derived truncation.
    Validate { config: PathBuf },
    /// Run a config once per value of one parameter.
    Sweep {
        config: PathBuf,
        /// Numeric config key, e.g. noise.gamma_t.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long)]
        values: String,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Args)]
struct Flags {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    shots: Option<usize>,
    /// CSV output path; the .meta sidecar goes next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for the data-parallel kernels.
    #[arg(long)]
    threads: Option<usize>,
}

fn configure_threads(threads: Option<usize>) -> Result<(), CliError> {
    let Some(n) = threads else { return Ok(()) };
    if n == 0 {
        return Err(CliError::Config("--threads must be ≥ 1".into()));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot configure {n} threads: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    eprintln!("note: built without the parallel feature; --threads {n} ignored");
    Ok(())
}

fn execute(config: &Path, flags: Flags, cli_sweep: Option<Sweep>) -> Result<(), CliError> {
    configure_threads(flags.threads)?;
    let mut raw = RawConfig::load(config)?;
    if let Some(seed) = flags.seed {
        raw.set("seed", seed.to_string());
    }
    if let Some(shots) = flags.shots {
        raw.set("shots", shots.to_string());
    }
    let out = flags
        .out
        .or_else(|| raw.get("output_path").map(PathBuf::from))
        .unwrap_or_else(|| config.with_extension("csv"));
    let sweeps = plan_sweeps(&raw, cli_sweep.clone())?;
    let table = run(&raw, &sweeps)?;
    emit_csv(&table, &out)?;

    let mut identity = raw.clone();
    identity.remove("output_path");
    if let Some(s) = &cli_sweep {
        let values: Vec<String> = s.values.iter().map(|v| v.to_string()).collect();
        identity.set("cli.sweep", format!("{}:{}", s.param, values.join(",")));
    }
    let meta = emit_meta(
        &out,
        &[
            ("experiment", raw.get("experiment").unwrap_or_default().to_string()),
            ("config_hash", config_hash(&identity.canonical())),
            ("seed", raw.get("seed").unwrap_or("0").to_string()),
            ("shots", raw.get("shots").unwrap_or("10000").to_string()),
            ("rows", table.rows().len().to_string()),
            ("generator", format!("rsbc {}", env!("CARGO_PKG_VERSION"))),
        ],
    )?;
    eprintln!("wrote {} rows to {} ({})", table.rows().len(), out.display(), meta.display());
    Ok(())
}

fn validate(config: &Path) -> Result<bool, CliError> {
    let raw = RawConfig::load(config)?;
    let (cfg, diag) = check(&raw);
    for line in diag.lines() {
        println!("{line}");
    }
    let Some(cfg) = cfg else { return Ok(false) };
    let sweeps = plan_sweeps(&raw, None)?;
    let mut max_dim = None;
    let mut clean = true;
    for (point, vals) in sweep_points(&raw, &sweeps) {
        let (typed, diag) = check(&point);
        if let Some(t) = typed {
            if cfg.experiment.needs_code() {
                let d = t.derived_dim()?;
                max_dim = Some(max_dim.map_or(d, |m: usize| m.max(d)));
            }
        } else {
            clean = false;
            let at: Vec<String> = vals.iter().map(|(k, v)| format!("{k}={v}")).collect();
            for line in diag.lines() {
                println!("at {}: {line}", at.join(", "));
            }
        }
    }
    if clean {
        match max_dim {
            Some(d) => println!("ok: experiment={} truncation D={d}", cfg.experiment),
            None => println!("ok: experiment={}", cfg.experiment),
        }
    }
    Ok(clean)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, flags } => execute(&config, flags, None),
        Command::Validate { config } => match validate(&config) {
            Ok(true) => Ok(()),
            Ok(false) => return ExitCode::from(2),
            Err(e) => Err(e),
        },
        Command::Sweep {
            config,
            param,
            values,
            flags,
        } => parse_values(&values).and_then(|values| execute(&config, flags, Some(Sweep { param, values }))),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
