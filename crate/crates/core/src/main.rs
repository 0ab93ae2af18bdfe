use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ponderomotive::cli::{
    dispatch, parse_config, parse_planes, CliError, Command, ConfigError, RunConfig,
};
use ponderomotive::params::Intensity;

#[derive(Parser)]
#[command(
    name = "ponder",
    version,
    about = "Ponderomotive scattering of electrons by a focused laser pulse"
)]
#[command(allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Potential U on the focal plane at the pulse peak
    PotentialMap,
    /// Injection-domain cross sections per plane
    DomainMap,
    /// Monte Carlo ensemble and azimuthal histogram
    Scatter,
    /// Dump a single trajectory
    Trajectory,
}

#[derive(Args)]
struct Flags {
    /// key = value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    mu: Option<f64>,
    /// Normalized vector potential (eta0 = a/sqrt 2)
    #[arg(long, global = true, conflicts_with = "eta0")]
    a: Option<f64>,
    #[arg(long, global = true)]
    eta0: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    samples_per_plane: Option<u64>,
    /// Injection planes, e.g. -27..5
    #[arg(long, global = true, allow_hyphen_values = true)]
    planes: Option<String>,
    /// RK4 step in phase
    #[arg(long, global = true)]
    step: Option<f64>,
    /// Sample the full disc instead of the searched region
    #[arg(long, global = true)]
    naive_sampling: bool,
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
}

fn load(flags: &Flags) -> Result<RunConfig, CliError> {
    let mut cfg = match &flags.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError::Invalid(format!("{}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(mu) = flags.mu {
        cfg.physical.mu = mu;
    }
    if let Some(a) = flags.a {
        cfg.physical.intensity = Intensity::A(a);
    }
    if let Some(eta0) = flags.eta0 {
        cfg.physical.intensity = Intensity::Eta0(eta0);
    }
    if let Some(seed) = flags.seed {
        cfg.seed = seed;
    }
    if let Some(n) = flags.samples_per_plane {
        cfg.samples_per_plane = n;
        cfg.density_per_r2 = None;
    }
    if let Some(planes) = &flags.planes {
        cfg.planes = parse_planes(planes).map_err(ConfigError::Invalid)?;
    }
    if let Some(step) = flags.step {
        cfg.step = step;
    }
    if flags.naive_sampling {
        cfg.naive_sampling = true;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Cmd::PotentialMap => Command::PotentialMap,
        Cmd::DomainMap => Command::DomainMap,
        Cmd::Scatter => Command::Scatter,
        Cmd::Trajectory => Command::Trajectory,
    };
    let workers = cli
        .flags
        .workers
        .unwrap_or_else(ponderomotive::par::default_workers);
    let result = load(&cli.flags).and_then(|cfg| dispatch(command, &cfg, workers, &cli.flags.out));
    match result {
        Ok(manifest) => {
            for w in &manifest.warnings {
                eprintln!("warning: {w}");
            }
            let t = manifest.trajectories;
            println!(
                "{}: {} trajectories ({} detected, {} failed) in {:.1} s; outputs in {}",
                command.name(),
                t.total,
                t.detected,
                t.failed,
                manifest.wall_clock_seconds,
                cli.flags.out.display()
            );
            if let Some(a) = manifest.anisotropy {
                println!(
                    "<n>(0)/<n>(90) = {:.2}, max/min = {:.3}",
                    a.ratio_0_over_90, a.max_over_min
                );
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
