use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use orbit_rip::analysis::{omega_two, orbit_constant_exact};
use orbit_rip::experiment::{self, ExperimentConfig};
use orbit_rip::group::{random_sampling_set, GroupKind, SamplingSet};
use orbit_rip::representation::Representation;
use orbit_rip::sensing::{measurement_matrix_from_spec, write_matrix, GeneratorSpec};
use orbit_rip::Result;

#[derive(Parser)]
#[command(name = "orbit-rip", version, about = "Measurement matrices from group orbits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment config (TOML).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides `master_seed` from the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the built-in verification suite.
    Verify(Common),
    /// Phase-transition sweep, CSV output.
    Phase(Common),
    /// Delta-scaling sweep, CSV output; fitted slopes go to stderr.
    Scaling(Common),
    /// Exact orbit constant for the first `m` of the config.
    Constant(Common),
    /// Export a measurement matrix for the first `m` of the config.
    Matrix(Common),
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load_config(common: &Common) -> Result<ExperimentConfig> {
    let path = common
        .config
        .as_deref()
        .ok_or_else(|| orbit_rip::Error::Config("--config is required".into()))?;
    let mut config = ExperimentConfig::from_file(path)?;
    if let Some(seed) = common.seed {
        config.master_seed = seed;
    }
    Ok(config)
}

fn first_sampling_set(config: &ExperimentConfig, rep: &Representation) -> Result<SamplingSet> {
    let allowed = config.allowed_elements(rep.group())?;
    random_sampling_set(rep.group(), config.m_list[0], allowed.as_deref(), config.master_seed)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Verify(common) => {
            let report = experiment::run_verification_suite()?;
            let mut out = open_out(common.out.as_deref())?;
            write!(out, "{report}")?;
            out.flush()?;
            return Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            });
        }
        Command::Phase(common) => {
            let config = load_config(&common)?;
            let table = experiment::run_phase_transition(&config)?;
            let mut out = open_out(common.out.as_deref())?;
            table.write_csv(&mut out)?;
        }
        Command::Scaling(common) => {
            let config = load_config(&common)?;
            let table = experiment::run_delta_scaling(&config)?;
            let mut out = open_out(common.out.as_deref())?;
            table.write_csv(&mut out)?;
            for fit in &table.slopes {
                match fit.slope {
                    Some(v) => eprintln!("slope[s={}] = {v:.16e}", fit.s),
                    None => eprintln!("slope[s={}] =", fit.s),
                }
            }
        }
        Command::Constant(common) => {
            let config = load_config(&common)?;
            let rep = config.validate()?;
            let omega = first_sampling_set(&config, &rep)?;
            let report = orbit_constant_exact(&rep, &omega)?;
            let mut out = open_out(common.out.as_deref())?;
            writeln!(out, "representation = {}", rep.label())?;
            writeln!(out, "m = {}", omega.len())?;
            let elems: Vec<String> = omega.elements().iter().map(usize::to_string).collect();
            writeln!(out, "omega = {}", elems.join(","))?;
            if matches!(rep.group().kind(), GroupKind::Affine { .. }) {
                writeln!(out, "omega_two_size = {}", omega_two(rep.group(), &omega)?.len())?;
            }
            write!(out, "{}", report.to_record())?;
            out.flush()?;
        }
        Command::Matrix(common) => {
            let config = load_config(&common)?;
            let rep = config.validate()?;
            let omega = first_sampling_set(&config, &rep)?;
            let spec = GeneratorSpec {
                distribution: config.distribution,
                dim: rep.dim(),
                seed: config.master_seed,
            };
            let phi = measurement_matrix_from_spec(&rep, &omega, &spec)?;
            let mut out = open_out(common.out.as_deref())?;
            write_matrix(&mut out, phi.entries())?;
            out.flush()?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = experiment::threads_from_env() {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: cannot configure {threads} workers: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
