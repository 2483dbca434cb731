mod grid;
mod manifest;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use dmm_core::capacity::{self, Modulation};
use dmm_core::simkit::{
    write_genie_csv, write_sweep_csv, Execution, SweepResult, System, SystemConfig,
};

use manifest::{fingerprints, now_unix_ms, RunManifest, RunSpec, SweepMode};

#[derive(Parser)]
#[command(name = "dmm", version, about = "Double-mapping modulation simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mutual information of BPSK or QPSK over an Es/N0 grid.
    Capacity(CapacityArgs),
    /// Monte-Carlo BER sweep of the two-stream system or the BPSK baseline.
    BerSweep(SweepArgs),
    /// Inner-stream BER with genie versus estimated rotations on the same frames.
    GenieCompare(RunArgs),
    /// Largest outer code rate the constellation geometry allows.
    RateBound(RateArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML system config, or a JSON run manifest to replay.
    config: Option<PathBuf>,
    /// Es/N0 grid in dB: `start:stop:step` or `a,b,c`.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 or 1 runs sequentially. Results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
    /// Frame cap per grid point.
    #[arg(long)]
    max_frames: Option<u64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Run conventional BPSK with the inner code alone.
    #[arg(long, value_enum, conflicts_with = "genie")]
    baseline: Option<Baseline>,
    /// Also decode every frame with genie rotations and write the paired comparison.
    #[arg(long)]
    genie: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Baseline {
    Bpsk,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModulationArg {
    Bpsk,
    Qpsk,
}

impl From<ModulationArg> for Modulation {
    fn from(m: ModulationArg) -> Self {
        match m {
            ModulationArg::Bpsk => Modulation::Bpsk,
            ModulationArg::Qpsk => Modulation::Qpsk,
        }
    }
}

#[derive(Args)]
struct CapacityArgs {
    /// JSON run manifest to replay.
    manifest: Option<PathBuf>,
    #[arg(long, value_enum)]
    modulation: Option<ModulationArg>,
    /// Es/N0 grid in dB: `start:stop:step` or `a,b,c`.
    #[arg(long)]
    grid: Option<String>,
    /// Report the Eb/N0 at which the mutual information reaches this many bits.
    #[arg(long)]
    bisect: Vec<f64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct RateArgs {
    /// Inner code rate, in (0, 1).
    r1: f64,
    /// Outer code rate to check against the bound.
    #[arg(long)]
    r2: Option<f64>,
}

const DEFAULT_CAPACITY_GRID: &str = "-2:10:0.5";

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Capacity(a) => cmd_capacity(a),
        Command::BerSweep(a) => {
            let mode = match (a.baseline, a.genie) {
                (Some(Baseline::Bpsk), _) => Some(SweepMode::BpskBaseline),
                (None, true) => Some(SweepMode::GenieCompare),
                (None, false) => None,
            };
            cmd_sweep(a.run, mode, false)
        }
        Command::GenieCompare(a) => cmd_sweep(a, Some(SweepMode::GenieCompare), true),
        Command::RateBound(a) => cmd_rate_bound(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn is_manifest(path: &Path) -> bool {
    path.extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn write_output(
    out_dir: &Path,
    name: &str,
    bytes: &[u8],
    outputs: &mut Vec<PathBuf>,
) -> Result<()> {
    let path = out_dir.join(name);
    std::fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
    outputs.push(path);
    Ok(())
}

fn finish(mut manifest: RunManifest, out_dir: &Path, stem: &str) -> Result<()> {
    let path = out_dir.join(format!("{stem}.manifest.json"));
    manifest.outputs.push(path.clone());
    manifest.finished_unix_ms = now_unix_ms();
    manifest.write(&path)?;
    for p in &manifest.outputs {
        println!("wrote {}", p.display());
    }
    Ok(())
}

// ---------------------------------------------------------------------------

fn cmd_capacity(a: CapacityArgs) -> Result<()> {
    let started = now_unix_ms();
    let (mut modulation, mut grid_db, mut bisect) = match &a.manifest {
        Some(path) => match RunManifest::read(path)?.run {
            RunSpec::Capacity {
                modulation,
                grid_db,
                bisect,
            } => (modulation, grid_db, bisect),
            RunSpec::Sweep { .. } => {
                bail!("{} records a sweep, not a capacity run", path.display())
            }
        },
        None => (
            Modulation::Bpsk,
            grid::parse(DEFAULT_CAPACITY_GRID)?,
            Vec::new(),
        ),
    };
    if let Some(m) = a.modulation {
        modulation = m.into();
    }
    if let Some(g) = &a.grid {
        grid_db = grid::parse(g)?;
    }
    if !a.bisect.is_empty() {
        bisect = a.bisect.clone();
    }
    if grid_db.is_empty() {
        bail!("grid: must not be empty");
    }

    let name = match modulation {
        Modulation::Bpsk => "bpsk",
        Modulation::Qpsk => "qpsk",
    };
    std::fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let mut manifest = RunManifest::new(
        RunSpec::Capacity {
            modulation,
            grid_db: grid_db.clone(),
            bisect: bisect.clone(),
        },
        None,
        started,
    );

    let points: Vec<_> = grid_db
        .iter()
        .map(|&s| modulation.mutual_information(s))
        .collect();
    let mut csv = Vec::new();
    capacity::write_mi_csv(&points, &mut csv)?;
    write_output(
        &a.out,
        &format!("mi_{name}.csv"),
        &csv,
        &mut manifest.outputs,
    )?;

    if !bisect.is_empty() {
        let mut csv = String::from("target_bits,esn0_db,ebn0_db\n");
        for &target in &bisect {
            let esn0 = capacity::esn0_at_mi(modulation, target)
                .with_context(|| format!("bisect {target}"))?;
            let ebn0 = capacity::ebn0_at_rate(modulation, target)?;
            println!("{name}: MI = {target} bits at Es/N0 = {esn0:.4} dB, Eb/N0 = {ebn0:.4} dB");
            writeln!(csv, "{target},{esn0:.4},{ebn0:.4}")?;
        }
        write_output(
            &a.out,
            &format!("mi_{name}_bisect.csv"),
            csv.as_bytes(),
            &mut manifest.outputs,
        )?;
    }
    finish(manifest, &a.out, &format!("mi_{name}"))
}

// ---------------------------------------------------------------------------

/// Config from a TOML file (alist paths made absolute), a replayed manifest,
/// or the built-in desk-scale default.
fn load_sweep_input(
    path: Option<&Path>,
) -> Result<(SystemConfig, Option<SweepMode>, Option<RunManifest>)> {
    let Some(path) = path else {
        return Ok((SystemConfig::default(), None, None));
    };
    if is_manifest(path) {
        let m = RunManifest::read(path)?;
        return match m.run.clone() {
            RunSpec::Sweep { mode, config } => Ok((config, Some(mode), Some(m))),
            RunSpec::Capacity { .. } => {
                bail!("{} records a capacity run, not a sweep", path.display())
            }
        };
    }
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let mut cfg: SystemConfig =
        toml::from_str(&text).with_context(|| format!("config {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    cfg.inner_code.absolutize(base);
    cfg.outer_code.base.absolutize(base);
    Ok((cfg, None, None))
}

fn cmd_sweep(a: RunArgs, requested: Option<SweepMode>, compare_only: bool) -> Result<()> {
    let started = now_unix_ms();
    let (mut cfg, recorded, replay) = load_sweep_input(a.config.as_deref())?;
    if compare_only && recorded.is_some_and(|m| m != SweepMode::GenieCompare) {
        bail!(
            "manifest records a {:?} sweep, not a genie comparison",
            recorded.unwrap()
        );
    }
    if let Some(g) = &a.grid {
        cfg.esn0_grid_db = grid::parse(g)?;
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(n) = a.max_frames {
        cfg.stop.max_frames = n;
    }
    let mut mode = requested.or(recorded).unwrap_or(SweepMode::Dmm);
    if mode == SweepMode::Dmm && cfg.genie_beta {
        mode = SweepMode::DmmGenie;
    }
    if mode == SweepMode::DmmGenie {
        cfg.genie_beta = true;
    }

    let sys = System::build(cfg.clone())?;
    if let Some(m) = &replay {
        m.check_fingerprints(&sys)?;
    }
    let exec = Execution::from_workers(a.workers);
    std::fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;

    let mut manifest = RunManifest::new(RunSpec::Sweep { mode, config: cfg }, a.workers, started);
    manifest.code_fingerprints = fingerprints(&sys);
    eprintln!(
        "{mode:?}: inner ({}, {}), outer ({}, {}) x{}, {} grid points",
        sys.inner().n_code(),
        sys.inner().k_info(),
        sys.outer().base().n_code(),
        sys.outer().base().k_info(),
        sys.outer().rep_factor(),
        sys.config().esn0_grid_db.len()
    );

    let stem = match mode {
        SweepMode::Dmm | SweepMode::DmmGenie | SweepMode::BpskBaseline => {
            let (result, stem) = match mode {
                SweepMode::BpskBaseline => (sys.run_bpsk_baseline(exec)?, "ber_bpsk"),
                SweepMode::DmmGenie => (sys.run_sweep(exec)?, "ber_dmm_genie"),
                _ => (sys.run_sweep(exec)?, "ber_dmm"),
            };
            print_sweep(&result);
            manifest.eta = Some(result.eta);
            let mut csv = Vec::new();
            write_sweep_csv(&result, &mut csv)?;
            write_output(&a.out, &format!("{stem}.csv"), &csv, &mut manifest.outputs)?;
            stem
        }
        SweepMode::GenieCompare => {
            let cmp = sys.run_genie_compare(exec)?;
            manifest.eta = Some(cmp.affected.eta);
            println!(
                "esn0_db  ebn0_db  ber_outer  ber_inner_genie  ber_inner_affected  gap  ci95_width"
            );
            for g in cmp.gaps() {
                println!(
                    "{:8.4} {:8.4} {:10.3e} {:16.3e} {:19.3e} {:9.2e} {:9.2e}",
                    g.esn0_db,
                    g.ebn0_db,
                    g.ber_outer,
                    g.ber_inner_genie,
                    g.ber_inner_affected,
                    g.gap,
                    g.ci95_width_genie
                );
            }
            for (name, r) in [
                ("genie_compare", None),
                ("genie_compare_affected", Some(&cmp.affected)),
                ("genie_compare_genie", Some(&cmp.genie)),
            ] {
                let mut csv = Vec::new();
                match r {
                    None => write_genie_csv(&cmp, &mut csv)?,
                    Some(r) => write_sweep_csv(r, &mut csv)?,
                }
                write_output(&a.out, &format!("{name}.csv"), &csv, &mut manifest.outputs)?;
            }
            "genie_compare"
        }
    };
    finish(manifest, &a.out, stem)
}

fn print_sweep(r: &SweepResult) {
    println!("{:?}, eta = {:.4}", r.kind, r.eta);
    println!("esn0_db  ebn0_db   frames  ber_inner  ber_outer  ber_combined  fer");
    for p in &r.points {
        let outer = p
            .ber_outer()
            .map_or("-".to_string(), |b| format!("{b:.3e}"));
        println!(
            "{:8.4} {:8.4} {:8} {:10.3e} {:>10} {:13.3e} {:9.3e}",
            p.esn0_db,
            p.ebn0_db,
            p.tally.frames,
            p.ber_inner(),
            outer,
            p.ber_combined(),
            p.fer()
        );
    }
}

// ---------------------------------------------------------------------------

fn cmd_rate_bound(a: RateArgs) -> Result<()> {
    let bound = capacity::rate_bound_outer(a.r1).context("r1 must lie in (0, 1)")?;
    let ratio = 1.0 / bound;
    println!("R1 = {:.6}", a.r1);
    if (ratio - ratio.round()).abs() < 1e-9 {
        println!("bound: R2 < R1/4 = 1/{} = {bound:.6}", ratio.round());
    } else {
        println!("bound: R2 < R1/4 = {bound:.6}");
    }
    if let Some(r2) = a.r2 {
        if !(r2 > 0.0 && r2 < 1.0) {
            bail!("r2 must lie in (0, 1), got {r2}");
        }
        let verdict = if r2 < bound { "satisfied" } else { "violated" };
        println!(
            "R2 = {r2:.6}: {verdict} (eta = R1 + R2 = {:.6})",
            capacity::eta_total(a.r1, r2)
        );
    }
    Ok(())
}
