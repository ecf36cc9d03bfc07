//! `zitterdyn`: command-line laboratory for the delay-field particle model.
//!
//! Subcommands cover time-domain simulation, characteristic-root surveys,
//! energy tables, domain-coloring renders, the invariant suite, and speed
//! sweeps. All outputs are deterministic: a config file plus the version
//! stamp reproduces every artifact byte for byte.

mod config;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use zitterdyn_core as core;
use zitterdyn_core::{Error as CoreError, ModelParams, SearchBox, TrajectoryHistory, UnitMode};

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "zitterdyn",
    version,
    about = "Numerical laboratory for a rigid two-charge particle bound by its own delayed field"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Propagate a seed trajectory and export it as CSV.
    Simulate(SimulateArgs),
    /// Locate and certify characteristic roots, exporting JSON.
    Spectrum(SpectrumArgs),
    /// Tabulate the energy decomposition over a velocity/acceleration grid.
    Energy(EnergyArgs),
    /// Render the characteristic function by domain coloring (PPM).
    Render(RenderArgs),
    /// Run the cross-module invariant suite and print a pass/fail table.
    Verify,
    /// Survey a list of speeds: root sets, optional renders, and a manifest.
    Sweep(SweepArgs),
}

#[derive(clap::Args)]
struct SimulateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Reference speed as a fraction of c.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    /// Seed family for the initial delay interval.
    #[arg(long, value_enum)]
    family: Option<SeedFamily>,
    /// Deviation amplitude, in units of the charge separation d.
    #[arg(long, allow_hyphen_values = true)]
    amplitude: Option<f64>,
    /// Pulse center (time units, seed spans [-2.5 tau, 0]).
    #[arg(long, allow_hyphen_values = true)]
    center: Option<f64>,
    /// Pulse width in time units.
    #[arg(long)]
    width: Option<f64>,
    /// Oscillation frequency per delay interval (sinusoid and mode seeds).
    #[arg(long)]
    omega: Option<f64>,
    /// Sinusoid phase in radians.
    #[arg(long, allow_hyphen_values = true)]
    phase: Option<f64>,
    /// Growth exponent per delay interval (mode seed).
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<f64>,
    /// Trajectory file for the file seed family (CSV with t,x,v,a columns).
    #[arg(long)]
    seed_file: Option<PathBuf>,
    /// Propagation span past the seed, in delay intervals.
    #[arg(long)]
    delays: Option<f64>,
    /// Grid step in time units; default is one sixty-fourth of a delay.
    #[arg(long)]
    grid_step: Option<f64>,
    /// Residual tolerance in length units; default 1e-8 d.
    #[arg(long)]
    tol_eom: Option<f64>,
    /// Charge separation d (model scale).
    #[arg(long)]
    d: Option<f64>,
    /// Unit system: dimensionless internal units or SI.
    #[arg(long, value_enum)]
    unit_mode: Option<UnitModeArg>,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeedFamily {
    Uniform,
    Pulse,
    Sinusoid,
    Mode,
    File,
}

impl std::str::FromStr for SeedFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <SeedFamily as ValueEnum>::from_str(s, true)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum UnitModeArg {
    Dimensionless,
    Si,
}

impl std::str::FromStr for UnitModeArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <UnitModeArg as ValueEnum>::from_str(s, true)
    }
}

#[derive(clap::Args)]
struct SpectrumArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated speeds, e.g. "0,0.3,0.6".
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Search rectangle re_min,re_max,im_min,im_max.
    #[arg(long = "box", allow_hyphen_values = true)]
    search_box: Option<String>,
    /// Phase-scan samples per box edge.
    #[arg(long)]
    grid_density: Option<usize>,
    /// Output JSON path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct EnergyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Speed grid lo,hi,count.
    #[arg(long, allow_hyphen_values = true)]
    beta_grid: Option<String>,
    /// Acceleration grid lo,hi,count (dimensionless beta-dot).
    #[arg(long, allow_hyphen_values = true)]
    bdot_grid: Option<String>,
    /// Series terms for the q_series column.
    #[arg(long)]
    n_terms: Option<u32>,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct RenderArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Speed as a fraction of c.
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    /// Complex rectangle re_min,re_max,im_min,im_max.
    #[arg(long = "box", allow_hyphen_values = true)]
    region: Option<String>,
    /// Pixels along the real axis.
    #[arg(long)]
    res: Option<usize>,
    /// Root-set JSON whose roots are overlaid as crosses.
    #[arg(long)]
    roots: Option<PathBuf>,
    /// Output PPM path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SweepArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated speeds; default covers seven values up to 0.9.
    #[arg(long, allow_hyphen_values = true)]
    betas: Option<String>,
    /// Search rectangle re_min,re_max,im_min,im_max.
    #[arg(long = "box", allow_hyphen_values = true)]
    search_box: Option<String>,
    /// Phase-scan samples per box edge.
    #[arg(long)]
    grid_density: Option<usize>,
    /// Also render a domain-coloring image per speed at this resolution.
    #[arg(long)]
    render_res: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Numeric(CoreError),
    Checks(usize),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Failure {
        Failure::Numeric(e)
    }
}

fn usage<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("ZITTERDYN_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are successful exits
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => run_simulate(a),
        Command::Spectrum(a) => run_spectrum(a),
        Command::Energy(a) => run_energy(a),
        Command::Render(a) => run_render(a),
        Command::Verify => verify::run_verify(),
        Command::Sweep(a) => run_sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numeric(e)) => {
            let doc = serde_json::json!({
                "error": { "kind": e.kind(), "message": e.to_string() }
            });
            eprintln!("{doc}");
            ExitCode::from(2)
        }
        Err(Failure::Checks(n)) => {
            let doc = serde_json::json!({
                "error": { "kind": "verify_failed", "message": format!("{n} invariant check(s) failed") }
            });
            eprintln!("{doc}");
            ExitCode::from(2)
        }
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<RunConfig, Failure> {
    match path {
        Some(p) => usage(RunConfig::load(p)),
        None => Ok(RunConfig::default()),
    }
}

fn parse_quad(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected four comma-separated numbers, got {s:?}"));
    }
    let mut out = [0.0; 4];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("cannot parse {part:?} as a number"))?;
    }
    Ok(out)
}

fn parse_beta_list(s: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for part in s.split(',') {
        out.push(
            part.trim()
                .parse()
                .map_err(|_| format!("cannot parse {part:?} as a number"))?,
        );
    }
    if out.is_empty() {
        return Err("empty speed list".into());
    }
    Ok(out)
}

fn parse_grid(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected lo,hi,count, got {s:?}"));
    }
    let lo = parts[0].trim().parse().map_err(|_| "bad grid lower bound".to_string())?;
    let hi = parts[1].trim().parse().map_err(|_| "bad grid upper bound".to_string())?;
    let n: usize = parts[2].trim().parse().map_err(|_| "bad grid count".to_string())?;
    if n < 1 {
        return Err("grid count must be at least 1".into());
    }
    Ok((lo, hi, n))
}

fn grid_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

fn model_params(
    cfg: &RunConfig,
    d: Option<f64>,
    unit_mode: Option<UnitModeArg>,
) -> Result<ModelParams, Failure> {
    let mode = usage(cfg.resolve(unit_mode, "model", "unit_mode", UnitModeArg::Dimensionless))?;
    let default_d = match mode {
        UnitModeArg::Dimensionless => 1.0,
        UnitModeArg::Si => {
            use core::constants as k;
            k::REDUCED_PLANCK * k::FINE_STRUCTURE / (4.0 * k::ELECTRON_MASS * k::SPEED_OF_LIGHT)
        }
    };
    let d = usage(cfg.resolve(d, "model", "d", default_d))?;
    let mode = match mode {
        UnitModeArg::Dimensionless => UnitMode::Dimensionless,
        UnitModeArg::Si => UnitMode::Si,
    };
    Ok(core::make_params(d, mode)?)
}

fn run_simulate(args: SimulateArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.config)?;
    let params = model_params(&cfg, args.d, args.unit_mode)?;
    let beta = usage(cfg.resolve(args.beta, "simulate", "beta", 0.0))?;
    let family = usage(cfg.resolve(args.family, "simulate", "family", SeedFamily::Uniform))?;
    let amplitude_d = usage(cfg.resolve(args.amplitude, "simulate", "amplitude", 1e-6))?;
    let amplitude = amplitude_d * params.d;
    let delays = usage(cfg.resolve(args.delays, "simulate", "delays", 20.0))?;
    if delays <= 0.0 || delays.is_nan() {
        return Err(Failure::Usage("delays must be positive".into()));
    }

    let gamma = core::lorentz_gamma(beta)?;
    let tau = gamma * params.tau0;
    let span = 2.5 * tau;
    let omega = usage(cfg.resolve(args.omega, "simulate", "omega", 8.327_764_297_362_91))?;
    let sigma = usage(cfg.resolve(args.sigma, "simulate", "sigma", 4.548_546_263_535_465))?;
    let phase = usage(cfg.resolve(args.phase, "simulate", "phase", 0.0))?;
    let center = usage(cfg.resolve(args.center, "simulate", "center", -0.5 * span))?;
    let width = usage(cfg.resolve(args.width, "simulate", "width", 0.125 * tau))?;

    let seed = match family {
        SeedFamily::Uniform => core::uniform_history(beta, -span, 0.0, &params)?,
        SeedFamily::Pulse => {
            core::seed_with_pulse(beta, amplitude, center, width, -span, 0.0, &params)?
        }
        SeedFamily::Sinusoid => {
            core::seed_with_sinusoid(beta, amplitude, omega / tau, phase, -span, 0.0, &params)?
        }
        SeedFamily::Mode => {
            core::seed_with_mode(beta, amplitude, sigma, omega, -span, 0.0, &params)?
        }
        SeedFamily::File => {
            let path = match (&args.seed_file, cfg.get("simulate", "seed_file")) {
                (Some(p), _) => p.clone(),
                (None, Some(p)) => PathBuf::from(p),
                (None, None) => {
                    return Err(Failure::Usage(
                        "the file seed family needs --seed-file".into(),
                    ))
                }
            };
            load_seed_csv(&path)?
        }
    };

    let t_end = seed.t_last().unwrap_or(0.0) + delays * tau;
    let grid_step = usage(cfg.resolve(args.grid_step, "simulate", "grid_step", tau / 64.0))?;
    let tol = usage(cfg.resolve(
        args.tol_eom,
        "simulate",
        "tol_eom",
        core::dynamics::TOL_EOM * params.d,
    ))?;

    let report = core::propagate_with_tolerance(&seed, t_end, grid_step, tol, &params)?;
    let rows = core::trajectory_records(&report.trajectory, &params)?;
    let out = args
        .out
        .or_else(|| cfg.get("simulate", "out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("trajectory.csv"));
    let count = core::export_csv_path(&out, &core::TRAJECTORY_SCHEMA, &rows)?;

    println!(
        "simulate beta={beta} family={} nodes={} span=[{:.6}, {:.6}]",
        family_name(family),
        report.trajectory.len(),
        report.trajectory.t_first().unwrap_or(f64::NAN),
        report.trajectory.t_last().unwrap_or(f64::NAN),
    );
    println!(
        "max_eom_residual={:.3e} min_monotonicity_margin={:.6}",
        report.max_eom_residual, report.min_monotonicity_margin
    );
    for event in &report.events {
        println!("event: {event}");
    }
    println!("wrote {} ({count} rows)", out.display());
    Ok(())
}

fn family_name(f: SeedFamily) -> &'static str {
    match f {
        SeedFamily::Uniform => "uniform",
        SeedFamily::Pulse => "pulse",
        SeedFamily::Sinusoid => "sinusoid",
        SeedFamily::Mode => "mode",
        SeedFamily::File => "file",
    }
}

fn load_seed_csv(path: &PathBuf) -> Result<TrajectoryHistory, Failure> {
    let text = usage(
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display())),
    )?;
    let mut lines = text.lines();
    let header = usage(lines.next().ok_or("seed file is empty"))?;
    let cols: Vec<&str> = header.trim_end_matches('\r').split(',').collect();
    let index_of = |name: &str| -> Result<usize, Failure> {
        cols.iter().position(|c| *c == name).ok_or_else(|| {
            Failure::Usage(format!("seed file lacks required column {name:?}"))
        })
    };
    let (it, ix, iv, ia) = (index_of("t")?, index_of("x")?, index_of("v")?, index_of("a")?);
    let mut states = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let get = |i: usize| -> Result<f64, Failure> {
            fields
                .get(i)
                .and_then(|f| f.trim().parse().ok())
                .ok_or_else(|| Failure::Usage(format!("seed file row {}: bad field", n + 2)))
        };
        states.push(core::KinematicState::new(get(it)?, get(ix)?, get(iv)?, get(ia)?));
    }
    Ok(TrajectoryHistory::from_states(states)?)
}

fn run_spectrum(args: SpectrumArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.config)?;
    let betas = usage(parse_beta_list(&cfg.resolve(
        args.beta,
        "spectrum",
        "beta",
        "0".to_string(),
    ).map_err(Failure::Usage)?))?;
    let quad = match usage(cfg.resolve_opt(args.search_box, "spectrum", "box"))? {
        Some(raw) => usage(parse_quad(&raw))?,
        None => {
            let b = core::default_search_box();
            [b.re_min, b.re_max, b.im_min, b.im_max]
        }
    };
    let search = SearchBox::new(quad[0], quad[1], quad[2], quad[3])?;
    let density = usage(cfg.resolve(
        args.grid_density,
        "spectrum",
        "grid_density",
        core::DEFAULT_GRID_DENSITY,
    ))?;
    let out = args
        .out
        .or_else(|| cfg.get("spectrum", "out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("roots.json"));

    let mut docs = Vec::new();
    for &beta in &betas {
        let rs = core::find_roots(beta, &search, density)?;
        println!(
            "beta={beta}: {} roots, certified count {}",
            rs.roots.len(),
            rs.certified_count
        );
        docs.push(rs);
    }
    if docs.len() == 1 {
        core::export_root_set_path(&out, &docs[0])?;
    } else {
        let all: Vec<core::RootSetDocument> = docs
            .iter()
            .map(core::RootSetDocument::from_root_set)
            .collect();
        let text = serde_json::to_string_pretty(&all).expect("documents serialize");
        usage(std::fs::write(&out, text + "\n").map_err(|e| format!("{}: {e}", out.display())))?;
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn run_energy(args: EnergyArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.config)?;
    let params = ModelParams::dimensionless();
    let beta_grid = usage(parse_grid(&cfg.resolve(
        args.beta_grid,
        "energy",
        "beta_grid",
        "0,0.99,50".to_string(),
    ).map_err(Failure::Usage)?))?;
    let bdot_grid = usage(parse_grid(&cfg.resolve(
        args.bdot_grid,
        "energy",
        "bdot_grid",
        "0,1,50".to_string(),
    ).map_err(Failure::Usage)?))?;
    let n_terms = usage(cfg.resolve(args.n_terms, "energy", "n_terms", 40u32))?;
    let out = args
        .out
        .or_else(|| cfg.get("energy", "out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("energy.csv"));

    let header = [
        "beta", "bdot", "chi", "r", "l", "energy", "q_closed", "q_series",
    ];
    let mut rows = Vec::new();
    for &beta in &grid_points(beta_grid.0, beta_grid.1, beta_grid.2) {
        let gamma = core::lorentz_gamma(beta)?;
        for &bdot in &grid_points(bdot_grid.0, bdot_grid.1, bdot_grid.2) {
            let chi = gamma.powi(6) * bdot * bdot;
            let r = core::delay_closed_form(beta, bdot, &params)?;
            let l = core::separation_l(beta, bdot, &params)?;
            let e = core::self_energy_exact(beta, bdot, &params)?;
            let q = core::quantum_potential_closed(beta, bdot, &params)?;
            let series = core::quantum_potential_series(beta, bdot, n_terms, &params)?;
            rows.push(vec![beta, bdot, chi, r, l, e, q, series.value]);
        }
    }
    let count = core::export_csv_path(&out, &header, &rows)?;
    println!("wrote {} ({count} rows)", out.display());
    Ok(())
}

fn run_render(args: RenderArgs) -> Result<(), Failure> {
    let cfg = load_config(&args.config)?;
    let beta = usage(cfg.resolve(args.beta, "render", "beta", 0.0))?;
    let quad = match usage(cfg.resolve_opt(args.region, "render", "box"))? {
        Some(raw) => usage(parse_quad(&raw))?,
        None => [-15.0, 15.0, -15.0, 15.0],
    };
    let region = SearchBox::new(quad[0], quad[1], quad[2], quad[3])?;
    let res = usage(cfg.resolve(args.res, "render", "res", 800usize))?;
    let out = args
        .out
        .or_else(|| cfg.get("render", "out").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("charfn.ppm"));

    let markers: Vec<(f64, f64)> = match args
        .roots
        .or_else(|| cfg.get("render", "roots").map(PathBuf::from))
    {
        Some(path) => {
            let text = usage(
                std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display())),
            )?;
            let doc = core::parse_root_set(&text)?;
            doc.roots.iter().map(|r| (r.re, r.im)).collect()
        }
        None => Vec::new(),
    };

    let image = core::render_domain_coloring(beta, &region, res, &markers)?;
    core::write_ppm_path(&image, &out)?;
    println!(
        "wrote {} ({}x{} pixels, {} root markers)",
        out.display(),
        image.width,
        image.height,
        markers.len()
    );
    Ok(())
}

#[derive(serde::Serialize)]
struct SweepEntry {
    beta: f64,
    roots: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    image: Option<String>,
}

#[derive(serde::Serialize)]
struct SweepManifest {
    version: String,
    search_box: [f64; 4],
    grid_density: usize,
    outputs: Vec<SweepEntry>,
}

fn run_sweep(args: SweepArgs) -> Result<(), Failure> {
    use rayon::prelude::*;

    let cfg = load_config(&args.config)?;
    let betas = usage(parse_beta_list(&cfg.resolve(
        args.betas,
        "sweep",
        "betas",
        "0,0.15,0.3,0.45,0.6,0.75,0.9".to_string(),
    ).map_err(Failure::Usage)?))?;
    let quad = match usage(cfg.resolve_opt(args.search_box, "sweep", "box"))? {
        Some(raw) => usage(parse_quad(&raw))?,
        None => {
            let b = core::default_search_box();
            [b.re_min, b.re_max, b.im_min, b.im_max]
        }
    };
    let search = SearchBox::new(quad[0], quad[1], quad[2], quad[3])?;
    let density = usage(cfg.resolve(
        args.grid_density,
        "sweep",
        "grid_density",
        core::DEFAULT_GRID_DENSITY,
    ))?;
    let render_res = usage(cfg.resolve_opt(args.render_res, "sweep", "render_res"))?;
    let out_dir = args
        .out_dir
        .or_else(|| cfg.get("sweep", "out_dir").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("sweep"));
    usage(std::fs::create_dir_all(&out_dir).map_err(|e| format!("{}: {e}", out_dir.display())))?;

    // workers fan out over the speed list; results merge in index order
    let results: Vec<Result<SweepEntry, CoreError>> = betas
        .par_iter()
        .enumerate()
        .map(|(idx, &beta)| {
            let rs = core::find_roots(beta, &search, density)?;
            let roots_name = format!("roots_{idx:02}_beta{beta}.json");
            core::export_root_set_path(out_dir.join(&roots_name), &rs)?;
            let image = match render_res {
                Some(res) => {
                    let markers: Vec<(f64, f64)> =
                        rs.roots.iter().map(|r| (r.re, r.im)).collect();
                    let region = SearchBox::new(-15.0, 15.0, -15.0, 15.0)?;
                    let img = core::render_domain_coloring(beta, &region, res, &markers)?;
                    let name = format!("charfn_{idx:02}_beta{beta}.ppm");
                    core::write_ppm_path(&img, out_dir.join(&name))?;
                    Some(name)
                }
                None => None,
            };
            Ok(SweepEntry {
                beta,
                roots: roots_name,
                image,
            })
        })
        .collect();

    let mut outputs = Vec::new();
    for r in results {
        outputs.push(r?);
    }
    let manifest = SweepManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        search_box: quad,
        grid_density: density,
        outputs,
    };
    let path = out_dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    usage(std::fs::write(&path, text + "\n").map_err(|e| format!("{}: {e}", path.display())))?;
    for entry in &manifest.outputs {
        println!("beta={}: {}", entry.beta, entry.roots);
    }
    println!("wrote {}", path.display());
    Ok(())
}
