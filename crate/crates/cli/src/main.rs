use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use gravdit::output::{write_atomic, Cell, Format, Table};
use gravdit::propagate::{chi0, detector_window, evolve_sd, Evolver};
use gravdit::run_config::{parse_config, ConfigLayer, RunConfig, Scenario};
use gravdit::scenario_a::{self, ShutterBeam};
use gravdit::scenario_b::{self, eigenfunction, grav_state, time_delay, time_scales, GravEigenstate};
use gravdit::Error;

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "gravdit", version, about = "Diffraction in time of free-falling quantum particles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shutter beam released in gravity: quantum and classical detector density.
    ScenarioA(RunArgs),
    /// Released gravitational bound state: exact and stationary-phase density.
    ScenarioB(RunArgs),
    /// Diffraction widths for the particle catalog.
    Widths(RunArgs),
    /// Arrival delays for the particle catalog.
    Delays(RunArgs),
    /// Mass sweep of the scale-dependent quantities.
    Sweep(RunArgs),
}

#[derive(Args, Default)]
struct RunArgs {
    /// Particle name from the catalog.
    #[arg(long)]
    particle: Option<String>,
    /// Bound-state index.
    #[arg(long)]
    n: Option<u32>,
    /// Detector position, m (negative, below the release point).
    #[arg(long, allow_hyphen_values = true)]
    z: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_end: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Gravitational acceleration, m/s^2.
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
    /// Reduced Planck constant, J s.
    #[arg(long, allow_hyphen_values = true)]
    hbar: Option<f64>,
    /// Relative tolerance of the oscillatory quadrature.
    #[arg(long, allow_hyphen_values = true)]
    rel_tol: Option<f64>,
    /// Beam speed, m/s (overrides the catalog default).
    #[arg(long, allow_hyphen_values = true)]
    speed: Option<f64>,
    /// Comma-separated mass multipliers for `sweep`.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    factors: Option<Vec<f64>>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_format)]
    format: Option<Format>,
    /// JSON file with flat keys matching these flags.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn parse_format(s: &str) -> std::result::Result<Format, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl RunArgs {
    fn layer(&self) -> ConfigLayer {
        ConfigLayer {
            particle: self.particle.clone(),
            n: self.n,
            z: self.z,
            t_start: self.t_start,
            t_end: self.t_end,
            points: self.points,
            g: self.g,
            hbar: self.hbar,
            rel_tol: self.rel_tol,
            speed: self.speed,
            out: self.out.clone(),
            format: self.format,
            factors: self.factors.clone(),
            ..Default::default()
        }
    }

    fn resolve(&self, scenario: Scenario) -> Result<RunConfig> {
        let mut layer = self.layer();
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            layer = layer.over(parse_config(&text)?);
        }
        Ok(RunConfig::resolve(scenario, layer)?)
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| if i + 1 == n { hi } else { lo + i as f64 * step }).collect()
}

fn emit(cfg: &RunConfig, table: &Table) -> Result<()> {
    let text = table.render(cfg.format);
    match &cfg.out {
        Some(path) => write_atomic(path, text.as_bytes()).with_context(|| format!("writing {}", path.display())),
        None => io::stdout().lock().write_all(text.as_bytes()).context("writing to standard output"),
    }
}

fn cmd_scenario_a(cfg: &RunConfig) -> Result<()> {
    let beam = ShutterBeam::for_particle(&cfg.particle, cfg.speed, &cfg.constants)?;
    let arrival = scenario_a::classical_tof(&beam, cfg.z)?;
    let (lo, hi) = cfg
        .window
        .map_or((0.0, 3.0 * arrival), |w| (w.t_start, w.t_end));
    let mut table = Table::new(["t", "quantum_density", "classical_density", "xi"]);
    for t in linspace(lo, hi, cfg.points) {
        let row = if t == 0.0 {
            // The shutter is still closed.
            vec![t.into(), 0.0.into(), 0.0.into(), f64::NEG_INFINITY.into()]
        } else {
            vec![
                t.into(),
                scenario_a::density_a(&beam, cfg.z, t)?.into(),
                scenario_a::classical_density_a(&beam, cfg.z, t)?.into(),
                scenario_a::xi(&beam, cfg.z, t)?.into(),
            ]
        };
        table.push(row);
    }
    emit(cfg, &table)?;
    eprintln!("T = {arrival:.10e} s");
    match scenario_a::diffraction_width(&beam, cfg.z) {
        Ok(w) => eprintln!("delta_t = {:.10e} s", w.delta_t),
        Err(e) => eprintln!("delta_t unavailable: {e}"),
    }
    Ok(())
}

fn cmd_scenario_b(cfg: &RunConfig) -> Result<()> {
    let n = cfg.n.expect("resolved scenario b carries n");
    let state = grav_state(n, &cfg.particle, &cfg.constants)?;
    let (lo, hi) = match cfg.window {
        Some(w) => (w.t_start, w.t_end),
        None => detector_window(&state, cfg.z)?,
    };
    let ts = linspace(lo, hi, cfg.points);
    let evolver = Evolver::new(state, cfg.quadrature)?;
    let positive: Vec<f64> = ts.iter().copied().filter(|&t| t > 0.0).collect();
    let mut exact = evolver.detector_profile(cfg.z, &positive)?.into_iter();
    let mut table = Table::new(["t", "exact_density", "sd_density", "chi0"]);
    for &t in &ts {
        let c = chi0(&state, cfg.z, t).chi0;
        let row: Vec<Cell> = if t == 0.0 {
            let initial = eigenfunction(&state, cfg.z).powi(2);
            vec![t.into(), initial.into(), initial.into(), c.into()]
        } else {
            let e = exact.next().expect("one exact value per positive time");
            vec![t.into(), e.into(), evolve_sd(&state, cfg.z, t)?.density().into(), c.into()]
        };
        table.push(row);
    }
    emit(cfg, &table)?;
    let scales = time_scales(&state, cfg.z)?;
    eprintln!("tau = {:.10e} s", scales.tau);
    eprintln!("t_mean = {:.10e} s", scales.t_mean);
    eprintln!("t_class = {:.10e} s", scales.t_class);
    eprintln!("time_delay = {:.10e}", time_delay(&state, cfg.z)?);
    Ok(())
}

fn cmd_widths(cfg: &RunConfig) -> Result<()> {
    let rows = scenario_a::width_table(&cfg.catalog, &cfg.constants, cfg.z)?;
    let mut table = Table::new([
        "particle",
        "mass",
        "speed",
        "z",
        "classical_tof",
        "computed_width",
        "quoted_width",
        "rel_discrepancy",
    ]);
    for r in rows {
        table.push(vec![
            r.particle.into(),
            r.mass.into(),
            r.speed.into(),
            r.z.into(),
            r.classical_tof.into(),
            r.computed_width.into(),
            r.quoted_width.into(),
            r.rel_discrepancy.into(),
        ]);
    }
    emit(cfg, &table)
}

fn cmd_delays(cfg: &RunConfig) -> Result<()> {
    let particles: Vec<_> = scenario_b::TABLE_PARTICLES
        .iter()
        .map(|p| cfg.catalog.lookup(p).cloned())
        .collect::<gravdit::Result<_>>()?;
    let ns: Vec<u32> = cfg.n.map_or(vec![1, 2], |n| vec![n]);
    let rows = scenario_b::delay_table(&particles, &ns, &cfg.constants, cfg.z)?;
    let mut table = Table::new(["particle", "n", "computed_delay", "quoted_delay", "rel_discrepancy"]);
    for r in rows {
        table.push(vec![
            r.particle.into(),
            r.n.into(),
            r.computed_delay.into(),
            r.quoted_delay.into(),
            r.rel_discrepancy.into(),
        ]);
    }
    emit(cfg, &table)
}

fn cmd_sweep(cfg: &RunConfig) -> Result<()> {
    let n = cfg.n.unwrap_or(1);
    let mut table = Table::new([
        "factor",
        "mass",
        "l_g",
        "h_n",
        "diffraction_width",
        "t_class",
        "t_mean",
        "tau",
        "time_delay",
    ]);
    for &k in &cfg.factors {
        let p = cfg.particle.scaled_mass(k)?;
        let beam = ShutterBeam::for_particle(&p, cfg.speed, &cfg.constants)?;
        let width = scenario_a::diffraction_width(&beam, cfg.z).ok().map(|w| w.delta_t);
        let s: GravEigenstate = grav_state(n, &p, &cfg.constants)?;
        let ts = time_scales(&s, cfg.z)?;
        table.push(vec![
            k.into(),
            p.mass.into(),
            s.l_g.into(),
            s.h_n.into(),
            width.into(),
            ts.t_class.into(),
            ts.t_mean.into(),
            ts.tau.into(),
            time_delay(&s, cfg.z)?.into(),
        ]);
    }
    emit(cfg, &table)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::ScenarioA(a) => cmd_scenario_a(&a.resolve(Scenario::A)?),
        Command::ScenarioB(a) => cmd_scenario_b(&a.resolve(Scenario::B)?),
        Command::Widths(a) => cmd_widths(&a.resolve(Scenario::A)?),
        Command::Delays(a) => cmd_delays(&a.resolve(Scenario::A)?),
        Command::Sweep(a) => cmd_sweep(&a.resolve(Scenario::A)?),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Numerical { .. }) => EXIT_NUMERICAL,
        Some(_) => EXIT_USAGE,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
