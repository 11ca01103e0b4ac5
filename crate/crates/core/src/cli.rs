//! Command-line front end: `threshold`, `sweep`, `reproduce`, `genspectrum`.
//!
//! Exit codes: 0 success, 1 a reproduction check failed, 2 malformed input
//! or usage error, 3 a spectrum violating the rate lower bound.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::asymptotics::fer_asym_small_cstar;
use crate::energy::{energy_saving, energy_saving_firf, energy_saving_kappa, optimize_tau0, EnergyQuery};
use crate::error::Error;
use crate::outage::{fer_bound, outage_m2_cooperative, FerEstimate, McOptions};
use crate::puncturing::punctured_threshold;
use crate::scenario::{BoundSpec, ScenarioFile};
use crate::simulator::{simulate_fer, SimConfig};
use crate::spectra::WeightSpectrum;
use crate::stats::{self, Z99};
use crate::{from_db, to_db};

#[derive(Debug, Parser)]
#[command(name = "ircoop", version, about = "Thresholds, FER bounds and simulation for IR cooperative coding")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Code thresholds of a spectrum file and its punctured thresholds.
    Threshold(ThresholdArgs),
    /// CSV sweep of bounds, simulation or energy savings over one variable.
    Sweep(SweepArgs),
    /// Canned reproduction checks with PASS/FAIL lines.
    Reproduce(ReproduceArgs),
    /// Writes the random binary spectrum of a given rate.
    Genspectrum(GenspectrumArgs),
}

#[derive(Debug, Args, Clone, Copy)]
#[group(multiple = false)]
pub struct Scale {
    /// Print SNRs and energy savings in dB (default).
    #[arg(long)]
    pub db: bool,
    /// Print SNRs and energy savings as linear ratios.
    #[arg(long)]
    pub linear: bool,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long)]
    pub spectrum: PathBuf,
    /// Survival fractions for the punctured-threshold table.
    #[arg(long = "tau", value_delimiter = ',')]
    pub taus: Vec<f64>,
    #[command(flatten)]
    pub scale: Scale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SweepVar {
    SnrLambdaDb,
    SnrRhoDb,
    EnergyDb,
    Kappa,
    M,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Bound,
    Asymptotic,
    Simulation,
    Energy,
}

impl Output {
    fn name(self) -> &'static str {
        match self {
            Output::Bound => "bound",
            Output::Asymptotic => "asymptotic",
            Output::Simulation => "simulation",
            Output::Energy => "energy",
        }
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long, value_enum)]
    pub var: SweepVar,
    #[arg(long, allow_negative_numbers = true)]
    pub start: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub stop: f64,
    #[arg(long)]
    pub steps: usize,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "bound")]
    pub outputs: Vec<Output>,
    /// Overrides the simulation seed of the scenario file.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Takes `c★` from this spectrum instead of the scenario file.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub scale: Scale,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Recipe {
    Table2,
    Example2,
    M2Bound,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub recipe: Recipe,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub scale: Scale,
}

#[derive(Debug, Args)]
pub struct GenspectrumArgs {
    #[arg(long)]
    pub rate: f64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::RateBoundViolated { .. } | Error::InfeasibleSpectrum(_) => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// Parses `args` (program name first) and runs the command, writing to
/// `out` and `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Threshold(a) => threshold(&a, out),
        Command::Sweep(a) => sweep(&a, out),
        Command::Reproduce(a) => reproduce(&a, out),
        Command::Genspectrum(a) => genspectrum(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn threshold(a: &ThresholdArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let spectrum = WeightSpectrum::load(&a.spectrum)?;
    let t = spectrum.simple_threshold()?;
    writeln!(out, "label\t{}", spectrum.label())?;
    writeln!(out, "rate\t{}", spectrum.rate())?;
    writeln!(out, "c0\t{:.6}", t.c0)?;
    writeln!(out, "c_star\t{:.6}", t.c_star)?;
    writeln!(out, "p_star\t{:.6}", t.p_star)?;
    writeln!(out, "sf_distance_bits\t{:.6}", spectrum.sf_distance())?;
    let taus: Vec<f64> =
        if a.taus.is_empty() { (1..=7).rev().map(|k| k as f64 / 7.0).collect() } else { a.taus.clone() };
    let unit = if a.scale.linear { "linear" } else { "db" };
    writeln!(out, "tau\tchi_nats\tchi_{unit}")?;
    for tau in taus {
        match punctured_threshold(t.c_star, tau) {
            Ok(chi) => {
                let shown = if a.scale.linear { chi } else { to_db(chi) };
                writeln!(out, "{tau:.6}\t{chi:.6}\t{shown:.6}")?;
            }
            Err(_) => writeln!(out, "{tau:.6}\tnot-self-decodable\t-")?,
        }
    }
    Ok(0)
}

fn genspectrum(a: &GenspectrumArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    if !(a.rate > 0.0 && a.rate < 1.0) {
        return Err(usage(format!("rate {} not in (0, 1)", a.rate)));
    }
    let s = WeightSpectrum::random_binary(a.rate, a.samples)?;
    let json = s.to_json();
    match &a.out {
        Some(path) => std::fs::write(path, json + "\n")?,
        None => writeln!(out, "{json}")?,
    }
    Ok(0)
}

/// Evenly spaced sweep points, inclusive.
pub fn sweep_points(start: f64, stop: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| if i + 1 == steps { stop } else { start + (stop - start) * i as f64 / (steps - 1) as f64 })
        .collect()
}

struct Row {
    point: f64,
    kind: &'static str,
    value: f64,
    half_width: f64,
    flags: String,
}

fn fer_row(point: f64, kind: Output, est: &FerEstimate) -> Row {
    Row { point, kind: kind.name(), value: est.value, half_width: est.half_width, flags: est.flags.join(";") }
}

fn sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    if a.steps < 2 {
        return Err(usage("--steps must be >= 2"));
    }
    if !(a.stop > a.start) {
        return Err(usage("--stop must exceed --start"));
    }
    let mut base = ScenarioFile::load(&a.scenario)?;
    if let Some(path) = &a.spectrum {
        base.code.c_star = WeightSpectrum::load(path)?.simple_threshold()?.c_star;
        base.scenario()?;
    }
    let wants = |o: Output| a.outputs.contains(&o);
    let sim_spec = match (&base.simulation, wants(Output::Simulation)) {
        (None, true) => return Err(usage("simulation output needs a `simulation` section with a seed")),
        (s, _) => s.clone(),
    };
    let energy_spec = match (&base.energy, wants(Output::Energy)) {
        (None, true) => return Err(usage("energy output needs an `energy` section")),
        (e, _) => e.clone(),
    };
    if a.var == SweepVar::Kappa && a.outputs.iter().any(|&o| o != Output::Energy) {
        return Err(usage("κ sweeps support the energy output only"));
    }
    if a.var == SweepVar::M && a.start.fract() != 0.0 {
        return Err(usage("M sweeps need integer bounds"));
    }
    let bound_spec = base.bound.clone().unwrap_or_default();

    let mut rows = Vec::new();
    let points: Vec<f64> = match a.var {
        SweepVar::M => (a.start as usize..=a.stop as usize).map(|m| m as f64).collect(),
        _ => sweep_points(a.start, a.stop, a.steps),
    };
    for &x in &points {
        let mut file = base.clone();
        match a.var {
            SweepVar::SnrLambdaDb => file.set_lambda_db(x)?,
            SweepVar::SnrRhoDb => file.set_rho_db(x)?,
            SweepVar::EnergyDb => file.set_energy_db(x)?,
            SweepVar::M => file.set_m(x as usize)?,
            SweepVar::Kappa => {}
        }
        let scenario = if a.var == SweepVar::Kappa { None } else { Some(file.scenario()?) };
        let point = match a.var {
            SweepVar::SnrLambdaDb | SweepVar::SnrRhoDb | SweepVar::EnergyDb if a.scale.linear => from_db(x),
            _ => x,
        };
        for &o in &a.outputs {
            match o {
                Output::Bound => {
                    let s = scenario.as_ref().expect("scenario");
                    let BoundSpec { n_samples, seed, antithetic } = bound_spec.clone();
                    let opts = McOptions::new(n_samples, seed).antithetic(antithetic).workers(a.workers);
                    rows.push(fer_row(point, o, &fer_bound(&s.coop, &s.geometry, s.c_star, opts)?));
                }
                Output::Asymptotic => {
                    let s = scenario.as_ref().expect("scenario");
                    rows.push(match fer_asym_small_cstar(&s.coop, &s.geometry, s.c_star) {
                        Ok(est) => fer_row(point, o, &est),
                        Err(e) => Row {
                            point,
                            kind: o.name(),
                            value: f64::NAN,
                            half_width: 0.0,
                            flags: format!("unavailable: {e}"),
                        },
                    });
                }
                Output::Simulation => {
                    let s = scenario.clone().expect("scenario");
                    let spec = sim_spec.as_ref().expect("checked above");
                    let mut cfg = SimConfig::new(s, spec.n_frames, a.seed.unwrap_or(spec.seed));
                    cfg.antithetic = spec.antithetic;
                    cfg.workers = a.workers;
                    rows.push(fer_row(point, o, &simulate_fer(&cfg)?.fer));
                }
                Output::Energy => {
                    let spec = energy_spec.as_ref().expect("checked above");
                    let m = file.coop.m;
                    let mut q = EnergyQuery::new(spec.epsilon, m, file.code.c_star);
                    let u = match a.var {
                        SweepVar::Kappa => {
                            if let Some(l) = file.path_loss() {
                                q.path_loss = l;
                            }
                            match spec.tau0 {
                                Some(t0) => energy_saving_kappa(&q.with_kappa(x), t0)?,
                                None => optimize_tau0(&q, x)?.1,
                            }
                        }
                        _ => energy_saving(&q)?,
                    };
                    let value = if a.scale.linear { u } else { to_db(u) };
                    rows.push(Row { point, kind: o.name(), value, half_width: 0.0, flags: String::new() });
                }
            }
        }
    }

    let mut sink: Box<dyn Write + '_> = match &a.out {
        Some(path) => Box::new(std::fs::File::create(path)?),
        None => Box::new(&mut *out),
    };
    let mut w = csv::Writer::from_writer(&mut sink);
    w.write_record(["point", "kind", "value", "half_width", "flags"])?;
    for r in rows {
        w.write_record([
            r.point.to_string(),
            r.kind.to_string(),
            r.value.to_string(),
            r.half_width.to_string(),
            r.flags,
        ])?;
    }
    w.flush()?;
    Ok(0)
}

fn check(out: &mut dyn Write, name: &str, computed: f64, reference: &str, pass: bool) -> std::io::Result<bool> {
    writeln!(out, "{} {name}: computed {computed:.6}, reference {reference}", if pass { "PASS" } else { "FAIL" })?;
    Ok(pass)
}

fn reproduce(a: &ReproduceArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let mut ok = true;
    match a.recipe {
        Recipe::Table2 => {
            for (m, db) in [(2, 8.4), (3, 11.1), (4, 12.4), (5, 13.2)] {
                let u = energy_saving(&EnergyQuery::new(0.01, m, 0.17))?;
                let shown = if a.scale.linear { u } else { to_db(u) };
                let pass = (to_db(u) - db).abs() <= 0.1;
                ok &= check(out, &format!("U({m}) at eps = 0.01"), shown, &format!("{db} dB ± 0.1"), pass)?;
            }
            let firf = energy_saving_firf(0.17, 0.01);
            let shown = if a.scale.linear { firf } else { to_db(firf) };
            ok &= check(out, "U(FIRF) at eps = 0.01", shown, "< 20 dB", firf < 100.0)?;
        }
        Recipe::Example2 => {
            let a57 = punctured_threshold(0.17, 5.0 / 7.0)?;
            let a37 = punctured_threshold(0.17, 3.0 / 7.0)?;
            ok &= check(out, "chi(5/7)", a57, "0.25, accepted [0.245, 0.250]", (0.245..=0.250).contains(&a57))?;
            ok &= check(out, "chi(3/7)", a37, "0.45, accepted [0.450, 0.458]", (0.450..=0.458).contains(&a37))?;
        }
        Recipe::M2Bound => {
            let cases = [(0.17, 0.5, 10.0, 10.0), (0.17, 0.6, 3.0, 8.0), (0.3, 0.55, 20.0, 5.0), (0.1, 0.5, 1.0, 1.0)];
            for (i, &(c, t0, s02, s12)) in cases.iter().enumerate() {
                let q = outage_m2_cooperative(c, t0, 1.0 - t0, s02, s12)?.value;
                let (p, sigma) = m2_monte_carlo(c, t0, s02, s12, 2_000_000, a.seed.wrapping_add(i as u64), a.workers);
                let pass = (q - p).abs() <= 3.0 * sigma;
                let name = format!("G(2,{{1}}) c* = {c}, tau0 = {t0}, SNR02 = {s02}, SNR12 = {s12}");
                ok &= check(out, &name, q, &format!("MC {p:.6} ± 3×{sigma:.2e}"), pass)?;
            }
        }
    }
    Ok(if ok { 0 } else { 1 })
}

/// Plain Monte Carlo over uniform `(x, y)`, counting
/// `τ0 x^{SNR02} + τ1 y^{SNR12} ≥ e^{−c★}`. Returns the estimate and its
/// standard deviation.
pub fn m2_monte_carlo(c: f64, tau0: f64, s02: f64, s12: f64, n: u64, seed: u64, workers: Option<usize>) -> (f64, f64) {
    use rand::Rng;
    let cap = (-c).exp();
    let hits: u64 = stats::run_blocks(stats::block_count(n), workers, |b| {
        let mut rng = stats::block_rng(seed, b);
        (0..stats::block_len(n, b))
            .filter(|_| {
                let x: f64 = rng.random();
                let y: f64 = rng.random();
                tau0 * x.powf(s02) + (1.0 - tau0) * y.powf(s12) >= cap
            })
            .count() as u64
    })
    .into_iter()
    .sum();
    let p = hits as f64 / n as f64;
    let sigma = stats::wilson_half_width(hits, n, Z99) / Z99;
    (p, sigma)
}
