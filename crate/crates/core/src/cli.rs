//! The `majorana` command-line front end.
//!
//! Exit codes: 0 on success, 2 for invalid input (bad flags, files or
//! dimensions), 3 when a numerical procedure fails.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::husimi::{wehrl_entropy, QuadratureConfig};
use crate::io;
use crate::lieb_solovej::{
    coherent_image, covariance_check, majorizes, phi_iter, sample_fubini_study, spectra_cloud, spectrum, DensityMatrix,
};
use crate::orbit_geometry::{orbit_form_row, OrbitFormRow};
use crate::sphere_opt::{
    classify, multi_start, reproduce_table, LocalOptions, Objective, TableOptions, SIGNATURE_TOL,
};
use crate::states::{coherent_at, constellation_to_state, state_to_constellation, SpinState, Star};

/// Seed used by stochastic commands when none is given.
pub const DEFAULT_SEED: u64 = 20_240_917;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "majorana", version, about = "Majorana constellations, Wehrl entropy and the Lieb-Solovej channel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Convert a state file to its constellation or a constellation to its state.
    Convert(ConvertArgs),
    /// Write the coherent state pointing at (theta, phi).
    Coherent(CoherentArgs),
    /// Wehrl entropy of a state.
    Wehrl(WehrlArgs),
    /// Metric and symplectic coefficients on number-state orbits, closed form vs numeric.
    Geometry(GeometryArgs),
    /// Image spectrum of a state under iterates of the channel.
    Channel(ChannelArgs),
    /// Spectra cloud of random states under the channel, as CSV and SVG.
    Spectra(SpectraArgs),
    /// Multi-start optimization of a constellation.
    Optimize(OptimizeArgs),
    /// Reproduce the table of optimal constellation types.
    Table(TableArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// state file {"n", "amps"}
    #[arg(long, conflicts_with = "stars")]
    state: Option<PathBuf>,
    /// constellation file {"n", "stars"}
    #[arg(long)]
    stars: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    #[command(flatten)]
    input: InputArgs,
    /// output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CoherentArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct QuadratureArgs {
    /// coarsest number of Gauss-Legendre nodes in cos(theta)
    #[arg(long, default_value_t = 0)]
    qtheta: usize,
    /// coarsest number of nodes in phi
    #[arg(long, default_value_t = 0)]
    qphi: usize,
    /// target difference between successive refinements
    #[arg(long, default_value_t = 1e-9)]
    qtol: f64,
    /// maximum number of resolution doublings
    #[arg(long, default_value_t = 12)]
    qmax: usize,
}

impl QuadratureArgs {
    fn config(&self) -> Result<QuadratureConfig> {
        if !(self.qtol > 0.0 && self.qtol.is_finite()) {
            return Err(Error::InvalidInput(format!("--qtol must be positive, got {}", self.qtol)));
        }
        Ok(QuadratureConfig { n_theta: self.qtheta, n_phi: self.qphi, tol: self.qtol, max_refinements: self.qmax })
    }
}

#[derive(Args, Debug)]
struct WehrlArgs {
    #[command(flatten)]
    input: InputArgs,
    /// use the coherent state at (--theta, --phi) with --n stars
    #[arg(long, requires = "n")]
    coherent: bool,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
    #[command(flatten)]
    quadrature: QuadratureArgs,
}

#[derive(Args, Debug)]
struct GeometryArgs {
    #[arg(long)]
    n: usize,
    /// number state |n-k, k> (all k if omitted)
    #[arg(long)]
    k: Option<usize>,
    /// side of the small triangle
    #[arg(long, default_value_t = 1e-3)]
    delta: f64,
    /// print JSON instead of a table
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct ChannelArgs {
    #[command(flatten)]
    input: InputArgs,
    /// use a Fubini-Study random state with --n stars
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    steps: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// also check covariance on this many random mixed states
    #[arg(long, default_value_t = 0)]
    covariance: usize,
}

#[derive(Args, Debug)]
struct SpectraArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    steps: usize,
    #[arg(long, default_value_t = 5000)]
    count: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// output directory
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    /// wehrl, thomson or tammes
    #[arg(long)]
    objective: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 50)]
    starts: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// output directory for report, constellation and SVG
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TableArgs {
    /// star counts to run
    #[arg(long, value_delimiter = ',', default_values_t = [3usize, 4, 5, 6, 7, 8, 9])]
    ns: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    starts: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// output directory for table.json and table.csv
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Cap the global thread pool at `MAJORANA_THREADS` if set.
pub fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("MAJORANA_THREADS") {
        let threads: usize = v
            .parse()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| Error::InvalidInput(format!("MAJORANA_THREADS must be a positive integer, got '{v}'")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::InvalidInput(e.to_string()))?;
    }
    Ok(())
}

/// Parse `argv` (including the program name), run the command and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match dispatch(cli.command, &mut out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_INPUT
            }
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Convert(a) => convert(a, out),
        Command::Coherent(a) => coherent(a, out),
        Command::Wehrl(a) => wehrl(a, out),
        Command::Geometry(a) => geometry(a, out),
        Command::Channel(a) => channel(a, out),
        Command::Spectra(a) => spectra(a, out),
        Command::Optimize(a) => optimize(a, out),
        Command::Table(a) => table(a, out),
    }
}

fn require_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    Ok(())
}

fn star_arg(theta: f64, phi: f64) -> Result<Star> {
    if !theta.is_finite() || !phi.is_finite() {
        return Err(Error::InvalidInput("non-finite angle".into()));
    }
    Ok(Star::new(theta, phi))
}

fn load(input: &InputArgs) -> Result<Option<SpinState>> {
    match (&input.state, &input.stars) {
        (Some(p), None) => Ok(Some(io::read_state(p)?)),
        (None, Some(p)) => Ok(Some(constellation_to_state(&io::read_constellation(p)?)?)),
        _ => Ok(None),
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn convert(a: ConvertArgs, out: &mut dyn Write) -> Result<()> {
    let text = match (&a.input.state, &a.input.stars) {
        (Some(p), None) => io::constellation_json(&state_to_constellation(&io::read_state(p)?)?),
        (None, Some(p)) => io::state_json(&constellation_to_state(&io::read_constellation(p)?)?),
        _ => {
            return Err(Error::InvalidInput("convert needs exactly one of --state or --stars".into()));
        }
    };
    emit(&text, a.out.as_deref(), out)
}

fn coherent(a: CoherentArgs, out: &mut dyn Write) -> Result<()> {
    require_n(a.n)?;
    let s = coherent_at(star_arg(a.theta, a.phi)?, a.n);
    emit(&io::state_json(&s), a.out.as_deref(), out)
}

/// Fixed-precision number with trailing zeros removed, e.g. `0.8`.
fn trimmed(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0');
    s.strip_suffix('.').unwrap_or(s).to_string()
}

fn wehrl(a: WehrlArgs, out: &mut dyn Write) -> Result<()> {
    let q = a.quadrature.config()?;
    let s = if a.coherent {
        let n = a.n.expect("clap enforces --n");
        require_n(n)?;
        coherent_at(star_arg(a.theta, a.phi)?, n)
    } else {
        load(&a.input)?.ok_or_else(|| Error::InvalidInput("wehrl needs --state, --stars or --coherent".into()))?
    };
    let est = wehrl_entropy(&s, &q)?;
    writeln!(out, "{}", trimmed(est.value))?;
    writeln!(
        out,
        "achieved_tol {:e} grid {}x{} refinements {}",
        est.achieved_tol, est.n_theta, est.n_phi, est.refinements
    )?;
    Ok(())
}

fn geometry(a: GeometryArgs, out: &mut dyn Write) -> Result<()> {
    require_n(a.n)?;
    let ks: Vec<usize> = match a.k {
        Some(k) if k > a.n => return Err(Error::InvalidInput(format!("k = {k} exceeds n = {}", a.n))),
        Some(k) => vec![k],
        None => (0..=a.n).collect(),
    };
    let rows = ks.into_iter().map(|k| orbit_form_row(a.n, k, a.delta)).collect::<Result<Vec<OrbitFormRow>>>()?;
    if a.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?;
        return Ok(());
    }
    writeln!(out, "n\tk\tg_closed\tg_numeric\trel_err\tw_closed\tw_numeric\trel_err")?;
    for r in rows {
        writeln!(
            out,
            "{}\t{}\t{:.10}\t{:.10}\t{:.2e}\t{:.10}\t{:.10}\t{:.2e}",
            r.n, r.k, r.g_coeff, r.g_est, r.g_err, r.w_coeff, r.w_est, r.w_err
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ChannelReport {
    n: usize,
    steps: usize,
    seed: Option<u64>,
    spectrum: Vec<f64>,
    coherent_image: Vec<f64>,
    majorized_by_coherent: bool,
}

fn channel(a: ChannelArgs, out: &mut dyn Write) -> Result<()> {
    let (s, seed) = match (load(&a.input)?, a.n) {
        (Some(s), None) => (s, None),
        (None, Some(n)) => {
            require_n(n)?;
            (sample_fubini_study(n, a.seed), Some(a.seed))
        }
        _ => return Err(Error::InvalidInput("channel needs one of --state, --stars or --n".into())),
    };
    let image = spectrum(&phi_iter(&DensityMatrix::pure(&s), a.steps));
    let coh = coherent_image(s.n(), a.steps);
    let report = ChannelReport {
        n: s.n(),
        steps: a.steps,
        seed,
        majorized_by_coherent: majorizes(&coh, &image)?,
        spectrum: image.values,
        coherent_image: coh.values,
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    if a.covariance > 0 {
        let c = covariance_check(s.n(), a.steps, a.covariance, a.seed);
        writeln!(out, "{}", serde_json::to_string_pretty(&c)?)?;
    }
    Ok(())
}

fn spectra(a: SpectraArgs, out: &mut dyn Write) -> Result<()> {
    require_n(a.n)?;
    if a.steps == 0 {
        return Err(Error::InvalidInput("--steps must be at least 1".into()));
    }
    let cloud = spectra_cloud(a.n, a.steps, a.count, a.seed)?;
    fs::create_dir_all(&a.out)?;
    let stem = format!("spectra_n{}_s{}", a.n, a.steps);
    let csv_path = a.out.join(format!("{stem}.csv"));
    let svg_path = a.out.join(format!("{stem}.svg"));
    fs::write(&csv_path, io::spectra_csv(&cloud)?)?;
    fs::write(&svg_path, io::simplex_svg(&cloud))?;
    writeln!(out, "seed {}", a.seed)?;
    writeln!(out, "points {}", cloud.points.len())?;
    writeln!(out, "wrote {}", csv_path.display())?;
    writeln!(out, "wrote {}", svg_path.display())?;
    Ok(())
}

#[derive(Serialize)]
struct OptimizeReport<'a> {
    objective: Objective,
    n: usize,
    starts: usize,
    seed: u64,
    best_value: f64,
    best_start: usize,
    family_type: String,
    signature: &'a [f64],
    hits: usize,
}

fn optimize(a: OptimizeArgs, out: &mut dyn Write) -> Result<()> {
    let objective: Objective = a.objective.parse()?;
    require_n(a.n)?;
    if objective != Objective::Wehrl && a.n < 2 {
        return Err(Error::InvalidInput(format!("{objective} needs at least two stars")));
    }
    let search = multi_start(objective, a.n, a.starts, a.seed, &LocalOptions::default())?;
    let best = &search.best;
    let report = OptimizeReport {
        objective,
        n: a.n,
        starts: a.starts,
        seed: a.seed,
        best_value: best.value,
        best_start: search.best_index,
        family_type: classify(&best.constellation, SIGNATURE_TOL),
        signature: &best.signature.0,
        hits: search.runs.iter().filter(|(_, s)| s.matches(&best.signature, SIGNATURE_TOL)).count(),
    };
    let json = serde_json::to_string_pretty(&report)? + "\n";
    match &a.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            let stem = format!("{objective}_n{}", a.n);
            fs::write(dir.join(format!("{stem}_report.json")), &json)?;
            fs::write(dir.join(format!("{stem}_stars.json")), io::constellation_json(&best.constellation))?;
            fs::write(dir.join(format!("{stem}.svg")), io::sphere_svg(&best.constellation))?;
            writeln!(out, "seed {}", a.seed)?;
            writeln!(out, "{objective} n={} best {} type {}", a.n, best.value, report.family_type)?;
            writeln!(out, "wrote {}", dir.display())?;
        }
        None => out.write_all(json.as_bytes())?,
    }
    Ok(())
}

fn table(a: TableArgs, out: &mut dyn Write) -> Result<()> {
    if let Some(&n) = a.ns.iter().find(|&&n| !(3..=9).contains(&n)) {
        return Err(Error::InvalidInput(format!("table covers n = 3..9, got {n}")));
    }
    let opts = TableOptions { starts: a.starts, seed: a.seed, ..TableOptions::default() };
    let records = reproduce_table(&a.ns, &opts)?;
    writeln!(out, "seed {}", a.seed)?;
    for r in &records {
        writeln!(
            out,
            "n={} {:<8} table {:<12} found {:<12} matches {} value {} (table shape {})",
            r.n, r.objective.name(), r.table_type, r.family_type, r.matches_table, r.best_value, r.reference_value
        )?;
    }
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("table.json"), serde_json::to_string_pretty(&records)? + "\n")?;
        fs::write(dir.join("table.csv"), io::table_csv(&records)?)?;
        writeln!(out, "wrote {}", dir.display())?;
    }
    Ok(())
}
