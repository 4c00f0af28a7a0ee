mod args;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hopf_sr::classifier::{classify, GeodesicClass};
use hopf_sr::dynamics::{hamiltonian, EnergyReport, Flow, PhaseState};
use hopf_sr::eigen::eigen_table;
use hopf_sr::export::{self, Format};
use hopf_sr::integrator::{integrate, IntegratorConfig};
use hopf_sr::par::with_jobs;
use hopf_sr::spectrum::{
    closure_data_with, length_label, realize_length, spectrum_bruteforce_oracle,
    synthesize_initial_conditions, ClosureData, DEFAULT_Q_MAX, RATIONAL_TOL,
};
use hopf_sr::verify::{format_report, run_all, VerifyConfig};
use hopf_sr::Error;
use num_rational::Ratio;
use serde::Serialize;

use args::{number, ratio};

#[derive(Parser)]
#[command(
    name = "hopf-sr",
    version,
    about = "Geodesics and spectra of the sub-Riemannian three-sphere"
)]
struct Cli {
    /// Output file (standard output when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Worker threads for independent trajectories and enumerations.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

impl From<OutputFormat> for Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => Format::Csv,
            OutputFormat::Json => Format::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a geodesic and write its samples.
    Trace(TraceArgs),
    /// Report the case, energies and closure data of a state.
    Classify(StateArgs),
    /// Build initial conditions with a prescribed closure ratio.
    Synthesize(SynthArgs),
    /// Tabulate the length spectrum.
    Spectrum(SpectrumArgs),
    /// Tabulate Laplace, subLaplace and penalty eigenvalues.
    Eigs(EigsArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

#[derive(Args, Clone)]
struct StateArgs {
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "0.7853981633974483")]
    theta0: f64,
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "0")]
    theta1: f64,
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "0")]
    theta2: f64,
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "0")]
    xi0: f64,
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "0")]
    xi1: f64,
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "0")]
    xi2: f64,
    /// Closure ratio p/q; replaces theta and xi0 by a synthesized state.
    #[arg(long, value_parser = ratio)]
    r: Option<Ratio<u64>>,
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "1e-9")]
    rational_tol: f64,
    #[arg(long, default_value_t = DEFAULT_Q_MAX)]
    q_max: u64,
}

impl StateArgs {
    fn state(&self) -> Result<PhaseState, Error> {
        match self.r {
            Some(r) => synthesize_initial_conditions(r, self.xi1, self.xi2),
            None => Ok(PhaseState::new(
                self.theta0,
                self.theta1,
                self.theta2,
                self.xi0,
                self.xi1,
                self.xi2,
            )),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FlowKind {
    Sr,
    Penalty,
}

#[derive(Args)]
struct TraceArgs {
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, value_enum, default_value_t = FlowKind::Sr)]
    flow: FlowKind,
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "1")]
    lambda: f64,
    #[arg(long, value_parser = number, allow_hyphen_values = true, conflicts_with = "periods")]
    t_end: Option<f64>,
    /// Integrate this many closing periods.
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    periods: Option<f64>,
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "1e-3")]
    h: f64,
    /// Keep every n-th step.
    #[arg(long, default_value_t = 1)]
    stride: usize,
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "1e-8")]
    local_tol: f64,
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "1e-6")]
    drift_budget: f64,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, value_parser = ratio)]
    r: Ratio<u64>,
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    xi1: f64,
    #[arg(long, value_parser = number, allow_hyphen_values = true)]
    xi2: f64,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("bound").required(true).args(["n_max", "q_bound"]))]
struct SpectrumArgs {
    #[arg(long)]
    n_max: Option<u64>,
    /// Emit the set realized by coprime pairs with q at most this bound.
    #[arg(long)]
    q_bound: Option<u64>,
    /// With --q-bound, check the set against {1..(q_bound-1)} and fail otherwise.
    #[arg(long, requires = "q_bound")]
    check: bool,
}

#[derive(Args)]
struct EigsArgs {
    #[arg(long)]
    m_max: u64,
    /// Penalty parameters, comma separated.
    #[arg(long, value_parser = number, allow_hyphen_values = true, value_delimiter = ',', default_values = ["2", "10"])]
    lambda: Vec<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "1e-9")]
    drift_budget: f64,
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "1e-4")]
    h: f64,
    #[arg(long, value_parser = number, allow_hyphen_values = true, default_value = "1e-6")]
    closure_tol: f64,
    /// Print every sub-check, not only those of failed criteria.
    #[arg(long)]
    verbose: bool,
}

/// A failure and the exit code it maps to.
enum Failure {
    Usage(String),
    Numerical(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_)
            | Error::InfeasibleRatio { .. }
            | Error::NotCoprime { .. }
            | Error::AmbiguousZero { .. }
            | Error::BoundaryChart { .. }
            | Error::ZeroVerticalEnergy
            | Error::NotClosed { .. }
            | Error::NotOscillating(_)
            | Error::NoOscillation(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Numerical(format!("output: {e}"))
    }
}

fn positive(name: &str, x: f64) -> Result<(), Failure> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "--{name} must be positive, got {x}"
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = cli.jobs;
    match with_jobs(jobs, || execute(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn output(cli: &Cli) -> Result<Box<dyn Write>, Failure> {
    Ok(match &cli.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn execute(cli: &Cli) -> Result<(), Failure> {
    let format = Format::from(cli.format);
    match &cli.command {
        Command::Trace(a) => trace(cli, a, format),
        Command::Classify(a) => classify_cmd(cli, a, format),
        Command::Synthesize(a) => synthesize(cli, a, format),
        Command::Spectrum(a) => spectrum(cli, a, format),
        Command::Eigs(a) => eigs(cli, a, format),
        Command::Verify(a) => verify(cli, a),
    }
}

/// Time of one closing period of `s` under `flow`.
fn closing_period(s: &PhaseState, flow: Flow, a: &StateArgs) -> Result<f64, Failure> {
    if let Flow::Penalty(lambda) = flow {
        if lambda != 1.0 {
            return Err(Failure::Usage(
                "--periods with the penalty flow needs --lambda 1".into(),
            ));
        }
        let h1 = hamiltonian(s)?.h1;
        return Ok(2.0 * std::f64::consts::PI / (2.0 * h1).sqrt());
    }
    Ok(match classify(s)? {
        GeodesicClass::HopfFiber1b { period, .. } => period,
        GeodesicClass::Meridian2 { xi0, .. } => 2.0 * std::f64::consts::PI / xi0.abs(),
        GeodesicClass::Degenerate1a { .. } => {
            return Err(Failure::Usage(
                "a fixed point has no period; use --t-end".into(),
            ))
        }
        _ => closure_data_with(s, a.q_max, a.rational_tol)?.period,
    })
}

fn trace(cli: &Cli, a: &TraceArgs, format: Format) -> Result<(), Failure> {
    positive("h", a.h)?;
    positive("lambda", a.lambda)?;
    positive("local-tol", a.local_tol)?;
    positive("drift-budget", a.drift_budget)?;
    if a.stride == 0 {
        return Err(Failure::Usage("--stride must be at least 1".into()));
    }
    let s = a.state.state()?;
    let flow = match a.flow {
        FlowKind::Sr => Flow::SubRiemannian,
        FlowKind::Penalty => Flow::Penalty(a.lambda),
    };
    let t_end = match (a.t_end, a.periods) {
        (Some(t), _) => t,
        (None, Some(k)) => k * closing_period(&s, flow, &a.state)?,
        (None, None) => return Err(Failure::Usage("give --t-end or --periods".into())),
    };
    positive("t-end", t_end)?;
    let cfg = IntegratorConfig {
        local_tol: a.local_tol,
        drift_budget: a.drift_budget,
        stride: a.stride,
        ..Default::default()
    };
    let tr = integrate(&s, t_end, a.h, flow, &cfg)?;
    let mut out = output(cli)?;
    export::write_trajectory(&tr, format, &mut out)?;
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ClassifyReport {
    state: PhaseState,
    class: GeodesicClass,
    energies: EnergyReport,
    closure: Option<ClosureData>,
    closure_note: Option<String>,
}

fn classify_cmd(cli: &Cli, a: &StateArgs, format: Format) -> Result<(), Failure> {
    let s = a.state()?;
    let class = classify(&s)?;
    let energies = hamiltonian(&s)?;
    let (closure, closure_note) = if class.oscillates() {
        match closure_data_with(&s, a.q_max, a.rational_tol) {
            Ok(c) => (Some(c), None),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };
    let report = ClassifyReport {
        state: s,
        class,
        energies,
        closure,
        closure_note,
    };
    let mut out = output(cli)?;
    match format {
        Format::Json => export::write_json(&report, &mut out)?,
        Format::Csv => write_classify_text(&report, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn write_classify_text(r: &ClassifyReport, out: &mut dyn Write) -> io::Result<()> {
    let e = &r.energies;
    match r.class {
        GeodesicClass::HopfFiber1b { period, .. } => {
            writeln!(out, "HopfFiber1b, closed, period {period:.16e}, length 2*pi")?
        }
        GeodesicClass::Meridian2 { .. } => writeln!(out, "Meridian2, closed, length 2*pi")?,
        GeodesicClass::Degenerate1a { theta0 } => {
            writeln!(out, "Degenerate1a, fixed point at theta0 = {theta0:.16e}")?
        }
        c => match (&r.closure, &r.closure_note) {
            (Some(d), _) => writeln!(
                out,
                "{}, closed, p={} q={} epsilon={}, period {:.16e}, oscillations {}, length = 2*pi*sqrt({})",
                c.name(),
                d.p,
                d.q,
                d.epsilon,
                d.period,
                d.oscillations(),
                d.n
            )?,
            (None, Some(note)) => writeln!(out, "{}, not closed: {note}", c.name())?,
            (None, None) => writeln!(out, "{}, relative equilibrium", c.name())?,
        },
    }
    writeln!(out, "H = {:.16e}", e.h)?;
    writeln!(out, "H1 = {:.16e}", e.h1)?;
    writeln!(out, "HV = {:.16e}", e.h_v)?;
    writeln!(out, "r = {:.16e}", e.r)?;
    if let Some(d) = &r.closure {
        writeln!(out, "length {}", length_label(d.n))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct Synthesized {
    state: PhaseState,
    closure: ClosureData,
}

fn synthesize(cli: &Cli, a: &SynthArgs, format: Format) -> Result<(), Failure> {
    let state = synthesize_initial_conditions(a.r, a.xi1, a.xi2)?;
    let closure = closure_data_with(&state, DEFAULT_Q_MAX, RATIONAL_TOL)?;
    let mut out = output(cli)?;
    match format {
        Format::Json => export::write_json(&Synthesized { state, closure }, &mut out)?,
        Format::Csv => {
            writeln!(out, "theta0,theta1,theta2,xi0,xi1,xi2,p,q,epsilon,period,n")?;
            let s = state;
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{},{},{},{:.16e},{}",
                s.theta0,
                s.theta1,
                s.theta2,
                s.xi0,
                s.xi1,
                s.xi2,
                closure.p,
                closure.q,
                closure.epsilon,
                closure.period,
                closure.n
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

fn spectrum(cli: &Cli, a: &SpectrumArgs, format: Format) -> Result<(), Failure> {
    let mut out = output(cli)?;
    if let Some(n_max) = a.n_max {
        if n_max == 0 {
            return Err(Failure::Usage("--n-max must be at least 1".into()));
        }
        let entries = (1..=n_max)
            .map(realize_length)
            .collect::<Result<Vec<_>, _>>()?;
        match format {
            Format::Csv => export::write_spectrum_csv(&entries, &mut out)?,
            Format::Json => export::write_spectrum_json(&entries, &mut out)?,
        }
    } else if let Some(q) = a.q_bound {
        if q < 2 {
            return Err(Failure::Usage("--q-bound must be at least 2".into()));
        }
        let set = spectrum_bruteforce_oracle(q);
        let below: Vec<u64> = set.range(1..q).copied().collect();
        let complete = below.len() as u64 == q - 1;
        match format {
            Format::Csv => {
                writeln!(out, "n,length")?;
                for n in &set {
                    writeln!(out, "{n},{}", length_label(*n))?;
                }
            }
            Format::Json => export::write_json(&set, &mut out)?,
        }
        out.flush()?;
        if a.check {
            eprintln!(
                "{} values below {q} realized: {}",
                below.len(),
                if complete { "complete" } else { "incomplete" }
            );
            if !complete {
                return Err(Failure::Verification);
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn eigs(cli: &Cli, a: &EigsArgs, format: Format) -> Result<(), Failure> {
    for &l in &a.lambda {
        positive("lambda", l)?;
    }
    let rows = eigen_table(a.m_max, &a.lambda);
    let mut out = output(cli)?;
    match format {
        Format::Csv => export::write_eigen_csv(&rows, &a.lambda, &mut out)?,
        Format::Json => export::write_eigen_json(&rows, &a.lambda, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Result<(), Failure> {
    positive("drift-budget", a.drift_budget)?;
    positive("h", a.h)?;
    positive("closure-tol", a.closure_tol)?;
    let cfg = VerifyConfig {
        seed: cli.seed,
        h: a.h,
        drift_budget: a.drift_budget,
        closure_tol: a.closure_tol,
    };
    let reports = run_all(&cfg);
    let mut out = output(cli)?;
    out.write_all(format_report(&reports, a.verbose).as_bytes())?;
    out.flush()?;
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}
