//! `hypgen`: hypothesis reports, roots of `H_m`, curve and region exports.
//!
//! Exit codes: 0 success, 1 hypotheses or checks fail, 2 invalid input,
//! 3 numerical failure.

mod spec_file;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hypgen_core::expsign;
use hypgen_core::hm_seq::{classify_range, observed_real_threshold};
use hypgen_core::rfunc::{endpoint_a, find_t_a, sample_region, Region};
use hypgen_core::tau_curve::{check_curve_preconditions, trace_curve_ungated};
use hypgen_core::{
    generate_hm, hypothesis_report, residue_sum, trace_curve, ClassifyConfig, Coefficient, Complex, GridConfig,
    HmSequence, Spec,
};
use serde_json::json;
use thiserror::Error;

use spec_file::{load_spec, LoadedSpec};

const RESIDUE_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] hypgen_core::Error),
    #[error("output: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use hypgen_core::Error as E;
        match self {
            CliError::Input(_) | CliError::Io(_) | CliError::Csv(_) => 2,
            CliError::Core(e) => match e {
                E::EmptyInput | E::ZeroAtOrigin | E::InvalidExponent(_) | E::Domain(_) | E::Index { .. } => 2,
                E::Hypothesis(_) => 1,
                E::Pole { .. }
                | E::Bracket { .. }
                | E::NonConvergence { .. }
                | E::MultipleRoot { .. }
                | E::MonotonicityViolation { .. } => 3,
            },
        }
    }
}

#[derive(Parser)]
#[command(name = "hypgen", version, about = "Zeros of polynomial sequences generated by 1/(P(t) + z t^r Q(t))")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    /// Exact when every zero in the spec file is rational
    Auto,
    Exact,
    Float,
}

#[derive(Subcommand)]
enum Command {
    /// Check the four hypotheses and print a JSON report
    Check {
        spec: PathBuf,
        /// Grid points per axis for the region checks
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Roots of H_m as CSV, one row per root
    Roots {
        spec: PathBuf,
        /// Single m, or the first m when --m-max is given
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        m_max: Option<usize>,
        #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
        backend: BackendArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run even when the curve hypotheses fail
        #[arg(long)]
        force: bool,
    },
    /// Sample the tau-curve and z(theta) as CSV
    Curve {
        spec: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Export Im R(t) / Im t over the sector and the semidisk as CSV
    Region {
        spec: PathBuf,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sign check of the exponential sum at admissible abscissae
    Expsign {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        ell: i64,
        #[arg(long, default_value_t = 10)]
        b_max: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare H_m(z) from the recurrence with the residue sum
    ResidueCheck {
        spec: PathBuf,
        #[arg(long)]
        m: usize,
        /// Real part of z, or `a` for the endpoint
        #[arg(long, allow_negative_numbers = true)]
        z: String,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        z_im: f64,
    },
}

fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_b(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

fn csv_writer(out: Option<&Path>) -> Result<csv::Writer<Box<dyn Write>>, CliError> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    Ok(csv::Writer::from_writer(sink))
}

fn grid_config(grid: usize) -> GridConfig {
    GridConfig { radii: grid, angles: grid, ..GridConfig::default() }
}

/// `a`, when the curve hypotheses allow computing it.
fn endpoint(spec: &Spec) -> Option<f64> {
    check_curve_preconditions(spec).ok()?;
    find_t_a(spec).ok().map(|t| endpoint_a(spec, t))
}

fn cmd_check(path: &Path, grid: usize) -> Result<u8, CliError> {
    let spec = load_spec(path)?.as_f64();
    let report = hypothesis_report(&spec, &grid_config(grid));
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(if report.all_hold { 0 } else { 1 })
}

fn roots_csv<C: Coefficient>(
    seq: &HmSequence<C>,
    m_lo: usize,
    m_hi: usize,
    cfg: &ClassifyConfig,
    out: Option<&Path>,
) -> Result<serde_json::Value, CliError> {
    let reports = classify_range(seq, m_lo, m_hi, cfg)?;
    let mut w = csv_writer(out)?;
    w.write_record(["m", "root_index", "re", "im", "classified_real", "sign_ok", "interval_ok"])?;
    for rep in &reports {
        for (i, (root, flags)) in rep.roots.iter().zip(&rep.flags).enumerate() {
            let interval = flags.interval_ok.map_or("", fmt_b);
            w.write_record([
                rep.m.to_string(),
                i.to_string(),
                fmt_f(root.re),
                fmt_f(root.im),
                fmt_b(flags.real).to_string(),
                fmt_b(flags.sign_ok).to_string(),
                interval.to_string(),
            ])?;
        }
    }
    w.flush()?;
    let per_m: Vec<_> = reports
        .iter()
        .map(|r| {
            json!({
                "m": r.m,
                "degree_observed": r.degree_observed,
                "max_abs_im": r.max_abs_im,
                "all_real": r.all_real,
                "sign_ok": r.sign_ok,
                "interval_ok": r.interval_ok,
            })
        })
        .collect();
    Ok(json!({
        "backend": seq.backend().as_str(),
        "a": cfg.a,
        "sign_exponent": cfg.sign_exponent,
        "observed_real_from": observed_real_threshold(&reports),
        "reports": per_m,
    }))
}

fn cmd_roots(
    path: &Path,
    m: Option<usize>,
    m_max: Option<usize>,
    backend: BackendArg,
    out: Option<&Path>,
    force: bool,
) -> Result<u8, CliError> {
    let loaded = load_spec(path)?;
    let spec = loaded.as_f64();
    let (m_lo, m_hi) = match (m, m_max) {
        (Some(m), None) => (m, m),
        (m, Some(hi)) => (m.unwrap_or(0), hi),
        (None, None) => return Err(CliError::Input("give --m and/or --m-max".into())),
    };
    if m_lo > m_hi {
        return Err(CliError::Input(format!("--m {m_lo} exceeds --m-max {m_hi}")));
    }
    if let Err(e) = check_curve_preconditions(&spec) {
        if !force {
            return Err(e.into());
        }
        eprintln!("warning: {e}; continuing because of --force");
    }
    let cfg = ClassifyConfig::new(endpoint(&spec), spec.sign_exponent());
    let summary = match (backend, &loaded) {
        (BackendArg::Float, _) | (BackendArg::Auto, LoadedSpec::Float(_)) => {
            roots_csv(&generate_hm(&spec, m_hi), m_lo, m_hi, &cfg, out)?
        }
        (BackendArg::Exact, _) | (BackendArg::Auto, LoadedSpec::Exact(_)) => {
            roots_csv(&generate_hm(&loaded.as_exact()?, m_hi), m_lo, m_hi, &cfg, out)?
        }
    };
    eprintln!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
    Ok(0)
}

fn cmd_curve(path: &Path, samples: usize, out: Option<&Path>, force: bool) -> Result<u8, CliError> {
    let spec = load_spec(path)?.as_f64();
    let curve = match check_curve_preconditions(&spec) {
        Err(e) if force => {
            eprintln!("warning: {e}; continuing because of --force");
            trace_curve_ungated(&spec, samples)?
        }
        _ => trace_curve(&spec, samples)?,
    };
    let mut w = csv_writer(out)?;
    w.write_record(["theta", "tau", "z", "residual", "im_z"])?;
    for s in &curve.samples {
        w.write_record([fmt_f(s.theta), fmt_f(s.tau), fmt_f(s.z), fmt_f(s.residual), fmt_f(s.im_z)])?;
    }
    w.flush()?;
    if let Some(first) = curve.samples.iter().position(|s| !s.low_confidence) {
        if first > 0 {
            eprintln!("note: first {first} samples sit near a repeated tau_1 and carry reduced accuracy");
        }
    }
    Ok(0)
}

fn cmd_region(path: &Path, grid: usize, out: Option<&Path>) -> Result<u8, CliError> {
    let spec = load_spec(path)?.as_f64();
    let cfg = grid_config(grid);
    let mut samples = Vec::new();
    match spec.tau2() {
        Some(&tau2) => samples.extend(sample_region(&spec, Region::Sector, tau2, &cfg)),
        None => eprintln!("note: tau_2 undefined, sector skipped"),
    }
    match endpoint(&spec).and(find_t_a(&spec).ok()) {
        Some(t_a) => samples.extend(sample_region(&spec, Region::Semidisk, t_a, &cfg)),
        None => eprintln!("note: t_a unavailable, semidisk skipped"),
    }
    let mut w = csv_writer(out)?;
    w.write_record(["re", "im", "weight", "region_tag"])?;
    for s in &samples {
        w.write_record([fmt_f(s.re), fmt_f(s.im), fmt_f(s.weight), s.region.as_str().to_string()])?;
    }
    w.flush()?;
    Ok(0)
}

fn cmd_expsign(n: usize, ell: i64, b_max: i64, out: Option<&Path>) -> Result<u8, CliError> {
    if n > expsign::DEFAULT_MAX_N {
        return Err(CliError::Input(format!("n above {} is not supported", expsign::DEFAULT_MAX_N)));
    }
    if n < 2 {
        return Err(hypgen_core::Error::Domain(format!("n must be at least 2, got {n}")).into());
    }
    let ell = expsign::normalize_ell(n, ell);
    let cases = (1..=b_max).map(|b| expsign::check_sign_dominance(n, ell, b)).collect::<Result<Vec<_>, _>>()?;
    let mut w = csv_writer(out)?;
    w.write_record(["n", "ell", "b", "x", "sum_value", "sum_im", "first_term", "realness_defect", "sign_match"])?;
    for c in &cases {
        w.write_record([
            c.n.to_string(),
            c.ell.to_string(),
            c.b.to_string(),
            fmt_f(c.x),
            fmt_f(c.sum_value),
            fmt_f(c.sum_im),
            fmt_f(c.first_term),
            fmt_f(c.realness_defect),
            fmt_b(c.sign_match).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(if cases.iter().all(|c| c.sign_match) { 0 } else { 1 })
}

fn cmd_residue_check(path: &Path, m: usize, z: &str, z_im: f64) -> Result<u8, CliError> {
    let loaded = load_spec(path)?;
    let spec = loaded.as_f64();
    let z_re = if z.trim() == "a" {
        endpoint(&spec).ok_or_else(|| hypgen_core::Error::Hypothesis("endpoint a is unavailable".into()))?
    } else {
        z.trim().parse::<f64>().map_err(|e| CliError::Input(format!("--z {z:?}: {e}")))?
    };
    let zc = Complex::new(z_re, z_im);
    let hm = match &loaded {
        LoadedSpec::Exact(s) => generate_hm(s, m).eval_complex(m, zc)?,
        LoadedSpec::Float(s) => generate_hm(s, m).eval_complex(m, zc)?,
    };
    let res = residue_sum(&spec, zc, m)?;
    let rel = (res - hm).norm() / (1.0 + hm.norm());
    let report = json!({
        "m": m,
        "z": [z_re, z_im],
        "hm_eval": [hm.re, hm.im],
        "residue_sum": [res.re, res.im],
        "relative_difference": rel,
        "tolerance": RESIDUE_TOL,
    });
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(if rel <= RESIDUE_TOL { 0 } else { 1 })
}

fn configure_threads() {
    if let Some(n) = std::env::var("HYPGEN_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Check { spec, grid } => cmd_check(&spec, grid),
        Command::Roots { spec, m, m_max, backend, out, force } => {
            cmd_roots(&spec, m, m_max, backend, out.as_deref(), force)
        }
        Command::Curve { spec, samples, out, force } => cmd_curve(&spec, samples, out.as_deref(), force),
        Command::Region { spec, grid, out } => cmd_region(&spec, grid, out.as_deref()),
        Command::Expsign { n, ell, b_max, out } => cmd_expsign(n, ell, b_max, out.as_deref()),
        Command::ResidueCheck { spec, m, z, z_im } => cmd_residue_check(&spec, m, &z, z_im),
    }
}

fn main() -> ExitCode {
    configure_threads();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
