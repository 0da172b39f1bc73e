//! Command-line surface: coefficient generation, evaluation grids, zero
//! reports, functional-equation checks, and the window experiment, with
//! machine-readable CSV/JSON outputs.
//!
//! Exit codes: 0 success, 1 internal/numerical failure, 2 hypothesis
//! violation, 3 configuration error.  Every command is deterministic given
//! its configuration; reruns produce byte-identical output.

use crate::arith::Twist;
use crate::hlharness::{
    decay_probe, fit_slope, hl_experiment, verify_lutlem, BumpFamily, HlError, Verdict, T_MIN,
};
use crate::lfun::{LfunError, TwistedL};
use crate::qseries::{load_coeffs, save_coeffs, FormSource, FormSpec};
use crate::zeros::{count_zeros, refine, scan, ZSample, ZeroEntry, ZeroReport, ZerosError};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Deserialize;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;

const EXIT_OK: i32 = 0;
const EXIT_NUMERIC: i32 = 1;
const EXIT_HYPOTHESIS: i32 = 2;
const EXIT_CONFIG: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "twistzero",
    version,
    about = "Additively twisted L-functions of cusp forms: critical-line \
             evaluation, sign-change zeros, and window experiments",
    after_help = "Form mini-language: `eta:m1^e1*m2^e2*...` is the eta \
                  quotient prod eta(m z)^e (weight2 = sum e); \
                  `theta*eta:m1^e1*...` multiplies by theta(z) (weight2 = \
                  1 + sum e).  Anything else is read as a coefficient-file \
                  path.  Bundled levels: eta:1^24 -> 1, theta*eta:4^6 -> 16; \
                  other quotients need --level."
)]
struct Cli {
    /// JSON config file; its values override the flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Form spec (mini-language or coefficient-file path)
    #[arg(long)]
    form: Option<String>,
    /// Additive twist p/q
    #[arg(long)]
    twist: Option<String>,
    /// Level N (required for non-bundled eta quotients)
    #[arg(long)]
    level: Option<i64>,
    /// Tolerance override
    #[arg(long)]
    tol: Option<f64>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for randomized property commands (recorded; reserved)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Generate a coefficient table in the twistzero-coeffs v1 format
    Coeffs {
        #[command(flatten)]
        common: Common,
        /// Number of coefficients
        #[arg(long)]
        count: Option<usize>,
    },
    /// Evaluate L and Z on a t-grid; CSV columns t,L_re,L_im,Z,err
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t0: Option<f64>,
        #[arg(long)]
        t1: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Scan for sign-change zeros and refine them; JSON report
    Zeros {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        t0: Option<f64>,
        #[arg(long)]
        t1: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Functional-equation residuals on a grid around Re s = nu/2
    Fecheck {
        #[command(flatten)]
        common: Common,
    },
    /// Window experiment: integral identity, signed-vs-absolute comparison
    Hl {
        #[command(flatten)]
        common: Common,
        /// Window parameters, comma separated (each must exceed 2/log 2)
        #[arg(long = "T", value_delimiter = ',')]
        t_windows: Vec<f64>,
    },
}

/// JSON config overlay; any present key overrides the matching flag.
#[derive(Deserialize, Debug, Default, Clone)]
#[serde(deny_unknown_fields)]
struct Overrides {
    form: Option<String>,
    twist: Option<String>,
    level: Option<i64>,
    count: Option<usize>,
    t0: Option<f64>,
    t1: Option<f64>,
    step: Option<f64>,
    #[serde(rename = "T")]
    t_windows: Option<Vec<f64>>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    seed: Option<u64>,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    fn numeric(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_NUMERIC,
            message: message.into(),
        }
    }

    fn hypothesis(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_HYPOTHESIS,
            message: message.into(),
        }
    }
}

impl From<LfunError> for Failure {
    fn from(e: LfunError) -> Failure {
        let code = match &e {
            LfunError::HypothesisViolation { .. } | LfunError::NotEquivInfinity { .. } => {
                EXIT_HYPOTHESIS
            }
            _ => EXIT_NUMERIC,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<HlError> for Failure {
    fn from(e: HlError) -> Failure {
        match e {
            HlError::WindowTooNarrow { t_cap } => Failure::hypothesis(format!(
                "window T = {} violates the support condition T > 2/log 2 = {:.6}",
                t_cap, T_MIN
            )),
            HlError::Lfun(inner) => inner.into(),
        }
    }
}

impl From<ZerosError> for Failure {
    fn from(e: ZerosError) -> Failure {
        Failure::numeric(e.to_string())
    }
}

pub fn run() -> i32 {
    if let Ok(v) = std::env::var("TWISTZERO_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("twistzero: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let overrides = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::config(format!("{}: {}", path.display(), e)))?;
            serde_json::from_str::<Overrides>(&text)
                .map_err(|e| Failure::config(format!("{}: {}", path.display(), e)))?
        }
        None => Overrides::default(),
    };
    match cli.cmd {
        Cmd::Coeffs { common, count } => cmd_coeffs(common, count, &overrides),
        Cmd::Eval {
            common,
            t0,
            t1,
            step,
        } => cmd_eval(common, t0, t1, step, &overrides),
        Cmd::Zeros {
            common,
            t0,
            t1,
            step,
        } => cmd_zeros(common, t0, t1, step, &overrides),
        Cmd::Fecheck { common } => cmd_fecheck(common, &overrides),
        Cmd::Hl { common, t_windows } => cmd_hl(common, t_windows, &overrides),
    }
}

fn merge(common: &mut Common, o: &Overrides) {
    if o.form.is_some() {
        common.form = o.form.clone();
    }
    if o.twist.is_some() {
        common.twist = o.twist.clone();
    }
    if o.level.is_some() {
        common.level = o.level;
    }
    if o.tol.is_some() {
        common.tol = o.tol;
    }
    if o.out.is_some() {
        common.out = o.out.clone();
    }
    if o.seed.is_some() {
        common.seed = o.seed;
    }
}

/// Parse `m1^e1*m2^e2*...` into (m, e) pairs.
fn parse_eta_pairs(body: &str) -> Result<Vec<(i64, i64)>, Failure> {
    let mut pairs = Vec::new();
    for part in body.split('*') {
        let (m, e) = part
            .split_once('^')
            .ok_or_else(|| Failure::config(format!("bad eta factor `{}` (want m^e)", part)))?;
        let m: i64 = m
            .parse()
            .map_err(|_| Failure::config(format!("bad eta multiplier `{}`", m)))?;
        let e: i64 = e
            .parse()
            .map_err(|_| Failure::config(format!("bad eta exponent `{}`", e)))?;
        if m <= 0 {
            return Err(Failure::config(format!("eta multiplier {} must be positive", m)));
        }
        pairs.push((m, e));
    }
    Ok(pairs)
}

fn parse_form(form: &str, level: Option<i64>) -> Result<FormSpec, Failure> {
    if let Some(body) = form.strip_prefix("theta*eta:") {
        let pairs = parse_eta_pairs(body)?;
        let weight2 = 1 + pairs.iter().map(|&(_, e)| e).sum::<i64>();
        let level = match level {
            Some(n) => n,
            None if pairs == vec![(4, 6)] => 16,
            None => {
                return Err(Failure::config(
                    "--level is required for non-bundled theta*eta forms",
                ))
            }
        };
        if level % 4 != 0 {
            return Err(Failure::config(format!(
                "half-integral weight needs 4 | N, got level {}",
                level
            )));
        }
        Ok(FormSpec {
            weight2,
            level,
            source: FormSource::ThetaTimesEta(pairs),
            label: form.to_string(),
        })
    } else if let Some(body) = form.strip_prefix("eta:") {
        let pairs = parse_eta_pairs(body)?;
        let weight2 = pairs.iter().map(|&(_, e)| e).sum::<i64>();
        let level = match level {
            Some(n) => n,
            None if pairs == vec![(1, 24)] => 1,
            None => {
                return Err(Failure::config(
                    "--level is required for non-bundled eta quotients",
                ))
            }
        };
        Ok(FormSpec {
            weight2,
            level,
            source: FormSource::EtaQuotient(pairs),
            label: form.to_string(),
        })
    } else {
        let path = PathBuf::from(form);
        let (header, _) = load_coeffs(&path).map_err(|e| Failure::config(e.to_string()))?;
        Ok(FormSpec {
            weight2: header.weight2,
            level: header.level,
            source: FormSource::CoefficientFile(path),
            label: header.label,
        })
    }
}

fn parse_twist(s: &str) -> Result<(i64, i64), Failure> {
    let (p, q) = s
        .split_once('/')
        .ok_or_else(|| Failure::config(format!("bad twist `{}` (want p/q)", s)))?;
    let p: i64 = p
        .parse()
        .map_err(|_| Failure::config(format!("bad twist numerator `{}`", p)))?;
    let q: i64 = q
        .parse()
        .map_err(|_| Failure::config(format!("bad twist denominator `{}`", q)))?;
    if q <= 0 {
        return Err(Failure::config("twist denominator must be positive"));
    }
    Ok((p, q))
}

/// Coefficient count needed for critical-line evaluation up to |t| = t_max
/// (ray cut plus contour-angle envelope, with margin).
fn required_m(q: i64, nu: f64, t_max: f64) -> usize {
    use std::f64::consts::PI;
    let t = t_max.abs().max(1.0);
    let qf = q as f64;
    let base = qf * (nu + 2.0 * t + 45.0) / (2.0 * PI);
    let envelope = qf * (2.5 * nu + 47.0) * t / (14.0 * PI);
    (base + envelope) as usize + 200
}

fn build_l(common: &Common, t_max: f64) -> Result<TwistedL, Failure> {
    let form = common
        .form
        .as_deref()
        .ok_or_else(|| Failure::config("--form is required"))?;
    let twist = common
        .twist
        .as_deref()
        .ok_or_else(|| Failure::config("--twist is required"))?;
    let spec = parse_form(form, common.level)?;
    let (p, q) = parse_twist(twist)?;
    let m = required_m(q, spec.nu(), t_max);
    let table = spec
        .coeffs(m)
        .map_err(|e| Failure::numeric(e.to_string()))?;
    let tw = Twist::new(p, q, spec.level).map_err(|e| Failure::config(e.to_string()))?;
    Ok(TwistedL::new(spec, table, tw)?)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Failure::numeric(format!("{}: {}", path.display(), e))),
        None => {
            print!("{}", content);
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::numeric(format!("JSON encoding failed: {}", e)))?;
    s.push('\n');
    Ok(s)
}

fn cmd_coeffs(
    mut common: Common,
    count: Option<usize>,
    o: &Overrides,
) -> Result<(), Failure> {
    merge(&mut common, o);
    let count = o.count.or(count).unwrap_or(100);
    let form = common
        .form
        .as_deref()
        .ok_or_else(|| Failure::config("--form is required"))?;
    let spec = parse_form(form, common.level)?;
    let table = spec
        .coeffs(count)
        .map_err(|e| Failure::numeric(e.to_string()))?;
    match &common.out {
        Some(path) => {
            save_coeffs(&spec, &table, path).map_err(|e| Failure::numeric(e.to_string()))
        }
        None => {
            let mut s = String::new();
            writeln!(
                s,
                "# twistzero-coeffs v1 weight2={} level={} label={} count={}",
                spec.weight2, spec.level, spec.label, table.count
            )
            .expect("string write");
            for n in 1..=table.count {
                let c = table.c(n);
                writeln!(s, "{} {:.16e} {:.16e}", n, c.re, c.im).expect("string write");
            }
            emit(&None, &s)
        }
    }
}

fn cmd_eval(
    mut common: Common,
    t0: Option<f64>,
    t1: Option<f64>,
    step: Option<f64>,
    o: &Overrides,
) -> Result<(), Failure> {
    merge(&mut common, o);
    let t0 = o.t0.or(t0).unwrap_or(0.0);
    let t1 = o.t1.or(t1).unwrap_or(t0);
    let step = o.step.or(step).unwrap_or(1.0);
    if step <= 0.0 {
        return Err(Failure::config("--step must be positive"));
    }
    if t1 < t0 {
        return Err(Failure::config("--t1 must be at least --t0"));
    }
    let l = build_l(&common, t0.abs().max(t1.abs()))?;
    let n = ((t1 - t0) / step).round() as usize;
    use rayon::prelude::*;
    let rows: Vec<Result<String, LfunError>> = (0..=n)
        .into_par_iter()
        .map(|i| {
            let t = t0 + i as f64 * step;
            let cv = l.z(t)?;
            Ok(format!(
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                t, cv.l.re, cv.l.im, cv.z.re, cv.err_est
            ))
        })
        .collect();
    let mut csv = String::from("t,L_re,L_im,Z,err\n");
    for row in rows {
        csv.push_str(&row?);
    }
    emit(&common.out, &csv)
}

fn cmd_zeros(
    mut common: Common,
    t0: Option<f64>,
    t1: Option<f64>,
    step: Option<f64>,
    o: &Overrides,
) -> Result<(), Failure> {
    merge(&mut common, o);
    let t0 = o.t0.or(t0).unwrap_or(0.0);
    let t1 = o.t1.or(t1).unwrap_or(t0);
    let step = o.step.or(step).unwrap_or(0.1);
    let tol = common.tol.unwrap_or(1e-8);
    if step <= 0.0 {
        return Err(Failure::config("--step must be positive"));
    }
    if t1 < t0 {
        return Err(Failure::config("--t1 must be at least --t0"));
    }
    let l = build_l(&common, t0.abs().max(t1.abs()))?;
    let report = zero_report(&l, t0, t1, step, tol)?;
    let (total, density) = count_zeros(&report);
    #[derive(Serialize)]
    struct Out {
        #[serde(flatten)]
        report: ZeroReport,
        zero_count: usize,
        density_per_unit_t: Vec<(i64, usize)>,
    }
    emit(
        &common.out,
        &to_json(&Out {
            report,
            zero_count: total,
            density_per_unit_t: density,
        })?,
    )
}

fn zsample(l: &TwistedL, t: f64) -> Result<ZSample, ZerosError> {
    let cv = l.z(t).map_err(|e| ZerosError::Eval {
        what: e.to_string(),
    })?;
    let im_frac = cv.z.im.abs() / (1.0 + cv.z.re.abs());
    if im_frac > 1e-4 {
        return Err(ZerosError::RealnessViolation { t, im_frac });
    }
    Ok(ZSample {
        z: cv.z.re,
        err: cv.err_est.max(cv.z.im.abs()),
    })
}

/// Shared zeros pipeline: scan, refine each bracket, record residuals;
/// unrefinable brackets become warnings rather than failures.
pub fn zero_report(
    l: &TwistedL,
    t0: f64,
    t1: f64,
    step: f64,
    tol: f64,
) -> Result<ZeroReport, ZerosError> {
    let (brackets, below_floor) = if t1 > t0 {
        scan(|t| zsample(l, t), t0, t1, step)?
    } else {
        (Vec::new(), Vec::new())
    };
    let mut zeros = Vec::new();
    let mut warnings = Vec::new();
    for b in &brackets {
        match refine(|t| zsample(l, t), b, tol) {
            Ok(t_star) => {
                let cv = l.z(t_star).map_err(|e| ZerosError::Eval {
                    what: e.to_string(),
                })?;
                zeros.push(ZeroEntry {
                    t_star,
                    l_abs: cv.l.norm(),
                    width: tol,
                });
            }
            Err(ZerosError::LostBracket { t_lo, t_hi }) => {
                warnings.push(format!(
                    "bracket [{}, {}] lost its sign change during refinement",
                    t_lo, t_hi
                ));
            }
            Err(e) => return Err(e),
        }
    }
    for t in below_floor {
        warnings.push(format!("sample at t = {} below noise floor; skipped", t));
    }
    Ok(ZeroReport {
        label: l.spec.label.clone(),
        twist: format!("{}/{}", l.twist.cusp.p, l.twist.cusp.q),
        t0,
        t1,
        step,
        brackets,
        zeros,
        warnings,
    })
}

fn cmd_fecheck(mut common: Common, o: &Overrides) -> Result<(), Failure> {
    merge(&mut common, o);
    let l = build_l(&common, 4.0)?;
    let nu = l.spec.nu();
    #[derive(Serialize)]
    struct Entry {
        s_re: f64,
        s_im: f64,
        residual: f64,
    }
    #[derive(Serialize)]
    struct Out {
        label: String,
        twist: String,
        grid: Vec<Entry>,
        max_residual: f64,
    }
    let mut grid = Vec::new();
    let mut max_residual: f64 = 0.0;
    for dre in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        for im in [0.0, 0.7, 1.5] {
            let s = Complex64::new(nu / 2.0 + dre, im);
            let residual = l.fe_residual(s)?;
            max_residual = max_residual.max(residual);
            grid.push(Entry {
                s_re: s.re,
                s_im: s.im,
                residual,
            });
        }
    }
    emit(
        &common.out,
        &to_json(&Out {
            label: l.spec.label.clone(),
            twist: format!("{}/{}", l.twist.cusp.p, l.twist.cusp.q),
            grid,
            max_residual,
        })?,
    )
}

fn cmd_hl(mut common: Common, t_windows: Vec<f64>, o: &Overrides) -> Result<(), Failure> {
    merge(&mut common, o);
    let t_windows = o.t_windows.clone().unwrap_or(t_windows);
    if t_windows.is_empty() {
        return Err(Failure::config("--T requires at least one window parameter"));
    }
    for &t_cap in &t_windows {
        if t_cap <= T_MIN {
            return Err(Failure::hypothesis(format!(
                "window T = {} violates the support condition T > 2/log 2 = {:.6}",
                t_cap, T_MIN
            )));
        }
    }
    let t_max = t_windows
        .iter()
        .fold(0.0f64, |m, &t| m.max(2.0 * t.powf(1.5) + 12.0 * t));
    let l = build_l(&common, t_max)?;
    let family = BumpFamily::new();
    #[derive(Serialize)]
    struct Window {
        t_window: f64,
        i_signed: f64,
        i_abs: f64,
        err: f64,
        verdict: String,
        lutlem_lhs: (f64, f64),
        lutlem_rhs: (f64, f64),
    }
    #[derive(Serialize)]
    struct Out {
        label: String,
        twist: String,
        lambda_at_1: f64,
        windows: Vec<Window>,
        decay_table: Vec<(f64, f64)>,
        decay_slope: Option<f64>,
    }
    let tol = common.tol.unwrap_or(1e-3);
    let mut windows = Vec::new();
    for &t_cap in &t_windows {
        let outcome = hl_experiment(&l, &family, t_cap)?;
        let (lhs, rhs) = verify_lutlem(&l, &family, t_cap, Complex64::new(0.5, 0.0), tol)?;
        windows.push(Window {
            t_window: t_cap,
            i_signed: outcome.i_signed,
            i_abs: outcome.i_abs,
            err: outcome.err,
            verdict: match outcome.verdict {
                Verdict::SignChangeForced => "SignChangeForced".to_string(),
                Verdict::Inconclusive => "Inconclusive".to_string(),
            },
            lutlem_lhs: (lhs.re, lhs.im),
            lutlem_rhs: (rhs.re, rhs.im),
        });
    }
    let decay_table = decay_probe(&l, &family, &t_windows)?;
    let decay_slope = if decay_table.len() >= 2 {
        Some(fit_slope(&decay_table))
    } else {
        None
    };
    emit(
        &common.out,
        &to_json(&Out {
            label: l.spec.label.clone(),
            twist: format!("{}/{}", l.twist.cusp.p, l.twist.cusp.q),
            lambda_at_1: family.lambda_at_1,
            windows,
            decay_table,
            decay_slope,
        })?,
    )
}
