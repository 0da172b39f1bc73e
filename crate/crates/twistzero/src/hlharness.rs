//! Test-function family and window experiment for forcing sign changes.
//!
//! Builds the smooth bump φ, its multiplicative avatar ψ(x) = φ(log x), the
//! self-convolution λ = ψ*ψ, and the nonnegative window u_T(t) =
//! u((t − 2T^{3/2})/T) with u = (Mψ(it))².  On top of the family sit the
//! exact integral identity check (∫L(s+it)u_T dt = 2π a₁ e(p/q) λ(1) T),
//! the rapid-decay probes, and the signed-vs-absolute comparison whose
//! verdict forces a sign change of Z inside the window.
//!
//! The constant λ(1) = ∫φ² is carried explicitly everywhere; it equals 1
//! only for specially normalized bumps, and ours is not.

use crate::lfun::{LfunError, TwistedL};
use crate::quad::{composite, panel_edges, GL32_NODES, GL32_WEIGHTS};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Windows are only admissible for T > 2/log 2 (so that λ_T(n) = 0 for all
/// integers n ≥ 2).
pub const T_MIN: f64 = 2.0 / std::f64::consts::LN_2;

#[derive(Debug, Clone, PartialEq)]
pub enum HlError {
    /// T at or below the admissibility threshold 2/log 2.
    WindowTooNarrow { t_cap: f64 },
    /// Underlying L-function evaluation failed.
    Lfun(LfunError),
}

impl std::fmt::Display for HlError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HlError::WindowTooNarrow { t_cap } => {
                write!(f, "window parameter T = {} not above 2/log 2 = {:.6}", t_cap, T_MIN)
            }
            HlError::Lfun(e) => write!(f, "L-function evaluation failed: {}", e),
        }
    }
}

impl std::error::Error for HlError {}

impl From<LfunError> for HlError {
    fn from(e: LfunError) -> Self {
        HlError::Lfun(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    SignChangeForced,
    Inconclusive,
}

#[derive(Debug, Clone, Copy)]
pub struct HlOutcome {
    pub t_cap: f64,
    pub i_signed: f64,
    pub i_abs: f64,
    pub err: f64,
    pub verdict: Verdict,
}

/// The bump φ(v) = exp(1 − 1/(1 − v²)) on (−1, 1), zero outside.
pub fn phi(v: f64) -> f64 {
    if v.abs() < 1.0 {
        (1.0 - 1.0 / (1.0 - v * v)).exp()
    } else {
        0.0
    }
}

/// Natural cubic spline on a uniform grid.
#[derive(Debug, Clone)]
struct Spline {
    v0: f64,
    h: f64,
    y: Vec<f64>,
    y2: Vec<f64>,
}

impl Spline {
    fn new(v0: f64, h: f64, y: Vec<f64>) -> Spline {
        let n = y.len();
        assert!(n >= 3);
        // tridiagonal solve for second derivatives, natural boundary
        let mut y2 = vec![0.0; n];
        let mut u = vec![0.0; n];
        for i in 1..n - 1 {
            let p = 0.5 * y2[i - 1] + 2.0;
            y2[i] = -0.5 / p;
            let rhs = (y[i + 1] - 2.0 * y[i] + y[i - 1]) * 3.0 / (h * h);
            u[i] = (rhs - 0.5 * u[i - 1]) / p;
        }
        for i in (1..n - 1).rev() {
            let next = y2[i + 1];
            y2[i] = y2[i] * next + u[i];
        }
        y2[0] = 0.0;
        y2[n - 1] = 0.0;
        Spline { v0, h, y, y2 }
    }

    fn eval(&self, v: f64) -> f64 {
        let n = self.y.len();
        let x = (v - self.v0) / self.h;
        if x <= 0.0 {
            return self.y[0];
        }
        if x >= (n - 1) as f64 {
            return self.y[n - 1];
        }
        let i = x.floor() as usize;
        let a = (i + 1) as f64 - x;
        let b = x - i as f64;
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.y2[i] + (b * b * b - b) * self.y2[i + 1]) * self.h * self.h
                / 6.0
    }
}

/// φ, ψ, λ and window evaluators; immutable after construction.
#[derive(Debug, Clone)]
pub struct BumpFamily {
    lambda_spline: Spline,
    pub lambda_at_1: f64,
}

impl BumpFamily {
    pub fn new() -> BumpFamily {
        // λ in log coordinates: Λ(v) = ∫ φ(w) φ(v − w) dw, supported on [−2, 2]
        let n = 1001usize;
        let h = 4.0 / (n - 1) as f64;
        let y: Vec<f64> = (0..n)
            .map(|i| {
                let v = -2.0 + i as f64 * h;
                let a = (v - 1.0).max(-1.0);
                let b = (v + 1.0).min(1.0);
                if b <= a {
                    0.0
                } else {
                    composite(a, b, 0.1, |w| phi(w) * phi(v - w))
                }
            })
            .collect();
        let lambda_at_1 = composite(-1.0, 1.0, 0.1, |v| {
            let p = phi(v);
            p * p
        });
        BumpFamily {
            lambda_spline: Spline::new(-2.0, h, y),
            lambda_at_1,
        }
    }

    pub fn psi(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            phi(x.ln())
        }
    }

    /// λ(x) = (ψ*ψ)(x), supported on [e^{−2}, e^{2}].
    pub fn lambda(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let v = x.ln();
        if v.abs() >= 2.0 {
            0.0
        } else {
            self.lambda_spline.eval(v)
        }
    }

    /// Mψ(it) = 2 ∫₀¹ φ(v) cos(tv) dv  (x = e^{−v} substitution).
    pub fn m_psi(&self, t: f64) -> f64 {
        let panels = (t.abs() / 6.0).ceil().max(4.0);
        2.0 * composite(0.0, 1.0, 1.0 / panels, |v| phi(v) * (t * v).cos())
    }

    /// u(t) = (Mψ(it))² ≥ 0.
    pub fn u(&self, t: f64) -> f64 {
        let m = self.m_psi(t);
        m * m
    }

    /// u_T(t) = u((t − 2T^{3/2})/T).
    pub fn u_t(&self, t_cap: f64, t: f64) -> f64 {
        let center = 2.0 * t_cap.powf(1.5);
        self.u((t - center) / t_cap)
    }
}

impl Default for BumpFamily {
    fn default() -> Self {
        BumpFamily::new()
    }
}

pub fn u_eval(family: &BumpFamily, t: f64) -> f64 {
    family.u(t)
}

pub fn u_t_eval(family: &BumpFamily, t_cap: f64, t: f64) -> f64 {
    family.u_t(t_cap, t)
}

fn require_window(t_cap: f64) -> Result<(), HlError> {
    if t_cap > T_MIN {
        Ok(())
    } else {
        Err(HlError::WindowTooNarrow { t_cap })
    }
}

/// Complex window quadrature: ∫ g(t) u_T(t) dt over |t − 2T^{3/2}| ≤ W·T,
/// fixed-order panels of width min(1, T/8), panel sums accumulated in order.
fn window_quad_c<F>(
    family: &BumpFamily,
    t_cap: f64,
    half_width: f64,
    panel_width: f64,
    g: F,
) -> Result<Complex64, HlError>
where
    F: Fn(f64) -> Result<Complex64, HlError> + Sync,
{
    let center = 2.0 * t_cap.powf(1.5);
    let panels = panel_edges(center - half_width, center + half_width, panel_width);
    let sums: Vec<Result<Complex64, HlError>> = panels
        .par_iter()
        .map(|&(a, b)| {
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            let mut acc = Complex64::new(0.0, 0.0);
            for (x, w) in GL32_NODES.iter().zip(GL32_WEIGHTS.iter()) {
                let t = mid + half * x;
                acc += g(t)? * (w * family.u_t(t_cap, t));
            }
            Ok(acc * half)
        })
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for s in sums {
        total += s?;
    }
    Ok(total)
}

/// Lemma-LuTlem check: returns (lhs, rhs) with
/// lhs = ∫ L_{p/q}(s+it) u_T(t) dt and rhs = 2π a₁ e(p/q) λ(1) T.
pub fn verify_lutlem(
    l: &TwistedL,
    family: &BumpFamily,
    t_cap: f64,
    s: Complex64,
    tol: f64,
) -> Result<(Complex64, Complex64), HlError> {
    require_window(t_cap)?;
    let w = if tol <= 1e-5 {
        40.0
    } else if tol <= 1e-4 {
        32.0
    } else {
        12.0
    };
    // width-4 panels: GL32 resolves the slow u_T envelope and every Dirichlet
    // oscillation e^{-it log n} whose amplitude is above working precision
    let lhs = window_quad_c(family, t_cap, w * t_cap, (t_cap / 2.0).min(4.0), |t| {
        let (v, _) = l.smoothed_l(s + Complex64::new(0.0, t))?;
        Ok(v)
    })?;
    let a1 = l.table.c(1) * l.twist.root(1);
    let rhs = a1 * (2.0 * PI * family.lambda_at_1 * t_cap);
    Ok((lhs, rhs))
}

/// |∫ M_0τ(ν/2 + it) u_T(t) dt| for each T, for log-log slope fitting.
pub fn decay_probe(
    l: &TwistedL,
    family: &BumpFamily,
    t_list: &[f64],
) -> Result<Vec<(f64, f64)>, HlError> {
    let nu = l.spec.nu();
    let mut table = Vec::with_capacity(t_list.len());
    for &t_cap in t_list {
        require_window(t_cap)?;
        let val = window_quad_c(family, t_cap, 12.0 * t_cap, (t_cap / 8.0).min(1.0), |t| {
            let (v, _) = l.mellin_m0(Complex64::new(0.5 * nu, t))?;
            Ok(v)
        })?;
        table.push((t_cap, val.norm()));
    }
    Ok(table)
}

/// ∫_{|x − 2T^{3/2}| > T^{3/2}} |f(x)| u_T(x) dx for each T (outer cut at
/// 12T, where u is negligible).
pub fn tail_probe<F>(family: &BumpFamily, f: F, t_list: &[f64]) -> Vec<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let mut table = Vec::with_capacity(t_list.len());
    for &t_cap in t_list {
        let center = 2.0 * t_cap.powf(1.5);
        let inner = t_cap.powf(1.5);
        let outer = 12.0 * t_cap;
        let width = (t_cap / 8.0).min(1.0);
        let mut total = 0.0;
        if inner < outer {
            for (a, b) in [
                (center - outer, center - inner),
                (center + inner, center + outer),
            ] {
                total += composite(a, b, width, |x| f(x).abs() * family.u_t(t_cap, x));
            }
        }
        table.push((t_cap, total));
    }
    table
}

/// Window integrals of a real integrand: returns (signed, absolute,
/// accumulated evaluation-error estimate), all against the u_T weight.
pub fn window_integrals<F>(
    family: &BumpFamily,
    t_cap: f64,
    zfun: F,
) -> Result<(f64, f64, f64), HlError>
where
    F: Fn(f64) -> Result<(f64, f64), HlError> + Sync,
{
    require_window(t_cap)?;
    let center = 2.0 * t_cap.powf(1.5);
    let panels = panel_edges(center - 12.0 * t_cap, center + 12.0 * t_cap, (t_cap / 8.0).min(1.0));
    let sums: Vec<Result<(f64, f64, f64), HlError>> = panels
        .par_iter()
        .map(|&(a, b)| {
            let mid = 0.5 * (a + b);
            let half = 0.5 * (b - a);
            let (mut sgn, mut abs, mut err) = (0.0, 0.0, 0.0);
            for (x, w) in GL32_NODES.iter().zip(GL32_WEIGHTS.iter()) {
                let t = mid + half * x;
                let (z, e) = zfun(t)?;
                let wu = w * family.u_t(t_cap, t);
                sgn += wu * z;
                abs += wu * z.abs();
                err += wu * e;
            }
            Ok((sgn * half, abs * half, err * half))
        })
        .collect();
    let (mut sgn, mut abs, mut err) = (0.0, 0.0, 0.0);
    for s in sums {
        let (a, b, c) = s?;
        sgn += a;
        abs += b;
        err += c;
    }
    Ok((sgn, abs, err))
}

/// The §6 comparison: I_signed = ∫ Z u_T, I_abs = ∫ |Z| u_T; a sign change
/// inside the window is forced when |I_signed| < I_abs − combined error.
pub fn hl_experiment(l: &TwistedL, family: &BumpFamily, t_cap: f64) -> Result<HlOutcome, HlError> {
    let (i_signed, i_abs, err) = window_integrals(family, t_cap, |t| {
        let cv = l.z(t)?;
        Ok((cv.z.re, cv.err_est + cv.z.im.abs()))
    })?;
    let verdict = if i_signed.abs() < i_abs - err {
        Verdict::SignChangeForced
    } else {
        Verdict::Inconclusive
    };
    Ok(HlOutcome {
        t_cap,
        i_signed,
        i_abs,
        err,
        verdict,
    })
}

/// Least-squares slope of log y against log T.
pub fn fit_slope(table: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = table
        .iter()
        .filter(|&&(_, y)| y > 0.0)
        .map(|&(t, y)| (t.ln(), y.ln()))
        .collect();
    let n = pts.len() as f64;
    assert!(n >= 2.0, "slope fit needs at least two positive points");
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}
