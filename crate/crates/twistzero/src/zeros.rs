//! Sign-change detection and bisection refinement of critical-line zeros of
//! the real-valued Z functions.
//!
//! The scan samples Z on a uniform grid (samples may be evaluated in
//! parallel; assembly order is fixed), brackets every strict sign change,
//! and refines each bracket by bisection, verifying at every step that the
//! sign change persists beyond the evaluation noise floor.

use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq)]
pub enum ZerosError {
    /// A sample failed the realness tolerance.
    RealnessViolation { t: f64, im_frac: f64 },
    /// A bracket's sign change disappeared during refinement.
    LostBracket { t_lo: f64, t_hi: f64 },
    /// Underlying evaluator failure.
    Eval { what: String },
}

impl std::fmt::Display for ZerosError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ZerosError::RealnessViolation { t, im_frac } => {
                write!(f, "Z not real at t = {} (|Im|/|Z| = {:.3e})", t, im_frac)
            }
            ZerosError::LostBracket { t_lo, t_hi } => {
                write!(f, "sign change lost while refining [{}, {}]", t_lo, t_hi)
            }
            ZerosError::Eval { what } => write!(f, "evaluation failed: {}", what),
        }
    }
}

impl std::error::Error for ZerosError {}

/// One Z sample: the (real) value and the evaluation noise floor.
#[derive(Debug, Clone, Copy)]
pub struct ZSample {
    pub z: f64,
    pub err: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Bracket {
    pub t_lo: f64,
    pub t_hi: f64,
    pub z_lo: f64,
    pub z_hi: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ZeroEntry {
    pub t_star: f64,
    pub l_abs: f64,
    pub width: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroReport {
    pub label: String,
    pub twist: String,
    pub t0: f64,
    pub t1: f64,
    pub step: f64,
    pub brackets: Vec<Bracket>,
    pub zeros: Vec<ZeroEntry>,
    pub warnings: Vec<String>,
}

/// Scan [t0, t1] with the given step; every adjacent pair of samples with a
/// strict sign change becomes a bracket.  Samples with |Z| below the noise
/// floor are skipped for bracketing (reported in the second return).
pub fn scan<F>(zfun: F, t0: f64, t1: f64, step: f64) -> Result<(Vec<Bracket>, Vec<f64>), ZerosError>
where
    F: Fn(f64) -> Result<ZSample, ZerosError> + Sync,
{
    assert!(step > 0.0, "scan requires step > 0");
    assert!(t1 >= t0);
    let n = ((t1 - t0) / step).round() as usize;
    let ts: Vec<f64> = (0..=n).map(|i| t0 + i as f64 * step).collect();
    let samples: Vec<Result<ZSample, ZerosError>> =
        ts.par_iter().map(|&t| zfun(t)).collect();
    let mut clean: Vec<(f64, ZSample)> = Vec::with_capacity(samples.len());
    let mut below_floor = Vec::new();
    for (t, s) in ts.iter().zip(samples) {
        let s = s?;
        if s.z.abs() <= s.err {
            below_floor.push(*t);
        } else {
            clean.push((*t, s));
        }
    }
    let mut brackets = Vec::new();
    for pair in clean.windows(2) {
        let (ta, sa) = pair[0];
        let (tb, sb) = pair[1];
        if (tb - ta) <= step * 1.5 + 1e-12 && sa.z.signum() != sb.z.signum() {
            brackets.push(Bracket {
                t_lo: ta,
                t_hi: tb,
                z_lo: sa.z,
                z_hi: sb.z,
            });
        }
    }
    Ok((brackets, below_floor))
}

/// Bisect a bracket to width ≤ tol; the sign change must persist at every
/// iteration beyond the noise floor.
pub fn refine<F>(zfun: F, bracket: &Bracket, tol: f64) -> Result<f64, ZerosError>
where
    F: Fn(f64) -> Result<ZSample, ZerosError>,
{
    assert!(tol > 0.0);
    let (mut lo, mut hi) = (bracket.t_lo, bracket.t_hi);
    let (mut z_lo, mut z_hi) = (bracket.z_lo, bracket.z_hi);
    if z_lo.signum() == z_hi.signum() {
        return Err(ZerosError::LostBracket { t_lo: lo, t_hi: hi });
    }
    while hi - lo > tol {
        let mut mid = 0.5 * (lo + hi);
        let mut sm = zfun(mid)?;
        if sm.z.abs() <= sm.err {
            // midpoint sits inside the noise ball; probe off-center so the
            // interval still shrinks, and if that is noise too, the zero is
            // resolved to working precision
            let alt = lo + 0.6 * (hi - lo);
            let sa = zfun(alt)?;
            if sa.z.abs() <= sa.err {
                return Ok(mid);
            }
            mid = alt;
            sm = sa;
        }
        if sm.z.signum() == z_lo.signum() {
            lo = mid;
            z_lo = sm.z;
        } else {
            hi = mid;
            z_hi = sm.z;
        }
        if z_lo.signum() == z_hi.signum() {
            return Err(ZerosError::LostBracket { t_lo: lo, t_hi: hi });
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Zero count plus a per-unit-t density table.
pub fn count_zeros(report: &ZeroReport) -> (usize, Vec<(i64, usize)>) {
    let mut density: Vec<(i64, usize)> = Vec::new();
    for z in &report.zeros {
        let bin = z.t_star.floor() as i64;
        match density.iter_mut().find(|(b, _)| *b == bin) {
            Some((_, c)) => *c += 1,
            None => density.push((bin, 1)),
        }
    }
    density.sort_by_key(|&(b, _)| b);
    (report.zeros.len(), density)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sin_fun(t: f64) -> Result<ZSample, ZerosError> {
        Ok(ZSample {
            z: t.sin(),
            err: 1e-14,
        })
    }

    #[test]
    fn scan_sin() {
        let (brackets, _) = scan(sin_fun, 0.2, 10.0, 0.5).unwrap();
        assert_eq!(brackets.len(), 3);
        let expected = [PI, 2.0 * PI, 3.0 * PI];
        for (b, e) in brackets.iter().zip(expected) {
            assert!(b.t_lo < e && e < b.t_hi);
        }
    }

    #[test]
    fn scan_positive_function_empty() {
        let (brackets, _) = scan(|t| Ok(ZSample { z: 1.0 + t * t, err: 1e-14 }), 0.0, 5.0, 0.1)
            .unwrap();
        assert!(brackets.is_empty());
    }

    #[test]
    fn refine_sin_and_linear() {
        let b = Bracket {
            t_lo: 3.0,
            t_hi: 3.5,
            z_lo: 3.0f64.sin(),
            z_hi: 3.5f64.sin(),
        };
        let t_star = refine(sin_fun, &b, 1e-10).unwrap();
        assert!((t_star - PI).abs() <= 1e-10);
        let lin = |t: f64| Ok(ZSample { z: t - 2.0, err: 1e-15 });
        let b2 = Bracket {
            t_lo: 1.0,
            t_hi: 3.0,
            z_lo: -1.0,
            z_hi: 1.0,
        };
        let r = refine(lin, &b2, 1e-12).unwrap();
        assert!((r - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn refine_iteration_count_matches_width_halving() {
        let evals = std::cell::Cell::new(0usize);
        let root = 2f64.sqrt();
        let lin = |t: f64| {
            evals.set(evals.get() + 1);
            Ok(ZSample { z: t - root, err: 1e-15 })
        };
        let b = Bracket { t_lo: 1.0, t_hi: 3.0, z_lo: 1.0 - root, z_hi: 3.0 - root };
        let r = refine(&lin, &b, 1e-6).unwrap();
        assert!((r - root).abs() <= 1e-6);
        let expected_iters = (2.0f64 / 1e-6).log2().ceil() as usize;
        assert_eq!(evals.get(), expected_iters);
    }

    #[test]
    fn lost_bracket_detected() {
        // function that flips to positive inside: refine sees inconsistency
        let trick = |t: f64| Ok(ZSample { z: if t < 1.9 { -1.0 } else { 1.0 }, err: 1e-15 });
        let b = Bracket { t_lo: 0.0, t_hi: 4.0, z_lo: -1.0, z_hi: -1.0 };
        assert!(matches!(
            refine(trick, &b, 1e-6),
            Err(ZerosError::LostBracket { .. })
        ));
    }

    #[test]
    fn count_density() {
        let report = ZeroReport {
            label: "x".into(),
            twist: "0/1".into(),
            t0: 0.0,
            t1: 10.0,
            step: 0.5,
            brackets: vec![],
            zeros: vec![
                ZeroEntry { t_star: PI, l_abs: 0.0, width: 1e-10 },
                ZeroEntry { t_star: 2.0 * PI, l_abs: 0.0, width: 1e-10 },
                ZeroEntry { t_star: 3.0 * PI, l_abs: 0.0, width: 1e-10 },
            ],
        warnings: vec![],
        };
        let (n, density) = count_zeros(&report);
        assert_eq!(n, 3);
        assert_eq!(density, vec![(3, 1), (6, 1), (9, 1)]);
    }

    #[test]
    fn halved_step_superset() {
        let (coarse, _) = scan(sin_fun, 0.2, 10.0, 0.5).unwrap();
        let (fine, _) = scan(sin_fun, 0.2, 10.0, 0.25).unwrap();
        assert!(fine.len() >= coarse.len());
        for c in &coarse {
            assert!(fine.iter().any(|f| f.t_lo >= c.t_lo - 1e-12 && f.t_hi <= c.t_hi + 1e-12));
        }
    }
}
