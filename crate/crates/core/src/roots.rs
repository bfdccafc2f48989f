//! Safeguarded Newton iteration on a sign-changing bracket.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOptions {
    /// Stop once the last step is below this.
    pub step_tol: f64,
    /// Accept the root only if `|f(root)|` is below this.
    pub residual_tol: f64,
    pub max_iter: u32,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            step_tol: 1e-12,
            residual_tol: 1e-9,
            max_iter: 200,
        }
    }
}

/// Finds a root of `f` in `[lo, hi]` given `f(lo)` and `f(hi)` of opposite
/// sign (or one of them exactly zero). Newton steps that leave the bracket
/// fall back to bisection.
pub fn bracketed_newton<F, D>(f: F, df: D, lo: f64, hi: f64, opts: RootOptions) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let fail = || Error::NoConvergence {
        what: "root bracket".into(),
        lo,
        hi,
    };
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return Err(fail());
    }
    // orient so that f(neg) < 0 < f(pos)
    let (mut neg, mut pos) = if flo < 0.0 { (lo, hi) } else { (hi, lo) };
    let mut x = 0.5 * (lo + hi);
    for _ in 0..opts.max_iter {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            neg = x;
        } else {
            pos = x;
        }
        let d = df(x);
        let newton = x - fx / d;
        let (a, b) = if neg < pos { (neg, pos) } else { (pos, neg) };
        let next = if d != 0.0 && newton.is_finite() && newton > a && newton < b {
            newton
        } else {
            0.5 * (neg + pos)
        };
        let step = (next - x).abs();
        x = next;
        if step < opts.step_tol || (b - a) < opts.step_tol {
            break;
        }
    }
    if f(x).abs() <= opts.residual_tol {
        Ok(x)
    } else {
        Err(fail())
    }
}

/// Splits `[lo, hi]` into `n` equal cells and returns every cell whose
/// endpoint values change sign, in ascending order.
pub fn sign_changes<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let h = (hi - lo) / n as f64;
    let mut out = Vec::new();
    let mut a = lo;
    let mut fa = f(a);
    for i in 1..=n {
        let b = if i == n { hi } else { lo + h * i as f64 };
        let fb = f(b);
        if fa.is_finite() && fb.is_finite() && (fa < 0.0) != (fb < 0.0) {
            out.push((a, b));
        }
        a = b;
        fa = fb;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cosine_root() {
        let r = bracketed_newton(f64::cos, |x| -x.sin(), 1.0, 2.0, RootOptions::default()).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn rejects_bracket_without_sign_change() {
        let e = bracketed_newton(
            |x| x * x + 1.0,
            |x| 2.0 * x,
            -1.0,
            1.0,
            RootOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(e, Error::NoConvergence { lo, hi, .. } if lo == -1.0 && hi == 1.0));
    }

    #[test]
    fn scan_reports_each_crossing() {
        let cells = sign_changes(f64::sin, 0.5, 10.0, 100);
        assert_eq!(cells.len(), 3);
    }
}
