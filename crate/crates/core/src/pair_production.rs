//! Electron-positron pair-creation rate in `D + 1` dimensions for a constant
//! electric field, in units `e = m = 1`:
//!
//! ```text
//! w(E) = (1 + delta_{D,3}) |E|^{(D+1)/2} / (2pi)^D  sum_{n>=1} n^{-(D+1)/2} exp(-n pi / |E|)
//! ```
//!
//! For `D = 1` the series sums to `-(|E|/2pi) ln(1 - exp(-pi/|E|))`.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::series::CurveSeries;

/// Relative size of the tail majorant at which summation stops.
const TAIL_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairProductionParams {
    pub dim: u8,
    pub e_field: f64,
    pub n_max: usize,
}

impl PairProductionParams {
    pub fn new(dim: u8, e_field: f64, n_max: usize) -> Result<Self> {
        let p = Self {
            dim,
            e_field,
            n_max,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.dim) {
            return Err(Error::domain(format!(
                "dimension must be 1, 2 or 3, got {}",
                self.dim
            )));
        }
        if !(self.e_field.abs() > 0.0 && self.e_field.is_finite()) {
            return Err(Error::domain("field magnitude must be > 0"));
        }
        if self.n_max == 0 {
            return Err(Error::domain("n_max must be >= 1"));
        }
        Ok(())
    }
}

pub fn rate(p: &PairProductionParams) -> Result<f64> {
    p.validate()?;
    let e = p.e_field.abs();
    let power = 0.5 * (f64::from(p.dim) + 1.0);
    let degeneracy = if p.dim == 3 { 2.0 } else { 1.0 };
    let prefactor = degeneracy * e.powf(power) / TAU.powi(i32::from(p.dim));
    Ok(prefactor * series_sum(e, power, p.n_max))
}

/// `sum_{n=1}^{n_max} n^-power exp(-n pi/e)`, cut once
/// `exp(-(n+1) pi/e) / (1 - exp(-pi/e))` (a bound on everything left) drops
/// below `TAIL_TOL` of the partial sum.
fn series_sum(e: f64, power: f64, n_max: usize) -> f64 {
    let q = (-PI / e).exp();
    if q == 0.0 {
        return 0.0;
    }
    let mut sum = 0.0;
    let mut qn = 1.0;
    for n in 1..=n_max {
        qn *= q;
        let nf = n as f64;
        let term = if power == 1.0 {
            qn / nf
        } else if power == 2.0 {
            qn / (nf * nf)
        } else {
            qn / nf.powf(power)
        };
        sum += term;
        let tail = qn * q / (1.0 - q);
        if tail < TAIL_TOL * sum {
            break;
        }
    }
    sum
}

/// The `D = 3` rate written directly as `|E|^2/(4 pi^3) sum n^-2 exp(-n pi/|E|)`.
pub fn rate_3d_literal(e_field: f64, n_max: usize) -> f64 {
    let e = e_field.abs();
    e * e / (4.0 * PI.powi(3)) * series_sum(e, 2.0, n_max)
}

/// `-(|E|/2pi) ln(1 - exp(-pi/|E|))`.
pub fn rate_1d_closed(e_field: f64) -> Result<f64> {
    if !(e_field.abs() > 0.0 && e_field.is_finite()) {
        return Err(Error::domain("field magnitude must be > 0"));
    }
    let e = e_field.abs();
    Ok(-(e / TAU) * (-(-PI / e).exp()).ln_1p())
}

/// Sampled `w(E)` for one dimension, columns `E,w`.
pub fn rate_curve(dim: u8, grid: &[f64], n_max: usize) -> Result<CurveSeries> {
    let w = grid
        .iter()
        .map(|&e| rate(&PairProductionParams::new(dim, e, n_max)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(
        CurveSeries::new(format!("pair rate D={dim}"), "E", grid.to_vec(), "eq50")?
            .with_column("w", w)?
            .with_param("dim", dim)
            .with_param("n_max", n_max),
    )
}

/// Coefficient of determination of the least-squares line through the first
/// ordinate of `series`.
pub fn linearity_metric(series: &CurveSeries) -> Result<f64> {
    let (x, y) = (series.x(), series.y());
    if x.len() < 10 || y.len() != x.len() {
        return Err(Error::domain("linearity metric needs at least 10 points"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (&xi, &yi) in x.iter().zip(y) {
        let (dx, dy) = (xi - mx, yi - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if syy <= f64::EPSILON * my.abs().max(1.0) * n * f64::EPSILON || syy == 0.0 {
        return Err(Error::Degenerate(
            "constant series has no linearity metric".into(),
        ));
    }
    let slope = sxy / sxx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| (yi - my - slope * (xi - mx)).powi(2))
        .sum();
    Ok(1.0 - ss_res / syy)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    }

    // Three-term sum, no early stopping.
    fn three_term_3d(e: f64) -> f64 {
        let s: f64 = (1..=3)
            .map(|n| (-(n as f64) * PI / e).exp() / (n * n) as f64)
            .sum();
        2.0 * e * e / TAU.powi(3) * s
    }

    #[test]
    fn three_dimensional_rate() {
        let w = rate(&PairProductionParams::new(3, 1.0, 100).unwrap()).unwrap();
        assert!((w - 3.5227e-4).abs() < 1e-7);
        assert!((w - three_term_3d(1.0)).abs() < 1e-8);
        assert!((w - 3.522_671_408_119_148e-4).abs() < 1e-18);
        let lit = rate_3d_literal(1.0, 100);
        assert!((w - lit).abs() <= 4.0 * f64::EPSILON * w);
    }

    #[test]
    fn one_dimensional_rate() {
        let w = rate(&PairProductionParams::new(1, 1.0, 200).unwrap()).unwrap();
        assert!((w - 7.0307e-3).abs() < 1e-6);
        let c = rate_1d_closed(1.0).unwrap();
        assert!((c - 7.030_7e-3).abs() < 1e-7);
        assert!((c - 0.007_030_740_048_596_038).abs() < 1e-17);
        let half = rate_1d_closed(PI / 2f64.ln()).unwrap();
        assert!((half - 0.5).abs() < 1e-15);
    }

    #[test]
    fn weak_field_suppression() {
        for d in 1..=3 {
            let w = rate(&PairProductionParams::new(d, 1e-3, 50).unwrap()).unwrap();
            assert_eq!(w, 0.0);
        }
        assert_eq!(rate_1d_closed(1e-3).unwrap(), 0.0);
    }

    #[test]
    fn two_dimensional_rate_uses_general_form() {
        let w = rate(&PairProductionParams::new(2, 1.0, 100).unwrap()).unwrap();
        let s: f64 = (1..=60)
            .map(|n| (-(n as f64) * PI).exp() / (n as f64).powf(1.5))
            .sum();
        assert!((w - s / TAU.powi(2)).abs() < 1e-16);
    }

    #[test]
    fn parameter_validation() {
        assert!(PairProductionParams::new(0, 1.0, 10).is_err());
        assert!(PairProductionParams::new(4, 1.0, 10).is_err());
        assert!(PairProductionParams::new(1, 0.0, 10).is_err());
        assert!(PairProductionParams::new(1, 1.0, 0).is_err());
        assert!(rate_1d_closed(0.0).is_err());
    }

    #[test]
    fn series_matches_closed_form() {
        for e in grid(0.2, 5.0, 200) {
            let s = rate(&PairProductionParams::new(1, e, 200).unwrap()).unwrap();
            assert!((s - rate_1d_closed(e).unwrap()).abs() < 1e-12, "E={e}");
        }
    }

    #[test]
    fn rate_increases_with_field() {
        for d in 1..=3 {
            let c = rate_curve(d, &grid(0.1, 5.0, 100), 500).unwrap();
            assert!(c.y().windows(2).all(|w| w[1] > w[0]));
        }
    }

    #[test]
    fn partial_sums_grow() {
        let mut last = 0.0;
        for n in 1..40 {
            let w = rate(&PairProductionParams::new(3, 4.0, n).unwrap()).unwrap();
            assert!(w >= last);
            last = w;
        }
    }

    #[test]
    fn linearity() {
        let xs = grid(0.0, 1.0, 20);
        let line = CurveSeries::new("", "x", xs.clone(), "t")
            .unwrap()
            .with_column("y", xs.iter().map(|x| 3.0 * x - 1.0).collect())
            .unwrap();
        assert!((linearity_metric(&line).unwrap() - 1.0).abs() < 1e-14);
        let flat = CurveSeries::new("", "x", xs.clone(), "t")
            .unwrap()
            .with_column("y", vec![2.0; 20])
            .unwrap();
        assert!(matches!(linearity_metric(&flat), Err(Error::Degenerate(_))));
        let short = CurveSeries::new("", "x", xs[..5].to_vec(), "t")
            .unwrap()
            .with_column("y", xs[..5].to_vec())
            .unwrap();
        assert!(linearity_metric(&short).is_err());

        let g = grid(0.05, 1.0, 50);
        let w1 = linearity_metric(&rate_curve(1, &g, 200).unwrap()).unwrap();
        let w3 = linearity_metric(&rate_curve(3, &g, 200).unwrap()).unwrap();
        assert!((w1 - 0.699_925).abs() < 1e-5 && (w3 - 0.640_832).abs() < 1e-5);
        assert!(w1 > w3);
    }
}
