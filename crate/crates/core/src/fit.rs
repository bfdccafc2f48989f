//! Zener current law, least-squares fits of both current laws, and curve
//! comparison.
//!
//! Both models have the shape `amplitude * shape(threshold, E)`:
//!
//! * `Zener`:  `G_P (E - E_T) exp(-E_T/E)` for `E > E_T`, else 0.
//! * `SsPair`: `C~_1 cosh(sqrt(2E/T) - sqrt(T/E)) exp(-T/E)` with
//!   `T = E_T c_v`. Only the product enters, so the fit reports `T` as a
//!   single effective threshold.
//!
//! Fitting minimizes RMSE. Each seed threshold is paired with its exact
//! least-squares amplitude; the best seed starts a Nelder-Mead search in
//! coordinates scaled by that start point, which makes the fit equivariant
//! under rescaling the data ordinates.

use crate::error::{Error, Result};
use crate::series::CurveSeries;
use crate::transfer::sspair_law;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZenerParams {
    pub g_p: f64,
    pub e_t: f64,
}

impl ZenerParams {
    pub fn new(g_p: f64, e_t: f64) -> Result<Self> {
        if !(g_p >= 0.0 && g_p.is_finite()) {
            return Err(Error::domain("G_P must be >= 0"));
        }
        if !(e_t > 0.0 && e_t.is_finite()) {
            return Err(Error::domain("E_T must be > 0"));
        }
        Ok(Self { g_p, e_t })
    }
}

pub fn zener_current(zp: &ZenerParams, e_field: f64) -> f64 {
    if e_field > zp.e_t {
        zp.g_p * (e_field - zp.e_t) * (-zp.e_t / e_field).exp()
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Zener,
    SsPair,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Zener => "zener",
            Model::SsPair => "sspair",
        }
    }

    pub fn eval(self, amplitude: f64, threshold: f64, e_field: f64) -> f64 {
        match self {
            Model::Zener => zener_current(
                &ZenerParams {
                    g_p: amplitude,
                    e_t: threshold,
                },
                e_field,
            ),
            Model::SsPair => sspair_law(amplitude, threshold, e_field),
        }
    }

    pub fn curve(self, amplitude: f64, threshold: f64, grid: &[f64]) -> Result<CurveSeries> {
        let tag = match self {
            Model::Zener => "eq49",
            Model::SsPair => "eq47",
        };
        let y = grid
            .iter()
            .map(|&e| self.eval(amplitude, threshold, e))
            .collect();
        Ok(CurveSeries::new(self.name(), "E", grid.to_vec(), tag)?
            .with_column("I", y)?
            .with_param("amplitude", amplitude)
            .with_param("threshold", threshold))
    }
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zener" => Ok(Model::Zener),
            "sspair" => Ok(Model::SsPair),
            other => Err(Error::domain(format!("unknown model {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub max_iter: u32,
    /// Simplex diameter, in start-point-relative units, at which to stop.
    pub x_tol: f64,
    pub initial_step: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iter: 500,
            x_tol: 1e-13,
            initial_step: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: Model,
    /// `[amplitude, threshold]`.
    pub params: [f64; 2],
    pub rmse: f64,
    /// Best RMSE over the seed grid, before refinement.
    pub seed_rmse: f64,
    pub iterations: u32,
    pub converged: bool,
}

impl FitResult {
    pub fn amplitude(&self) -> f64 {
        self.params[0]
    }

    pub fn threshold(&self) -> f64 {
        self.params[1]
    }

    /// Plain `key=value` block, one pair per line.
    pub fn report(&self) -> String {
        let (a, t) = match self.model {
            Model::Zener => ("g_p", "e_t"),
            Model::SsPair => ("c_tilde", "effective_threshold"),
        };
        format!(
            "model={}\n{a}={:.16e}\n{t}={:.16e}\nrmse={:.16e}\nseed_rmse={:.16e}\niterations={}\nconverged={}\n",
            self.model.name(),
            self.params[0],
            self.params[1],
            self.rmse,
            self.seed_rmse,
            self.iterations,
            self.converged
        )
    }
}

fn rmse(model: Model, amplitude: f64, threshold: f64, x: &[f64], y: &[f64]) -> f64 {
    let ss: f64 = x
        .iter()
        .zip(y)
        .map(|(&e, &v)| (v - model.eval(amplitude, threshold, e)).powi(2))
        .sum();
    (ss / x.len() as f64).sqrt()
}

/// Least-squares amplitude for a fixed threshold.
fn best_amplitude(model: Model, threshold: f64, x: &[f64], y: &[f64]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (&e, &v) in x.iter().zip(y) {
        let m = model.eval(1.0, threshold, e);
        num += v * m;
        den += m * m;
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// 32 log-spaced thresholds spanning the data's field range.
pub fn default_seed_grid(data: &CurveSeries) -> Vec<f64> {
    let positive: Vec<f64> = data.x().iter().copied().filter(|e| *e > 0.0).collect();
    let lo = positive.iter().copied().fold(f64::INFINITY, f64::min) * 0.1;
    let hi = positive.iter().copied().fold(0.0, f64::max);
    if !(lo.is_finite() && hi > lo) {
        return vec![1.0];
    }
    (0..32)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * f64::from(i) / 31.0).exp())
        .collect()
}

pub fn fit_curve(model: Model, data: &CurveSeries, seed_grid: &[f64]) -> Result<FitResult> {
    fit_curve_with(model, data, seed_grid, FitOptions::default())
}

pub fn fit_curve_with(
    model: Model,
    data: &CurveSeries,
    seed_grid: &[f64],
    opts: FitOptions,
) -> Result<FitResult> {
    let (x, y) = (data.x(), data.y());
    if y.len() != x.len() || x.iter().filter(|e| **e > 0.0).count() < 5 {
        return Err(Error::domain("fit needs at least 5 points with E > 0"));
    }
    if x.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::domain("fit data must have E > 0"));
    }
    if y.iter().all(|v| *v == 0.0) {
        return Err(Error::Degenerate("all-zero data cannot be fitted".into()));
    }
    let seeds: Vec<f64> = seed_grid
        .iter()
        .copied()
        .filter(|t| *t > 0.0 && t.is_finite())
        .collect();
    if seeds.is_empty() {
        return Err(Error::domain("seed grid needs a positive threshold"));
    }

    let mut start = (f64::INFINITY, 0.0, 0.0);
    for &t in &seeds {
        let a = best_amplitude(model, t, x, y);
        let r = rmse(model, a, t, x, y);
        if r < start.0 {
            start = (r, a, t);
        }
    }
    let (seed_rmse, a0, t0) = start;
    if !seed_rmse.is_finite() || a0 == 0.0 {
        return Err(Error::Degenerate(
            "no seed produced a usable start point".into(),
        ));
    }

    // scaled coordinates z = (a/a0, t/t0); thresholds stay positive
    let objective = |z: [f64; 2]| -> f64 {
        let t = z[1] * t0;
        if t <= 0.0 {
            return f64::INFINITY;
        }
        rmse(model, z[0] * a0, t, x, y)
    };
    let nm = nelder_mead(objective, [1.0, 1.0], opts);
    let (z, f) = if nm.value <= seed_rmse {
        (nm.point, nm.value)
    } else {
        ([1.0, 1.0], seed_rmse)
    };
    Ok(FitResult {
        model,
        params: [z[0] * a0, z[1] * t0],
        rmse: f,
        seed_rmse,
        iterations: nm.iterations,
        converged: nm.converged && f.is_finite(),
    })
}

struct Simplex {
    point: [f64; 2],
    value: f64,
    iterations: u32,
    converged: bool,
}

fn nelder_mead<F: Fn([f64; 2]) -> f64>(f: F, start: [f64; 2], opts: FitOptions) -> Simplex {
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let mut v = [
        start,
        [start[0] + opts.initial_step, start[1]],
        [start[0], start[1] + opts.initial_step],
    ];
    let mut fv = v.map(&f);
    let lerp =
        |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];

    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter {
        // sort ascending by value
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| fv[i].total_cmp(&fv[j]));
        v = order.map(|i| v[i]);
        fv = order.map(|i| fv[i]);

        let diameter = v[1..]
            .iter()
            .map(|p| (p[0] - v[0][0]).abs().max((p[1] - v[0][1]).abs()))
            .fold(0.0, f64::max);
        if diameter < opts.x_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let centroid = [0.5 * (v[0][0] + v[1][0]), 0.5 * (v[0][1] + v[1][1])];
        let reflected = lerp(centroid, v[2], -REFLECT);
        let fr = f(reflected);
        if fr < fv[0] {
            let expanded = lerp(centroid, v[2], -EXPAND);
            let fe = f(expanded);
            if fe < fr {
                v[2] = expanded;
                fv[2] = fe;
            } else {
                v[2] = reflected;
                fv[2] = fr;
            }
        } else if fr < fv[1] {
            v[2] = reflected;
            fv[2] = fr;
        } else {
            let (target, ft) = if fr < fv[2] {
                (reflected, fr)
            } else {
                (v[2], fv[2])
            };
            let contracted = lerp(centroid, target, CONTRACT);
            let fc = f(contracted);
            if fc < ft {
                v[2] = contracted;
                fv[2] = fc;
            } else {
                for i in 1..3 {
                    v[i] = lerp(v[0], v[i], SHRINK);
                    fv[i] = f(v[i]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&i, &j| fv[i].total_cmp(&fv[j])).unwrap_or(0);
    Simplex {
        point: v[best],
        value: fv[best],
        iterations,
        converged,
    }
}

/// Result of [`compare_curves`].
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub rmse: f64,
    /// `max |b - a| / |a|` over points where both magnitudes exceed 1e-12.
    pub max_rel_diff: f64,
    /// Columns `E,I_a,I_b`, each scaled to unit maximum.
    pub overlay: CurveSeries,
}

pub fn compare_curves(a: &CurveSeries, b: &CurveSeries) -> Result<Comparison> {
    let (xa, xb) = (a.x(), b.x());
    if xa.len() != xb.len() {
        return Err(Error::Alignment(format!(
            "grid lengths differ: {} vs {}",
            xa.len(),
            xb.len()
        )));
    }
    if let Some(i) = xa
        .iter()
        .zip(xb)
        .position(|(p, q)| (p - q).abs() > 1e-12 * p.abs().max(q.abs()).max(1.0))
    {
        return Err(Error::Alignment(format!("abscissae differ at index {i}")));
    }
    let (ya, yb) = (a.y(), b.y());
    if ya.len() != xa.len() || yb.len() != xb.len() {
        return Err(Error::Alignment("series has no ordinate column".into()));
    }
    let n = ya.len().max(1) as f64;
    let rmse = (ya.iter().zip(yb).map(|(p, q)| (p - q).powi(2)).sum::<f64>() / n).sqrt();
    let max_rel_diff = ya
        .iter()
        .zip(yb)
        .filter(|(p, q)| p.abs() > 1e-12 && q.abs() > 1e-12)
        .map(|(p, q)| (q - p).abs() / p.abs())
        .fold(0.0, f64::max);
    let normalize = |y: &[f64]| {
        let m = y.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if m > 0.0 {
            y.iter().map(|v| v / m).collect()
        } else {
            y.to_vec()
        }
    };
    let overlay = CurveSeries::new("overlay", "E", xa.to_vec(), "compare")?
        .with_column("I_a", normalize(ya))?
        .with_column("I_b", normalize(yb))?
        .with_param("a", &a.provenance.tag)
        .with_param("b", &b.provenance.tag);
    Ok(Comparison {
        rmse,
        max_rel_diff,
        overlay,
    })
}

/// 64-bit linear congruential generator used for reproducible synthetic data.
///
/// `state <- state * 6364136223846793005 + 1442695040888963407 (mod 2^64)`,
/// seeded with `state = seed`. A uniform deviate is the top 53 bits of the
/// advanced state divided by `2^53`. Normal deviates use Box-Muller on two
/// consecutive uniforms `(u1, u2)`, `z = sqrt(-2 ln(1 - u1)) cos(2 pi u2)`,
/// one deviate per pair.
#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    pub const MULTIPLIER: u64 = 6_364_136_223_846_793_005;
    pub const INCREMENT: u64 = 1_442_695_040_888_963_407;

    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform();
        let u2 = self.uniform();
        (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }
}

/// Multiplies every ordinate by `1 + sigma z` with `z` drawn from [`Lcg64`].
pub fn with_multiplicative_noise(series: &CurveSeries, sigma: f64, seed: u64) -> CurveSeries {
    let mut rng = Lcg64::new(seed);
    let mut out = series.clone();
    if let Some(col) = out.ordinates.first_mut() {
        for v in &mut col.values {
            *v *= 1.0 + sigma * rng.normal();
        }
    }
    out.with_param("noise_sigma", sigma)
        .with_param("noise_seed", seed)
}
