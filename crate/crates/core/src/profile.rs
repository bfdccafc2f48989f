//! Thin-wall soliton/antisoliton phase profile and its momentum-space
//! coefficients.
//!
//! The coefficients are the continuous Fourier transform of a unit-height box
//! of width `L`, `phi(k) = sqrt(2/pi) sin(kL/2) / k`, sampled on the midpoint
//! grid `k_n = (n - 1/2) 2pi/L`. The integer grid `2pi n/L` would land on
//! every zero of `sin(kL/2)`.
//!
//! Because the grid has spacing `2pi/L` and only odd half-harmonics, the
//! reconstruction it supports is antiperiodic with period `L`: it returns the
//! box on `[-L/2, L/2]` and its negated images beyond.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::quadrature::{adaptive_simpson_split, SimpsonOptions};

/// Smallest `b L` accepted for a tanh profile.
pub const MIN_STEEPNESS_LENGTH: f64 = 4.0;
/// Below this `|kL|` the mode coefficient takes its `k -> 0` limit.
const SMALL_KL: f64 = 1e-8;

/// Wall geometry of `phi_0(x) = pi [tanh b(x - x_a) + tanh b(x_b - x)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSpec {
    pub b: f64,
    pub x_a: f64,
    pub x_b: f64,
}

impl ProfileSpec {
    pub fn new(b: f64, x_a: f64, x_b: f64) -> Result<Self> {
        let s = Self { b, x_a, x_b };
        s.validate()?;
        Ok(s)
    }

    /// Walls at `-L/2` and `L/2`.
    pub fn centered(b: f64, length: f64) -> Result<Self> {
        Self::new(b, -0.5 * length, 0.5 * length)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.b > 0.0 && self.b.is_finite()) {
            return Err(Error::domain("wall steepness b must be > 0"));
        }
        if !(self.x_b > self.x_a) || !self.x_a.is_finite() || !self.x_b.is_finite() {
            return Err(Error::domain("walls must satisfy x_a < x_b"));
        }
        if self.b * self.length() < MIN_STEEPNESS_LENGTH {
            return Err(Error::domain(format!(
                "b*L = {} is below {MIN_STEEPNESS_LENGTH}; the plateau never reaches 2pi",
                self.b * self.length()
            )));
        }
        Ok(())
    }

    pub fn length(&self) -> f64 {
        self.x_b - self.x_a
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.x_a + self.x_b)
    }
}

pub fn phase_profile(spec: &ProfileSpec, x: f64) -> f64 {
    PI * ((spec.b * (x - spec.x_a)).tanh() + (spec.b * (spec.x_b - x)).tanh())
}

/// `sqrt(2/pi) sin(kL/2) / k`, continuous through `k = 0`.
pub fn mode_coefficient(length: f64, k: f64) -> f64 {
    let c = (2.0 / PI).sqrt();
    if (k * length).abs() < SMALL_KL {
        c * 0.5 * length
    } else {
        c * (0.5 * k * length).sin() / k
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeGrid {
    pub length: f64,
    pub n1: f64,
    pub k: Vec<f64>,
    pub coefficients: Vec<f64>,
}

impl ModeGrid {
    pub fn n_max(&self) -> usize {
        self.k.len()
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.length
    }
}

pub fn build_mode_grid(length: f64, n_max: usize, n1: f64) -> Result<ModeGrid> {
    if n_max == 0 {
        return Err(Error::domain("n_max must be >= 1"));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::domain("box length must be > 0"));
    }
    if !(0.0..=1.0).contains(&n1) {
        return Err(Error::domain("n1 must lie in [0, 1]"));
    }
    let dk = TAU / length;
    let k: Vec<f64> = (1..=n_max).map(|n| (n as f64 - 0.5) * dk).collect();
    let coefficients = k.iter().map(|&k| mode_coefficient(length, k)).collect();
    Ok(ModeGrid {
        length,
        n1,
        k,
        coefficients,
    })
}

/// Phase configurations accepted by [`action_position_space`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseShape {
    Tanh(ProfileSpec),
    /// Height `2pi` on `[-L/2, L/2]`, zero elsewhere.
    IdealBox {
        length: f64,
    },
}

impl PhaseShape {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            PhaseShape::Tanh(spec) => phase_profile(spec, x),
            PhaseShape::IdealBox { length } => {
                if x.abs() <= 0.5 * length {
                    TAU
                } else {
                    0.0
                }
            }
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            PhaseShape::Tanh(spec) => spec.length(),
            PhaseShape::IdealBox { length } => *length,
        }
    }

    fn breaks(&self) -> [f64; 2] {
        match self {
            PhaseShape::Tanh(spec) => [spec.x_a, spec.x_b],
            PhaseShape::IdealBox { length } => [-0.5 * length, 0.5 * length],
        }
    }
}

/// What the profile is measured against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reference {
    Constant(f64),
    Shape(PhaseShape),
}

impl Reference {
    fn eval(&self, x: f64) -> f64 {
        match self {
            Reference::Constant(c) => *c,
            Reference::Shape(s) => s.eval(x),
        }
    }
}

/// Tails of the tanh profile are cut at `|x| = 5L`.
pub fn default_half_width(shape: &PhaseShape) -> f64 {
    5.0 * shape.length()
}

/// `alpha * integral (phi_0(x) - phi_C(x))^2 dx` over `[-half_width, half_width]`.
pub fn action_position_space(
    alpha: f64,
    shape: &PhaseShape,
    reference: &Reference,
    half_width: f64,
) -> Result<f64> {
    if let PhaseShape::IdealBox { length } = shape {
        if !(*length > 0.0) {
            return Err(Error::domain("box length must be > 0"));
        }
    }
    if !(half_width >= 0.5 * shape.length()) {
        return Err(Error::domain("half_width must be at least L/2"));
    }
    let mut breaks = shape.breaks().to_vec();
    if let Reference::Shape(r) = reference {
        breaks.extend(r.breaks());
    }
    let integrand = |x: f64| {
        let d = shape.eval(x) - reference.eval(x);
        d * d
    };
    let q = adaptive_simpson_split(
        integrand,
        -half_width,
        half_width,
        &breaks,
        SimpsonOptions::default(),
    )?;
    Ok(alpha * q.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeWeight {
    Full,
    /// Weighted by `1 - n1^2`.
    Residual,
}

/// `(2pi/L)^2 sum_n w_n |phi(k_n)|^2`, summed in ascending `n`.
pub fn action_momentum_space(grid: &ModeGrid, weight: ModeWeight) -> f64 {
    let w = match weight {
        ModeWeight::Full => 1.0,
        ModeWeight::Residual => 1.0 - grid.n1 * grid.n1,
    };
    let sum: f64 = grid.coefficients.iter().map(|c| w * c * c).sum();
    grid.spacing().powi(2) * sum
}

/// Midpoint-rule inverse transform of the grid's coefficients,
/// `(2/sqrt(2pi)) dk sum_n phi(k_n) cos(k_n x)`, normalized so the unit box
/// is recovered on `[-L/2, L/2]` as `n_max` grows.
pub fn reconstruct_profile(grid: &ModeGrid, x: f64) -> f64 {
    let scale = 2.0 / TAU.sqrt() * grid.spacing();
    let sum: f64 = grid
        .k
        .iter()
        .zip(&grid.coefficients)
        .map(|(k, c)| c * (k * x).cos())
        .sum();
    scale * sum
}
