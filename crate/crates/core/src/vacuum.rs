//! Extended sine-Gordon potential, its false/true vacua and the energy gap.
//!
//! The potential is `V(phi) = D w^2 (1 - cos phi) + mu_E (phi - theta)^2`.
//! The gap is computed two ways: directly as `V(phi_F) - V(phi_T)`, and from
//! the curvature bracket `({}_A - {}_B) / 2` with
//! `{}_A = D w^2 cos phi_F + 2 mu_E` and `{}_B = (2/3!) phi_F phi_T D w^2`.
//! The two routes only agree near `mu_E ~ 0.0098 D w^2`; they are reported
//! side by side rather than reconciled.

use std::f64::consts::{PI, TAU};

use crate::error::{ensure_finite, Error, Result};
use crate::roots::{bracketed_newton, sign_changes, RootOptions};

/// Subintervals used when scanning `[0, pi]` for the false vacuum.
const FALSE_VACUUM_SCAN: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialParams {
    pub d_omega2: f64,
    pub mu_e: f64,
    pub theta: f64,
    pub epsilon_plus: f64,
}

impl Default for PotentialParams {
    fn default() -> Self {
        Self {
            d_omega2: 1.0,
            mu_e: 0.009782,
            theta: TAU,
            epsilon_plus: 1e-5,
        }
    }
}

impl PotentialParams {
    pub fn new(d_omega2: f64, mu_e: f64, theta: f64, epsilon_plus: f64) -> Result<Self> {
        let p = Self {
            d_omega2,
            mu_e,
            theta,
            epsilon_plus,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("d_omega2", self.d_omega2),
            ("mu_e", self.mu_e),
            ("theta", self.theta),
            ("epsilon_plus", self.epsilon_plus),
        ] {
            ensure_finite(name, v)?;
        }
        if self.d_omega2 <= 0.0 {
            return Err(Error::domain("d_omega2 must be > 0"));
        }
        if self.mu_e < 0.0 {
            return Err(Error::domain("mu_e must be >= 0"));
        }
        if !(self.epsilon_plus > 0.0 && self.epsilon_plus < 1e-2) {
            return Err(Error::domain("epsilon_plus must lie in (0, 1e-2)"));
        }
        Ok(())
    }

    /// Same potential with both energy coefficients multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            d_omega2: self.d_omega2 * c,
            mu_e: self.mu_e * c,
            ..*self
        }
    }

    /// Linearized false-vacuum estimate `2 mu_E theta / (D w^2 + 2 mu_E)`.
    pub fn linearized_false_vacuum(&self) -> f64 {
        2.0 * self.mu_e / (self.d_omega2 + 2.0 * self.mu_e) * self.theta
    }

    fn curvature(&self, phi: f64) -> f64 {
        self.d_omega2 * phi.cos() + 2.0 * self.mu_e
    }
}

pub fn potential_value(p: &PotentialParams, phi: f64) -> Result<f64> {
    ensure_finite("phi", phi)?;
    Ok(p.d_omega2 * (1.0 - phi.cos()) + p.mu_e * (phi - p.theta).powi(2))
}

pub fn potential_gradient(p: &PotentialParams, phi: f64) -> Result<f64> {
    ensure_finite("phi", phi)?;
    Ok(gradient(p, phi))
}

fn gradient(p: &PotentialParams, phi: f64) -> f64 {
    p.d_omega2 * phi.sin() + 2.0 * p.mu_e * (phi - p.theta)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VacuumSolution {
    pub phi_f: f64,
    pub phi_t: f64,
    pub residual_f: f64,
    pub residual_t: f64,
    pub gap_direct: f64,
    pub gap_bracket: f64,
    pub bracket_a: f64,
    pub bracket_b: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapMethod {
    Direct,
    Bracket,
}

pub fn solve_vacua(p: &PotentialParams) -> Result<VacuumSolution> {
    solve_vacua_with(p, RootOptions::default())
}

pub fn solve_vacua_with(p: &PotentialParams, opts: RootOptions) -> Result<VacuumSolution> {
    p.validate()?;
    if p.mu_e == 0.0 && p.theta != 0.0 {
        return Err(Error::domain("mu_e = 0 requires theta = 0"));
    }
    let g = |phi: f64| gradient(p, phi);
    let dg = |phi: f64| p.curvature(phi);

    let (phi_f, phi_t) = if p.theta == 0.0 {
        (0.0, 0.0)
    } else {
        // The false vacuum is the first upward crossing of dV/dphi in [0, pi].
        let cell = sign_changes(g, 0.0, PI, FALSE_VACUUM_SCAN)
            .into_iter()
            .find(|&(a, _)| g(a) < 0.0)
            .ok_or(Error::NoConvergence {
                what: "false vacuum: no sign change of dV/dphi".into(),
                lo: 0.0,
                hi: PI,
            })?;
        let phi_f = bracketed_newton(g, dg, cell.0, cell.1, opts)?;
        let phi_t = bracketed_newton(g, dg, TAU - 1.0, TAU + 1.0, opts)?;
        (phi_f, phi_t)
    };

    let mut s = VacuumSolution {
        phi_f,
        phi_t,
        residual_f: g(phi_f).abs(),
        residual_t: g(phi_t).abs(),
        gap_direct: 0.0,
        gap_bracket: 0.0,
        bracket_a: p.curvature(phi_f),
        bracket_b: (2.0 / 6.0) * phi_f * phi_t * p.d_omega2,
    };
    s.gap_direct = energy_gap_with(p, &s, GapMethod::Direct, opts.residual_tol)?;
    s.gap_bracket = energy_gap_with(p, &s, GapMethod::Bracket, opts.residual_tol)?;
    Ok(s)
}

/// Gap between the false and true vacua of `s`. Coincident vacua have no gap
/// by either route.
pub fn energy_gap(p: &PotentialParams, s: &VacuumSolution, method: GapMethod) -> Result<f64> {
    energy_gap_with(p, s, method, RootOptions::default().residual_tol)
}

fn energy_gap_with(
    p: &PotentialParams,
    s: &VacuumSolution,
    method: GapMethod,
    residual_tol: f64,
) -> Result<f64> {
    let (rf, rt) = (gradient(p, s.phi_f).abs(), gradient(p, s.phi_t).abs());
    if !(rf <= residual_tol && rt <= residual_tol) {
        return Err(Error::Consistency(format!(
            "solution is not stationary for these parameters (|V'(phi_F)| = {rf:e}, |V'(phi_T)| = {rt:e})"
        )));
    }
    if s.phi_f == s.phi_t {
        return Ok(0.0);
    }
    Ok(match method {
        GapMethod::Direct => potential_value(p, s.phi_f)? - potential_value(p, s.phi_t)?,
        GapMethod::Bracket => {
            let a = p.curvature(s.phi_f);
            let b = (2.0 / 6.0) * s.phi_f * s.phi_t * p.d_omega2;
            0.5 * (a - b)
        }
    })
}

/// Length and inverse-length scales set by the gap: `L = 1/gap`, `alpha = 1/L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scales {
    pub length: f64,
    pub alpha: f64,
}

pub fn derive_scales(gap: f64) -> Result<Scales> {
    if !(gap > 0.0) || !gap.is_finite() {
        return Err(Error::domain(format!("gap must be positive, got {gap}")));
    }
    let length = 1.0 / gap;
    Ok(Scales {
        length,
        alpha: 1.0 / length,
    })
}

/// Minimum `D w^2 / mu_E` accepted as thin-wall.
pub const THIN_WALL_MIN_RATIO: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThinWall {
    pub ratio: f64,
    pub pass: bool,
}

pub fn thin_wall_check(p: &PotentialParams) -> ThinWall {
    if p.mu_e == 0.0 {
        return ThinWall {
            ratio: f64::INFINITY,
            pass: true,
        };
    }
    let ratio = p.d_omega2 / p.mu_e;
    ThinWall {
        ratio,
        pass: ratio >= THIN_WALL_MIN_RATIO,
    }
}
