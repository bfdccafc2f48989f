//! Browser bindings for three interactive views: the I-E law against the
//! Zener form, pair-production rates in one and three dimensions, and the
//! tilted washboard potential with its vacua.
//!
//! Curves come back as flat `Float64Array`s laid out column after column,
//! each `n` long, so the page can slice them without any JSON.

use std::f64::consts::TAU;

use cdwlab_core::fit::Model;
use cdwlab_core::pair_production::{linearity_metric, rate_curve};
use cdwlab_core::series::Grid;
use cdwlab_core::transfer::current_curve;
use cdwlab_core::vacuum::{self, PotentialParams};
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 5000;

fn check_points(n: usize) -> Result<(), String> {
    if (2..=MAX_POINTS).contains(&n) {
        Ok(())
    } else {
        Err(format!("point count must be in 2..={MAX_POINTS}, got {n}"))
    }
}

/// `[E; I_pair; I_zener]` on `n` points of `(0, e_max]`.
pub fn iv_columns(
    c_tilde: f64,
    e_t: f64,
    c_v: f64,
    g_p: f64,
    e_max: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    check_points(n)?;
    let e: Vec<f64> = Grid::linear(e_max / n as f64, e_max, n)
        .map_err(|e| e.to_string())?
        .points();
    let pair = current_curve(c_tilde, e_t, c_v, &e).map_err(|e| e.to_string())?;
    let zener = Model::Zener
        .curve(g_p, e_t, &e)
        .map_err(|e| e.to_string())?;
    let mut out = e;
    out.extend_from_slice(pair.y());
    out.extend_from_slice(zener.y());
    Ok(out)
}

/// `[E; w_1; w_3; r2_1; r2_3]`: both rate curves plus their linearity scores.
pub fn pair_columns(e_max: f64, n: usize, n_max: usize) -> Result<Vec<f64>, String> {
    check_points(n)?;
    let e = Grid::linear(e_max / n as f64, e_max, n)
        .map_err(|e| e.to_string())?
        .points();
    let w1 = rate_curve(1, &e, n_max).map_err(|e| e.to_string())?;
    let w3 = rate_curve(3, &e, n_max).map_err(|e| e.to_string())?;
    let r1 = linearity_metric(&w1).map_err(|e| e.to_string())?;
    let r3 = linearity_metric(&w3).map_err(|e| e.to_string())?;
    let mut out = e;
    out.extend_from_slice(w1.y());
    out.extend_from_slice(w3.y());
    out.extend_from_slice(&[r1, r3]);
    Ok(out)
}

/// `[phi; V; phi_f, phi_t, gap_direct, gap_bracket]` with `phi` spanning
/// `[-0.5, theta + 0.5]`.
pub fn potential_columns(
    d_omega2: f64,
    mu_e: f64,
    theta: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    check_points(n)?;
    let p = PotentialParams::new(d_omega2, mu_e, theta, 1e-5).map_err(|e| e.to_string())?;
    let s = vacuum::solve_vacua(&p).map_err(|e| e.to_string())?;
    let phi = Grid::linear(-0.5, theta.max(TAU) + 0.5, n)
        .map_err(|e| e.to_string())?
        .points();
    let v = phi
        .iter()
        .map(|&x| vacuum::potential_value(&p, x))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let mut out = phi;
    out.extend(v);
    out.extend_from_slice(&[s.phi_f, s.phi_t, s.gap_direct, s.gap_bracket]);
    Ok(out)
}

#[wasm_bindgen]
pub fn iv_curves(
    c_tilde: f64,
    e_t: f64,
    c_v: f64,
    g_p: f64,
    e_max: f64,
    n: usize,
) -> Result<Vec<f64>, JsError> {
    iv_columns(c_tilde, e_t, c_v, g_p, e_max, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn pair_rates(e_max: f64, n: usize, n_max: usize) -> Result<Vec<f64>, JsError> {
    pair_columns(e_max, n, n_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn potential(d_omega2: f64, mu_e: f64, theta: f64, n: usize) -> Result<Vec<f64>, JsError> {
    potential_columns(d_omega2, mu_e, theta, n).map_err(|e| JsError::new(&e))
}
