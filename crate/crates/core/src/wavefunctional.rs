//! Single-mode Gaussian wavefunctionals and their normalization.
//!
//! With one retained mode `phi(k_N)`, the initial and final functionals are
//!
//! ```text
//! Psi_1 = C_1 exp(-(alpha/L) (2pi)^2            |phi(k_N)|^2)
//! Psi_2 = C_2 exp(-(alpha/L) (2pi)^2 (1 - n1^2) |phi(k_N)|^2)
//! ```
//!
//! The `(1 - n1^2)` weight sits on the final functional. Written as a sum over
//! all modes the same weight is sometimes attached to the initial one instead;
//! the single-mode form is used here because the matrix element is built from
//! it.
//!
//! `C_i` normalizes `Psi_i` as a Gaussian in `phi` over `[0, sqrt(L^2/2pi)]`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::erf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Initial,
    Final,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefunctionalParams {
    pub alpha: f64,
    pub length: f64,
    pub n1: f64,
    /// Quadratic coefficients `{}_1`, `{}_2`.
    pub bracket: [f64; 2],
    /// Normalization constants `C_1`, `C_2`.
    pub c: [f64; 2],
}

impl WavefunctionalParams {
    /// Brackets default to `(alpha/L) (2pi)^2 w_i`. A zero bracket (final
    /// branch at `n1 = 1`) normalizes with the flat-integrand limit.
    pub fn new(alpha: f64, length: f64, n1: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::domain("alpha must be > 0"));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::domain("L must be > 0"));
        }
        if !(0.0..=1.0).contains(&n1) {
            return Err(Error::domain("n1 must lie in [0, 1]"));
        }
        let base = alpha / length * TAU * TAU;
        let bracket = [base, base * (1.0 - n1 * n1)];
        Self::with_brackets(alpha, length, n1, bracket)
    }

    pub fn with_brackets(alpha: f64, length: f64, n1: f64, bracket: [f64; 2]) -> Result<Self> {
        let mut c = [0.0; 2];
        for (ci, &a) in c.iter_mut().zip(&bracket) {
            *ci = if a == 0.0 {
                1.0 / integration_limit(length).sqrt()
            } else {
                normalization_constant(a, length)?
            };
        }
        Ok(Self {
            alpha,
            length,
            n1,
            bracket,
            c,
        })
    }

    fn idx(branch: Branch) -> usize {
        match branch {
            Branch::Initial => 0,
            Branch::Final => 1,
        }
    }

    pub fn weight(&self, branch: Branch) -> f64 {
        match branch {
            Branch::Initial => 1.0,
            Branch::Final => 1.0 - self.n1 * self.n1,
        }
    }

    pub fn bracket(&self, branch: Branch) -> f64 {
        self.bracket[Self::idx(branch)]
    }

    pub fn constant(&self, branch: Branch) -> f64 {
        self.c[Self::idx(branch)]
    }

    /// Normalized Gaussian `C_i exp(-{}_i phi^2)` in the retained coefficient.
    pub fn psi(&self, branch: Branch, phi: f64) -> f64 {
        self.constant(branch) * (-self.bracket(branch) * phi * phi).exp()
    }

    pub fn amplitude(&self, branch: Branch, coeff_sq_sum: f64) -> Result<f64> {
        Ok(self.constant(branch) * log_amplitude(self, coeff_sq_sum, branch)?.exp())
    }

    pub fn kernel(&self, branch: Branch, phi_k: f64, f_val: Complex64) -> Complex64 {
        second_variation_kernel(self.constant(branch), self.bracket(branch), phi_k, f_val)
    }
}

/// Upper limit `sqrt(L^2 / 2pi)` of the normalization integral.
pub fn integration_limit(length: f64) -> f64 {
    (length * length / TAU).sqrt()
}

/// `C = [int_0^b exp(-2 a phi^2) dphi]^(-1/2)` with `b = sqrt(L^2/2pi)`, using
/// `int_0^b exp(-a' x^2) dx = (1/2) sqrt(pi/a') erf(b sqrt(a'))` at `a' = 2a`.
pub fn normalization_constant(a: f64, length: f64) -> Result<f64> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain(format!(
            "quadratic coefficient must be > 0, got {a}"
        )));
    }
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::domain("L must be > 0"));
    }
    let b = integration_limit(length);
    let a2 = 2.0 * a;
    let integral = 0.5 * (PI / a2).sqrt() * erf(b * a2.sqrt());
    Ok(1.0 / integral.sqrt())
}

/// Exponent of the single-mode functional: `-(alpha/L) (2pi)^2 w S`.
pub fn log_amplitude(p: &WavefunctionalParams, coeff_sq_sum: f64, branch: Branch) -> Result<f64> {
    if !(coeff_sq_sum >= 0.0) {
        return Err(Error::domain("coefficient square sum must be >= 0"));
    }
    let v = -(p.alpha / p.length) * TAU * TAU * p.weight(branch) * coeff_sq_sum;
    // keep -0.0 out of the output
    Ok(if v == 0.0 { 0.0 } else { v })
}

/// `2 C {}^2 phi^2 exp(-{} phi^2) f^2`.
pub fn second_variation_kernel(c: f64, bracket: f64, phi_k: f64, f_val: Complex64) -> Complex64 {
    let phi2 = phi_k * phi_k;
    f_val * f_val * (2.0 * c * bracket * bracket * phi2 * (-bracket * phi2).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{adaptive_simpson, SimpsonOptions};

    fn quad(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let opts = SimpsonOptions {
            abs_tol: 1e-14,
            max_depth: 50,
        };
        adaptive_simpson(f, a, b, opts).unwrap().value
    }

    #[test]
    fn normalization_examples() {
        let b = integration_limit(1.0);
        let oracle = quad(|x| (-2.0 * x * x).exp(), 0.0, b);
        assert!((oracle - 0.360_366_991).abs() < 1e-8);
        let c = normalization_constant(1.0, 1.0).unwrap();
        assert!((c - 1.0 / oracle.sqrt()).abs() < 1e-12);
        assert!((c - 1.6660).abs() < 1e-3);
        let flat = normalization_constant(1e-14, 1.0).unwrap();
        assert!((flat - 1.583_2).abs() < 1e-4);
        assert!((flat - 1.0 / b.sqrt()).abs() < 1e-10);
        assert!(normalization_constant(0.0, 1.0).is_err());
        assert!(normalization_constant(-1.0, 1.0).is_err());
    }

    #[test]
    fn functionals_have_unit_norm() {
        for (alpha, l, n1) in [
            (1.0, 1.0, 0.5),
            (0.373, 2.68, 0.9),
            (3.0, 0.5, 0.0),
            (1.0, 1.0, 1.0),
        ] {
            let p = WavefunctionalParams::new(alpha, l, n1).unwrap();
            let b = integration_limit(l);
            for br in [Branch::Initial, Branch::Final] {
                let norm = quad(|x| p.psi(br, x).powi(2), 0.0, b);
                assert!(
                    (norm - 1.0).abs() < 1e-10,
                    "{br:?} {alpha} {l} {n1}: {norm}"
                );
            }
        }
    }

    #[test]
    fn log_amplitude_examples() {
        let p = WavefunctionalParams::new(1.0, 1.0, 0.4).unwrap();
        assert_eq!(log_amplitude(&p, 0.0, Branch::Initial).unwrap(), 0.0);
        assert_eq!(p.amplitude(Branch::Initial, 0.0).unwrap(), p.c[0]);
        assert!((log_amplitude(&p, 0.1, Branch::Initial).unwrap() + 3.947_842).abs() < 1e-6);
        let full = WavefunctionalParams::new(1.0, 1.0, 1.0).unwrap();
        assert_eq!(log_amplitude(&full, 12.5, Branch::Final).unwrap(), 0.0);
        assert!(log_amplitude(&p, -1.0, Branch::Final).is_err());
    }

    #[test]
    fn kernel_examples() {
        let pi = Complex64::new(PI, 0.0);
        assert_eq!(
            second_variation_kernel(1.0, 1.0, 0.0, pi),
            Complex64::new(0.0, 0.0)
        );
        let v = second_variation_kernel(1.0, 1.0, 0.253_974, pi);
        assert!((v.re - 1.194).abs() < 1e-3 && v.im == 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(second_variation_kernel(1.0, 1.0, 0.25, zero), zero);
        // f^2 rotates phase: f = i gives a negative real kernel
        let v = second_variation_kernel(1.0, 1.0, 0.5, Complex64::i());
        assert!(v.re < 0.0);
    }

    #[test]
    fn constant_increases_with_sharpness() {
        let mut last = 0.0;
        for i in 1..=300 {
            let c = normalization_constant(0.01 * f64::from(i), 1.3).unwrap();
            assert!(c > last);
            last = c;
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn amplitude_bounds(alpha in 0.01f64..5.0, l in 0.1f64..5.0, n1 in 0.0f64..=1.0,
                                s in 0.0f64..10.0, t in 0.0f64..10.0) {
                let p = WavefunctionalParams::new(alpha, l, n1).unwrap();
                let a = log_amplitude(&p, s, Branch::Initial).unwrap();
                let b = log_amplitude(&p, s, Branch::Final).unwrap();
                prop_assert!(a.exp() > 0.0 || s * alpha / l > 10.0);
                prop_assert!(a.exp() <= 1.0 && b.exp() <= 1.0);
                prop_assert!(b >= a);
                // linear in the mode sum
                let ab = log_amplitude(&p, s + t, Branch::Initial).unwrap();
                let at = log_amplitude(&p, t, Branch::Initial).unwrap();
                prop_assert!((ab - (a + at)).abs() <= 1e-12 * ab.abs().max(1.0));
            }
        }
    }
}
