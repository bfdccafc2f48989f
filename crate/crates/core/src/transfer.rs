//! Momentum-space kernel, its poles, the tunneling matrix element and the
//! soliton-pair I-E law.
//!
//! With `u = kL/2` the kernel is
//!
//! ```text
//! f(k) = e^{ikx} [u cos u - sin u] / g(k),   g(k) = cos u - (ikx + 1/(kL)) sin u
//! ```
//!
//! `g` is even in `k`, so poles come in `+-k` pairs. At `x = 0` they are the
//! real roots of `tan u = 2u`; for `x != 0` each is continued into the complex
//! plane by Newton iteration while `x` is ramped up from zero.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::roots::{bracketed_newton, sign_changes, RootOptions};
use crate::series::CurveSeries;

const SMALL_KL: f64 = 1e-8;
const POLE_GUARD: f64 = 1e-14;
/// Accepted `|g|` at a reported pole.
pub const POLE_RESIDUAL: f64 = 1e-10;
const NEWTON_MAX_ITER: u32 = 100;
const CONTINUATION_STEPS: u32 = 16;
const CONTOUR_NODES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferParams {
    pub m_star: f64,
    pub n1: f64,
    pub alpha: f64,
    pub length: f64,
    pub x_bar: f64,
    pub c1: f64,
    pub c2: f64,
    pub delta_s: f64,
    pub e_star: f64,
    pub e_t: f64,
    pub c_v: f64,
}

impl Default for TransferParams {
    fn default() -> Self {
        Self {
            m_star: 1.0,
            n1: 1.0,
            alpha: 1.0,
            length: 1.0,
            x_bar: 1.0,
            c1: 1.0,
            c2: 1.0,
            delta_s: 1.0,
            e_star: 1.0,
            e_t: 1.0,
            c_v: 1.0,
        }
    }
}

impl TransferParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("m_star", self.m_star),
            ("length", self.length),
            ("x_bar", self.x_bar),
            ("e_t", self.e_t),
            ("c_v", self.c_v),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.n1) {
            return Err(Error::domain("n1 must lie in [0, 1]"));
        }
        Ok(())
    }

    /// `C~_1 = C_1 C_2 / m*`.
    pub fn c_tilde(&self) -> f64 {
        self.c1 * self.c2 / self.m_star
    }
}

fn numerator(length: f64, x: f64, k: Complex64) -> Complex64 {
    let u = k * (0.5 * length);
    (Complex64::i() * k * x).exp() * (u * u.cos() - u.sin())
}

/// Kernel denominator `g(k)`.
pub fn denominator(length: f64, x: f64, k: Complex64) -> Complex64 {
    let u = k * (0.5 * length);
    u.cos() - (Complex64::i() * k * x + (k * length).inv()) * u.sin()
}

/// `dg/dk`.
pub fn denominator_derivative(length: f64, x: f64, k: Complex64) -> Complex64 {
    let half = 0.5 * length;
    let u = k * half;
    let h = Complex64::i() * k * x + (k * length).inv();
    let dh = Complex64::new(0.0, x) - (k * k * length).inv();
    -u.sin() * half - dh * u.sin() - h * u.cos() * half
}

pub fn f_kernel(length: f64, x: f64, k: Complex64) -> Result<Complex64> {
    if (k * length).norm() < SMALL_KL {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let g = denominator(length, x, k);
    if g.norm() < POLE_GUARD {
        return Err(Error::PoleProximity {
            re: k.re,
            im: k.im,
            magnitude: g.norm(),
        });
    }
    Ok(numerator(length, x, k) / g)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleSearch {
    /// Search window for `Re u`, inside `(0, 20]`.
    pub re_u_min: f64,
    pub re_u_max: f64,
    pub scan_cells: usize,
    /// Positive-side poles kept (each is reported with its mirror).
    pub max_count: usize,
}

impl Default for PoleSearch {
    fn default() -> Self {
        Self {
            re_u_min: 0.0,
            re_u_max: 20.0,
            scan_cells: 200,
            max_count: usize::MAX,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub k: Complex64,
    pub abs_g: f64,
    /// `numerator(k*) / g'(k*)`.
    pub residue: Complex64,
    /// Same residue from trapezoidal quadrature on a small circle.
    pub residue_contour: Complex64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct PoleSet {
    pub poles: Vec<Pole>,
    pub warnings: Vec<String>,
}

impl PoleSet {
    /// Pole report with columns `re_k,im_k,abs_g,re_res,im_res`.
    pub fn to_series(&self, length: f64, x: f64) -> Result<CurveSeries> {
        let col = |f: fn(&Pole) -> f64| self.poles.iter().map(f).collect::<Vec<_>>();
        CurveSeries::new("poles", "re_k", col(|p| p.k.re), "eq44")?
            .with_column("im_k", col(|p| p.k.im))?
            .with_column("abs_g", col(|p| p.abs_g))?
            .with_column("re_res", col(|p| p.residue.re))?
            .with_column("im_res", col(|p| p.residue.im))
            .map(|s| s.with_param("L", length).with_param("x", x))
    }
}

pub fn find_poles(length: f64, x: f64, search: PoleSearch) -> Result<PoleSet> {
    if !(length > 0.0 && length.is_finite()) || !x.is_finite() {
        return Err(Error::domain("L must be > 0 and x finite"));
    }
    if !(search.re_u_min >= 0.0 && search.re_u_max <= 20.0 && search.re_u_min < search.re_u_max) {
        return Err(Error::domain("pole search window must lie within (0, 20]"));
    }
    if search.scan_cells == 0 {
        return Err(Error::domain("scan_cells must be >= 1"));
    }

    // x = 0 denominator in terms of u; its u -> 0 limit is 1/2
    let g0 = |u: f64| u.cos() - u.sin() / (2.0 * u);
    let dg0 = |u: f64| -u.sin() - u.cos() / (2.0 * u) + u.sin() / (2.0 * u * u);
    let lo = search.re_u_min.max(1e-6);
    let opts = RootOptions {
        step_tol: 1e-15,
        residual_tol: POLE_RESIDUAL,
        max_iter: 200,
    };

    let mut set = PoleSet::default();
    let mut positive = Vec::new();
    for (a, b) in sign_changes(g0, lo, search.re_u_max, search.scan_cells) {
        if positive.len() >= search.max_count {
            break;
        }
        let u = match bracketed_newton(g0, dg0, a, b, opts) {
            Ok(u) => u,
            Err(e) => {
                set.warnings
                    .push(format!("real root in [{a}, {b}] dropped: {e}"));
                continue;
            }
        };
        let seed = Complex64::new(2.0 * u / length, 0.0);
        match continue_pole(length, x, seed) {
            Some(k) => positive.push(k),
            None => set.warnings.push(format!(
                "pole seeded at u = {u} did not converge for x = {x}"
            )),
        }
    }

    let mut ks: Vec<Complex64> = positive.iter().flat_map(|&k| [k, -k]).collect();
    ks.sort_by(|a, b| a.re.total_cmp(&b.re));
    let radius = contour_radius(&ks, length);
    set.poles = ks
        .into_iter()
        .map(|k| Pole {
            k,
            abs_g: denominator(length, x, k).norm(),
            residue: numerator(length, x, k) / denominator_derivative(length, x, k),
            residue_contour: contour_residue(length, x, k, radius),
        })
        .collect();
    Ok(set)
}

fn newton(length: f64, x: f64, mut k: Complex64) -> Option<Complex64> {
    for _ in 0..NEWTON_MAX_ITER {
        let g = denominator(length, x, k);
        if g.norm() < 1e-15 {
            return Some(k);
        }
        let step = g / denominator_derivative(length, x, k);
        if !step.is_finite() {
            return None;
        }
        k -= step;
        if step.norm() < 1e-15 * k.norm().max(1.0) {
            break;
        }
    }
    (denominator(length, x, k).norm() < POLE_RESIDUAL).then_some(k)
}

fn continue_pole(length: f64, x: f64, seed: Complex64) -> Option<Complex64> {
    let mut k = newton(length, 0.0, seed)?;
    if x == 0.0 {
        return Some(k);
    }
    for s in 1..=CONTINUATION_STEPS {
        let xs = x * f64::from(s) / f64::from(CONTINUATION_STEPS);
        k = newton(length, xs, k)?;
    }
    Some(k)
}

fn contour_radius(ks: &[Complex64], length: f64) -> f64 {
    let mut nearest = 0.5 / length;
    for (i, a) in ks.iter().enumerate() {
        // k = 0 is a regular point but still keep the circle away from it
        nearest = nearest.min(0.25 * a.norm());
        for b in &ks[i + 1..] {
            nearest = nearest.min(0.25 * (a - b).norm());
        }
    }
    nearest
}

/// `(1/2pi i) \oint f dk` on the circle `|k - center| = radius`.
pub fn contour_residue(length: f64, x: f64, center: Complex64, radius: f64) -> Complex64 {
    let n = CONTOUR_NODES as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..CONTOUR_NODES {
        let w = Complex64::from_polar(radius, std::f64::consts::TAU * j as f64 / n);
        let k = center + w;
        acc += numerator(length, x, k) / denominator(length, x, k) * w;
    }
    acc / n
}

fn cosh_factor(x_bar: f64, length: f64) -> f64 {
    (2.0 * (x_bar / (2.0 * length)).sqrt() - (length / (2.0 * x_bar)).sqrt()).cosh()
}

/// `(2/2m*) (n1^2 - n1^4/2) C_1 C_2 cosh(2 sqrt(x/2L) - sqrt(L/2x)) exp(-alpha L n1^2 L/(2x))`.
pub fn t_if_magnitude(tp: &TransferParams) -> Result<f64> {
    tp.validate()?;
    let n2 = tp.n1 * tp.n1;
    let prefactor = 2.0 / (2.0 * tp.m_star) * (n2 - 0.5 * n2 * n2);
    let decay = (-tp.alpha * tp.length * n2 * tp.length / (2.0 * tp.x_bar)).exp();
    Ok(prefactor * tp.c1 * tp.c2 * cosh_factor(tp.x_bar, tp.length) * decay)
}

/// The `n1 -> 1` form exactly as usually quoted:
/// `(C_1 C_2/m*) cosh(..) exp(-alpha L L/(2x))`. It carries prefactor 1 where
/// [`t_if_magnitude`] at `n1 = 1` gives `1/2`, so the two differ by exactly 2.
pub fn t_if_limit(tp: &TransferParams) -> Result<f64> {
    tp.validate()?;
    let decay = (-tp.alpha * tp.length * tp.length / (2.0 * tp.x_bar)).exp();
    Ok(tp.c_tilde() * cosh_factor(tp.x_bar, tp.length) * decay)
}

fn positive_field(e: f64) -> Result<()> {
    if e > 0.0 && e.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("field must be > 0, got {e}")))
    }
}

/// Soliton pair separation `(2 Delta_s / e*) / E`.
pub fn pair_separation(delta_s: f64, e_star: f64, e_field: f64) -> Result<f64> {
    positive_field(e_field)?;
    Ok(2.0 * delta_s / e_star / e_field)
}

/// `L / x_bar ~ c_v E_T / E`.
pub fn field_ratio(c_v: f64, e_t: f64, e_field: f64) -> Result<f64> {
    positive_field(e_field)?;
    Ok(c_v * e_t / e_field)
}

/// `C~_1 cosh(sqrt(2E/(E_T c_v)) - sqrt(E_T c_v/E)) exp(-E_T c_v/E)`.
pub fn current(c_tilde: f64, e_t: f64, c_v: f64, e_field: f64) -> Result<f64> {
    positive_field(e_field)?;
    let threshold = e_t * c_v;
    Ok(sspair_law(c_tilde, threshold, e_field))
}

/// I-E law with `E_T c_v` folded into one effective threshold.
pub(crate) fn sspair_law(amplitude: f64, threshold: f64, e_field: f64) -> f64 {
    let r = threshold / e_field;
    amplitude * ((2.0 / r).sqrt() - r.sqrt()).cosh() * (-r).exp()
}

pub fn current_curve(c_tilde: f64, e_t: f64, c_v: f64, grid: &[f64]) -> Result<CurveSeries> {
    if !(e_t > 0.0 && c_v > 0.0) {
        return Err(Error::domain("E_T and c_v must be > 0"));
    }
    let mut out = Vec::with_capacity(grid.len());
    for (i, &e) in grid.iter().enumerate() {
        if !(e > 0.0 && e.is_finite()) {
            return Err(Error::domain(format!(
                "grid point {i} is not positive: E = {e}"
            )));
        }
        out.push(current(c_tilde, e_t, c_v, e)?);
    }
    Ok(
        CurveSeries::new("sspair current", "E", grid.to_vec(), "eq47")?
            .with_column("I", out)?
            .with_param("c_tilde", c_tilde)
            .with_param("e_t", e_t)
            .with_param("c_v", c_v),
    )
}

/// The matrix element as a function of field: [`t_if_magnitude`] with
/// `x_bar = L / field_ratio(E)`.
pub fn matrix_element_current(tp: &TransferParams, e_field: f64) -> Result<f64> {
    let ratio = field_ratio(tp.c_v, tp.e_t, e_field)?;
    t_if_magnitude(&TransferParams {
        x_bar: tp.length / ratio,
        ..*tp
    })
}
