//! Acceptance checks, one test per criterion. Each prints a single
//! `PASS`/`FAIL` line (run with `--nocapture` to see them) before asserting.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use cdwlab_core::fit::{self, Model, ZenerParams};
use cdwlab_core::pair_production::{self, PairProductionParams};
use cdwlab_core::profile::{self, ModeWeight, PhaseShape, Reference};
use cdwlab_core::series::{read_series, write_series};
use cdwlab_core::special::erf;
use cdwlab_core::transfer::{self, PoleSearch, TransferParams};
use cdwlab_core::vacuum::{self, GapMethod, PotentialParams};
use cdwlab_core::wavefunctional::{self, Branch, WavefunctionalParams};
use cdwlab_core::{CurveSeries, Grid};
use num_complex::Complex64;

fn report(id: u32, name: &str, checks: &[(String, bool)]) {
    let ok = checks.iter().all(|(_, p)| *p);
    let detail: Vec<&str> = checks
        .iter()
        .filter(|(_, p)| !ok || !*p)
        .map(|(s, _)| s.as_str())
        .collect();
    if ok {
        println!("PASS {id:>2} {name}");
    } else {
        println!("FAIL {id:>2} {name}: {}", detail.join("; "));
    }
    for (what, pass) in checks {
        assert!(pass, "criterion {id} ({name}): {what}");
    }
}

fn check(what: impl Into<String>, pass: bool) -> (String, bool) {
    (what.into(), pass)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn criterion_01_gap_reproduction() {
    let start = Instant::now();
    let p = PotentialParams::new(1.0, 0.009782, TAU, 1e-5).unwrap();
    let s = vacuum::solve_vacua(&p).unwrap();
    let gap = vacuum::energy_gap(&p, &s, GapMethod::Direct).unwrap();
    let elapsed = start.elapsed();
    report(
        1,
        "gap reproduction",
        &[
            check(
                format!("gap_direct {gap:.6} within 5% of 0.373"),
                rel(gap, 0.373) < 0.05,
            ),
            check(
                format!("|phi_t - 2pi| = {:.2e}", (s.phi_t - TAU).abs()),
                (s.phi_t - TAU).abs() < 1e-3,
            ),
            check(
                format!("runtime {elapsed:?}"),
                elapsed < Duration::from_secs(1),
            ),
        ],
    );
}

#[test]
fn criterion_02_route_consistency() {
    let checks: Vec<_> = [0.002, 0.009782, 0.02]
        .iter()
        .map(|&mu| {
            let p = PotentialParams::new(1.0, mu, TAU, 1e-5).unwrap();
            let s = vacuum::solve_vacua(&p).unwrap();
            let r = rel(s.gap_bracket, s.gap_direct);
            check(
                format!(
                    "mu_e={mu}: direct {:.6} bracket {:.6} ({:.1}%)",
                    s.gap_direct,
                    s.gap_bracket,
                    100.0 * r
                ),
                r < 0.05,
            )
        })
        .collect();
    report(2, "route consistency", &checks);
}

#[test]
fn criterion_03_series_closed_form() {
    let grid = Grid::linear(0.2, 5.0, 50).unwrap().points();
    let worst = grid
        .iter()
        .map(|&e| {
            let series =
                pair_production::rate(&PairProductionParams::new(1, e, 200).unwrap()).unwrap();
            (series - pair_production::rate_1d_closed(e).unwrap()).abs()
        })
        .fold(0.0, f64::max);
    let half = pair_production::rate_1d_closed(PI / 2f64.ln()).unwrap();
    report(
        3,
        "series/closed-form identity",
        &[
            check(
                format!("max |series - closed| = {worst:.2e}"),
                worst < 1e-12,
            ),
            check(
                format!("closed(pi/ln2) - 0.5 = {:.2e}", half - 0.5),
                (half - 0.5).abs() < 1e-15,
            ),
        ],
    );
}

#[test]
fn criterion_04_dimensional_specialization() {
    let w3 = pair_production::rate(&PairProductionParams::new(3, 1.0, 200).unwrap()).unwrap();
    let literal = pair_production::rate_3d_literal(1.0, 200);
    let grid = Grid::linear(0.05, 1.0, 50).unwrap().points();
    let r1 =
        pair_production::linearity_metric(&pair_production::rate_curve(1, &grid, 200).unwrap())
            .unwrap();
    let r3 =
        pair_production::linearity_metric(&pair_production::rate_curve(3, &grid, 200).unwrap())
            .unwrap();
    report(
        4,
        "dimensional specialization",
        &[
            check(
                format!("w(D=3, E=1) = {w3:.7e}"),
                (w3 - 3.5227e-4).abs() < 1e-7,
            ),
            check(
                format!("literal form differs by {:.1e} rel", rel(w3, literal)),
                rel(w3, literal) < 1e-14,
            ),
            check(format!("linearity w1 {r1:.4} > w3 {r3:.4}"), r1 > r3),
        ],
    );
}

#[test]
fn criterion_05_spectral_consistency() {
    let ratios: Vec<f64> = [0.5, 1.0, 2.0]
        .iter()
        .map(|&l| {
            let g = profile::build_mode_grid(l, 4096, 0.0).unwrap();
            let m = profile::action_momentum_space(&g, ModeWeight::Full);
            let shape = PhaseShape::IdealBox { length: l };
            let p =
                profile::action_position_space(1.0 / l, &shape, &Reference::Constant(0.0), 5.0 * l)
                    .unwrap();
            m / p
        })
        .collect();
    let spread = ratios
        .iter()
        .map(|r| rel(*r, ratios[1]))
        .fold(0.0, f64::max);
    let at_zero = profile::mode_coefficient(1.0, 0.0);
    let jump = [1e-9, -1e-9, 1e-7, -1e-7]
        .iter()
        .map(|&k| (profile::mode_coefficient(1.0, k) - at_zero).abs())
        .fold(0.0, f64::max);
    report(
        5,
        "spectral consistency",
        &[
            check(
                format!("ratios {ratios:?}, spread {:.2e}", spread),
                spread < 0.01,
            ),
            check(
                format!("mode coefficient jump near k=0 {jump:.1e}"),
                jump < 1e-12,
            ),
        ],
    );
}

#[test]
fn criterion_06_kernel_and_poles() {
    let f = transfer::f_kernel(1.0, 0.0, Complex64::new(PI, 0.0)).unwrap();
    let set = transfer::find_poles(1.0, 0.0, PoleSearch::default()).unwrap();
    let first = set
        .poles
        .iter()
        .filter(|p| p.k.re > 0.0)
        .min_by(|a, b| a.k.re.total_cmp(&b.k.re))
        .expect("at least one pole");
    let u = first.k.re / 2.0;
    let worst = set
        .poles
        .iter()
        .map(|p| (p.residue - p.residue_contour).norm() / p.residue.norm())
        .fold(0.0, f64::max);
    report(
        6,
        "kernel and poles",
        &[
            check(
                format!("f(pi) - pi = {:.1e}", (f - PI).norm()),
                (f - Complex64::new(PI, 0.0)).norm() < 1e-12,
            ),
            check(format!("first pole u* = {u:.6}"), (u - 1.1656).abs() < 1e-4),
            check(
                format!("|g(k*)| = {:.1e}", first.abs_g),
                first.abs_g < 1e-10,
            ),
            check(format!("residue mismatch {worst:.1e}"), worst < 1e-6),
        ],
    );
}

#[test]
fn criterion_07_matrix_element() {
    let tp = TransferParams {
        m_star: 1.0,
        c1: 1.0,
        c2: 1.0,
        alpha: 1.0,
        length: 1.0,
        x_bar: 1.0,
        n1: 1.0,
        ..TransferParams::default()
    };
    let t = transfer::t_if_magnitude(&tp).unwrap();
    let ratio = transfer::t_if_limit(&tp).unwrap() / t;
    report(
        7,
        "matrix element",
        &[
            check(format!("T_IF = {t:.7}"), (t - 0.38229).abs() < 1e-5),
            check(format!("limit ratio = {ratio}"), ratio == 2.0),
        ],
    );
}

#[test]
fn criterion_08_current_law() {
    let (c_tilde, e_t, c_v) = (1.7, 0.8, 1.25);
    let threshold = c_v * e_t;
    let at_t = transfer::current(c_tilde, e_t, c_v, threshold).unwrap();
    let low = transfer::current(c_tilde, e_t, c_v, 0.05 * threshold).unwrap();
    let grid = Grid::linear(threshold, 20.0 * threshold, 100)
        .unwrap()
        .points();
    let curve = transfer::current_curve(c_tilde, e_t, c_v, &grid).unwrap();
    let monotone = curve.y().windows(2).all(|w| w[1] > w[0]);
    report(
        8,
        "I-E law",
        &[
            check(
                format!("I(threshold)/C = {:.6}", at_t / c_tilde),
                (at_t / c_tilde - 0.39989).abs() < 1e-4,
            ),
            check(
                format!("I(0.05 threshold)/C = {:.2e}", low / c_tilde),
                low < 1e-6 * c_tilde,
            ),
            check("monotone increasing above threshold", monotone),
        ],
    );
}

#[test]
fn criterion_09_fit_round_trips() {
    let grid = Grid::linear(0.5, 10.0, 40).unwrap().points();
    let (g_p, e_t) = (2.5, 1.5);
    let clean = Model::Zener.curve(g_p, e_t, &grid).unwrap();
    let exact = fit::fit_curve(Model::Zener, &clean, &fit::default_seed_grid(&clean)).unwrap();

    let noisy = fit::with_multiplicative_noise(&clean, 0.01, 42);
    let rough = fit::fit_curve(Model::Zener, &noisy, &fit::default_seed_grid(&noisy)).unwrap();

    let ss = Model::SsPair.curve(1.3, 2.0, &grid).unwrap();
    let ss_fit = fit::fit_curve(Model::SsPair, &ss, &fit::default_seed_grid(&ss)).unwrap();

    let zp = ZenerParams::new(g_p, e_t).unwrap();
    assert_eq!(clean.y()[7], fit::zener_current(&zp, grid[7]));
    report(
        9,
        "fit round trips",
        &[
            check(
                format!(
                    "zener clean G_P {:.9} E_T {:.9}",
                    exact.amplitude(),
                    exact.threshold()
                ),
                (exact.amplitude() - g_p).abs() < 1e-6 && (exact.threshold() - e_t).abs() < 1e-6,
            ),
            check(
                format!("zener 1% noise E_T {:.5}", rough.threshold()),
                rel(rough.threshold(), e_t) < 0.05,
            ),
            check(
                format!("sspair threshold {:.9}", ss_fit.threshold()),
                (ss_fit.threshold() - 2.0).abs() < 1e-6,
            ),
        ],
    );
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

// Maclaurin series of erf, summed with 60 terms.
fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    for n in 1..60 {
        term *= -x * x / n as f64;
        sum += term / (2 * n + 1) as f64;
    }
    2.0 / PI.sqrt() * sum
}

#[test]
fn criterion_10_normalization() {
    let mut worst_norm: f64 = 0.0;
    for &(alpha, l, n1) in &[
        (1.0, 1.0, 0.5),
        (0.38, 2.64, 0.9),
        (2.0, 0.7, 0.2),
        (1.0, 1.0, 1.0),
    ] {
        let p = WavefunctionalParams::new(alpha, l, n1).unwrap();
        let b = wavefunctional::integration_limit(l);
        for br in [Branch::Initial, Branch::Final] {
            let norm = simpson(|x| p.psi(br, x).powi(2), 0.0, b, 20_000);
            worst_norm = worst_norm.max((norm - 1.0).abs());
        }
    }
    let worst_erf = (0..=400)
        .map(|i| -2.0 + 0.01 * i as f64)
        .map(|x| (erf(x) - erf_series(x)).abs())
        .fold(0.0, f64::max);
    report(
        10,
        "normalization",
        &[
            check(
                format!("max |norm - 1| = {worst_norm:.1e}"),
                worst_norm < 1e-10,
            ),
            check(
                format!("max |erf - series| = {worst_erf:.1e}"),
                worst_erf < 1e-12,
            ),
        ],
    );
}

fn sample_outputs() -> Vec<CurveSeries> {
    let grid = Grid::linear(0.05, 20.0, 200).unwrap().points();
    vec![
        transfer::current_curve(1.0, 1.0, 1.0, &grid).unwrap(),
        Model::Zener.curve(1.0, 1.0, &grid).unwrap(),
        pair_production::rate_curve(3, &Grid::linear(0.02, 1.0, 100).unwrap().points(), 200)
            .unwrap(),
        transfer::find_poles(1.0, 0.3, PoleSearch::default())
            .unwrap()
            .to_series(1.0, 0.3)
            .unwrap(),
    ]
}

#[test]
fn criterion_11_determinism_and_runtime() {
    let start = Instant::now();
    let dir = std::env::temp_dir().join(format!("cdwlab-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut identical = true;
    for (i, (a, b)) in sample_outputs()
        .iter()
        .zip(sample_outputs().iter())
        .enumerate()
    {
        let pa = dir.join(format!("{i}a.csv"));
        let pb = dir.join(format!("{i}b.csv"));
        write_series(a, &pa).unwrap();
        write_series(b, &pb).unwrap();
        write_series(&read_series(&pb).unwrap(), &pb).unwrap();
        identical &= std::fs::read(&pa).unwrap() == std::fs::read(&pb).unwrap();
    }
    std::fs::remove_dir_all(&dir).ok();
    let elapsed = start.elapsed();
    report(
        11,
        "determinism and runtime",
        &[
            check("repeated CSV writes are byte-identical", identical),
            check(
                format!("runtime {elapsed:?}"),
                elapsed < Duration::from_secs(60),
            ),
        ],
    );
}
