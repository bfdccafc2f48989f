//! Subcommand dispatch. Each subcommand writes one or more CSV files plus a
//! `key=value` summary next to the first of them (`<stem>.summary`).

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use cdwlab_core::fit::{self, Model};
use cdwlab_core::pair_production::{self, rate_curve};
use cdwlab_core::profile::{self, ModeWeight, PhaseShape, ProfileSpec, Reference};
use cdwlab_core::series::{format_value, read_series, write_series};
use cdwlab_core::transfer::{self, PoleSearch, TransferParams};
use cdwlab_core::vacuum::{self, PotentialParams};
use cdwlab_core::{CurveSeries, Error};

use crate::config::{CliError, RunConfig};

#[derive(Debug, Default)]
pub struct Outcome {
    pub summary: Vec<(String, String)>,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    fn put(&mut self, key: &str, value: impl Render) {
        self.summary.push((key.to_string(), value.render()));
    }

    pub fn summary_text(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.summary {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }

    fn emit(&mut self, series: &CurveSeries, path: PathBuf) -> Result<(), CliError> {
        write_series(series, &path)?;
        self.files.push(path);
        Ok(())
    }
}

/// Summary values: floats use the same 17-digit form as the CSV files.
trait Render {
    fn render(&self) -> String;
}

impl Render for f64 {
    fn render(&self) -> String {
        format_value(*self)
    }
}

macro_rules! render_display {
    ($($t:ty),*) => {$(
        impl Render for $t {
            fn render(&self) -> String {
                self.to_string()
            }
        }
    )*};
}
render_display!(usize, bool, &str, String, &String);

pub fn execute(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut out = match cfg.subcommand.as_str() {
        "vacua" => vacua(cfg)?,
        "profile" => profile_cmd(cfg)?,
        "spectrum" => spectrum(cfg)?,
        "tif" => tif(cfg)?,
        "poles" => poles(cfg)?,
        "iv-curve" => iv_curve(cfg)?,
        "zener" => zener(cfg)?,
        "fit" => fit_cmd(cfg)?,
        "pairprod" => pairprod(cfg)?,
        "compare" => compare(cfg)?,
        other => return Err(CliError::Usage(format!("unknown subcommand {other:?}"))),
    };
    if let Some(first) = out.files.first() {
        let path = first.with_extension("summary");
        std::fs::write(&path, out.summary_text())
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        out.files.push(path);
    }
    Ok(out)
}

fn vacua(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = PotentialParams::new(
        cfg.f64_or("d_omega2", 1.0)?,
        cfg.f64_or("mu_e", 0.009782)?,
        cfg.f64_or("theta", TAU)?,
        cfg.f64_or("epsilon_plus", 1e-5)?,
    )?;
    let grid = cfg.grid_or("grid", "-0.5:6.8:200")?;
    let s = vacuum::solve_vacua(&p)?;
    let thin = vacuum::thin_wall_check(&p);

    let mut o = Outcome::default();
    o.put("phi_f", s.phi_f);
    o.put("phi_t", s.phi_t);
    o.put("residual_f", s.residual_f);
    o.put("residual_t", s.residual_t);
    o.put("gap_direct", s.gap_direct);
    o.put("gap_bracket", s.gap_bracket);
    o.put("bracket_a", s.bracket_a);
    o.put("bracket_b", s.bracket_b);
    o.put("thin_wall_ratio", thin.ratio);
    o.put("thin_wall_pass", thin.pass);
    if let Ok(scales) = vacuum::derive_scales(s.gap_direct) {
        o.put("length", scales.length);
        o.put("alpha", scales.alpha);
    }

    let phi = grid.points();
    let v = phi
        .iter()
        .map(|&x| vacuum::potential_value(&p, x))
        .collect::<Result<Vec<_>, _>>()?;
    let series = CurveSeries::new("potential", "phi", phi, "eq3")?
        .with_column("V", v)?
        .with_param("d_omega2", p.d_omega2)
        .with_param("mu_e", p.mu_e)
        .with_param("theta", p.theta)
        .with_param("epsilon_plus", p.epsilon_plus);
    o.emit(&series, cfg.out_or("vacua.csv"))?;
    Ok(o)
}

fn profile_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let spec = ProfileSpec::new(
        cfg.f64_or("b", 10.0)?,
        cfg.f64_or("x_a", -0.5)?,
        cfg.f64_or("x_b", 0.5)?,
    )?;
    let alpha = cfg.f64_or("alpha", 1.0)?;
    let grid = cfg.grid_or("grid", "-2:2:401")?;
    let shape = PhaseShape::Tanh(spec);
    let half_width = profile::default_half_width(&shape) + spec.center().abs();
    let action =
        profile::action_position_space(alpha, &shape, &Reference::Constant(0.0), half_width)?;

    let mut o = Outcome::default();
    o.put("length", spec.length());
    o.put("phi_center", profile::phase_profile(&spec, spec.center()));
    o.put("action_position", action);

    let x = grid.points();
    let phi = x
        .iter()
        .map(|&x| profile::phase_profile(&spec, x))
        .collect();
    let series = CurveSeries::new("phase profile", "x", x, "eq2")?
        .with_column("phi", phi)?
        .with_param("b", spec.b)
        .with_param("x_a", spec.x_a)
        .with_param("x_b", spec.x_b);
    o.emit(&series, cfg.out_or("profile.csv"))?;
    Ok(o)
}

fn spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let length = cfg.f64_or("length", 1.0)?;
    let n_max = cfg.usize_or("n_max", 4096)?;
    let n1 = cfg.f64_or("n1", 0.9)?;
    let grid = profile::build_mode_grid(length, n_max, n1)?;
    let full = profile::action_momentum_space(&grid, ModeWeight::Full);
    let residual = profile::action_momentum_space(&grid, ModeWeight::Residual);
    let shape = PhaseShape::IdealBox { length };
    let position = profile::action_position_space(
        1.0 / length,
        &shape,
        &Reference::Constant(0.0),
        5.0 * length,
    )?;

    let mut o = Outcome::default();
    o.put("n_max", n_max);
    o.put("action_momentum_full", full);
    o.put("action_momentum_residual", residual);
    o.put("action_position_box", position);
    o.put("ratio", full / position);

    let series = CurveSeries::new("mode coefficients", "k", grid.k.clone(), "eq29")?
        .with_column("phi_k", grid.coefficients.clone())?
        .with_param("length", length)
        .with_param("n_max", n_max)
        .with_param("n1", n1);
    o.emit(&series, cfg.out_or("spectrum.csv"))?;
    Ok(o)
}

fn transfer_params(cfg: &RunConfig) -> Result<TransferParams, CliError> {
    let d = TransferParams::default();
    Ok(TransferParams {
        m_star: cfg.f64_or("m_star", d.m_star)?,
        n1: cfg.f64_or("n1", d.n1)?,
        alpha: cfg.f64_or("alpha", d.alpha)?,
        length: cfg.f64_or("length", d.length)?,
        x_bar: cfg.f64_or("x_bar", d.x_bar)?,
        c1: cfg.f64_or("c1", d.c1)?,
        c2: cfg.f64_or("c2", d.c2)?,
        ..d
    })
}

fn tif(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let tp = transfer_params(cfg)?;
    let grid = cfg.grid_or("grid", "0.05:5:100")?;
    let mut o = Outcome::default();
    let t = transfer::t_if_magnitude(&tp)?;
    let limit = transfer::t_if_limit(&tp)?;
    o.put("t_if", t);
    o.put("t_if_limit", limit);
    if t > 0.0 {
        o.put("limit_ratio", limit / t);
    }

    let xs = grid.points();
    let ts = xs
        .iter()
        .map(|&x| transfer::t_if_magnitude(&TransferParams { x_bar: x, ..tp }))
        .collect::<Result<Vec<_>, _>>()?;
    let series = CurveSeries::new("matrix element", "x_bar", xs, "eq42")?
        .with_column("T", ts)?
        .with_param("m_star", tp.m_star)
        .with_param("n1", tp.n1)
        .with_param("alpha", tp.alpha)
        .with_param("length", tp.length)
        .with_param("c1", tp.c1)
        .with_param("c2", tp.c2);
    o.emit(&series, cfg.out_or("tif.csv"))?;
    Ok(o)
}

fn poles(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let length = cfg.f64_or("length", 1.0)?;
    let x = cfg.f64_or("x", 0.0)?;
    let d = PoleSearch::default();
    let search = PoleSearch {
        re_u_min: cfg.f64_or("u_min", d.re_u_min)?,
        re_u_max: cfg.f64_or("u_max", d.re_u_max)?,
        scan_cells: cfg.usize_or("scan_cells", d.scan_cells)?,
        max_count: cfg.usize_or("max_count", d.max_count)?,
    };
    let set = transfer::find_poles(length, x, search)?;
    let mut o = Outcome::default();
    o.put("count", set.poles.len());
    let worst = set
        .poles
        .iter()
        .map(|p| (p.residue - p.residue_contour).norm() / p.residue.norm())
        .fold(0.0, f64::max);
    o.put("max_residue_mismatch", worst);
    for (i, w) in set.warnings.iter().enumerate() {
        o.put(&format!("warning_{i}"), w);
    }
    o.emit(&set.to_series(length, x)?, cfg.out_or("poles.csv"))?;
    Ok(o)
}

fn field_points(cfg: &RunConfig, default: &str) -> Result<Vec<f64>, CliError> {
    match cfg.opt_f64("e_field")? {
        Some(e) => Ok(vec![e]),
        None => Ok(cfg.grid_or("grid", default)?.points()),
    }
}

fn iv_curve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let c_tilde = cfg.f64_or("c_tilde", 1.0)?;
    let e_t = cfg.f64_or("e_t", 1.0)?;
    let c_v = cfg.f64_or("c_v", 1.0)?;
    let es = field_points(cfg, "0.05:20:200")?;
    let series = transfer::current_curve(c_tilde, e_t, c_v, &es)?;
    let mut o = Outcome::default();
    o.put("points", series.len());
    o.put(
        "current_at_threshold",
        transfer::current(c_tilde, e_t, c_v, e_t * c_v)?,
    );
    o.emit(&series, cfg.out_or("iv-curve.csv"))?;
    Ok(o)
}

fn zener(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let zp = fit::ZenerParams::new(cfg.f64_or("g_p", 1.0)?, cfg.f64_or("e_t", 1.0)?)?;
    let es = field_points(cfg, "0.05:20:200")?;
    if let Some(i) = es.iter().position(|e| !(*e >= 0.0)) {
        return Err(Error::Domain(format!("grid point {i} is negative")).into());
    }
    let series = Model::Zener.curve(zp.g_p, zp.e_t, &es)?;
    let mut o = Outcome::default();
    o.put("points", series.len());
    o.emit(&series, cfg.out_or("zener.csv"))?;
    Ok(o)
}

fn fit_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let model: Model = cfg
        .get("model")
        .unwrap_or("zener")
        .parse()
        .map_err(|e: Error| CliError::Usage(e.to_string()))?;
    let data_path = cfg
        .get("data")
        .ok_or_else(|| CliError::Usage("fit requires --data <E,I csv>".into()))?;
    let data = read_series(data_path)?;
    let seeds = match cfg.get("seeds") {
        Some(_) => cfg.grid_or("seeds", "")?.points(),
        None => fit::default_seed_grid(&data),
    };
    let result = fit::fit_curve(model, &data, &seeds)?;
    let mut o = Outcome::default();
    for line in result.report().lines() {
        if let Some((k, v)) = line.split_once('=') {
            o.put(k, v);
        }
    }
    let fitted = model
        .curve(result.amplitude(), result.threshold(), data.x())?
        .with_param("data", data_path);
    o.emit(&fitted, cfg.out_or("fit.csv"))?;
    Ok(o)
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("pairprod");
    let ext = path.extension().and_then(|s| s.to_str()).unwrap_or("csv");
    path.with_file_name(format!("{stem}_{suffix}.{ext}"))
}

fn pairprod(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = cfg.grid_or("grid", "0.02:1:100")?;
    let n_max = cfg.usize_or("n_max", 200)?;
    let out = cfg.out_or("pairprod.csv");
    let dims: Vec<u8> = match cfg.get("dim") {
        Some(d) => vec![d
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("dim: expected 1, 2 or 3, got {d:?}")))?],
        None => vec![1, 3],
    };
    let es = grid.points();
    let mut o = Outcome::default();
    for &d in &dims {
        let series = rate_curve(d, &es, n_max)?;
        if let Ok(r2) = pair_production::linearity_metric(&series) {
            o.put(&format!("linearity_d{d}"), r2);
        }
        o.put(
            &format!("last_w_d{d}"),
            series.y().last().copied().unwrap_or(f64::NAN),
        );
        let path = if dims.len() == 1 {
            out.clone()
        } else {
            suffixed(&out, &format!("d{d}"))
        };
        o.emit(&series, path)?;
    }
    Ok(o)
}

fn compare(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let e_t = cfg.f64_or("e_t", 1.0)?;
    let (a, b) = match (cfg.get("a"), cfg.get("b")) {
        (Some(a), Some(b)) => (read_series(a)?, read_series(b)?),
        (None, None) => {
            let es = cfg.grid_or("grid", "1.05:10:100")?.points();
            let a = transfer::current_curve(
                cfg.f64_or("c_tilde", 1.0)?,
                e_t,
                cfg.f64_or("c_v", 1.0)?,
                &es,
            )?;
            let b = Model::Zener.curve(cfg.f64_or("g_p", 1.0)?, e_t, &es)?;
            (a, b)
        }
        _ => {
            return Err(CliError::Usage(
                "compare needs both --a and --b, or neither".into(),
            ))
        }
    };
    let c = fit::compare_curves(&a, &b)?;
    let mut o = Outcome::default();
    o.put("rmse", c.rmse);
    o.put("max_rel_diff", c.max_rel_diff);
    o.emit(&c.overlay, cfg.out_or("compare.csv"))?;
    Ok(o)
}
