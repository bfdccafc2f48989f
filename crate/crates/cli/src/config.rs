//! Run configuration: defaults < config file < command line.
//!
//! The config file is plain `key=value`, one pair per line, `#` starts a
//! comment. A bare key applies to the subcommand being run and must be one of
//! its keys; `subcommand.key` applies only to that subcommand.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::parser::ValueSource;
use clap::{Arg, ArgMatches, Command};
use thiserror::Error;

use cdwlab_core::Grid;

pub const CONFIG_ENV: &str = "CDWLAB_CONFIG";

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad invocation; exit code 2.
    #[error("{0}")]
    Usage(String),
    /// `--help` / `--version` output; exit code 0.
    #[error("{0}")]
    Info(String),
    /// Computation or I/O failure; exit code 1.
    #[error("{0}")]
    Compute(#[from] cdwlab_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Info(_) => 0,
            CliError::Compute(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

pub struct Subcommand {
    pub name: &'static str,
    pub about: &'static str,
    /// `(key, help)`; keys are written with dashes.
    pub keys: &'static [(&'static str, &'static str)],
}

const OUT: (&str, &str) = ("out", "output CSV path");

pub const SUBCOMMANDS: &[Subcommand] = &[
    Subcommand {
        name: "vacua",
        about: "Solve false/true vacua and the energy gap by both routes",
        keys: &[
            ("d-omega2", "potential energy scale D w_p^2 [1]"),
            ("mu-e", "pinning coefficient mu_E [0.009782]"),
            ("theta", "bias phase theta in radians [2pi]"),
            ("epsilon-plus", "small positive offset [1e-5]"),
            ("grid", "phase grid for the potential curve [-0.5:6.8:200]"),
            OUT,
        ],
    },
    Subcommand {
        name: "profile",
        about: "Sample the thin-wall soliton pair phase profile",
        keys: &[
            ("b", "wall steepness [10]"),
            ("x-a", "first wall center [-0.5]"),
            ("x-b", "second wall center [0.5]"),
            ("alpha", "action prefactor [1]"),
            ("grid", "position grid [-2:2:401]"),
            OUT,
        ],
    },
    Subcommand {
        name: "spectrum",
        about: "Mode-grid coefficients, action sums and the momentum/position ratio",
        keys: &[
            ("length", "box length L [1]"),
            ("n-max", "mode count [4096]"),
            ("n1", "sub-box height fraction [0.9]"),
            OUT,
        ],
    },
    Subcommand {
        name: "tif",
        about: "Sweep the tunneling matrix element over the reference length x_bar",
        keys: &[
            ("m-star", "effective mass [1]"),
            ("n1", "height fraction [1]"),
            ("alpha", "inverse length alpha [1]"),
            ("length", "pair separation L [1]"),
            ("x-bar", "reference length for the summary [1]"),
            ("c1", "normalization C_1 [1]"),
            ("c2", "normalization C_2 [1]"),
            ("grid", "x_bar grid [0.05:5:100]"),
            OUT,
        ],
    },
    Subcommand {
        name: "poles",
        about: "Locate kernel poles and their residues",
        keys: &[
            ("length", "pair separation L [1]"),
            ("x", "observation point x [0]"),
            ("u-min", "lower end of the Re(u) window [0]"),
            ("u-max", "upper end of the Re(u) window [20]"),
            ("scan-cells", "sign-scan subintervals [200]"),
            ("max-count", "positive poles kept [all]"),
            OUT,
        ],
    },
    Subcommand {
        name: "iv-curve",
        about: "Soliton-pair I-E curve",
        keys: &[
            ("c-tilde", "amplitude C~_1 [1]"),
            ("e-t", "threshold field E_T [1]"),
            ("c-v", "proportionality factor c_v [1]"),
            ("grid", "field grid [0.05:20:200]"),
            ("e-field", "single field value (replaces the grid)"),
            OUT,
        ],
    },
    Subcommand {
        name: "zener",
        about: "Zener current law",
        keys: &[
            ("g-p", "prefactor G_P [1]"),
            ("e-t", "threshold field E_T [1]"),
            ("grid", "field grid [0.05:20:200]"),
            ("e-field", "single field value (replaces the grid)"),
            OUT,
        ],
    },
    Subcommand {
        name: "fit",
        about: "Fit the zener or sspair law to an E,I data file",
        keys: &[
            ("model", "zener | sspair [zener]"),
            ("data", "input CSV with columns E,I (required)"),
            (
                "seeds",
                "threshold seed grid [32 log-spaced over the data range]",
            ),
            OUT,
        ],
    },
    Subcommand {
        name: "pairprod",
        about: "Pair-production rate curves (D = 1 and 3 unless --dim is given)",
        keys: &[
            ("dim", "spatial dimension 1, 2 or 3 [both 1 and 3]"),
            ("grid", "field grid [0.02:1:100]"),
            ("n-max", "series terms [200]"),
            OUT,
        ],
    },
    Subcommand {
        name: "compare",
        about: "Compare two curves (files, or the sspair and zener laws)",
        keys: &[
            ("a", "first E,I CSV [sspair law]"),
            ("b", "second E,I CSV [zener law]"),
            ("c-tilde", "sspair amplitude [1]"),
            ("c-v", "sspair c_v [1]"),
            ("g-p", "zener prefactor [1]"),
            ("e-t", "threshold field [1]"),
            ("grid", "field grid [1.05:10:100]"),
            OUT,
        ],
    },
];

pub fn find_subcommand(name: &str) -> Option<&'static Subcommand> {
    SUBCOMMANDS.iter().find(|s| s.name == name)
}

fn canonical(key: &str) -> String {
    key.trim().replace('-', "_")
}

fn knows(sub: &Subcommand, key: &str) -> bool {
    sub.keys.iter().any(|(k, _)| canonical(k) == key)
}

fn command() -> Command {
    let mut cmd = Command::new("cdwlab")
        .about("Charge-density-wave tunneling numerics")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg(
            Arg::new("config")
                .long("config")
                .global(true)
                .value_name("PATH")
                .help("key=value config file (default: $CDWLAB_CONFIG)"),
        );
    for sub in SUBCOMMANDS {
        let mut sc = Command::new(sub.name).about(sub.about);
        for (key, help) in sub.keys {
            sc = sc.arg(
                Arg::new(*key)
                    .long(*key)
                    .value_name("VALUE")
                    .allow_negative_numbers(true)
                    .help(*help),
            );
        }
        cmd = cmd.subcommand(sc);
    }
    cmd
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub subcommand: String,
    /// Merged overrides keyed by underscore form (`mu_e`).
    pub values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, CliError> {
        self.get(key).map_or(Ok(default), |v| parse_f64(key, v))
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        self.get(key).map_or(Ok(default), |v| {
            v.trim().parse().map_err(|_| {
                CliError::Usage(format!("{key}: expected a non-negative integer, got {v:?}"))
            })
        })
    }

    pub fn opt_f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.get(key).map(|v| parse_f64(key, v)).transpose()
    }

    pub fn grid_or(&self, key: &str, default: &str) -> Result<Grid, CliError> {
        let text = self.get(key).unwrap_or(default);
        text.parse::<Grid>()
            .map_err(|e| CliError::Usage(format!("{key}: {e}")))
    }

    pub fn out_or(&self, default: &str) -> PathBuf {
        PathBuf::from(self.get("out").unwrap_or(default))
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64, CliError> {
    match v.trim() {
        "pi" => Ok(std::f64::consts::PI),
        "2pi" | "tau" => Ok(std::f64::consts::TAU),
        t => t
            .parse()
            .map_err(|_| CliError::Usage(format!("{key}: expected a number, got {v:?}"))),
    }
}

/// Parses `argv` (including the program name). `env_config` is the value of
/// `CDWLAB_CONFIG`, used when no `--config` is given.
pub fn parse_config<I, T>(argv: I, env_config: Option<PathBuf>) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let matches = command().try_get_matches_from(argv).map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CliError::Info(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    })?;
    let (name, sub_matches) = matches
        .subcommand()
        .ok_or_else(|| CliError::Usage("missing subcommand".into()))?;
    let sub = find_subcommand(name)
        .ok_or_else(|| CliError::Usage(format!("unknown subcommand {name:?}")))?;

    let config_path = sub_matches
        .get_one::<String>("config")
        .or_else(|| matches.get_one::<String>("config"))
        .map(PathBuf::from)
        .or(env_config);

    let mut values = BTreeMap::new();
    if let Some(path) = config_path {
        values.extend(read_config_file(&path, sub)?);
    }
    values.extend(command_line_values(sub, sub_matches));
    Ok(RunConfig {
        subcommand: name.to_string(),
        values,
    })
}

fn command_line_values(sub: &Subcommand, m: &ArgMatches) -> Vec<(String, String)> {
    sub.keys
        .iter()
        .filter(|(k, _)| m.value_source(k) == Some(ValueSource::CommandLine))
        .filter_map(|(k, _)| m.get_one::<String>(k).map(|v| (canonical(k), v.clone())))
        .collect()
}

fn read_config_file(path: &Path, sub: &Subcommand) -> Result<Vec<(String, String)>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    parse_config_text(&text, sub).map_err(|e| match e {
        CliError::Usage(m) => CliError::Usage(format!("config {}: {m}", path.display())),
        other => other,
    })
}

pub fn parse_config_text(text: &str, sub: &Subcommand) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("line {}: expected key=value, got {line:?}", no + 1))
        })?;
        let (scope, key) = match key.trim().split_once('.') {
            Some((s, k)) => (Some(s.trim()), canonical(k)),
            None => (None, canonical(key)),
        };
        if key.is_empty() {
            return Err(CliError::Usage(format!("line {}: empty key", no + 1)));
        }
        match scope {
            Some(s) => {
                let target = find_subcommand(s).ok_or_else(|| {
                    CliError::Usage(format!("line {}: unknown subcommand {s:?}", no + 1))
                })?;
                if !knows(target, &key) {
                    return Err(CliError::Usage(format!(
                        "line {}: unknown key {s}.{key}",
                        no + 1
                    )));
                }
                if target.name == sub.name {
                    out.push((key, value.trim().to_string()));
                }
            }
            None => {
                if !knows(sub, &key) {
                    return Err(CliError::Usage(format!(
                        "line {}: unknown key {key:?} for {}",
                        no + 1,
                        sub.name
                    )));
                }
                out.push((key, value.trim().to_string()));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, CliError> {
        let argv = std::iter::once("cdwlab").chain(args.iter().copied());
        parse_config(argv, None)
    }

    #[test]
    fn echo_parse() {
        let cfg = parse(&["vacua", "--mu-e", "0.009782"]).unwrap();
        assert_eq!(cfg.subcommand, "vacua");
        assert_eq!(cfg.get("mu_e"), Some("0.009782"));
        assert_eq!(cfg.values.len(), 1);
    }

    #[test]
    fn log_grid() {
        let cfg = parse(&["pairprod", "--grid", "0.1:10:100:log"]).unwrap();
        let g = cfg.grid_or("grid", "0:1:2").unwrap();
        assert_eq!(g.count, 100);
        assert_eq!(g.scale, cdwlab_core::GridScale::Log);
    }

    #[test]
    fn usage_errors_exit_2() {
        for args in [&["bogus-cmd"][..], &["vacua", "--nope", "1"], &[]] {
            assert_eq!(parse(args).unwrap_err().exit_code(), 2, "{args:?}");
        }
        let cfg = parse(&["vacua", "--mu-e", "abc"]).unwrap();
        assert_eq!(cfg.f64_or("mu_e", 0.0).unwrap_err().exit_code(), 2);
        assert_eq!(parse(&["--help"]).unwrap_err().exit_code(), 0);
    }

    #[test]
    fn negative_values_are_accepted() {
        let cfg = parse(&["profile", "--x-a", "-1.5"]).unwrap();
        assert_eq!(cfg.f64_or("x_a", 0.0).unwrap(), -1.5);
    }

    #[test]
    fn file_values_and_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(
            &path,
            "# comment\nmu_e = 0.015\ntheta=2pi\nprofile.b = 20\n\n",
        )
        .unwrap();
        let argv = ["cdwlab", "vacua", "--mu-e", "0.002"];
        let cfg = parse_config(argv, Some(path.clone())).unwrap();
        assert_eq!(cfg.get("mu_e"), Some("0.002"));
        assert_eq!(cfg.f64_or("theta", 0.0).unwrap(), std::f64::consts::TAU);
        assert_eq!(cfg.get("b"), None);

        let explicit = ["cdwlab", "vacua", "--config", path.to_str().unwrap()];
        assert_eq!(
            parse_config(explicit, None).unwrap().get("mu_e"),
            Some("0.015")
        );
    }

    #[test]
    fn file_rejects_unknown_and_malformed() {
        let vacua = find_subcommand("vacua").unwrap();
        assert!(parse_config_text("bogus = 1", vacua).is_err());
        assert!(parse_config_text("mu_e 0.01", vacua).is_err());
        assert!(parse_config_text("nowhere.mu_e = 1", vacua).is_err());
        assert!(parse_config_text("profile.nope = 1", vacua).is_err());
        assert_eq!(parse_config_text("profile.b = 3", vacua).unwrap(), vec![]);
    }
}
