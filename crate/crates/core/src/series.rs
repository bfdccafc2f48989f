//! `CurveSeries`, the sampled-curve carrier every operation exports through,
//! and its CSV encoding.
//!
//! Layout: one `# provenance:` comment line, a header row, then one row per
//! point. Numbers are written with 17 significant digits so every `f64`
//! round-trips exactly; lines end in `\n` with no trailing blank line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Provenance {
    /// Tag of the generating relation, e.g. `eq47`.
    pub tag: String,
    pub params: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSeries {
    pub label: String,
    pub abscissa: Column,
    pub ordinates: Vec<Column>,
    pub provenance: Provenance,
}

impl CurveSeries {
    /// Starts a series; `x` must be strictly increasing.
    pub fn new(
        label: impl Into<String>,
        x_name: impl Into<String>,
        x: Vec<f64>,
        tag: impl Into<String>,
    ) -> Result<Self> {
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain("abscissa must be strictly increasing"));
        }
        Ok(Self {
            label: label.into(),
            abscissa: Column {
                name: x_name.into(),
                values: x,
            },
            ordinates: Vec::new(),
            provenance: Provenance {
                tag: tag.into(),
                params: BTreeMap::new(),
            },
        })
    }

    pub fn with_column(mut self, name: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.len() {
            return Err(Error::domain(format!(
                "column length {} does not match abscissa length {}",
                values.len(),
                self.len()
            )));
        }
        self.ordinates.push(Column {
            name: name.into(),
            values,
        });
        Ok(self)
    }

    /// Adds a complex column as a `re`/`im` pair.
    pub fn with_complex(
        self,
        re_name: impl Into<String>,
        im_name: impl Into<String>,
        values: &[Complex64],
    ) -> Result<Self> {
        let re = values.iter().map(|z| z.re).collect();
        let im = values.iter().map(|z| z.im).collect();
        self.with_column(re_name, re)?.with_column(im_name, im)
    }

    pub fn with_param(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.provenance.params.insert(key.into(), value.to_string());
        self
    }

    pub fn len(&self) -> usize {
        self.abscissa.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn x(&self) -> &[f64] {
        &self.abscissa.values
    }

    /// First ordinate column.
    pub fn y(&self) -> &[f64] {
        self.ordinates.first().map_or(&[], |c| &c.values)
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.ordinates
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("# provenance: tag=");
        out.push_str(&self.provenance.tag);
        if !self.label.is_empty() {
            let _ = write!(out, " label={}", self.label);
        }
        for (k, v) in &self.provenance.params {
            let _ = write!(out, " {k}={v}");
        }
        out.push('\n');
        out.push_str(&self.abscissa.name);
        for c in &self.ordinates {
            out.push(',');
            out.push_str(&c.name);
        }
        out.push('\n');
        for i in 0..self.len() {
            out.push_str(&format_value(self.abscissa.values[i]));
            for c in &self.ordinates {
                out.push(',');
                out.push_str(&format_value(c.values[i]));
            }
            out.push('\n');
        }
        out
    }

    /// Parses the layout produced by [`CurveSeries::to_csv`]. A provenance
    /// comment is restored; other comment lines are skipped and the first
    /// non-comment line is the header.
    pub fn from_csv(text: &str) -> Result<Self> {
        let provenance = text
            .lines()
            .find_map(|l| l.trim().strip_prefix("# provenance:"))
            .map(parse_provenance);
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| Error::domain("missing CSV header"))?
            .split(',')
            .map(str::trim)
            .collect();
        if header.len() < 2 {
            return Err(Error::domain("CSV needs at least two columns"));
        }
        let mut cols: Vec<Vec<f64>> = vec![Vec::new(); header.len()];
        for (row, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != header.len() {
                return Err(Error::domain(format!(
                    "row {row}: expected {} fields",
                    header.len()
                )));
            }
            for (c, f) in cols.iter_mut().zip(fields) {
                let v: f64 = f
                    .trim()
                    .parse()
                    .map_err(|_| Error::domain(format!("row {row}: bad number {f:?}")))?;
                c.push(v);
            }
        }
        let mut it = cols.into_iter();
        let mut s = CurveSeries::new("", header[0], it.next().unwrap_or_default(), "data")?;
        for (name, values) in header[1..].iter().zip(it) {
            s = s.with_column(*name, values)?;
        }
        if let Some((label, prov)) = provenance {
            s.label = label;
            s.provenance = prov;
        }
        Ok(s)
    }
}

// `key=value` tokens; a token without `=` continues the previous value, so
// labels and paths containing spaces survive.
fn parse_provenance(line: &str) -> (String, Provenance) {
    let mut pairs: Vec<(String, String)> = Vec::new();
    for tok in line.split(' ').filter(|t| !t.is_empty()) {
        match (tok.split_once('='), pairs.last_mut()) {
            (Some((k, v)), _) => pairs.push((k.to_string(), v.to_string())),
            (None, Some((_, v))) => {
                v.push(' ');
                v.push_str(tok);
            }
            (None, None) => {}
        }
    }
    let mut label = String::new();
    let mut prov = Provenance {
        tag: "data".to_string(),
        params: BTreeMap::new(),
    };
    for (k, v) in pairs {
        match k.as_str() {
            "tag" => prov.tag = v,
            "label" => label = v,
            _ => {
                prov.params.insert(k, v);
            }
        }
    }
    (label, prov)
}

/// 17 significant digits, scientific notation.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_series(series: &CurveSeries, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, series.to_csv()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_series(path: impl AsRef<Path>) -> Result<CurveSeries> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    CurveSeries::from_csv(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScale {
    Linear,
    Log,
}

/// Sampling grid `min:max:count[:lin|log]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: GridScale,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize, scale: GridScale) -> Result<Self> {
        if count < 2 {
            return Err(Error::domain("grid count must be >= 2"));
        }
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(Error::domain("grid requires finite min < max"));
        }
        if scale == GridScale::Log && min <= 0.0 {
            return Err(Error::domain("log grid requires min > 0"));
        }
        Ok(Self {
            min,
            max,
            count,
            scale,
        })
    }

    pub fn linear(min: f64, max: f64, count: usize) -> Result<Self> {
        Self::new(min, max, count, GridScale::Linear)
    }

    pub fn points(&self) -> Vec<f64> {
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / n;
                match self.scale {
                    GridScale::Linear => self.min + (self.max - self.min) * t,
                    GridScale::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * t).exp(),
                }
            })
            .enumerate()
            .map(|(i, v)| if i + 1 == self.count { self.max } else { v })
            .collect()
    }
}

impl std::str::FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(Error::domain(format!(
                "grid {s:?}: expected min:max:count[:lin|log]"
            )));
        }
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse()
                .map_err(|_| Error::domain(format!("grid {s:?}: bad number {t:?}")))
        };
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| Error::domain(format!("grid {s:?}: bad count {:?}", parts[2])))?;
        let scale = match parts.get(3).map(|t| t.trim()) {
            None | Some("lin") | Some("linear") => GridScale::Linear,
            Some("log") => GridScale::Log,
            Some(other) => return Err(Error::domain(format!("grid scale {other:?}"))),
        };
        Grid::new(num(parts[0])?, num(parts[1])?, count, scale)
    }
}
