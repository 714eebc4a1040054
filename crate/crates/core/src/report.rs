//! Command implementations behind the `mmsp` binary: run configuration,
//! preset files, the spectrum/compare/sweep tables and their CSV/JSON
//! emission.
//!
//! Numbers are written with Rust's shortest round-trip `f64` formatting in
//! both formats, so a CSV and a JSON emission of the same run carry
//! identical decimal strings.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use thiserror::Error;

use crate::error::Error;
use crate::model::{ApproximationScheme, PhysicalContext, PotentialParams};
use crate::oracle::{oracle_solve, RadialGridSpec};
use crate::spectrum::enumerate_spectrum;

pub const EXIT_SUPERCRITICAL: i32 = 2;
pub const EXIT_NO_BOUND: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("{0}")]
    FallToCenter(String),
    #[error("{0}")]
    NoBinding(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::FallToCenter(_) => EXIT_SUPERCRITICAL,
            Self::NoBinding(_) => EXIT_NO_BOUND,
            Self::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Supercritical { coupling, critical } => Self::FallToCenter(format!(
                "fall to center: the attractive 1/r^2 core is too strong \
                 (mu V0 (A+B)^2 / (2 hbar^2 alpha^2) = {coupling} > 1/4 + l(l+1) = {critical}); \
                 no discrete spectrum exists"
            )),
            Error::NoBoundLevels { threshold } => Self::NoBinding(format!(
                "no binding: the potential holds no level below the continuum edge {}",
                format_number(threshold)
            )),
            Error::NoBoundState => Self::NoBinding("no binding: no bound state exists".into()),
            other => Self::Usage(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: PotentialParams,
    pub ctx: PhysicalContext,
    pub l_list: Vec<u32>,
    pub n_limit: u32,
    /// Ordered by report name, ascending.
    pub schemes: Vec<ApproximationScheme>,
    pub oracle_enabled: bool,
    pub grid_points: Option<usize>,
    pub r_max: Option<f64>,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        self.params.validate()?;
        self.ctx.validate()?;
        if self.schemes.is_empty() {
            return Err(CliError::Usage("at least one scheme is required".into()));
        }
        if self.l_list.is_empty() {
            return Err(CliError::Usage("at least one l value is required".into()));
        }
        Ok(())
    }

    /// Schemes sorted by name with duplicates removed.
    pub fn with_sorted_schemes(mut self) -> Self {
        self.schemes.sort_by_key(|s| s.name());
        self.schemes.dedup_by_key(|s| s.name());
        self.l_list.sort_unstable();
        self.l_list.dedup();
        self
    }

    pub fn oracle_grid(&self) -> Result<RadialGridSpec, CliError> {
        let mut grid = RadialGridSpec::default_for(&self.params);
        if let Some(points) = self.grid_points {
            grid.points = points;
        }
        if let Some(r_max) = self.r_max {
            grid.r_max = r_max;
        }
        grid.validate()?;
        Ok(grid)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    /// Non-finite values become [`Cell::Empty`].
    pub fn num(x: f64) -> Self {
        if x.is_finite() {
            Self::Num(x)
        } else {
            Self::Empty
        }
    }

    fn num_opt(x: Option<f64>) -> Self {
        x.map_or(Self::Empty, Self::num)
    }
}

/// Shortest round-trip digits; scientific notation outside [1e-5, 1e16).
pub fn format_number(x: f64) -> String {
    let x = x + 0.0;
    let mag = x.abs();
    if mag != 0.0 && !(1e-5..1e16).contains(&mag) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(i) => i.to_string(),
                    Cell::Num(x) => format_number(*x),
                    Cell::Text(s) => s.clone(),
                    Cell::Bool(b) => b.to_string(),
                    Cell::Empty => String::new(),
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        if self.rows.is_empty() {
            return "[]\n".into();
        }
        let mut out = String::from("[\n");
        for (i, row) in self.rows.iter().enumerate() {
            out.push_str("  {");
            for (j, (col, cell)) in self.columns.iter().zip(row).enumerate() {
                if j > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "\"{col}\": ");
                match cell {
                    Cell::Int(v) => out.push_str(&v.to_string()),
                    Cell::Num(x) => out.push_str(&format_number(*x)),
                    Cell::Text(s) => out.push_str(&json_string(s)),
                    Cell::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
                    Cell::Empty => out.push_str("null"),
                }
            }
            out.push('}');
            if i + 1 < self.rows.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("]\n");
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Writes to `out` through a sibling temporary file, or to stdout.
pub fn write_output(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    let Some(path) = out else {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        return lock
            .write_all(text.as_bytes())
            .and_then(|_| lock.flush())
            .map_err(|e| CliError::Io(e.to_string()));
    };
    let file_name = path
        .file_name()
        .ok_or_else(|| CliError::Io(format!("{}: not a file path", path.display())))?;
    let mut tmp_name = file_name.to_os_string();
    tmp_name.push(".partial");
    let tmp = path.with_file_name(tmp_name);
    let io_err = |e: io::Error| CliError::Io(format!("{}: {e}", path.display()));
    fs::write(&tmp, text).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io_err(e)
    })
}

pub const SPECTRUM_COLUMNS: [&str; 7] = ["n", "l", "scheme", "energy", "chi", "s_exponent", "valid"];
pub const COMPARE_COLUMNS: [&str; 8] = [
    "n", "l", "scheme", "e_closed", "e_oracle", "abs_err", "rel_err", "conv_gap",
];
pub const SWEEP_COLUMNS: [&str; 6] = ["axis_value", "n", "l", "scheme", "energy", "valid"];

/// One row per `(l, n, scheme)`; a supercritical `l` aborts the command.
pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Table, CliError> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for &l in &cfg.l_list {
        let spectra = cfg
            .schemes
            .iter()
            .map(|s| enumerate_spectrum(&cfg.params, &cfg.ctx, l, s, cfg.n_limit))
            .collect::<Result<Vec<_>, _>>()?;
        for n in 0..=cfg.n_limit as usize {
            for spec in &spectra {
                let rec = &spec.records[n];
                rows.push(vec![
                    Cell::Int(i64::from(rec.qn.n)),
                    Cell::Int(i64::from(l)),
                    Cell::Text(rec.scheme.name().into()),
                    Cell::num(rec.energy),
                    Cell::num(rec.chi),
                    Cell::num(rec.s_exponent),
                    Cell::Bool(rec.is_valid()),
                ]);
            }
        }
    }
    Ok(Table {
        columns: SPECTRUM_COLUMNS.to_vec(),
        rows,
    })
}

/// Closed-form levels against the Richardson-extrapolated oracle.
pub fn cmd_compare(cfg: &RunConfig) -> Result<Table, CliError> {
    cfg.validate()?;
    let grid = cfg.oracle_grid()?;
    let k = (cfg.n_limit as usize + 1).min(grid.points / 4);
    let mut rows = Vec::new();
    let mut any_bound = false;
    let mut last_no_bound = None;
    for &l in &cfg.l_list {
        let spectra = cfg
            .schemes
            .iter()
            .map(|s| enumerate_spectrum(&cfg.params, &cfg.ctx, l, s, cfg.n_limit))
            .collect::<Result<Vec<_>, _>>()?;
        let oracle = match oracle_solve(&cfg.params, &cfg.ctx, l, &grid, k) {
            Ok(res) => {
                any_bound = true;
                Some(res)
            }
            Err(e @ Error::NoBoundLevels { .. }) => {
                last_no_bound = Some(e);
                None
            }
            Err(e) => return Err(e.into()),
        };
        for n in 0..=cfg.n_limit as usize {
            let oracle_level = oracle.as_ref().and_then(|o| {
                o.richardson_estimate
                    .get(n)
                    .map(|&e| (e, o.convergence_gap[n]))
            });
            for spec in &spectra {
                let rec = &spec.records[n];
                let closed = rec.is_valid().then_some(rec.energy);
                let (abs_err, rel_err) = match (closed, oracle_level) {
                    (Some(c), Some((o, _))) => {
                        let abs = (c - o).abs();
                        (Some(abs), Some(abs / o.abs()))
                    }
                    _ => (None, None),
                };
                rows.push(vec![
                    Cell::Int(n as i64),
                    Cell::Int(i64::from(l)),
                    Cell::Text(rec.scheme.name().into()),
                    Cell::num_opt(closed),
                    Cell::num_opt(oracle_level.map(|x| x.0)),
                    Cell::num_opt(abs_err),
                    Cell::num_opt(rel_err),
                    Cell::num_opt(oracle_level.map(|x| x.1)),
                ]);
            }
        }
    }
    if !any_bound {
        return Err(last_no_bound
            .map(CliError::from)
            .unwrap_or_else(|| CliError::NoBinding("no binding".into())));
    }
    Ok(Table {
        columns: COMPARE_COLUMNS.to_vec(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    V0,
    Alpha,
    A,
    B,
}

impl SweepAxis {
    pub fn apply(self, base: &PotentialParams, value: f64) -> PotentialParams {
        let mut p = *base;
        match self {
            Self::V0 => p.v0 = value,
            Self::Alpha => p.alpha = value,
            Self::A => p.a_coef = value,
            Self::B => p.b_coef = value,
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.steps < 2 {
            return Err(CliError::Usage("--steps must be at least 2".into()));
        }
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err(CliError::Usage("sweep range must be finite".into()));
        }
        if self.from == self.to {
            return Err(CliError::Usage("sweep range has zero length".into()));
        }
        if self.axis == SweepAxis::Alpha && !(self.from > 0.0 && self.to > 0.0) {
            return Err(CliError::Usage("alpha sweep range must be positive".into()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.to
                } else {
                    self.from + (self.to - self.from) * (i as f64 / last)
                }
            })
            .collect()
    }
}

/// Long-format `(axis_value, n, l, scheme, energy, valid)` rows. Points that
/// are supercritical, unbound or otherwise invalid keep `valid = false` and
/// an empty energy.
pub fn cmd_sweep(cfg: &RunConfig, sweep: &SweepSpec) -> Result<Table, CliError> {
    sweep.validate()?;
    cfg.ctx.validate()?;
    if cfg.schemes.is_empty() || cfg.l_list.is_empty() {
        return Err(CliError::Usage("at least one scheme and one l value are required".into()));
    }
    let mut rows = Vec::new();
    for value in sweep.values() {
        let p = sweep.axis.apply(&cfg.params, value);
        for &l in &cfg.l_list {
            let spectra: Vec<_> = cfg
                .schemes
                .iter()
                .map(|s| {
                    p.validate()
                        .and_then(|_| enumerate_spectrum(&p, &cfg.ctx, l, s, cfg.n_limit))
                        .ok()
                })
                .collect();
            for n in 0..=cfg.n_limit as usize {
                for (scheme, spec) in cfg.schemes.iter().zip(&spectra) {
                    let energy = spec
                        .as_ref()
                        .map(|s| &s.records[n])
                        .filter(|r| r.is_valid() && r.energy.is_finite())
                        .map(|r| r.energy);
                    rows.push(vec![
                        Cell::num(value),
                        Cell::Int(n as i64),
                        Cell::Int(i64::from(l)),
                        Cell::Text(scheme.name().into()),
                        Cell::num_opt(energy),
                        Cell::Bool(energy.is_some()),
                    ]);
                }
            }
        }
    }
    Ok(Table {
        columns: SWEEP_COLUMNS.to_vec(),
        rows,
    })
}

/// Named parameter set read from a preset file. Unset fields fall back to
/// command-line values or defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Preset {
    pub name: String,
    pub v0: Option<f64>,
    pub a_coef: Option<f64>,
    pub b_coef: Option<f64>,
    pub alpha: Option<f64>,
    pub mu: Option<f64>,
    pub hbar: Option<f64>,
}

/// Parses `[section]` blocks of `key = value` lines. `#` and `;` start
/// comments. The section title is the preset name unless a `name` key
/// overrides it.
pub fn parse_presets(text: &str) -> Result<Vec<Preset>, CliError> {
    let mut presets: Vec<Preset> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split(['#', ';']).next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: &str| CliError::Usage(format!("preset file line {}: {msg}", lineno + 1));
        if let Some(rest) = line.strip_prefix('[') {
            let title = rest
                .strip_suffix(']')
                .ok_or_else(|| bad("unterminated section header"))?
                .trim();
            if title.is_empty() {
                return Err(bad("empty section name"));
            }
            presets.push(Preset {
                name: title.to_string(),
                ..Preset::default()
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| bad("expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        let current = presets
            .last_mut()
            .ok_or_else(|| bad("key outside of a [section]"))?;
        if key == "name" {
            current.name = value.to_string();
            continue;
        }
        let number: f64 = value
            .parse()
            .map_err(|_| bad(&format!("`{value}` is not a number")))?;
        let slot = match key {
            "v0" => &mut current.v0,
            "a_coef" => &mut current.a_coef,
            "b_coef" => &mut current.b_coef,
            "alpha" => &mut current.alpha,
            "mu" => &mut current.mu,
            "hbar" => &mut current.hbar,
            other => return Err(bad(&format!("unknown key `{other}`"))),
        };
        *slot = Some(number);
    }
    let mut names: Vec<&str> = presets.iter().map(|p| p.name.as_str()).collect();
    names.sort_unstable();
    if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
        return Err(CliError::Usage(format!("duplicate preset `{}`", w[0])));
    }
    Ok(presets)
}

pub fn find_preset(presets: &[Preset], name: &str) -> Result<Preset, CliError> {
    presets
        .iter()
        .find(|p| p.name == name)
        .cloned()
        .ok_or_else(|| CliError::Usage(format!("preset `{name}` not found")))
}
