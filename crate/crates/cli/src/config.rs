//! Run configuration: flat `key = value` text with `[section]` headers.
//!
//! ```text
//! [input]
//! path = field.cwf
//! format = grid        # grid | modes
//!
//! [medium]
//! mu = 1
//! eps = 1
//!
//! [output]
//! dir = out
//! times = 0, 0.5, 1
//! shape = 16 16 16
//! format = both        # grid | csv | both
//! ```
//!
//! Every key can also be given on the command line as `--section.key=value`.

use std::fmt;
use std::path::PathBuf;

use curlwave::ingest::DEFAULT_TRUNC_TOL;
use curlwave::propagator::DEFAULT_DROP_TOL;
use curlwave::Medium;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Grid,
    Modes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Grid,
    Csv,
    Both,
}

impl OutputFormat {
    pub fn grid(self) -> bool {
        matches!(self, Self::Grid | Self::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, Self::Csv | Self::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdtdTarget {
    Isotropic,
    Oblique,
    Input,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FdtdConfig {
    pub enabled: bool,
    pub resolutions: Vec<usize>,
    pub courant: f64,
    pub t_final: f64,
    pub problems: Vec<FdtdTarget>,
}

impl Default for FdtdConfig {
    fn default() -> Self {
        Self {
            enabled: true,
            resolutions: vec![16, 32, 64],
            courant: 0.5,
            t_final: 0.5,
            problems: vec![FdtdTarget::Isotropic, FdtdTarget::Oblique],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub input_format: Option<InputFormat>,
    pub periods: Option<[f64; 3]>,
    pub medium: Option<Medium>,
    pub output_dir: Option<PathBuf>,
    pub times: Option<Vec<f64>>,
    pub shape: Option<[usize; 3]>,
    pub output_format: OutputFormat,
    pub trunc_tol: f64,
    pub drop_tol: f64,
    pub fdtd: FdtdConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: None,
            input_format: None,
            periods: None,
            medium: None,
            output_dir: None,
            times: None,
            shape: None,
            output_format: OutputFormat::Grid,
            trunc_tol: DEFAULT_TRUNC_TOL,
            drop_tol: DEFAULT_DROP_TOL,
            fdtd: FdtdConfig::default(),
        }
    }
}

/// A config problem, tied to the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "config line {l}: {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(field: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field: field.to_string(),
        line: None,
        message: message.into(),
    }
}

fn number(field: &str, raw: &str) -> Result<f64, ConfigError> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| err(field, format!("'{}' is not a number", raw.trim())))?;
    if !v.is_finite() {
        return Err(err(field, format!("'{}' is not finite", raw.trim())));
    }
    Ok(v)
}

/// Drops TOML-style list brackets and string quotes.
fn bare(raw: &str) -> String {
    let t = raw.trim();
    let t = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .unwrap_or(t);
    t.chars().filter(|&c| c != '"' && c != '\'').collect()
}

fn list(raw: &str) -> impl Iterator<Item = &str> {
    raw.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
}

fn triple<T>(
    field: &str,
    raw: &str,
    parse: impl Fn(&str) -> Result<T, ConfigError>,
) -> Result<[T; 3], ConfigError> {
    let items: Vec<&str> = list(raw).collect();
    let mut vals = match items.as_slice() {
        [a, b, c] => [parse(a)?, parse(b)?, parse(c)?],
        _ => {
            return Err(err(
                field,
                format!("expected 3 values, found {}", items.len()),
            ))
        }
    }
    .into_iter();
    Ok(std::array::from_fn(|_| vals.next().unwrap()))
}

fn count(field: &str, raw: &str) -> Result<usize, ConfigError> {
    match raw.trim().parse::<usize>() {
        Ok(0) => Err(err(field, "must be positive")),
        Ok(n) => Ok(n),
        Err(_) => Err(err(
            field,
            format!("'{}' is not a positive integer", raw.trim()),
        )),
    }
}

fn tolerance(field: &str, raw: &str) -> Result<f64, ConfigError> {
    let v = number(field, raw)?;
    if !(v > 0.0 && v < 1.0) {
        return Err(err(field, format!("{v} must lie in (0, 1)")));
    }
    Ok(v)
}

fn flag(field: &str, raw: &str) -> Result<bool, ConfigError> {
    match raw.trim() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(err(field, format!("'{other}' is not a boolean"))),
    }
}

fn path(field: &str, raw: &str) -> Result<PathBuf, ConfigError> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Err(err(field, "path is empty"));
    }
    Ok(PathBuf::from(raw))
}

/// Parses a comma or space separated list of times.
pub fn parse_times(field: &str, raw: &str) -> Result<Vec<f64>, ConfigError> {
    let times = list(raw)
        .map(|s| number(field, s))
        .collect::<Result<Vec<_>, _>>()?;
    if times.is_empty() {
        return Err(err(field, "no times given"));
    }
    Ok(times)
}

#[derive(Default)]
struct MediumParts {
    mu: Option<f64>,
    eps: Option<f64>,
}

impl RunConfig {
    /// Applies one `section.key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let value = &bare(value);
        let mut parts = MediumParts {
            mu: self.medium.map(|m| m.mu()),
            eps: self.medium.map(|m| m.eps()),
        };
        match key {
            "input.path" => self.input = Some(path(key, value)?),
            "input.format" => {
                self.input_format = Some(match value.trim() {
                    "grid" => InputFormat::Grid,
                    "modes" => InputFormat::Modes,
                    other => return Err(err(key, format!("'{other}' is not one of grid, modes"))),
                })
            }
            "input.periods" => {
                let p = triple(key, value, |s| number(key, s))?;
                if p.iter().any(|&b| b <= 0.0) {
                    return Err(err(key, "periods must be positive"));
                }
                self.periods = Some(p);
            }
            "medium.mu" => parts.mu = Some(number(key, value)?),
            "medium.eps" => parts.eps = Some(number(key, value)?),
            "output.dir" => self.output_dir = Some(path(key, value)?),
            "output.times" => self.times = Some(parse_times(key, value)?),
            "output.shape" => self.shape = Some(triple(key, value, |s| count(key, s))?),
            "output.format" => {
                self.output_format = match value.trim() {
                    "grid" => OutputFormat::Grid,
                    "csv" => OutputFormat::Csv,
                    "both" => OutputFormat::Both,
                    other => {
                        return Err(err(key, format!("'{other}' is not one of grid, csv, both")))
                    }
                }
            }
            "tolerances.trunc_tol" => self.trunc_tol = tolerance(key, value)?,
            "tolerances.drop_tol" => self.drop_tol = tolerance(key, value)?,
            "fdtd.enabled" => self.fdtd.enabled = flag(key, value)?,
            "fdtd.courant" => {
                let c = number(key, value)?;
                if !(c > 0.0 && c <= 1.0) {
                    return Err(err(key, format!("{c} must lie in (0, 1]")));
                }
                self.fdtd.courant = c;
            }
            "fdtd.t_final" => {
                let t = number(key, value)?;
                if t < 0.0 {
                    return Err(err(key, "must be non-negative"));
                }
                self.fdtd.t_final = t;
            }
            "fdtd.resolutions" => {
                let r = list(value)
                    .map(|s| count(key, s))
                    .collect::<Result<Vec<_>, _>>()?;
                if r.is_empty() {
                    return Err(err(key, "no resolutions given"));
                }
                if r.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(err(key, "resolutions must be strictly increasing"));
                }
                self.fdtd.resolutions = r;
            }
            "fdtd.problems" => {
                let p = list(value)
                    .map(|s| match s {
                        "isotropic" => Ok(FdtdTarget::Isotropic),
                        "oblique" => Ok(FdtdTarget::Oblique),
                        "input" => Ok(FdtdTarget::Input),
                        other => Err(err(
                            key,
                            format!("'{other}' is not one of isotropic, oblique, input"),
                        )),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                self.fdtd.problems = p;
            }
            _ => return Err(err(key, "unknown setting")),
        }
        if key.starts_with("medium.") {
            let mu = parts.mu.unwrap_or(1.0);
            let eps = parts.eps.unwrap_or(1.0);
            let m = Medium::new(mu, eps).map_err(|e| err(key, e.to_string()))?;
            self.medium = Some(m);
        }
        Ok(())
    }

    /// Applies a config file's text on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        let mut section: Option<String> = None;
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let at = |mut e: ConfigError| {
                e.line = Some(line);
                e
            };
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| at(err(body, "unterminated section header")))?
                    .trim();
                if !matches!(name, "input" | "medium" | "output" | "tolerances" | "fdtd") {
                    return Err(at(err(name, "unknown section")));
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| at(err(body, "expected 'key = value'")))?;
            let key = key.trim();
            let Some(sec) = &section else {
                return Err(at(err(key, "setting appears before any [section]")));
            };
            self.set(&format!("{sec}.{key}"), value).map_err(at)?;
        }
        Ok(())
    }

    /// Applies `section.key=value` overrides in order.
    pub fn apply_overrides<'a>(
        &mut self,
        pairs: impl IntoIterator<Item = &'a str>,
    ) -> Result<(), ConfigError> {
        for pair in pairs {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| err(pair, "expected --section.key=value"))?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn require_input(&self) -> Result<&PathBuf, ConfigError> {
        self.input
            .as_ref()
            .ok_or_else(|| err("input.path", "required by this command"))
    }

    /// Explicit format, or guessed from the file extension.
    pub fn input_format(&self) -> InputFormat {
        self.input_format.unwrap_or_else(|| match &self.input {
            Some(p) if p.extension().is_some_and(|e| e == "cwf") => InputFormat::Grid,
            Some(p) if p.extension().is_some_and(|e| e == "txt" || e == "modes") => {
                InputFormat::Modes
            }
            _ => InputFormat::Grid,
        })
    }
}

/// Rewrites `--section.key=value` and `--section.key value` into
/// `--set section.key=value` so clap can collect them.
pub fn rewrite_overrides(args: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args.into_iter().peekable();
    while let Some(a) = it.next() {
        let Some(body) = a.strip_prefix("--") else {
            out.push(a);
            continue;
        };
        let name = body.split('=').next().unwrap_or("");
        if !name.contains('.') {
            out.push(a);
            continue;
        }
        out.push("--set".into());
        if body.contains('=') {
            out.push(body.to_string());
        } else {
            let value = it.next().unwrap_or_default();
            out.push(format!("{name}={value}"));
        }
    }
    out
}
