//! Run configuration: a flat sectioned key=value text format (diff
//! friendly) with JSON accepted as an alternative carrying the same
//! schema.  Unknown sections or keys are rejected; serialization is
//! canonical so that parse → serialize is idempotent and the
//! configuration hash is stable.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsBlock {
    pub b: f64,
}

impl Default for ParamsBlock {
    fn default() -> Self {
        ParamsBlock { b: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CoefficientBlock {
    /// pure-power | rational | piecewise-plateau
    pub family: String,
    pub a: f64,
    pub d: f64,
    pub c: f64,
}

impl Default for CoefficientBlock {
    fn default() -> Self {
        CoefficientBlock {
            family: "pure-power".into(),
            a: 1.0,
            d: 0.0,
            c: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialBlock {
    /// gaussian | scaled-ground-state
    pub profile: String,
    /// Gaussian amplitude
    pub amplitude: f64,
    /// Gaussian width
    pub sigma: f64,
    /// ground-state multiple
    pub c: f64,
    /// ground-state rescaling λ
    pub lambda: f64,
}

impl Default for InitialBlock {
    fn default() -> Self {
        InitialBlock {
            profile: "gaussian".into(),
            amplitude: 0.5,
            sigma: 1.0,
            c: 1.0,
            lambda: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridBlock {
    pub r_max: f64,
    pub n: usize,
}

impl Default for GridBlock {
    fn default() -> Self {
        GridBlock { r_max: 40.0, n: 4096 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ControlsBlock {
    pub dt0: f64,
    pub t_end: f64,
    pub blowup_grad_factor: f64,
    pub dt_floor: f64,
    pub record_every: usize,
    /// negativity-monitor interpolation parameter, in [0, k_g]
    pub eta: f64,
    /// unbounded | quadratic-cutoff | smooth-beta
    pub weight: String,
    pub weight_scale: f64,
}

impl Default for ControlsBlock {
    fn default() -> Self {
        ControlsBlock {
            dt0: 1e-3,
            t_end: 1.0,
            blowup_grad_factor: 5.0,
            dt_floor: 1e-8,
            record_every: 10,
            eta: 0.0,
            weight: "unbounded".into(),
            weight_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputBlock {
    pub dir: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepBlock {
    /// ground-state multiples c (or Gaussian amplitudes, per profile)
    pub amplitudes: Vec<f64>,
    /// Gaussian widths
    pub sigmas: Vec<f64>,
    /// ground-state rescalings
    pub lambdas: Vec<f64>,
}

impl SweepBlock {
    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty() && self.sigmas.is_empty() && self.lambdas.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub params: ParamsBlock,
    pub coefficient: CoefficientBlock,
    pub initial: InitialBlock,
    pub grid: GridBlock,
    pub controls: ControlsBlock,
    pub output: OutputBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepBlock>,
}

fn fmt_f64(v: f64) -> String {
    // Shortest representation that round-trips keeps canonical text stable.
    let mut s = format!("{v}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

fn fmt_list(vs: &[f64]) -> String {
    vs.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(", ")
}

fn parse_f64(section: &str, key: &str, val: &str) -> Result<f64> {
    val.trim().parse().map_err(|_| {
        Error::Config(format!("[{section}] {key}: expected a number, got `{val}`"))
    })
}

fn parse_usize(section: &str, key: &str, val: &str) -> Result<usize> {
    val.trim().parse().map_err(|_| {
        Error::Config(format!("[{section}] {key}: expected an integer, got `{val}`"))
    })
}

fn parse_list(section: &str, key: &str, val: &str) -> Result<Vec<f64>> {
    val.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_f64(section, key, s))
        .collect()
}

impl RunConfig {
    /// Parse either format: JSON when the first non-blank byte is `{`,
    /// sectioned key=value text otherwise.
    pub fn parse(text: &str) -> Result<RunConfig> {
        if text.trim_start().starts_with('{') {
            let cfg: RunConfig = serde_json::from_str(text)?;
            Ok(cfg)
        } else {
            Self::parse_ini(text)
        }
    }

    pub fn parse_ini(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split(['#', ';']).next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| {
                    Error::Config(format!("line {}: malformed section header `{raw}`", lineno + 1))
                })?;
                section = name.trim().to_string();
                match section.as_str() {
                    "params" | "coefficient" | "initial" | "grid" | "controls" | "output" => {}
                    "sweep" => {
                        cfg.sweep.get_or_insert_with(SweepBlock::default);
                    }
                    other => {
                        return Err(Error::Config(format!("unknown section [{other}]")));
                    }
                }
                continue;
            }
            let (key, val) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value, got `{raw}`", lineno + 1))
            })?;
            let (key, val) = (key.trim(), val.trim());
            cfg.set(&section, key, val)?;
        }
        Ok(cfg)
    }

    fn set(&mut self, section: &str, key: &str, val: &str) -> Result<()> {
        let unknown =
            || Error::Config(format!("unknown key `{key}` in section [{section}]"));
        match (section, key) {
            ("params", "b") => self.params.b = parse_f64(section, key, val)?,
            ("params", _) => return Err(unknown()),
            ("coefficient", "family") => self.coefficient.family = val.to_string(),
            ("coefficient", "a") => self.coefficient.a = parse_f64(section, key, val)?,
            ("coefficient", "d") => self.coefficient.d = parse_f64(section, key, val)?,
            ("coefficient", "c") => self.coefficient.c = parse_f64(section, key, val)?,
            ("coefficient", _) => return Err(unknown()),
            ("initial", "profile") => self.initial.profile = val.to_string(),
            ("initial", "amplitude") => self.initial.amplitude = parse_f64(section, key, val)?,
            ("initial", "sigma") => self.initial.sigma = parse_f64(section, key, val)?,
            ("initial", "c") => self.initial.c = parse_f64(section, key, val)?,
            ("initial", "lambda") => self.initial.lambda = parse_f64(section, key, val)?,
            ("initial", _) => return Err(unknown()),
            ("grid", "r_max") => self.grid.r_max = parse_f64(section, key, val)?,
            ("grid", "n") => self.grid.n = parse_usize(section, key, val)?,
            ("grid", _) => return Err(unknown()),
            ("controls", "dt0") => self.controls.dt0 = parse_f64(section, key, val)?,
            ("controls", "t_end") => self.controls.t_end = parse_f64(section, key, val)?,
            ("controls", "blowup_grad_factor") => {
                self.controls.blowup_grad_factor = parse_f64(section, key, val)?
            }
            ("controls", "dt_floor") => self.controls.dt_floor = parse_f64(section, key, val)?,
            ("controls", "record_every") => {
                self.controls.record_every = parse_usize(section, key, val)?
            }
            ("controls", "eta") => self.controls.eta = parse_f64(section, key, val)?,
            ("controls", "weight") => self.controls.weight = val.to_string(),
            ("controls", "weight_scale") => {
                self.controls.weight_scale = parse_f64(section, key, val)?
            }
            ("controls", _) => return Err(unknown()),
            ("output", "dir") => self.output.dir = Some(val.to_string()),
            ("output", _) => return Err(unknown()),
            ("sweep", _) => {
                let sweep = self.sweep.get_or_insert_with(SweepBlock::default);
                match key {
                    "amplitudes" => sweep.amplitudes = parse_list(section, key, val)?,
                    "sigmas" => sweep.sigmas = parse_list(section, key, val)?,
                    "lambdas" => sweep.lambdas = parse_list(section, key, val)?,
                    _ => return Err(unknown()),
                }
            }
            _ => {
                return Err(Error::Config(format!(
                    "key `{key}` outside any recognized section"
                )))
            }
        }
        Ok(())
    }

    /// Canonical sectioned text: fixed section and key order, so parse →
    /// serialize is idempotent and hashing the text is meaningful.
    pub fn to_ini(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "[params]");
        let _ = writeln!(s, "b = {}", fmt_f64(self.params.b));
        let _ = writeln!(s, "\n[coefficient]");
        let _ = writeln!(s, "family = {}", self.coefficient.family);
        let _ = writeln!(s, "a = {}", fmt_f64(self.coefficient.a));
        let _ = writeln!(s, "d = {}", fmt_f64(self.coefficient.d));
        let _ = writeln!(s, "c = {}", fmt_f64(self.coefficient.c));
        let _ = writeln!(s, "\n[initial]");
        let _ = writeln!(s, "profile = {}", self.initial.profile);
        let _ = writeln!(s, "amplitude = {}", fmt_f64(self.initial.amplitude));
        let _ = writeln!(s, "sigma = {}", fmt_f64(self.initial.sigma));
        let _ = writeln!(s, "c = {}", fmt_f64(self.initial.c));
        let _ = writeln!(s, "lambda = {}", fmt_f64(self.initial.lambda));
        let _ = writeln!(s, "\n[grid]");
        let _ = writeln!(s, "r_max = {}", fmt_f64(self.grid.r_max));
        let _ = writeln!(s, "n = {}", self.grid.n);
        let _ = writeln!(s, "\n[controls]");
        let _ = writeln!(s, "dt0 = {}", fmt_f64(self.controls.dt0));
        let _ = writeln!(s, "t_end = {}", fmt_f64(self.controls.t_end));
        let _ = writeln!(
            s,
            "blowup_grad_factor = {}",
            fmt_f64(self.controls.blowup_grad_factor)
        );
        let _ = writeln!(s, "dt_floor = {}", fmt_f64(self.controls.dt_floor));
        let _ = writeln!(s, "record_every = {}", self.controls.record_every);
        let _ = writeln!(s, "eta = {}", fmt_f64(self.controls.eta));
        let _ = writeln!(s, "weight = {}", self.controls.weight);
        let _ = writeln!(s, "weight_scale = {}", fmt_f64(self.controls.weight_scale));
        if let Some(dir) = &self.output.dir {
            let _ = writeln!(s, "\n[output]");
            let _ = writeln!(s, "dir = {dir}");
        }
        if let Some(sweep) = &self.sweep {
            let _ = writeln!(s, "\n[sweep]");
            if !sweep.amplitudes.is_empty() {
                let _ = writeln!(s, "amplitudes = {}", fmt_list(&sweep.amplitudes));
            }
            if !sweep.sigmas.is_empty() {
                let _ = writeln!(s, "sigmas = {}", fmt_list(&sweep.sigmas));
            }
            if !sweep.lambdas.is_empty() {
                let _ = writeln!(s, "lambdas = {}", fmt_list(&sweep.lambdas));
            }
        }
        s
    }

    /// Hex SHA-256 of the canonical text; embedded in every output file.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_ini().as_bytes());
        let mut hex = String::with_capacity(64);
        for byte in digest {
            let _ = write!(hex, "{byte:02x}");
        }
        hex
    }

    /// Output directory precedence: config < INLS_OUT_DIR environment
    /// variable < command-line flag.
    pub fn resolve_out_dir(&self, flag: Option<&str>) -> String {
        if let Some(dir) = flag {
            return dir.to_string();
        }
        if let Ok(dir) = std::env::var("INLS_OUT_DIR") {
            if !dir.is_empty() {
                return dir;
            }
        }
        self.output.dir.clone().unwrap_or_else(|| ".".to_string())
    }
}
