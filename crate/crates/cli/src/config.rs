//! Run configuration. A JSON file given with `--config` supplies defaults;
//! command-line flags override it field by field.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use peakeq_core::equal_roots::EqualRootSpec;
use peakeq_core::recurrence::{coefficients_from_roots, spectral_radius};
use peakeq_core::special::{markov_equation, TrinomialEquation};
use peakeq_core::{DifferenceEquation, InitialCondition};
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TrinomialMode {
    Boundary,
    Classify,
    Areas,
    Ramp,
}

/// A characteristic root: a real number or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootValue {
    Real(f64),
    Complex([f64; 2]),
}

impl RootValue {
    pub fn to_complex(self) -> Complex64 {
        match self {
            RootValue::Real(r) => Complex64::new(r, 0.0),
            RootValue::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EqualRootsArg {
    pub n: usize,
    pub rho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrinomialArg {
    pub n: usize,
    pub a: f64,
    pub b: f64,
}

/// Named preset or explicit values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitSpec {
    Preset(String),
    Values(Vec<f64>),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    pub command: Option<String>,
    pub coeffs: Option<Vec<f64>>,
    pub roots: Option<Vec<RootValue>>,
    pub equal_roots: Option<EqualRootsArg>,
    pub trinomial: Option<TrinomialArg>,
    pub markov: Option<f64>,
    pub init: Option<InitSpec>,
    pub horizon: Option<usize>,
    pub epsilon: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub margin: Option<f64>,
    pub n: Option<usize>,
    pub n_max: Option<usize>,
    pub rho: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub samples: Option<usize>,
    pub resolution: Option<usize>,
    pub mode: Option<TrinomialMode>,
}

macro_rules! overlay_fields {
    ($base:ident, $top:ident, $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f; } )*
    };
}

/// Equation together with the parameters it was built from.
#[derive(Debug, Clone)]
pub struct ResolvedEquation {
    pub equation: DifferenceEquation,
    pub equal_roots: Option<EqualRootSpec>,
    /// ρ used by the geometric and ramp presets.
    pub rho: Option<f64>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `top` win.
    pub fn overlay(mut self, top: RunConfig) -> Self {
        // Equation sources replace each other as a group.
        if top.coeffs.is_some() || top.roots.is_some() || top.equal_roots.is_some() || top.trinomial.is_some() || top.markov.is_some() {
            self.coeffs = None;
            self.roots = None;
            self.equal_roots = None;
            self.trinomial = None;
            self.markov = None;
        }
        overlay_fields!(
            self, top, command, coeffs, roots, equal_roots, trinomial, markov, init, horizon,
            epsilon, out, format, seed, margin, n, n_max, rho, a, b, samples, resolution, mode
        );
        self
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn require<T: Copy>(value: Option<T>, flag: &str) -> Result<T> {
        value.ok_or_else(|| CliError::usage(format!("missing --{flag}")))
    }

    pub fn equation(&self) -> Result<ResolvedEquation> {
        let sources = [
            self.coeffs.is_some(),
            self.roots.is_some(),
            self.equal_roots.is_some(),
            self.trinomial.is_some(),
            self.markov.is_some(),
        ]
        .iter()
        .filter(|&&s| s)
        .count();
        if sources != 1 {
            return Err(CliError::usage(
                "give exactly one of --coeffs, --roots, --equal-roots, --trinomial, --markov",
            ));
        }
        let mut resolved = if let Some(c) = &self.coeffs {
            ResolvedEquation {
                equation: DifferenceEquation::new(c.clone())?,
                equal_roots: None,
                rho: None,
            }
        } else if let Some(r) = &self.roots {
            let roots: Vec<Complex64> = r.iter().map(|v| v.to_complex()).collect();
            ResolvedEquation {
                equation: coefficients_from_roots(&roots)?,
                equal_roots: None,
                rho: None,
            }
        } else if let Some(e) = self.equal_roots {
            let spec = EqualRootSpec::new(e.n, e.rho)?;
            ResolvedEquation {
                equation: spec.equation(),
                equal_roots: Some(spec),
                rho: Some(e.rho),
            }
        } else if let Some(t) = self.trinomial {
            let tri = TrinomialEquation::new(t.n, t.a, t.b)?;
            ResolvedEquation {
                equation: tri.to_equation(),
                equal_roots: None,
                rho: Some(t.a * t.n as f64 / (t.n as f64 + 1.0)),
            }
        } else {
            let rho = self.markov.expect("one source is set");
            ResolvedEquation {
                equation: markov_equation(rho)?,
                equal_roots: None,
                rho: Some(rho),
            }
        };
        if let Some(rho) = self.rho {
            resolved.rho = Some(rho);
        }
        Ok(resolved)
    }

    pub fn initial_condition(&self, eq: &ResolvedEquation) -> Result<InitialCondition> {
        let n = eq.equation.order();
        let spec = self.init.clone().unwrap_or(InitSpec::Preset("impulse".into()));
        let rho = || -> Result<f64> {
            match eq.rho {
                Some(r) => Ok(r),
                None => Ok(spectral_radius(&eq.equation)?),
            }
        };
        let init = match spec {
            InitSpec::Values(v) => InitialCondition::new(v)?,
            InitSpec::Preset(name) => match name.as_str() {
                "impulse" => InitialCondition::impulse(n),
                "alternating" => InitialCondition::alternating(n),
                "geometric" => InitialCondition::geometric(n, rho()?),
                "ones" => InitialCondition::ones(n),
                "ramp" => InitialCondition::ramp(n, rho()?),
                other => return Err(CliError::usage(format!("unknown init preset `{other}`"))),
            },
        };
        if init.len() != n {
            return Err(peakeq_core::Error::DimensionMismatch {
                expected: n,
                found: init.len(),
            }
            .into());
        }
        Ok(init)
    }
}

/// `1.5,-0.3` or `[1.5, -0.3]`.
pub fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.trim()
        .trim_start_matches('[')
        .trim_end_matches(']')
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{}`: {e}", t.trim())))
        .collect()
}

/// `0.5`, `0.3+0.4i`, `-0.2-0.1i` or `0.7i`.
pub fn parse_root(s: &str) -> std::result::Result<RootValue, String> {
    let t = s.trim();
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse::<f64>().map(RootValue::Real).map_err(|e| format!("`{t}`: {e}"));
    };
    // Split at the last sign that is not the leading one or part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    let re: f64 = re.parse().map_err(|e| format!("`{t}`: {e}"))?;
    let im: f64 = im.trim_start_matches('+').parse().map_err(|e| format!("`{t}`: {e}"))?;
    Ok(if im == 0.0 {
        RootValue::Real(re)
    } else {
        RootValue::Complex([re, im])
    })
}

pub fn parse_roots(s: &str) -> std::result::Result<Vec<RootValue>, String> {
    s.split(',').map(parse_root).collect()
}

pub fn parse_equal_roots(s: &str) -> std::result::Result<EqualRootsArg, String> {
    let v = parse_list(s)?;
    match v.as_slice() {
        [n, rho] if n.fract() == 0.0 && *n >= 1.0 => Ok(EqualRootsArg { n: *n as usize, rho: *rho }),
        _ => Err("expected `n,rho`".into()),
    }
}

pub fn parse_trinomial(s: &str) -> std::result::Result<TrinomialArg, String> {
    let v = parse_list(s)?;
    match v.as_slice() {
        [n, a, b] if n.fract() == 0.0 && *n >= 1.0 => Ok(TrinomialArg { n: *n as usize, a: *a, b: *b }),
        _ => Err("expected `n,a,b`".into()),
    }
}

pub fn parse_init(s: &str) -> std::result::Result<InitSpec, String> {
    match s {
        "impulse" | "alternating" | "geometric" | "ones" | "ramp" => Ok(InitSpec::Preset(s.into())),
        _ => parse_list(s).map(InitSpec::Values).map_err(|e| {
            format!("{e} (expected a preset impulse|alternating|geometric|ones|ramp or comma-separated values)")
        }),
    }
}
