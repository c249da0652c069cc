//! TOML run configuration. Rationals are always written as `"p/q"` strings.
//!
//! ```toml
//! k = 2
//! background = "symbolic"   # or "zero"
//! h = "3/2"                 # scale of the invariant tensor, default "1"
//! jet_order = 3
//! gauge_parameters = "symbolic"   # or "zero"
//!
//! [algebra]
//! name = "su2"              # or: dim + structure_constants
//!
//! [invariant]
//! name = "killing"          # or: entries
//! ```

use std::path::Path;

use jetvar::gauge::{InvariantTensor, LieAlgebra};
use jetvar::{Background, Rational};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    k: usize,
    #[serde(default = "default_background")]
    background: String,
    #[serde(default = "default_h")]
    h: String,
    #[serde(default = "default_jet_order")]
    jet_order: usize,
    #[serde(default = "default_parameters")]
    gauge_parameters: String,
    algebra: RawAlgebra,
    #[serde(default)]
    invariant: Option<RawInvariant>,
}

fn default_background() -> String {
    "symbolic".into()
}

fn default_h() -> String {
    "1".into()
}

fn default_jet_order() -> usize {
    3
}

fn default_parameters() -> String {
    "symbolic".into()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlgebra {
    name: Option<String>,
    dim: Option<usize>,
    #[serde(default)]
    structure_constants: Vec<RawConstant>,
}

/// `c^r_{pq}`; the table must list both `(p, q)` and `(q, p)`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstant {
    r: usize,
    p: usize,
    q: usize,
    value: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInvariant {
    name: Option<String>,
    #[serde(default)]
    entries: Vec<RawEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    index: Vec<usize>,
    value: String,
}

/// Algebra as written in the file. Building it may fail with Jacobi or
/// antisymmetry violations, which `check-algebra` reports as a failed check.
#[derive(Clone, Debug)]
pub enum AlgebraSpec {
    Builtin(String),
    Explicit { dim: usize, constants: Vec<(usize, usize, usize, Rational)> },
}

impl AlgebraSpec {
    pub fn build(&self) -> jetvar::Result<LieAlgebra> {
        match self {
            AlgebraSpec::Builtin(name) => LieAlgebra::builtin(name),
            AlgebraSpec::Explicit { dim, constants } => LieAlgebra::from_structure_constants("explicit", *dim, constants),
        }
    }
}

#[derive(Clone, Debug)]
pub enum TensorSpec {
    Builtin(String),
    Explicit(Vec<(Vec<usize>, Rational)>),
}

impl TensorSpec {
    /// Tensor of degree `k` on `alg`, scaled by `h`.
    pub fn build(&self, alg: &LieAlgebra, k: usize, h: &Rational) -> jetvar::Result<InvariantTensor> {
        let b = match self {
            TensorSpec::Builtin(name) => InvariantTensor::builtin(name, alg, k)?,
            TensorSpec::Explicit(entries) => InvariantTensor::from_entries("explicit-tensor", alg.dim(), k, entries)?,
        };
        Ok(b.scaled(h))
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub algebra: AlgebraSpec,
    pub invariant: TensorSpec,
    pub k: usize,
    pub background: Background,
    pub h: Rational,
    pub jet_order: usize,
    /// Use `ξ = 0` instead of symbolic gauge parameters.
    pub zero_parameters: bool,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map(|s| line_col(text, s.start)).unwrap_or((1, 1));
            ConfigError::Parse { path: origin.to_string(), line, column, message: e.message().to_string() }
        })?;
        raw.validate()
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn rational(s: &str, what: &str) -> Result<Rational, ConfigError> {
    s.parse().map_err(|_| ConfigError::Invalid(format!("{what}: `{s}` is not a rational \"p/q\"")))
}

impl RawConfig {
    fn validate(self) -> Result<RunConfig, ConfigError> {
        if self.k < 2 {
            return Err(ConfigError::Invalid(format!("k must be at least 2, got {}", self.k)));
        }
        if self.jet_order < 2 {
            return Err(ConfigError::Invalid(format!("jet_order must be at least 2, got {}", self.jet_order)));
        }
        let background = match self.background.as_str() {
            "zero" => Background::Zero,
            "symbolic" => Background::Symbolic,
            other => return Err(ConfigError::Invalid(format!("background must be \"zero\" or \"symbolic\", got `{other}`"))),
        };
        let zero_parameters = match self.gauge_parameters.as_str() {
            "zero" => true,
            "symbolic" => false,
            other => {
                return Err(ConfigError::Invalid(format!(
                    "gauge_parameters must be \"zero\" or \"symbolic\", got `{other}`"
                )))
            }
        };
        let h = rational(&self.h, "h")?;
        if h.is_zero() {
            return Err(ConfigError::Invalid("h must be nonzero".into()));
        }
        let algebra = match (self.algebra.name, self.algebra.dim) {
            (Some(name), None) if self.algebra.structure_constants.is_empty() => AlgebraSpec::Builtin(name),
            (None, Some(dim)) => {
                let mut constants = Vec::new();
                for c in &self.algebra.structure_constants {
                    if c.r >= dim || c.p >= dim || c.q >= dim {
                        return Err(ConfigError::Invalid(format!(
                            "structure constant ({}, {}, {}) out of range for dimension {dim}",
                            c.r, c.p, c.q
                        )));
                    }
                    constants.push((c.r, c.p, c.q, rational(&c.value, "structure constant")?));
                }
                AlgebraSpec::Explicit { dim, constants }
            }
            _ => {
                return Err(ConfigError::Invalid(
                    "[algebra] needs either `name` or `dim` with `structure_constants`".into(),
                ))
            }
        };
        let invariant = match self.invariant {
            None => TensorSpec::Builtin("killing".into()),
            Some(RawInvariant { name: Some(name), entries }) if entries.is_empty() => TensorSpec::Builtin(name),
            Some(RawInvariant { name: None, entries }) if !entries.is_empty() => {
                let mut out = Vec::new();
                for e in entries {
                    if e.index.len() != self.k {
                        return Err(ConfigError::Invalid(format!(
                            "invariant entry {:?} must have k = {} indices",
                            e.index, self.k
                        )));
                    }
                    out.push((e.index, rational(&e.value, "invariant entry")?));
                }
                TensorSpec::Explicit(out)
            }
            Some(_) => return Err(ConfigError::Invalid("[invariant] needs either `name` or `entries`".into())),
        };
        Ok(RunConfig { algebra, invariant, k: self.k, background, h, jet_order: self.jet_order, zero_parameters })
    }
}
