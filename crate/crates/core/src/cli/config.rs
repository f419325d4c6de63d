use std::fmt;
use std::sync::Arc;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::groupoid::{amp, BasicFunction};
use crate::sft::{Cylinder, Edge, EdgeId, EdgeShift, PeriodicOrbit};
use crate::weights::{Omega0Kind, WeightSystem};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

/// A diagonal localization: the constant `value` on the cylinder whose past
/// is `base` repeated, followed by `word` ending at coordinate `top`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalizationSpec {
    pub base: String,
    #[serde(default)]
    pub word: String,
    pub top: i64,
    #[serde(default = "one")]
    pub value: i64,
}

fn one() -> i64 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Defaults {
    #[serde(default = "default_n_max")]
    pub n_max: i64,
    #[serde(default = "default_window")]
    pub window: [i64; 2],
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_t")]
    pub t: f64,
    #[serde(default = "default_s")]
    pub s: f64,
}

fn default_n_max() -> i64 {
    30
}
fn default_window() -> [i64; 2] {
    [5, 30]
}
fn default_tol() -> f64 {
    1e-9
}
fn default_t() -> f64 {
    1.0
}
fn default_s() -> f64 {
    2.0
}

impl Default for Defaults {
    fn default() -> Self {
        Self {
            n_max: default_n_max(),
            window: default_window(),
            tol: default_tol(),
            t: default_t(),
            s: default_s(),
        }
    }
}

/// The declarative description of one shift and its weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShiftConfig {
    pub name: String,
    pub adjacency: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<EdgeSpec>>,
    /// Cycles of `P`, each a space-separated list of edge labels.
    pub p: Vec<String>,
    pub q: Vec<String>,
    #[serde(default = "default_omega0")]
    pub omega0: String,
    /// Lipschitz constant of `ω₀`, as an integer or a fraction `"a/b"`.
    #[serde(default = "default_c0")]
    pub c0: String,
    #[serde(default = "default_max_core")]
    pub max_core: usize,
    #[serde(default)]
    pub defaults: Defaults,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub localizations: Vec<LocalizationSpec>,
}

fn default_omega0() -> String {
    "indicator".into()
}
fn default_c0() -> String {
    "1".into()
}
fn default_max_core() -> usize {
    12
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConfigError {
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    Validation(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Parse {
                line,
                column,
                message,
            } => write!(f, "parse error at line {line}, column {column}: {message}"),
            ConfigError::Validation(m) => write!(f, "validation error: {m}"),
        }
    }
}

impl std::error::Error for ConfigError {}

impl From<Error> for ConfigError {
    fn from(e: Error) -> Self {
        ConfigError::Validation(e.to_string())
    }
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.chars().rev().take_while(|&c| c != '\n').count() + 1;
    (line, column)
}

/// Strict parse followed by full validation.
pub fn parse_config(text: &str) -> Result<ShiftConfig, ConfigError> {
    let cfg: ShiftConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
        ConfigError::Parse {
            line,
            column,
            message: e.message().trim().to_string(),
        }
    })?;
    Model::build(&cfg)?;
    Ok(cfg)
}

pub fn serialize_config(cfg: &ShiftConfig) -> String {
    toml::to_string(cfg).expect("configs serialize")
}

/// A validated configuration with its shift, weights and localizations.
#[derive(Clone, Debug)]
pub struct Model {
    pub config: ShiftConfig,
    pub shift: Arc<EdgeShift>,
    pub weights: WeightSystem,
    pub localizations: Vec<BasicFunction>,
}

fn parse_rational(s: &str) -> Option<Rational64> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b) = (a.trim().parse().ok()?, b.trim().parse::<i64>().ok()?);
            (b != 0).then(|| Rational64::new(a, b))
        }
        None => s.parse().ok().map(Rational64::from_integer),
    }
}

impl Model {
    pub fn build(cfg: &ShiftConfig) -> Result<Self, ConfigError> {
        let invalid = |m: String| ConfigError::Validation(m);
        let shift = match &cfg.edges {
            None => EdgeShift::from_adjacency(cfg.adjacency.clone())?,
            Some(edges) => {
                let shift = EdgeShift::from_edges(
                    cfg.adjacency.len(),
                    edges
                        .iter()
                        .map(|e| Edge {
                            source: e.source,
                            target: e.target,
                            label: e.label.clone(),
                        })
                        .collect(),
                )?;
                if shift.adjacency() != cfg.adjacency.as_slice() {
                    return Err(invalid(
                        "edge list does not match the adjacency matrix".into(),
                    ));
                }
                shift
            }
        };
        let orbits = |words: &[String], which: &str| -> Result<Vec<PeriodicOrbit>, ConfigError> {
            if words.is_empty() {
                return Err(invalid(format!("{which} is empty")));
            }
            words
                .iter()
                .map(|w| {
                    let word = shift.parse_word(w)?;
                    PeriodicOrbit::new(&shift, &word)
                        .map_err(|_| invalid(format!("{which} cycle {w:?} is not a closed path")))
                })
                .collect()
        };
        let p = orbits(&cfg.p, "P")?;
        let q = orbits(&cfg.q, "Q")?;
        let kind = Omega0Kind::parse(&cfg.omega0)
            .ok_or_else(|| invalid(format!("unknown omega0 kind {:?}", cfg.omega0)))?;
        let c0 = parse_rational(&cfg.c0)
            .ok_or_else(|| invalid(format!("c0 {:?} is not a rational number", cfg.c0)))?;
        let d = &cfg.defaults;
        for (name, v) in [("tol", d.tol), ("t", d.t), ("s", d.s)] {
            if v.is_nan() || v <= 0.0 {
                return Err(invalid(format!("defaults.{name} must be positive")));
            }
        }
        if d.window[1] < d.window[0] {
            return Err(invalid("defaults.window is empty".into()));
        }
        let shift = Arc::new(shift);
        let weights = WeightSystem::new(shift.clone(), p, q, kind)?.with_c0(c0)?;

        let specs = if cfg.localizations.is_empty() {
            vec![LocalizationSpec {
                base: cfg.q[0].clone(),
                word: String::new(),
                top: 1,
                value: 1,
            }]
        } else {
            cfg.localizations.clone()
        };
        let mut localizations = Vec::new();
        for (i, l) in specs.iter().enumerate() {
            let base = shift.parse_word(&l.base)?;
            let word: Vec<EdgeId> = shift.parse_word(&l.word)?;
            if !shift.is_closed_path(&base) {
                return Err(invalid(format!(
                    "localization {i}: base is not a closed path"
                )));
            }
            if l.value < 0 {
                return Err(invalid(format!(
                    "localization {i}: value must be nonnegative"
                )));
            }
            let c = Cylinder::from_words(&base, &word, l.top)?;
            if !c.is_valid(&shift) {
                return Err(invalid(format!(
                    "localization {i}: word is not a path after the base"
                )));
            }
            localizations.push(BasicFunction::diagonal_constant(
                &shift,
                &c,
                weights.p(),
                amp(l.value),
            )?);
        }
        Ok(Self {
            config: cfg.clone(),
            shift,
            weights,
            localizations,
        })
    }
}
