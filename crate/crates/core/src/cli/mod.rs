//! Configuration files, command dispatch and CSV reports.

mod check;
mod config;
mod report;

use std::fmt;
use std::str::FromStr;

pub use check::{basis_sample, invariant_suite, sample_functions, CheckOutcome};
pub use config::{
    parse_config, serialize_config, ConfigError, Defaults, EdgeSpec, LocalizationSpec, Model,
    ShiftConfig,
};
pub use report::{fmt_bool, fmt_num, RunReport};

use crate::entropy::{entropy_counting, entropy_perron};
use crate::error::{Error, Result};
use crate::sft::enumerate_heteroclinic;
use crate::traces::{count_series, spectral_dimension, theta_trace, zeta_trace};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Entropy,
    Counts,
    TraceTheta,
    TraceZeta,
    Specdim,
    Check,
    Enumerate,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Entropy,
        Command::Counts,
        Command::TraceTheta,
        Command::TraceZeta,
        Command::Specdim,
        Command::Check,
        Command::Enumerate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Entropy => "entropy",
            Command::Counts => "counts",
            Command::TraceTheta => "trace-theta",
            Command::TraceZeta => "trace-zeta",
            Command::Specdim => "specdim",
            Command::Check => "check",
            Command::Enumerate => "enumerate",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown command {s:?}"))
    }
}

/// Command-line values that replace the config defaults.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub n_max: Option<i64>,
    pub t: Option<f64>,
    pub s: Option<f64>,
    pub tol: Option<f64>,
    pub window: Option<(i64, i64)>,
    /// Index into the configured localizations.
    pub localization: usize,
}

/// Parses `A:B`.
pub fn parse_window(s: &str) -> std::result::Result<(i64, i64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("window {s:?} is not of the form A:B"))?;
    let a = a.trim().parse().map_err(|e| format!("window start: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("window end: {e}"))?;
    Ok((a, b))
}

#[derive(Clone, Debug, PartialEq)]
struct Resolved {
    n_max: i64,
    t: f64,
    s: f64,
    tol: f64,
    window: (i64, i64),
    localization: usize,
}

fn resolve(m: &Model, o: &Overrides) -> Result<Resolved> {
    let d = &m.config.defaults;
    let r = Resolved {
        n_max: o.n_max.unwrap_or(d.n_max),
        t: o.t.unwrap_or(d.t),
        s: o.s.unwrap_or(d.s),
        tol: o.tol.unwrap_or(d.tol),
        window: o.window.unwrap_or((d.window[0], d.window[1])),
        localization: o.localization,
    };
    if r.tol.is_nan() || r.tol <= 0.0 {
        return Err(Error::NonPositiveTolerance(r.tol));
    }
    if r.localization >= m.localizations.len() {
        return Err(Error::InvalidBasicSet(format!(
            "localization {} not configured ({} available)",
            r.localization,
            m.localizations.len()
        )));
    }
    Ok(r)
}

/// Runs one command. Failures of individual checks or uncertified values
/// are recorded in the report; errors are returned only when a value
/// could not be computed at all.
pub fn run(command: Command, m: &Model, o: &Overrides) -> Result<RunReport> {
    let r = resolve(m, o)?;
    let resolved = format!(
        "{}\n[run]\ncommand = {command}\nn_max = {}\nt = {}\ns = {}\ntol = {}\nwindow = {}:{}\nlocalization = {}\n",
        serialize_config(&m.config),
        r.n_max,
        fmt_num(r.t),
        fmt_num(r.s),
        fmt_num(r.tol),
        r.window.0,
        r.window.1,
        r.localization
    );
    let w = &m.weights;
    let a = &m.localizations[r.localization];
    let name = command.name();
    let report = match command {
        Command::Counts => {
            let mut rep = RunReport::new(name, &resolved, &["n", "c_n", "certified"]);
            for (n, c, cert) in count_series(w, a, r.n_max)?.rows {
                rep.push(vec![n.to_string(), c.to_string(), fmt_bool(cert)], cert);
            }
            rep
        }
        Command::TraceTheta | Command::TraceZeta => {
            let res = if command == Command::TraceTheta {
                theta_trace(w, a, r.t, r.tol)?
            } else {
                zeta_trace(w, a, r.s, r.tol)?
            };
            let mut rep = RunReport::new(
                name,
                &resolved,
                &["termsUsed", "value", "tailBound", "converged"],
            );
            // a certified divergence is a certified answer
            let ok = res.converged || res.diverged;
            rep.push(
                vec![
                    res.terms_used.to_string(),
                    fmt_num(res.value),
                    fmt_num(res.tail_bound),
                    fmt_bool(res.converged),
                ],
                ok,
            );
            rep
        }
        Command::Specdim => {
            let dim = spectral_dimension(w, a, r.window)?;
            let h = entropy_perron(m.shift.adjacency(), 1e-12)?;
            let target = h.value / (m.shift.lambda() as f64).ln();
            let mut rep = RunReport::new(
                name,
                &resolved,
                &[
                    "nMin",
                    "nMax",
                    "dimEstimate",
                    "stdError",
                    "entropyPerron",
                    "target",
                ],
            );
            rep.push(
                vec![
                    dim.n_min.to_string(),
                    dim.n_max.to_string(),
                    fmt_num(dim.estimate),
                    fmt_num(dim.std_error),
                    fmt_num(h.value),
                    fmt_num(target),
                ],
                dim.estimate.is_finite(),
            );
            rep
        }
        Command::Entropy => {
            let mut rep = RunReport::new(
                name,
                &resolved,
                &[
                    "method",
                    "localization",
                    "value",
                    "errorBound",
                    "iterations",
                ],
            );
            let p = entropy_perron(m.shift.adjacency(), r.tol)?;
            let c = entropy_counting(w, a, r.n_max)?;
            for (e, loc) in [(p, "-".to_string()), (c, r.localization.to_string())] {
                rep.push(
                    vec![
                        e.method.name().into(),
                        loc,
                        fmt_num(e.value),
                        fmt_num(e.error_bound),
                        e.iterations.to_string(),
                    ],
                    e.error_bound.is_finite(),
                );
            }
            rep
        }
        Command::Check => {
            let mut rep = RunReport::new(name, &resolved, &["property", "passed", "detail"]);
            for c in invariant_suite(m, r.n_max, r.tol)? {
                rep.push(
                    vec![c.property.into(), fmt_bool(c.passed), c.detail],
                    c.passed,
                );
            }
            rep
        }
        Command::Enumerate => {
            // --n-max bounds the core length here
            let max_core = o.n_max.map_or(m.config.max_core, |n| n.max(0) as usize);
            let mut rep = RunReport::new(name, &resolved, &["index", "point"]);
            let pts = enumerate_heteroclinic(&m.shift, w.p(), w.q(), max_core)?;
            for (i, x) in pts.iter().enumerate() {
                rep.push(vec![i.to_string(), describe_point(m, x)], true);
            }
            rep
        }
    };
    Ok(report)
}

/// `(left)^∞ core . (right)^∞` with the coordinate of the first core edge.
pub fn describe_point(m: &Model, x: &crate::sft::HeteroclinicPoint) -> String {
    let cycle = |t: &crate::sft::Tail| m.shift.format_word(t.orbit().cycle());
    format!(
        "({})^inf [{}] @{} ({})^inf",
        cycle(x.left()),
        m.shift.format_word(x.core()),
        x.start(),
        cycle(x.right())
    )
}
