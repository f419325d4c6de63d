use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::groupoid::BasicFunction;
use crate::weights::WeightSystem;

use super::census::{big_ln, checked_census, Census, Level};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceResult {
    pub value: f64,
    /// Certified upper bound on the omitted tail (`inf` when none exists).
    pub tail_bound: f64,
    pub converged: bool,
    /// Certified divergence: partial sums passed the ceiling while the terms
    /// grew at least like `γ^n` with `γ > 1` over the last window.
    pub diverged: bool,
    pub terms_used: usize,
}

impl TraceResult {
    fn zero() -> Self {
        Self {
            value: 0.0,
            tail_bound: 0.0,
            converged: true,
            diverged: false,
            terms_used: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesOptions {
    pub max_terms: usize,
    /// Partial-sum level beyond which divergence may be declared.
    pub ceiling: f64,
    /// Number of consecutive terms whose growth must exceed 1.
    pub window: usize,
}

impl Default for SeriesOptions {
    fn default() -> Self {
        Self {
            max_terms: 20_000,
            ceiling: 1e6,
            window: 32,
        }
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::NonPositiveTolerance(tol));
    }
    Ok(())
}

/// `ln Σ_groups |a|·count·f(ω)` for one shell.
fn log_term(level: &Level, log_f: impl Fn(f64) -> f64) -> f64 {
    let logs: Vec<f64> = level
        .groups
        .iter()
        .filter(|g| g.amp > 0.0)
        .map(|g| g.amp.ln() + big_ln(&g.count) + log_f(g.omega.to_f64().unwrap_or(f64::NAN)))
        .collect();
    log_sum_exp(&logs)
}

fn log_sum_exp(logs: &[f64]) -> f64 {
    let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + logs.iter().map(|l| (l - m).exp()).sum::<f64>().ln()
}

/// Sums the shells of `census` with weight `exp(log_f(ω))`. `tail(n0)` must
/// bound the sum over all shells beyond `n0` once `n0 >= ready`.
fn run_series(
    census: &Census,
    tol: f64,
    opts: SeriesOptions,
    log_f: impl Fn(f64) -> f64,
    tail: impl Fn(i64) -> f64,
) -> TraceResult {
    let Some(start) = census.first_candidate() else {
        return TraceResult::zero();
    };
    let ready = census.max_top().max(0);
    let mut value = 0.0;
    let mut recent: Vec<(i64, f64)> = Vec::new();
    let mut terms = 0;
    let mut tail_bound = f64::INFINITY;
    for level in census.levels(start) {
        let n = level.n;
        let lt = log_term(&level, &log_f);
        if lt > f64::NEG_INFINITY {
            value += lt.exp();
        }
        terms += 1;
        recent.push((n, lt));
        if recent.len() > opts.window {
            recent.remove(0);
        }
        if n >= ready {
            tail_bound = tail(n);
            if tail_bound <= tol {
                return TraceResult {
                    value,
                    tail_bound,
                    converged: true,
                    diverged: false,
                    terms_used: terms,
                };
            }
            let growing = recent.len() == opts.window
                && recent.iter().all(|&(m, l)| m > 0 && l / m as f64 > 0.0);
            if value > opts.ceiling && growing {
                return TraceResult {
                    value,
                    tail_bound: f64::INFINITY,
                    converged: false,
                    diverged: true,
                    terms_used: terms,
                };
            }
        }
        if terms >= opts.max_terms {
            break;
        }
    }
    TraceResult {
        value,
        tail_bound,
        converged: false,
        diverged: false,
        terms_used: terms,
    }
}

/// `Tr(a e^{-t(1+D²)}) = Σ_x a(x,x) e^{-t(1+ω_s(x)²)}`.
pub fn theta_trace(w: &WeightSystem, a: &BasicFunction, t: f64, tol: f64) -> Result<TraceResult> {
    theta_trace_with(w, a, t, tol, SeriesOptions::default())
}

pub fn theta_trace_with(
    w: &WeightSystem,
    a: &BasicFunction,
    t: f64,
    tol: f64,
    opts: SeriesOptions,
) -> Result<TraceResult> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::NonPositiveT(t));
    }
    check_tol(tol)?;
    let census = checked_census(w, a)?;
    let (rho, g) = census.growth_bound();
    // deep shell n: ω >= n >= 0, so its term is at most G ρ^n e^{-t(1+n²)};
    // successive ratios ρ e^{-t(2n+1)} decrease in n
    let bound = |n: i64| {
        let nf = n as f64;
        g * (nf * rho.ln() - t * (1.0 + nf * nf)).exp()
    };
    let tail = |n0: i64| {
        let n = n0 + 1;
        let q = rho * (-t * (2.0 * n as f64 + 1.0)).exp();
        if q < 1.0 {
            bound(n) / (1.0 - q)
        } else {
            f64::INFINITY
        }
    };
    Ok(run_series(
        &census,
        tol,
        opts,
        |om| -t * (1.0 + om * om),
        tail,
    ))
}

/// `Tr(a (1+𝔇²)^{-s/2}) = Σ_x a(x,x) (1 + λ^{2ω_s(x)})^{-s/2}`.
pub fn zeta_trace(w: &WeightSystem, a: &BasicFunction, s: f64, tol: f64) -> Result<TraceResult> {
    zeta_trace_with(w, a, s, tol, SeriesOptions::default())
}

pub fn zeta_trace_with(
    w: &WeightSystem,
    a: &BasicFunction,
    s: f64,
    tol: f64,
    opts: SeriesOptions,
) -> Result<TraceResult> {
    if s.is_nan() || s <= 0.0 {
        return Err(Error::NonPositiveS(s));
    }
    check_tol(tol)?;
    let census = checked_census(w, a)?;
    let (rho, g) = census.growth_bound();
    let ln_lambda = (w.shift().lambda() as f64).ln();
    // (1+λ^{2ω})^{-s/2} <= λ^{-sω} <= λ^{-sn} on deep shells with n >= 0
    let r = rho * (-s * ln_lambda).exp();
    let tail = |n0: i64| {
        if r < 1.0 {
            g * r.powf(n0 as f64 + 1.0) / (1.0 - r)
        } else {
            f64::INFINITY
        }
    };
    let log_f = |om: f64| {
        let x = 2.0 * om * ln_lambda;
        // ln(1 + e^x), stable for large |x|
        let ln1p = if x > 0.0 {
            x + (-x).exp().ln_1p()
        } else {
            x.exp().ln_1p()
        };
        -0.5 * s * ln1p
    };
    Ok(run_series(&census, tol, opts, log_f, tail))
}

/// Locates the abscissa of convergence of the zeta trace by bisection on
/// certified convergence and divergence. Returns the final bracket.
pub fn zeta_abscissa_bisection(
    w: &WeightSystem,
    a: &BasicFunction,
    mut lo: f64,
    mut hi: f64,
    width: f64,
) -> Result<(f64, f64)> {
    let tol = 1e-6;
    while hi - lo > width {
        let mid = 0.5 * (lo + hi);
        let r = zeta_trace(w, a, mid, tol)?;
        if r.converged {
            hi = mid;
        } else if r.diverged {
            lo = mid;
        } else {
            break;
        }
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{amp, BasicFunction};
    use crate::sft::{Cylinder, EdgeId, EdgeShift, PeriodicOrbit};
    use crate::weights::Omega0Kind;
    use std::sync::Arc;

    fn ids(v: &[u32]) -> Vec<EdgeId> {
        v.iter().map(|&i| EdgeId(i)).collect()
    }

    fn full2() -> (WeightSystem, BasicFunction) {
        let s = Arc::new(EdgeShift::full(2).unwrap());
        let p = PeriodicOrbit::new(&s, &ids(&[0])).unwrap();
        let q = PeriodicOrbit::new(&s, &ids(&[1])).unwrap();
        let w =
            WeightSystem::new(s.clone(), vec![p.clone()], vec![q], Omega0Kind::Indicator).unwrap();
        let c = Cylinder::from_words(&ids(&[1]), &[], 1).unwrap();
        let a = BasicFunction::indicator(&s, &c, &[p]).unwrap();
        (w, a)
    }

    /// Partial sums of the closed form `c(1)=1, c(n)=2^{n-2}`, `ω = n+1`.
    fn theta_oracle(t: f64, n_max: i64) -> f64 {
        let mut s = (-t * (1.0 + 4.0)).exp();
        for n in 2..=n_max {
            let om = (n + 1) as f64;
            s += 2f64.powi((n - 2) as i32) * (-t * (1.0 + om * om)).exp();
        }
        s
    }

    #[test]
    fn theta_full_two_shift() {
        let (w, a) = full2();
        let r = theta_trace(&w, &a, 1.0, 1e-9).unwrap();
        assert!(r.converged);
        assert!(r.terms_used <= 15);
        assert!((r.value - theta_oracle(1.0, 40)).abs() < 1e-12);
        let r2 = theta_trace(&w, &a, 2.0, 1e-9).unwrap();
        assert!(r2.value <= r.value);
    }

    #[test]
    fn zeta_threshold_full_two_shift() {
        let (w, a) = full2();
        let r = zeta_trace(&w, &a, 2.0, 1e-9).unwrap();
        assert!(r.converged && !r.diverged);
        let mut oracle = 0.0;
        for n in 1..200i64 {
            let c = if n == 1 {
                1.0
            } else {
                2f64.powi((n - 2) as i32)
            };
            let om = (n + 1) as f64;
            oracle += c * (1.0 + 4f64.powf(om)).powf(-1.0);
        }
        assert!((r.value - oracle).abs() < 1e-8);
        let d = zeta_trace(&w, &a, 0.5, 1e-9).unwrap();
        assert!(!d.converged && d.diverged);
    }

    #[test]
    fn zero_localization_and_bad_parameters() {
        let (w, a) = full2();
        let z = BasicFunction::constant(a.set().clone(), amp(0));
        let r = theta_trace(&w, &z, 1.0, 1e-9).unwrap();
        assert_eq!((r.value, r.tail_bound), (0.0, 0.0));
        assert_eq!(zeta_trace(&w, &z, 1.0, 1e-9).unwrap().value, 0.0);
        assert!(matches!(
            theta_trace(&w, &a, 0.0, 1e-9),
            Err(Error::NonPositiveT(_))
        ));
        assert!(matches!(
            zeta_trace(&w, &a, -1.0, 1e-9),
            Err(Error::NonPositiveS(_))
        ));
    }

    #[test]
    fn bisection_brackets_one() {
        let (w, a) = full2();
        let (lo, hi) = zeta_abscissa_bisection(&w, &a, 0.5, 1.5, 0.2).unwrap();
        assert!(lo <= 1.0 && 1.0 <= hi, "{lo} {hi}");
    }
}
