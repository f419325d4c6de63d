//! Topological entropy of an edge shift, from the Perron root of the
//! adjacency matrix and from the growth of localized shell counts.

use crate::error::{Error, Result};
use crate::fit::fit_line;
use crate::groupoid::BasicFunction;
use crate::sft::is_irreducible;
use crate::traces::{big_ln, count_series};
use crate::weights::WeightSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntropyMethod {
    Perron,
    Counting,
}

impl EntropyMethod {
    pub fn name(self) -> &'static str {
        match self {
            EntropyMethod::Perron => "perron",
            EntropyMethod::Counting => "counting",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyResult {
    /// Entropy in nats.
    pub value: f64,
    pub method: EntropyMethod,
    pub error_bound: f64,
    pub iterations: usize,
}

/// `ln ρ(A)` enclosed by Collatz–Wielandt bounds
/// `min_i (Ax)_i/x_i <= ρ <= max_i (Ax)_i/x_i` for positive `x`.
pub fn entropy_perron(a: &[Vec<u64>], tol: f64) -> Result<EntropyResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::NonPositiveTolerance(tol));
    }
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidShift("adjacency matrix is not square".into()));
    }
    if a.iter().flatten().all(|&v| v == 0) {
        return Err(Error::ZeroMatrix);
    }
    if !is_irreducible(a) {
        return Err(Error::ReducibleMatrix);
    }
    let mul = |x: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| (0..n).map(|j| a[i][j] as f64 * x[j]).sum())
            .collect()
    };
    let mut x = vec![1.0; n];
    let mut iterations = 0;
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    while iterations < 100_000 {
        iterations += 1;
        let ax = mul(&x);
        lo = (0..n).map(|i| ax[i] / x[i]).fold(f64::INFINITY, f64::min);
        hi = (0..n).map(|i| ax[i] / x[i]).fold(0.0, f64::max);
        if hi.ln() - lo.ln() <= 2.0 * tol {
            break;
        }
        // (A + I) is primitive, so its power iteration converges
        let next: Vec<f64> = ax.iter().zip(&x).map(|(p, q)| p + q).collect();
        let norm = next.iter().cloned().fold(0.0, f64::max);
        x = next.into_iter().map(|v| v / norm).collect();
    }
    let (llo, lhi) = (lo.ln(), hi.ln());
    Ok(EntropyResult {
        value: 0.5 * (llo + lhi),
        method: EntropyMethod::Perron,
        error_bound: 0.5 * (lhi - llo),
        iterations,
    })
}

/// Growth rate of `c(n) = #(E_n ∩ Source(a))`: the least-squares slope of
/// `ln c(n)` over `[n_max/2, n_max]`. The error bound is the spread of the
/// slope over the two halves of that window plus two standard errors.
pub fn entropy_counting(w: &WeightSystem, a: &BasicFunction, n_max: i64) -> Result<EntropyResult> {
    if n_max < 10 {
        return Err(Error::InsufficientWindow(format!("n_max = {n_max} < 10")));
    }
    let series = count_series(w, a, n_max)?;
    let lo = n_max / 2;
    let mut pts = Vec::new();
    for (n, c, certified) in &series.rows {
        if *n < lo {
            continue;
        }
        if !certified || c.bits() == 0 {
            return Err(Error::UncertifiedCounts(format!("c({n}) unusable")));
        }
        pts.push((*n as f64, big_ln(c)));
    }
    let whole =
        fit_line(&pts).ok_or_else(|| Error::InsufficientWindow("degenerate window".into()))?;
    let mid = pts.len() / 2;
    let spread = [fit_line(&pts[..=mid]), fit_line(&pts[mid..])]
        .iter()
        .flatten()
        .map(|f| (f.slope - whole.slope).abs())
        .fold(0.0, f64::max);
    Ok(EntropyResult {
        value: whole.slope,
        method: EntropyMethod::Counting,
        error_bound: spread + 2.0 * whole.slope_std_error,
        iterations: pts.len(),
    })
}
