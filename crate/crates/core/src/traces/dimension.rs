use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fit::fit_line;
use crate::groupoid::BasicFunction;
use crate::weights::WeightSystem;

use super::census::{big_ln, count_series, Census};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DimensionEstimate {
    pub n_min: i64,
    pub n_max: i64,
    pub estimate: f64,
    pub std_error: f64,
}

/// Slope of `ln c(n)` over the window, divided by `ln λ`.
pub fn spectral_dimension(
    w: &WeightSystem,
    a: &BasicFunction,
    window: (i64, i64),
) -> Result<DimensionEstimate> {
    let (n_min, n_max) = window;
    if n_max - n_min < 8 {
        return Err(Error::InsufficientWindow(format!(
            "({n_min}, {n_max}) spans fewer than 8 shells"
        )));
    }
    let series = count_series(w, a, n_max)?;
    let mut pts = Vec::new();
    for n in n_min..=n_max {
        match series.rows.iter().find(|r| r.0 == n) {
            Some((_, c, true)) if !c.is_zero() => pts.push((n as f64, big_ln(c))),
            _ => {
                return Err(Error::UncertifiedCounts(format!(
                    "c({n}) is missing, zero or uncertified"
                )))
            }
        }
    }
    let fit =
        fit_line(&pts).ok_or_else(|| Error::InsufficientWindow("degenerate window".into()))?;
    let ln_lambda = (w.shift().lambda() as f64).ln();
    Ok(DimensionEstimate {
        n_min,
        n_max,
        estimate: fit.slope / ln_lambda,
        std_error: fit.slope_std_error / ln_lambda,
    })
}

/// Operator norm of `a(1+D²)^{-1}` restricted to `span{δ_x : x ∈ E_n}`,
/// together with `max|a|/(1+n²)`, for every nonempty shell up to `n_max`.
/// Since `h^s` is injective, the restricted norm is the largest
/// `|a(h^s(x),x)|/(1+ω_s(x)²)` over the shell.
pub fn compactness_norms(
    w: &WeightSystem,
    a: &BasicFunction,
    n_max: i64,
) -> Result<Vec<(i64, f64, f64)>> {
    let census = Census::new(w, a)?;
    let sup = a.sup_abs();
    let Some(start) = census.first_candidate() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for level in census.levels(start).take_while(|l| l.n <= n_max) {
        let norm = level
            .groups
            .iter()
            .filter(|g| !g.count.is_zero())
            .map(|g| {
                let om = g.omega.to_f64().unwrap_or(f64::NAN);
                g.amp / (1.0 + om * om)
            })
            .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.max(v))));
        if let Some(norm) = norm {
            let nf = level.n as f64;
            out.push((level.n, norm, sup / (1.0 + nf * nf)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::{Cylinder, EdgeId, EdgeShift, PeriodicOrbit};
    use crate::weights::Omega0Kind;
    use std::sync::Arc;

    fn ids(v: &[u32]) -> Vec<EdgeId> {
        v.iter().map(|&i| EdgeId(i)).collect()
    }

    fn setup(k: u64) -> (WeightSystem, BasicFunction) {
        let s = Arc::new(EdgeShift::full(k).unwrap());
        let p = PeriodicOrbit::new(&s, &ids(&[0])).unwrap();
        let q = PeriodicOrbit::new(&s, &ids(&[1])).unwrap();
        let w =
            WeightSystem::new(s.clone(), vec![p.clone()], vec![q], Omega0Kind::Indicator).unwrap();
        let c = Cylinder::from_words(&ids(&[1]), &[], 1).unwrap();
        let a = BasicFunction::indicator(&s, &c, &[p]).unwrap();
        (w, a)
    }

    #[test]
    fn full_shift_dimensions() {
        let (w, a) = setup(2);
        let d = spectral_dimension(&w, &a, (5, 30)).unwrap();
        assert!((d.estimate - 1.0).abs() < 1e-9);
        let (w, a) = setup(3);
        let d = spectral_dimension(&w, &a, (5, 30)).unwrap();
        assert!((d.estimate - 3f64.log2()).abs() < 1e-9);
    }

    #[test]
    fn window_checks() {
        let (w, a) = setup(2);
        assert!(matches!(
            spectral_dimension(&w, &a, (5, 10)),
            Err(Error::InsufficientWindow(_))
        ));
        assert!(matches!(
            spectral_dimension(&w, &a, (-5, 10)),
            Err(Error::UncertifiedCounts(_))
        ));
    }

    #[test]
    fn compactness_bound_on_positive_shells() {
        let (w, a) = setup(2);
        let rows = compactness_norms(&w, &a, 30).unwrap();
        assert_eq!(rows.first().map(|r| r.0), Some(1));
        for (n, norm, bound) in rows {
            assert!(norm <= bound, "n = {n}");
        }
    }
}
