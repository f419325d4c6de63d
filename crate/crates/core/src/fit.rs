//! Ordinary least squares on `(x, y)` samples.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope (0 for an exact fit).
    pub slope_std_error: f64,
}

/// Fits `y = a + b x`. Needs at least three points with distinct `x`.
pub fn fit_line(points: &[(f64, f64)]) -> Option<LineFit> {
    let m = points.len();
    if m < 3 {
        return None;
    }
    let mf = m as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / mf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / mf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let slope_std_error = (ssr / (mf - 2.0) / sxx).sqrt();
    Some(LineFit {
        slope,
        intercept,
        slope_std_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let pts: Vec<_> = (0..10).map(|i| (i as f64, 3.0 + 0.5 * i as f64)).collect();
        let f = fit_line(&pts).unwrap();
        assert!((f.slope - 0.5).abs() < 1e-12);
        assert!((f.intercept - 3.0).abs() < 1e-12);
        assert!(f.slope_std_error < 1e-12);
    }

    #[test]
    fn noisy_line_has_error() {
        let pts: Vec<_> = (0..10)
            .map(|i| (i as f64, i as f64 + if i % 2 == 0 { 0.1 } else { -0.1 }))
            .collect();
        let f = fit_line(&pts).unwrap();
        assert!(f.slope_std_error > 0.0);
        assert!(fit_line(&pts[..2]).is_none());
    }
}
