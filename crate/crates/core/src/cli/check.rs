use num_complex::Complex;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::entropy::{entropy_counting, entropy_perron};
use crate::error::Result;
use crate::groupoid::{Amp, BasicFunction, BasicSet, StateVector};
use crate::sft::{enumerate_window, HeteroclinicPoint};
use crate::traces::{
    commutator_norm_bound, compactness_norms, count_by_search, count_series,
    shift_commutator_apply, spectral_dimension, theta_trace, zeta_trace, DiracKind,
};
use crate::weights::{Omega0Kind, WeightSystem};

use super::config::Model;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub property: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(property: &'static str, failures: usize, total: usize, what: &str) -> CheckOutcome {
    CheckOutcome {
        property,
        passed: failures == 0 && total > 0,
        detail: format!("{} of {total} {what} failed", failures),
    }
}

/// Heteroclinic points with cores placed around coordinate 0, growing the
/// core bound until at least `min_count` points are found.
pub fn basis_sample(m: &Model, min_count: usize) -> Result<Vec<HeteroclinicPoint>> {
    let mut pts = Vec::new();
    for core in 1..=m.config.max_core.max(1) {
        pts = enumerate_window(&m.shift, m.weights.p(), m.weights.q(), core, -4..=4)?;
        if pts.len() >= min_count {
            break;
        }
    }
    pts.sort();
    pts.dedup();
    Ok(pts)
}

/// Localizations plus a few non-diagonal functions built from pairs of
/// stably equivalent sample points.
pub fn sample_functions(m: &Model, pts: &[HeteroclinicPoint]) -> Vec<BasicFunction> {
    let mut out = m.localizations.clone();
    let mut splices = 0;
    'outer: for (i, v) in pts.iter().enumerate() {
        for w in pts[i + 1..].iter().step_by(7) {
            if v.right() != w.right() {
                continue;
            }
            let depth = v.end().max(w.end()) + 2;
            let Ok(set) = BasicSet::new(v.clone(), w.clone(), depth) else {
                continue;
            };
            let source = set.source();
            let pieces: Vec<(_, Amp)> = source
                .children(&m.shift)
                .into_iter()
                .enumerate()
                .map(|(j, c)| {
                    let re = Rational64::from_integer(j as i64 + 1);
                    (c, Complex::new(re, Rational64::new(1, 2)))
                })
                .collect();
            out.push(BasicFunction::constant(set.clone(), Amp::one()));
            if let Ok(f) = BasicFunction::new(set, pieces) {
                out.push(f);
            }
            splices += 1;
            if splices == 3 {
                break 'outer;
            }
        }
    }
    out
}

fn bracket_axioms(pts: &[HeteroclinicPoint]) -> CheckOutcome {
    let pts = &pts[..pts.len().min(48)];
    let (mut total, mut bad) = (0, 0);
    let br = |x: &HeteroclinicPoint, y: &HeteroclinicPoint| HeteroclinicPoint::bracket(x, y).ok();
    for x in pts {
        total += 1;
        bad += (br(x, x).as_ref() != Some(x)) as usize;
        for y in pts {
            if x.coord(0) != y.coord(0) {
                continue;
            }
            if x.coord(1) == y.coord(1) {
                total += 1;
                let lhs = br(&x.shift(1), &y.shift(1));
                bad += (lhs != br(x, y).map(|z| z.shift(1))) as usize;
            }
            for z in pts {
                if z.coord(0) != x.coord(0) {
                    continue;
                }
                total += 2;
                let xz = br(x, z);
                bad += (br(y, z).and_then(|yz| br(x, &yz)) != xz) as usize;
                bad += (br(x, y).and_then(|xy| br(&xy, z)) != xz) as usize;
            }
        }
    }
    outcome("bracket axioms", bad, total, "identities")
}

fn canonical_form(pts: &[HeteroclinicPoint]) -> CheckOutcome {
    let (mut total, mut bad) = (0, 0);
    for x in pts {
        total += 1;
        let again = HeteroclinicPoint::new(
            x.left().clone(),
            x.start(),
            x.core().to_vec(),
            x.right().clone(),
        );
        bad += (&again != x) as usize;
    }
    let few = &pts[..pts.len().min(80)];
    for x in few {
        for y in few {
            total += 1;
            bad += ((x.distance(y) == 0.0) != (x == y)) as usize;
        }
    }
    outcome("canonical form", bad, total, "points and pairs")
}

fn expansiveness(m: &Model, pts: &[HeteroclinicPoint]) -> CheckOutcome {
    let inv = 1.0 / m.shift.lambda() as f64;
    let few = &pts[..pts.len().min(200)];
    let (mut total, mut bad) = (0, 0);
    for y in few {
        for z in few {
            if y == z {
                continue;
            }
            let d = y.distance(z);
            if y.agrees_from(z, 0) {
                total += 1;
                bad += (y.shift(1).distance(&z.shift(1)) > inv * d) as usize;
            }
            if y.agrees_until(z, 0) {
                total += 1;
                bad += (y.shift(-1).distance(&z.shift(-1)) > inv * d) as usize;
            }
        }
    }
    outcome("expansiveness", bad, total, "local pairs")
}

fn heteroclinic(m: &Model, pts: &[HeteroclinicPoint]) -> CheckOutcome {
    let bad = pts
        .iter()
        .filter(|x| {
            m.shift.validate_point(x).is_err() || !m.weights.is_heteroclinic(x) || x.is_periodic()
        })
        .count();
    outcome("heteroclinic points", bad, pts.len(), "points")
}

fn weight_checks(w: &WeightSystem, pts: &[HeteroclinicPoint]) -> Result<Vec<CheckOutcome>> {
    let kinds = [
        w.with_kind(Omega0Kind::Indicator),
        w.with_kind(Omega0Kind::LipschitzRamp),
    ];
    let (mut idx_bad, mut coc_bad, mut ser_bad, mut sign_bad, mut lip_bad, mut lip_total) =
        (0, 0, 0, 0, 0, 0);
    for x in pts {
        idx_bad += (w.entry_index(x)? != w.entry_index_by_iteration(x)?) as usize;
    }
    for ws in &kinds {
        let cs = ws.cs().to_f64().unwrap_or(f64::NAN);
        for x in pts {
            let o = ws.omega_s(x)?;
            coc_bad += (ws.omega_s(&x.shift(1))? - o != -Rational64::one()) as usize;
            ser_bad += (ws.omega_s_series(x)? != o) as usize;
            if ws.in_omega_p(x) {
                sign_bad += (o > Rational64::zero()) as usize;
            } else {
                sign_bad += (o < Rational64::zero()) as usize;
            }
        }
        let deep: Vec<_> = pts
            .iter()
            .filter(|x| ws.entry_index(x).is_ok_and(|n| n >= 0))
            .collect();
        for x in &deep {
            for y in &deep {
                // stable pairs: y agrees with x on n >= 0 and d(x, y) < ε_X/2
                let d = x.distance(y);
                if x == y || d >= ws.epsilon() / 2.0 || !x.agrees_from(y, 0) {
                    continue;
                }
                lip_total += 1;
                let diff = (ws.omega_s(x)? - ws.omega_s(y)?)
                    .abs()
                    .to_f64()
                    .unwrap_or(f64::NAN);
                lip_bad += (diff > cs * d) as usize;
            }
        }
    }
    let n = pts.len() * kinds.len();
    let mut lip = outcome(
        "omega_s local lipschitz (stable pairs)",
        lip_bad,
        lip_total,
        "pairs",
    );
    if lip_total == 0 {
        lip.passed = true;
        lip.detail = "no stable pairs in sample".into();
    }
    Ok(vec![
        outcome("entry index closed form", idx_bad, pts.len(), "points"),
        CheckOutcome {
            detail: format!(
                "omega_s(phi x) - omega_s(x) = -1: {}",
                outcome("", coc_bad, n, "evaluations").detail
            ),
            ..outcome("omega_s cocycle", coc_bad, n, "evaluations")
        },
        outcome("omega_s defining sums", ser_bad, n, "evaluations"),
        outcome("omega_s sign dichotomy", sign_bad, n, "evaluations"),
        lip,
    ])
}

fn algebra_checks(
    m: &Model,
    pts: &[HeteroclinicPoint],
    funcs: &[BasicFunction],
) -> Result<Vec<CheckOutcome>> {
    let basis: Vec<StateVector> = pts.iter().map(|x| StateVector::basis(x.clone())).collect();
    let (mut cov_bad, mut cov_total) = (0, 0);
    let (mut mul_bad, mut mul_total) = (0, 0);
    let (mut adj_bad, mut adj_total) = (0, 0);
    let mut probes = basis.clone();
    for f in funcs {
        for (c, _) in f.pieces().iter().take(2) {
            if let Ok(x) = c.completion(&m.shift, m.weights.p()) {
                probes.push(StateVector::basis(x));
            }
        }
    }
    for f in funcs {
        let af = f.alpha(1);
        let fs = f.adjoint();
        for xi in &basis {
            cov_total += 1;
            cov_bad += (af.apply(xi) != f.apply(&xi.unitary_shift(-1)).unitary_shift(1)) as usize;
        }
        for xi in &probes {
            let y = f.apply(xi);
            let (x, _) = xi.iter().next().expect("basis vector");
            for (z, c) in y.iter() {
                adj_total += 1;
                let back = fs.apply(&StateVector::<Amp>::basis(z.clone())).get(x);
                adj_bad += (back != c.conj()) as usize;
            }
        }
        for g in funcs {
            let fg = f.convolve(g);
            for xi in &probes {
                mul_total += 1;
                let lhs = fg.as_ref().map_or_else(StateVector::zero, |h| h.apply(xi));
                mul_bad += (lhs != f.apply(&g.apply(xi))) as usize;
            }
        }
    }
    let (mut ud_bad, mut ud_total) = (0, 0);
    for xi in &basis {
        ud_total += 1;
        let c = shift_commutator_apply(DiracKind::Linear, &m.weights, xi, 1)?;
        // D u - u D = -u, i.e. [u, D] = u
        ud_bad += (c != xi.unitary_shift(1).scale(&-Amp::one())) as usize;
    }
    let mut bound_rows = Vec::new();
    for kind in [DiracKind::Linear, DiracKind::Exponential] {
        let mut bad = 0;
        let mut worst: f64 = 0.0;
        for f in funcs {
            let b = commutator_norm_bound(kind, &m.weights, f, 6)?;
            bad += (b.empirical_sup > b.analytic_bound) as usize;
            if b.analytic_bound > 0.0 {
                worst = worst.max(b.empirical_sup / b.analytic_bound);
            }
        }
        let mut o = outcome(
            if kind == DiracKind::Linear {
                "commutator bound (linear)"
            } else {
                "commutator bound (exponential)"
            },
            bad,
            funcs.len(),
            "functions",
        );
        o.detail.push_str(&format!("; max sup/bound = {worst:.6}"));
        bound_rows.push(o);
    }
    let mut out = vec![
        outcome(
            "covariance u pi(a) u* = pi(alpha(a))",
            cov_bad,
            cov_total,
            "vectors",
        ),
        outcome("pi(f g) = pi(f) pi(g)", mul_bad, mul_total, "vectors"),
        outcome("pi(f*) = pi(f)*", adj_bad, adj_total, "matrix entries"),
        outcome("[u, D] = u", ud_bad, ud_total, "vectors"),
    ];
    out.extend(bound_rows);
    Ok(out)
}

fn spectral_checks(m: &Model, n_max: i64, tol: f64) -> Result<Vec<CheckOutcome>> {
    let w = &m.weights;
    let oracle_n = n_max.min(12);
    let (mut oracle_bad, mut oracle_total) = (0, 0);
    let (mut comp_bad, mut comp_total, mut comp_skipped) = (0, 0, 0);
    let (mut theta_bad, mut theta_total) = (0, 0);
    for a in &m.localizations {
        let series = count_series(w, a, oracle_n)?;
        let brute = count_by_search(&m.shift, w, a, oracle_n)?;
        for (n, c, _) in &series.rows {
            oracle_total += 1;
            let b = brute.get(n).copied().unwrap_or(0);
            oracle_bad += (c.to_u64() != Some(b)) as usize;
        }
        oracle_bad += brute.keys().filter(|&&n| n <= series.zero_through).count();
        for (n, norm, bound) in compactness_norms(w, a, n_max)? {
            if n < 0 {
                comp_skipped += 1;
                continue;
            }
            comp_total += 1;
            comp_bad += (norm > bound * (1.0 + 1e-12)) as usize;
        }
        for t in [0.1, 0.5, 1.0, 2.0] {
            theta_total += 1;
            let r = theta_trace(w, a, t, tol)?;
            theta_bad += (!(r.converged && r.tail_bound <= tol)) as usize;
        }
    }
    let mut comp = outcome("compactness per-shell norm", comp_bad, comp_total, "shells");
    if comp_skipped > 0 {
        comp.detail
            .push_str(&format!("; {comp_skipped} negative shells not covered"));
    }

    let a = &m.localizations[0];
    let perron = entropy_perron(m.shift.adjacency(), 1e-12)?;
    let counting = entropy_counting(w, a, n_max.max(10))?;
    let gap = (perron.value - counting.value).abs();
    let entropy = CheckOutcome {
        property: "entropy cross-check",
        passed: gap <= perron.error_bound + counting.error_bound,
        detail: format!(
            "|perron - counting| = {gap:.3e}, allowed {:.3e}",
            perron.error_bound + counting.error_bound
        ),
    };
    let target = perron.value / (m.shift.lambda() as f64).ln();
    let above = zeta_trace(w, a, target + 0.1, 1e-8)?;
    let below = zeta_trace(w, a, target - 0.1, 1e-8)?;
    let zeta = CheckOutcome {
        property: "zeta threshold",
        passed: above.converged && below.diverged,
        detail: format!(
            "s = target+0.1 converged {} ({} terms); s = target-0.1 diverged {} ({} terms)",
            above.converged, above.terms_used, below.diverged, below.terms_used
        ),
    };
    let d = m.config.defaults.window;
    let dim = spectral_dimension(w, a, (d[0], d[1]))?;
    let specdim = CheckOutcome {
        property: "spectral dimension",
        passed: (dim.estimate - target).abs() <= 0.02,
        detail: format!("estimate {:.6} vs target {:.6}", dim.estimate, target),
    };
    Ok(vec![
        outcome(
            "counts match brute force",
            oracle_bad,
            oracle_total,
            "shells",
        ),
        comp,
        outcome("theta summability", theta_bad, theta_total, "traces"),
        entropy,
        zeta,
        specdim,
    ])
}

/// Runs every invariant on the model.
pub fn invariant_suite(m: &Model, n_max: i64, tol: f64) -> Result<Vec<CheckOutcome>> {
    let pts = basis_sample(m, 1000)?;
    let funcs = sample_functions(m, &pts);
    let mut out = vec![
        bracket_axioms(&pts),
        canonical_form(&pts),
        expansiveness(m, &pts),
        heteroclinic(m, &pts),
    ];
    out.extend(weight_checks(&m.weights, &pts)?);
    out.extend(algebra_checks(m, &pts, &funcs)?);
    out.extend(spectral_checks(m, n_max, tol)?);
    Ok(out)
}
