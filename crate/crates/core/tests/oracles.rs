mod common;

use common::{model, REFERENCE};
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use smale_spectra::cli::Model;
use smale_spectra::groupoid::BasicFunction;
use smale_spectra::sft::Cylinder;
use smale_spectra::traces::{count_series, theta_trace, zeta_trace};

/// Shell counts from scratch: sequences that copy the cylinder up to its
/// top, leave the fixed point `p` for the last time at coordinate `n`,
/// and follow `p` forever after.
fn naive_count(m: &Model, c: &Cylinder, n: i64) -> u64 {
    let p = m.weights.p()[0].cycle();
    assert_eq!(p.len(), 1, "oracle assumes a fixed point");
    let p = p[0].index();
    let edges = m.shift.edges();
    let coord = |k: i64| c.coord(k).index();
    let top = c.top();
    if n <= top {
        let tail_ok = (n + 1..=top).all(|k| coord(k) == p);
        let joins = top > n || edges[coord(top)].target == edges[p].source;
        return (coord(n) != p && tail_ok && joins) as u64;
    }
    fn walk(edges: &[smale_spectra::sft::Edge], last: usize, left: i64, p: usize) -> u64 {
        let next = edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.source == edges[last].target);
        if left == 1 {
            return next
                .filter(|&(i, e)| i != p && e.target == edges[p].source)
                .count() as u64;
        }
        next.map(|(i, _)| walk(edges, i, left - 1, p)).sum()
    }
    walk(edges, coord(top), n - top, p)
}

fn pieces(a: &BasicFunction) -> Vec<Cylinder> {
    a.pieces().iter().map(|(c, _)| c.clone()).collect()
}

#[test]
fn transfer_counts_match_naive_sequences() {
    for name in REFERENCE {
        let m = model(name);
        for (li, a) in m.localizations.iter().enumerate() {
            let series = count_series(&m.weights, a, 12).unwrap();
            for n in -4..=12 {
                let expect: u64 = pieces(a).iter().map(|c| naive_count(&m, c, n)).sum();
                let got = series.get(n).map_or(0, |c| c.to_u64().unwrap());
                assert_eq!(got, expect, "{name} localization {li} shell {n}");
            }
        }
    }
}

#[test]
fn full_shift_closed_form() {
    for (name, k) in [("full2", 2u32), ("full3", 3u32)] {
        let m = model(name);
        let rows = count_series(&m.weights, &m.localizations[0], 30).unwrap();
        for n in 1..=30i64 {
            let expect = if n == 1 {
                BigUint::from(1u32)
            } else {
                BigUint::from(k - 1) * BigUint::from(k).pow((n - 2) as u32)
            };
            assert_eq!(rows.get(n), Some(&expect), "{name} n = {n}");
        }
        assert_eq!(rows.zero_through, 0);
    }
}

#[test]
fn golden_counts_are_fibonacci() {
    let m = model("golden");
    let rows = count_series(&m.weights, &m.localizations[0], 30).unwrap();
    let c = |n: i64| rows.get(n).unwrap().clone();
    for n in 3..=28 {
        assert_eq!(c(n + 2), c(n + 1) + c(n), "n = {n}");
    }
}

fn full2_count(n: i64) -> f64 {
    if n == 1 {
        1.0
    } else {
        2f64.powi((n - 2) as i32)
    }
}

#[test]
fn theta_matches_direct_sum() {
    // indicator weights give ω_s = N + 1 on the shell E_N
    let m = model("full2");
    for t in [0.1, 0.5, 1.0, 2.0] {
        let direct: f64 = (1..200)
            .map(|n| full2_count(n) * (-t * (1.0 + ((n + 1) * (n + 1)) as f64)).exp())
            .sum();
        let r = theta_trace(&m.weights, &m.localizations[0], t, 1e-12).unwrap();
        assert!(r.converged);
        assert!((r.value - direct).abs() <= r.tail_bound + 1e-14, "t = {t}");
    }
}

#[test]
fn zeta_matches_direct_sum() {
    let m = model("full2");
    for s in [1.5, 2.0, 3.0] {
        let direct: f64 = (1..400)
            .map(|n| full2_count(n) * (1.0 + 4f64.powi((n + 1) as i32)).powf(-s / 2.0))
            .sum();
        let r = zeta_trace(&m.weights, &m.localizations[0], s, 1e-10).unwrap();
        assert!(r.converged, "s = {s}");
        assert!(
            (r.value - direct).abs() <= r.tail_bound + 1e-12 * direct,
            "s = {s}"
        );
    }
}
