use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use crate::error::{Error, Result};

use super::cylinder::Cylinder;
use super::orbit::{PeriodicOrbit, Tail};
use super::point::HeteroclinicPoint;
use super::shift::{EdgeId, EdgeShift};

fn check_disjoint(p: &[PeriodicOrbit], q: &[PeriodicOrbit]) -> Result<()> {
    if p.iter().any(|o| q.contains(o)) {
        return Err(Error::OverlappingOrbitSets);
    }
    Ok(())
}

/// One representative per φ-orbit of `X^h(P, Q)` with core length at most
/// `max_core`: the canonical points whose core starts at coordinate 0.
/// Sorted by the point order.
pub fn enumerate_heteroclinic(
    shift: &EdgeShift,
    p: &[PeriodicOrbit],
    q: &[PeriodicOrbit],
    max_core: usize,
) -> Result<Vec<HeteroclinicPoint>> {
    check_disjoint(p, q)?;
    let mut out = BTreeSet::new();
    for q_orbit in q {
        for left in q_orbit.phases() {
            for p_orbit in p {
                for right in p_orbit.phases() {
                    collect_cores(shift, &left, &right, max_core, &mut out);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

fn collect_cores(
    shift: &EdgeShift,
    left: &Tail,
    right: &Tail,
    max_core: usize,
    out: &mut BTreeSet<HeteroclinicPoint>,
) {
    let before = left.at(-1);
    if left.at(-1) != right.at(-1) && shift.follows(before, right.at(0)) {
        out.insert(HeteroclinicPoint::new(
            left.clone(),
            0,
            vec![],
            right.clone(),
        ));
    }
    let mut word: Vec<EdgeId> = Vec::with_capacity(max_core);
    extend(shift, left, right, max_core, before, &mut word, out);
}

fn extend(
    shift: &EdgeShift,
    left: &Tail,
    right: &Tail,
    max_core: usize,
    prev: EdgeId,
    word: &mut Vec<EdgeId>,
    out: &mut BTreeSet<HeteroclinicPoint>,
) {
    if word.len() == max_core {
        return;
    }
    let n = word.len() as i64;
    for &e in shift.out_edges(shift.target(prev)) {
        if n == 0 && e == left.at(0) {
            continue;
        }
        word.push(e);
        if e != right.at(n) && shift.follows(e, right.at(n + 1)) {
            out.insert(HeteroclinicPoint::new(
                left.clone(),
                0,
                word.clone(),
                right.clone(),
            ));
        }
        extend(shift, left, right, max_core, e, word, out);
        word.pop();
    }
}

/// The orbit representatives of [`enumerate_heteroclinic`] shifted so that
/// their anchors range over `anchors`: the point with core start `a` is
/// `φ^{-a}` of the representative.
pub fn enumerate_window(
    shift: &EdgeShift,
    p: &[PeriodicOrbit],
    q: &[PeriodicOrbit],
    max_core: usize,
    anchors: RangeInclusive<i64>,
) -> Result<Vec<HeteroclinicPoint>> {
    let reps = enumerate_heteroclinic(shift, p, q, max_core)?;
    let mut out = Vec::with_capacity(reps.len() * anchors.clone().count());
    for a in anchors {
        out.extend(reps.iter().map(|x| x.shift(-a)));
    }
    Ok(out)
}

/// All points of `cylinder` that are right-asymptotic to a point of `p` and
/// agree with it beyond `horizon` (so the free coordinates are
/// `top + 1 ..= horizon`). Exhaustive depth-first search; sorted.
pub fn cylinder_points(
    shift: &EdgeShift,
    cylinder: &Cylinder,
    p: &[PeriodicOrbit],
    horizon: i64,
) -> Vec<HeteroclinicPoint> {
    let tails: Vec<Tail> = p
        .iter()
        .flat_map(|o| o.phases().collect::<Vec<_>>())
        .collect();
    let lo = cylinder.word_start();
    let fixed: Vec<EdgeId> = (lo..=cylinder.top()).map(|n| cylinder.coord(n)).collect();
    let free = (horizon - cylinder.top()).max(0) as usize;
    let mut out = BTreeSet::new();
    let mut word = fixed.clone();
    walk(shift, cylinder, &tails, lo, free, &mut word, &mut out);
    out.into_iter().collect()
}

fn walk(
    shift: &EdgeShift,
    cylinder: &Cylinder,
    tails: &[Tail],
    lo: i64,
    free: usize,
    word: &mut Vec<EdgeId>,
    out: &mut BTreeSet<HeteroclinicPoint>,
) {
    let fixed_len = (cylinder.top() - lo + 1) as usize;
    let next = lo + word.len() as i64;
    let last = word.last().copied().unwrap_or_else(|| cylinder.last_edge());
    for t in tails {
        if shift.follows(last, t.at(next)) {
            out.insert(HeteroclinicPoint::new(
                cylinder.left().clone(),
                lo,
                word.clone(),
                t.clone(),
            ));
        }
    }
    if word.len() - fixed_len == free {
        return;
    }
    for &e in shift.out_edges(shift.target(last)) {
        word.push(e);
        walk(shift, cylinder, tails, lo, free, word, out);
        word.pop();
    }
}
