use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::groupoid::{amp_abs, BasicFunction};
use crate::sft::{cylinder_points, enumerate_window, Cylinder, EdgeShift};
use crate::weights::WeightSystem;

/// `ln` of a big integer (`-inf` for zero).
pub fn big_ln(n: &BigUint) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().map_or(f64::NAN, f64::ln);
    }
    let drop = bits - 64;
    let top = (n >> drop).to_f64().unwrap_or(f64::NAN);
    top.ln() + drop as f64 * std::f64::consts::LN_2
}

/// Points of one shell `E_n ∩ Source(a)` that share the weight `ω_s` and the
/// amplitude `|a|`.
#[derive(Clone, Debug, PartialEq)]
pub struct Group {
    pub count: BigUint,
    pub omega: Rational64,
    pub amp: f64,
}

/// All groups of one shell.
#[derive(Clone, Debug, PartialEq)]
pub struct Level {
    pub n: i64,
    pub groups: Vec<Group>,
}

impl Level {
    pub fn total(&self) -> BigUint {
        self.groups.iter().map(|g| &g.count).sum()
    }
}

/// Deep points of a piece: `x_n = e`, free path on `(top, n)`, then a point
/// of `P`. Grouped by the vertex `s(e)` and the value of `ω₀` on the class.
#[derive(Clone, Debug)]
struct DeepClass {
    vertex: usize,
    omega0: Rational64,
    multiplicity: u64,
}

#[derive(Clone, Debug)]
struct PieceCensus {
    amp: f64,
    top: i64,
    end_vertex: usize,
    shallow: BTreeMap<i64, Vec<Rational64>>,
    deep: Vec<DeepClass>,
}

/// Exact shell counts `#(E_n ∩ Source(a) ∩ X^h(P, Q))` for every `n`.
///
/// Points with entry index at most the top of their piece are listed
/// explicitly; deeper points are counted by powers of the adjacency matrix.
#[derive(Clone, Debug)]
pub struct Census {
    adjacency: Vec<Vec<u64>>,
    pieces: Vec<PieceCensus>,
}

impl Census {
    pub fn new(w: &WeightSystem, a: &BasicFunction) -> Result<Self> {
        let shift = w.shift();
        let tails = w.p_tails();
        let mut pieces = Vec::new();
        for (c, value) in a.pieces() {
            if !w.q().contains(c.left().orbit()) {
                continue;
            }
            let mut shallow: BTreeMap<i64, Vec<Rational64>> = BTreeMap::new();
            for x in w.shallow_points(c) {
                shallow
                    .entry(w.entry_index(&x)?)
                    .or_default()
                    .push(w.omega_s(&x)?);
            }
            let mut classes: BTreeMap<(usize, Rational64), u64> = BTreeMap::new();
            for t in &tails {
                for e in shift.edge_ids() {
                    if e != t.at(0) && shift.follows(e, t.at(1)) {
                        let key = (shift.source(e), w.omega0_on_e0(e, t));
                        *classes.entry(key).or_default() += 1;
                    }
                }
            }
            let deep = classes
                .into_iter()
                .map(|((vertex, omega0), multiplicity)| DeepClass {
                    vertex,
                    omega0,
                    multiplicity,
                })
                .collect();
            pieces.push(PieceCensus {
                amp: amp_abs(value),
                top: c.top(),
                end_vertex: c.end_vertex(shift),
                shallow,
                deep,
            });
        }
        Ok(Self {
            adjacency: shift.adjacency().to_vec(),
            pieces,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// Largest piece top; beyond it every shell is counted by the matrix.
    pub fn max_top(&self) -> i64 {
        self.pieces.iter().map(|p| p.top).max().unwrap_or(0)
    }

    /// Smallest shell index that can be nonempty.
    pub fn first_candidate(&self) -> Option<i64> {
        self.pieces
            .iter()
            .filter_map(|p| {
                let deep = (!p.deep.is_empty()).then_some(p.top + 1);
                p.shallow
                    .keys()
                    .next()
                    .copied()
                    .into_iter()
                    .chain(deep)
                    .min()
            })
            .min()
    }

    /// Shells from `start` on, in order.
    pub fn levels(&self, start: i64) -> Levels<'_> {
        Levels {
            census: self,
            n: start,
            rows: vec![None; self.pieces.len()],
        }
    }

    /// `(ρ, G)` with `Σ_{deep x ∈ E_n} |a(x)| <= G·ρ^n` for every `n`: a left
    /// vector `y > 0` with `yᵀA <= ρ yᵀ` gives `(A^m)[u, v] <= ρ^m y_v / y_u`.
    pub fn growth_bound(&self) -> (f64, f64) {
        let (rho, y) = left_growth_vector(&self.adjacency);
        let g = self
            .pieces
            .iter()
            .map(|p| {
                let s: f64 = p
                    .deep
                    .iter()
                    .map(|c| c.multiplicity as f64 * y[c.vertex])
                    .sum();
                p.amp * s / y[p.end_vertex] * rho.powf(-(p.top as f64) - 1.0)
            })
            .sum();
        (rho, g)
    }
}

/// Streams [`Level`]s, advancing one row vector `e_u A^m` per piece.
pub struct Levels<'a> {
    census: &'a Census,
    n: i64,
    rows: Vec<Option<(i64, Vec<BigUint>)>>,
}

impl Levels<'_> {
    fn row(&mut self, i: usize, m: i64) -> &[BigUint] {
        let p = &self.census.pieces[i];
        let a = &self.census.adjacency;
        let slot = &mut self.rows[i];
        if slot.as_ref().is_none_or(|(k, _)| *k > m) {
            let mut r = vec![BigUint::zero(); a.len()];
            r[p.end_vertex] = BigUint::one();
            *slot = Some((0, r));
        }
        let (k, r) = slot.as_mut().expect("row initialised");
        while *k < m {
            let mut next = vec![BigUint::zero(); a.len()];
            for (i, ri) in r.iter().enumerate() {
                if ri.is_zero() {
                    continue;
                }
                for (j, &aij) in a[i].iter().enumerate() {
                    if aij != 0 {
                        next[j] += ri * aij;
                    }
                }
            }
            *r = next;
            *k += 1;
        }
        r
    }
}

impl Iterator for Levels<'_> {
    type Item = Level;

    fn next(&mut self) -> Option<Level> {
        let n = self.n;
        self.n += 1;
        let mut groups = Vec::new();
        for i in 0..self.census.pieces.len() {
            let p = &self.census.pieces[i];
            let amp = p.amp;
            if let Some(omegas) = p.shallow.get(&n) {
                for &omega in omegas {
                    groups.push(Group {
                        count: BigUint::one(),
                        omega,
                        amp,
                    });
                }
            }
            if n > p.top {
                let deep = p.deep.clone();
                let row = self.row(i, n - p.top - 1).to_vec();
                for c in deep {
                    let count = &row[c.vertex] * c.multiplicity;
                    if !count.is_zero() {
                        groups.push(Group {
                            count,
                            omega: c.omega0 + Rational64::from_integer(n),
                            amp,
                        });
                    }
                }
            }
        }
        Some(Level { n, groups })
    }
}

/// Left eigenvector estimate of an irreducible matrix and a certified upper
/// bound `ρ` with `yᵀA <= ρ yᵀ` componentwise.
pub(crate) fn left_growth_vector(a: &[Vec<u64>]) -> (f64, Vec<f64>) {
    let n = a.len();
    let mut y = vec![1.0; n];
    // iterate with Aᵀ + I, which is primitive for irreducible A
    for _ in 0..2000 {
        let mut next = y.clone();
        for (i, row) in a.iter().enumerate() {
            for (j, &aij) in row.iter().enumerate() {
                next[j] += y[i] * aij as f64;
            }
        }
        let norm = next.iter().cloned().fold(0.0, f64::max);
        next.iter_mut().for_each(|v| *v /= norm);
        let delta = next
            .iter()
            .zip(&y)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max);
        y = next;
        if delta < 1e-15 {
            break;
        }
    }
    let rho = (0..n)
        .map(|j| (0..n).map(|i| y[i] * a[i][j] as f64).sum::<f64>() / y[j])
        .fold(0.0, f64::max);
    (rho * (1.0 + 1e-9), y)
}

/// Exact counts `c(n)` for a range of shells.
#[derive(Clone, Debug, PartialEq)]
pub struct CountSeries {
    /// `(n, c(n), certified)` for `n` from `n_start` to `n_max`.
    pub rows: Vec<(i64, BigUint, bool)>,
    /// Largest `M` with `c(n) = 0` for all `n <= M`.
    pub zero_through: i64,
    /// Core-length truncation used, if the counts came from enumeration.
    pub max_core: Option<usize>,
}

impl CountSeries {
    pub fn get(&self, n: i64) -> Option<&BigUint> {
        self.rows.iter().find(|r| r.0 == n).map(|r| &r.1)
    }

    pub fn all_certified(&self) -> bool {
        self.rows.iter().all(|r| r.2)
    }
}

fn check_localization(a: &BasicFunction) -> Result<()> {
    let nonneg = a
        .pieces()
        .iter()
        .all(|(_, v)| v.im.is_zero() && v.re >= Rational64::zero());
    if !a.is_diagonal() || !nonneg {
        return Err(Error::NonDiagonalLocalization);
    }
    Ok(())
}

pub(crate) fn checked_census(w: &WeightSystem, a: &BasicFunction) -> Result<Census> {
    check_localization(a)?;
    Census::new(w, a)
}

/// Transfer-matrix counts `c(n) = #(E_n ∩ Source(a))` for `n <= n_max`. These
/// cover the whole basis, so every row is certified.
pub fn count_series(w: &WeightSystem, a: &BasicFunction, n_max: i64) -> Result<CountSeries> {
    let census = checked_census(w, a)?;
    let first = census.first_candidate();
    let start = first.map_or(1, |f| f.min(1));
    let mut rows = Vec::new();
    let mut first_nonzero = None;
    // scan beyond n_max if needed to locate the first nonempty shell
    let scan_to = n_max.max(start + census.max_top().max(0) + w.shift().num_vertices() as i64 + 2);
    for level in census.levels(start).take_while(|l| l.n <= scan_to) {
        let c = level.total();
        if first_nonzero.is_none() && !c.is_zero() {
            first_nonzero = Some(level.n);
        }
        if level.n <= n_max {
            rows.push((level.n, c, true));
        }
    }
    Ok(CountSeries {
        rows,
        zero_through: first_nonzero.map_or(scan_to, |f| f - 1),
        max_core: None,
    })
}

/// Counts from the truncated enumeration of `X^h(P, Q)` (cores of length at
/// most `max_core`). Fails when the truncation cannot reach shell `n_max`.
pub fn count_series_enumerated(
    w: &WeightSystem,
    a: &BasicFunction,
    n_max: i64,
    max_core: usize,
) -> Result<CountSeries> {
    check_localization(a)?;
    let pieces: Vec<&Cylinder> = a.pieces().iter().map(|(c, _)| c).collect();
    let lowest = pieces.iter().map(|c| c.word_start()).min().unwrap_or(0);
    let needed = (n_max - lowest + 1).max(0) as usize;
    if needed > max_core {
        return Err(Error::TruncationInsufficient {
            n_max,
            needed,
            max_core,
        });
    }
    let reference = count_series(w, a, n_max)?;
    let start = reference.rows.first().map_or(1, |r| r.0);
    let mut counts: BTreeMap<i64, BigUint> = BTreeMap::new();
    for c in &pieces {
        // points of a cylinder start at its word, or past its top when the
        // word is empty
        let anchors = if c.word().is_empty() {
            c.top() + 1..=n_max + 1
        } else {
            c.word_start()..=c.word_start()
        };
        for x in enumerate_window(w.shift(), w.p(), w.q(), max_core, anchors)? {
            if c.contains(&x) {
                let n = w.entry_index(&x)?;
                if (start..=n_max).contains(&n) {
                    *counts.entry(n).or_default() += 1u32;
                }
            }
        }
    }
    let rows = (start..=n_max)
        .map(|n| (n, counts.remove(&n).unwrap_or_default(), true))
        .collect();
    Ok(CountSeries {
        rows,
        zero_through: reference.zero_through,
        max_core: Some(max_core),
    })
}

/// Brute-force shell counts: every point of each piece whose free
/// coordinates end by `n_max`, classified by iterating the shift.
pub fn count_by_search(
    shift: &EdgeShift,
    w: &WeightSystem,
    a: &BasicFunction,
    n_max: i64,
) -> Result<BTreeMap<i64, u64>> {
    let mut counts = BTreeMap::new();
    for (c, _) in a.pieces() {
        if !w.q().contains(c.left().orbit()) {
            continue;
        }
        for x in cylinder_points(shift, c, w.p(), n_max) {
            if x.is_periodic() {
                continue;
            }
            let n = w.entry_index_by_iteration(&x)?;
            if n <= n_max {
                *counts.entry(n).or_default() += 1;
            }
        }
    }
    Ok(counts)
}
