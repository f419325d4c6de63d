use std::fmt;

use crate::error::{Error, Result};

use super::orbit::Tail;
use super::shift::EdgeId;

/// A bi-infinite edge path that is periodic to the left and to the right.
///
/// Coordinates are `left.at(n)` for `n < start`, `core[n - start]` for
/// `start <= n < start + core.len()` and `right.at(n)` beyond. The stored form
/// is canonical:
///
/// * the core starts at the first coordinate that deviates from the left tail
///   and ends at the last coordinate that deviates from the right tail;
/// * with an empty core, `start` is one past the last coordinate where the two
///   tails disagree;
/// * a periodic point (both tails the same sequence) has an empty core and
///   `start = 0`.
///
/// Equal points therefore have identical fields, and the derived order
/// (left tail, right tail, start, core) is a total order on points.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeteroclinicPoint {
    left: Tail,
    right: Tail,
    start: i64,
    core: Vec<EdgeId>,
}

impl fmt::Debug for HeteroclinicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:?} | {}:{:?} | {:?}]",
            self.left, self.start, self.core, self.right
        )
    }
}

impl HeteroclinicPoint {
    /// Builds and canonicalizes a point. Path validity is checked separately
    /// by [`super::EdgeShift::validate_point`].
    pub fn new(left: Tail, start: i64, core: Vec<EdgeId>, right: Tail) -> Self {
        let mut x = Self {
            left,
            right,
            start,
            core,
        };
        x.canonicalize();
        x
    }

    fn canonicalize(&mut self) {
        while let Some(&last) = self.core.last() {
            if last == self.right.at(self.end() - 1) {
                self.core.pop();
            } else {
                break;
            }
        }
        let lead = self
            .core
            .iter()
            .enumerate()
            .take_while(|&(i, &e)| e == self.left.at(self.start + i as i64))
            .count();
        if lead > 0 {
            self.core.drain(..lead);
            self.start += lead as i64;
        }
        if !self.core.is_empty() {
            return;
        }
        if self.left == self.right {
            self.start = 0;
            return;
        }
        // Distinct periodic sequences disagree within any window of length
        // lcm(periods), so this terminates.
        let window = self.left.separation_window(&self.right);
        let mut moved = 0;
        while self.left.at(self.start - 1) == self.right.at(self.start - 1) {
            self.start -= 1;
            moved += 1;
            debug_assert!(moved <= window, "tails never separate");
        }
    }

    /// Splices two points: coordinates `<= at` from `past`, `> at` from `future`.
    /// The caller is responsible for the junction being a valid path.
    pub fn splice(past: &Self, future: &Self, at: i64) -> Self {
        let lo = past.start.min(at + 1);
        let hi = future.end().max(at + 1);
        let core = (lo..hi)
            .map(|n| {
                if n <= at {
                    past.coord(n)
                } else {
                    future.coord(n)
                }
            })
            .collect();
        Self::new(past.left.clone(), lo, core, future.right.clone())
    }

    pub fn left(&self) -> &Tail {
        &self.left
    }

    pub fn right(&self) -> &Tail {
        &self.right
    }

    /// First coordinate of the core (boundary between tails when empty).
    pub fn start(&self) -> i64 {
        self.start
    }

    /// One past the last core coordinate.
    pub fn end(&self) -> i64 {
        self.start + self.core.len() as i64
    }

    pub fn core(&self) -> &[EdgeId] {
        &self.core
    }

    pub fn coord(&self, n: i64) -> EdgeId {
        if n < self.start {
            self.left.at(n)
        } else if n < self.end() {
            self.core[(n - self.start) as usize]
        } else {
            self.right.at(n)
        }
    }

    pub fn is_periodic(&self) -> bool {
        self.left == self.right && self.core.is_empty()
    }

    /// `φ^k(x)`, with `φ(x)_n = x_{n+1}`.
    pub fn shift(&self, k: i64) -> Self {
        if k == 0 {
            return self.clone();
        }
        Self::new(
            self.left.shifted(k),
            self.start - k,
            self.core.clone(),
            self.right.shifted(k),
        )
    }

    /// `[x, y]`: the future of `x` spliced onto the past of `y`. Defined when
    /// `x_0 = y_0`, i.e. `d(x, y) < ε_X`.
    pub fn bracket(x: &Self, y: &Self) -> Result<Self> {
        let (a, b) = (x.coord(0), y.coord(0));
        if a != b {
            return Err(Error::BracketUndefined(a, b));
        }
        Ok(Self::splice(y, x, 0))
    }

    /// `min{|n| : x_n != y_n}`, or `None` when the points are equal.
    pub fn first_difference(&self, other: &Self) -> Option<u64> {
        if self == other {
            return None;
        }
        let reach = [self.start, self.end(), other.start, other.end()]
            .iter()
            .map(|n| n.unsigned_abs())
            .max()
            .unwrap_or(0) as i64
            + self
                .left
                .separation_window(&other.left)
                .max(self.right.separation_window(&other.right))
            + 1;
        (0..=reach).find_map(|m| {
            let differs = |n: i64| self.coord(n) != other.coord(n);
            (differs(m) || differs(-m)).then_some(m as u64)
        })
    }

    /// `d(x, y) = 2^{-m}`, `m = min{|n| : x_n != y_n}`.
    pub fn distance(&self, other: &Self) -> f64 {
        match self.first_difference(other) {
            None => 0.0,
            Some(m) => 0.5f64.powi(m as i32),
        }
    }

    /// `y` agrees with `self` on all coordinates `n >= from`.
    pub fn agrees_from(&self, other: &Self, from: i64) -> bool {
        if self.right != other.right {
            return false;
        }
        let hi = self.end().max(other.end());
        (from..hi).all(|n| self.coord(n) == other.coord(n))
    }

    /// `y` agrees with `self` on all coordinates `n <= to`.
    pub fn agrees_until(&self, other: &Self, to: i64) -> bool {
        if self.left != other.left {
            return false;
        }
        let lo = self.start.min(other.start);
        (lo..=to).all(|n| self.coord(n) == other.coord(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: u32) -> EdgeId {
        EdgeId(i)
    }

    fn tail(word: &[u32], at: i64) -> Tail {
        let w: Vec<_> = word.iter().map(|&i| e(i)).collect();
        Tail::with_word_at(&w, at).unwrap()
    }

    /// Full 2-shift point with `x_n = 1` for `n <= last_one_before` etc.
    fn point(left: u32, core_start: i64, core: &[u32], right: u32) -> HeteroclinicPoint {
        HeteroclinicPoint::new(
            tail(&[left], 0),
            core_start,
            core.iter().map(|&i| e(i)).collect(),
            tail(&[right], 0),
        )
    }

    #[test]
    fn canonical_form_absorbs_into_tails() {
        let x = point(1, -3, &[1, 1, 1, 1, 0, 0], 0);
        assert_eq!(x.start(), 1);
        assert!(x.core().is_empty());
        let y = point(1, 1, &[], 0);
        assert_eq!(x, y);
        let z = point(1, -5, &[1, 1, 1, 1, 1, 1, 0, 1, 0, 0], 0);
        assert_eq!(z.start(), 1);
        assert_eq!(z.core(), &[e(0), e(1)]);
    }

    #[test]
    fn empty_core_boundary_moves_left_between_tails() {
        // left tail (01)^∞, right tail (011)^∞: boundary placed after the last
        // coordinate where they disagree.
        let x = HeteroclinicPoint::new(tail(&[0, 1], 0), 20, vec![], tail(&[0, 1, 1], 0));
        let b = x.start();
        assert_ne!(x.left().at(b - 1), x.right().at(b - 1));
        for n in b..b + 12 {
            assert_eq!(x.coord(n), x.right().at(n));
        }
        assert_eq!(x.shift(3).shift(-3), x);
    }

    #[test]
    fn metric_examples() {
        // x = ...111 1.000..., y = ...111 1.100...
        let x = point(1, 1, &[], 0);
        let y = point(1, 2, &[], 0);
        assert_eq!(x.distance(&x), 0.0);
        assert_eq!(x.distance(&y), 0.5);
        let z = point(1, 0, &[], 0);
        assert_eq!(x.distance(&z), 1.0);
    }

    #[test]
    fn bracket_splice_example() {
        // x_n = 1 (n <= 0), 0 (n > 0); y_n = 0 (n < 0), 1 (n >= 0).
        let x = point(1, 1, &[], 0);
        let y = point(0, 0, &[], 1);
        let z = HeteroclinicPoint::bracket(&x, &y).unwrap();
        assert_eq!(z, point(0, 0, &[1], 0));
        assert_eq!(HeteroclinicPoint::bracket(&x, &x).unwrap(), x);
        let w = point(0, 1, &[], 1);
        assert_eq!(
            HeteroclinicPoint::bracket(&x, &w),
            Err(Error::BracketUndefined(e(1), e(0)))
        );
    }

    #[test]
    fn shift_moves_anchor_and_composes() {
        let x = point(1, 0, &[0, 1], 0);
        let y = x.shift(1);
        for n in -5..5 {
            assert_eq!(y.coord(n), x.coord(n + 1));
        }
        assert_eq!(y.start(), -1);
        assert_eq!(x.shift(2).shift(-5), x.shift(-3));
        let p = tail(&[0, 1, 1], 4).periodic_point();
        assert_eq!(p.shift(3), p);
        assert_ne!(p.shift(1), p);
    }
}
