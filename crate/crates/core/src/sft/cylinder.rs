use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

use super::orbit::{PeriodicOrbit, Tail};
use super::point::HeteroclinicPoint;
use super::shift::{EdgeId, EdgeShift};

/// The local unstable set `X^u(w, 2^{-top})`: all points whose coordinates
/// `n <= top` agree with a fixed left-asymptotic sequence.
///
/// The fixed past is stored as a periodic left tail followed by `word`, which
/// occupies coordinates `top - word.len() + 1 ..= top`. The word never starts
/// with a symbol the tail would have produced, so equal cylinders have equal
/// fields.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cylinder {
    left: Tail,
    top: i64,
    word: Vec<EdgeId>,
}

impl fmt::Debug for Cylinder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyl[{:?} | {:?} ..={}]", self.left, self.word, self.top)
    }
}

impl Cylinder {
    pub fn new(left: Tail, word: Vec<EdgeId>, top: i64) -> Self {
        let start = top - word.len() as i64 + 1;
        let lead = word
            .iter()
            .enumerate()
            .take_while(|&(i, &e)| e == left.at(start + i as i64))
            .count();
        Self {
            left,
            top,
            word: word[lead..].to_vec(),
        }
    }

    /// `X^u(w, 2^{-top})`: points agreeing with `w` on all coordinates `<= top`.
    pub fn of_point(w: &HeteroclinicPoint, top: i64) -> Self {
        let word = (w.start().min(top + 1)..=top).map(|n| w.coord(n)).collect();
        Self::new(w.left().clone(), word, top)
    }

    /// Cylinder whose past is the periodic word `base` repeated up to the
    /// start of `word`, which ends at coordinate `top`.
    pub fn from_words(base: &[EdgeId], word: &[EdgeId], top: i64) -> Result<Self> {
        let start = top - word.len() as i64 + 1;
        let left = Tail::with_word_ending_at(base, start - 1)?;
        Ok(Self::new(left, word.to_vec(), top))
    }

    pub fn left(&self) -> &Tail {
        &self.left
    }

    pub fn top(&self) -> i64 {
        self.top
    }

    pub fn word(&self) -> &[EdgeId] {
        &self.word
    }

    /// First coordinate of the stored word.
    pub fn word_start(&self) -> i64 {
        self.top - self.word.len() as i64 + 1
    }

    /// Coordinate `n <= top` shared by every point of the cylinder.
    pub fn coord(&self, n: i64) -> EdgeId {
        debug_assert!(n <= self.top);
        let start = self.word_start();
        if n < start {
            self.left.at(n)
        } else {
            self.word[(n - start) as usize]
        }
    }

    pub fn last_edge(&self) -> EdgeId {
        self.coord(self.top)
    }

    pub fn end_vertex(&self, shift: &EdgeShift) -> usize {
        shift.target(self.last_edge())
    }

    pub fn is_valid(&self, shift: &EdgeShift) -> bool {
        let start = self.word_start();
        shift.is_closed_path(self.left.orbit().cycle())
            && (start - 1..self.top).all(|n| shift.follows(self.coord(n), self.coord(n + 1)))
    }

    pub fn contains(&self, x: &HeteroclinicPoint) -> bool {
        if x.left() != &self.left {
            return false;
        }
        let lo = x.start().min(self.word_start());
        (lo..=self.top).all(|n| x.coord(n) == self.coord(n))
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Cylinder) -> bool {
        if self.top < other.top || self.left != other.left {
            return false;
        }
        let lo = self.word_start().min(other.word_start());
        (lo..=other.top).all(|n| self.coord(n) == other.coord(n))
    }

    /// Cylinders are nested or disjoint.
    pub fn intersect(&self, other: &Cylinder) -> Option<Cylinder> {
        if self.is_subset_of(other) {
            Some(self.clone())
        } else if other.is_subset_of(self) {
            Some(other.clone())
        } else {
            None
        }
    }

    /// Replaces the coordinates `<= k` by those of `onto` (a cylinder of top
    /// `>= k`), keeping the coordinates in `(k, top]`.
    pub fn rebase(&self, k: i64, onto: &Cylinder) -> Cylinder {
        debug_assert!(self.top >= k && onto.top >= k);
        let lo = onto.word_start().min(k + 1);
        let word = (lo..=self.top)
            .map(|n| if n <= k { onto.coord(n) } else { self.coord(n) })
            .collect();
        Cylinder::new(onto.left.clone(), word, self.top)
    }

    /// `φ^k` of the cylinder.
    pub fn shift(&self, k: i64) -> Cylinder {
        Cylinder {
            left: self.left.shifted(k),
            top: self.top - k,
            word: self.word.clone(),
        }
    }

    /// Partition into the cylinders one coordinate deeper.
    pub fn children(&self, shift: &EdgeShift) -> Vec<Cylinder> {
        let mut word = self.word.clone();
        if word.is_empty() {
            word.push(self.last_edge());
        }
        shift
            .out_edges(self.end_vertex(shift))
            .iter()
            .map(|&e| {
                let mut w = word.clone();
                w.push(e);
                Cylinder::new(self.left.clone(), w, self.top + 1)
            })
            .collect()
    }

    /// A point of the cylinder that is right-asymptotic to one of `targets`,
    /// reached by a shortest path (ties broken by edge order).
    pub fn completion(
        &self,
        shift: &EdgeShift,
        targets: &[PeriodicOrbit],
    ) -> Result<HeteroclinicPoint> {
        // vertex -> (orbit index, position in cycle) of a cycle edge leaving it
        let mut entry: Vec<Option<(usize, usize)>> = vec![None; shift.num_vertices()];
        for (oi, orbit) in targets.iter().enumerate() {
            for (j, &e) in orbit.cycle().iter().enumerate() {
                let v = shift.source(e);
                if entry[v].is_none() {
                    entry[v] = Some((oi, j));
                }
            }
        }
        let start = self.end_vertex(shift);
        let mut prev: Vec<Option<(usize, EdgeId)>> = vec![None; shift.num_vertices()];
        let mut seen = vec![false; shift.num_vertices()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut hit = None;
        while let Some(v) = queue.pop_front() {
            if entry[v].is_some() {
                hit = Some(v);
                break;
            }
            for &e in shift.out_edges(v) {
                let t = shift.target(e);
                if !seen[t] {
                    seen[t] = true;
                    prev[t] = Some((v, e));
                    queue.push_back(t);
                }
            }
        }
        let v = hit.ok_or_else(|| Error::InvalidShift("no path to a target orbit".into()))?;
        let mut path = Vec::new();
        let mut cur = v;
        while let Some((p, e)) = prev[cur] {
            path.push(e);
            cur = p;
        }
        path.reverse();
        let (oi, j) = entry[v].expect("hit vertex has an entry");
        let join = self.top + 1 + path.len() as i64;
        let orbit = &targets[oi];
        let per = orbit.period() as i64;
        // right.at(join) = cycle[j]  <=>  (join + phase) = j mod per
        let right = Tail::new(orbit.clone(), (j as i64 - join).rem_euclid(per) as usize);
        let lo = self.word_start();
        let mut core: Vec<EdgeId> = (lo..=self.top).map(|n| self.coord(n)).collect();
        core.extend(path);
        Ok(HeteroclinicPoint::new(self.left.clone(), lo, core, right))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[u32]) -> Vec<EdgeId> {
        v.iter().map(|&i| EdgeId(i)).collect()
    }

    #[test]
    fn canonical_cylinder_strips_tail_symbols() {
        let a = Cylinder::from_words(&ids(&[1]), &ids(&[1, 1]), 1).unwrap();
        let b = Cylinder::from_words(&ids(&[1]), &[], 1).unwrap();
        assert_eq!(a, b);
        assert!(a.word().is_empty());
    }

    #[test]
    fn nesting_and_intersection() {
        let s = EdgeShift::full(2).unwrap();
        let c = Cylinder::from_words(&ids(&[1]), &[], 1).unwrap();
        let kids = c.children(&s);
        assert_eq!(kids.len(), 2);
        for k in &kids {
            assert!(k.is_subset_of(&c));
            assert_eq!(k.intersect(&c), Some(k.clone()));
        }
        assert_eq!(kids[0].intersect(&kids[1]), None);
    }

    #[test]
    fn completion_lands_in_cylinder() {
        let s = EdgeShift::golden_mean();
        let q = PeriodicOrbit::new(&s, &ids(&[1, 2])).unwrap();
        let p = PeriodicOrbit::new(&s, &ids(&[0])).unwrap();
        let c = Cylinder::new(Tail::new(q, 0), vec![], 3);
        let x = c.completion(&s, std::slice::from_ref(&p)).unwrap();
        assert!(c.contains(&x));
        assert_eq!(x.right().orbit(), &p);
        s.validate_point(&x).unwrap();
    }

    #[test]
    fn rebase_swaps_past() {
        let s = EdgeShift::full(2).unwrap();
        let zero = ids(&[0]);
        let one = ids(&[1]);
        let src = Cylinder::from_words(&one, &ids(&[0, 1, 1]), 3).unwrap();
        let onto = Cylinder::from_words(&zero, &ids(&[1, 0]), 1).unwrap();
        let r = src.rebase(1, &onto);
        assert_eq!(r.top(), 3);
        assert!(r.is_valid(&s));
        assert_eq!(r.coord(3), EdgeId(1));
        assert_eq!(r.coord(2), EdgeId(1));
        assert_eq!(r.coord(1), EdgeId(0));
        assert_eq!(r.coord(0), EdgeId(1));
        assert_eq!(r.coord(-5), EdgeId(0));
    }
}
