use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Error, Result};

use super::point::HeteroclinicPoint;
use super::shift::{EdgeId, EdgeShift};

/// A φ-orbit of a periodic point, stored as the lexicographically least
/// rotation of its primitive cycle word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PeriodicOrbit {
    cycle: Arc<[EdgeId]>,
}

impl fmt::Debug for PeriodicOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})^∞", self.cycle)
    }
}

impl PeriodicOrbit {
    /// Reduces `word` to its primitive root and least rotation. Returns the
    /// orbit and the offset `o` with `word[i] = cycle[(i + o) mod period]`.
    pub fn from_word(word: &[EdgeId]) -> Result<(Self, usize)> {
        if word.is_empty() {
            return Err(Error::NotAClosedPath("empty cycle".into()));
        }
        let root_len = (1..=word.len())
            .find(|d| {
                word.len().is_multiple_of(*d) && (0..word.len()).all(|i| word[i] == word[i % d])
            })
            .unwrap_or(word.len());
        let root = &word[..root_len];
        let rotation = |r: usize| (0..root_len).map(move |i| root[(i + r) % root_len]);
        let best = (0..root_len)
            .min_by(|&a, &b| rotation(a).cmp(rotation(b)))
            .unwrap_or(0);
        let cycle: Arc<[EdgeId]> = rotation(best).collect();
        // word[i] = root[i mod root_len] = cycle[(i - best) mod root_len]
        let offset = (root_len - best) % root_len;
        Ok((Self { cycle }, offset))
    }

    /// Validated constructor: `word` must be a closed path of `shift`.
    pub fn new(shift: &EdgeShift, word: &[EdgeId]) -> Result<Self> {
        if !shift.is_closed_path(word) {
            return Err(Error::NotAClosedPath(format!("{word:?}")));
        }
        Ok(Self::from_word(word)?.0)
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    pub fn cycle(&self) -> &[EdgeId] {
        &self.cycle
    }

    pub fn symbol(&self, i: i64) -> EdgeId {
        self.cycle[i.rem_euclid(self.cycle.len() as i64) as usize]
    }

    /// All points of the orbit, one tail per phase.
    pub fn phases(&self) -> impl Iterator<Item = Tail> + '_ {
        (0..self.period()).map(move |phase| Tail {
            orbit: self.clone(),
            phase,
        })
    }
}

/// A periodic point viewed as a one-sided tail: coordinate `n` is
/// `cycle[(n + phase) mod period]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tail {
    orbit: PeriodicOrbit,
    phase: usize,
}

impl fmt::Debug for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}", self.orbit.cycle, self.phase)
    }
}

impl Tail {
    pub fn new(orbit: PeriodicOrbit, phase: usize) -> Self {
        let phase = phase % orbit.period();
        Self { orbit, phase }
    }

    /// The periodic sequence with `x_{n+i} = word[i mod len]`.
    pub fn with_word_at(word: &[EdgeId], n: i64) -> Result<Self> {
        let (orbit, offset) = PeriodicOrbit::from_word(word)?;
        let per = orbit.period() as i64;
        let phase = (offset as i64 - n).rem_euclid(per) as usize;
        Ok(Self { orbit, phase })
    }

    /// The periodic sequence whose copy of `word` ends at coordinate `n`.
    pub fn with_word_ending_at(word: &[EdgeId], n: i64) -> Result<Self> {
        Self::with_word_at(word, n + 1 - word.len() as i64)
    }

    pub fn orbit(&self) -> &PeriodicOrbit {
        &self.orbit
    }

    pub fn phase(&self) -> usize {
        self.phase
    }

    pub fn period(&self) -> usize {
        self.orbit.period()
    }

    pub fn at(&self, n: i64) -> EdgeId {
        self.orbit.symbol(n + self.phase as i64)
    }

    /// Tail of `φ^k` applied to this sequence.
    pub fn shifted(&self, k: i64) -> Self {
        let per = self.period() as i64;
        Self {
            orbit: self.orbit.clone(),
            phase: (self.phase as i64 + k).rem_euclid(per) as usize,
        }
    }

    /// Window length beyond which two distinct periodic sequences must have
    /// disagreed.
    pub(crate) fn separation_window(&self, other: &Tail) -> i64 {
        (self.period().lcm(&other.period())) as i64
    }

    pub fn periodic_point(&self) -> HeteroclinicPoint {
        HeteroclinicPoint::new(self.clone(), 0, Vec::new(), self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(ids: &[u32]) -> Vec<EdgeId> {
        ids.iter().map(|&i| EdgeId(i)).collect()
    }

    #[test]
    fn primitive_root_and_least_rotation() {
        let (o, off) = PeriodicOrbit::from_word(&w(&[2, 1, 2, 1])).unwrap();
        assert_eq!(o.cycle(), &w(&[1, 2])[..]);
        assert_eq!(off, 1);
        let word = w(&[2, 1, 2, 1]);
        for (i, &e) in word.iter().enumerate() {
            assert_eq!(o.symbol((i + off) as i64), e);
        }
    }

    #[test]
    fn tail_word_alignment() {
        let word = w(&[3, 1, 2]);
        let t = Tail::with_word_at(&word, -4).unwrap();
        for i in 0..9 {
            assert_eq!(t.at(-4 + i), word[i as usize % 3]);
        }
        let t = Tail::with_word_ending_at(&word, 5).unwrap();
        assert_eq!(t.at(5), EdgeId(2));
        assert_eq!(t.at(3), EdgeId(3));
    }

    #[test]
    fn shifted_tail_reads_ahead() {
        let t = Tail::with_word_at(&w(&[0, 1, 1]), 0).unwrap();
        let s = t.shifted(2);
        for n in -6..6 {
            assert_eq!(s.at(n), t.at(n + 2));
        }
    }

    #[test]
    fn orbit_rejects_open_words() {
        let s = EdgeShift::golden_mean();
        assert!(PeriodicOrbit::new(&s, &w(&[1])).is_err());
        assert!(PeriodicOrbit::new(&s, &w(&[1, 2])).is_ok());
    }
}
