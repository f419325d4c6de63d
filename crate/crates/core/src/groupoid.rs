//! Locally constant functions on the stable groupoid and their action on
//! finitely supported vectors of `ℓ²(X^h(P, Q))`.
//!
//! A basic set is given by two stably equivalent points `v`, `w` and a depth
//! `k`; its local homeomorphism `h^s` replaces the coordinates `<= k` of a
//! point of `X^u(w, 2^{-k})` by those of `v`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::sft::{Cylinder, EdgeShift, HeteroclinicPoint, PeriodicOrbit};
use crate::weights::WeightSystem;

/// Exact complex amplitude.
pub type Amp = Complex<Rational64>;

pub fn amp(re: i64) -> Amp {
    Complex::new(Rational64::from_integer(re), Rational64::zero())
}

pub fn amp_to_c64(a: &Amp) -> Complex64 {
    Complex64::new(
        a.re.to_f64().unwrap_or(f64::NAN),
        a.im.to_f64().unwrap_or(f64::NAN),
    )
}

pub fn amp_abs(a: &Amp) -> f64 {
    amp_to_c64(a).norm()
}

/// Coefficient field of a [`StateVector`].
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_amp(a: &Amp) -> Self;
    fn conj(&self) -> Self;
    fn abs_sq(&self) -> f64;
}

impl Scalar for Amp {
    fn from_amp(a: &Amp) -> Self {
        *a
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn abs_sq(&self) -> f64 {
        amp_to_c64(self).norm_sqr()
    }
}

impl Scalar for Complex64 {
    fn from_amp(a: &Amp) -> Self {
        amp_to_c64(a)
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn abs_sq(&self) -> f64 {
        self.norm_sqr()
    }
}

/// A finitely supported vector; zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct StateVector<T: Scalar = Amp> {
    coeffs: BTreeMap<HeteroclinicPoint, T>,
}

impl<T: Scalar> fmt::Debug for StateVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}

impl<T: Scalar> Default for StateVector<T> {
    fn default() -> Self {
        Self {
            coeffs: BTreeMap::new(),
        }
    }
}

impl<T: Scalar> StateVector<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `δ_x`.
    pub fn basis(x: HeteroclinicPoint) -> Self
    where
        T: num_traits::One,
    {
        let mut v = Self::zero();
        v.add_at(x, T::one());
        v
    }

    pub fn add_at(&mut self, x: HeteroclinicPoint, c: T) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.coeffs.entry(x) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn get(&self, x: &HeteroclinicPoint) -> T {
        self.coeffs.get(x).cloned().unwrap_or_else(T::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HeteroclinicPoint, &T)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero();
        for (x, v) in &self.coeffs {
            out.add_at(x.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, v) in &other.coeffs {
            out.add_at(x.clone(), v.clone());
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (x, v) in &other.coeffs {
            out.add_at(x.clone(), -v.clone());
        }
        out
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.values().map(T::abs_sq).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &Self) -> T {
        self.coeffs
            .iter()
            .filter_map(|(x, a)| other.coeffs.get(x).map(|b| a.conj() * b.clone()))
            .fold(T::zero(), |s, t| s + t)
    }

    /// `u^k ξ` with `u δ_x = δ_{φ(x)}`.
    pub fn unitary_shift(&self, k: i64) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .map(|(x, v)| (x.shift(k), v.clone()))
                .collect(),
        }
    }

    /// Multiplies each coefficient by `f(x)`.
    pub fn diagonal<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&HeteroclinicPoint) -> Result<T>,
    {
        let mut out = Self::zero();
        for (x, v) in &self.coeffs {
            out.add_at(x.clone(), f(x)? * v.clone());
        }
        Ok(out)
    }
}

impl<T: Scalar> FromIterator<(HeteroclinicPoint, T)> for StateVector<T> {
    fn from_iter<I: IntoIterator<Item = (HeteroclinicPoint, T)>>(iter: I) -> Self {
        let mut v = Self::zero();
        for (x, c) in iter {
            v.add_at(x, c);
        }
        v
    }
}

/// `V^s(v, w, h^s, 2^{-k})`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BasicSet {
    v: HeteroclinicPoint,
    w: HeteroclinicPoint,
    depth: i64,
    sync: i64,
}

impl fmt::Debug for BasicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "V(v={:?}, w={:?}, N={}, k={})",
            self.v, self.w, self.sync, self.depth
        )
    }
}

impl BasicSet {
    /// `v` and `w` must have the same right tail, and the depth must exceed
    /// the synchronization time `N` (the least `N` with
    /// `φ^N(w) ∈ X^s(φ^N(v), ε_X/2)`).
    pub fn new(v: HeteroclinicPoint, w: HeteroclinicPoint, depth: i64) -> Result<Self> {
        if v.right() != w.right() {
            return Err(Error::InvalidBasicSet(
                "v and w are not stably equivalent".into(),
            ));
        }
        let sync = match last_difference(&v, &w) {
            None => depth - 1,
            Some(m) => m + 2,
        };
        if depth < sync + 1 {
            return Err(Error::InvalidBasicSet(format!(
                "depth {depth} does not exceed synchronization time {sync}"
            )));
        }
        Ok(Self { v, w, depth, sync })
    }

    pub fn diagonal(w: HeteroclinicPoint, depth: i64) -> Self {
        Self::new(w.clone(), w, depth).expect("diagonal basic sets are valid")
    }

    pub fn v(&self) -> &HeteroclinicPoint {
        &self.v
    }

    pub fn w(&self) -> &HeteroclinicPoint {
        &self.w
    }

    pub fn depth(&self) -> i64 {
        self.depth
    }

    pub fn sync(&self) -> i64 {
        self.sync
    }

    pub fn is_diagonal(&self) -> bool {
        self.v == self.w
    }

    /// `X^u(w, 2^{-k})`.
    pub fn source(&self) -> Cylinder {
        Cylinder::of_point(&self.w, self.depth)
    }

    /// `X^u(v, 2^{-k})`.
    pub fn range(&self) -> Cylinder {
        Cylinder::of_point(&self.v, self.depth)
    }

    /// `h^s(x) = φ^{-N}[φ^N(x), φ^N(v)]`.
    pub fn h_s(&self, x: &HeteroclinicPoint) -> Result<HeteroclinicPoint> {
        if !self.source().contains(x) {
            return Err(Error::OutsideSupport);
        }
        let n = self.sync;
        Ok(HeteroclinicPoint::bracket(&x.shift(n), &self.v.shift(n))?.shift(-n))
    }

    /// `h^s` as a splice, for points already known to lie in the source.
    pub(crate) fn h(&self, x: &HeteroclinicPoint) -> HeteroclinicPoint {
        HeteroclinicPoint::splice(&self.v, x, self.depth)
    }

    /// Inverse of `h^s` on the range.
    pub fn h_inv(&self, y: &HeteroclinicPoint) -> Result<HeteroclinicPoint> {
        if !self.range().contains(y) {
            return Err(Error::OutsideSupport);
        }
        Ok(HeteroclinicPoint::splice(&self.w, y, self.depth))
    }

    /// Image under `h^s` of a cylinder inside the source.
    pub fn image(&self, c: &Cylinder) -> Cylinder {
        c.rebase(self.depth, &self.range())
    }

    pub fn preimage(&self, c: &Cylinder) -> Cylinder {
        c.rebase(self.depth, &self.source())
    }
}

fn last_difference(v: &HeteroclinicPoint, w: &HeteroclinicPoint) -> Option<i64> {
    let hi = v.end().max(w.end());
    let lo = v.start().min(w.start()) - v.left().separation_window(w.left()) - 1;
    if v == w {
        return None;
    }
    (lo..hi).rev().find(|&n| v.coord(n) != w.coord(n))
}

/// A function on a basic set, constant on each of finitely many disjoint
/// cylinders refining the source.
#[derive(Clone, PartialEq)]
pub struct BasicFunction {
    set: BasicSet,
    pieces: Vec<(Cylinder, Amp)>,
}

impl fmt::Debug for BasicFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BasicFunction")
            .field("set", &self.set)
            .field("pieces", &self.pieces)
            .finish()
    }
}

impl BasicFunction {
    pub fn new(set: BasicSet, pieces: Vec<(Cylinder, Amp)>) -> Result<Self> {
        let source = set.source();
        let mut pieces: Vec<_> = pieces.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        for (c, _) in &pieces {
            if !c.is_subset_of(&source) {
                return Err(Error::InvalidBasicSet(format!(
                    "piece {c:?} leaves the source"
                )));
            }
        }
        for (i, (a, _)) in pieces.iter().enumerate() {
            if pieces[i + 1..]
                .iter()
                .any(|(b, _)| a.intersect(b).is_some())
            {
                return Err(Error::InvalidBasicSet("overlapping pieces".into()));
            }
        }
        pieces.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(Self { set, pieces })
    }

    /// The constant `value` on the whole basic set.
    pub fn constant(set: BasicSet, value: Amp) -> Self {
        let source = set.source();
        Self::new(set, vec![(source, value)]).expect("single piece is valid")
    }

    /// Diagonal indicator of a cylinder, anchored at a point of the cylinder
    /// asymptotic to `targets`.
    pub fn indicator(
        shift: &EdgeShift,
        cylinder: &Cylinder,
        targets: &[PeriodicOrbit],
    ) -> Result<Self> {
        Self::diagonal_constant(shift, cylinder, targets, amp(1))
    }

    pub fn diagonal_constant(
        shift: &EdgeShift,
        cylinder: &Cylinder,
        targets: &[PeriodicOrbit],
        value: Amp,
    ) -> Result<Self> {
        let w = cylinder.completion(shift, targets)?;
        Ok(Self::constant(BasicSet::diagonal(w, cylinder.top()), value))
    }

    pub fn set(&self) -> &BasicSet {
        &self.set
    }

    pub fn pieces(&self) -> &[(Cylinder, Amp)] {
        &self.pieces
    }

    pub fn is_diagonal(&self) -> bool {
        self.set.is_diagonal()
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    /// `max |a|`.
    pub fn sup_abs(&self) -> f64 {
        self.pieces
            .iter()
            .map(|(_, a)| amp_abs(a))
            .fold(0.0, f64::max)
    }

    /// `a(h^s(x), x)`, or `None` outside `Source(a)`.
    pub fn value_at(&self, x: &HeteroclinicPoint) -> Option<Amp> {
        self.pieces
            .iter()
            .find(|(c, _)| c.contains(x))
            .map(|(_, a)| *a)
    }

    /// `h^s` of the underlying basic set.
    pub fn h_s(&self, x: &HeteroclinicPoint) -> Result<HeteroclinicPoint> {
        self.set.h_s(x)
    }

    /// `π(a)ξ`.
    pub fn apply<T: Scalar>(&self, xi: &StateVector<T>) -> StateVector<T> {
        let mut out = StateVector::zero();
        for (x, c) in xi.iter() {
            if let Some(a) = self.value_at(x) {
                out.add_at(self.set.h(x), T::from_amp(&a) * c.clone());
            }
        }
        out
    }

    /// `a*(x, y) = conj(a(y, x))`.
    pub fn adjoint(&self) -> Self {
        let set = BasicSet {
            v: self.set.w.clone(),
            w: self.set.v.clone(),
            depth: self.set.depth,
            sync: self.set.sync,
        };
        let pieces = self
            .pieces
            .iter()
            .map(|(c, a)| (self.set.image(c), a.conj()))
            .collect();
        Self::new(set, pieces).expect("image pieces are disjoint")
    }

    /// `α^j(a)(x, y) = a(φ^{-j}x, φ^{-j}y)`.
    pub fn alpha(&self, j: i64) -> Self {
        let set = BasicSet {
            v: self.set.v.shift(j),
            w: self.set.w.shift(j),
            depth: self.set.depth - j,
            sync: self.set.sync - j,
        };
        let pieces = self.pieces.iter().map(|(c, a)| (c.shift(j), *a)).collect();
        Self::new(set, pieces).expect("shifted pieces are disjoint")
    }

    /// `f·g`, or `None` when the product vanishes.
    pub fn convolve(&self, g: &BasicFunction) -> Option<BasicFunction> {
        let f = self;
        let (kf, kg) = (f.set.depth, g.set.depth);
        let (v, w, depth) = if kf >= kg {
            if !f.set.source().is_subset_of(&g.set.range()) {
                return None;
            }
            let w = HeteroclinicPoint::splice(&g.set.w, &f.set.w, kg);
            (f.set.v.clone(), w, kf)
        } else {
            if !g.set.range().is_subset_of(&f.set.source()) {
                return None;
            }
            let v = HeteroclinicPoint::splice(&f.set.v, &g.set.v, kf);
            (v, g.set.w.clone(), kg)
        };
        let set = BasicSet::new(v, w, depth).expect("composite of basic sets is basic");
        let mut pieces = Vec::new();
        for (gc, ga) in &g.pieces {
            let img = g.set.image(gc);
            for (fc, fa) in &f.pieces {
                if let Some(i) = img.intersect(fc) {
                    pieces.push((g.set.preimage(&i), fa * ga));
                }
            }
        }
        let out = BasicFunction::new(set, pieces).expect("products of pieces are disjoint");
        (!out.is_zero()).then_some(out)
    }
}

/// A finite sum of basic functions.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GroupoidFunction {
    terms: Vec<BasicFunction>,
}

impl GroupoidFunction {
    pub fn new(terms: Vec<BasicFunction>) -> Self {
        Self {
            terms: terms.into_iter().filter(|t| !t.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[BasicFunction] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn apply<T: Scalar>(&self, xi: &StateVector<T>) -> StateVector<T> {
        self.terms
            .iter()
            .fold(StateVector::zero(), |acc, t| acc.plus(&t.apply(xi)))
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.terms.iter().map(BasicFunction::adjoint).collect())
    }

    pub fn alpha(&self, j: i64) -> Self {
        Self::new(self.terms.iter().map(|t| t.alpha(j)).collect())
    }

    pub fn convolve(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for f in &self.terms {
            for g in &other.terms {
                terms.extend(f.convolve(g));
            }
        }
        Self::new(terms)
    }
}

impl From<BasicFunction> for GroupoidFunction {
    fn from(f: BasicFunction) -> Self {
        Self::new(vec![f])
    }
}

/// Least `K >= 1` such that `h^s` moves entry indices by at most `K` on
/// `Source(a)`. Points whose entry index exceeds the basic-set depth are not
/// moved at all, so only the finitely many shallow points are checked.
pub fn hop_bound(w: &WeightSystem, a: &BasicFunction) -> Result<u32> {
    if a.is_zero() {
        return Err(Error::EmptySupport);
    }
    let mut k = 1u32;
    for (c, _) in a.pieces() {
        for x in w.shallow_points(c) {
            let hx = a.set.h(&x);
            let d = (w.entry_index(&hx)? - w.entry_index(&x)?).unsigned_abs();
            k = k.max(d as u32);
        }
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::{EdgeId, Tail};

    fn ids(v: &[u32]) -> Vec<EdgeId> {
        v.iter().map(|&i| EdgeId(i)).collect()
    }

    fn pt(left: u32, start: i64, core: &[u32], right: u32) -> HeteroclinicPoint {
        HeteroclinicPoint::new(
            Tail::with_word_at(&ids(&[left]), 0).unwrap(),
            start,
            ids(core),
            Tail::with_word_at(&ids(&[right]), 0).unwrap(),
        )
    }

    fn splice_fn() -> BasicFunction {
        // w = …111 0 1 0 0 … (core at −1..0 = "0 1"), v = …111 1 1 0 0 …
        let w = pt(1, -1, &[0, 1], 0);
        let v = pt(1, 1, &[], 0);
        BasicFunction::constant(BasicSet::new(v, w, 3).unwrap(), amp(1))
    }

    #[test]
    fn h_s_maps_w_to_v_and_agrees_with_splice() {
        let f = splice_fn();
        let set = f.set();
        assert_eq!(set.sync(), 1);
        assert_eq!(set.h_s(set.w()).unwrap(), *set.v());
        let x = pt(1, -1, &[0, 1, 0, 0, 0, 1], 0);
        let hx = set.h_s(&x).unwrap();
        assert_eq!(hx, set.h(&x));
        assert_eq!(hx, pt(1, 1, &[0, 0, 0, 1], 0));
        assert_eq!(set.h_s(&pt(1, 0, &[], 0)), Err(Error::OutsideSupport));
    }

    #[test]
    fn adjoint_inverts_on_basis() {
        let f = splice_fn();
        let x = pt(1, -1, &[0, 1, 0, 0, 0, 1], 0);
        let xi: StateVector = StateVector::basis(x.clone());
        let back = f.adjoint().apply(&f.apply(&xi));
        assert_eq!(back, xi);
    }

    #[test]
    fn diagonal_indicators_multiply_to_intersection() {
        let s = EdgeShift::full(2).unwrap();
        let p = PeriodicOrbit::new(&s, &ids(&[0])).unwrap();
        let c1 = Cylinder::from_words(&ids(&[1]), &[], 1).unwrap();
        let c2 = Cylinder::from_words(&ids(&[1]), &ids(&[0]), 2).unwrap();
        let f = BasicFunction::indicator(&s, &c1, std::slice::from_ref(&p)).unwrap();
        let g = BasicFunction::indicator(&s, &c2, &[p]).unwrap();
        let fg = f.convolve(&g).unwrap();
        assert_eq!(fg.pieces().len(), 1);
        assert_eq!(fg.pieces()[0].0, c2);
    }

    #[test]
    fn convolution_matches_composition() {
        let f = splice_fn();
        let g = f.adjoint();
        let ff = f.convolve(&g).unwrap();
        for core in [&[0u32, 1, 1][..], &[0, 0, 0, 1], &[0, 0, 0, 0, 1, 1]] {
            let x = pt(1, 1, core, 0);
            let xi: StateVector = StateVector::basis(x);
            assert_eq!(ff.apply(&xi), f.apply(&g.apply(&xi)));
        }
    }

    #[test]
    fn alpha_is_covariant() {
        let f = splice_fn();
        let x = pt(1, -1, &[0, 1, 0, 0, 0, 1, 1], 0);
        for j in -3..=3 {
            let xi: StateVector = StateVector::basis(x.shift(j));
            let lhs = f.alpha(j).apply(&xi);
            let rhs = f.apply(&xi.unitary_shift(-j)).unitary_shift(j);
            assert_eq!(lhs, rhs);
        }
        assert_eq!(f.alpha(2).alpha(-2), f);
    }

    #[test]
    fn basic_set_rejects_shallow_depth() {
        let w = pt(1, -1, &[0, 1], 0);
        let v = pt(1, 1, &[], 0);
        assert!(BasicSet::new(v, w, 1).is_err());
    }
}
