//! The weight functions `ω₀` and `ω_s` on the stable set of `P`.
//!
//! With the clopen radius `ε` used here, `X^s(P, ε)` is the set of points that
//! agree with a point of `P` on every coordinate `n >= 0`. A non-periodic point
//! `x ∈ X^s(P)` has a unique *entry index* `N`, the last coordinate where it
//! differs from the periodic point with the same right tail, and `x ∈ E_N`.

use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::sft::{Cylinder, EdgeId, EdgeShift, HeteroclinicPoint, PeriodicOrbit, Tail};

/// Choice of `ω₀` on `E₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Omega0Kind {
    /// `ω₀ = 1` on all of `E₀`.
    Indicator,
    /// `ω₀(x) = min(1, C₀·d(x, X^s(P, ε)))` on `E₀`.
    LipschitzRamp,
}

impl Omega0Kind {
    pub fn name(self) -> &'static str {
        match self {
            Omega0Kind::Indicator => "indicator",
            Omega0Kind::LipschitzRamp => "lipschitz-ramp",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "indicator" => Some(Omega0Kind::Indicator),
            "lipschitz-ramp" | "lipschitzRamp" => Some(Omega0Kind::LipschitzRamp),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct WeightSystem {
    shift: Arc<EdgeShift>,
    p: Vec<PeriodicOrbit>,
    q: Vec<PeriodicOrbit>,
    kind: Omega0Kind,
    c0: Rational64,
    k: u32,
}

impl WeightSystem {
    pub fn new(
        shift: Arc<EdgeShift>,
        p: Vec<PeriodicOrbit>,
        q: Vec<PeriodicOrbit>,
        kind: Omega0Kind,
    ) -> Result<Self> {
        if p.is_empty() || q.is_empty() {
            return Err(Error::InvalidShift("P and Q must be nonempty".into()));
        }
        for o in p.iter().chain(&q) {
            if !shift.is_closed_path(o.cycle()) {
                return Err(Error::NotAClosedPath(format!("{o:?}")));
            }
        }
        if p.iter().any(|o| q.contains(o)) {
            return Err(Error::OverlappingOrbitSets);
        }
        let mut p = p;
        let mut q = q;
        p.sort();
        p.dedup();
        q.sort();
        q.dedup();
        Ok(Self {
            shift,
            p,
            q,
            kind,
            c0: Rational64::one(),
            k: 1,
        })
    }

    /// Sets the Lipschitz constant of `ω₀`.
    pub fn with_c0(mut self, c0: Rational64) -> Result<Self> {
        if c0 <= Rational64::zero() {
            return Err(Error::InvalidShift("C0 must be positive".into()));
        }
        self.c0 = c0;
        Ok(self)
    }

    pub fn shift(&self) -> &EdgeShift {
        &self.shift
    }

    pub fn shift_arc(&self) -> &Arc<EdgeShift> {
        &self.shift
    }

    pub fn p(&self) -> &[PeriodicOrbit] {
        &self.p
    }

    pub fn q(&self) -> &[PeriodicOrbit] {
        &self.q
    }

    pub fn kind(&self) -> Omega0Kind {
        self.kind
    }

    pub fn with_kind(&self, kind: Omega0Kind) -> Self {
        Self {
            kind,
            ..self.clone()
        }
    }

    pub fn c0(&self) -> Rational64 {
        self.c0
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `C_s = 2·K·C₀`.
    pub fn cs(&self) -> Rational64 {
        Rational64::from_integer(2 * self.k as i64) * self.c0
    }

    /// Radius of the local stable sets around `P`.
    pub fn epsilon(&self) -> f64 {
        self.shift.epsilon_x()
    }

    /// All points of `P`, one tail per phase.
    pub fn p_tails(&self) -> Vec<Tail> {
        self.p
            .iter()
            .flat_map(|o| o.phases().collect::<Vec<_>>())
            .collect()
    }

    pub fn in_stable_class(&self, x: &HeteroclinicPoint) -> bool {
        self.p.contains(x.right().orbit())
    }

    pub fn in_unstable_class(&self, x: &HeteroclinicPoint) -> bool {
        self.q.contains(x.left().orbit())
    }

    pub fn is_heteroclinic(&self, x: &HeteroclinicPoint) -> bool {
        self.in_stable_class(x) && self.in_unstable_class(x)
    }

    /// The point of `P` that `x` is asymptotic to.
    pub fn aligned_p_point(&self, x: &HeteroclinicPoint) -> Result<HeteroclinicPoint> {
        if !self.in_stable_class(x) {
            return Err(Error::NotInStableClass);
        }
        Ok(x.right().periodic_point())
    }

    /// `x ∈ X^s(P, ε)`, by comparing coordinates `n >= 0` with the aligned
    /// point of `P`.
    pub fn in_local_stable(&self, x: &HeteroclinicPoint) -> bool {
        self.in_stable_class(x) && x.agrees_from(&x.right().periodic_point(), 0)
    }

    /// `x ∈ Ω_P = X^s(P, ε) \ P`.
    pub fn in_omega_p(&self, x: &HeteroclinicPoint) -> bool {
        self.in_local_stable(x) && !x.is_periodic()
    }

    /// `x ∈ Ω_P^c = X^s(P) \ X^s(P, ε)`.
    pub fn in_omega_p_complement(&self, x: &HeteroclinicPoint) -> bool {
        self.in_stable_class(x) && !self.in_local_stable(x)
    }

    /// `x ∈ E₀ = φ^{-1}(X^s(P, ε)) \ X^s(P, ε)`.
    pub fn in_e0(&self, x: &HeteroclinicPoint) -> bool {
        !self.in_local_stable(x) && self.in_local_stable(&x.shift(1))
    }

    /// The `N` with `x ∈ E_N`: the last coordinate where `x` differs from the
    /// aligned point of `P`.
    pub fn entry_index(&self, x: &HeteroclinicPoint) -> Result<i64> {
        if !self.in_stable_class(x) {
            return Err(Error::NotInStableClass);
        }
        if x.is_periodic() {
            return Err(Error::PeriodicPointExcluded);
        }
        // canonical form: the last core symbol (or the symbol before an empty
        // core) differs from the right tail
        Ok(if x.core().is_empty() {
            x.start() - 1
        } else {
            x.end() - 1
        })
    }

    /// Entry index by iterating `φ^{±1}` until the orbit lands in `E₀`, using
    /// only the set predicates.
    pub fn entry_index_by_iteration(&self, x: &HeteroclinicPoint) -> Result<i64> {
        if !self.in_stable_class(x) {
            return Err(Error::NotInStableClass);
        }
        if x.is_periodic() {
            return Err(Error::PeriodicPointExcluded);
        }
        let step = if self.in_local_stable(x) { -1 } else { 1 };
        let mut n = 0i64;
        let mut y = x.clone();
        loop {
            if self.in_e0(&y) {
                return Ok(n);
            }
            y = y.shift(step);
            n += step;
        }
    }

    /// `ω₀` on `E₀` for the point with `x_0 = first` and `x_n = rest.at(n)`
    /// for `n >= 1`.
    pub fn omega0_on_e0(&self, first: EdgeId, rest: &Tail) -> Rational64 {
        match self.kind {
            Omega0Kind::Indicator => Rational64::one(),
            Omega0Kind::LipschitzRamp => {
                let m = self.prefix_to_local_stable(first, rest);
                let d = Rational64::new(1, 1i64 << m.min(62));
                (self.c0 * d).min(Rational64::one())
            }
        }
    }

    /// `m` with `d(x, X^s(P, ε)) = 2^{-m}`: the longest common prefix of
    /// `x_0 x_1 ...` with a point of `P`.
    fn prefix_to_local_stable(&self, first: EdgeId, rest: &Tail) -> u32 {
        let mut best = 0;
        for t in self.p_tails() {
            if t.at(0) != first {
                continue;
            }
            let window = t.separation_window(rest) + 1;
            let m = (1..=window)
                .find(|&n| t.at(n) != rest.at(n))
                .unwrap_or(window);
            best = best.max(m as u32);
        }
        best
    }

    pub fn omega0(&self, x: &HeteroclinicPoint) -> Result<Rational64> {
        if !self.in_stable_class(x) {
            return Err(Error::NotInStableClass);
        }
        if x.is_periodic() {
            return Ok(Rational64::zero());
        }
        let n = self.entry_index(x)?;
        Ok(match n {
            n if n < 0 => Rational64::zero(),
            0 => self.omega0_on_e0(x.coord(0), x.right()),
            _ => Rational64::one(),
        })
    }

    /// `ω_s(x) = ω₀(φ^N x) + N`.
    pub fn omega_s(&self, x: &HeteroclinicPoint) -> Result<Rational64> {
        let n = self.entry_index(x)?;
        let w0 = match self.kind {
            Omega0Kind::Indicator => Rational64::one(),
            Omega0Kind::LipschitzRamp => self.omega0_on_e0(x.coord(n), &x.right().shifted(n)),
        };
        Ok(w0 + Rational64::from_integer(n))
    }

    /// `ω_s` from its two defining orbit sums, each cut off once its terms
    /// are identically zero.
    pub fn omega_s_series(&self, x: &HeteroclinicPoint) -> Result<Rational64> {
        if !self.in_stable_class(x) {
            return Err(Error::NotInStableClass);
        }
        if x.is_periodic() {
            return Err(Error::PeriodicPointExcluded);
        }
        let mut total = Rational64::zero();
        // forward orbit: ω₀ vanishes from the first visit to X^s(P, ε) on
        let mut y = x.clone();
        while !self.in_local_stable(&y) {
            total += self.omega0(&y)?;
            y = y.shift(1);
        }
        // backward orbit: 1 - ω₀ vanishes once φ(y) leaves X^s(P, ε)
        let mut y = x.shift(-1);
        while self.in_local_stable(&y.shift(1)) {
            total -= Rational64::one() - self.omega0(&y)?;
            y = y.shift(-1);
        }
        Ok(total)
    }

    /// Points of `cylinder ∩ X^s(P)` whose entry index is at most the
    /// cylinder's top. There are finitely many: each agrees with a point of
    /// `P` beyond the top.
    pub fn shallow_points(&self, cylinder: &Cylinder) -> Vec<HeteroclinicPoint> {
        let top = cylinder.top();
        let lo = cylinder.word_start();
        let word: Vec<EdgeId> = (lo..=top).map(|n| cylinder.coord(n)).collect();
        let mut out: Vec<HeteroclinicPoint> = self
            .p_tails()
            .into_iter()
            .filter(|t| self.shift.follows(cylinder.last_edge(), t.at(top + 1)))
            .map(|t| HeteroclinicPoint::new(cylinder.left().clone(), lo, word.clone(), t))
            .filter(|x| !x.is_periodic())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}
