use num_complex::{Complex, Complex64};
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::groupoid::{hop_bound, Amp, BasicFunction, Scalar, StateVector};
use crate::sft::{cylinder_points, HeteroclinicPoint};
use crate::weights::WeightSystem;

/// `D δ_x = ω_s(x) δ_x` or `𝔇 δ_x = λ^{ω_s(x)} δ_x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiracKind {
    Linear,
    Exponential,
}

/// Coefficients in which the Dirac eigenvalues can be written.
pub trait DiracScalar: Scalar {
    fn eigenvalue(kind: DiracKind, w: &WeightSystem, x: &HeteroclinicPoint) -> Result<Self>;
}

impl DiracScalar for Amp {
    fn eigenvalue(kind: DiracKind, w: &WeightSystem, x: &HeteroclinicPoint) -> Result<Self> {
        let omega = w.omega_s(x)?;
        let re = match kind {
            DiracKind::Linear => omega,
            DiracKind::Exponential => {
                if !omega.is_integer() || omega.to_integer().abs() > 60 {
                    return Err(Error::Inexact(format!("λ^{omega}")));
                }
                let lambda = Rational64::from_integer(w.shift().lambda() as i64);
                let e = omega.to_integer() as i32;
                if e >= 0 {
                    lambda.pow(e)
                } else {
                    lambda.recip().pow(-e)
                }
            }
        };
        Ok(Complex::new(re, Rational64::zero()))
    }
}

impl DiracScalar for Complex64 {
    fn eigenvalue(kind: DiracKind, w: &WeightSystem, x: &HeteroclinicPoint) -> Result<Self> {
        let omega = w.omega_s(x)?.to_f64().unwrap_or(f64::NAN);
        let re = match kind {
            DiracKind::Linear => omega,
            DiracKind::Exponential => (w.shift().lambda() as f64).powf(omega),
        };
        Ok(Complex64::new(re, 0.0))
    }
}

/// Applies the Dirac operator of the given kind.
pub fn dirac_apply<T: DiracScalar>(
    kind: DiracKind,
    w: &WeightSystem,
    xi: &StateVector<T>,
) -> Result<StateVector<T>> {
    xi.diagonal(|x| T::eigenvalue(kind, w, x))
}

/// `[D, π(a)]ξ = D π(a) ξ - π(a) D ξ`.
pub fn commutator_apply<T: DiracScalar>(
    kind: DiracKind,
    w: &WeightSystem,
    a: &BasicFunction,
    xi: &StateVector<T>,
) -> Result<StateVector<T>> {
    let lhs = dirac_apply(kind, w, &a.apply(xi))?;
    let rhs = a.apply(&dirac_apply(kind, w, xi)?);
    Ok(lhs.minus(&rhs))
}

/// `[D, u^k]ξ = D u^k ξ - u^k D ξ`.
pub fn shift_commutator_apply<T: DiracScalar>(
    kind: DiracKind,
    w: &WeightSystem,
    xi: &StateVector<T>,
    k: i64,
) -> Result<StateVector<T>> {
    let lhs = dirac_apply(kind, w, &xi.unitary_shift(k))?;
    let rhs = dirac_apply(kind, w, xi)?.unitary_shift(k);
    Ok(lhs.minus(&rhs))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutatorBound {
    /// Largest `‖[D, a]δ_x‖` over the sampled basis vectors.
    pub empirical_sup: f64,
    pub analytic_bound: f64,
    pub samples: usize,
    pub hop_bound: u32,
}

/// Basis vectors of `Source(a) ∩ X^h(P, Q)` whose free coordinates end within
/// `depth` of their piece's top.
pub fn source_basis(w: &WeightSystem, a: &BasicFunction, depth: i64) -> Vec<HeteroclinicPoint> {
    let mut out = Vec::new();
    for (c, _) in a.pieces() {
        if !w.q().contains(c.left().orbit()) {
            continue;
        }
        out.extend(
            cylinder_points(w.shift(), c, w.p(), c.top() + depth)
                .into_iter()
                .filter(|x| !x.is_periodic()),
        );
    }
    out
}

/// Sweeps `‖[D, a]δ_x‖` over [`source_basis`] and compares with the analytic
/// bound: `(K+1)·max|a|` for the linear kind, and
/// `max(C_s ε_X/2, λ^{n+K+1})·max|a|` for the exponential kind, where `n` is
/// the largest entry index at which `h^s` can change `ω_s`.
pub fn commutator_norm_bound(
    kind: DiracKind,
    w: &WeightSystem,
    a: &BasicFunction,
    sample_depth: i64,
) -> Result<CommutatorBound> {
    let sup_a = a.sup_abs();
    let k = if a.is_zero() { 1 } else { hop_bound(w, a)? };
    let basis = source_basis(w, a, sample_depth.max(1));
    let mut empirical: f64 = 0.0;
    for x in &basis {
        let xi: StateVector<Complex64> = StateVector::basis(x.clone());
        empirical = empirical.max(commutator_apply(kind, w, a, &xi)?.norm());
    }
    let analytic = match kind {
        DiracKind::Linear => (k as f64 + 1.0) * sup_a,
        DiracKind::Exponential => {
            let mut deepest: Option<i64> = None;
            for (c, _) in a.pieces() {
                for x in w.shallow_points(c) {
                    let n = w.entry_index(&x)?;
                    deepest = Some(deepest.map_or(n, |d| d.max(n)));
                }
            }
            let lambda = w.shift().lambda() as f64;
            let floor = w.cs().to_f64().unwrap_or(f64::NAN) * w.shift().epsilon_x() / 2.0;
            let reach = deepest.map_or(0.0, |n| lambda.powi((n + k as i64 + 1) as i32));
            floor.max(reach) * sup_a
        }
    };
    Ok(CommutatorBound {
        empirical_sup: empirical,
        analytic_bound: analytic,
        samples: basis.len(),
        hop_bound: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{amp, BasicSet};
    use crate::sft::{Cylinder, EdgeId, EdgeShift, PeriodicOrbit, Tail};
    use crate::weights::Omega0Kind;
    use num_traits::One;
    use std::sync::Arc;

    fn ids(v: &[u32]) -> Vec<EdgeId> {
        v.iter().map(|&i| EdgeId(i)).collect()
    }

    fn pt(start: i64, core: &[u32]) -> HeteroclinicPoint {
        HeteroclinicPoint::new(
            Tail::with_word_at(&ids(&[1]), 0).unwrap(),
            start,
            ids(core),
            Tail::with_word_at(&ids(&[0]), 0).unwrap(),
        )
    }

    fn system() -> WeightSystem {
        let s = Arc::new(EdgeShift::full(2).unwrap());
        let p = PeriodicOrbit::new(&s, &ids(&[0])).unwrap();
        let q = PeriodicOrbit::new(&s, &ids(&[1])).unwrap();
        WeightSystem::new(s, vec![p], vec![q], Omega0Kind::Indicator).unwrap()
    }

    #[test]
    fn eigenvalues() {
        let w = system();
        let x = pt(3, &[]); // last 1 at coordinate 2, ω_s = 3
        let xi: StateVector = StateVector::basis(x.clone());
        assert_eq!(
            dirac_apply(DiracKind::Linear, &w, &xi).unwrap().get(&x),
            amp(3)
        );
        assert_eq!(
            dirac_apply(DiracKind::Exponential, &w, &xi)
                .unwrap()
                .get(&x),
            amp(8)
        );
        let z: StateVector = StateVector::zero();
        assert!(dirac_apply(DiracKind::Linear, &w, &z).unwrap().is_empty());
    }

    #[test]
    fn diagonal_commutes() {
        let w = system();
        let c = Cylinder::from_words(&ids(&[1]), &[], 1).unwrap();
        let a = BasicFunction::indicator(w.shift(), &c, w.p()).unwrap();
        for x in source_basis(&w, &a, 5) {
            let xi: StateVector = StateVector::basis(x);
            assert!(commutator_apply(DiracKind::Linear, &w, &a, &xi)
                .unwrap()
                .is_empty());
        }
    }

    #[test]
    fn splice_moves_entry_index_by_two() {
        // w has its last 1 at 0; v at 2. Points of X^u(w, 2^{-3}) with no
        // later 1 have entry index 0 and are sent to entry index 2.
        let w_pt = pt(-1, &[0, 1]);
        let v_pt = pt(-1, &[0, 1, 1, 1]);
        let set = BasicSet::new(v_pt, w_pt.clone(), 5).unwrap();
        let a = BasicFunction::constant(set, amp(1));
        let ws = system();
        let xi: StateVector = StateVector::basis(w_pt.clone());
        let out = commutator_apply(DiracKind::Linear, &ws, &a, &xi).unwrap();
        let hx = a.h_s(&w_pt).unwrap();
        assert_eq!(out.get(&hx), amp(2));
        let b = commutator_norm_bound(DiracKind::Linear, &ws, &a, 6).unwrap();
        assert_eq!(b.hop_bound, 2);
        assert!(b.empirical_sup <= b.analytic_bound);
        assert_eq!(b.empirical_sup, 2.0);
        let e = commutator_norm_bound(DiracKind::Exponential, &ws, &a, 6).unwrap();
        assert!(e.empirical_sup <= e.analytic_bound);
    }

    #[test]
    fn shift_commutator_is_minus_u() {
        let w = system();
        for n in -3..6 {
            let x = pt(n, &[]);
            let xi: StateVector = StateVector::basis(x.clone());
            let c = shift_commutator_apply(DiracKind::Linear, &w, &xi, 1).unwrap();
            assert_eq!(c, xi.unitary_shift(1).scale(&-Amp::one()));
        }
    }
}
