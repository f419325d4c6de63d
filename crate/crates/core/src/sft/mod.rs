//! Edge shifts as concrete Smale spaces.
//!
//! Points are bi-infinite edge paths that are eventually periodic in both
//! directions. The metric is `d(x, y) = 2^{-min{|n| : x_n != y_n}}`, so the
//! expansion constant is `λ = 2` and the bracket is defined exactly when
//! `x_0 = y_0` (`ε_X = 1`).

mod cylinder;
mod enumerate;
mod orbit;
mod point;
mod shift;

pub use cylinder::Cylinder;
pub use enumerate::{cylinder_points, enumerate_heteroclinic, enumerate_window};
pub use orbit::{PeriodicOrbit, Tail};
pub use point::HeteroclinicPoint;
pub use shift::{is_irreducible, Edge, EdgeId, EdgeShift};
