//! Equation classes, delay-differential polynomials and resultants.

pub mod ddpoly;
pub mod equation;
pub mod resultant;
pub mod wpoly;

pub use ddpoly::{substitute_rational, DDPolynomial, Slot};
pub use equation::{mohonko_degree, DegreeReport, DelayDiffEq, EqClass, FactoredQ, LogDerivEq};
pub use resultant::{resultant_by_roots, resultant_in_w};
pub use wpoly::WPoly;
