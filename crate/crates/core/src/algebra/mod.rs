//! Exact arithmetic over ℚ(i): polynomials, fractions, rational functions and Laurent series.

pub mod field;
pub mod gauss;
pub mod laurent;
pub mod mpoly;
pub mod parse;
pub mod ratfunc;

pub use field::{frac_is_zero, FieldElem};
pub use gauss::GaussRat;
pub use laurent::{ls_compose_rational, ls_log_derivative, LaurentSeries, SeriesWindow};
pub use mpoly::{MPoly, Sym};
pub use ratfunc::{rf_shift, RatFunc};
