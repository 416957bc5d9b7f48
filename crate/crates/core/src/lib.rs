//! Symbolic-numeric analysis of delay differential equations of the form
//! `w(z+1) - w(z-1) = F(z, w, w')`: singularity cascades, necessary-condition
//! classifiers, closed-form solution checks and Nevanlinna measurements.

pub mod algebra;
pub mod analytic;
pub mod cascade;
pub mod classify;
pub mod cli;
pub mod error;
pub mod model;
pub mod nevanlinna;

pub use error::{Error, Result};
