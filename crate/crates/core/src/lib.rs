//! Exact computation with finite-dimensional representations of SL2(Z) and
//! the holomorphic theory of vector valued modular forms attached to them:
//! exponent choices, Euler characteristics, dimension formulas, free-module
//! generator weights, splitting types over the weighted projective line
//! P(4,6), and a q-expansion engine that verifies the predictions on worked
//! examples.

pub mod descriptor;
pub mod exact;
pub mod exponents;
pub mod forms;
pub mod qseries;
pub mod rep;
pub mod report;
pub mod wpline;
