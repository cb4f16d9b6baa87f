//! Solvers for two-dimensional diffusion-wave equations whose fractional
//! order `alpha(t)` varies in time.
//!
//! The model is rewritten as an integro-differential equation through the
//! generalized identity function `g`, discretised in space with fourth-order
//! compact differences and in time either by trapezoidal convolution
//! quadrature (formal order `alpha(0)`) or by an averaged product-integration
//! rule (second order). Each time scheme comes in an ADI-factored and an
//! unsplit flavour.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision, clippy::needless_range_loop)]

pub mod exponent;
pub mod harness;
pub mod numerics;
pub mod schemes;
pub mod spatial;
pub mod weights;
