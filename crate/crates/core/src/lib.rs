//! Geometry and probability of random hyperbolic punctured tori.
//!
//! Four uniformly random points on the circle span an ideal quadrilateral;
//! pairing its opposite sides gives a punctured torus. This crate provides the
//! closed-form laws of the resulting cross ratios and geodesic lengths, the
//! Fuchsian side-pairing groups, a numerical solution of the Lamé accessory
//! parameter problem relating cross ratio and conformal modulus, the derived
//! modulus and Teichmüller-distance laws, and Monte Carlo cross-checks.

// `!(x > 0.0)` guards deliberately reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closedform;
pub mod error;
pub mod hypgeom;
pub mod lame;
pub mod mc;
pub mod modmap;
pub mod numeric;
pub mod torusgroup;
pub mod verify;

pub use error::{Error, Result};
