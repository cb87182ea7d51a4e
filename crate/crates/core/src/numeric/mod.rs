//! Numerical building blocks shared by the geometric modules.

pub mod interp;
pub mod ode;
pub mod quadrature;
pub mod roots;

pub use quadrature::{Integral, Quadrature};
