//! The Lamé accessory-parameter problem: for the rectangle with vertices
//! `0, 1, 1 + iτ, iτ` find the `λ` for which the developing map `s/c` of
//! `w'' + ℘(z) w = λ w` sends the rectangle onto an ideal quadrilateral,
//! i.e. the two image circles are tangent. The cross ratio of that
//! quadrilateral is the value of the modulus-to-cross-ratio map at `m = 1/τ`.

pub mod integrate;
pub mod solve;
pub mod theta;
pub mod wp;

pub use integrate::{integrate_lame, LameEndpointData, LamePaths, Leg, LegKind};
pub use solve::{
    circle_invariants, root_function, solve_accessory, AccessoryRecord, AccessorySolve, CircleInvariants,
    SolveDiagnostics, TAU_MAX, TAU_MIN,
};
pub use theta::{theta1, theta1_prime0, theta2, theta3, theta4, ThetaParams};
pub use wp::{wp, Potential};
