//! Octonionic contact geometry on the flat model.
//!
//! The crate covers octonion and Spin(7) algebra, the octonionic Heisenberg
//! group with a finite-difference horizontal calculus, conformal changes of
//! the flat metric and their scalar curvature, the Green kernel of the
//! Yamabe operator, the Siegel model of octonionic hyperbolic space, and a
//! Kleinian-group pipeline producing Patterson–Sullivan measures and the
//! associated invariant metrics.

// `!(x > 0.0)` is deliberate: it rejects NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conformal;
pub mod error;
pub mod fields;
pub mod green;
pub mod heisenberg;
pub mod kleinian;
pub mod octonion;
pub mod siegel;
pub mod spin_frames;
pub mod verify;
pub mod yamabe;

pub use error::{GeometryError, Result};
pub use heisenberg::{FdSpec, HPoint, ScalarField, StepRule};
pub use octonion::Octonion;
