//! Left-invariant Lorentzian geometry on the Heisenberg group.
//!
//! Two families of problems are covered, distinguished by the position of
//! the group commutant relative to the light cone:
//!
//! * [`family_one`] — the cone misses the commutant; the attainable set is a
//!   proper invariant region, the exponential map is a diffeomorphism onto
//!   its interior, and the Lorentzian distance is computed by inverting it.
//! * [`family_two`] — the commutant sits inside the cone union; the system
//!   is globally controllable, admits periodic trajectories, and has
//!   conjugate points on the vertical axis.
//!
//! [`limit_zero`] handles the ε → 0 degeneration to the sub-Lorentzian
//! problem, and [`oracle`] provides brute-force validators (RK4 integration,
//! finite-difference Jacobians, the length functional) that everything else
//! is tested against.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod discrepancy;
pub mod error;
pub mod family_one;
pub mod family_two;
pub mod group;
pub mod limit_zero;
pub(crate) mod math;
pub mod oracle;

pub use error::Error;
pub use group::{Control, Epsilon, FamilyTag, GroupElement, TangentVector};
