//! Möbius-invariant motions of the n-body problem on the positively curved
//! plane M²_R (the round sphere of radius R in stereographic coordinates).
//!
//! The crate is organized bottom-up:
//!
//! * [`geom`] — conformal metric, cotangent relation, geodesic distance,
//!   singular sets and the sphere lift.
//! * [`mobius`] — SL(2,ℂ) matrices, trace classification, fixed points and
//!   the one-parameter families used to define each solution class.
//! * [`dynamics`] — cotangent force function, its gradient, the equations
//!   of motion, energy and an adaptive Dormand–Prince integrator.
//! * [`conditions`] — residuals of the algebraic condition systems,
//!   velocity laws and the homothetic scaling function φ.
//! * [`families`] — α-equation root finders, mass solves and family
//!   constructors.
//! * [`verify`] — trajectory-level invariance and drift reports.
//! * [`io`] — JSON configuration and CSV trajectory formats.

pub mod conditions;
pub mod dynamics;
pub mod error;
pub mod families;
pub mod geom;
pub mod io;
pub mod mobius;
pub mod roots;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;
