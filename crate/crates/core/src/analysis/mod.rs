//! Bounds, nodal counts and Weyl asymptotics for computed spectra.

pub mod bounds;
pub mod nodal;
pub mod weyl;

pub use bounds::{bound_tolerance, check_bounds, BoundEntry, BoundKind, BoundReport, Verdict};
pub use nodal::{nodal_domains, NodalPoint, NodalReport, VanishingVertex, VANISHING_THRESHOLD};
pub use weyl::{counting_function, interval_bracket, weyl_fit, WeylFit, MIN_WEYL_EIGENVALUES};
