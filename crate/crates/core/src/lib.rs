//! Workbench for the mod-2 Steenrod algebra, bounded unstable modules and
//! the Eilenberg–Moore spectral sequence.
//!
//! Everything is computed over F₂ inside an explicit degree bound, so all
//! objects are finite: graded vector spaces carry one dimension per degree,
//! Steenrod actions are matrices, and every structural claim is checked by
//! finite linear algebra. The crates split as
//!
//! * [`f2`] — bit-packed linear algebra over F₂,
//! * [`steenrod`] — the Steenrod algebra in the admissible basis,
//! * [`unstable`] — bounded unstable modules, nilpotency and the nilpotent
//!   filtration,
//! * [`homological`] — graded algebra presentations, bar constructions, Tor,
//! * [`simplicial`] — finite simplicial sets, cochains and the geometric
//!   cobar construction,
//! * [`em`] — the Eilenberg–Moore spectral sequence of a fibre square,
//! * [`suites`] — seeded verification suites shared by the CLI and tests,
//! * [`io`] — JSON serialization of the main objects.

pub mod em;
pub mod f2;
pub mod homological;
pub mod io;
pub mod simplicial;
pub mod suites;
pub mod steenrod;
pub mod unstable;
