//! Clutters and their blockers, minors, cleanness, and the parameters of
//! clean tangled clutters: the rainbow covering number `mu`, its relatives
//! `mu1`, `mu2`, `mu3`, and the connectivity `lambda` of the setcore.
//!
//! ```
//! use clutterlab::harness::{make_family, Family};
//! use clutterlab::params::param_report;
//! use clutterlab::ExtNat;
//!
//! let f6 = make_family(&Family::f6()).unwrap();
//! let report = param_report(&f6).unwrap();
//! assert_eq!(report.mu, ExtNat::Finite(3));
//! assert_eq!(report.lambda, ExtNat::Finite(3));
//! ```

pub mod clutter;
pub mod harness;
pub mod obstructions;
pub mod params;
pub mod structure;
pub mod text;

pub use clutter::{Clutter, ClutterError, ExtNat, MemberSet, Minor, MinorSpec};
pub use structure::{MinCoverGraph, SetSystem, Side};
