//! Caustic-singularity maps of the A, D, E family and the two umbilic lensing
//! maps, together with the machinery to check their magnification relations.
//!
//! The pipeline is:
//!
//! 1. [`catalog`] builds a [`PlaneMap`] for a [`FamilyId`] and parameter values.
//! 2. [`solver`] finds every complex pre-image of a target point by resultant
//!    elimination and computes signed magnifications `1 / det Jac`.
//! 3. [`wproj`] lifts the shifted system into a weighted projective plane
//!    `WP(a0, a1, 1)` and looks for common roots on the line at infinity.
//! 4. [`residue`] treats each magnification as a local residue and checks that
//!    the affine residues sum to zero whenever nothing lives at infinity.
//! 5. [`caustic`] traces critical curves and maps real image counts over a
//!    grid of targets.

pub mod catalog;
pub mod caustic;
mod complex_serde;
pub mod error;
pub mod poly;
pub mod residue;
pub mod sampling;
pub mod solver;
pub mod wproj;

pub use catalog::{
    assigned_weights, build_family, generating_function, FamilyId, Kind, ParamVector, PlaneMap,
    Sign, Weights,
};
pub use error::{Error, Result};
pub use poly::{BiPoly, RootList, UniPoly, Var};
pub use residue::{verify_grt, GrtVerdict, ResidueReport};
pub use solver::{preimages, Preimage, PreimageSet, SumMode, TargetPoint};
pub use wproj::{homogenize, roots_at_infinity, InfinityPoint, TriPoly, WeightedHomogPair};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
