//! Log-Blaschke combinations of origin-symmetric convex polytopes.
//!
//! The crate is `no_std` (it needs `alloc`) and purely computational:
//!
//! - [`convex`]: symmetric polytopes in halfspace form, vertex enumeration,
//!   surface area and cone volume measures, mixed volumes, projections.
//! - [`minkowski`]: the discrete even Minkowski problem solver.
//! - [`combinations`]: the log-Blaschke path `K̃_t` and the geometric-mean
//!   Wulff body `K_t`, plus the volume derivative along `K̃_t`.
//! - [`inequalities`]: signed deficits for (LBM), (RLBM), (LM) and friends.
//! - [`zonoid`]: zonotopes, mixed surface area measures with a segment,
//!   and the projection / generating-measure identities.
//! - [`relations`]: the equivalence-class decomposition of direction sets
//!   and the dilated-direct-summand detector.
//!
//! IO, file formats, random instance generation and the command line live in
//! the companion `logbm` crate.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod combinations;
pub mod convex;
mod error;
pub mod inequalities;
pub mod linalg;
mod math;
pub mod minkowski;
pub mod relations;
pub mod zonoid;

pub use combinations::{
    geometric_mean_body, log_blaschke, GeometricMeanBody, LogBlaschkePath, PathOptions,
};
pub use convex::{
    cone_volume_measure, hausdorff_distance, mixed_volume_v1, project, support_value,
    surface_area_measure, volume, wulff_shape, ConeVolumeMeasure, Direction,
    EvenDiscreteMeasure, Projection, SymmetricPolytope,
};
pub use error::{Error, Result};
pub use inequalities::{DeficitReport, Verdict};
pub use minkowski::{solve_even_minkowski, MinkowskiSolution, SolverConfig, SolverPath};
pub use relations::{decompose, detect_dilated_direct_summands, verify_direct_sum, Decomposition};
pub use zonoid::Zonotope;
