//! Finite digital images in `Z^n` with `c_u` adjacencies, multivalued
//! functions between them, and deciders for their continuity properties.
//!
//! The crate is organized bottom-up:
//!
//! * [`grid`]: points, images, adjacency, connectivity, distances, boundaries.
//! * [`subdivision`]: `S(X,r)`, the projection `E_r`, induced functions.
//! * [`multifun`]: the [`MultiFn`] type, weak/strong/connectivity-preserving
//!   deciders, the bounded continuity-witness search, composition.
//! * [`constructors`]: retractions, extensions, surjections and wedges.
//! * [`oracle`]: definition-level checks and exhaustive censuses over tiny
//!   images, used to cross-examine everything above.
//! * [`io`]: the canonical JSON document formats used by the CLI.

mod bits;
pub mod constructors;
pub mod error;
pub mod grid;
pub mod io;
pub mod multifun;
pub mod oracle;
pub mod subdivision;

pub use error::{Error, Result};
pub use grid::{
    is_adjacent, is_sv_continuous, AdjacencySpec, DigitalImage, Point, PointMap, PointSet,
};
pub use multifun::{
    analyze, compose, find_witness, verify_witness, Continuity, ContinuityWitness, MultiFn,
    PropertyReport, Refutation, WitnessSearch,
};
pub use subdivision::{
    check_sub_adj_preserving, induced_from, refine_witness, subdivide, SubdividedImage,
};

/// Default upper bound on the subdivision level tried by witness searches.
pub const DEFAULT_R_MAX: usize = 4;
