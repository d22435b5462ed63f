//! Generalized triangulations of compact 3-manifolds: Pachner moves,
//! isomorphism signatures, homology and normal surfaces.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod haken;
pub mod homology;
pub mod isosig;
pub mod moves;
pub mod normal;
pub mod perm;
pub mod search;
pub mod skeleton;
pub mod surface2;
pub mod tower;
pub mod triangulation;
mod linalg;
mod stellar;
mod util;

pub use perm::{Perm4, ALL_PERM4};
pub use skeleton::{
    boundary_all_tori, boundary_components, skeleton, validate, BoundaryComponent, LinkType, Manifold, Skeleton,
    SkeletonSummary, ValidationReport, Verdict,
};
pub use triangulation::{Gluing, Triangulation, TriangulationError};
pub use moves::{apply_move, apply_move_with_inverse, apply_moves, enumerate_moves, random_walk, MoveKind, MoveSite};
pub use isosig::{are_isomorphic, canonical_signature, Isomorphism};
pub use homology::{
    boundary_homology, exactness_check, homology_groups, peripheral_map, relative_homology, smith_normal_form, HomologyGroup,
    IntegerMatrix,
};
pub use search::{connect, explore, Census, SearchResult, SearchStatus};
pub use tower::{render_bound, theorem_bound, tower_cmp, TowerExpression, TowerTerm};
pub use normal::{
    build_surface, enumerate_fundamental_solutions, enumerate_vertex_solutions, is_admissible, is_vertex_surface,
    matching_system, MatchingSystem, NormalCoordinates, NormalError, NormalSurface,
};
pub use haken::{
    check_bounds_of, check_fundamental_bounds, compatible, decompose, haken_sum, verify_additivity, AdditivityReport,
    BoundsReport, Decomposition, HakenError,
};
