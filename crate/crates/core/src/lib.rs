//! Spatial representation and routing of deformable one-dimensional objects
//! (cables, wires, ropes) over a convex-decomposed planar work region.
//!
//! The work region is split into convex regions; together with one vertex
//! for everything outside the region and one vertex per tunnel entrance they
//! form a [`SpatialGraph`]. A cable lying on the board is encoded as the
//! ordered [`Configuration`] of vertices it passes through, and the
//! [`router`] compares the current configuration against a goal with a
//! dynamic-programming sequence alignment to emit the next pick-and-place
//! move. The [`world`] module realizes those moves on a geometric polyline.
//!
//! The crate is `no_std` (it needs `alloc`); enable the `std` feature to get
//! `std::error::Error` integration through the standard library.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod configuration;
pub mod geometry;
pub mod graph;
mod math;
pub mod router;
pub mod world;

pub use configuration::{Configuration, DooPolyline};
pub use geometry::{ConvexRegion, Layout, Point2, Polygon, TunnelSpec, ValidatedLayout};
pub use graph::{SpatialGraph, VertexId, VertexKind};
pub use router::{PlanOutcome, RoutingAction};
pub use world::{Board, World};
