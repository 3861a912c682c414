//! Geometric core for consistency-constrained oriented object detection.
//!
//! The crate is `no_std` (with `alloc`) and pure: every operation is a function
//! of immutable value types and is safe to call from any thread.
//!
//! - [`geometry`]: horizontal and oriented boxes, convex polygon clipping,
//!   areas, axis-aligned and rotated IoU, and the oriented-to-enclosing
//!   rectangle transform ([`geometry::o2mer`]).
//! - [`fit`]: minimum-area rectangle of a quadrilateral (rotating calipers).
//! - [`anchors`]: regular anchor grids.
//! - [`consistency`]: the consistency loss between a horizontal proposal and
//!   the enclosing rectangle of an oriented proposal, with its analytic gradient.
//! - [`assignment`]: oriented-center-prior label assignment and the classic
//!   IoU-threshold assigner.
//! - [`bench`]: Monte Carlo IoU oracle, the synthetic regression experiment and
//!   proposal-quality histograms.
#![cfg_attr(not(test), no_std)]
// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod anchors;
pub mod assignment;
pub mod bench;
pub mod consistency;
mod error;
pub mod fit;
pub mod geometry;
mod math;

pub use error::{Error, Result};
pub use geometry::{ConvexPolygon, HorizontalBox, OrientedBox, Point};
