//! Cheeger constants and Cheeger sets of planar domains.

// `!(x > 0.0)` is the intended guard: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod certificates;
pub mod convex;
pub mod error;
pub mod geometry;
pub mod opening;
pub mod optimize;
pub mod quadrature;
pub mod render;
pub mod result;
pub mod sectors;
pub mod strips;

pub use certificates::{certify_lower_bound, eigenvalue_bounds, CertReport, GridField};
pub use convex::{inner_parallel, rectangle_h, solve_convex, ConvexPolygon};
pub use error::{Error, Result};
pub use geometry::{ArcPolygon, Curve, CurveKind, CurveSpec, Edge, Point, Strip, StripKind};
pub use opening::{opening_exact, sweep, OpenedSet, OpeningSweepResult, SweepConfig};
pub use result::{CheegerResult, Method};
pub use sectors::{sector_cheeger, sector_domain, SectorSpec};
pub use strips::{profile_quotient, strip_area_perimeter, strip_cheeger, stripize, truncation_ratio, Profile};
