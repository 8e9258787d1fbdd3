//! Geometry kernel: points, curves, strips and arc polygons.

pub mod admissible;
pub mod arcpolygon;
pub mod curve;
pub mod point;
pub mod strip;

pub use admissible::{check_admissible, AdmissibilityReport};
pub use arcpolygon::{ArcPolygon, Edge};
pub use curve::{Curve, CurveKind, CurveSpec, Piece};
pub use point::Point;
pub use strip::{Strip, StripKind};
