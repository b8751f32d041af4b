//! 3D geometric kernel: distances, piercing predicates, small convex hulls.
//!
//! All predicates use the global absolute degeneracy tolerance [`TOL`] and
//! report degenerate contacts as errors rather than guessing a side.

mod dist;
mod hull;
mod pierce;
mod shapes;
mod vec3;

pub use dist::{
    point_triangle_closest, point_triangle_distance, seg_seg_closest, seg_seg_distance,
    seg_triangle_distance, tri_tri_distance,
};
pub use hull::{convex_hull, hull_distance, ConvexBody, Hull};
pub use pierce::{angle_between_lines, point_plane_side, seg_triangle_pierce, Pierce};
pub use shapes::{Plane, Segment, Triangle};
pub use vec3::Vec3;

/// Absolute degeneracy tolerance on lengths and signed distances.
/// Constructions control their own scales, so an absolute band is adequate.
pub const TOL: f64 = 1e-9;
