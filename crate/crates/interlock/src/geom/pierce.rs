use super::dist::point_triangle_distance;
use super::shapes::{Plane, Segment, Triangle};
use super::vec3::Vec3;
use super::TOL;
use crate::error::{Error, Result};

/// Outcome of a strict segment/triangle piercing query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pierce {
    pub pierces: bool,
    /// +1 when the segment crosses along the triangle normal (the normal is
    /// the right-hand rule on the vertex order), -1 against it. Only
    /// meaningful when `pierces` is true.
    pub sign: i8,
    pub point: Option<Vec3>,
}

impl Pierce {
    fn miss() -> Pierce {
        Pierce { pierces: false, sign: 0, point: None }
    }
}

/// Strict piercing test: the open segment must cross the open triangle
/// interior, clear of the boundary. Contacts within tolerance of the plane
/// or the boundary are degeneracies, not answers.
pub fn seg_triangle_pierce(s: &Segment, t: &Triangle) -> Result<Pierce> {
    let plane = t.plane();
    let da = plane.signed_distance(s.a);
    let db = plane.signed_distance(s.b);
    if da.abs() <= TOL || db.abs() <= TOL {
        return Err(Error::DegenerateContact(
            "segment endpoint on the triangle plane".into(),
        ));
    }
    if da * db > 0.0 {
        return Ok(Pierce::miss());
    }
    let u = da / (da - db);
    let point = s.point_at(u);

    let inside = point_triangle_distance(point, t) <= TOL;
    let dist_to_boundary = t
        .edges()
        .iter()
        .map(|e| point_segment_distance(point, e))
        .fold(f64::INFINITY, f64::min);
    if dist_to_boundary <= TOL {
        return Err(Error::DegenerateContact(
            "crossing within tolerance of the triangle boundary".into(),
        ));
    }
    if !inside {
        return Ok(Pierce::miss());
    }
    let sign = if db > 0.0 { 1 } else { -1 };
    Ok(Pierce { pierces: true, sign, point: Some(point) })
}

fn point_segment_distance(p: Vec3, s: &Segment) -> f64 {
    let d = s.direction();
    let t = ((p - s.a).dot(d) / d.norm_squared()).clamp(0.0, 1.0);
    s.point_at(t).dist(p)
}

/// Side of a plane: +1 / -1 / 0, with 0 only inside the tolerance band.
pub fn point_plane_side(p: Vec3, pl: &Plane) -> i8 {
    let d = pl.signed_distance(p);
    if d > TOL {
        1
    } else if d < -TOL {
        -1
    } else {
        0
    }
}

/// Acute angle between two lines through the origin, in [0, pi/2].
pub fn angle_between_lines(u: Vec3, v: Vec3) -> f64 {
    let denom = u.norm() * v.norm();
    assert!(denom > 0.0, "angle_between_lines requires nonzero vectors");
    (u.dot(v).abs() / denom).clamp(0.0, 1.0).acos()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_triangle() -> Triangle {
        Triangle::new(
            Vec3::new(0., 0., 0.),
            Vec3::new(1., 0., 0.),
            Vec3::new(0., 1., 0.),
        )
        .unwrap()
    }

    #[test]
    fn centroid_crossing_signs() {
        let t = unit_triangle();
        let c = t.centroid();
        let n = t.normal();
        let s = Segment::new(c - n, c + n).unwrap();
        let hit = seg_triangle_pierce(&s, &t).unwrap();
        assert!(hit.pierces);
        assert_eq!(hit.sign, 1);
        assert!(hit.point.unwrap().dist(c) < 1e-12);

        let back = Segment::new(c + n, c - n).unwrap();
        let hit = seg_triangle_pierce(&back, &t).unwrap();
        assert!(hit.pierces);
        assert_eq!(hit.sign, -1);
    }

    #[test]
    fn orientation_swap_flips_sign() {
        let t = unit_triangle();
        let swapped = Triangle::new(t.p, t.r, t.q).unwrap();
        let c = t.centroid();
        let n = t.normal();
        let s = Segment::new(c - n, c + n).unwrap();
        let a = seg_triangle_pierce(&s, &t).unwrap();
        let b = seg_triangle_pierce(&s, &swapped).unwrap();
        assert!(a.pierces && b.pierces);
        assert_eq!(a.sign, -b.sign);
    }

    #[test]
    fn parallel_offset_misses() {
        let t = unit_triangle();
        let s = Segment::new(Vec3::new(5., 5., -1.), Vec3::new(5., 5., 1.)).unwrap();
        let hit = seg_triangle_pierce(&s, &t).unwrap();
        assert!(!hit.pierces);
    }

    #[test]
    fn endpoint_on_plane_is_degenerate() {
        let t = unit_triangle();
        let s = Segment::new(Vec3::new(0.2, 0.2, 0.), Vec3::new(0.2, 0.2, 1.)).unwrap();
        assert!(matches!(
            seg_triangle_pierce(&s, &t),
            Err(Error::DegenerateContact(_))
        ));
    }

    #[test]
    fn boundary_hit_is_degenerate() {
        let t = unit_triangle();
        // Crosses exactly through the edge y=0.
        let s = Segment::new(Vec3::new(0.5, 0.0, -1.), Vec3::new(0.5, 0.0, 1.)).unwrap();
        assert!(matches!(
            seg_triangle_pierce(&s, &t),
            Err(Error::DegenerateContact(_))
        ));
    }

    #[test]
    fn plane_sides() {
        let pl = Plane::from_point_normal(Vec3::ZERO, Vec3::Z);
        assert_eq!(point_plane_side(Vec3::new(0., 0., 1.), &pl), 1);
        assert_eq!(point_plane_side(Vec3::new(0., 0., -1.), &pl), -1);
        assert_eq!(point_plane_side(Vec3::ZERO, &pl), 0);
    }

    #[test]
    fn line_angles() {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
        assert!(angle_between_lines(Vec3::X, Vec3::X) < 1e-12);
        assert!((angle_between_lines(Vec3::X, Vec3::Y) - FRAC_PI_2).abs() < 1e-12);
        assert!((angle_between_lines(Vec3::X, Vec3::new(1., 1., 0.)) - FRAC_PI_4).abs() < 1e-12);
        // Lines are undirected.
        assert!(angle_between_lines(Vec3::X, -Vec3::X) < 1e-12);
    }
}
