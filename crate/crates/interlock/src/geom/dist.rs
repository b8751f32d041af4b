use super::shapes::{Segment, Triangle};
use super::vec3::Vec3;

fn clamp01(t: f64) -> f64 {
    t.clamp(0.0, 1.0)
}

/// Closest pair of parameters (s, t) for two segments (Ericson, RTCD §5.1.9).
pub fn seg_seg_closest(s1: &Segment, s2: &Segment) -> (f64, f64) {
    let d1 = s1.direction();
    let d2 = s2.direction();
    let r = s1.a - s2.a;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    let f = d2.dot(r);

    let tiny = 1e-30;
    if a <= tiny && e <= tiny {
        return (0.0, 0.0);
    }
    if a <= tiny {
        return (0.0, clamp01(f / e));
    }
    let c = d1.dot(r);
    if e <= tiny {
        return (clamp01(-c / a), 0.0);
    }

    let b = d1.dot(d2);
    let denom = a * e - b * b;
    let mut s = if denom.abs() > tiny {
        clamp01((b * f - c * e) / denom)
    } else {
        0.0
    };
    let mut t = (b * s + f) / e;
    if t < 0.0 {
        t = 0.0;
        s = clamp01(-c / a);
    } else if t > 1.0 {
        t = 1.0;
        s = clamp01((b - c) / a);
    }
    (s, t)
}

/// Euclidean minimum distance between two closed segments.
pub fn seg_seg_distance(s1: &Segment, s2: &Segment) -> f64 {
    let (s, t) = seg_seg_closest(s1, s2);
    s1.point_at(s).dist(s2.point_at(t))
}

/// Closest point on a triangle to `p` (Ericson, RTCD §5.1.5).
pub fn point_triangle_closest(p: Vec3, t: &Triangle) -> Vec3 {
    let (a, b, c) = (t.p, t.q, t.r);
    let ab = b - a;
    let ac = c - a;
    let ap = p - a;

    let d1 = ab.dot(ap);
    let d2 = ac.dot(ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return a;
    }

    let bp = p - b;
    let d3 = ab.dot(bp);
    let d4 = ac.dot(bp);
    if d3 >= 0.0 && d4 <= d3 {
        return b;
    }

    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let v = d1 / (d1 - d3);
        return a + ab * v;
    }

    let cp = p - c;
    let d5 = ab.dot(cp);
    let d6 = ac.dot(cp);
    if d6 >= 0.0 && d5 <= d6 {
        return c;
    }

    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let w = d2 / (d2 - d6);
        return a + ac * w;
    }

    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return b + (c - b) * w;
    }

    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    a + ab * v + ac * w
}

pub fn point_triangle_distance(p: Vec3, t: &Triangle) -> f64 {
    point_triangle_closest(p, t).dist(p)
}

/// True if the segment crosses the triangle (boundary included). Used for
/// distance queries; the strict piercing predicate lives in `pierce`.
fn seg_crosses_triangle(s: &Segment, t: &Triangle) -> bool {
    let plane = t.plane();
    let da = plane.signed_distance(s.a);
    let db = plane.signed_distance(s.b);
    if da * db > 0.0 {
        return false;
    }
    let denom = da - db;
    if denom.abs() < 1e-30 {
        // Coplanar segment: overlap is caught by the edge/vertex distance
        // terms in seg_triangle_distance.
        return false;
    }
    let u = da / denom;
    let point = s.point_at(u);
    point_triangle_distance(point, t) <= 1e-12
}

/// Minimum distance between a segment and a (solid) triangle.
pub fn seg_triangle_distance(s: &Segment, t: &Triangle) -> f64 {
    if seg_crosses_triangle(s, t) {
        return 0.0;
    }
    let mut best = point_triangle_distance(s.a, t).min(point_triangle_distance(s.b, t));
    for e in t.edges() {
        best = best.min(seg_seg_distance(s, &e));
    }
    best
}

/// Minimum distance between two (solid) triangles.
pub fn tri_tri_distance(t1: &Triangle, t2: &Triangle) -> f64 {
    let mut best = f64::INFINITY;
    for e in t1.edges() {
        best = best.min(seg_triangle_distance(&e, t2));
    }
    for e in t2.edges() {
        best = best.min(seg_triangle_distance(&e, t1));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(ax: f64, ay: f64, az: f64, bx: f64, by: f64, bz: f64) -> Segment {
        Segment::new(Vec3::new(ax, ay, az), Vec3::new(bx, by, bz)).unwrap()
    }

    #[test]
    fn collinear_gap() {
        let d = seg_seg_distance(&seg(0., 0., 0., 1., 0., 0.), &seg(2., 0., 0., 3., 0., 0.));
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn crossing_segments_touch() {
        let d = seg_seg_distance(&seg(0., 0., 0., 1., 0., 0.), &seg(0.5, -1., 0., 0.5, 1., 0.));
        assert!(d < 1e-12);
    }

    #[test]
    fn offset_perpendicular_pair() {
        let d = seg_seg_distance(&seg(0., 0., 0., 1., 0., 0.), &seg(0.5, -0.5, 1., 0.5, 0.5, 1.));
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parallel_overlapping() {
        let d = seg_seg_distance(&seg(0., 0., 0., 2., 0., 0.), &seg(1., 1., 0., 3., 1., 0.));
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn point_triangle_interior_projection() {
        let t = Triangle::new(
            Vec3::new(0., 0., 0.),
            Vec3::new(2., 0., 0.),
            Vec3::new(0., 2., 0.),
        )
        .unwrap();
        assert!((point_triangle_distance(Vec3::new(0.5, 0.5, 3.0), &t) - 3.0).abs() < 1e-12);
        // Outside past a vertex.
        assert!((point_triangle_distance(Vec3::new(-1.0, -1.0, 0.0), &t) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn seg_through_triangle_is_zero() {
        let t = Triangle::new(
            Vec3::new(-1., -1., 0.),
            Vec3::new(1., -1., 0.),
            Vec3::new(0., 1., 0.),
        )
        .unwrap();
        let s = seg(0., -0.5, -1., 0., -0.5, 1.);
        assert_eq!(seg_triangle_distance(&s, &t), 0.0);
    }
}
