use super::dist::{point_triangle_distance, seg_triangle_distance, tri_tri_distance};
use super::shapes::{Segment, Triangle};
use super::vec3::Vec3;
use crate::error::{Error, Result};

/// Triangulated convex hull: outward-oriented faces indexing into `points`.
#[derive(Debug, Clone)]
pub struct Hull {
    pub points: Vec<Vec3>,
    pub faces: Vec<[usize; 3]>,
}

impl Hull {
    pub fn face_triangle(&self, f: [usize; 3]) -> Triangle {
        Triangle {
            p: self.points[f[0]],
            q: self.points[f[1]],
            r: self.points[f[2]],
        }
    }

    /// Signed distance of `p` to the face plane (positive = outside).
    fn face_plane_distance(&self, f: [usize; 3], p: Vec3) -> f64 {
        self.face_triangle(f).plane().signed_distance(p)
    }

    pub fn contains(&self, p: Vec3, tol: f64) -> bool {
        self.faces
            .iter()
            .all(|&f| self.face_plane_distance(f, p) <= tol)
    }

    /// Volume from the divergence theorem over the outward faces.
    pub fn volume(&self) -> f64 {
        self.faces
            .iter()
            .map(|&f| {
                let t = self.face_triangle(f);
                t.p.dot(t.q.cross(t.r)) / 6.0
            })
            .sum()
    }
}

/// Incremental convex hull of a small point set (intended for n in 4..=32).
/// Points must not all be coplanar.
pub fn convex_hull(points: &[Vec3]) -> Result<Hull> {
    let n = points.len();
    if n < 4 {
        return Err(Error::DegenerateHull(format!(
            "need at least 4 points, got {n}"
        )));
    }
    let scale = points
        .iter()
        .map(|p| p.x.abs().max(p.y.abs()).max(p.z.abs()))
        .fold(0.0f64, f64::max)
        .max(1.0);
    let eps = 1e-12 * scale;

    let seed = initial_tetrahedron(points, eps)
        .ok_or_else(|| Error::DegenerateHull("points are coplanar within tolerance".into()))?;
    let interior = (points[seed[0]] + points[seed[1]] + points[seed[2]] + points[seed[3]]) / 4.0;

    let mut hull = Hull {
        points: points.to_vec(),
        faces: Vec::new(),
    };
    for f in [
        [seed[0], seed[1], seed[2]],
        [seed[0], seed[1], seed[3]],
        [seed[0], seed[2], seed[3]],
        [seed[1], seed[2], seed[3]],
    ] {
        hull.faces.push(orient_outward(&hull.points, f, interior));
    }

    for idx in 0..n {
        if seed.contains(&idx) {
            continue;
        }
        add_point(&mut hull, idx, interior, eps);
    }
    Ok(hull)
}

fn orient_outward(points: &[Vec3], f: [usize; 3], interior: Vec3) -> [usize; 3] {
    let t = Triangle {
        p: points[f[0]],
        q: points[f[1]],
        r: points[f[2]],
    };
    if t.plane().signed_distance(interior) > 0.0 {
        [f[0], f[2], f[1]]
    } else {
        f
    }
}

fn initial_tetrahedron(points: &[Vec3], eps: f64) -> Option<[usize; 4]> {
    let n = points.len();
    let i = 0;
    let j = (1..n).find(|&j| points[j].dist(points[i]) > eps)?;
    let dir = points[j] - points[i];
    let k = (0..n).find(|&k| {
        k != i && k != j && dir.cross(points[k] - points[i]).norm() > eps * dir.norm()
    })?;
    let normal = dir.cross(points[k] - points[i]);
    let l = (0..n).find(|&l| {
        l != i && l != j && l != k && (points[l] - points[i]).dot(normal).abs() > eps * normal.norm()
    })?;
    Some([i, j, k, l])
}

fn add_point(hull: &mut Hull, idx: usize, interior: Vec3, eps: f64) {
    let p = hull.points[idx];
    let visible: Vec<usize> = (0..hull.faces.len())
        .filter(|&fi| hull.face_plane_distance(hull.faces[fi], p) > eps)
        .collect();
    if visible.is_empty() {
        return; // inside or on the hull
    }

    // Horizon: directed edges of visible faces whose reversal is not itself
    // an edge of a visible face.
    let mut visible_edges = std::collections::HashSet::new();
    for &fi in &visible {
        let [a, b, c] = hull.faces[fi];
        for e in [(a, b), (b, c), (c, a)] {
            visible_edges.insert(e);
        }
    }
    let mut horizon = Vec::new();
    for &(a, b) in &visible_edges {
        if !visible_edges.contains(&(b, a)) {
            horizon.push((a, b));
        }
    }

    let keep: Vec<[usize; 3]> = (0..hull.faces.len())
        .filter(|fi| !visible.contains(fi))
        .map(|fi| hull.faces[fi])
        .collect();
    hull.faces = keep;
    for (a, b) in horizon {
        hull.faces
            .push(orient_outward(&hull.points, [a, b, idx], interior));
    }
}

/// Minimum distance between two convex hulls; 0 iff they intersect.
pub fn hull_distance(a: &Hull, b: &Hull) -> f64 {
    // Containment: one hull entirely inside the other leaves no crossing
    // boundary pair, so check vertices directly.
    if a.points.iter().any(|&p| b.contains(p, 1e-12))
        || b.points.iter().any(|&p| a.contains(p, 1e-12))
    {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for &fa in &a.faces {
        let ta = a.face_triangle(fa);
        for &fb in &b.faces {
            let tb = b.face_triangle(fb);
            best = best.min(tri_tri_distance(&ta, &tb));
            if best == 0.0 {
                return 0.0;
            }
        }
    }
    best
}

/// Convex body that tolerates degenerate point sets (points, segments,
/// flat triangles) alongside full hulls. The escape objective measures
/// distances between bodies built from chain joints, and a 3-joint chain
/// has a flat hull.
#[derive(Debug, Clone)]
pub enum ConvexBody {
    Point(Vec3),
    Seg(Segment),
    Tri(Triangle),
    Poly(Hull),
}

impl ConvexBody {
    pub fn from_points(points: &[Vec3]) -> Result<ConvexBody> {
        if points.is_empty() {
            return Err(Error::DegenerateHull("empty point set".into()));
        }
        if let Ok(h) = convex_hull(points) {
            return Ok(ConvexBody::Poly(h));
        }
        // Degenerate: find the best-spread simplex available.
        let scale = points
            .iter()
            .map(|p| p.x.abs().max(p.y.abs()).max(p.z.abs()))
            .fold(0.0f64, f64::max)
            .max(1.0);
        let eps = 1e-12 * scale;
        let a = points[0];
        let b = points
            .iter()
            .copied()
            .max_by(|p, q| p.dist(a).total_cmp(&q.dist(a)))
            .unwrap();
        if b.dist(a) <= eps {
            return Ok(ConvexBody::Point(a));
        }
        let ab = b - a;
        let c = points
            .iter()
            .copied()
            .max_by(|p, q| {
                ab.cross(*p - a)
                    .norm()
                    .total_cmp(&ab.cross(*q - a).norm())
            })
            .unwrap();
        if ab.cross(c - a).norm() <= eps * ab.norm() {
            // Collinear: take the extreme pair along ab.
            let t = |p: Vec3| (p - a).dot(ab);
            let lo = points.iter().copied().min_by(|p, q| t(*p).total_cmp(&t(*q))).unwrap();
            let hi = points.iter().copied().max_by(|p, q| t(*p).total_cmp(&t(*q))).unwrap();
            return Ok(ConvexBody::Seg(Segment::new(lo, hi)?));
        }
        // Coplanar: fan-triangulate is overkill; the farthest triangle is a
        // usable proxy only if it spans the set, so instead keep the full
        // planar polygon via its triangle fan around the centroid.
        Ok(ConvexBody::planar_fan(points, a, b, c))
    }

    fn planar_fan(points: &[Vec3], a: Vec3, b: Vec3, c: Vec3) -> ConvexBody {
        // 2D convex hull (gift wrapping) in the plane spanned by the set.
        let normal = (b - a).cross(c - a).normalized(0.0).expect("non-collinear");
        let u = (b - a).normalized(0.0).unwrap();
        let v = normal.cross(u);
        let plane2d: Vec<(f64, f64, Vec3)> = points
            .iter()
            .map(|&p| ((p - a).dot(u), (p - a).dot(v), p))
            .collect();
        let mut idx: Vec<usize> = (0..plane2d.len()).collect();
        idx.sort_by(|&i, &j| {
            (plane2d[i].0, plane2d[i].1)
                .partial_cmp(&(plane2d[j].0, plane2d[j].1))
                .unwrap()
        });
        // Andrew's monotone chain.
        let cross2 = |o: usize, p: usize, q: usize| {
            (plane2d[p].0 - plane2d[o].0) * (plane2d[q].1 - plane2d[o].1)
                - (plane2d[p].1 - plane2d[o].1) * (plane2d[q].0 - plane2d[o].0)
        };
        let mut lower: Vec<usize> = Vec::new();
        for &i in &idx {
            while lower.len() >= 2 && cross2(lower[lower.len() - 2], lower[lower.len() - 1], i) <= 0.0 {
                lower.pop();
            }
            lower.push(i);
        }
        let mut upper: Vec<usize> = Vec::new();
        for &i in idx.iter().rev() {
            while upper.len() >= 2 && cross2(upper[upper.len() - 2], upper[upper.len() - 1], i) <= 0.0 {
                upper.pop();
            }
            upper.push(i);
        }
        lower.pop();
        upper.pop();
        let ring: Vec<usize> = lower.into_iter().chain(upper).collect();
        if ring.len() < 3 {
            return ConvexBody::Tri(Triangle { p: a, q: b, r: c });
        }
        let pts: Vec<Vec3> = ring.iter().map(|&i| plane2d[i].2).collect();
        let centroid = pts.iter().fold(Vec3::ZERO, |s, &p| s + p) / pts.len() as f64;
        let mut hull_points = pts.clone();
        hull_points.push(centroid);
        let m = pts.len();
        let faces: Vec<[usize; 3]> = (0..m)
            .map(|i| [i, (i + 1) % m, m])
            .chain((0..m).map(|i| [(i + 1) % m, i, m]))
            .collect();
        // A flat "hull": both-sided fan so distance queries see every facet.
        ConvexBody::Poly(Hull { points: hull_points, faces })
    }

    fn triangles(&self) -> Vec<Triangle> {
        match self {
            ConvexBody::Point(_) | ConvexBody::Seg(_) => Vec::new(),
            ConvexBody::Tri(t) => vec![*t],
            ConvexBody::Poly(h) => h.faces.iter().map(|&f| h.face_triangle(f)).collect(),
        }
    }

    fn sample_vertex(&self) -> Vec3 {
        match self {
            ConvexBody::Point(p) => *p,
            ConvexBody::Seg(s) => s.a,
            ConvexBody::Tri(t) => t.p,
            ConvexBody::Poly(h) => h.points[0],
        }
    }

    fn contains(&self, p: Vec3) -> bool {
        match self {
            ConvexBody::Point(q) => q.dist(p) <= 1e-12,
            ConvexBody::Seg(s) => seg_triangle_distance_point(s, p) <= 1e-12,
            ConvexBody::Tri(t) => point_triangle_distance(p, t) <= 1e-12,
            ConvexBody::Poly(h) => h.contains(p, 1e-12),
        }
    }

    /// Minimum distance between two convex bodies; 0 iff they touch.
    pub fn distance(&self, other: &ConvexBody) -> f64 {
        use ConvexBody::*;
        match (self, other) {
            (Point(p), Point(q)) => p.dist(*q),
            (Point(p), Seg(s)) | (Seg(s), Point(p)) => point_seg_distance(*p, s),
            (Point(p), Tri(t)) | (Tri(t), Point(p)) => point_triangle_distance(*p, t),
            (Seg(s1), Seg(s2)) => super::dist::seg_seg_distance(s1, s2),
            (Seg(s), Tri(t)) | (Tri(t), Seg(s)) => seg_triangle_distance(s, t),
            (Tri(t1), Tri(t2)) => tri_tri_distance(t1, t2),
            _ => {
                // At least one side is a Poly (or point/seg against poly).
                if self.contains(other.sample_vertex()) || other.contains(self.sample_vertex()) {
                    return 0.0;
                }
                let ta = self.triangles();
                let tb = other.triangles();
                let mut best = f64::INFINITY;
                match (ta.is_empty(), tb.is_empty()) {
                    (false, false) => {
                        for a in &ta {
                            for b in &tb {
                                best = best.min(tri_tri_distance(a, b));
                                if best == 0.0 {
                                    return 0.0;
                                }
                            }
                        }
                    }
                    (true, false) => {
                        for b in &tb {
                            best = best.min(self.feature_to_triangle(b));
                        }
                    }
                    (false, true) => {
                        for a in &ta {
                            best = best.min(other.feature_to_triangle(a));
                        }
                    }
                    (true, true) => unreachable!("poly sides always have triangles"),
                }
                best
            }
        }
    }

    fn feature_to_triangle(&self, t: &Triangle) -> f64 {
        match self {
            ConvexBody::Point(p) => point_triangle_distance(*p, t),
            ConvexBody::Seg(s) => seg_triangle_distance(s, t),
            _ => unreachable!(),
        }
    }
}

fn point_seg_distance(p: Vec3, s: &Segment) -> f64 {
    let d = s.direction();
    let t = ((p - s.a).dot(d) / d.norm_squared()).clamp(0.0, 1.0);
    s.point_at(t).dist(p)
}

fn seg_triangle_distance_point(s: &Segment, p: Vec3) -> f64 {
    point_seg_distance(p, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube_corners(origin: Vec3, side: f64) -> Vec<Vec3> {
        let mut pts = Vec::new();
        for dx in [0.0, side] {
            for dy in [0.0, side] {
                for dz in [0.0, side] {
                    pts.push(origin + Vec3::new(dx, dy, dz));
                }
            }
        }
        pts
    }

    #[test]
    fn tetrahedron_has_four_faces() {
        let pts = vec![
            Vec3::new(0., 0., 0.),
            Vec3::new(1., 0., 0.),
            Vec3::new(0., 1., 0.),
            Vec3::new(0., 0., 1.),
        ];
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.faces.len(), 4);
        for &p in &pts {
            assert!(h.contains(p, 1e-9));
        }
    }

    #[test]
    fn interior_point_is_absorbed() {
        let mut pts = vec![
            Vec3::new(0., 0., 0.),
            Vec3::new(1., 0., 0.),
            Vec3::new(0., 1., 0.),
            Vec3::new(0., 0., 1.),
        ];
        let centroid = pts.iter().fold(Vec3::ZERO, |s, &p| s + p) / 4.0;
        pts.push(centroid);
        let h = convex_hull(&pts).unwrap();
        assert_eq!(h.faces.len(), 4);
        assert!(h.contains(centroid, 1e-9));
    }

    #[test]
    fn cube_hull_twelve_faces_volume_one() {
        let h = convex_hull(&cube_corners(Vec3::ZERO, 1.0)).unwrap();
        assert_eq!(h.faces.len(), 12);
        assert!((h.volume() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn coplanar_points_rejected() {
        let pts = vec![
            Vec3::new(0., 0., 0.),
            Vec3::new(1., 0., 0.),
            Vec3::new(0., 1., 0.),
            Vec3::new(1., 1., 0.),
        ];
        assert!(matches!(convex_hull(&pts), Err(Error::DegenerateHull(_))));
    }

    #[test]
    fn offset_cubes_distance() {
        let a = convex_hull(&cube_corners(Vec3::ZERO, 1.0)).unwrap();
        let b = convex_hull(&cube_corners(Vec3::new(3., 0., 0.), 1.0)).unwrap();
        assert!((hull_distance(&a, &b) - 2.0).abs() < 1e-9);
    }

    #[test]
    fn overlapping_cubes_touch() {
        let a = convex_hull(&cube_corners(Vec3::ZERO, 1.0)).unwrap();
        let b = convex_hull(&cube_corners(Vec3::new(0.5, 0.5, 0.5), 1.0)).unwrap();
        assert_eq!(hull_distance(&a, &b), 0.0);
    }

    #[test]
    fn nested_hulls_touch() {
        let a = convex_hull(&cube_corners(Vec3::ZERO, 3.0)).unwrap();
        let b = convex_hull(&cube_corners(Vec3::new(1., 1., 1.), 0.5)).unwrap();
        assert_eq!(hull_distance(&a, &b), 0.0);
    }

    #[test]
    fn flat_body_distance() {
        let tri = ConvexBody::from_points(&[
            Vec3::new(0., 0., 1.),
            Vec3::new(1., 0., 1.),
            Vec3::new(0., 1., 1.),
        ])
        .unwrap();
        let cube = ConvexBody::from_points(&cube_corners(Vec3::new(0., 0., 3.), 1.0)).unwrap();
        assert!((tri.distance(&cube) - 2.0).abs() < 1e-9);
    }
}
