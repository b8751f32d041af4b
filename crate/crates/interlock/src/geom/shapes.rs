use super::vec3::Vec3;
use super::TOL;
use crate::error::{Error, Result};

/// Closed line segment between two distinct points.
#[derive(Debug, Clone, Copy)]
pub struct Segment {
    pub a: Vec3,
    pub b: Vec3,
}

impl Segment {
    pub fn new(a: Vec3, b: Vec3) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::ParameterDomain("segment endpoint not finite".into()));
        }
        if a.dist(b) <= TOL {
            return Err(Error::ParameterDomain("zero-length segment".into()));
        }
        Ok(Segment { a, b })
    }

    #[inline]
    pub fn direction(&self) -> Vec3 {
        self.b - self.a
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    #[inline]
    pub fn point_at(&self, t: f64) -> Vec3 {
        self.a + self.direction() * t
    }
}

/// Triangle with non-collinear vertices. Orientation is the order `p, q, r`;
/// the normal follows the right-hand rule on that order.
#[derive(Debug, Clone, Copy)]
pub struct Triangle {
    pub p: Vec3,
    pub q: Vec3,
    pub r: Vec3,
}

impl Triangle {
    pub fn new(p: Vec3, q: Vec3, r: Vec3) -> Result<Self> {
        let t = Triangle { p, q, r };
        let scale = (q - p).norm().max((r - p).norm());
        if t.area_vector().norm() <= TOL * scale.max(1.0) {
            return Err(Error::DegenerateContact("collinear triangle vertices".into()));
        }
        Ok(t)
    }

    /// Cross product (q−p)×(r−p); twice the area, along the normal.
    #[inline]
    pub fn area_vector(&self) -> Vec3 {
        (self.q - self.p).cross(self.r - self.p)
    }

    pub fn normal(&self) -> Vec3 {
        self.area_vector()
            .normalized(0.0)
            .expect("non-degenerate triangle has a normal")
    }

    pub fn plane(&self) -> Plane {
        Plane::from_point_normal(self.p, self.normal())
    }

    pub fn centroid(&self) -> Vec3 {
        (self.p + self.q + self.r) / 3.0
    }

    pub fn vertices(&self) -> [Vec3; 3] {
        [self.p, self.q, self.r]
    }

    pub fn edges(&self) -> [Segment; 3] {
        [
            Segment { a: self.p, b: self.q },
            Segment { a: self.q, b: self.r },
            Segment { a: self.r, b: self.p },
        ]
    }
}

/// Oriented plane `{ x : n·x = offset }` with unit normal `n`.
#[derive(Debug, Clone, Copy)]
pub struct Plane {
    pub normal: Vec3,
    pub offset: f64,
}

impl Plane {
    pub fn new(normal: Vec3, offset: f64) -> Result<Self> {
        if (normal.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::ParameterDomain("plane normal must be unit length".into()));
        }
        Ok(Plane { normal, offset })
    }

    pub fn from_point_normal(point: Vec3, normal: Vec3) -> Plane {
        Plane { normal, offset: normal.dot(point) }
    }

    #[inline]
    pub fn signed_distance(&self, p: Vec3) -> f64 {
        self.normal.dot(p) - self.offset
    }
}
