//! Small 2D/3D geometry helpers shared across the pipeline.

use serde::{Deserialize, Serialize};

/// 2D point / vector in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 2D cross product.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }

    pub fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }

    pub fn scale(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        Vec2::new(self.x / n, self.y / n)
    }

    /// Perpendicular rotated -90 degrees (clockwise): (x, y) -> (y, -x).
    pub fn perp_cw(self) -> Vec2 {
        Vec2::new(self.y, -self.x)
    }

    /// Perpendicular rotated +90 degrees (counter-clockwise): (x, y) -> (-y, x).
    pub fn perp_ccw(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }
}

/// 3D point / vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }

    pub fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }

    pub fn scale(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        let n = self.norm();
        Vec3::new(self.x / n, self.y / n, self.z / n)
    }
}

/// Twice the signed area of a closed ring (positive for counter-clockwise).
pub fn ring_signed_area2(ring: &[Vec2]) -> f64 {
    let n = ring.len();
    let mut acc = 0.0;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        acc += a.cross(b);
    }
    acc
}

/// Polygon area (absolute).
pub fn ring_area(ring: &[Vec2]) -> f64 {
    0.5 * ring_signed_area2(ring).abs()
}

/// Polygon perimeter.
pub fn ring_perimeter(ring: &[Vec2]) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| ring[(i + 1) % n].sub(ring[i]).norm())
        .sum()
}

/// Even-odd point-in-polygon test via ray crossing (half-open in y).
///
/// Points exactly on a boundary fall on the side given by the half-open
/// crossing rule; callers that need explicit tie handling should not rely
/// on boundary behavior.
pub fn point_in_ring(p: Vec2, ring: &[Vec2]) -> bool {
    let n = ring.len();
    let mut inside = false;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        if (a.y <= p.y) != (b.y <= p.y) {
            let t = (p.y - a.y) / (b.y - a.y);
            let xi = a.x + t * (b.x - a.x);
            if p.x < xi {
                inside = !inside;
            }
        }
    }
    inside
}

/// True when segments (a1,a2) and (b1,b2) properly intersect or overlap,
/// excluding shared endpoints.
pub fn segments_intersect(a1: Vec2, a2: Vec2, b1: Vec2, b2: Vec2) -> bool {
    fn orient(a: Vec2, b: Vec2, c: Vec2) -> f64 {
        b.sub(a).cross(c.sub(a))
    }
    fn on_segment(a: Vec2, b: Vec2, p: Vec2) -> bool {
        p.x >= a.x.min(b.x) - 1e-12
            && p.x <= a.x.max(b.x) + 1e-12
            && p.y >= a.y.min(b.y) - 1e-12
            && p.y <= a.y.max(b.y) + 1e-12
    }
    let eps = 1e-12;
    let d1 = orient(b1, b2, a1);
    let d2 = orient(b1, b2, a2);
    let d3 = orient(a1, a2, b1);
    let d4 = orient(a1, a2, b2);

    let shares_endpoint = |p: Vec2, q: Vec2| (p.x - q.x).abs() < 1e-12 && (p.y - q.y).abs() < 1e-12;
    let endpoint_shared = shares_endpoint(a1, b1)
        || shares_endpoint(a1, b2)
        || shares_endpoint(a2, b1)
        || shares_endpoint(a2, b2);

    if ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps))
        && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))
    {
        return true;
    }
    if endpoint_shared {
        return false;
    }
    // Collinear overlap or endpoint touching interior.
    (d1.abs() <= eps && on_segment(b1, b2, a1))
        || (d2.abs() <= eps && on_segment(b1, b2, a2))
        || (d3.abs() <= eps && on_segment(a1, a2, b1))
        || (d4.abs() <= eps && on_segment(a1, a2, b2))
}

/// True when a closed ring is simple: no two non-adjacent edges intersect.
pub fn ring_is_simple(ring: &[Vec2]) -> bool {
    let n = ring.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let a1 = ring[i];
        let a2 = ring[(i + 1) % n];
        for j in (i + 1)..n {
            // Skip adjacent edges (they share a vertex by construction).
            if j == i || (j + 1) % n == i || (i + 1) % n == j {
                continue;
            }
            let b1 = ring[j];
            let b2 = ring[(j + 1) % n];
            if segments_intersect(a1, a2, b1, b2) {
                return false;
            }
        }
    }
    true
}
