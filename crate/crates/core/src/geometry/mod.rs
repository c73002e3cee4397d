//! Planar geometry over the work region: polygons, layout validation,
//! triangulation with holes, convex merging and point location.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use crate::math;

mod layout;
mod merge;
mod region;
mod triangulate;

pub use layout::{validate_layout, Layout, TunnelSpec, ValidatedLayout};
pub use merge::merge_convex;
pub use region::{
    boundary_contact, convex_clip_area, decompose, locate, shared_side, BoundaryContact,
    ConvexRegion,
};
pub use triangulate::triangulate;

/// Coordinate tolerance in meters.
pub const EPS: f64 = 1e-9;
/// Minimum length for two regions to count as sharing a side.
pub const SIDE_EPS: f64 = 1e-6;
/// Relative tolerance for area conservation checks.
pub const AREA_REL_TOL: f64 = 1e-6;

/// A point in the board plane, in meters.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-D cross product.
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        math::sqrt(self.dot(self))
    }

    pub fn distance(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        Point2::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }

    pub fn midpoint(self, o: Point2) -> Point2 {
        self.lerp(o, 0.5)
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Point2::new(x, y)
    }
}

/// Twice the signed area of triangle `abc`; positive when counter-clockwise.
#[inline]
pub fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b - a).cross(c - a)
}

/// A closed line segment.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub a: Point2,
    pub b: Point2,
}

impl Segment {
    pub const fn new(a: Point2, b: Point2) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.distance(self.b)
    }

    pub fn midpoint(&self) -> Point2 {
        self.a.midpoint(self.b)
    }

    /// Closest point of the segment to `p`.
    pub fn closest_point(&self, p: Point2) -> Point2 {
        let d = self.b - self.a;
        let len2 = d.dot(d);
        if len2 == 0.0 {
            return self.a;
        }
        let t = ((p - self.a).dot(d) / len2).clamp(0.0, 1.0);
        self.a.lerp(self.b, t)
    }

    pub fn distance_to(&self, p: Point2) -> f64 {
        self.closest_point(p).distance(p)
    }
}

fn on_segment(a: Point2, b: Point2, p: Point2) -> bool {
    Segment::new(a, b).distance_to(p) <= EPS
}

/// Whether closed segments `p1p2` and `q1q2` share at least one point
/// (touching counts).
pub fn segments_intersect(p1: Point2, p2: Point2, q1: Point2, q2: Point2) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    on_segment(q1, q2, p1) || on_segment(q1, q2, p2) || on_segment(p1, p2, q1) || on_segment(p1, p2, q2)
}

/// Errors raised by geometric validation and decomposition.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("{0}: polygon has fewer than 3 vertices or zero area")]
    DegeneratePolygon(PolygonRef),
    #[error("{0}: non-finite coordinate")]
    NonFinite(PolygonRef),
    #[error("NonSimplePolygon: {0} is not simple")]
    NonSimplePolygon(PolygonRef),
    #[error("WrongOrientation: {0} must be {expected}", expected = if matches!(.0, PolygonRef::Hole(_)) { "clockwise" } else { "counter-clockwise" })]
    WrongOrientation(PolygonRef),
    #[error("HoleOutsideBoundary: hole {0} is not strictly inside the boundary")]
    HoleOutsideBoundary(usize),
    #[error("OverlappingHoles: holes {0} and {1} overlap or touch")]
    OverlappingHoles(usize, usize),
    #[error("BadPredecomposition: region {index}: {reason}")]
    BadPredecomposition { index: usize, reason: &'static str },
    #[error("BadTunnel: tunnel {0}: {1}")]
    BadTunnel(u32, &'static str),
    #[error("TriangulationFailure: no ear found with {0} vertices left")]
    TriangulationFailure(usize),
}

/// Identifies a polygon of a [`Layout`] in diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolygonRef {
    Boundary,
    Hole(usize),
    Region(usize),
    /// A polygon checked outside of any layout.
    Standalone,
}

impl core::fmt::Display for PolygonRef {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            PolygonRef::Boundary => write!(f, "boundary"),
            PolygonRef::Hole(i) => write!(f, "hole {i}"),
            PolygonRef::Region(i) => write!(f, "region {i}"),
            PolygonRef::Standalone => write!(f, "polygon"),
        }
    }
}

/// Axis-aligned bounding box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bbox {
    pub min: Point2,
    pub max: Point2,
}

impl Bbox {
    pub fn of(points: &[Point2]) -> Bbox {
        let mut min = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        Bbox { min, max }
    }

    pub fn contains(&self, p: Point2, tol: f64) -> bool {
        p.x >= self.min.x - tol && p.x <= self.max.x + tol && p.y >= self.min.y - tol && p.y <= self.max.y + tol
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

/// A simple polygon stored as its vertex ring (no repeated closing vertex).
///
/// Outer boundaries and regions are counter-clockwise, holes clockwise.
/// Construction does not validate; see [`Polygon::check`].
#[derive(Clone, Debug, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point2>,
}

impl Polygon {
    pub fn new(vertices: Vec<Point2>) -> Self {
        Polygon { vertices }
    }

    pub fn from_coords(coords: &[(f64, f64)]) -> Self {
        Polygon::new(coords.iter().map(|&c| Point2::from(c)).collect())
    }

    /// Axis-aligned rectangle, counter-clockwise from `(x0, y0)`.
    pub fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Self {
        Polygon::from_coords(&[(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges `(v[i], v[i+1])`, wrapping around.
    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| Segment::new(self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn reversed(&self) -> Polygon {
        let mut v = self.vertices.clone();
        v.reverse();
        Polygon::new(v)
    }

    pub fn bbox(&self) -> Bbox {
        Bbox::of(&self.vertices)
    }

    /// Signed area by the shoelace formula: positive for counter-clockwise rings.
    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0.0;
        }
        let mut twice = 0.0;
        for i in 0..n {
            twice += self.vertices[i].cross(self.vertices[(i + 1) % n]);
        }
        twice * 0.5
    }

    pub fn area(&self) -> f64 {
        math::abs(self.signed_area())
    }

    /// True when every turn has the same sign; collinear vertices are allowed.
    pub fn is_convex(&self) -> Result<bool, GeometryError> {
        let n = self.vertices.len();
        if n < 3 {
            return Err(GeometryError::DegeneratePolygon(PolygonRef::Standalone));
        }
        let (mut pos, mut neg) = (false, false);
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            let c = self.vertices[(i + 2) % n];
            let e1 = b - a;
            let e2 = c - b;
            let cr = e1.cross(e2);
            let tol = EPS * e1.norm() * e2.norm();
            if cr > tol {
                pos = true;
            } else if cr < -tol {
                neg = true;
            } else if e1.dot(e2) < 0.0 {
                // collinear fold-back
                return Ok(false);
            }
        }
        Ok(!(pos && neg))
    }

    /// No two non-adjacent edges touch and no adjacent edges fold back.
    pub fn is_simple(&self) -> bool {
        let n = self.vertices.len();
        if n < 3 {
            return false;
        }
        let v = &self.vertices;
        for i in 0..n {
            let (a, b) = (v[i], v[(i + 1) % n]);
            // adjacent edge (i, i+1) folding back onto edge i
            let c = v[(i + 2) % n];
            if math::abs(orient(a, b, c)) <= EPS * (b - a).norm().max(1.0) && (b - a).dot(c - b) < 0.0 {
                return false;
            }
            for j in (i + 2)..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if segments_intersect(a, b, v[j], v[(j + 1) % n]) {
                    return false;
                }
            }
        }
        true
    }

    /// Full invariant check: at least 3 finite vertices, no coincident
    /// consecutive vertices, nonzero area, simple.
    pub fn check(&self, which: PolygonRef) -> Result<(), GeometryError> {
        if self.vertices.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::NonFinite(which));
        }
        let n = self.vertices.len();
        if n < 3 {
            return Err(GeometryError::DegeneratePolygon(which));
        }
        for i in 0..n {
            if self.vertices[i].distance(self.vertices[(i + 1) % n]) <= EPS {
                return Err(GeometryError::DegeneratePolygon(which));
            }
        }
        if !self.is_simple() {
            return Err(GeometryError::NonSimplePolygon(which));
        }
        if math::abs(self.signed_area()) <= EPS * EPS {
            return Err(GeometryError::DegeneratePolygon(which));
        }
        Ok(())
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point2 {
        let n = self.vertices.len();
        let a = self.signed_area();
        if n == 0 {
            return Point2::default();
        }
        if math::abs(a) <= f64::MIN_POSITIVE {
            let s = self.vertices.iter().fold(Point2::default(), |acc, &p| acc + p);
            return s * (1.0 / n as f64);
        }
        // shift to the first vertex to limit cancellation
        let o = self.vertices[0];
        let (mut cx, mut cy) = (0.0, 0.0);
        for i in 0..n {
            let p = self.vertices[i] - o;
            let q = self.vertices[(i + 1) % n] - o;
            let w = p.cross(q);
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
        }
        Point2::new(o.x + cx / (6.0 * a), o.y + cy / (6.0 * a))
    }

    /// Whether `p` lies on the polygon outline within [`EPS`].
    pub fn on_boundary(&self, p: Point2) -> bool {
        self.edges().any(|e| e.distance_to(p) <= EPS)
    }

    /// Even-odd point-in-polygon test; points on the outline count as inside.
    pub fn contains(&self, p: Point2) -> bool {
        if self.on_boundary(p) {
            return true;
        }
        self.strictly_contains(p)
    }

    /// Even-odd test without the outline tolerance.
    pub fn strictly_contains(&self, p: Point2) -> bool {
        let v = &self.vertices;
        let n = v.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (a, b) = (v[i], v[j]);
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside && !self.on_boundary(p)
    }

}

/// Signed shoelace area of `polygon`.
pub fn polygon_area(polygon: &Polygon) -> f64 {
    polygon.signed_area()
}

pub fn is_convex(polygon: &Polygon) -> Result<bool, GeometryError> {
    polygon.is_convex()
}

pub fn centroid(polygon: &Polygon) -> Point2 {
    polygon.centroid()
}
