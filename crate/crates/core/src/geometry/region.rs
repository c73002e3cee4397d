use alloc::vec::Vec;

use super::{merge_convex, triangulate, Bbox, GeometryError, Point2, Polygon, Segment, ValidatedLayout, EPS, SIDE_EPS};
use crate::graph::VertexId;
use crate::math;

/// One convex piece of the free space. Becomes graph vertex `id`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexRegion {
    pub id: usize,
    pub polygon: Polygon,
    pub centroid: Point2,
    bbox: Bbox,
    // unit inward normal and offset per edge: n·p - c >= 0 inside
    half_planes: Vec<(Point2, f64)>,
}

impl ConvexRegion {
    /// Wraps a counter-clockwise convex polygon.
    pub fn new(id: usize, polygon: Polygon) -> Self {
        let half_planes = polygon
            .edges()
            .filter_map(|e| {
                let d = e.b - e.a;
                let len = d.norm();
                if len <= 0.0 {
                    return None;
                }
                let n = Point2::new(-d.y / len, d.x / len);
                Some((n, n.dot(e.a)))
            })
            .collect();
        ConvexRegion { id, centroid: polygon.centroid(), bbox: polygon.bbox(), polygon, half_planes }
    }

    pub fn bbox(&self) -> Bbox {
        self.bbox
    }

    /// Half-plane membership with [`EPS`] slack.
    pub fn contains(&self, p: Point2) -> bool {
        self.bbox.contains(p, EPS) && self.half_planes.iter().all(|&(n, c)| n.dot(p) - c >= -EPS)
    }

    /// Distance from `p` to the nearest edge line; negative when outside.
    pub fn clearance(&self, p: Point2) -> f64 {
        self.half_planes.iter().map(|&(n, c)| n.dot(p) - c).fold(f64::INFINITY, f64::min)
    }
}

/// Area of `subject ∩ clip` for a convex counter-clockwise `clip`
/// (Sutherland-Hodgman; `subject` may be concave and of either orientation).
pub fn convex_clip_area(subject: &Polygon, clip: &Polygon) -> f64 {
    let mut poly: Vec<Point2> = subject.vertices().to_vec();
    for e in clip.edges() {
        if poly.is_empty() {
            break;
        }
        let inside = |p: Point2| (e.b - e.a).cross(p - e.a) >= 0.0;
        let mut next = Vec::with_capacity(poly.len() + 2);
        for i in 0..poly.len() {
            let cur = poly[i];
            let prev = poly[(i + poly.len() - 1) % poly.len()];
            let (ci, pi) = (inside(cur), inside(prev));
            if ci != pi {
                let d1 = (e.b - e.a).cross(prev - e.a);
                let d2 = (e.b - e.a).cross(cur - e.a);
                next.push(prev.lerp(cur, d1 / (d1 - d2)));
            }
            if ci {
                next.push(cur);
            }
        }
        poly = next;
    }
    if poly.len() < 3 {
        return 0.0;
    }
    Polygon::new(poly).area()
}

/// Convex decomposition of the free space. A predecomposed layout is adopted
/// as is (ids in input order); otherwise the free space is triangulated and
/// the triangles merged greedily.
pub fn decompose(layout: &ValidatedLayout) -> Result<Vec<ConvexRegion>, GeometryError> {
    let polygons = match &layout.predecomposed {
        Some(regions) => regions.clone(),
        None => {
            let tris = triangulate(&layout.boundary, &layout.holes)?;
            return Ok(merge_convex(&tris));
        }
    };
    Ok(polygons.into_iter().enumerate().map(|(i, p)| ConvexRegion::new(i, p)).collect())
}

/// Region containing `point`, or the outside vertex when the point is off the
/// board or inside a component. Points on shared sides go to the lowest id.
pub fn locate(point: Point2, regions: &[ConvexRegion], layout: &ValidatedLayout) -> VertexId {
    if !layout.boundary.bbox().contains(point, EPS) {
        return VertexId::OUTSIDE;
    }
    regions
        .iter()
        .find(|r| r.contains(point))
        .map(|r| VertexId::region(r.id))
        .unwrap_or(VertexId::OUTSIDE)
}

/// Longest collinear overlap between an edge of `a` and an edge of `b`.
fn longest_overlap(a: &Polygon, b: &Polygon) -> Option<(Segment, Segment)> {
    let mut best: Option<(Segment, Segment, f64)> = None;
    for ea in a.edges() {
        let d = ea.b - ea.a;
        let len = d.norm();
        if len <= EPS {
            continue;
        }
        let u = d * (1.0 / len);
        for eb in b.edges() {
            let off1 = u.cross(eb.a - ea.a);
            let off2 = u.cross(eb.b - ea.a);
            if math::abs(off1) > EPS || math::abs(off2) > EPS {
                continue;
            }
            let t1 = u.dot(eb.a - ea.a);
            let t2 = u.dot(eb.b - ea.a);
            let lo = t1.min(t2).max(0.0);
            let hi = t1.max(t2).min(len);
            let overlap = hi - lo;
            if overlap > SIDE_EPS && best.as_ref().is_none_or(|b| overlap > b.2) {
                best = Some((Segment::new(ea.a + u * lo, ea.a + u * hi), ea, overlap));
            }
        }
    }
    best.map(|(s, e, _)| (s, e))
}

/// The side two regions share, if its length exceeds [`SIDE_EPS`]. Corner
/// contact is not a side.
pub fn shared_side(a: &ConvexRegion, b: &ConvexRegion) -> Option<Segment> {
    if a.id == b.id {
        return None;
    }
    let (ba, bb) = (a.bbox, b.bbox);
    if ba.max.x < bb.min.x - EPS || bb.max.x < ba.min.x - EPS || ba.max.y < bb.min.y - EPS || bb.max.y < ba.min.y - EPS {
        return None;
    }
    longest_overlap(&a.polygon, &b.polygon).map(|(s, _)| s)
}

/// Where a region touches the outer boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryContact {
    pub side: Segment,
    /// Unit normal pointing off the board.
    pub outward: Point2,
}

/// Longest piece of `region`'s outline lying on the outer `boundary`
/// (counter-clockwise). Hole outlines never count.
pub fn boundary_contact(region: &ConvexRegion, boundary: &Polygon) -> Option<BoundaryContact> {
    longest_overlap(boundary, &region.polygon).map(|(side, edge)| {
        let d = edge.b - edge.a;
        let len = d.norm();
        BoundaryContact { side, outward: Point2::new(d.y / len, -d.x / len) }
    })
}
