//! Ear-clipping triangulation. Holes are first bridged into the outer ring
//! with zero-width cuts, giving a single weakly simple ring to clip.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use super::{orient, segments_intersect, GeometryError, Point2, Polygon, EPS};
use crate::math;

/// Counter-clockwise angle swept from `from` to `to`, in `[0, 2π)`.
fn ccw_angle(from: Point2, to: Point2) -> f64 {
    let a = math::atan2(from.cross(to), from.dot(to));
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

/// Whether the direction `v → p` points into the free side of the ring at `v`
/// (free side on the left of `prev → v → next`).
fn locally_inside(prev: Point2, v: Point2, next: Point2, p: Point2) -> bool {
    let span = ccw_angle(next - v, prev - v);
    let t = ccw_angle(next - v, p - v);
    t > 0.0 && t < span
}

fn same(a: Point2, b: Point2) -> bool {
    a.distance(b) <= EPS
}

/// Whether segment `m → v` is blocked by edge `p → q`. Edges that share an
/// endpoint position with the segment are ignored.
fn blocks(m: Point2, v: Point2, p: Point2, q: Point2) -> bool {
    if same(p, m) || same(q, m) || same(p, v) || same(q, v) {
        return false;
    }
    segments_intersect(m, v, p, q)
}

fn ring_edges<'a>(points: &'a [Point2], ring: &'a [usize]) -> impl Iterator<Item = (Point2, Point2)> + 'a {
    let n = ring.len();
    (0..n).map(move |i| (points[ring[i]], points[ring[(i + 1) % n]]))
}

fn bridge_holes(points: &[Point2], mut ring: Vec<usize>, mut holes: Vec<Vec<usize>>) -> Result<Vec<usize>, GeometryError> {
    // rightmost holes first, so later bridges can reach earlier ones
    let max_x = |h: &Vec<usize>| h.iter().map(|&i| points[i].x).fold(f64::NEG_INFINITY, f64::max);
    let mut order: Vec<usize> = (0..holes.len()).collect();
    order.sort_by(|&a, &b| max_x(&holes[b]).total_cmp(&max_x(&holes[a])).then(a.cmp(&b)));

    for (k, &h) in order.iter().enumerate() {
        let hole = core::mem::take(&mut holes[h]);
        let hn = hole.len();
        let m_pos = (0..hn).fold(0, |best, i| if points[hole[i]].x > points[hole[best]].x { i } else { best });
        let m = points[hole[m_pos]];
        let (hp, hq) = (points[hole[(m_pos + hn - 1) % hn]], points[hole[(m_pos + 1) % hn]]);

        let mut candidates: Vec<usize> = (0..ring.len()).collect();
        candidates.sort_by(|&a, &b| points[ring[a]].distance(m).total_cmp(&points[ring[b]].distance(m)).then(a.cmp(&b)));

        let rn = ring.len();
        let pending: Vec<&Vec<usize>> = order[k + 1..].iter().map(|&o| &holes[o]).collect();
        let chosen = candidates.into_iter().find(|&pos| {
            let v = points[ring[pos]];
            let (prev, next) = (points[ring[(pos + rn - 1) % rn]], points[ring[(pos + 1) % rn]]);
            locally_inside(prev, v, next, m)
                && locally_inside(hp, m, hq, v)
                && !ring_edges(points, &ring).any(|(p, q)| blocks(m, v, p, q))
                && !ring_edges(points, &hole).any(|(p, q)| blocks(m, v, p, q))
                && !pending.iter().any(|o| ring_edges(points, o).any(|(p, q)| blocks(m, v, p, q)))
        });
        let Some(pos) = chosen else {
            return Err(GeometryError::TriangulationFailure(ring.len() + hn));
        };

        let mut spliced = Vec::with_capacity(ring.len() + hn + 2);
        spliced.extend_from_slice(&ring[..=pos]);
        spliced.extend((0..=hn).map(|i| hole[(m_pos + i) % hn]));
        spliced.push(ring[pos]);
        spliced.extend_from_slice(&ring[pos + 1..]);
        ring = spliced;
    }
    Ok(ring)
}

fn in_triangle(a: Point2, b: Point2, c: Point2, p: Point2) -> bool {
    let tol = -EPS * EPS;
    orient(a, b, p) >= tol && orient(b, c, p) >= tol && orient(c, a, p) >= tol
}

fn turn_tol(a: Point2, v: Point2, b: Point2) -> f64 {
    EPS * (v - a).norm() * (b - v).norm()
}

fn is_ear(points: &[Point2], ring: &[usize], i: usize) -> bool {
    let n = ring.len();
    let (ia, ib) = ((i + n - 1) % n, (i + 1) % n);
    let (a, v, b) = (points[ring[ia]], points[ring[i]], points[ring[ib]]);
    if orient(a, v, b) <= turn_tol(a, v, b) {
        return false;
    }
    !ring.iter().enumerate().any(|(j, &pi)| {
        if j == ia || j == i || j == ib {
            return false;
        }
        let p = points[pi];
        !same(p, a) && !same(p, v) && !same(p, b) && in_triangle(a, v, b, p)
    })
}

/// Triangulates the region inside the counter-clockwise `boundary` and outside
/// the clockwise `holes`. Triangles come out counter-clockwise.
pub fn triangulate(boundary: &Polygon, holes: &[Polygon]) -> Result<Vec<Polygon>, GeometryError> {
    let mut points: Vec<Point2> = boundary.vertices().to_vec();
    let mut hole_rings = Vec::with_capacity(holes.len());
    for h in holes {
        let start = points.len();
        points.extend_from_slice(h.vertices());
        hole_rings.push((start..points.len()).collect::<Vec<_>>());
    }
    let mut ring = bridge_holes(&points, (0..boundary.len()).collect(), hole_rings)?;

    let mut tris = Vec::with_capacity(ring.len());
    let mut cursor = 0;
    while ring.len() > 3 {
        let n = ring.len();
        let ear = (0..n).map(|k| (cursor + k) % n).find(|&i| is_ear(&points, &ring, i));
        match ear {
            Some(i) => {
                let (a, v, b) = (ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]);
                tris.push(Polygon::new(alloc::vec![points[a], points[v], points[b]]));
                ring.remove(i);
                cursor = i % ring.len();
            }
            None => {
                // a straight or spike vertex encloses no area and can go
                let flat = (0..n).find(|&i| {
                    let (a, v, b) = (points[ring[(i + n - 1) % n]], points[ring[i]], points[ring[(i + 1) % n]]);
                    math::abs(orient(a, v, b)) <= turn_tol(a, v, b)
                });
                match flat {
                    Some(i) => {
                        ring.remove(i);
                        cursor = i % ring.len();
                    }
                    None => return Err(GeometryError::TriangulationFailure(n)),
                }
            }
        }
    }
    let (a, v, b) = (points[ring[0]], points[ring[1]], points[ring[2]]);
    if orient(a, v, b) > turn_tol(a, v, b) {
        tris.push(Polygon::new(alloc::vec![a, v, b]));
    }
    Ok(tris)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn total_area(tris: &[Polygon]) -> f64 {
        tris.iter().map(|t| t.signed_area()).sum()
    }

    #[test]
    fn square() {
        let t = triangulate(&Polygon::rect(0.0, 0.0, 1.0, 1.0), &[]).unwrap();
        assert_eq!(t.len(), 2);
        assert!((total_area(&t) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn square_with_hole() {
        let outer = Polygon::rect(0.0, 0.0, 4.0, 4.0);
        let hole = Polygon::rect(1.0, 1.0, 3.0, 3.0).reversed();
        let t = triangulate(&outer, &[hole]).unwrap();
        assert_eq!(t.len(), 8);
        assert!((total_area(&t) - 12.0).abs() < 1e-9);
        assert!(t.iter().all(|t| t.signed_area() > 0.0));
    }

    #[test]
    fn triangle_is_itself() {
        let tri = Polygon::from_coords(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]);
        let t = triangulate(&tri, &[]).unwrap();
        assert_eq!(t, vec![tri]);
    }

    #[test]
    fn two_holes() {
        let outer = Polygon::rect(0.0, 0.0, 10.0, 4.0);
        let holes = [Polygon::rect(1.0, 1.0, 3.0, 3.0).reversed(), Polygon::rect(6.0, 1.0, 8.0, 3.0).reversed()];
        let t = triangulate(&outer, &holes).unwrap();
        assert!((total_area(&t) - 32.0).abs() < 1e-9);
    }
}
