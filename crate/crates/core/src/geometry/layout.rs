use alloc::vec::Vec;
use core::ops::Deref;

use super::{convex_clip_area, segments_intersect, GeometryError, Point2, Polygon, PolygonRef, AREA_REL_TOL, EPS};

/// A 2.5-D passage (bridge, pass, tunnel) between two entrance points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TunnelSpec {
    pub id: u32,
    pub entrance_a: Point2,
    pub entrance_b: Point2,
}

/// The work region: an outer boundary, component holes, tunnels and an
/// optional hand-authored convex decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct Layout {
    pub boundary: Polygon,
    pub holes: Vec<Polygon>,
    pub tunnels: Vec<TunnelSpec>,
    pub predecomposed: Option<Vec<Polygon>>,
}

impl Layout {
    pub fn new(boundary: Polygon) -> Self {
        Layout { boundary, holes: Vec::new(), tunnels: Vec::new(), predecomposed: None }
    }

    pub fn with_holes(mut self, holes: Vec<Polygon>) -> Self {
        self.holes = holes;
        self
    }

    pub fn with_tunnels(mut self, tunnels: Vec<TunnelSpec>) -> Self {
        self.tunnels = tunnels;
        self
    }

    pub fn with_regions(mut self, regions: Vec<Polygon>) -> Self {
        self.predecomposed = Some(regions);
        self
    }

    /// Boundary area minus hole areas.
    pub fn free_area(&self) -> f64 {
        self.boundary.area() - self.holes.iter().map(Polygon::area).sum::<f64>()
    }

    /// Whether `p` is inside a hole, away from its outline.
    pub fn in_hole(&self, p: Point2) -> Option<usize> {
        self.holes.iter().position(|h| h.strictly_contains(p))
    }
}

/// A [`Layout`] whose invariants have been checked. Predecomposed regions are
/// normalized to counter-clockwise order and tunnels sorted by id.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidatedLayout(Layout);

impl ValidatedLayout {
    pub fn layout(&self) -> &Layout {
        &self.0
    }

    pub fn into_inner(self) -> Layout {
        self.0
    }
}

impl Deref for ValidatedLayout {
    type Target = Layout;
    fn deref(&self) -> &Layout {
        &self.0
    }
}

fn rings_touch(a: &Polygon, b: &Polygon) -> bool {
    a.edges().any(|ea| b.edges().any(|eb| segments_intersect(ea.a, ea.b, eb.a, eb.b)))
}

/// Checks every [`Layout`] invariant, reporting the first violation.
pub fn validate_layout(mut layout: Layout) -> Result<ValidatedLayout, GeometryError> {
    layout.boundary.check(PolygonRef::Boundary)?;
    if layout.boundary.signed_area() < 0.0 {
        return Err(GeometryError::WrongOrientation(PolygonRef::Boundary));
    }
    for (i, hole) in layout.holes.iter().enumerate() {
        hole.check(PolygonRef::Hole(i))?;
        if hole.signed_area() > 0.0 {
            return Err(GeometryError::WrongOrientation(PolygonRef::Hole(i)));
        }
    }
    for (i, hole) in layout.holes.iter().enumerate() {
        let inside = hole.vertices().iter().all(|&p| layout.boundary.strictly_contains(p));
        if !inside || rings_touch(hole, &layout.boundary) {
            return Err(GeometryError::HoleOutsideBoundary(i));
        }
    }
    for i in 0..layout.holes.len() {
        for j in (i + 1)..layout.holes.len() {
            let (a, b) = (&layout.holes[i], &layout.holes[j]);
            if rings_touch(a, b) || a.contains(b.vertices()[0]) || b.contains(a.vertices()[0]) {
                return Err(GeometryError::OverlappingHoles(i, j));
            }
        }
    }

    validate_tunnels(&layout.tunnels)?;
    layout.tunnels.sort_by_key(|t| t.id);

    if let Some(regions) = layout.predecomposed.take() {
        let regions = validate_regions(&layout, regions)?;
        layout.predecomposed = Some(regions);
    }
    Ok(ValidatedLayout(layout))
}

fn validate_tunnels(tunnels: &[TunnelSpec]) -> Result<(), GeometryError> {
    for (i, t) in tunnels.iter().enumerate() {
        if !t.entrance_a.is_finite() || !t.entrance_b.is_finite() {
            return Err(GeometryError::BadTunnel(t.id, "non-finite anchor"));
        }
        if t.entrance_a.distance(t.entrance_b) <= EPS {
            return Err(GeometryError::BadTunnel(t.id, "entrances coincide"));
        }
        for u in &tunnels[i + 1..] {
            if u.id == t.id {
                return Err(GeometryError::BadTunnel(t.id, "duplicate tunnel id"));
            }
            let shared = [t.entrance_a, t.entrance_b]
                .iter()
                .any(|p| p.distance(u.entrance_a) <= EPS || p.distance(u.entrance_b) <= EPS);
            if shared {
                return Err(GeometryError::BadTunnel(t.id, "entrance shared with another tunnel"));
            }
        }
    }
    Ok(())
}

fn validate_regions(layout: &Layout, regions: Vec<Polygon>) -> Result<Vec<Polygon>, GeometryError> {
    let free = layout.free_area();
    let tol = AREA_REL_TOL * free;
    let bad = |index, reason| GeometryError::BadPredecomposition { index, reason };

    let mut out = Vec::with_capacity(regions.len());
    for (i, r) in regions.into_iter().enumerate() {
        match r.check(PolygonRef::Region(i)) {
            Ok(()) => {}
            Err(GeometryError::NonSimplePolygon(_)) => return Err(bad(i, "not simple")),
            Err(_) => return Err(bad(i, "degenerate polygon")),
        }
        let r = if r.signed_area() < 0.0 { r.reversed() } else { r };
        if !r.is_convex()? {
            return Err(bad(i, "not convex"));
        }
        let area = r.area();
        if convex_clip_area(&layout.boundary, &r) < area - tol {
            return Err(bad(i, "extends outside the boundary"));
        }
        if layout.holes.iter().any(|h| convex_clip_area(h, &r) > tol) {
            return Err(bad(i, "overlaps a hole"));
        }
        out.push(r);
    }
    for i in 0..out.len() {
        for j in (i + 1)..out.len() {
            if convex_clip_area(&out[j], &out[i]) > tol {
                return Err(bad(j, "overlaps another region"));
            }
        }
    }
    let total: f64 = out.iter().map(Polygon::area).sum();
    if (total - free).abs() > tol {
        return Err(bad(out.len(), "regions do not cover the free space"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn square_with_hole() -> Layout {
        Layout::new(Polygon::rect(0.0, 0.0, 4.0, 4.0)).with_holes(vec![Polygon::rect(1.0, 1.0, 3.0, 3.0).reversed()])
    }

    #[test]
    fn minimal_layout_is_valid() {
        assert!(validate_layout(Layout::new(Polygon::rect(0.0, 0.0, 1.0, 1.0))).is_ok());
    }

    #[test]
    fn centered_hole_is_valid() {
        let l = square_with_hole();
        // containment oracle: every hole vertex strictly inside the boundary
        assert!(l.holes[0].vertices().iter().all(|&p| l.boundary.strictly_contains(p)));
        assert!(validate_layout(l).is_ok());
    }

    #[test]
    fn bowtie_boundary_is_rejected() {
        let l = Layout::new(Polygon::from_coords(&[(0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)]));
        assert_eq!(validate_layout(l), Err(GeometryError::NonSimplePolygon(PolygonRef::Boundary)));
    }

    #[test]
    fn orientation_errors() {
        let l = Layout::new(Polygon::rect(0.0, 0.0, 1.0, 1.0).reversed());
        assert_eq!(validate_layout(l), Err(GeometryError::WrongOrientation(PolygonRef::Boundary)));
        let l = Layout::new(Polygon::rect(0.0, 0.0, 4.0, 4.0)).with_holes(vec![Polygon::rect(1.0, 1.0, 2.0, 2.0)]);
        assert_eq!(validate_layout(l), Err(GeometryError::WrongOrientation(PolygonRef::Hole(0))));
    }

    #[test]
    fn hole_placement_errors() {
        let l = Layout::new(Polygon::rect(0.0, 0.0, 4.0, 4.0)).with_holes(vec![Polygon::rect(3.0, 1.0, 5.0, 2.0).reversed()]);
        assert_eq!(validate_layout(l), Err(GeometryError::HoleOutsideBoundary(0)));
        let l = Layout::new(Polygon::rect(0.0, 0.0, 4.0, 4.0)).with_holes(vec![
            Polygon::rect(1.0, 1.0, 2.0, 2.0).reversed(),
            Polygon::rect(1.5, 1.5, 3.0, 3.0).reversed(),
        ]);
        assert_eq!(validate_layout(l), Err(GeometryError::OverlappingHoles(0, 1)));
    }

    #[test]
    fn predecomposition_checks() {
        let ok = Layout::new(Polygon::rect(0.0, 0.0, 10.0, 10.0))
            .with_regions(vec![Polygon::rect(0.0, 0.0, 5.0, 10.0), Polygon::rect(5.0, 0.0, 10.0, 10.0).reversed()]);
        let v = validate_layout(ok).unwrap();
        assert!(v.predecomposed.as_ref().unwrap().iter().all(|r| r.signed_area() > 0.0));

        let gap = Layout::new(Polygon::rect(0.0, 0.0, 10.0, 10.0)).with_regions(vec![Polygon::rect(0.0, 0.0, 5.0, 10.0)]);
        assert!(matches!(validate_layout(gap), Err(GeometryError::BadPredecomposition { .. })));

        let overlap = Layout::new(Polygon::rect(0.0, 0.0, 10.0, 10.0))
            .with_regions(vec![Polygon::rect(0.0, 0.0, 6.0, 10.0), Polygon::rect(4.0, 0.0, 10.0, 10.0)]);
        assert!(matches!(validate_layout(overlap), Err(GeometryError::BadPredecomposition { index: 1, .. })));

        let concave = Layout::new(Polygon::rect(0.0, 0.0, 2.0, 2.0)).with_regions(vec![
            Polygon::from_coords(&[(0.0, 0.0), (2.0, 0.0), (2.0, 1.0), (1.0, 1.0), (1.0, 2.0), (0.0, 2.0)]),
            Polygon::rect(1.0, 1.0, 2.0, 2.0),
        ]);
        assert!(matches!(
            validate_layout(concave),
            Err(GeometryError::BadPredecomposition { index: 0, reason: "not convex" })
        ));
    }

    #[test]
    fn tunnel_checks() {
        let t = |id, a: (f64, f64), b: (f64, f64)| TunnelSpec { id, entrance_a: a.into(), entrance_b: b.into() };
        let base = || Layout::new(Polygon::rect(0.0, 0.0, 4.0, 4.0));
        assert!(validate_layout(base().with_tunnels(vec![t(0, (1.0, 1.0), (1.0, 1.0))])).is_err());
        assert!(validate_layout(base().with_tunnels(vec![t(0, (1.0, 1.0), (2.0, 2.0)), t(0, (3.0, 1.0), (3.0, 2.0))])).is_err());
        assert!(validate_layout(base().with_tunnels(vec![t(0, (1.0, 1.0), (2.0, 2.0)), t(1, (2.0, 2.0), (3.0, 2.0))])).is_err());
        let v = validate_layout(base().with_tunnels(vec![t(3, (1.0, 1.0), (2.0, 2.0)), t(1, (3.0, 1.0), (3.0, 2.0))])).unwrap();
        assert_eq!(v.tunnels[0].id, 1);
    }
}
