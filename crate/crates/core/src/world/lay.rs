//! Straight-segment placement of a DOO along a vertex sequence.

use alloc::vec::Vec;

use super::{Board, WorldError};
use crate::geometry::{Point2, EPS};
use crate::graph::{VertexId, VertexKind};

/// A vertex to pass through, optionally at a chosen point. Regions default to
/// their centroid; entrances always use their anchor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Stop {
    pub vertex: VertexId,
    pub at: Option<Point2>,
}

impl Stop {
    pub fn new(vertex: VertexId) -> Self {
        Stop { vertex, at: None }
    }

    pub fn at(vertex: VertexId, p: Point2) -> Self {
        Stop { vertex, at: Some(p) }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub(crate) struct Laid {
    pub points: Vec<Point2>,
    /// `(segment, tunnel)` for segments running through a tunnel.
    pub tags: Vec<(usize, u32)>,
}

impl Laid {
    fn push(&mut self, p: Point2) {
        if self.points.last().is_none_or(|q| q.distance(p) > 1e-12) {
            self.points.push(p);
        }
    }

    fn push_tagged(&mut self, p: Point2, tunnel: u32) {
        self.points.push(p);
        self.tags.push((self.points.len() - 2, tunnel));
    }
}

enum Kind {
    Outside,
    Region(usize),
    Entrance { tunnel: u32, anchor: Point2, host: VertexId },
}

fn kind(board: &Board, v: VertexId) -> Result<Kind, WorldError> {
    Ok(match *board.graph.kind(v)? {
        VertexKind::Outside => Kind::Outside,
        VertexKind::Region(r) => Kind::Region(r),
        VertexKind::TunnelEntrance { tunnel, anchor, host, .. } => Kind::Entrance { tunnel, anchor, host },
    })
}

/// Point just off the board beside region `r`, and where the ray continuing
/// from it leaves the frame around the board.
fn exits(board: &Board, r: usize) -> Result<(Point2, Point2), WorldError> {
    let c = board.contacts[r].ok_or(WorldError::Unlayable(VertexId::region(r), VertexId::OUTSIDE))?;
    let exit = c.side.midpoint() + c.outward * (2.0 * EPS);
    Ok((exit, board.escape(exit, c.outward)))
}

/// Placement point of region stop `stops[i]`. A centroid that coincides with
/// the anchor of a neighbouring entrance stop would hide the region, so the
/// point then moves halfway towards the region's first corner.
fn target(board: &Board, stops: &[Stop], i: usize, r: usize) -> Point2 {
    if let Some(p) = stops[i].at {
        return p;
    }
    let region = &board.regions[r];
    let c = region.centroid;
    let crowded = [i.checked_sub(1), Some(i + 1)].into_iter().flatten().filter_map(|j| stops.get(j)).any(|s| {
        matches!(board.graph.kind(s.vertex), Ok(VertexKind::TunnelEntrance { anchor, .. }) if anchor.distance(c) <= 1e-6)
    });
    if crowded {
        c.midpoint(region.polygon.vertices()[0])
    } else {
        c
    }
}

/// Moves from `pos` in region `a` to `t` in region `b`, crossing their shared
/// side away from its ends.
fn cross(board: &Board, out: &mut Laid, pos: Point2, a: usize, b: usize, t: Point2) -> Result<(), WorldError> {
    if a == b {
        out.push(t);
        return Ok(());
    }
    let side = crate::geometry::shared_side(&board.regions[a], &board.regions[b])
        .ok_or(WorldError::Unlayable(VertexId::region(a), VertexId::region(b)))?;
    let d = t - pos;
    let e = side.b - side.a;
    let denom = d.cross(e);
    let len = e.norm();
    let margin = (1e-6 / len).max(0.01);
    let straight = crate::math::abs(denom) > EPS * d.norm() * len && {
        let w = side.a - pos;
        let s = w.cross(e) / denom;
        let u = w.cross(d) / denom;
        s > 0.0 && s < 1.0 && u >= margin && u <= 1.0 - margin
    };
    if !straight {
        out.push(side.midpoint());
    }
    out.push(t);
    Ok(())
}

/// Lays straight segments through `stops`. Consecutive stops must be adjacent
/// in the graph, and an entrance must be entered from its host or its twin.
pub(crate) fn lay(board: &Board, stops: &[Stop]) -> Result<Laid, WorldError> {
    let mut out = Laid::default();
    let Some(first) = stops.first() else {
        return Ok(out);
    };

    if stops.len() == 1 {
        match kind(board, first.vertex)? {
            Kind::Region(r) => {
                let t = target(board, stops, 0, r);
                out.push(t);
                out.push(t.midpoint(board.regions[r].polygon.vertices()[0]));
            }
            Kind::Outside => {
                out.push(board.frame.min);
                out.push(Point2::new(board.frame.max.x, board.frame.min.y));
            }
            Kind::Entrance { .. } => return Err(WorldError::Unlayable(first.vertex, first.vertex)),
        }
        return Ok(out);
    }

    // where the DOO left the board, while it is outside
    let mut escaped: Option<Point2> = None;
    let mut pos = match kind(board, first.vertex)? {
        Kind::Region(r) => target(board, stops, 0, r),
        Kind::Entrance { anchor, .. } => anchor,
        Kind::Outside => {
            let Kind::Region(next) = kind(board, stops[1].vertex)? else {
                return Err(WorldError::Unlayable(first.vertex, stops[1].vertex));
            };
            let (_, esc) = exits(board, next)?;
            escaped = Some(esc);
            esc
        }
    };
    out.push(pos);

    for (i, w) in stops.windows(2).enumerate() {
        let (u, v) = (w[0].vertex, w[1].vertex);
        let bad = WorldError::Unlayable(u, v);
        if u != v && !board.graph.adjacent(u, v) {
            return Err(bad);
        }
        match (kind(board, u)?, kind(board, v)?) {
            (Kind::Region(a), Kind::Region(b)) => {
                let t = target(board, stops, i + 1, b);
                cross(board, &mut out, pos, a, b, t)?;
                pos = t;
            }
            (Kind::Region(a), Kind::Entrance { anchor, host, .. }) => {
                if host != VertexId::region(a) {
                    return Err(bad);
                }
                out.push(anchor);
                pos = anchor;
            }
            (Kind::Entrance { tunnel, .. }, Kind::Entrance { anchor, .. }) => {
                out.push_tagged(anchor, tunnel);
                pos = anchor;
            }
            (Kind::Entrance { host, .. }, Kind::Region(b)) if host == v => {
                let t = target(board, stops, i + 1, b);
                out.push(t);
                pos = t;
            }
            (Kind::Region(a), Kind::Outside) => {
                let (exit, esc) = exits(board, a)?;
                out.push(exit);
                pos = exit;
                escaped = Some(esc);
            }
            (Kind::Outside, Kind::Region(b)) => {
                let (exit, esc) = exits(board, b)?;
                if let Some(from) = escaped.take() {
                    out.push(from);
                    for c in board.perimeter_between(from, esc) {
                        out.push(c);
                    }
                }
                out.push(esc);
                out.push(exit);
                let t = target(board, stops, i + 1, b);
                out.push(t);
                pos = t;
            }
            (Kind::Outside, Kind::Outside) => {}
            _ => return Err(bad),
        }
    }
    if let Some(esc) = escaped {
        out.push(esc);
    }
    Ok(out)
}
