//! Quasi-static world: a board, a DOO lying on it as a polyline, and the
//! pick-and-place commands that re-lay part of it.
//!
//! Re-laid portions are straight segments through region centroids and
//! tunnel anchors. The DOO has no length, stiffness or friction; only the
//! configuration it encodes to matters.

mod board;
mod episode;
mod lay;
mod random;

use alloc::vec::Vec;

pub use board::bundled_board;
pub use episode::{run_episode, run_trial, splitmix64, Episode, EpisodeError, Outcome, Step, Trial, TrialResult};
pub use random::{random_polyline, random_polyline_with};

use crate::configuration::{encode_traced, simplify, validate, Configuration, DooPolyline, EncodeError, EncodeTrace, RunKind, TunnelTag, DEFAULT_SAMPLE_STEP};
use crate::geometry::{boundary_contact, decompose, Bbox, BoundaryContact, ConvexRegion, GeometryError, Point2, ValidatedLayout};
use crate::graph::{build_graph, GraphError, SpatialGraph, VertexId};
use crate::router::{project, RouterError, RoutingAction};
use lay::{lay, Stop};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum WorldError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Router(#[from] RouterError),
    #[error("InvalidConfiguration: encoded configuration breaks at index {0}")]
    InvalidConfiguration(usize),
    #[error("DegenerateSplice: {0}")]
    DegenerateSplice(&'static str),
    #[error("cannot lay a DOO from vertex {0} to vertex {1}")]
    Unlayable(VertexId, VertexId),
    #[error("GenerationFailure: no valid polyline after {0} attempts")]
    GenerationFailure(usize),
}

/// A validated layout with its decomposition and spatial graph.
#[derive(Clone, Debug)]
pub struct Board {
    pub layout: ValidatedLayout,
    pub regions: Vec<ConvexRegion>,
    pub graph: SpatialGraph,
    contacts: Vec<Option<BoundaryContact>>,
    /// Rectangle around the board that off-board stretches follow.
    frame: Bbox,
}

impl Board {
    pub fn new(layout: ValidatedLayout) -> Result<Board, WorldError> {
        let regions = decompose(&layout)?;
        let graph = build_graph(&regions, &layout)?;
        let contacts = regions.iter().map(|r| boundary_contact(r, &layout.boundary)).collect();
        let bbox = layout.boundary.bbox();
        let m = 0.1 * bbox.width().max(bbox.height());
        let frame = Bbox { min: bbox.min - Point2::new(m, m), max: bbox.max + Point2::new(m, m) };
        Ok(Board { layout, regions, graph, contacts, frame })
    }

    pub fn encode(&self, doo: &DooPolyline, sample_step: f64) -> Result<EncodeTrace, EncodeError> {
        encode_traced(doo, &self.graph, &self.regions, &self.layout, sample_step)
    }

    /// Where the ray from `p` (inside the frame) along unit `dir` leaves it.
    fn escape(&self, p: Point2, dir: Point2) -> Point2 {
        let f = &self.frame;
        let mut s = f64::INFINITY;
        if dir.x > 0.0 {
            s = s.min((f.max.x - p.x) / dir.x);
        } else if dir.x < 0.0 {
            s = s.min((f.min.x - p.x) / dir.x);
        }
        if dir.y > 0.0 {
            s = s.min((f.max.y - p.y) / dir.y);
        } else if dir.y < 0.0 {
            s = s.min((f.min.y - p.y) / dir.y);
        }
        p + dir * s
    }

    /// Counter-clockwise perimeter coordinate of a point on the frame.
    fn perimeter_coord(&self, p: Point2) -> f64 {
        let f = &self.frame;
        let (w, h) = (f.width(), f.height());
        let tol = 1e-12 * (w + h);
        if crate::math::abs(p.y - f.min.y) <= tol {
            p.x - f.min.x
        } else if crate::math::abs(p.x - f.max.x) <= tol {
            w + (p.y - f.min.y)
        } else if crate::math::abs(p.y - f.max.y) <= tol {
            w + h + (f.max.x - p.x)
        } else {
            2.0 * w + h + (f.max.y - p.y)
        }
    }

    /// Frame corners passed walking the shorter way from `a` to `b`.
    fn perimeter_between(&self, a: Point2, b: Point2) -> Vec<Point2> {
        let f = &self.frame;
        let (w, h) = (f.width(), f.height());
        let total = 2.0 * (w + h);
        let corners = [
            (0.0, f.min),
            (w, Point2::new(f.max.x, f.min.y)),
            (w + h, f.max),
            (2.0 * w + h, Point2::new(f.min.x, f.max.y)),
        ];
        let (pa, pb) = (self.perimeter_coord(a), self.perimeter_coord(b));
        let ccw = crate::math::rem_euclid(pb - pa, total);
        let mut out = Vec::new();
        if ccw <= total - ccw {
            let mut passed: Vec<(f64, Point2)> = corners
                .iter()
                .map(|&(c, p)| (crate::math::rem_euclid(c - pa, total), p))
                .filter(|&(d, _)| d > 0.0 && d < ccw)
                .collect();
            passed.sort_by(|x, y| x.0.total_cmp(&y.0));
            out.extend(passed.into_iter().map(|x| x.1));
        } else {
            let cw = total - ccw;
            let mut passed: Vec<(f64, Point2)> = corners
                .iter()
                .map(|&(c, p)| (crate::math::rem_euclid(pa - c, total), p))
                .filter(|&(d, _)| d > 0.0 && d < cw)
                .collect();
            passed.sort_by(|x, y| x.0.total_cmp(&y.0));
            out.extend(passed.into_iter().map(|x| x.1));
        }
        out
    }

    /// A polyline that encodes to `c` (after simplification), laid through
    /// centroids, anchors and off-board detours.
    pub fn lay_configuration(&self, c: &Configuration) -> Result<DooPolyline, WorldError> {
        validate(c, &self.graph).map_err(WorldError::InvalidConfiguration)?;
        let stops: Vec<Stop> = c.as_slice().iter().map(|&v| Stop::new(v)).collect();
        let laid = lay(self, &stops)?;
        let mut doo = DooPolyline::new(laid.points);
        doo.tunnel_tags = laid.tags.into_iter().map(|(segment, tunnel)| TunnelTag { segment, tunnel }).collect();
        Ok(doo)
    }
}

/// Grasp the DOO over arc lengths `[s0, s1]` and re-lay that portion as
/// straight segments through `waypoints`. A range starting at 0 or ending at
/// the full length moves that end of the DOO.
#[derive(Clone, Debug, PartialEq)]
pub struct PickPlaceCommand {
    pub grasp_range: (f64, f64),
    pub waypoints: Vec<Point2>,
    /// Tags on `waypoints[k] → waypoints[k + 1]` segments.
    pub tunnel_tags: Vec<TunnelTag>,
}

#[derive(Clone, Debug)]
pub struct World {
    pub board: Board,
    pub doo: DooPolyline,
    pub sample_step: f64,
}

const ARC_TOL: f64 = 1e-12;

impl World {
    pub fn new(board: Board, doo: DooPolyline) -> Result<World, WorldError> {
        let world = World { board, doo, sample_step: DEFAULT_SAMPLE_STEP };
        world.configuration()?;
        Ok(world)
    }

    /// Raw and simplified configuration of the DOO, with provenance.
    pub fn trace(&self) -> Result<EncodeTrace, WorldError> {
        let t = self.board.encode(&self.doo, self.sample_step)?;
        validate(&t.raw, &self.board.graph).map_err(WorldError::InvalidConfiguration)?;
        Ok(t)
    }

    /// The simplified configuration.
    pub fn configuration(&self) -> Result<Configuration, WorldError> {
        Ok(self.trace()?.simplified)
    }

    /// Turns a routing action planned on the simplified configuration into a
    /// pick-and-place command. The retained ends are cut inside the regions
    /// bordering the span; if the local splice would not encode as planned,
    /// the whole DOO is re-laid instead.
    pub fn realize_action(&self, action: &RoutingAction) -> Result<PickPlaceCommand, WorldError> {
        let trace = self.trace()?;
        let c = &trace.simplified;
        let projected = project(c, action)?;
        let expected = simplify(&projected);
        if let Some(cmd) = self.local_command(&trace, action)? {
            if let Ok(next) = self.apply_command(&cmd) {
                if next.configuration().ok().as_ref() == Some(&expected) {
                    return Ok(cmd);
                }
            }
        }
        let doo = self.board.lay_configuration(&projected)?;
        Ok(PickPlaceCommand { grasp_range: (0.0, self.doo.length()), waypoints: doo.points, tunnel_tags: doo.tunnel_tags })
    }

    /// A sample deep enough inside a region to cut the DOO at.
    fn cut_sample(&self, trace: &EncodeTrace, raw_run: usize) -> Option<(f64, Point2)> {
        let run = trace.runs[raw_run];
        if run.kind != RunKind::Sampled || run.vertex.is_outside() {
            return None;
        }
        let s = trace.samples[(run.first + run.last) / 2];
        let region = self.board.regions.get(usize::try_from(run.vertex.0).ok()?)?;
        let inside = s.arc > ARC_TOL && s.arc < self.doo.length() - ARC_TOL && region.clearance(s.point) > 1e-7;
        inside.then_some((s.arc, s.point))
    }

    fn local_command(&self, trace: &EncodeTrace, action: &RoutingAction) -> Result<Option<PickPlaceCommand>, WorldError> {
        let c = trace.simplified.as_slice();
        let mut middle: Vec<Stop> = action.replacement.iter().map(|&v| Stop::new(v)).collect();

        let mut k = action.span_start;
        let mut head = None;
        while k > 0 {
            let (_, last) = trace.groups[k - 1];
            if trace.runs[last].vertex == c[k - 1] {
                if let Some(cut) = self.cut_sample(trace, last) {
                    head = Some((c[k - 1], cut));
                    break;
                }
            }
            middle.insert(0, Stop::new(c[k - 1]));
            k -= 1;
        }
        let mut m = action.span_end;
        let mut tail = None;
        while m < c.len() {
            let (_, last) = trace.groups[m];
            if trace.runs[last].vertex == c[m] {
                if let Some(cut) = self.cut_sample(trace, last) {
                    tail = Some((c[m], cut));
                    break;
                }
            }
            middle.push(Stop::new(c[m]));
            m += 1;
        }
        if let (Some((_, h)), Some((_, t))) = (head, tail) {
            if h.0 > t.0 {
                return Ok(None);
            }
        }

        let mut stops = Vec::with_capacity(middle.len() + 2);
        if let Some((v, (_, p))) = head {
            stops.push(Stop::at(v, p));
        }
        stops.extend(middle);
        if let Some((v, (_, p))) = tail {
            stops.push(Stop::at(v, p));
        }
        let Ok(laid) = lay(&self.board, &stops) else {
            return Ok(None);
        };
        let lo = usize::from(head.is_some());
        let hi = laid.points.len() - usize::from(tail.is_some());
        if lo > hi {
            return Ok(None);
        }
        let waypoints = laid.points[lo..hi].to_vec();
        let mut tunnel_tags = Vec::with_capacity(laid.tags.len());
        for (segment, tunnel) in laid.tags {
            if segment < lo || segment + 1 >= hi {
                return Ok(None);
            }
            tunnel_tags.push(TunnelTag { segment: segment - lo, tunnel });
        }
        let s0 = head.map_or(0.0, |(_, (arc, _))| arc);
        let s1 = tail.map_or(self.doo.length(), |(_, (arc, _))| arc);
        Ok(Some(PickPlaceCommand { grasp_range: (s0, s1), waypoints, tunnel_tags }))
    }

    /// The world after executing `cmd`.
    pub fn apply_command(&self, cmd: &PickPlaceCommand) -> Result<World, WorldError> {
        let doo = splice(&self.doo, cmd)?;
        let world = World { board: self.board.clone(), doo, sample_step: self.sample_step };
        world.trace()?;
        Ok(world)
    }

    /// Replaces the DOO, keeping the board.
    pub fn with_doo(&self, doo: DooPolyline) -> Result<World, WorldError> {
        World::new(self.board.clone(), doo).map(|w| World { sample_step: self.sample_step, ..w })
    }
}

fn splice(doo: &DooPolyline, cmd: &PickPlaceCommand) -> Result<DooPolyline, WorldError> {
    let (s0, s1) = cmd.grasp_range;
    let len = doo.length();
    if !(s0.is_finite() && s1.is_finite()) || s0 < -ARC_TOL || s1 > len + ARC_TOL || s0 > s1 {
        return Err(WorldError::DegenerateSplice("grasp range outside the DOO"));
    }
    if cmd.waypoints.iter().any(|p| !p.is_finite()) {
        return Err(WorldError::DegenerateSplice("non-finite waypoint"));
    }
    let arcs = doo.arc_lengths();
    let n = doo.points.len();
    let cut_tag = |s: f64| {
        doo.tunnel_tags.iter().any(|t| arcs[t.segment] < s - ARC_TOL && arcs[t.segment + 1] > s + ARC_TOL)
    };
    if cut_tag(s0) || cut_tag(s1) {
        return Err(WorldError::DegenerateSplice("grasp boundary inside a tunnel"));
    }

    // each point with the tag of the segment arriving at it
    let mut pts: Vec<(Point2, Option<u32>)> = Vec::with_capacity(n + cmd.waypoints.len() + 2);
    if s0 > ARC_TOL {
        for i in 0..n {
            if arcs[i] < s0 - ARC_TOL {
                pts.push((doo.points[i], if i > 0 { doo.tag_of(i - 1) } else { None }));
            } else {
                let tag = if arcs[i] <= s0 + ARC_TOL && i > 0 { doo.tag_of(i - 1) } else { None };
                pts.push((doo.point_at(s0), tag));
                break;
            }
        }
    }
    for (k, &p) in cmd.waypoints.iter().enumerate() {
        let tag = k.checked_sub(1).and_then(|j| cmd.tunnel_tags.iter().find(|t| t.segment == j)).map(|t| t.tunnel);
        pts.push((p, tag));
    }
    if s1 < len - ARC_TOL {
        pts.push((doo.point_at(s1), None));
        for i in 0..n {
            if arcs[i] > s1 + ARC_TOL {
                let tag = if arcs[i - 1] >= s1 - ARC_TOL { doo.tag_of(i - 1) } else { None };
                pts.push((doo.points[i], tag));
            }
        }
    }

    let mut out = DooPolyline::default();
    for (p, tag) in pts {
        if out.points.last().is_some_and(|q| q.distance(p) <= 1e-12) {
            if tag.is_some() {
                return Err(WorldError::DegenerateSplice("zero-length tunnel segment"));
            }
            continue;
        }
        if let Some(tunnel) = tag {
            if !out.points.is_empty() {
                out.tunnel_tags.push(TunnelTag { segment: out.points.len() - 1, tunnel });
            }
        }
        out.points.push(p);
    }
    if out.points.len() < 2 {
        return Err(WorldError::DegenerateSplice("fewer than two points"));
    }
    Ok(out)
}
