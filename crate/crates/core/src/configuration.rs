//! Discrete configurations: the ordered vertex sequence a cable passes
//! through, and the encoder that derives it from a geometric polyline.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::geometry::{locate, ConvexRegion, Point2, ValidatedLayout, EPS};
use crate::graph::{EntranceEnd, GraphError, SpatialGraph, VertexId, VertexKind};
use crate::math;

/// Default encoder sampling step in meters.
pub const DEFAULT_SAMPLE_STEP: f64 = 1e-3;
/// How close a tagged segment endpoint must be to its tunnel anchor.
pub const SNAP_TOL: f64 = 1e-3;

/// Ordered sequence of graph vertices. Validity is relative to a graph; see
/// [`validate`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Configuration(Vec<VertexId>);

impl Configuration {
    pub fn new(seq: Vec<VertexId>) -> Self {
        Configuration(seq)
    }

    pub fn from_ids(ids: &[i32]) -> Self {
        Configuration(ids.iter().map(|&i| VertexId(i)).collect())
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn ids(&self) -> Vec<i32> {
        self.0.iter().map(|v| v.0).collect()
    }

    pub fn into_inner(self) -> Vec<VertexId> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Configuration {
        reverse(self)
    }

    /// Collapses runs of equal consecutive vertices.
    pub fn dedup(mut self) -> Configuration {
        self.0.dedup();
        self
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("malformed configuration literal: {0}")]
pub struct ParseConfigurationError(String);

impl FromStr for Configuration {
    type Err = ParseConfigurationError;

    /// Accepts `(-1, 1, 27)`, `[-1,1,27]` or bare `-1 1 27`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner = match (t.chars().next(), t.chars().last()) {
            (Some('('), Some(')')) | (Some('['), Some(']')) => &t[1..t.len() - 1],
            (Some('(' | '['), _) | (_, Some(')' | ']')) => return Err(ParseConfigurationError(s.into())),
            _ => t,
        };
        inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|tok| !tok.is_empty())
            .map(|tok| tok.parse::<i32>().map(VertexId).map_err(|_| ParseConfigurationError(s.into())))
            .collect::<Result<Vec<_>, _>>()
            .map(Configuration)
    }
}

/// Removes slack touches: contiguous `(a, b, a)` becomes `(a)`, applied from
/// the left until no such triple remains.
pub fn simplify(c: &Configuration) -> Configuration {
    let mut out: Vec<VertexId> = Vec::with_capacity(c.len());
    for &v in &c.0 {
        out.push(v);
        while out.len() >= 3 && out[out.len() - 1] == out[out.len() - 3] {
            out.truncate(out.len() - 2);
        }
    }
    Configuration(out)
}

/// `Ok` when `c` is a nonempty walk on `g` without repeated consecutive
/// vertices; otherwise the index of the first violation.
pub fn validate(c: &Configuration, g: &SpatialGraph) -> Result<(), usize> {
    let s = &c.0;
    if s.is_empty() {
        return Err(0);
    }
    for i in 0..s.len() {
        if !g.contains(s[i]) {
            return Err(i);
        }
        if i + 1 < s.len() && (!g.contains(s[i + 1]) || !g.adjacent(s[i], s[i + 1])) {
            return Err(i);
        }
    }
    Ok(())
}

/// Whether every tunnel entrance in `c` has its twin right before or after
/// it. Only such configurations can be laid out by a physical DOO.
pub fn tunnels_paired(c: &Configuration, g: &SpatialGraph) -> bool {
    let s = &c.0;
    (0..s.len()).all(|i| match g.twin(s[i]) {
        None => true,
        Some(t) => (i > 0 && s[i - 1] == t) || s.get(i + 1) == Some(&t),
    })
}

pub fn reverse(c: &Configuration) -> Configuration {
    let mut v = c.0.clone();
    v.reverse();
    Configuration(v)
}

/// Equality up to reading direction.
pub fn bidirectional_equal(a: &Configuration, b: &Configuration) -> bool {
    a == b || (a.len() == b.len() && a.0.iter().eq(b.0.iter().rev()))
}

/// Marks segment `segment` of a polyline as running through tunnel `tunnel`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TunnelTag {
    pub segment: usize,
    pub tunnel: u32,
}

/// Geometric state of a cable: a polyline on the board, with the segments
/// that pass through tunnels tagged.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DooPolyline {
    pub points: Vec<Point2>,
    pub tunnel_tags: Vec<TunnelTag>,
}

impl DooPolyline {
    pub fn new(points: Vec<Point2>) -> Self {
        DooPolyline { points, tunnel_tags: Vec::new() }
    }

    pub fn from_coords(coords: &[(f64, f64)]) -> Self {
        DooPolyline::new(coords.iter().map(|&c| c.into()).collect())
    }

    pub fn with_tag(mut self, segment: usize, tunnel: u32) -> Self {
        self.tunnel_tags.push(TunnelTag { segment, tunnel });
        self.tunnel_tags.sort();
        self
    }

    pub fn tag_of(&self, segment: usize) -> Option<u32> {
        self.tunnel_tags.iter().find(|t| t.segment == segment).map(|t| t.tunnel)
    }

    pub fn segment_count(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    /// Cumulative arc length at each point.
    pub fn arc_lengths(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.points.len());
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                acc += self.points[i - 1].distance(*p);
            }
            out.push(acc);
        }
        out
    }

    pub fn length(&self) -> f64 {
        self.points.windows(2).map(|w| w[0].distance(w[1])).sum()
    }

    /// Point at arc length `s`, clamped to the ends.
    pub fn point_at(&self, s: f64) -> Point2 {
        let arcs = self.arc_lengths();
        match arcs.iter().position(|&a| a >= s) {
            None => *self.points.last().unwrap_or(&Point2::default()),
            Some(0) => self.points[0],
            Some(i) => {
                let span = arcs[i] - arcs[i - 1];
                let t = if span > 0.0 { (s - arcs[i - 1]) / span } else { 0.0 };
                self.points[i - 1].lerp(self.points[i], t)
            }
        }
    }

    /// Checks the polyline invariants and resolves each tag to the entrance
    /// vertices in traversal order.
    fn resolve_tags(&self, g: &SpatialGraph) -> Result<Vec<(usize, VertexId, VertexId)>, EncodeError> {
        if self.points.len() < 2 {
            return Err(EncodeError::EmptyPolyline);
        }
        for (i, p) in self.points.iter().enumerate() {
            if !p.is_finite() {
                return Err(EncodeError::NonFinite(i));
            }
            if i > 0 && self.points[i - 1].distance(*p) <= EPS {
                return Err(EncodeError::CoincidentPoints(i));
            }
        }
        let mut out = Vec::with_capacity(self.tunnel_tags.len());
        for (k, tag) in self.tunnel_tags.iter().enumerate() {
            let bad = EncodeError::BadTunnelTag { segment: tag.segment, tunnel: tag.tunnel };
            if tag.segment >= self.segment_count() || self.tunnel_tags[..k].iter().any(|t| t.segment == tag.segment) {
                return Err(bad);
            }
            let (Some(va), Some(vb)) = (g.entrance(tag.tunnel, EntranceEnd::A), g.entrance(tag.tunnel, EntranceEnd::B)) else {
                return Err(bad);
            };
            let anchor = |v| match g.kind(v) {
                Ok(VertexKind::TunnelEntrance { anchor, .. }) => *anchor,
                _ => unreachable!("entrance lookup returned a non-entrance"),
            };
            let (pa, pb) = (anchor(va), anchor(vb));
            let (s, e) = (self.points[tag.segment], self.points[tag.segment + 1]);
            if s.distance(pa) <= SNAP_TOL && e.distance(pb) <= SNAP_TOL {
                out.push((tag.segment, va, vb));
            } else if s.distance(pb) <= SNAP_TOL && e.distance(pa) <= SNAP_TOL {
                out.push((tag.segment, vb, va));
            } else {
                return Err(bad);
            }
        }
        Ok(out)
    }

    /// Validates the polyline against the tunnels of `g`.
    pub fn check(&self, g: &SpatialGraph) -> Result<(), EncodeError> {
        self.resolve_tags(g).map(|_| ())
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum EncodeError {
    #[error("EmptyPolyline: a polyline needs at least two points")]
    EmptyPolyline,
    #[error("point {0} is not finite")]
    NonFinite(usize),
    #[error("point {0} coincides with the previous point")]
    CoincidentPoints(usize),
    #[error("BadTunnelTag: segment {segment} tagged with tunnel {tunnel} does not join that tunnel's anchors")]
    BadTunnelTag { segment: usize, tunnel: u32 },
    #[error("sample step must be positive and finite")]
    BadSampleStep,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One located point along the polyline.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub arc: f64,
    pub point: Point2,
    pub vertex: VertexId,
    /// True for the two ends of a tagged tunnel segment.
    pub entrance: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunKind {
    /// Consecutive samples located in the same region (or outside).
    Sampled,
    /// A tunnel entrance reached through a tagged segment.
    Entrance,
    /// A vertex inserted to join two non-adjacent runs.
    Bridge,
}

/// A maximal stretch of the polyline mapped to one raw configuration entry.
/// `first..=last` index into [`EncodeTrace::samples`]; bridge runs point at
/// the last sample of the run before them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Run {
    pub vertex: VertexId,
    pub kind: RunKind,
    pub first: usize,
    pub last: usize,
}

/// Encoder output together with the provenance of every entry.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodeTrace {
    pub samples: Vec<Sample>,
    pub runs: Vec<Run>,
    pub raw: Configuration,
    pub simplified: Configuration,
    /// For each entry of `simplified`, the first and last raw run it absorbed.
    pub groups: Vec<(usize, usize)>,
}

/// Encodes `doo` as the raw (unsimplified) vertex sequence it passes through.
pub fn encode(
    doo: &DooPolyline,
    g: &SpatialGraph,
    regions: &[ConvexRegion],
    layout: &ValidatedLayout,
    sample_step: f64,
) -> Result<Configuration, EncodeError> {
    encode_traced(doo, g, regions, layout, sample_step).map(|t| t.raw)
}

/// Like [`encode`], also returning the simplified sequence and per-entry
/// sample provenance.
pub fn encode_traced(
    doo: &DooPolyline,
    g: &SpatialGraph,
    regions: &[ConvexRegion],
    layout: &ValidatedLayout,
    sample_step: f64,
) -> Result<EncodeTrace, EncodeError> {
    if !(sample_step > 0.0 && sample_step.is_finite()) {
        return Err(EncodeError::BadSampleStep);
    }
    let tags = doo.resolve_tags(g)?;
    let arcs = doo.arc_lengths();

    let mut samples = Vec::new();
    let mut prev_tagged = true;
    for i in 0..doo.segment_count() {
        let (p, q) = (doo.points[i], doo.points[i + 1]);
        if let Some(&(_, near, far)) = tags.iter().find(|t| t.0 == i) {
            samples.push(Sample { arc: arcs[i], point: p, vertex: near, entrance: true });
            samples.push(Sample { arc: arcs[i + 1], point: q, vertex: far, entrance: true });
            prev_tagged = true;
            continue;
        }
        let len = arcs[i + 1] - arcs[i];
        let n = (math::ceil(len / sample_step) as usize).max(1);
        let start = if prev_tagged { 0 } else { 1 };
        for k in start..=n {
            let t = k as f64 / n as f64;
            let point = if k == n { q } else { p.lerp(q, t) };
            let arc = arcs[i] + len * t;
            samples.push(Sample { arc, point, vertex: locate(point, regions, layout), entrance: false });
        }
        prev_tagged = false;
    }

    let mut runs: Vec<Run> = Vec::new();
    for (idx, s) in samples.iter().enumerate() {
        let kind = if s.entrance { RunKind::Entrance } else { RunKind::Sampled };
        match runs.last_mut() {
            Some(r) if r.vertex == s.vertex && r.kind == kind => r.last = idx,
            _ => runs.push(Run { vertex: s.vertex, kind, first: idx, last: idx }),
        }
    }
    // the same vertex reached as an entrance and then sampled cannot happen:
    // entrance vertices are never returned by locate
    let mut bridged: Vec<Run> = Vec::with_capacity(runs.len());
    for r in runs {
        if let Some(prev) = bridged.last().copied() {
            if prev.vertex == r.vertex {
                bridged.last_mut().unwrap().last = r.last;
                continue;
            }
            if !g.adjacent(prev.vertex, r.vertex) {
                let path = g.shortest_path(prev.vertex, r.vertex)?;
                for &v in &path[1..path.len() - 1] {
                    bridged.push(Run { vertex: v, kind: RunKind::Bridge, first: prev.last, last: prev.last });
                }
            }
        }
        bridged.push(r);
    }

    let raw = Configuration(bridged.iter().map(|r| r.vertex).collect());
    let (simplified, groups) = simplify_grouped(&raw);
    Ok(EncodeTrace { samples, runs: bridged, raw, simplified, groups })
}

/// [`simplify`] that also reports which raw entries each output entry absorbed.
fn simplify_grouped(c: &Configuration) -> (Configuration, Vec<(usize, usize)>) {
    let mut stack: Vec<(VertexId, usize, usize)> = Vec::with_capacity(c.len());
    for (i, &v) in c.0.iter().enumerate() {
        stack.push((v, i, i));
        while stack.len() >= 3 && stack[stack.len() - 1].0 == stack[stack.len() - 3].0 {
            let top = stack.pop().unwrap();
            stack.pop();
            stack.last_mut().unwrap().2 = top.2;
        }
    }
    let seq = stack.iter().map(|e| e.0).collect();
    (Configuration(seq), stack.into_iter().map(|e| (e.1, e.2)).collect())
}
