//! Fixtures and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use doo_route_core::configuration::validate;
use doo_route_core::geometry::validate_layout;
use doo_route_core::graph::VertexKind;
use doo_route_core::router::{bidirectional_distance, next_action, project};
use doo_route_core::world::{bundled_board, Board};
use doo_route_core::{Configuration, Layout, PlanOutcome, Point2, Polygon, SpatialGraph, TunnelSpec, VertexId};
use rand::Rng;

pub fn fix_a() -> Board {
    let l = Layout::new(Polygon::rect(0.0, 0.0, 10.0, 10.0))
        .with_regions(vec![Polygon::rect(0.0, 0.0, 5.0, 10.0), Polygon::rect(5.0, 0.0, 10.0, 10.0)]);
    Board::new(validate_layout(l).unwrap()).unwrap()
}

pub fn fix_b() -> Board {
    let l = Layout::new(Polygon::rect(0.0, 0.0, 2.0, 2.0))
        .with_regions(vec![
            Polygon::rect(0.0, 0.0, 1.0, 1.0),
            Polygon::rect(1.0, 0.0, 2.0, 1.0),
            Polygon::rect(0.0, 1.0, 1.0, 2.0),
            Polygon::rect(1.0, 1.0, 2.0, 2.0),
        ])
        .with_tunnels(vec![TunnelSpec { id: 0, entrance_a: Point2::new(0.5, 0.5), entrance_b: Point2::new(1.5, 1.5) }]);
    Board::new(validate_layout(l).unwrap()).unwrap()
}

pub fn bundled() -> Board {
    Board::new(validate_layout(bundled_board()).unwrap()).unwrap()
}

/// The same bundled layout, decomposed from scratch instead of predecomposed.
pub fn bundled_undecomposed() -> Board {
    let mut l = bundled_board();
    l.predecomposed = None;
    Board::new(validate_layout(l).unwrap()).unwrap()
}

pub fn cfg(ids: &[i32]) -> Configuration {
    Configuration::from_ids(ids)
}

// ---- edit distance ----

/// Plain recursion over the three edit choices, no table.
pub fn levenshtein_oracle(a: &[i32], b: &[i32]) -> usize {
    match (a.split_last(), b.split_last()) {
        (None, _) => b.len(),
        (_, None) => a.len(),
        (Some((x, ra)), Some((y, rb))) => {
            let sub = levenshtein_oracle(ra, rb) + usize::from(x != y);
            let del = levenshtein_oracle(ra, b) + 1;
            let ins = levenshtein_oracle(a, rb) + 1;
            sub.min(del).min(ins)
        }
    }
}

pub fn random_seq<R: Rng>(rng: &mut R, max_len: usize, alphabet: i32) -> Vec<i32> {
    let n = rng.random_range(0..=max_len);
    (0..n).map(|_| rng.random_range(0..alphabet)).collect()
}

// ---- random graphs ----

/// Random connected graph with `n` vertices including the outside: a random
/// spanning tree plus extra edges.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize) -> SpatialGraph {
    let mut kinds = vec![VertexKind::Outside];
    kinds.extend((0..n - 1).map(VertexKind::Region));
    let mut edges = Vec::new();
    for i in 1..n as i32 {
        let j = rng.random_range(0..i);
        edges.push((VertexId(i - 1), VertexId(j - 1)));
    }
    let p = rng.random_range(0.0..0.5);
    for i in 0..n as i32 {
        for j in i + 1..n as i32 {
            if rng.random_bool(p) {
                edges.push((VertexId(i - 1), VertexId(j - 1)));
            }
        }
    }
    SpatialGraph::from_parts(kinds, edges).unwrap()
}

/// A random walk of 1..=max_len vertices.
pub fn random_walk<R: Rng>(rng: &mut R, g: &SpatialGraph, max_len: usize) -> Configuration {
    let verts: Vec<VertexId> = g.vertices().collect();
    let mut v = verts[rng.random_range(0..verts.len())];
    let mut seq = vec![v];
    for _ in 1..rng.random_range(1..=max_len) {
        let nb = g.neighbors(v).unwrap();
        v = nb[rng.random_range(0..nb.len())];
        seq.push(v);
    }
    Configuration::new(seq)
}

/// Iterates planning and projection until done, checking every step.
/// Returns the number of actions.
pub fn drive(g: &SpatialGraph, start: &Configuration, goal: &Configuration) -> Result<usize, String> {
    let mut c = start.clone();
    let mut d = bidirectional_distance(&c, goal);
    let limit = d;
    for steps in 0..=limit {
        match next_action(&c, goal, g).map_err(|e| format!("{c} -> {goal}: {e}"))? {
            PlanOutcome::Done => {
                return if d == 0 { Ok(steps) } else { Err(format!("Done at distance {d} for {c} -> {goal}")) };
            }
            PlanOutcome::Next { action, .. } => {
                let next = project(&c, &action).map_err(|e| e.to_string())?;
                validate(&next, g).map_err(|i| format!("{c} -> {next} invalid at {i}"))?;
                let nd = bidirectional_distance(&next, goal);
                if nd >= d || nd != action.expected_distance_after {
                    return Err(format!("{c} -> {next}: distance {d} -> {nd}, expected {}", action.expected_distance_after));
                }
                c = next;
                d = nd;
            }
        }
    }
    Err(format!("no termination for {start} -> {goal}"))
}

// ---- geometry ----

pub fn shoelace(pts: &[Point2]) -> f64 {
    let n = pts.len();
    (0..n).map(|i| pts[i].x * pts[(i + 1) % n].y - pts[(i + 1) % n].x * pts[i].y).sum::<f64>() / 2.0
}

fn side(a: Point2, b: Point2, p: Point2) -> f64 {
    (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)
}

fn ccw(pts: &[Point2]) -> Vec<Point2> {
    let mut v = pts.to_vec();
    if shoelace(&v) < 0.0 {
        v.reverse();
    }
    v
}

/// Sutherland-Hodgman intersection area of two convex polygons.
pub fn overlap_area(a: &[Point2], b: &[Point2]) -> f64 {
    let mut out = ccw(a);
    let clip = ccw(b);
    for i in 0..clip.len() {
        let (c0, c1) = (clip[i], clip[(i + 1) % clip.len()]);
        let input = std::mem::take(&mut out);
        for j in 0..input.len() {
            let (p, q) = (input[j], input[(j + 1) % input.len()]);
            let (sp, sq) = (side(c0, c1, p), side(c0, c1, q));
            if sp >= 0.0 {
                out.push(p);
            }
            if (sp >= 0.0) != (sq >= 0.0) {
                let t = sp / (sp - sq);
                out.push(Point2::new(p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)));
            }
        }
        if out.is_empty() {
            return 0.0;
        }
    }
    shoelace(&out).abs()
}

pub fn convex_by_cross(pts: &[Point2]) -> bool {
    let n = pts.len();
    let mut sign = 0.0f64;
    for i in 0..n {
        let c = side(pts[i], pts[(i + 1) % n], pts[(i + 2) % n]);
        if c.abs() <= 1e-12 {
            continue;
        }
        if sign == 0.0 {
            sign = c.signum();
        } else if c.signum() != sign {
            return false;
        }
    }
    true
}

pub fn in_convex(pts: &[Point2], p: Point2) -> bool {
    let pts = ccw(pts);
    (0..pts.len()).all(|i| side(pts[i], pts[(i + 1) % pts.len()], p) >= -1e-12)
}

pub fn segment_distance(a: Point2, b: Point2, p: Point2) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let l2 = dx * dx + dy * dy;
    let t = if l2 == 0.0 { 0.0 } else { (((p.x - a.x) * dx + (p.y - a.y) * dy) / l2).clamp(0.0, 1.0) };
    let (cx, cy) = (a.x + t * dx, a.y + t * dy);
    ((p.x - cx).powi(2) + (p.y - cy).powi(2)).sqrt()
}

/// Distance from `p` to the nearest edge of any region, hole or the boundary.
pub fn edge_clearance(board: &Board, p: Point2) -> f64 {
    let rings = board
        .regions
        .iter()
        .map(|r| r.polygon.vertices())
        .chain(board.layout.holes.iter().map(|h| h.vertices()))
        .chain(std::iter::once(board.layout.boundary.vertices()));
    let mut best = f64::INFINITY;
    for ring in rings {
        for i in 0..ring.len() {
            best = best.min(segment_distance(ring[i], ring[(i + 1) % ring.len()], p));
        }
    }
    best
}

/// Lowest-id region whose closed polygon holds `p`, else the outside.
pub fn locate_oracle(board: &Board, p: Point2) -> i32 {
    board
        .regions
        .iter()
        .position(|r| in_convex(r.polygon.vertices(), p))
        .map_or(-1, |i| i as i32)
}

// ---- graph rules ----

/// Length of the collinear overlap of two segments, 0 when not collinear.
fn collinear_overlap(a0: Point2, a1: Point2, b0: Point2, b1: Point2) -> f64 {
    let len = ((a1.x - a0.x).powi(2) + (a1.y - a0.y).powi(2)).sqrt();
    if len == 0.0 {
        return 0.0;
    }
    let off = |p: Point2| side(a0, a1, p).abs() / len;
    if off(b0) > 1e-9 || off(b1) > 1e-9 {
        return 0.0;
    }
    let t = |p: Point2| ((p.x - a0.x) * (a1.x - a0.x) + (p.y - a0.y) * (a1.y - a0.y)) / len;
    let (t0, t1) = (t(b0), t(b1));
    (t0.max(t1).min(len) - t0.min(t1).max(0.0)).max(0.0)
}

fn share_side(a: &[Point2], b: &[Point2]) -> bool {
    (0..a.len()).any(|i| {
        (0..b.len()).any(|j| collinear_overlap(a[i], a[(i + 1) % a.len()], b[j], b[(j + 1) % b.len()]) > 1e-6)
    })
}

/// Edge set from the four adjacency rules, applied pair by pair.
pub fn brute_force_edges(board: &Board) -> BTreeSet<(i32, i32)> {
    let mut e = BTreeSet::new();
    let polys: Vec<&[Point2]> = board.regions.iter().map(|r| r.polygon.vertices()).collect();
    let k = polys.len() as i32;
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            if share_side(polys[i], polys[j]) {
                e.insert((i as i32, j as i32));
            }
        }
        if share_side(polys[i], board.layout.boundary.vertices()) {
            e.insert((-1, i as i32));
        }
    }
    for (t, tunnel) in board.layout.tunnels.iter().enumerate() {
        let va = k + 2 * t as i32;
        let vb = va + 1;
        e.insert((va, vb));
        for (v, anchor) in [(va, tunnel.entrance_a), (vb, tunnel.entrance_b)] {
            let host = locate_oracle(board, anchor);
            e.insert((host.min(v), host.max(v)));
        }
    }
    e
}

pub fn graph_edges(g: &SpatialGraph) -> BTreeSet<(i32, i32)> {
    g.edges().into_iter().map(|(u, v)| (u.0.min(v.0), u.0.max(v.0))).collect()
}

// ---- whole-board checks ----

/// Area conservation (relative 1e-6), pairwise overlap below 1e-9 and
/// convexity of every region.
pub fn check_tiling(board: &Board) -> Result<(), String> {
    let l = &board.layout;
    let free = shoelace(l.boundary.vertices()).abs() - l.holes.iter().map(|h| shoelace(h.vertices()).abs()).sum::<f64>();
    let total: f64 = board.regions.iter().map(|r| shoelace(r.polygon.vertices()).abs()).sum();
    if (total - free).abs() > 1e-6 * free {
        return Err(format!("region area {total} vs free area {free}"));
    }
    for (i, r) in board.regions.iter().enumerate() {
        if !convex_by_cross(r.polygon.vertices()) {
            return Err(format!("region {i} is not convex"));
        }
        for (j, s) in board.regions.iter().enumerate().skip(i + 1) {
            let o = overlap_area(r.polygon.vertices(), s.polygon.vertices());
            if o >= 1e-9 {
                return Err(format!("regions {i} and {j} overlap by {o}"));
            }
        }
        for (h, hole) in l.holes.iter().enumerate() {
            // holes need not be convex; sample the region interior instead
            let c = r.polygon.centroid();
            if hole.strictly_contains(c) {
                return Err(format!("region {i} lies in hole {h}"));
            }
        }
    }
    Ok(())
}

/// Samples `n` points over the board's bounding box (plus a margin) and
/// compares `locate` with brute-force membership. Points within `1e-7` of an
/// edge are skipped. Returns (checked, mismatches).
pub fn locate_agreement<R: Rng>(board: &Board, rng: &mut R, n: usize) -> (usize, Vec<String>) {
    let bb = board.layout.boundary.bbox();
    let m = 0.1 * bb.width().max(bb.height());
    let (mut checked, mut bad) = (0, Vec::new());
    for _ in 0..n {
        let p = Point2::new(rng.random_range(bb.min.x - m..bb.max.x + m), rng.random_range(bb.min.y - m..bb.max.y + m));
        if edge_clearance(board, p) <= 1e-7 {
            continue;
        }
        checked += 1;
        let got = doo_route_core::geometry::locate(p, &board.regions, &board.layout).0;
        let want = locate_oracle(board, p);
        if got != want {
            bad.push(format!("({}, {}): locate {got}, oracle {want}", p.x, p.y));
        }
    }
    (checked, bad)
}
