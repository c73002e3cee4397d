use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lay::{lay, Laid, Stop};
use super::{Board, WorldError};
use crate::configuration::{validate, DooPolyline, TunnelTag};
use crate::geometry::Point2;
use crate::graph::{VertexId, VertexKind};

const ATTEMPTS: usize = 100;
const MAX_STOPS: usize = 512;

/// A random DOO on `board` with arc length in `length_range` (±10%).
///
/// The DOO follows a random walk over adjacent regions, never stepping off
/// the board, through points jittered around region centroids by up to a
/// quarter of the centroid's clearance. Stepping into a tunnel entrance
/// always carries on through the tunnel. The walk is laid out and cut at a
/// length drawn uniformly from the range.
pub fn random_polyline(board: &Board, length_range: (f64, f64), seed: u64) -> Result<DooPolyline, WorldError> {
    random_polyline_with(board, length_range, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_polyline_with<R: Rng + ?Sized>(
    board: &Board,
    length_range: (f64, f64),
    rng: &mut R,
) -> Result<DooPolyline, WorldError> {
    let (min, max) = length_range;
    if !(min > 0.0 && min <= max && max.is_finite()) || board.regions.is_empty() {
        return Err(WorldError::GenerationFailure(0));
    }
    for _ in 0..ATTEMPTS {
        let target = if min == max { min } else { rng.random_range(min..=max) };
        let Some(doo) = attempt(board, target, rng) else {
            continue;
        };
        let len = doo.length();
        if len < 0.9 * min || len > 1.1 * max {
            continue;
        }
        let ok = board
            .encode(&doo, crate::configuration::DEFAULT_SAMPLE_STEP)
            .is_ok_and(|t| validate(&t.raw, &board.graph).is_ok());
        if ok {
            return Ok(doo);
        }
    }
    Err(WorldError::GenerationFailure(ATTEMPTS))
}

fn jittered<R: Rng + ?Sized>(board: &Board, r: usize, rng: &mut R) -> Point2 {
    let region = &board.regions[r];
    let c = region.centroid;
    let h = 0.25 * region.clearance(c);
    if h <= 0.0 {
        return c;
    }
    c + Point2::new(rng.random_range(-h..=h), rng.random_range(-h..=h))
}

fn attempt<R: Rng + ?Sized>(board: &Board, target: f64, rng: &mut R) -> Option<DooPolyline> {
    let g = &board.graph;
    let start = rng.random_range(0..board.regions.len());
    let mut stops = alloc::vec![Stop::at(VertexId::region(start), jittered(board, start, rng))];
    let mut prev: Option<VertexId> = None;
    let laid = loop {
        let laid = lay(board, &stops).ok()?;
        if length(&laid) >= target {
            break laid;
        }
        if stops.len() >= MAX_STOPS {
            return None;
        }
        let cur = stops.last().unwrap().vertex;
        let next = match *g.kind(cur).ok()? {
            VertexKind::TunnelEntrance { host, .. } => {
                let twin = g.twin(cur)?;
                if prev == Some(twin) {
                    host
                } else {
                    twin
                }
            }
            _ => {
                let options: Vec<VertexId> = g
                    .neighbors(cur)
                    .ok()?
                    .iter()
                    .copied()
                    .filter(|&v| !v.is_outside())
                    .filter(|&v| match g.kind(v) {
                        Ok(VertexKind::TunnelEntrance { host, .. }) => *host == cur,
                        _ => true,
                    })
                    .collect();
                let fresh: Vec<VertexId> = options.iter().copied().filter(|&v| Some(v) != prev).collect();
                let pool = if fresh.is_empty() { &options } else { &fresh };
                if pool.is_empty() {
                    return None;
                }
                pool[rng.random_range(0..pool.len())]
            }
        };
        let stop = match *g.kind(next).ok()? {
            VertexKind::Region(r) => Stop::at(next, jittered(board, r, rng)),
            _ => Stop::new(next),
        };
        prev = Some(cur);
        stops.push(stop);
    };
    truncate(laid, target)
}

fn length(laid: &Laid) -> f64 {
    laid.points.windows(2).map(|w| w[0].distance(w[1])).sum()
}

/// The first `target` metres of `laid`. A cut inside a tunnel moves to the
/// nearer anchor.
fn truncate(laid: Laid, target: f64) -> Option<DooPolyline> {
    let mut doo = DooPolyline::new(Vec::new());
    let mut acc = 0.0;
    doo.points.push(*laid.points.first()?);
    for (i, w) in laid.points.windows(2).enumerate() {
        let seg = w[0].distance(w[1]);
        let tag = laid.tags.iter().find(|t| t.0 == i).map(|t| t.1);
        if acc + seg < target {
            if let Some(tunnel) = tag {
                doo.tunnel_tags.push(TunnelTag { segment: i, tunnel });
            }
            doo.points.push(w[1]);
            acc += seg;
            continue;
        }
        let rest = target - acc;
        match tag {
            Some(tunnel) if rest >= seg - rest => {
                doo.tunnel_tags.push(TunnelTag { segment: i, tunnel });
                doo.points.push(w[1]);
            }
            Some(_) => {}
            None if rest > 1e-9 => doo.points.push(w[0].lerp(w[1], rest / seg)),
            None => {}
        }
        break;
    }
    (doo.points.len() >= 2).then_some(doo)
}
