//! Hertel-Mehlhorn style merging: drop diagonals between neighbouring convex
//! pieces while the union stays convex.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{ConvexRegion, Point2, Polygon};

fn key(p: Point2) -> (u64, u64) {
    // +0.0 and -0.0 must map to the same vertex
    ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits())
}

fn find_edge(poly: &[usize], from: usize, to: usize) -> Option<usize> {
    let n = poly.len();
    (0..n).find(|&i| poly[i] == from && poly[(i + 1) % n] == to)
}

/// Joins `a` and `b` across the edge `a[i] → a[i+1]` (`b[j] → b[j+1]` reversed).
fn joined(a: &[usize], i: usize, b: &[usize], j: usize) -> Vec<usize> {
    let (na, nb) = (a.len(), b.len());
    let mut out = Vec::with_capacity(na + nb - 2);
    // a from a[i+1] around to a[i]
    out.extend((1..=na).map(|k| a[(i + k) % na]));
    // b strictly between b[j+1] (== a[i]) and b[j] (== a[i+1])
    out.extend((2..nb).map(|k| b[(j + k) % nb]));
    out
}

/// Greedily merges counter-clockwise triangles (or any convex pieces that
/// share exact vertices) into larger convex regions, ids dense from 0.
pub fn merge_convex(triangles: &[Polygon]) -> Vec<ConvexRegion> {
    let mut ids: BTreeMap<(u64, u64), usize> = BTreeMap::new();
    let mut points: Vec<Point2> = Vec::new();
    let mut polys: Vec<Vec<usize>> = triangles
        .iter()
        .map(|t| {
            t.vertices()
                .iter()
                .map(|&p| {
                    *ids.entry(key(p)).or_insert_with(|| {
                        points.push(p);
                        points.len() - 1
                    })
                })
                .collect()
        })
        .collect();

    let convex = |poly: &[usize]| {
        Polygon::new(poly.iter().map(|&i| points[i]).collect()).is_convex().unwrap_or(false)
    };

    let mut changed = true;
    while changed {
        changed = false;
        'scan: for i in 0..polys.len() {
            for e in 0..polys[i].len() {
                let n = polys[i].len();
                let (u, v) = (polys[i][e], polys[i][(e + 1) % n]);
                for j in 0..polys.len() {
                    if j == i {
                        continue;
                    }
                    if let Some(f) = find_edge(&polys[j], v, u) {
                        let merged = joined(&polys[i], e, &polys[j], f);
                        if convex(&merged) {
                            polys[i] = merged;
                            polys.remove(j);
                            changed = true;
                            break 'scan;
                        }
                    }
                }
            }
        }
    }

    polys
        .into_iter()
        .enumerate()
        .map(|(id, p)| ConvexRegion::new(id, Polygon::new(p.into_iter().map(|i| points[i]).collect())))
        .collect()
}
