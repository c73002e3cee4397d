mod common;

use common::*;
use doo_route_core::configuration::{encode, reverse, simplify, tunnels_paired, validate};
use doo_route_core::world::{random_polyline_with, Board};
use doo_route_core::{Configuration, DooPolyline, Point2, VertexId};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every valid walk on `g` with 1..=max_len vertices.
fn all_walks(board: &Board, max_len: usize) -> Vec<Configuration> {
    let g = &board.graph;
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<VertexId>> = g.vertices().map(|v| vec![v]).collect();
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            out.push(Configuration::new(w.clone()));
            if w.len() < max_len {
                for &n in g.neighbors(*w.last().unwrap()).unwrap() {
                    let mut w2 = w.clone();
                    w2.push(n);
                    next.push(w2);
                }
            }
        }
        frontier = next;
    }
    out
}

#[test]
fn simplify_commutes_with_reverse_on_every_short_walk() {
    let b = fix_b();
    let walks = all_walks(&b, 6);
    assert!(walks.len() > 1_000, "{}", walks.len());
    for c in &walks {
        assert_eq!(validate(c, &b.graph), Ok(()));
        assert_eq!(reverse(&reverse(c)), *c);
        let s = simplify(c);
        assert_eq!(simplify(&reverse(c)), reverse(&s), "{c}");
        assert_eq!(simplify(&s), s);
        assert_eq!(s.as_slice().first(), c.as_slice().first());
        assert_eq!(s.as_slice().last(), c.as_slice().last());
        assert_eq!(validate(&s, &b.graph), Ok(()), "{c} -> {s}");
    }
}

#[test]
fn long_sequence_literal() {
    let c: Configuration = "(-1, 1, 27, 28, 11, 4, 1, 6, 4, 15, 6, 9, -1)".parse().unwrap();
    assert_eq!(c.ids(), vec![-1, 1, 27, 28, 11, 4, 1, 6, 4, 15, 6, 9, -1]);
    assert_eq!(simplify(&c), c);
    assert_eq!(c.to_string().parse::<Configuration>().unwrap(), c);
    assert!("(-1, 1".parse::<Configuration>().is_err());
    assert!("(1, x)".parse::<Configuration>().is_err());
}

fn check_encoding(board: &Board, doo: &DooPolyline) -> Result<(), String> {
    let t = board.encode(doo, 1e-3).map_err(|e| e.to_string())?;
    validate(&t.raw, &board.graph).map_err(|i| format!("raw {} invalid at {i}", t.raw))?;
    validate(&t.simplified, &board.graph).map_err(|i| format!("simplified {} invalid at {i}", t.simplified))?;
    if simplify(&t.raw) != t.simplified || simplify(&t.simplified) != t.simplified {
        return Err(format!("simplify mismatch on {}", t.raw));
    }
    if t.simplified.as_slice().first() != t.raw.as_slice().first() || t.simplified.as_slice().last() != t.raw.as_slice().last() {
        return Err(format!("endpoints moved: {} -> {}", t.raw, t.simplified));
    }
    Ok(())
}

/// Straight segments between points drawn anywhere around the board,
/// crossing holes and leaving the board at will.
fn wild_polyline<R: Rng>(rng: &mut R, board: &Board) -> DooPolyline {
    let bb = board.layout.boundary.bbox();
    let m = 0.1 * bb.width();
    let n = rng.random_range(2..=6);
    DooPolyline::new(
        (0..n)
            .map(|_| Point2::new(rng.random_range(bb.min.x - m..bb.max.x + m), rng.random_range(bb.min.y - m..bb.max.y + m)))
            .collect(),
    )
}

#[test]
fn thousand_random_polylines_encode_valid() {
    let bundled = bundled();
    let b = fix_b();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();
    for i in 0..1000 {
        let (board, doo) = match i % 4 {
            0 | 1 => (&bundled, random_polyline_with(&bundled, (0.3, 0.5), &mut rng).unwrap()),
            2 => (&bundled, wild_polyline(&mut rng, &bundled)),
            _ => (&b, random_polyline_with(&b, (1.5, 3.0), &mut rng).unwrap()),
        };
        if let Err(e) = check_encoding(board, &doo) {
            failures.push(format!("#{i}: {e}"));
        }
    }
    assert!(failures.is_empty(), "{} failures: {:?}", failures.len(), &failures[..failures.len().min(5)]);
}

#[test]
fn encoded_walks_pair_their_tunnels() {
    let b = fix_b();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..200 {
        let doo = random_polyline_with(&b, (1.5, 3.0), &mut rng).unwrap();
        assert!(tunnels_paired(&b.encode(&doo, 1e-3).unwrap().simplified, &b.graph));
    }
}

#[test]
fn encoder_examples() {
    let a = fix_a();
    let enc = |b: &Board, d: &DooPolyline| encode(d, &b.graph, &b.regions, &b.layout, 1e-3).unwrap().ids();
    assert_eq!(enc(&a, &DooPolyline::from_coords(&[(2.0, 5.0), (3.0, 5.0)])), vec![0]);
    assert_eq!(enc(&a, &DooPolyline::from_coords(&[(2.0, 5.0), (8.0, 5.0)])), vec![0, 1]);
    assert_eq!(enc(&a, &DooPolyline::from_coords(&[(-1.0, 5.0), (8.0, 5.0)])), vec![-1, 0, 1]);
    let b = fix_b();
    assert_eq!(enc(&b, &DooPolyline::from_coords(&[(0.5, 0.5), (1.5, 1.5)]).with_tag(0, 0)), vec![4, 5]);
}

/// Polylines on FIX-B whose vertices keep clear of region edges and whose
/// segments keep clear of region corners.
fn clear_polyline() -> impl Strategy<Value = Vec<(f64, f64)>> {
    let coord = (0..2u8, 0.11..0.89f64).prop_map(|(cell, t)| f64::from(cell) + t);
    prop::collection::vec((coord.clone(), coord), 2..6)
}

fn non_degenerate(board: &Board, pts: &[Point2], margin: f64) -> bool {
    let corners: Vec<Point2> = board.regions.iter().flat_map(|r| r.polygon.vertices().iter().copied()).collect();
    pts.iter().all(|&p| edge_clearance(board, p) > margin)
        && pts.windows(2).all(|w| corners.iter().all(|&c| segment_distance(w[0], w[1], c) > margin))
}

proptest! {
    #[test]
    fn halving_the_sample_step_keeps_the_configuration(raw in clear_polyline()) {
        let b = fix_b();
        let step = 0.01;
        let pts: Vec<Point2> = raw.iter().map(|&(x, y)| Point2::new(x, y)).collect();
        prop_assume!(non_degenerate(&b, &pts, 10.0 * step));
        let doo = DooPolyline::new(pts);
        let coarse = b.encode(&doo, step).unwrap().simplified;
        let fine = b.encode(&doo, step / 2.0).unwrap().simplified;
        prop_assert_eq!(coarse, fine);
    }

    #[test]
    fn simplify_is_idempotent_and_keeps_endpoints(seq in prop::collection::vec(-1..6i32, 1..12)) {
        let c = Configuration::from_ids(&seq);
        let s = simplify(&c);
        prop_assert_eq!(simplify(&s), s.clone());
        prop_assert_eq!(s.as_slice().first(), c.as_slice().first());
        prop_assert_eq!(s.as_slice().last(), c.as_slice().last());
        prop_assert!(s.as_slice().windows(3).all(|w| w[0] != w[2]));
        prop_assert_eq!(simplify(&reverse(&c)), reverse(&s));
    }
}
