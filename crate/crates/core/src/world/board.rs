use alloc::vec::Vec;

use crate::geometry::{Layout, Point2, Polygon, TunnelSpec};

const GRID: [f64; 6] = [0.0, 0.08, 0.14, 0.24, 0.30, 0.38];
const CENTER_HOLE: (f64, f64) = (0.17, 0.21);

/// A 0.38 m square board with four square components on a grid, a smaller
/// one in the middle, and a bridge over the lower-left component.
///
/// The free space comes predecomposed into 24 axis-aligned rectangles,
/// listed bottom row first, left to right; the middle cell is split into
/// four pieces around the centre component.
pub fn bundled_board() -> Layout {
    let g = GRID;
    let is_hole = |i: usize, j: usize| (i == 1 || i == 3) && (j == 1 || j == 3);
    let mut holes: Vec<Polygon> = Vec::new();
    for j in [1, 3] {
        for i in [1, 3] {
            holes.push(Polygon::rect(g[i], g[j], g[i + 1], g[j + 1]).reversed());
        }
    }
    let (lo, hi) = CENTER_HOLE;
    holes.push(Polygon::rect(lo, lo, hi, hi).reversed());

    let mut regions = Vec::with_capacity(24);
    for j in 0..5 {
        for i in 0..5 {
            if is_hole(i, j) {
                continue;
            }
            let (x0, y0, x1, y1) = (g[i], g[j], g[i + 1], g[j + 1]);
            if i == 2 && j == 2 {
                regions.push(Polygon::rect(x0, y0, x1, lo));
                regions.push(Polygon::rect(x0, lo, lo, hi));
                regions.push(Polygon::rect(hi, lo, x1, hi));
                regions.push(Polygon::rect(x0, hi, x1, y1));
            } else {
                regions.push(Polygon::rect(x0, y0, x1, y1));
            }
        }
    }

    Layout::new(Polygon::rect(0.0, 0.0, g[5], g[5]))
        .with_holes(holes)
        .with_tunnels(alloc::vec![TunnelSpec {
            id: 0,
            entrance_a: Point2::new(0.04, 0.11),
            entrance_b: Point2::new(0.19, 0.11),
        }])
        .with_regions(regions)
}
