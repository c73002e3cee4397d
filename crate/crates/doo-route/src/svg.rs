//! SVG drawing of a board, its graph and a DOO.

use std::fmt::Write;

use doo_route_core::graph::VertexKind;
use doo_route_core::{DooPolyline, Point2, Polygon};
use doo_route_core::world::Board;

const WIDTH_PX: f64 = 800.0;

struct Canvas {
    min: Point2,
    max_y: f64,
    scale: f64,
}

impl Canvas {
    fn x(&self, p: Point2) -> f64 {
        (p.x - self.min.x) * self.scale
    }

    // SVG y grows downwards
    fn y(&self, p: Point2) -> f64 {
        (self.max_y - p.y) * self.scale
    }

    fn points(&self, pts: &[Point2]) -> String {
        let mut s = String::new();
        for p in pts {
            let _ = write!(s, "{:.2},{:.2} ", self.x(*p), self.y(*p));
        }
        s.trim_end().to_string()
    }

    fn polygon(&self, out: &mut String, poly: &Polygon, style: &str) {
        let _ = writeln!(out, r#"<polygon points="{}" {style}/>"#, self.points(poly.vertices()));
    }
}

fn vertex_point(board: &Board, kind: &VertexKind) -> Option<Point2> {
    match kind {
        VertexKind::Outside => None,
        VertexKind::Region(r) => Some(board.regions[*r].centroid),
        VertexKind::TunnelEntrance { anchor, .. } => Some(*anchor),
    }
}

pub fn render(board: &Board, doo: Option<&DooPolyline>) -> String {
    let bbox = board.layout.boundary.bbox();
    let margin = 0.05 * bbox.width().max(bbox.height());
    let span = bbox.width().max(bbox.height()) + 2.0 * margin;
    let c = Canvas { min: bbox.min - Point2::new(margin, margin), max_y: bbox.max.y + margin, scale: WIDTH_PX / span };
    let w = (bbox.width() + 2.0 * margin) * c.scale;
    let h = (bbox.height() + 2.0 * margin) * c.scale;
    let dot = 0.004 * span * c.scale;

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#);
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    c.polygon(&mut out, &board.layout.boundary, r##"fill="#f4f1e8" stroke="#333" stroke-width="2""##);
    for r in &board.regions {
        c.polygon(&mut out, &r.polygon, r##"fill="none" stroke="#9aa" stroke-width="1" stroke-dasharray="4 3""##);
    }
    for hole in &board.layout.holes {
        c.polygon(&mut out, hole, r##"fill="#555" stroke="#222" stroke-width="1.5""##);
    }

    let g = &board.graph;
    let _ = writeln!(out, r##"<g stroke="#3a7" stroke-width="1.2" opacity="0.7">"##);
    for (u, v) in g.edges() {
        let (Ok(ku), Ok(kv)) = (g.kind(u), g.kind(v)) else { continue };
        if let (Some(a), Some(b)) = (vertex_point(board, ku), vertex_point(board, kv)) {
            let _ = writeln!(out, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, c.x(a), c.y(a), c.x(b), c.y(b));
        }
    }
    let _ = writeln!(out, "</g>");

    for r in &board.regions {
        let p = r.centroid;
        let _ = writeln!(out, r##"<circle cx="{:.2}" cy="{:.2}" r="{dot:.2}" fill="#222"/>"##, c.x(p), c.y(p));
        let _ = writeln!(
            out,
            r##"<text x="{:.2}" y="{:.2}" font-size="{:.1}" fill="#222">{}</text>"##,
            c.x(p) + dot,
            c.y(p) - dot,
            3.0 * dot,
            r.id
        );
    }
    for t in &board.layout.tunnels {
        let (a, b) = (t.entrance_a, t.entrance_b);
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#c60" stroke-width="3" stroke-dasharray="8 4"/>"##,
            c.x(a),
            c.y(a),
            c.x(b),
            c.y(b)
        );
    }

    if let Some(doo) = doo {
        let _ = writeln!(
            out,
            r##"<polyline points="{}" fill="none" stroke="#d22" stroke-width="3" stroke-linejoin="round"/>"##,
            c.points(&doo.points)
        );
    }
    out.push_str("</svg>\n");
    out
}
