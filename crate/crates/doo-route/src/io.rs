//! JSON file formats.

use std::fs;
use std::path::Path;

use doo_route_core::configuration::TunnelTag;
use doo_route_core::graph::VertexKind;
use doo_route_core::{Configuration, DooPolyline, Layout, Point2, Polygon, SpatialGraph, TunnelSpec, VertexId};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub type Xy = [f64; 2];

fn pt(p: Xy) -> Point2 {
    Point2::new(p[0], p[1])
}

fn xy(p: Point2) -> Xy {
    [p.x, p.y]
}

fn ring(points: &[Xy]) -> Polygon {
    Polygon::new(points.iter().copied().map(pt).collect())
}

fn coords(poly: &Polygon) -> Vec<Xy> {
    poly.vertices().iter().copied().map(xy).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TunnelJson {
    pub id: u32,
    pub a: Xy,
    pub b: Xy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayoutJson {
    pub boundary: Vec<Xy>,
    #[serde(default)]
    pub holes: Vec<Vec<Xy>>,
    #[serde(default)]
    pub tunnels: Vec<TunnelJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub regions: Option<Vec<Vec<Xy>>>,
}

impl LayoutJson {
    pub fn to_layout(&self) -> Layout {
        let tunnels = self.tunnels.iter().map(|t| TunnelSpec { id: t.id, entrance_a: pt(t.a), entrance_b: pt(t.b) }).collect();
        let mut layout = Layout::new(ring(&self.boundary))
            .with_holes(self.holes.iter().map(|h| ring(h)).collect())
            .with_tunnels(tunnels);
        if let Some(regions) = &self.regions {
            layout = layout.with_regions(regions.iter().map(|r| ring(r)).collect());
        }
        layout
    }

    pub fn from_layout(layout: &Layout) -> Self {
        LayoutJson {
            boundary: coords(&layout.boundary),
            holes: layout.holes.iter().map(coords).collect(),
            tunnels: layout.tunnels.iter().map(|t| TunnelJson { id: t.id, a: xy(t.entrance_a), b: xy(t.entrance_b) }).collect(),
            regions: layout.predecomposed.as_ref().map(|r| r.iter().map(coords).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolylineJson {
    pub points: Vec<Xy>,
    #[serde(default)]
    pub tunnel_tags: Vec<(usize, u32)>,
}

impl PolylineJson {
    pub fn to_polyline(&self) -> DooPolyline {
        let mut doo = DooPolyline::new(self.points.iter().copied().map(pt).collect());
        doo.tunnel_tags = self.tunnel_tags.iter().map(|&(segment, tunnel)| TunnelTag { segment, tunnel }).collect();
        doo.tunnel_tags.sort();
        doo
    }

    pub fn from_polyline(doo: &DooPolyline) -> Self {
        PolylineJson {
            points: doo.points.iter().copied().map(xy).collect(),
            tunnel_tags: doo.tunnel_tags.iter().map(|t| (t.segment, t.tunnel)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationJson {
    pub seq: Vec<i32>,
}

impl From<&Configuration> for ConfigurationJson {
    fn from(c: &Configuration) -> Self {
        ConfigurationJson { seq: c.ids() }
    }
}

/// A DOO given either geometrically or symbolically.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum DooInput {
    Polyline(PolylineJson),
    Configuration(ConfigurationJson),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexJson {
    pub id: i32,
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tunnel: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub host: Option<i32>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphJson {
    pub n: usize,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[i32; 2]>,
}

impl GraphJson {
    pub fn new(g: &SpatialGraph) -> Self {
        let vertices = g
            .vertices()
            .map(|v| {
                let mut out = VertexJson { id: v.0, kind: "region", tunnel: None, host: None };
                match g.kind(v).expect("listed vertex") {
                    VertexKind::Outside => out.kind = "outside",
                    VertexKind::Region(_) => {}
                    VertexKind::TunnelEntrance { tunnel, host, .. } => {
                        out.kind = "entrance";
                        out.tunnel = Some(*tunnel);
                        out.host = Some(host.0);
                    }
                }
                out
            })
            .collect();
        GraphJson { n: g.vertex_count(), vertices, edges: g.edges().into_iter().map(|(u, v)| [u.0, v.0]).collect() }
    }
}

pub fn ids(seq: &[VertexId]) -> Vec<i32> {
    seq.iter().map(|v| v.0).collect()
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(path.display().to_string(), e.to_string()))
}

pub fn point_json(p: Point2) -> Xy {
    xy(p)
}
