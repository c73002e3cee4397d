//! The spatial representation graph: one vertex for the outside, one per
//! convex region and one per tunnel entrance, with adjacency edges.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::geometry::{boundary_contact, locate, shared_side, ConvexRegion, Point2, ValidatedLayout};

/// Graph vertex number. `-1` is the outside, regions are `0..k`, tunnel
/// entrances follow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub i32);

impl VertexId {
    pub const OUTSIDE: VertexId = VertexId(-1);

    pub fn region(id: usize) -> VertexId {
        VertexId(id as i32)
    }

    pub fn is_outside(self) -> bool {
        self.0 == -1
    }

    fn slot(self) -> Option<usize> {
        usize::try_from(self.0 + 1).ok()
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<i32> for VertexId {
    fn from(v: i32) -> Self {
        VertexId(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EntranceEnd {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VertexKind {
    Outside,
    Region(usize),
    TunnelEntrance { tunnel: u32, end: EntranceEnd, anchor: Point2, host: VertexId },
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("UnknownVertex: {0}")]
    UnknownVertex(VertexId),
    #[error("EntranceInHole: tunnel {tunnel} has an entrance inside hole {hole}")]
    EntranceInHole { tunnel: u32, hole: usize },
    #[error("Unreachable: no path from {0} to {1}")]
    Unreachable(VertexId, VertexId),
    #[error("self-loop at {0}")]
    SelfLoop(VertexId),
    #[error("graph is not connected: {0} cannot be reached from the outside vertex")]
    Disconnected(VertexId),
    #[error("vertex -1 must be the outside vertex and appear exactly once")]
    BadOutside,
}

/// `G_s`. Immutable once built; adjacency lists are sorted ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialGraph {
    kinds: Vec<VertexKind>,
    adj: Vec<Vec<VertexId>>,
}

impl SpatialGraph {
    /// Assembles a graph from explicit vertex kinds (index `i` is vertex
    /// `i - 1`) and undirected edges. Duplicate edges are merged.
    pub fn from_parts(
        kinds: Vec<VertexKind>,
        edges: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<SpatialGraph, GraphError> {
        if kinds.first() != Some(&VertexKind::Outside) || kinds[1..].contains(&VertexKind::Outside) {
            return Err(GraphError::BadOutside);
        }
        let mut adj = vec![Vec::new(); kinds.len()];
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let su = u.slot().filter(|&s| s < kinds.len()).ok_or(GraphError::UnknownVertex(u))?;
            let sv = v.slot().filter(|&s| s < kinds.len()).ok_or(GraphError::UnknownVertex(v))?;
            adj[su].push(v);
            adj[sv].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        let g = SpatialGraph { kinds, adj };
        let seen = g.bfs_parents(VertexId::OUTSIDE);
        if let Some(s) = seen.iter().position(Option::is_none) {
            return Err(GraphError::Disconnected(VertexId(s as i32 - 1)));
        }
        Ok(g)
    }

    /// `n + 1`: the number of vertices including the outside.
    pub fn vertex_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.kinds.len()).map(|s| VertexId(s as i32 - 1))
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v.slot().is_some_and(|s| s < self.kinds.len())
    }

    pub fn kind(&self, v: VertexId) -> Result<&VertexKind, GraphError> {
        v.slot().and_then(|s| self.kinds.get(s)).ok_or(GraphError::UnknownVertex(v))
    }

    pub fn region_count(&self) -> usize {
        self.kinds.iter().filter(|k| matches!(k, VertexKind::Region(_))).count()
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbors(&self, v: VertexId) -> Result<&[VertexId], GraphError> {
        v.slot().and_then(|s| self.adj.get(s)).map(Vec::as_slice).ok_or(GraphError::UnknownVertex(v))
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        self.kind(u)?;
        self.kind(v)?;
        Ok(self.adjacent(u, v))
    }

    /// Unchecked [`has_edge`](Self::has_edge): unknown vertices are simply not adjacent.
    #[inline]
    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        match u.slot().and_then(|s| self.adj.get(s)) {
            Some(list) => list.binary_search(&v).is_ok(),
            None => false,
        }
    }

    /// All edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for u in self.vertices() {
            for &v in &self.adj[u.slot().unwrap()] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Vertex of the given tunnel entrance.
    pub fn entrance(&self, tunnel: u32, end: EntranceEnd) -> Option<VertexId> {
        self.kinds
            .iter()
            .position(|k| matches!(k, VertexKind::TunnelEntrance { tunnel: t, end: e, .. } if *t == tunnel && *e == end))
            .map(|s| VertexId(s as i32 - 1))
    }

    /// The other entrance of the tunnel `v` belongs to.
    pub fn twin(&self, v: VertexId) -> Option<VertexId> {
        let VertexKind::TunnelEntrance { tunnel, end, .. } = *self.kind(v).ok()? else {
            return None;
        };
        self.vertices().find(|&u| {
            matches!(self.kinds[u.slot().unwrap()], VertexKind::TunnelEntrance { tunnel: t, end: e, .. } if t == tunnel && e != end)
        })
    }

    fn bfs_parents(&self, from: VertexId) -> Vec<Option<VertexId>> {
        let mut parent = vec![None; self.kinds.len()];
        let Some(start) = from.slot() else {
            return parent;
        };
        parent[start] = Some(from);
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            let list = &self.adj[u.slot().unwrap()];
            // lowest id first, but the outside vertex last
            for &w in list.iter().filter(|w| !w.is_outside()).chain(list.iter().filter(|w| w.is_outside())) {
                let s = w.slot().unwrap();
                if parent[s].is_none() {
                    parent[s] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// Minimum-hop path from `u` to `v`, both inclusive. Breadth-first with
    /// neighbours expanded in ascending id order, the outside vertex last.
    pub fn shortest_path(&self, u: VertexId, v: VertexId) -> Result<Vec<VertexId>, GraphError> {
        self.kind(u)?;
        self.kind(v)?;
        if u == v {
            return Ok(vec![u]);
        }
        let parent = self.bfs_parents(u);
        if parent[v.slot().unwrap()].is_none() {
            return Err(GraphError::Unreachable(u, v));
        }
        let mut path = vec![v];
        let mut cur = v;
        while cur != u {
            cur = parent[cur.slot().unwrap()].unwrap();
            path.push(cur);
        }
        path.reverse();
        Ok(path)
    }
}

/// Builds `G_s` from a decomposition:
/// 1. regions sharing a side are adjacent;
/// 2. regions touching the outer boundary are adjacent to the outside;
/// 3. the two entrances of a tunnel are adjacent;
/// 4. each entrance is adjacent to the region (or outside) its anchor lies in.
pub fn build_graph(regions: &[ConvexRegion], layout: &ValidatedLayout) -> Result<SpatialGraph, GraphError> {
    let k = regions.len();
    let mut kinds = Vec::with_capacity(1 + k + 2 * layout.tunnels.len());
    kinds.push(VertexKind::Outside);
    kinds.extend((0..k).map(VertexKind::Region));

    let mut edges = Vec::new();
    for (i, a) in regions.iter().enumerate() {
        for b in &regions[i + 1..] {
            if shared_side(a, b).is_some() {
                edges.push((VertexId::region(a.id), VertexId::region(b.id)));
            }
        }
        if boundary_contact(a, &layout.boundary).is_some() {
            edges.push((VertexId::OUTSIDE, VertexId::region(a.id)));
        }
    }

    for t in &layout.tunnels {
        let base = kinds.len() as i32 - 1;
        let (va, vb) = (VertexId(base), VertexId(base + 1));
        for (end, anchor, v) in [(EntranceEnd::A, t.entrance_a, va), (EntranceEnd::B, t.entrance_b, vb)] {
            if let Some(hole) = layout.in_hole(anchor) {
                return Err(GraphError::EntranceInHole { tunnel: t.id, hole });
            }
            let host = locate(anchor, regions, layout);
            kinds.push(VertexKind::TunnelEntrance { tunnel: t.id, end, anchor, host });
            edges.push((v, host));
        }
        edges.push((va, vb));
    }
    SpatialGraph::from_parts(kinds, edges)
}
