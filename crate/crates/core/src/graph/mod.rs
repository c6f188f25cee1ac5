//! Locally finite planar graphs stored as rotation systems.
//!
//! Every edge `e` owns the two half-edges `2e` and `2e + 1`; the twin of a
//! half-edge is therefore `h ^ 1`. Each vertex keeps its outgoing half-edges
//! in counter-clockwise order. Parallel edges are allowed, self-loops are not.
//!
//! Finite truncations of infinite graphs mark a set of *frontier* vertices
//! whose rotation may be incomplete. Everything downstream treats the
//! frontier explicitly; see [`layers::LayerDecomposition::reliable_depth`].

mod canonical;
mod classify;
mod faces;
pub mod json;
mod layers;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use canonical::{canonical_code, is_isomorphic};
pub use classify::{bipartition, classify, GraphClassification};
pub use faces::{dual, trace_faces, DualOptions, Faces};
pub use layers::{bfs_distances, bfs_layers, LayerDecomposition};

pub type VertexId = usize;
pub type EdgeId = usize;
pub type HalfEdgeId = usize;
pub type FaceId = usize;

/// Bipartition label of a Speiser graph vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tag {
    Circle,
    Cross,
}

impl Tag {
    pub fn flip(self) -> Tag {
        match self {
            Tag::Circle => Tag::Cross,
            Tag::Cross => Tag::Circle,
        }
    }
}

#[inline]
pub fn twin(h: HalfEdgeId) -> HalfEdgeId {
    h ^ 1
}

#[inline]
pub fn edge_of(h: HalfEdgeId) -> EdgeId {
    h >> 1
}

/// Immutable, validated rotation system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationGraph {
    rotation: Vec<Vec<HalfEdgeId>>,
    origin: Vec<VertexId>,
    slot: Vec<usize>,
    frontier: Vec<bool>,
    tags: Vec<Option<Tag>>,
}

impl RotationGraph {
    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.origin.len() / 2
    }

    pub fn half_edge_count(&self) -> usize {
        self.origin.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.vertex_count()
    }

    pub fn edges(&self) -> std::ops::Range<EdgeId> {
        0..self.edge_count()
    }

    /// Outgoing half-edges of `v` in counter-clockwise order.
    pub fn rotation(&self, v: VertexId) -> &[HalfEdgeId] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotation[v].len()
    }

    pub fn origin(&self, h: HalfEdgeId) -> VertexId {
        self.origin[h]
    }

    pub fn head(&self, h: HalfEdgeId) -> VertexId {
        self.origin[twin(h)]
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        (self.origin[2 * e], self.origin[2 * e + 1])
    }

    /// Position of `h` in the rotation of its origin.
    pub fn slot(&self, h: HalfEdgeId) -> usize {
        self.slot[h]
    }

    /// Counter-clockwise successor of `h` around its origin.
    pub fn rotation_next(&self, h: HalfEdgeId) -> HalfEdgeId {
        let rot = &self.rotation[self.origin[h]];
        rot[(self.slot[h] + 1) % rot.len()]
    }

    pub fn rotation_prev(&self, h: HalfEdgeId) -> HalfEdgeId {
        let rot = &self.rotation[self.origin[h]];
        rot[(self.slot[h] + rot.len() - 1) % rot.len()]
    }

    /// Successor of `h` along its face: the rotation successor of its twin.
    /// The face traced this way lies to the right of each half-edge.
    pub fn face_next(&self, h: HalfEdgeId) -> HalfEdgeId {
        self.rotation_next(twin(h))
    }

    /// Neighbours of `v` in rotation order, repeated once per parallel edge.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.rotation[v].iter().map(move |&h| self.head(h))
    }

    pub fn is_frontier(&self, v: VertexId) -> bool {
        self.frontier[v]
    }

    pub fn has_frontier(&self) -> bool {
        self.frontier.iter().any(|&f| f)
    }

    pub fn frontier_vertices(&self) -> Vec<VertexId> {
        self.vertices().filter(|&v| self.frontier[v]).collect()
    }

    pub fn tag(&self, v: VertexId) -> Option<Tag> {
        self.tags[v]
    }

    pub fn with_tags(mut self, tags: Vec<Option<Tag>>) -> Self {
        assert_eq!(tags.len(), self.vertex_count());
        self.tags = tags;
        self
    }

    pub fn with_frontier(mut self, frontier: Vec<bool>) -> Self {
        assert_eq!(frontier.len(), self.vertex_count());
        self.frontier = frontier;
        self
    }

    /// Largest degree over non-frontier vertices.
    pub fn max_interior_degree(&self) -> Option<usize> {
        self.vertices()
            .filter(|&v| !self.frontier[v])
            .map(|v| self.degree(v))
            .max()
    }

    /// Same combinatorics with every rotation reversed.
    pub fn mirrored(&self) -> RotationGraph {
        let mut b = GraphBuilder::with_vertices(self.vertex_count());
        for e in self.edges() {
            let (u, v) = self.endpoints(e);
            b.add_edge(u, v);
        }
        for v in self.vertices() {
            b.set_rotation(v, self.rotation[v].iter().rev().copied().collect());
            b.set_frontier(v, self.frontier[v]);
            b.set_tag(v, self.tags[v]);
        }
        b.build().expect("mirror of a valid graph is valid")
    }

    /// Subgraph induced by `keep`. Vertices that lose an edge join the
    /// frontier, as do vertices flagged in `extra_frontier`. Returns the graph
    /// and the map from old to new vertex ids.
    pub fn induced(
        &self,
        keep: &[bool],
        extra_frontier: &[bool],
    ) -> Result<(RotationGraph, Vec<Option<VertexId>>)> {
        let mut map = vec![None; self.vertex_count()];
        let mut b = GraphBuilder::new();
        for v in self.vertices().filter(|&v| keep[v]) {
            map[v] = Some(b.add_vertex());
        }
        let mut new_half = vec![usize::MAX; self.half_edge_count()];
        for e in self.edges() {
            let (u, v) = self.endpoints(e);
            if let (Some(nu), Some(nv)) = (map[u], map[v]) {
                let ne = b.add_edge(nu, nv);
                new_half[2 * e] = 2 * ne;
                new_half[2 * e + 1] = 2 * ne + 1;
            }
        }
        for v in self.vertices() {
            let Some(nv) = map[v] else { continue };
            let rot: Vec<_> = self.rotation[v]
                .iter()
                .filter(|&&h| new_half[h] != usize::MAX)
                .map(|&h| new_half[h])
                .collect();
            let lost = rot.len() < self.degree(v);
            b.set_rotation(nv, rot);
            b.set_frontier(nv, self.frontier[v] || lost || extra_frontier[v]);
            b.set_tag(nv, self.tags[v]);
        }
        Ok((b.build()?, map))
    }

    /// Finite truncation to the combinatorial ball of `radius` around `root`.
    /// The outer sphere is marked as frontier.
    pub fn truncate_ball(
        &self,
        root: VertexId,
        radius: usize,
    ) -> Result<(RotationGraph, Vec<Option<VertexId>>)> {
        let dist = bfs_distances(self, root, Some(radius))?;
        let keep: Vec<bool> = dist.iter().map(|d| d.is_some()).collect();
        let outer: Vec<bool> = dist.iter().map(|d| *d == Some(radius)).collect();
        self.induced(&keep, &outer)
    }
}

/// Incremental constructor; rotations are supplied explicitly and checked in
/// [`GraphBuilder::build`].
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    endpoints: Vec<(VertexId, VertexId)>,
    rotation: Vec<Vec<HalfEdgeId>>,
    frontier: Vec<bool>,
    tags: Vec<Option<Tag>>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices(n: usize) -> Self {
        let mut b = Self::new();
        for _ in 0..n {
            b.add_vertex();
        }
        b
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.endpoints.len()
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.rotation.push(Vec::new());
        self.frontier.push(false);
        self.tags.push(None);
        self.rotation.len() - 1
    }

    /// Adds an edge without touching any rotation. Half-edge `2e` starts at
    /// `u`, `2e + 1` at `v`.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        self.endpoints.push((u, v));
        self.endpoints.len() - 1
    }

    /// The half-edge of `e` that starts at `v`.
    pub fn half_edge_at(&self, e: EdgeId, v: VertexId) -> HalfEdgeId {
        let (a, b) = self.endpoints[e];
        if a == v {
            2 * e
        } else {
            debug_assert_eq!(b, v);
            2 * e + 1
        }
    }

    pub fn set_rotation(&mut self, v: VertexId, rot: Vec<HalfEdgeId>) {
        self.rotation[v] = rot;
    }

    pub fn push_rotation(&mut self, v: VertexId, h: HalfEdgeId) {
        self.rotation[v].push(h);
    }

    pub fn set_frontier(&mut self, v: VertexId, on: bool) {
        self.frontier[v] = on;
    }

    pub fn set_tag(&mut self, v: VertexId, tag: Option<Tag>) {
        self.tags[v] = tag;
    }

    /// Builds a simple graph from counter-clockwise neighbour lists. Each
    /// adjacency must be listed symmetrically.
    pub fn from_ccw_neighbors(lists: &[Vec<VertexId>]) -> Result<RotationGraph> {
        let mut b = Self::with_vertices(lists.len());
        let mut ids = std::collections::HashMap::new();
        for (u, nbrs) in lists.iter().enumerate() {
            for &v in nbrs {
                if v >= lists.len() {
                    return Err(Error::UnknownVertex(v));
                }
                if u < v {
                    ids.insert((u, v), b.add_edge(u, v));
                }
            }
        }
        for (u, nbrs) in lists.iter().enumerate() {
            let mut rot = Vec::with_capacity(nbrs.len());
            for &v in nbrs {
                let key = (u.min(v), u.max(v));
                let e = *ids.get(&key).ok_or_else(|| Error::MalformedRotation {
                    vertex: u,
                    reason: format!("neighbour {v} not reciprocated"),
                })?;
                rot.push(b.half_edge_at(e, u));
            }
            b.set_rotation(u, rot);
        }
        b.build()
    }

    pub fn build(self) -> Result<RotationGraph> {
        let n = self.rotation.len();
        let m = self.endpoints.len();
        let mut origin = vec![usize::MAX; 2 * m];
        for (e, &(u, v)) in self.endpoints.iter().enumerate() {
            if u >= n {
                return Err(Error::UnknownVertex(u));
            }
            if v >= n {
                return Err(Error::UnknownVertex(v));
            }
            if u == v {
                return Err(Error::SelfLoop { edge: e, vertex: u });
            }
            origin[2 * e] = u;
            origin[2 * e + 1] = v;
        }
        let mut slot = vec![usize::MAX; 2 * m];
        for (v, rot) in self.rotation.iter().enumerate() {
            for (i, &h) in rot.iter().enumerate() {
                if h >= 2 * m {
                    return Err(Error::MalformedRotation {
                        vertex: v,
                        reason: format!("unknown half-edge {h}"),
                    });
                }
                if origin[h] != v {
                    return Err(Error::MalformedRotation {
                        vertex: v,
                        reason: format!("half-edge {h} belongs to vertex {}", origin[h]),
                    });
                }
                if slot[h] != usize::MAX {
                    return Err(Error::MalformedRotation {
                        vertex: v,
                        reason: format!("half-edge {h} listed twice"),
                    });
                }
                slot[h] = i;
            }
        }
        if let Some(h) = slot.iter().position(|&s| s == usize::MAX) {
            return Err(Error::DanglingHalfEdge(h));
        }
        let g = RotationGraph {
            rotation: self.rotation,
            origin,
            slot,
            frontier: self.frontier,
            tags: self.tags,
        };
        if n > 0 {
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([0]);
            seen[0] = true;
            while let Some(v) = queue.pop_front() {
                for w in g.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            if let Some(v) = seen.iter().position(|&s| !s) {
                return Err(Error::Disconnected(v));
            }
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests;
