use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{EdgeId, RotationGraph, VertexId};
use crate::error::{Error, Result};

/// Combinatorial spheres `S(n)` and cut sets `E(n)` around a root.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerDecomposition {
    pub root: VertexId,
    /// `spheres[n]` holds the vertices at distance exactly `n`.
    pub spheres: Vec<Vec<VertexId>>,
    /// `cut_edges[n]` holds the edges between `S(n)` and `S(n + 1)`, one
    /// entry per parallel copy.
    pub cut_edges: Vec<Vec<EdgeId>>,
    pub depth: usize,
    /// First sphere index that contains a frontier vertex.
    pub first_frontier: Option<usize>,
}

impl LayerDecomposition {
    /// Largest `n` for which `S(0..=n)` and `E(0..n)` agree with the
    /// untruncated graph. Spheres up to the first frontier contact are exact
    /// because every vertex closer in has its full rotation.
    pub fn reliable_depth(&self) -> usize {
        match self.first_frontier {
            Some(f) => f.min(self.depth),
            None => self.depth,
        }
    }

    /// True when the frontier was met before `depth`.
    pub fn hit_frontier(&self) -> bool {
        self.first_frontier.is_some_and(|f| f < self.depth)
    }

    pub fn sphere_sizes(&self) -> Vec<usize> {
        self.spheres.iter().map(Vec::len).collect()
    }

    /// `|B(n)|` for `n = 0..=depth`.
    pub fn ball_sizes(&self) -> Vec<usize> {
        self.spheres
            .iter()
            .scan(0, |acc, s| {
                *acc += s.len();
                Some(*acc)
            })
            .collect()
    }

    pub fn cut_sizes(&self) -> Vec<usize> {
        self.cut_edges.iter().map(Vec::len).collect()
    }

    /// `B(n)` contains no frontier vertex.
    pub fn ball_is_frontier_free(&self, n: usize) -> bool {
        self.first_frontier.is_none_or(|f| n < f)
    }
}

/// Breadth-first distances from `root`, optionally capped.
pub fn bfs_distances(
    g: &RotationGraph,
    root: VertexId,
    cap: Option<usize>,
) -> Result<Vec<Option<usize>>> {
    if root >= g.vertex_count() {
        return Err(Error::UnknownVertex(root));
    }
    let mut dist = vec![None; g.vertex_count()];
    dist[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap();
        if cap.is_some_and(|c| d >= c) {
            continue;
        }
        for w in g.neighbors(v) {
            if dist[w].is_none() {
                dist[w] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    Ok(dist)
}

/// Spheres, balls and cut sets out to `n_max`.
pub fn bfs_layers(g: &RotationGraph, root: VertexId, n_max: usize) -> Result<LayerDecomposition> {
    let dist = bfs_distances(g, root, Some(n_max))?;
    let mut spheres = vec![Vec::new(); n_max + 1];
    for (v, d) in dist.iter().enumerate() {
        if let Some(d) = d {
            spheres[*d].push(v);
        }
    }
    let mut cut_edges = vec![Vec::new(); n_max];
    for e in g.edges() {
        let (u, v) = g.endpoints(e);
        if let (Some(du), Some(dv)) = (dist[u], dist[v]) {
            let lo = du.min(dv);
            if du.abs_diff(dv) == 1 && lo < n_max {
                cut_edges[lo].push(e);
            }
        }
    }
    let first_frontier = spheres
        .iter()
        .position(|s| s.iter().any(|&v| g.is_frontier(v)));
    Ok(LayerDecomposition {
        root,
        spheres,
        cut_edges,
        depth: n_max,
        first_frontier,
    })
}
