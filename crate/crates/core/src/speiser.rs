//! Speiser-type graphs: the octagonal base graph, tree replacement along a
//! growth schedule, the `2k`-triangle subdivision of faces and the extension
//! by cylindrical square grids.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    bfs_layers, bipartition, dual, edge_of, trace_faces, DualOptions, GraphBuilder,
    HalfEdgeId, LayerDecomposition, RotationGraph, Tag, VertexId,
};
use crate::lattice::regular_triangulation;

/// Hard cap on vertices created by [`tree_replace`].
pub const MAX_TREE_VERTICES: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScheduleOrigin {
    Paper,
    Custom,
}

/// Path lengths `l_0, l_1, ...` used to stretch the cut sets `E(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthSchedule {
    lengths: Vec<u64>,
    origin: ScheduleOrigin,
}

/// Smallest odd integer `>= exp(3^(n+1))`, for `n <= 2`.
pub fn paper_schedule_term(n: usize) -> Result<u64> {
    if n > 2 {
        return Err(Error::Schedule(format!(
            "term {n} exceeds 64-bit range (exp(3^{}))",
            n + 1
        )));
    }
    let x = (3f64.powi(n as i32 + 1)).exp();
    let mut l = x.ceil() as u64;
    if l % 2 == 0 {
        l += 1;
    }
    Ok(l)
}

impl GrowthSchedule {
    pub fn custom(lengths: Vec<u64>) -> Result<Self> {
        if let Some((n, &l)) = lengths.iter().enumerate().find(|(_, &l)| l == 0 || l % 2 == 0) {
            return Err(Error::Schedule(format!("l_{n} = {l} must be odd and positive")));
        }
        Ok(Self {
            lengths,
            origin: ScheduleOrigin::Custom,
        })
    }

    /// First `terms` entries of the doubly exponential schedule.
    pub fn paper(terms: usize) -> Result<Self> {
        let lengths = (0..terms).map(paper_schedule_term).collect::<Result<_>>()?;
        Ok(Self {
            lengths,
            origin: ScheduleOrigin::Paper,
        })
    }

    pub fn lengths(&self) -> &[u64] {
        &self.lengths
    }

    pub fn origin(&self) -> ScheduleOrigin {
        self.origin
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }
}

/// Truncation of the 3-regular graph with octagonal faces, containing the
/// whole ball of radius `depth + 1` around vertex 0; the sphere at
/// `depth + 1` is the frontier. Vertices carry bipartition tags with vertex 0
/// a circle.
pub fn build_octagonal_speiser(depth: usize) -> Result<RotationGraph> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    // Grow the dual {3,8} patch until the wanted ball avoids its frontier.
    // Face 0 of the patch contains half-edge 0 at the patch root, so dual
    // vertex 0 sits next to the centre.
    let mut layers = depth / 2 + 2;
    loop {
        let tri = regular_triangulation(8, layers)?;
        let psi = dual(&tri, DualOptions { drop_frontier_faces: true })?;
        let ld = bfs_layers(&psi, 0, depth + 1)?;
        if ld.ball_is_frontier_free(depth) {
            let (g, _) = psi.truncate_ball(0, depth + 1)?;
            let tags = bipartition(&g)
                .ok_or_else(|| Error::Precondition("octagonal patch not bipartite".into()))?;
            return Ok(g.with_tags(tags.into_iter().map(Some).collect()));
        }
        layers += 1;
    }
}

/// Replaces every edge of `E(n)`, `n < layers.depth`, by an unbranched path of
/// length `l_n` whose segments alternate single, double, single, ... so that
/// internal vertices have degree 3. Original vertices keep their ids; new
/// vertices follow. Edges outside those cut sets are copied.
pub fn tree_replace(
    g: &RotationGraph,
    layers: &LayerDecomposition,
    schedule: &GrowthSchedule,
) -> Result<RotationGraph> {
    if schedule.len() < layers.depth {
        return Err(Error::Schedule(format!(
            "schedule has {} terms, layers need {}",
            schedule.len(),
            layers.depth
        )));
    }
    if let Some(&l) = schedule.lengths.iter().find(|&&l| l % 2 == 0) {
        return Err(Error::Schedule(format!("even length {l}")));
    }
    let mut length = vec![1u64; g.edge_count()];
    let mut total = 0u64;
    for (n, cut) in layers.cut_edges.iter().enumerate().take(layers.depth) {
        for &e in cut {
            length[e] = schedule.lengths[n];
            total = total.saturating_add(3 * (schedule.lengths[n] - 1) / 2);
        }
    }
    if total > MAX_TREE_VERTICES {
        return Err(Error::InvalidArgument(format!(
            "tree replacement would create {total} vertices (cap {MAX_TREE_VERTICES})"
        )));
    }

    let mut b = GraphBuilder::with_vertices(g.vertex_count());
    for v in g.vertices() {
        b.set_frontier(v, g.is_frontier(v));
        b.set_tag(v, g.tag(v));
    }
    // New half-edge standing in for each old half-edge at its origin.
    let mut replaced = vec![0; g.half_edge_count()];
    for e in g.edges() {
        let (u, w) = g.endpoints(e);
        let l = length[e];
        if l == 1 {
            let ne = b.add_edge(u, w);
            replaced[2 * e] = 2 * ne;
            replaced[2 * e + 1] = 2 * ne + 1;
            continue;
        }
        let mut prev = u;
        let mut prev_forward: Vec<HalfEdgeId> = Vec::new();
        let mut tag = g.tag(u);
        for j in 1..=l {
            let next = if j == l { w } else { b.add_vertex() };
            tag = tag.map(Tag::flip);
            if j < l {
                b.set_tag(next, tag);
            }
            let copies = if j % 2 == 1 { 1 } else { 2 };
            let seg: Vec<_> = (0..copies).map(|_| b.add_edge(prev, next)).collect();
            let forward: Vec<_> = seg.iter().map(|&s| 2 * s).collect();
            let back: Vec<_> = seg.iter().rev().map(|&s| 2 * s + 1).collect();
            if j == 1 {
                replaced[2 * e] = forward[0];
            } else {
                let mut rot: Vec<_> = std::mem::take(&mut prev_forward)
                    .into_iter()
                    .rev()
                    .map(|h| h ^ 1)
                    .collect();
                rot.extend_from_slice(&forward);
                b.set_rotation(prev, rot);
            }
            if j == l {
                replaced[2 * e + 1] = back[0];
            }
            prev_forward = forward;
            prev = next;
        }
    }
    for v in g.vertices() {
        b.set_rotation(v, g.rotation(v).iter().map(|&h| replaced[h]).collect());
    }
    b.build()
}

/// Octagonal base graph of radius `depth + 1` with `E(0..depth)` stretched
/// by `schedule`. Vertex 0 is the root.
pub fn build_gamma(depth: usize, schedule: &GrowthSchedule) -> Result<RotationGraph> {
    let psi = build_octagonal_speiser(depth)?;
    let layers = bfs_layers(&psi, 0, depth)?;
    tree_replace(&psi, &layers, schedule)
}

/// Splits every interior face with `k` sides into `2k` triangles around a new
/// centre, after putting a midpoint on every edge.
///
/// Ids: original vertices first, then the midpoint of edge `e` at
/// `|V| + e`, then one centre per interior face in face order. Frontier faces
/// are left open; their corners and edge midpoints join the frontier.
pub fn lambda_triangulation(g: &RotationGraph) -> Result<RotationGraph> {
    let faces = trace_faces(g);
    let nv = g.vertex_count();
    let ne = g.edge_count();
    let mut b = GraphBuilder::with_vertices(nv + ne);
    let mut centre = vec![usize::MAX; faces.len()];
    for f in faces.interior() {
        centre[f] = b.add_vertex();
    }
    let mid = |h: HalfEdgeId| nv + edge_of(h);

    // Half-edge from an original vertex towards the midpoint, per old half-edge.
    let mut to_mid = vec![0; g.half_edge_count()];
    for e in g.edges() {
        for h in [2 * e, 2 * e + 1] {
            let s = b.add_edge(g.origin(h), mid(h));
            to_mid[h] = 2 * s;
        }
    }
    // Spokes keyed by the walk half-edge opening each corner.
    let mut spoke_corner = vec![usize::MAX; g.half_edge_count()];
    let mut spoke_mid = vec![usize::MAX; g.half_edge_count()];
    for f in faces.interior() {
        for &h in faces.walk(f) {
            spoke_corner[h] = 2 * b.add_edge(centre[f], g.origin(h));
            spoke_mid[h] = 2 * b.add_edge(centre[f], mid(h));
        }
    }
    for v in g.vertices() {
        let rot = g.rotation(v);
        let mut out = Vec::with_capacity(2 * rot.len());
        let mut open = g.is_frontier(v);
        for i in 0..rot.len() {
            out.push(to_mid[rot[i]]);
            let nxt = rot[(i + 1) % rot.len()];
            if faces.is_frontier_face(faces.face_of(nxt)) {
                open = true;
            } else {
                out.push(spoke_corner[nxt] ^ 1);
            }
        }
        b.set_rotation(v, out);
        b.set_frontier(v, open);
    }
    for e in g.edges() {
        let (h, ht) = (2 * e, 2 * e + 1);
        // Towards v, the face left of h, towards u, the face right of h.
        let mut out = Vec::with_capacity(4);
        let mut open = false;
        for (toward, side) in [(to_mid[ht] ^ 1, ht), (to_mid[h] ^ 1, h)] {
            out.push(toward);
            if faces.is_frontier_face(faces.face_of(side)) {
                open = true;
            } else {
                out.push(spoke_mid[side] ^ 1);
            }
        }
        b.set_rotation(nv + e, out);
        b.set_frontier(nv + e, open);
    }
    for f in faces.interior() {
        let rot: Vec<_> = faces
            .walk(f)
            .iter()
            .flat_map(|&h| [spoke_corner[h], spoke_mid[h]])
            .rev()
            .collect();
        b.set_rotation(centre[f], rot);
    }
    b.build()
}

/// Graph with a cylindrical square grid glued into every face.
#[derive(Clone, Debug)]
pub struct ExtendedSpeiser {
    pub graph: RotationGraph,
    /// Number of vertices inherited from the input; they keep their ids.
    pub base_count: usize,
    /// `(corner vertex, height)` for each grid vertex `base_count + i`.
    pub columns: Vec<(VertexId, usize)>,
}

impl ExtendedSpeiser {
    /// Grid vertex column data, or `None` for inherited vertices.
    pub fn column(&self, v: VertexId) -> Option<(VertexId, usize)> {
        v.checked_sub(self.base_count).map(|i| self.columns[i])
    }
}

/// Glues a cylinder of `grid_depth` rings into every face, frontier faces
/// included. Ring `r` of a face with boundary walk of length `k` is a
/// `k`-cycle; ring 0 is the walk itself. Each vertical edge enters the
/// rotation of its corner right after the face's first bounding half-edge.
///
/// Grid vertices on the top ring, or above a frontier corner, are frontier.
pub fn extend_speiser(g: &RotationGraph, grid_depth: usize) -> Result<ExtendedSpeiser> {
    if grid_depth == 0 {
        return Err(Error::InvalidArgument("grid depth must be at least 1".into()));
    }
    let faces = trace_faces(g);
    let nv = g.vertex_count();
    let mut b = GraphBuilder::with_vertices(nv);
    let mut columns = Vec::new();
    let mut copied = vec![0; g.half_edge_count()];
    for e in g.edges() {
        let (u, v) = g.endpoints(e);
        let ne = b.add_edge(u, v);
        copied[2 * e] = 2 * ne;
        copied[2 * e + 1] = 2 * ne + 1;
    }
    // Vertical half-edge leaving the corner opened by each walk half-edge.
    let mut vertical = vec![0; g.half_edge_count()];
    for f in 0..faces.len() {
        let walk = faces.walk(f);
        let k = walk.len();
        // ids[r][i]: ring r >= 1, corner i.
        let mut ids = vec![Vec::with_capacity(k); grid_depth + 1];
        ids[0] = walk.iter().map(|&h| g.origin(h)).collect();
        for r in 1..=grid_depth {
            for i in 0..k {
                let v = b.add_vertex();
                let base = ids[0][i];
                columns.push((base, r));
                b.set_frontier(v, r == grid_depth || g.is_frontier(base));
                ids[r].push(v);
            }
        }
        // up[r][i]: edge from ring r-1 to ring r. ring[r][i]: ring r, i -> i+1.
        let mut up = vec![vec![0; k]; grid_depth + 1];
        let mut ring = vec![vec![0; k]; grid_depth + 1];
        for r in 1..=grid_depth {
            for i in 0..k {
                up[r][i] = b.add_edge(ids[r - 1][i], ids[r][i]);
            }
            for i in 0..k {
                ring[r][i] = b.add_edge(ids[r][i], ids[r][(i + 1) % k]);
            }
        }
        for (i, &h) in walk.iter().enumerate() {
            vertical[h] = 2 * up[1][i];
        }
        // Walking the ring in walk order keeps the face on the right: the
        // rotation is next, outward, previous, inward.
        for r in 1..=grid_depth {
            for i in 0..k {
                let prev = (i + k - 1) % k;
                let mut rot = vec![2 * ring[r][i], 2 * up[r][i] + 1, 2 * ring[r][prev] + 1];
                if r < grid_depth {
                    rot.push(2 * up[r + 1][i]);
                }
                b.set_rotation(ids[r][i], rot);
            }
        }
    }
    for v in g.vertices() {
        let rot = g
            .rotation(v)
            .iter()
            .flat_map(|&h| [vertical[h], copied[h]])
            .collect();
        b.set_rotation(v, rot);
        b.set_frontier(v, g.is_frontier(v));
        b.set_tag(v, g.tag(v));
    }
    Ok(ExtendedSpeiser {
        graph: b.build()?,
        base_count: nv,
        columns,
    })
}
