use super::{FaceId, GraphBuilder, HalfEdgeId, RotationGraph, VertexId};
use crate::error::{Error, Result};

/// Face boundary walks of a rotation system.
#[derive(Clone, Debug)]
pub struct Faces {
    walks: Vec<Vec<HalfEdgeId>>,
    face_of: Vec<FaceId>,
    frontier_face: Vec<bool>,
}

impl Faces {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    /// Half-edges of face `f` in walk order; the face lies to their right.
    pub fn walk(&self, f: FaceId) -> &[HalfEdgeId] {
        &self.walks[f]
    }

    pub fn walks(&self) -> &[Vec<HalfEdgeId>] {
        &self.walks
    }

    pub fn face_of(&self, h: HalfEdgeId) -> FaceId {
        self.face_of[h]
    }

    /// Truncation boundary faces; these may not be faces of the infinite graph.
    pub fn is_frontier_face(&self, f: FaceId) -> bool {
        self.frontier_face[f]
    }

    pub fn interior(&self) -> impl Iterator<Item = FaceId> + '_ {
        (0..self.walks.len()).filter(move |&f| !self.frontier_face[f])
    }

    pub fn interior_count(&self) -> usize {
        self.frontier_face.iter().filter(|&&b| !b).count()
    }

    /// Vertices met along the walk of `f` (one per corner).
    pub fn corners<'a>(
        &'a self,
        g: &'a RotationGraph,
        f: FaceId,
    ) -> impl Iterator<Item = VertexId> + 'a {
        self.walks[f].iter().map(move |&h| g.origin(h))
    }
}

/// Partitions half-edges into face walks via `next = rotation successor of
/// the twin`. Faces are numbered by their smallest half-edge.
///
/// On a truncation (non-empty frontier) a face is a frontier face when every
/// corner sits at a frontier vertex, or when it has the most frontier corners
/// of all faces (the outer face; ties go to the lowest index).
pub fn trace_faces(g: &RotationGraph) -> Faces {
    let n = g.half_edge_count();
    let mut face_of = vec![usize::MAX; n];
    let mut walks = Vec::new();
    for start in 0..n {
        if face_of[start] != usize::MAX {
            continue;
        }
        let f = walks.len();
        let mut walk = Vec::new();
        let mut h = start;
        loop {
            face_of[h] = f;
            walk.push(h);
            h = g.face_next(h);
            if h == start {
                break;
            }
        }
        walks.push(walk);
    }
    let mut frontier_face = vec![false; walks.len()];
    if g.has_frontier() {
        let counts: Vec<usize> = walks
            .iter()
            .map(|w| w.iter().filter(|&&h| g.is_frontier(g.origin(h))).count())
            .collect();
        let mut best = 0;
        for (f, w) in walks.iter().enumerate() {
            if counts[f] == w.len() {
                frontier_face[f] = true;
            }
            if counts[f] > counts[best] {
                best = f;
            }
        }
        if counts[best] > 0 {
            frontier_face[best] = true;
        }
    }
    Faces {
        walks,
        face_of,
        frontier_face,
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DualOptions {
    /// Build the dual of the interior faces only, dropping frontier faces.
    pub drop_frontier_faces: bool,
}

/// Planar dual. Dual vertex `i` is the `i`-th kept face; dual edge ids follow
/// primal edge order. Dual vertices adjacent to a dropped face are frontier.
pub fn dual(g: &RotationGraph, opts: DualOptions) -> Result<RotationGraph> {
    let faces = trace_faces(g);
    let has_frontier_faces = (0..faces.len()).any(|f| faces.is_frontier_face(f));
    if has_frontier_faces && !opts.drop_frontier_faces {
        return Err(Error::AmbiguousDual);
    }
    let mut dual_id = vec![usize::MAX; faces.len()];
    let mut b = GraphBuilder::new();
    for f in faces.interior() {
        dual_id[f] = b.add_vertex();
    }
    let mut dual_half = vec![usize::MAX; g.half_edge_count()];
    for e in g.edges() {
        let (fa, fb) = (faces.face_of(2 * e), faces.face_of(2 * e + 1));
        if faces.is_frontier_face(fa) || faces.is_frontier_face(fb) {
            continue;
        }
        if fa == fb {
            return Err(Error::BridgeInDual(e));
        }
        let de = b.add_edge(dual_id[fa], dual_id[fb]);
        dual_half[2 * e] = 2 * de;
        dual_half[2 * e + 1] = 2 * de + 1;
    }
    for f in faces.interior() {
        let walk = faces.walk(f);
        // The walk runs clockwise around the face, so reverse it.
        let rot: Vec<_> = walk
            .iter()
            .rev()
            .filter(|&&h| dual_half[h] != usize::MAX)
            .map(|&h| dual_half[h])
            .collect();
        let open = rot.len() < walk.len();
        b.set_rotation(dual_id[f], rot);
        b.set_frontier(dual_id[f], open);
    }
    b.build()
}
