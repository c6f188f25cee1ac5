//! Refinements of planar graphs: the four-triangle subdivision, refinement
//! checks and the two transfers of vertex metrics between a graph and a
//! semi-bounded refinement.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    edge_of, trace_faces, EdgeId, FaceId, GraphBuilder, RotationGraph, VertexId,
};

/// Vertex weights `m : V -> [0, inf)`.
#[derive(Clone, Debug, PartialEq)]
pub struct VMetric {
    pub weights: Vec<f64>,
}

impl VMetric {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some(v) = weights.iter().position(|w| !(*w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "weight at vertex {v} is {} (need finite, >= 0)",
                weights[v]
            )));
        }
        Ok(Self { weights })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            weights: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `sum m(v)^2`.
    pub fn area(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum()
    }

    /// `sum m(v)` over the vertices of a path (repeats counted once).
    pub fn length(&self, path: &[VertexId]) -> f64 {
        let mut seen = HashSet::new();
        path.iter()
            .filter(|v| seen.insert(**v))
            .map(|&v| self.weights[v])
            .sum()
    }

    pub fn to_json(&self) -> String {
        let map: BTreeMap<String, f64> = self
            .weights
            .iter()
            .enumerate()
            .map(|(v, w)| (v.to_string(), *w))
            .collect();
        serde_json::to_string(&map).expect("map serialises")
    }

    pub fn from_json(s: &str, vertex_count: usize) -> Result<Self> {
        let map: BTreeMap<String, f64> = serde_json::from_str(s)?;
        let mut weights = vec![0.0; vertex_count];
        for (k, w) in map {
            let v: usize = k
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad vertex key {k:?}")))?;
            *weights.get_mut(v).ok_or(Error::UnknownVertex(v))? = w;
        }
        Self::new(weights)
    }
}

/// Which cell of the coarse graph a refined vertex comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Vertex(VertexId),
    Edge(EdgeId),
    Face(FaceId),
}

/// Cell correspondence between a graph and a refinement of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementMap {
    pub vertex_origin: Vec<Origin>,
    /// Refined edges along each coarse edge, from its first to its second
    /// endpoint.
    pub edge_cover: Vec<Vec<EdgeId>>,
    /// Refined faces tiling each coarse interior face (refined face ids are
    /// those of [`trace_faces`]).
    pub face_cover: BTreeMap<FaceId, Vec<FaceId>>,
}

impl RefinementMap {
    /// The map of a graph onto itself.
    pub fn identity(g: &RotationGraph) -> Self {
        let faces = trace_faces(g);
        Self {
            vertex_origin: g.vertices().map(Origin::Vertex).collect(),
            edge_cover: g.edges().map(|e| vec![e]).collect(),
            face_cover: faces.interior().map(|f| (f, vec![f])).collect(),
        }
    }

    /// Refined vertex standing on each coarse vertex.
    fn vertex_images(&self, coarse_vertices: usize) -> Result<Vec<VertexId>> {
        let mut img = vec![usize::MAX; coarse_vertices];
        for (w, o) in self.vertex_origin.iter().enumerate() {
            if let Origin::Vertex(v) = *o {
                *img.get_mut(v).ok_or(Error::UnknownVertex(v))? = w;
            }
        }
        if let Some(v) = img.iter().position(|&w| w == usize::MAX) {
            return Err(Error::Precondition(format!("coarse vertex {v} has no image")));
        }
        Ok(img)
    }
}

/// Splits each interior triangle into four by joining its edge midpoints.
///
/// Ids: original vertices keep theirs, the midpoint of edge `e` is `|V| + e`.
/// Edge `e` becomes refined edges `2e` (first endpoint side) and `2e + 1`.
/// A midpoint is frontier iff its edge bounds a frontier face.
pub fn subdivide4(g: &RotationGraph) -> Result<(RotationGraph, RefinementMap)> {
    let faces = trace_faces(g);
    if let Some(f) = faces.interior().find(|&f| faces.walk(f).len() != 3) {
        return Err(Error::NotTriangulation {
            face: f,
            len: faces.walk(f).len(),
        });
    }
    let nv = g.vertex_count();
    let ne = g.edge_count();
    let mut b = GraphBuilder::with_vertices(nv + ne);
    let mut to_mid = vec![0; g.half_edge_count()];
    for e in g.edges() {
        for h in [2 * e, 2 * e + 1] {
            to_mid[h] = 2 * b.add_edge(g.origin(h), nv + e);
        }
    }
    // inner[h]: refined edge from the midpoint of h to that of its face successor.
    let mut inner = vec![usize::MAX; g.half_edge_count()];
    let mut prev = vec![usize::MAX; g.half_edge_count()];
    for f in faces.interior() {
        let walk = faces.walk(f);
        for i in 0..3 {
            let (h, nxt) = (walk[i], walk[(i + 1) % 3]);
            inner[h] = b.add_edge(nv + edge_of(h), nv + edge_of(nxt));
            prev[nxt] = h;
        }
    }
    for v in g.vertices() {
        b.set_rotation(v, g.rotation(v).iter().map(|&h| to_mid[h]).collect());
        b.set_frontier(v, g.is_frontier(v));
        b.set_tag(v, g.tag(v));
    }
    for e in g.edges() {
        let mut rot = Vec::with_capacity(6);
        let mut open = false;
        // Towards the second endpoint, the face left of 2e, towards the
        // first endpoint, the face right of 2e.
        for s in [2 * e + 1, 2 * e] {
            rot.push(to_mid[s] ^ 1);
            if inner[s] == usize::MAX {
                open = true;
            } else {
                rot.push(2 * inner[prev[s]] + 1);
                rot.push(2 * inner[s]);
            }
        }
        b.set_rotation(nv + e, rot);
        b.set_frontier(nv + e, open);
    }
    let refined = b.build()?;

    let rf = trace_faces(&refined);
    let mut face_cover = BTreeMap::new();
    for f in faces.interior() {
        let mut cover: Vec<FaceId> = faces.walk(f).iter().map(|&h| rf.face_of(to_mid[h])).collect();
        cover.push(rf.face_of(2 * inner[faces.walk(f)[0]]));
        face_cover.insert(f, cover);
    }
    let map = RefinementMap {
        vertex_origin: (0..nv)
            .map(Origin::Vertex)
            .chain((0..ne).map(Origin::Edge))
            .collect(),
        edge_cover: g.edges().map(|e| vec![2 * e, 2 * e + 1]).collect(),
        face_cover,
    };
    Ok((refined, map))
}

/// Refinement map of the `2k`-triangle subdivision produced by
/// [`crate::speiser::lambda_triangulation`].
pub fn lambda_refinement(g: &RotationGraph) -> Result<(RotationGraph, RefinementMap)> {
    let lam = crate::speiser::lambda_triangulation(g)?;
    let faces = trace_faces(g);
    let (nv, ne) = (g.vertex_count(), g.edge_count());
    let mut vertex_origin: Vec<Origin> = (0..nv)
        .map(Origin::Vertex)
        .chain((0..ne).map(Origin::Edge))
        .collect();
    let interior: Vec<FaceId> = faces.interior().collect();
    vertex_origin.extend(interior.iter().map(|&f| Origin::Face(f)));
    let lf = trace_faces(&lam);
    let mut face_cover: BTreeMap<FaceId, Vec<FaceId>> = BTreeMap::new();
    for rf in lf.interior() {
        for c in lf.corners(&lam, rf) {
            if let Some(Origin::Face(f)) = vertex_origin.get(c) {
                face_cover.entry(*f).or_default().push(rf);
            }
        }
    }
    let map = RefinementMap {
        vertex_origin,
        edge_cover: g.edges().map(|e| vec![2 * e, 2 * e + 1]).collect(),
        face_cover,
    };
    Ok((lam, map))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementReport {
    pub is_refinement: bool,
    pub is_semi_bounded: bool,
    /// Most refined vertices on one closed coarse edge.
    pub m_edge: usize,
    pub is_bounded: bool,
    /// Most refined vertices on one closed coarse face.
    pub m_face: usize,
    pub violations: Vec<String>,
}

/// Checks that the covers in `map` tile the edges and interior faces of `g`
/// and measures the constants `M_edge`, `M_face`.
pub fn check_refinement(
    g: &RotationGraph,
    g_ref: &RotationGraph,
    map: &RefinementMap,
) -> RefinementReport {
    let mut violations = Vec::new();
    let faces = trace_faces(g);
    let rf = trace_faces(g_ref);
    if map.vertex_origin.len() != g_ref.vertex_count() {
        violations.push("vertex_origin length differs from refined vertex count".into());
    }
    let img = match map.vertex_images(g.vertex_count()) {
        Ok(img) => Some(img),
        Err(e) => {
            violations.push(e.to_string());
            None
        }
    };
    let mut m_edge = 0;
    if map.edge_cover.len() != g.edge_count() {
        violations.push("edge cover missing edges".into());
    }
    for (e, cover) in map.edge_cover.iter().enumerate().take(g.edge_count()) {
        let (u, v) = g.endpoints(e);
        let Some(img) = &img else { break };
        let mut at = img[u];
        let mut count = 1;
        let mut ok = !cover.is_empty();
        for (i, &re) in cover.iter().enumerate() {
            if re >= g_ref.edge_count() {
                ok = false;
                break;
            }
            let (a, b) = g_ref.endpoints(re);
            let next = if a == at {
                b
            } else if b == at {
                a
            } else {
                ok = false;
                break;
            };
            let last = i + 1 == cover.len();
            let expected = if last {
                next == img[v]
            } else {
                map.vertex_origin.get(next) == Some(&Origin::Edge(e))
            };
            ok &= expected;
            at = next;
            count += 1;
        }
        if !ok {
            violations.push(format!("edge {e}: cover is not a path from {u} to {v}"));
        }
        m_edge = m_edge.max(count);
    }

    let mut used = vec![0usize; rf.len()];
    let mut m_face = 0;
    for f in faces.interior() {
        let Some(cover) = map.face_cover.get(&f) else {
            violations.push(format!("face {f} has no cover"));
            continue;
        };
        let mut verts = HashSet::new();
        for &r in cover {
            if r >= rf.len() {
                violations.push(format!("face {f}: unknown refined face {r}"));
                continue;
            }
            used[r] += 1;
            verts.extend(rf.corners(g_ref, r));
        }
        m_face = m_face.max(verts.len());
    }
    for r in rf.interior() {
        if used[r] != 1 {
            violations.push(format!("refined face {r} covered {} times", used[r]));
        }
    }
    let is_refinement = violations.is_empty();
    RefinementReport {
        is_refinement,
        is_semi_bounded: is_refinement,
        m_edge,
        is_bounded: is_refinement,
        m_face,
        violations,
    }
}

fn require_refinement(
    g: &RotationGraph,
    g_ref: &RotationGraph,
    map: &RefinementMap,
) -> Result<RefinementReport> {
    let report = check_refinement(g, g_ref, map);
    if !report.is_semi_bounded {
        return Err(Error::Precondition(format!(
            "not a semi-bounded refinement: {}",
            report.violations.join("; ")
        )));
    }
    Ok(report)
}

/// Coarse metric `m(v) = 2M max { m'(w) : w in E_v }`, where `E_v` holds the
/// refined vertex on `v` and the refined vertices inside the edges at `v`,
/// and `M = M_edge`.
pub fn coarsen_metric(
    g: &RotationGraph,
    g_ref: &RotationGraph,
    map: &RefinementMap,
    m_ref: &VMetric,
) -> Result<VMetric> {
    let m_ref = VMetric::new(m_ref.weights.clone())?;
    if m_ref.len() != g_ref.vertex_count() {
        return Err(Error::InvalidArgument("metric length differs from vertex count".into()));
    }
    let report = require_refinement(g, g_ref, map)?;
    let img = map.vertex_images(g.vertex_count())?;
    let scale = 2.0 * report.m_edge as f64;
    let mut best: Vec<f64> = img.iter().map(|&w| m_ref.weights[w]).collect();
    for (e, cover) in map.edge_cover.iter().enumerate() {
        let (u, v) = g.endpoints(e);
        let inside = cover
            .iter()
            .flat_map(|&re| {
                let (a, b) = g_ref.endpoints(re);
                [a, b]
            })
            .filter(|&w| map.vertex_origin[w] == Origin::Edge(e))
            .map(|w| m_ref.weights[w])
            .fold(0.0, f64::max);
        best[u] = best[u].max(inside);
        best[v] = best[v].max(inside);
    }
    Ok(VMetric {
        weights: best.into_iter().map(|x| scale * x).collect(),
    })
}

/// Fine metric from a coarse one on a graph with property `p(K)`:
/// `m'(w) = m(w)` on high-degree vertices `Z`, `3 max { m(v) : v in V_w \ Z }`
/// on the rest of the 1-skeleton and 0 inside faces. `V_w` is the closed
/// neighbourhood of a coarse vertex, or the two endpoints of the edge
/// containing `w`.
pub fn refine_metric(
    g: &RotationGraph,
    g_ref: &RotationGraph,
    map: &RefinementMap,
    m: &VMetric,
    k: usize,
) -> Result<VMetric> {
    let m = VMetric::new(m.weights.clone())?;
    if m.len() != g.vertex_count() {
        return Err(Error::InvalidArgument("metric length differs from vertex count".into()));
    }
    require_refinement(g, g_ref, map)?;
    let in_z = |v: VertexId| g.degree(v) > k;
    let best_outside_z = |vs: &mut dyn Iterator<Item = VertexId>, w: VertexId| -> Result<f64> {
        let mut best: Option<f64> = None;
        for v in vs.filter(|&v| !in_z(v)) {
            best = Some(best.map_or(m.weights[v], |b: f64| b.max(m.weights[v])));
        }
        best.map(|b| 3.0 * b).ok_or_else(|| {
            Error::Precondition(format!("refined vertex {w}: V_w \\ Z is empty, p({k}) fails"))
        })
    };
    let mut out = vec![0.0; g_ref.vertex_count()];
    for (w, o) in map.vertex_origin.iter().enumerate() {
        out[w] = match *o {
            Origin::Vertex(v) if in_z(v) => m.weights[v],
            Origin::Vertex(v) => {
                best_outside_z(&mut std::iter::once(v).chain(g.neighbors(v)), w)?
            }
            Origin::Edge(e) => {
                let (a, b) = g.endpoints(e);
                best_outside_z(&mut [a, b].into_iter(), w)?
            }
            Origin::Face(_) => 0.0,
        };
    }
    Ok(VMetric { weights: out })
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::graph::classify;
    use crate::lattice;

    fn euler(g: &RotationGraph) -> i64 {
        g.vertex_count() as i64 - g.edge_count() as i64 + trace_faces(g).len() as i64
    }

    fn random_metric(n: usize, rng: &mut ChaCha8Rng) -> VMetric {
        VMetric::new((0..n).map(|_| rng.gen::<f64>()).collect()).unwrap()
    }

    #[test]
    fn octahedron_subdivision_counts() {
        let (r, map) = subdivide4(&lattice::octahedron()).unwrap();
        assert_eq!(r.vertex_count(), 18);
        assert_eq!(r.edge_count(), 48);
        assert_eq!(trace_faces(&r).len(), 32);
        assert_eq!(euler(&r), 2);
        assert!(classify(&r).is_disk_triangulation);
        let rep = check_refinement(&lattice::octahedron(), &r, &map);
        assert!(rep.is_refinement, "{:?}", rep.violations);
        assert_eq!((rep.m_edge, rep.m_face), (3, 6));
        // Midpoints have degree 6, originals keep theirs.
        assert!((6..18).all(|w| r.degree(w) == 6));
        assert!((0..6).all(|v| r.degree(v) == 4));
    }

    #[test]
    fn single_triangle() {
        let g = lattice::cycle(3).unwrap();
        let (r, _) = subdivide4(&g).unwrap();
        // Both sides of the triangle are faces: 4 + 4 triangles, 3 midpoints.
        assert_eq!(r.vertex_count(), 6);
        let f = trace_faces(&r);
        assert_eq!(f.len(), 8);
        assert!(f.walks().iter().all(|w| w.len() == 3));
    }

    #[test]
    fn rejects_non_triangles() {
        assert!(matches!(
            subdivide4(&lattice::cube()),
            Err(Error::NotTriangulation { len: 4, .. })
        ));
    }

    #[test]
    fn heptagonal_patch_gains_p6() {
        let g = lattice::regular_triangulation(8, 4).unwrap();
        assert_eq!(classify(&g).p_of, Some(8));
        let (r, map) = subdivide4(&g).unwrap();
        assert!(classify(&r).p_of.unwrap() <= 6);
        assert!(classify(&r).is_disk_triangulation);
        let rep = check_refinement(&g, &r, &map);
        assert!(rep.is_refinement, "{:?}", rep.violations);
        assert_eq!((rep.m_edge, rep.m_face), (3, 6));
    }

    #[test]
    fn identity_refinement() {
        let g = lattice::cube();
        let rep = check_refinement(&g, &g, &RefinementMap::identity(&g));
        assert!(rep.is_refinement);
        assert_eq!(rep.m_edge, 2);
    }

    #[test]
    fn lambda_is_semi_bounded() {
        let g = crate::speiser::build_octagonal_speiser(3).unwrap();
        let (lam, map) = lambda_refinement(&g).unwrap();
        let rep = check_refinement(&g, &lam, &map);
        assert!(rep.is_refinement, "{:?}", rep.violations);
        assert_eq!(rep.m_edge, 3);
        // An octagon holds 8 corners, 8 midpoints and its centre.
        assert_eq!(rep.m_face, 17);
    }

    #[test]
    fn broken_cover_reported() {
        let g = lattice::octahedron();
        let (r, mut map) = subdivide4(&g).unwrap();
        map.edge_cover[0].swap(0, 1);
        let rep = check_refinement(&g, &r, &map);
        assert!(!rep.is_refinement);
        assert!(!rep.violations.is_empty());
    }

    #[test]
    fn coarsen_on_one_edge() {
        let g = lattice::path(1);
        let r = lattice::path(2);
        // Refined path 0 - 1 - 2 with the midpoint at 1; coarse 1 sits on 2.
        let map = RefinementMap {
            vertex_origin: vec![Origin::Vertex(0), Origin::Edge(0), Origin::Vertex(1)],
            edge_cover: vec![vec![0, 1]],
            face_cover: BTreeMap::from([(0, vec![0])]),
        };
        let (a, b, c) = (0.3, 0.7, 0.2);
        let m = coarsen_metric(&g, &r, &map, &VMetric::new(vec![a, b, c]).unwrap()).unwrap();
        assert_eq!(m.weights, vec![6.0 * b, 6.0 * b]);
        let m = coarsen_metric(&g, &r, &map, &VMetric::new(vec![0.9, b, c]).unwrap()).unwrap();
        assert_eq!(m.weights, vec![6.0 * 0.9, 6.0 * b]);
        let z = coarsen_metric(&g, &r, &map, &VMetric::zeros(3)).unwrap();
        assert_eq!(z.weights, vec![0.0, 0.0]);
        assert!(VMetric::new(vec![-1.0]).is_err());
    }

    #[test]
    fn coarsen_inequalities_hold() {
        let g = lattice::regular_triangulation(8, 3).unwrap();
        let (r, map) = subdivide4(&g).unwrap();
        let big_m = 3.0;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let mr = random_metric(r.vertex_count(), &mut rng);
            let m = coarsen_metric(&g, &r, &map, &mr).unwrap();
            assert!(m.area() <= 8.0 * big_m * big_m * mr.area());
            for e in g.edges() {
                let (u, v) = g.endpoints(e);
                let on_edge = mr.weights[u] + mr.weights[v] + mr.weights[g.vertex_count() + e];
                assert!(on_edge <= 0.5 * (m.weights[u] + m.weights[v]) + 1e-12);
            }
        }
    }

    #[test]
    fn refine_needs_property_p() {
        let g = lattice::regular_triangulation(8, 3).unwrap();
        let (r, map) = subdivide4(&g).unwrap();
        let m = VMetric::new(vec![1.0; g.vertex_count()]).unwrap();
        assert!(matches!(refine_metric(&g, &r, &map, &m, 6), Err(Error::Precondition(_))));
    }

    #[test]
    fn refine_inequality_holds() {
        let base = lattice::regular_triangulation(8, 3).unwrap();
        let (g, _) = subdivide4(&base).unwrap();
        let (r, map) = subdivide4(&g).unwrap();
        let k = 6;
        let big_m = check_refinement(&g, &r, &map).m_edge as f64;
        let z = refine_metric(&g, &r, &map, &VMetric::zeros(g.vertex_count()), k).unwrap();
        assert!(z.weights.iter().all(|&x| x == 0.0));
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let m = random_metric(g.vertex_count(), &mut rng);
            let mr = refine_metric(&g, &r, &map, &m, k).unwrap();
            assert!(mr.area() <= 9.0 * k as f64 * big_m * m.area());
            // High-degree vertices copy their weight.
            for v in g.vertices().filter(|&v| g.degree(v) > k) {
                assert_eq!(mr.weights[v], m.weights[v]);
            }
        }
    }

    #[test]
    fn metric_json_round_trip() {
        let m = VMetric::new(vec![0.5, 0.0, 2.25]).unwrap();
        assert_eq!(VMetric::from_json(&m.to_json(), 3).unwrap(), m);
        assert!(VMetric::from_json(r#"{"7": 1.0}"#, 3).is_err());
    }
}
