use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::{trace_faces, RotationGraph, Tag};

/// Structural flags computed on the non-frontier part of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphClassification {
    pub is_bipartite: bool,
    pub homogeneous_degree: Option<usize>,
    pub is_disk_triangulation: bool,
    pub max_degree: Option<usize>,
    /// Minimal `K` with `min(deg v, deg w) <= K` on every edge whose two
    /// endpoints are off the frontier.
    pub p_of: Option<usize>,
    pub has_multiple_edges: bool,
}

/// Two-colouring starting with `Circle` at vertex 0, if one exists.
pub fn bipartition(g: &RotationGraph) -> Option<Vec<Tag>> {
    let mut color: Vec<Option<Tag>> = vec![None; g.vertex_count()];
    for start in g.vertices() {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(Tag::Circle);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let c = color[v].unwrap();
            for w in g.neighbors(v) {
                match color[w] {
                    None => {
                        color[w] = Some(c.flip());
                        queue.push_back(w);
                    }
                    Some(cw) if cw == c => return None,
                    _ => {}
                }
            }
        }
    }
    Some(color.into_iter().map(Option::unwrap).collect())
}

fn has_multiple_edges(g: &RotationGraph) -> bool {
    let mut seen = HashSet::new();
    g.edges().any(|e| {
        let (u, v) = g.endpoints(e);
        !seen.insert((u.min(v), u.max(v)))
    })
}

pub fn classify(g: &RotationGraph) -> GraphClassification {
    let interior = || g.vertices().filter(|&v| !g.is_frontier(v));
    let degrees: Vec<usize> = interior().map(|v| g.degree(v)).collect();
    let homogeneous_degree = match degrees.first() {
        Some(&d) if degrees.iter().all(|&x| x == d) => Some(d),
        _ => None,
    };
    let p_of = g
        .edges()
        .filter_map(|e| {
            let (u, v) = g.endpoints(e);
            (!g.is_frontier(u) && !g.is_frontier(v)).then(|| g.degree(u).min(g.degree(v)))
        })
        .max();
    let multi = has_multiple_edges(g);
    let faces = trace_faces(g);
    let all_triangles = faces.interior_count() > 0
        && faces.interior().all(|f| faces.walk(f).len() == 3);
    // Closed surface when every face is kept, a disk when one boundary is cut off.
    let chi = g.vertex_count() as i64 - g.edge_count() as i64 + faces.interior_count() as i64;
    let euler_ok = if faces.interior_count() == faces.len() { chi == 2 } else { chi == 1 };
    GraphClassification {
        is_bipartite: bipartition(g).is_some(),
        homogeneous_degree,
        is_disk_triangulation: all_triangles && !multi && euler_ok,
        max_degree: degrees.iter().copied().max(),
        p_of,
        has_multiple_edges: multi,
    }
}
