use std::collections::VecDeque;

use super::{twin, HalfEdgeId, RotationGraph};

/// Code of the rooted traversal that starts at half-edge `start`. Two rooted
/// maps are orientation-preservingly isomorphic iff their codes agree.
fn rooted_code(g: &RotationGraph, start: HalfEdgeId) -> Vec<usize> {
    let n = g.vertex_count();
    let mut label = vec![usize::MAX; n];
    let mut entry = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let root = g.origin(start);
    label[root] = 0;
    entry[root] = start;
    let mut next = 1;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        let rot = g.rotation(v);
        let base = g.slot(entry[v]);
        for i in 0..rot.len() {
            let h = rot[(base + i) % rot.len()];
            let w = g.head(h);
            if label[w] == usize::MAX {
                label[w] = next;
                next += 1;
                entry[w] = twin(h);
                queue.push_back(w);
            }
        }
    }
    let mut code = vec![n, g.edge_count()];
    for &v in &order {
        let rot = g.rotation(v);
        let base = g.slot(entry[v]);
        code.push(rot.len());
        code.push(g.is_frontier(v) as usize);
        for i in 0..rot.len() {
            let h = rot[(base + i) % rot.len()];
            let w = g.head(h);
            let deg_w = g.degree(w);
            code.push(label[w]);
            code.push((g.slot(twin(h)) + deg_w - g.slot(entry[w])) % deg_w);
        }
    }
    code
}

/// Lexicographically least rooted code over all starting half-edges.
pub fn canonical_code(g: &RotationGraph) -> Vec<usize> {
    (0..g.half_edge_count())
        .map(|h| rooted_code(g, h))
        .min()
        .unwrap_or_else(|| vec![g.vertex_count(), 0])
}

/// Rotation-system isomorphism, allowing a global reflection.
pub fn is_isomorphic(a: &RotationGraph, b: &RotationGraph) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    if a.half_edge_count() == 0 {
        return a.vertex_count() == b.vertex_count();
    }
    let target = rooted_code(b, 0);
    let mirror = a.mirrored();
    (0..a.half_edge_count())
        .any(|h| rooted_code(a, h) == target || rooted_code(&mirror, h) == target)
}
