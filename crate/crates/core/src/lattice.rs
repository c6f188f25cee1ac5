//! Small generators: polyhedra, lattice patches, trees and the regular
//! triangulations `{3, q}` grown layer by layer.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, RotationGraph, VertexId};

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Rotation system of a convex polyhedron centred at the origin: neighbours
/// sorted counter-clockwise as seen from outside.
pub fn convex_polyhedron(points: &[[f64; 3]], edges: &[(usize, usize)]) -> Result<RotationGraph> {
    let mut nbrs = vec![Vec::new(); points.len()];
    for &(u, v) in edges {
        nbrs[u].push(v);
        nbrs[v].push(u);
    }
    for (p, list) in nbrs.iter_mut().enumerate() {
        let c = points[p];
        let norm = dot(c, c).sqrt();
        let n = [c[0] / norm, c[1] / norm, c[2] / norm];
        let seed = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
        let k = dot(seed, n);
        let u = sub(seed, [k * n[0], k * n[1], k * n[2]]);
        let w = cross(n, u);
        list.sort_by(|&a, &b| {
            let angle = |q: usize| {
                let d = sub(points[q], c);
                dot(d, w).atan2(dot(d, u))
            };
            angle(a).total_cmp(&angle(b))
        });
    }
    GraphBuilder::from_ccw_neighbors(&nbrs)
}

pub fn octahedron() -> RotationGraph {
    let pts = [
        [0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [-1.0, 0.0, 0.0],
        [0.0, -1.0, 0.0],
    ];
    let mut edges = Vec::new();
    for pole in [0, 1] {
        for eq in 2..6 {
            edges.push((pole, eq));
        }
    }
    for i in 0..4 {
        edges.push((2 + i, 2 + (i + 1) % 4));
    }
    convex_polyhedron(&pts, &edges).expect("octahedron is valid")
}

pub fn cube() -> RotationGraph {
    let pts: Vec<[f64; 3]> = (0..8)
        .map(|i| {
            let s = |bit: usize| if i >> bit & 1 == 1 { 1.0 } else { -1.0 };
            [s(0), s(1), s(2)]
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..8usize {
        for bit in 0..3 {
            let j = i ^ (1 << bit);
            if i < j {
                edges.push((i, j));
            }
        }
    }
    convex_polyhedron(&pts, &edges).expect("cube is valid")
}

/// Cycle on `q` vertices drawn on the sphere: two faces, both interior.
pub fn cycle(q: usize) -> Result<RotationGraph> {
    if q < 2 {
        return Err(Error::InvalidArgument("cycle needs at least 2 vertices".into()));
    }
    let mut b = GraphBuilder::with_vertices(q);
    let es: Vec<_> = (0..q).map(|i| b.add_edge(i, (i + 1) % q)).collect();
    for i in 0..q {
        let fwd = b.half_edge_at(es[i], i);
        let back = b.half_edge_at(es[(i + q - 1) % q], i);
        b.set_rotation(i, vec![fwd, back]);
    }
    b.build()
}

/// Path `0 - 1 - ... - len`.
pub fn path(len: usize) -> RotationGraph {
    let mut lists = vec![Vec::new(); len + 1];
    for i in 0..len {
        lists[i].push(i + 1);
        lists[i + 1].push(i);
    }
    GraphBuilder::from_ccw_neighbors(&lists).expect("path is valid")
}

/// Rooted tree with root degree `degree` and `degree - 1` children below,
/// grown to `depth`; leaves form the frontier. Root is vertex 0.
pub fn regular_tree(degree: usize, depth: usize) -> RotationGraph {
    let mut lists: Vec<Vec<VertexId>> = vec![Vec::new()];
    let mut level = vec![0];
    let mut leaves = vec![true];
    for d in 0..depth {
        let mut next = Vec::new();
        for &p in &level {
            let kids = if d == 0 { degree } else { degree - 1 };
            leaves[p] = false;
            for _ in 0..kids {
                let c = lists.len();
                lists.push(vec![p]);
                leaves.push(true);
                lists[p].push(c);
                next.push(c);
            }
        }
        level = next;
    }
    let g = GraphBuilder::from_ccw_neighbors(&lists).expect("tree is valid");
    let frontier = if depth == 0 { vec![false] } else { leaves };
    g.with_frontier(frontier)
}

/// `Z^2` patch `[-r, r]^2`; the boundary square is the frontier. Returns the
/// graph and the centre vertex.
pub fn square_grid(r: usize) -> (RotationGraph, VertexId) {
    let side = 2 * r + 1;
    let id = |x: usize, y: usize| y * side + x;
    let mut lists = vec![Vec::new(); side * side];
    for y in 0..side {
        for x in 0..side {
            let l = &mut lists[id(x, y)];
            if x + 1 < side {
                l.push(id(x + 1, y));
            }
            if y + 1 < side {
                l.push(id(x, y + 1));
            }
            if x > 0 {
                l.push(id(x - 1, y));
            }
            if y > 0 {
                l.push(id(x, y - 1));
            }
        }
    }
    let frontier = (0..side * side)
        .map(|i| {
            let (x, y) = (i % side, i / side);
            x == 0 || y == 0 || x == side - 1 || y == side - 1
        })
        .collect();
    let g = GraphBuilder::from_ccw_neighbors(&lists).expect("grid is valid");
    (g.with_frontier(frontier), id(r, r))
}

/// Ball of the regular triangulation in which every interior vertex has
/// degree `q` (`q = 6`: hexagonal lattice, `q >= 7`: hyperbolic `{3, q}`).
///
/// Built by vertex completion: the boundary cycle is processed in order and
/// each boundary vertex receives the new neighbours it is missing. Vertex 0
/// is the root; layer `layers` is the frontier.
pub fn regular_triangulation(q: usize, layers: usize) -> Result<RotationGraph> {
    if q < 6 {
        return Err(Error::InvalidArgument(format!("degree {q} < 6 closes up; use a polyhedron")));
    }
    if layers == 0 {
        return Err(Error::InvalidArgument("need at least one layer".into()));
    }
    // Counter-clockwise neighbour lists. For a boundary vertex the outer gap
    // sits right after its boundary predecessor.
    let mut nbrs: Vec<Vec<VertexId>> = vec![(1..=q).collect()];
    for i in 1..=q {
        let prev = if i == 1 { q } else { i - 1 };
        let next = if i == q { 1 } else { i + 1 };
        nbrs.push(vec![0, prev, next]);
    }
    let mut boundary: Vec<VertexId> = (1..=q).collect();
    let mut layer_of: Vec<usize> = std::iter::once(0).chain(std::iter::repeat(1).take(q)).collect();

    fn insert_after(list: &mut Vec<VertexId>, anchor: VertexId, items: &[VertexId]) {
        let pos = list.iter().position(|&x| x == anchor).expect("anchor present");
        for (k, &it) in items.iter().enumerate() {
            list.insert(pos + 1 + k, it);
        }
    }
    fn insert_before(list: &mut Vec<VertexId>, anchor: VertexId, item: VertexId) {
        let pos = list.iter().position(|&x| x == anchor).expect("anchor present");
        list.insert(pos, item);
    }

    for layer in 1..layers {
        let current = boundary.clone();
        // Cyclic boundary as successor/predecessor maps.
        let mut succ: HashMap<VertexId, VertexId> = HashMap::new();
        let mut pred: HashMap<VertexId, VertexId> = HashMap::new();
        for k in 0..boundary.len() {
            let (a, b) = (boundary[k], boundary[(k + 1) % boundary.len()]);
            succ.insert(a, b);
            pred.insert(b, a);
        }
        for &v in &current {
            let a = pred[&v];
            let b = succ[&v];
            let d = nbrs[v].len();
            if d > q {
                return Err(Error::Precondition(format!("vertex {v} exceeds degree {q}")));
            }
            let t = q - d;
            if t == 0 {
                insert_before(&mut nbrs[a], v, b);
                insert_after(&mut nbrs[b], v, &[a]);
                succ.insert(a, b);
                pred.insert(b, a);
            } else {
                let fresh: Vec<VertexId> = (0..t).map(|k| nbrs.len() + k).collect();
                for k in 0..t {
                    let p = if k == 0 { a } else { fresh[k - 1] };
                    let s = if k + 1 == t { b } else { fresh[k + 1] };
                    nbrs.push(vec![v, p, s]);
                    layer_of.push(layer + 1);
                }
                insert_after(&mut nbrs[v], a, &fresh);
                insert_before(&mut nbrs[a], v, fresh[0]);
                insert_after(&mut nbrs[b], v, &[fresh[t - 1]]);
                let mut chain = vec![a];
                chain.extend_from_slice(&fresh);
                chain.push(b);
                for win in chain.windows(2) {
                    succ.insert(win[0], win[1]);
                    pred.insert(win[1], win[0]);
                }
            }
            succ.remove(&v);
            pred.remove(&v);
        }
        let first = *succ.keys().min().expect("boundary non-empty");
        boundary = vec![first];
        let mut cur = succ[&first];
        while cur != first {
            boundary.push(cur);
            cur = succ[&cur];
        }
    }
    let g = GraphBuilder::from_ccw_neighbors(&nbrs)?;
    let frontier = (0..g.vertex_count()).map(|v| layer_of[v] == layers).collect();
    Ok(g.with_frontier(frontier))
}

/// Hexagonal-lattice triangulation ball of radius `n` around vertex 0.
pub fn hex_ball(n: usize) -> RotationGraph {
    regular_triangulation(6, n).expect("hex ball is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bfs_distances, bfs_layers, classify, trace_faces};

    #[test]
    fn layers_match_bfs_distance() {
        for (q, n) in [(6, 5), (7, 5), (8, 4), (9, 3)] {
            let g = regular_triangulation(q, n).unwrap();
            let dist = bfs_distances(&g, 0, None).unwrap();
            for v in g.vertices() {
                assert_eq!(g.is_frontier(v), dist[v] == Some(n), "q={q} v={v}");
                if !g.is_frontier(v) {
                    assert_eq!(g.degree(v), q);
                }
            }
            let c = classify(&g);
            assert!(c.is_disk_triangulation);
            assert_eq!(c.homogeneous_degree, Some(q));
        }
    }

    #[test]
    fn hex_spheres_have_6n_vertices() {
        let g = hex_ball(6);
        let sizes = bfs_layers(&g, 0, 6).unwrap().sphere_sizes();
        let want: Vec<usize> = (0..=6).map(|n| if n == 0 { 1 } else { 6 * n }).collect();
        assert_eq!(sizes, want);
    }

    #[test]
    fn heptagonal_growth_is_exponential() {
        // {3,7} sphere sizes obey s(n+1) = 3 s(n) - s(n-1) after n = 1.
        let g = regular_triangulation(7, 7).unwrap();
        let s = bfs_layers(&g, 0, 7).unwrap().sphere_sizes();
        assert_eq!(&s[..3], &[1, 7, 21]);
        for n in 2..6 {
            assert_eq!(s[n + 1], 3 * s[n] - s[n - 1]);
        }
    }

    #[test]
    fn small_q_rejected() {
        assert!(regular_triangulation(5, 3).is_err());
        assert!(regular_triangulation(7, 0).is_err());
    }

    #[test]
    fn tree_and_path_shapes() {
        let t = regular_tree(3, 3);
        assert_eq!(t.vertex_count(), 1 + 3 + 6 + 12);
        assert_eq!(t.frontier_vertices().len(), 12);
        assert_eq!(trace_faces(&t).len(), 1);
        let p = path(4);
        assert_eq!((p.vertex_count(), p.edge_count()), (5, 4));
    }
}
