use super::*;
use crate::lattice;

fn euler(g: &RotationGraph) -> i64 {
    let f = trace_faces(g).len() as i64;
    g.vertex_count() as i64 - g.edge_count() as i64 + f
}

fn half_edges_conserved(g: &RotationGraph) -> bool {
    g.vertices().map(|v| g.degree(v)).sum::<usize>() == 2 * g.edge_count()
}

#[test]
fn octahedron_counts() {
    let g = lattice::octahedron();
    assert_eq!(g.vertex_count(), 6);
    assert_eq!(g.edge_count(), 12);
    assert!(g.vertices().all(|v| g.degree(v) == 4));
    let faces = trace_faces(&g);
    assert_eq!(faces.len(), 8);
    assert!(faces.walks().iter().all(|w| w.len() == 3));
    assert_eq!(euler(&g), 2);
    assert!(half_edges_conserved(&g));
}

#[test]
fn self_loop_rejected() {
    let mut b = GraphBuilder::with_vertices(1);
    let e = b.add_edge(0, 0);
    b.set_rotation(0, vec![2 * e, 2 * e + 1]);
    assert!(matches!(b.build(), Err(Error::SelfLoop { .. })));
}

#[test]
fn dangling_and_disconnected_rejected() {
    let mut b = GraphBuilder::with_vertices(2);
    b.add_edge(0, 1);
    b.set_rotation(0, vec![0]);
    assert!(matches!(b.build(), Err(Error::DanglingHalfEdge(1))));

    let b = GraphBuilder::with_vertices(2);
    assert!(matches!(b.build(), Err(Error::Disconnected(1))));

    let mut b = GraphBuilder::with_vertices(2);
    b.add_edge(0, 1);
    b.set_rotation(0, vec![0, 0]);
    b.set_rotation(1, vec![1]);
    assert!(matches!(b.build(), Err(Error::MalformedRotation { .. })));

    let mut b = GraphBuilder::with_vertices(2);
    b.add_edge(0, 1);
    b.set_rotation(0, vec![1]);
    b.set_rotation(1, vec![0]);
    assert!(matches!(b.build(), Err(Error::MalformedRotation { .. })));
}

#[test]
fn three_by_three_grid() {
    let (g, centre) = lattice::square_grid(1);
    assert_eq!(g.vertex_count(), 9);
    assert_eq!(g.edge_count(), 12);
    assert_eq!(centre, 4);
    let faces = trace_faces(&g);
    // Hand count: four unit squares plus the outer 8-cycle.
    assert_eq!(faces.len(), 5);
    assert_eq!(faces.interior_count(), 4);
    assert!(faces.interior().all(|f| faces.walk(f).len() == 4));
    let outer: Vec<_> = (0..faces.len()).filter(|&f| faces.is_frontier_face(f)).collect();
    assert_eq!(outer.len(), 1);
    assert_eq!(faces.walk(outer[0]).len(), 8);
}

#[test]
fn face_walks_partition_half_edges() {
    for g in [lattice::cube(), lattice::hex_ball(3), lattice::square_grid(3).0] {
        let faces = trace_faces(&g);
        let mut seen = vec![0; g.half_edge_count()];
        for w in faces.walks() {
            for &h in w {
                seen[h] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }
}

#[test]
fn bigon_face() {
    let mut b = GraphBuilder::with_vertices(2);
    let e0 = b.add_edge(0, 1);
    let e1 = b.add_edge(0, 1);
    b.set_rotation(0, vec![2 * e0, 2 * e1]);
    b.set_rotation(1, vec![2 * e1 + 1, 2 * e0 + 1]);
    let g = b.build().unwrap();
    let faces = trace_faces(&g);
    assert_eq!(faces.len(), 2);
    assert!(faces.walks().iter().all(|w| w.len() == 2));
    assert_eq!(euler(&g), 2);
    assert!(classify(&g).has_multiple_edges);
}

#[test]
fn cube_dual_is_octahedron() {
    let d = dual(&lattice::cube(), DualOptions::default()).unwrap();
    assert!(is_isomorphic(&d, &lattice::octahedron()));
    assert!(!is_isomorphic(&d, &lattice::cube()));
}

#[test]
fn double_dual_is_identity() {
    for g in [lattice::cube(), lattice::octahedron()] {
        let dd = dual(&dual(&g, DualOptions::default()).unwrap(), DualOptions::default()).unwrap();
        assert_eq!(canonical_code(&dd), canonical_code(&g));
    }
}

#[test]
fn cycle_dual_has_two_vertices() {
    for q in [2, 3, 5, 8] {
        let d = dual(&lattice::cycle(q).unwrap(), DualOptions::default()).unwrap();
        assert_eq!(d.vertex_count(), 2);
        assert_eq!(d.edge_count(), q);
        assert!(bipartition(&d).is_some());
    }
}

#[test]
fn dual_of_truncation_needs_opt_in() {
    let g = lattice::hex_ball(3);
    assert!(matches!(dual(&g, DualOptions::default()), Err(Error::AmbiguousDual)));
    let d = dual(&g, DualOptions { drop_frontier_faces: true }).unwrap();
    // Interior vertices of the dual of a triangulation have degree 3.
    assert_eq!(classify(&d).homogeneous_degree, Some(3));
}

#[test]
fn grid_spheres_grow_linearly() {
    let (g, c) = lattice::square_grid(6);
    let layers = bfs_layers(&g, c, 8).unwrap();
    assert_eq!(layers.first_frontier, Some(6));
    assert!(layers.hit_frontier());
    // Oracle: the L1 sphere of radius n in Z^2 has 4n points.
    for n in 1..=layers.reliable_depth() {
        let oracle = (-(n as i64)..=n as i64)
            .flat_map(|x| (-(n as i64)..=n as i64).map(move |y| (x, y)))
            .filter(|(x, y)| x.abs() + y.abs() == n as i64)
            .count();
        assert_eq!(layers.spheres[n].len(), oracle);
    }
    assert_eq!(layers.spheres[0], vec![c]);
}

#[test]
fn path_cut_sets() {
    let g = lattice::path(5);
    let layers = bfs_layers(&g, 0, 5).unwrap();
    assert_eq!(layers.cut_sizes(), vec![1; 5]);
    assert_eq!(layers.ball_sizes(), vec![1, 2, 3, 4, 5, 6]);
    assert!(layers.first_frontier.is_none());
    assert!(matches!(bfs_layers(&g, 9, 1), Err(Error::UnknownVertex(9))));
}

#[test]
fn cut_edges_count_multiplicity() {
    let mut b = GraphBuilder::with_vertices(2);
    let e0 = b.add_edge(0, 1);
    let e1 = b.add_edge(0, 1);
    b.set_rotation(0, vec![2 * e0, 2 * e1]);
    b.set_rotation(1, vec![2 * e1 + 1, 2 * e0 + 1]);
    let g = b.build().unwrap();
    assert_eq!(bfs_layers(&g, 0, 1).unwrap().cut_sizes(), vec![2]);
}

#[test]
fn layer_edges_join_adjacent_spheres() {
    let g = lattice::regular_triangulation(7, 5).unwrap();
    let dist = bfs_distances(&g, 0, None).unwrap();
    for e in g.edges() {
        let (u, v) = g.endpoints(e);
        assert!(dist[u].unwrap().abs_diff(dist[v].unwrap()) <= 1);
    }
}

#[test]
fn classify_tree_and_grid() {
    let t = lattice::regular_tree(3, 4);
    let c = classify(&t);
    assert!(c.is_bipartite);
    assert_eq!(c.homogeneous_degree, Some(3));
    assert!(!c.is_disk_triangulation);

    let (g, _) = lattice::square_grid(3);
    let c = classify(&g);
    assert!(c.is_bipartite);
    assert_eq!(c.homogeneous_degree, Some(4));
    assert_eq!(c.p_of, Some(4));

    let h = classify(&lattice::hex_ball(4));
    assert!(h.is_disk_triangulation);
    assert!(!h.is_bipartite);
    assert_eq!(h.homogeneous_degree, Some(6));
    assert_eq!(h.p_of, Some(6));
}

#[test]
fn p_of_is_attained() {
    let g = lattice::regular_triangulation(8, 3).unwrap();
    let k = classify(&g).p_of.unwrap();
    let attained = g.edges().any(|e| {
        let (u, v) = g.endpoints(e);
        !g.is_frontier(u) && !g.is_frontier(v) && g.degree(u).min(g.degree(v)) == k
    });
    assert!(attained);
}

#[test]
fn isomorphism_sees_through_relabelling_and_mirror() {
    let g = lattice::cube();
    let n = g.vertex_count();
    let perm: Vec<usize> = (0..n).map(|v| (v * 5 + 3) % n).collect();
    let mut lists = vec![Vec::new(); n];
    for v in g.vertices() {
        lists[perm[v]] = g.neighbors(v).map(|w| perm[w]).collect();
    }
    let relabelled = GraphBuilder::from_ccw_neighbors(&lists).unwrap();
    assert!(is_isomorphic(&g, &relabelled));
    assert!(is_isomorphic(&g, &relabelled.mirrored()));
}

#[test]
fn truncate_ball_marks_outer_sphere() {
    let g = lattice::regular_triangulation(7, 6).unwrap();
    let (t, map) = g.truncate_ball(0, 3).unwrap();
    let layers = bfs_layers(&t, map[0].unwrap(), 3).unwrap();
    assert_eq!(layers.first_frontier, Some(3));
    assert_eq!(
        layers.sphere_sizes(),
        bfs_layers(&g, 0, 3).unwrap().sphere_sizes()
    );
    assert!(layers.spheres[3].iter().all(|&v| t.is_frontier(v)));
}

#[test]
fn json_round_trip_is_byte_stable() {
    let g = lattice::hex_ball(3).with_tags(vec![Some(Tag::Circle); 37]);
    let s = json::to_string(&g);
    let back = json::from_str(&s).unwrap();
    assert_eq!(back, g);
    assert_eq!(json::to_string(&back), s);
}

#[test]
fn json_rejects_bad_input() {
    let bad_version = r#"{"version":2,"vertices":[],"edges":[]}"#;
    assert!(matches!(json::from_str(bad_version), Err(Error::Version(2))));
    let self_loop = r#"{"version":1,"vertices":[{"id":0,"rotation":[0,1]}],"edges":[{"id":0,"halfedges":[0,1]}]}"#;
    assert!(matches!(json::from_str(self_loop), Err(Error::SelfLoop { .. })));
    let dangling = r#"{"version":1,"vertices":[{"id":0,"rotation":[0]},{"id":1,"rotation":[]}],"edges":[{"id":0,"halfedges":[0,1]}]}"#;
    assert!(matches!(json::from_str(dangling), Err(Error::DanglingHalfEdge(1))));
}

#[test]
fn json_accepts_sparse_ids() {
    let s = r#"{"version":1,"vertices":[{"id":10,"rotation":[7]},{"id":20,"rotation":[9]}],
        "edges":[{"id":3,"halfedges":[7,9]}],"frontier":[20],"tags":{"10":"cross"}}"#;
    let g = json::from_str(s).unwrap();
    assert_eq!(g.vertex_count(), 2);
    assert!(g.is_frontier(1));
    assert_eq!(g.tag(0), Some(Tag::Cross));
}
