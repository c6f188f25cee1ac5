//! Versioned JSON graph format.
//!
//! ```text
//! { "version": 1,
//!   "vertices": [{"id": 0, "rotation": [0, 2, 5]}, ...],
//!   "edges": [{"id": 0, "halfedges": [0, 1]}, ...],
//!   "frontier": [7, 8],
//!   "tags": {"0": "circle", "1": "cross"} }
//! ```
//!
//! Writers emit dense ids (edge `e` owns half-edges `2e`, `2e + 1`) with keys
//! in sorted order, so a read/write cycle is byte-stable.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{GraphBuilder, RotationGraph, Tag};
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
struct VertexRecord {
    id: u64,
    rotation: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct EdgeRecord {
    id: u64,
    halfedges: [u64; 2],
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    version: u64,
    vertices: Vec<VertexRecord>,
    edges: Vec<EdgeRecord>,
    #[serde(default)]
    frontier: Vec<u64>,
    #[serde(default)]
    tags: BTreeMap<String, Tag>,
}

pub fn to_value(g: &RotationGraph) -> serde_json::Value {
    let file = GraphFile {
        version: FORMAT_VERSION,
        vertices: g
            .vertices()
            .map(|v| VertexRecord {
                id: v as u64,
                rotation: g.rotation(v).iter().map(|&h| h as u64).collect(),
            })
            .collect(),
        edges: g
            .edges()
            .map(|e| EdgeRecord {
                id: e as u64,
                halfedges: [2 * e as u64, 2 * e as u64 + 1],
            })
            .collect(),
        frontier: g.frontier_vertices().into_iter().map(|v| v as u64).collect(),
        tags: g
            .vertices()
            .filter_map(|v| g.tag(v).map(|t| (v.to_string(), t)))
            .collect(),
    };
    // serde_json's default map is ordered, which canonicalises key order.
    serde_json::to_value(file).expect("graph file serialises")
}

pub fn to_string(g: &RotationGraph) -> String {
    let mut s = serde_json::to_string(&to_value(g)).expect("value serialises");
    s.push('\n');
    s
}

pub fn from_str(s: &str) -> Result<RotationGraph> {
    let file: GraphFile = serde_json::from_str(s)?;
    if file.version != FORMAT_VERSION {
        return Err(Error::Version(file.version));
    }
    let mut vertex_ids: Vec<u64> = file.vertices.iter().map(|v| v.id).collect();
    vertex_ids.sort_unstable();
    let vindex: HashMap<u64, usize> = vertex_ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    if vindex.len() != vertex_ids.len() {
        return Err(Error::InvalidArgument("duplicate vertex id".into()));
    }

    let mut owner: HashMap<u64, usize> = HashMap::new();
    for rec in &file.vertices {
        let v = vindex[&rec.id];
        for &h in &rec.rotation {
            if owner.insert(h, v).is_some() {
                return Err(Error::MalformedRotation {
                    vertex: v,
                    reason: format!("half-edge {h} listed twice"),
                });
            }
        }
    }

    let mut edges: Vec<&EdgeRecord> = file.edges.iter().collect();
    edges.sort_unstable_by_key(|e| e.id);
    let mut b = GraphBuilder::with_vertices(vertex_ids.len());
    let mut dense: HashMap<u64, usize> = HashMap::new();
    for rec in &edges {
        let [h1, h2] = rec.halfedges;
        let u = *owner.get(&h1).ok_or(Error::DanglingHalfEdge(h1 as usize))?;
        let v = *owner.get(&h2).ok_or(Error::DanglingHalfEdge(h2 as usize))?;
        let e = b.add_edge(u, v);
        if dense.insert(h1, 2 * e).is_some() || dense.insert(h2, 2 * e + 1).is_some() {
            return Err(Error::MalformedRotation {
                vertex: u,
                reason: format!("half-edge shared by two edges near edge {}", rec.id),
            });
        }
    }
    for rec in &file.vertices {
        let v = vindex[&rec.id];
        let rot = rec
            .rotation
            .iter()
            .map(|h| {
                dense.get(h).copied().ok_or_else(|| Error::MalformedRotation {
                    vertex: v,
                    reason: format!("half-edge {h} has no edge"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        b.set_rotation(v, rot);
    }
    for id in &file.frontier {
        let v = *vindex.get(id).ok_or(Error::UnknownVertex(*id as usize))?;
        b.set_frontier(v, true);
    }
    for (key, tag) in &file.tags {
        let id: u64 = key
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad tag key {key:?}")))?;
        let v = *vindex.get(&id).ok_or(Error::UnknownVertex(id as usize))?;
        b.set_tag(v, Some(*tag));
    }
    b.build()
}

pub fn read_file(path: impl AsRef<Path>) -> Result<RotationGraph> {
    from_str(&std::fs::read_to_string(path)?)
}

pub fn write_file(g: &RotationGraph, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_string(g))?;
    Ok(())
}
