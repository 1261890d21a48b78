//! Geometric graphs on point sets: plane validation, shortest paths, and
//! dilation (stretch factor) with deterministic witnesses.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    point_in_segment_interior, segments_properly_cross, GeometryError, PointSet,
};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex index {index} out of range (graph has {len} vertices)")]
    InvalidVertex { index: usize, len: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("operation needs at least {needed} vertices, graph has {len}")]
    TooFewVertices { needed: usize, len: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("bad graph json: {0}")]
    Json(String),
}

/// First planarity violation found by [`GeometricGraph::validate_plane`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneViolation {
    EdgesCross { e1: (usize, usize), e2: (usize, usize) },
    VertexInEdgeInterior { edge: (usize, usize), vertex: usize },
}

/// A weighted graph whose vertices are points in the plane and whose edges
/// are straight-line segments weighted by Euclidean length.
///
/// Edges are stored normalized (`i < j`) and sorted, so edge iteration order
/// — and everything derived from it, including violation reports and
/// serialization — is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometricGraph {
    points: PointSet,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

/// Stretch factor plus the pair and shortest path realizing it.
///
/// `stretch` is `+inf` exactly when `witness_pair` is a disconnected pair, in
/// which case there is no witness path.
#[derive(Debug, Clone, PartialEq)]
pub struct DilationReport {
    pub stretch: f64,
    pub witness_pair: Option<(usize, usize)>,
    pub witness_path: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct WireGraph {
    points: Vec<[f64; 2]>,
    edges: Vec<[usize; 2]>,
}

impl GeometricGraph {
    /// Builds a graph over `points`, normalizing edge order and rejecting
    /// out-of-range indices, self-loops, and duplicate edges.
    pub fn new(points: PointSet, edges: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let len = points.len();
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for (a, b) in edges {
            if a >= len {
                return Err(GraphError::InvalidVertex { index: a, len });
            }
            if b >= len {
                return Err(GraphError::InvalidVertex { index: b, len });
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        let mut adjacency = vec![Vec::new(); len];
        for &(a, b) in &normalized {
            let w = points[a].distance(&points[b]);
            adjacency[a].push((b, w));
            adjacency[b].push((a, w));
        }
        for list in &mut adjacency {
            list.sort_unstable_by(|x, y| x.0.cmp(&y.0));
        }
        Ok(GeometricGraph { points, edges: normalized, adjacency })
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn vertex_count(&self) -> usize {
        self.points.len()
    }

    /// Normalized `(i, j)` pairs with `i < j`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.edges.binary_search(&key).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Checks both plane invariants: no two edges properly cross, and no edge
    /// contains a vertex in its interior. Returns the first violation in a
    /// deterministic sweep over the sorted edge list.
    pub fn validate_plane(&self) -> Result<(), PlaneViolation> {
        let ps = self.points.points();
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            for &(c, d) in &self.edges[..k] {
                if segments_properly_cross(&ps[a], &ps[b], &ps[c], &ps[d]) {
                    return Err(PlaneViolation::EdgesCross { e1: (c, d), e2: (a, b) });
                }
            }
            for (v, p) in ps.iter().enumerate() {
                if v != a && v != b && point_in_segment_interior(p, &ps[a], &ps[b]) {
                    return Err(PlaneViolation::VertexInEdgeInterior { edge: (a, b), vertex: v });
                }
            }
        }
        Ok(())
    }

    pub fn is_plane(&self) -> bool {
        self.validate_plane().is_ok()
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v >= self.points.len() {
            Err(GraphError::InvalidVertex { index: v, len: self.points.len() })
        } else {
            Ok(())
        }
    }

    /// Single-source shortest paths (Dijkstra). Ties between equal-length
    /// paths are resolved toward the smaller predecessor index, so witness
    /// paths are deterministic.
    fn dijkstra(&self, source: usize) -> (Vec<f64>, Vec<usize>) {
        let n = self.points.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = vec![usize::MAX; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        dist[source] = 0.0;
        heap.push(HeapEntry { cost: 0.0, node: source });
        while let Some(HeapEntry { cost, node }) = heap.pop() {
            if done[node] {
                continue;
            }
            done[node] = true;
            for &(next, weight) in &self.adjacency[node] {
                let candidate = cost + weight;
                if candidate < dist[next] {
                    dist[next] = candidate;
                    pred[next] = node;
                    heap.push(HeapEntry { cost: candidate, node: next });
                } else if candidate == dist[next] && node < pred[next] {
                    pred[next] = node;
                }
            }
        }
        (dist, pred)
    }

    fn walk_back(pred: &[usize], source: usize, target: usize) -> Vec<usize> {
        let mut path = vec![target];
        let mut cur = target;
        while cur != source {
            cur = pred[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Minimum-total-length path from `u` to `v`; `(+inf, [])` when
    /// disconnected, `(0, [u])` when `u == v`.
    pub fn shortest_path(&self, u: usize, v: usize) -> Result<(f64, Vec<usize>), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Ok((0.0, vec![u]));
        }
        let (dist, pred) = self.dijkstra(u);
        if dist[v].is_infinite() {
            return Ok((f64::INFINITY, Vec::new()));
        }
        Ok((dist[v], Self::walk_back(&pred, u, v)))
    }

    /// The stretch factor δ(G): the maximum over unordered vertex pairs of
    /// shortest-path length over Euclidean distance. Ties are broken toward
    /// the lexicographically smallest pair; a disconnected pair yields `+inf`.
    pub fn stretch_factor(&self) -> Result<DilationReport, GraphError> {
        let n = self.points.len();
        if n < 2 {
            return Err(GraphError::TooFewVertices { needed: 2, len: n });
        }
        let mut best = 0.0f64;
        let mut witness: Option<(usize, usize)> = None;
        let mut path: Option<Vec<usize>> = None;
        for u in 0..n {
            let (dist, pred) = self.dijkstra(u);
            for v in (u + 1)..n {
                let ratio = dist[v] / self.points[u].distance(&self.points[v]);
                if ratio > best {
                    best = ratio;
                    witness = Some((u, v));
                    path = if ratio.is_finite() {
                        Some(Self::walk_back(&pred, u, v))
                    } else {
                        None
                    };
                }
            }
        }
        Ok(DilationReport { stretch: best, witness_pair: witness, witness_path: path })
    }

    /// Parses the `{ "points": [[x,y],...], "edges": [[i,j],...] }` format.
    pub fn from_json_str(input: &str) -> Result<Self, GraphError> {
        let wire: WireGraph =
            serde_json::from_str(input).map_err(|e| GraphError::Json(e.to_string()))?;
        let points = PointSet::new(
            wire.points.iter().map(|&[x, y]| crate::geometry::Point::new(x, y)).collect(),
        )?;
        GeometricGraph::new(points, wire.edges.iter().map(|&[a, b]| (a, b)).collect())
    }

    pub fn to_json_string(&self) -> String {
        let wire = WireGraph {
            points: self.points.points().iter().map(|p| [p.x, p.y]).collect(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        };
        serde_json::to_string(&wire).expect("graph serialization cannot fail")
    }
}

impl DilationReport {
    /// `{ "stretch": r, "pair": [i,j], "path": [...] }`, with `null` standing
    /// in for an infinite stretch or a missing witness.
    pub fn to_json_string(&self) -> String {
        let stretch = if self.stretch.is_finite() {
            serde_json::json!(self.stretch)
        } else {
            serde_json::Value::Null
        };
        serde_json::json!({
            "stretch": stretch,
            "pair": self.witness_pair.map(|(i, j)| vec![i, j]),
            "path": self.witness_path,
        })
        .to_string()
    }

    pub fn from_json_str(input: &str) -> Result<Self, GraphError> {
        #[derive(Deserialize)]
        struct Wire {
            stretch: Option<f64>,
            pair: Option<(usize, usize)>,
            path: Option<Vec<usize>>,
        }
        let wire: Wire =
            serde_json::from_str(input).map_err(|e| GraphError::Json(e.to_string()))?;
        Ok(DilationReport {
            // Any non-finite parse (null, or an overflowing literal) means
            // the disconnected marker, mirroring the encoder.
            stretch: wire.stretch.filter(|s| s.is_finite()).unwrap_or(f64::INFINITY),
            witness_pair: wire.pair,
            witness_path: wire.path,
        })
    }
}

struct HeapEntry {
    cost: f64,
    node: usize,
}

// Reversed ordering turns the max-heap into a min-heap on (cost, node);
// including the node index keeps pop order fully deterministic.
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .partial_cmp(&self.cost)
            .expect("path costs are never NaN")
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cost == other.cost && self.node == other.node
    }
}

impl Eq for HeapEntry {}
