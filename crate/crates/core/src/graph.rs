//! Immutable graph on sampled positions.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ModelParams, VertexPosition};

#[derive(Error, Debug, Clone, PartialEq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge {0}-{1} references a vertex outside 0..{2}")]
    OutOfRange(usize, usize, usize),
    #[error("duplicate edge {0}-{1}")]
    Duplicate(usize, usize),
    #[error("{positions} positions for N = {n}")]
    PositionCount { positions: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    Naive,
    Accelerated,
    /// Threshold graph; deterministic given positions, so the algorithm that
    /// produced it is immaterial.
    Disc,
    /// Rank-one inhomogeneous comparison graph.
    ChungLu,
}

impl std::fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GeneratorKind::Naive => "naive",
            GeneratorKind::Accelerated => "accelerated",
            GeneratorKind::Disc => "disc",
            GeneratorKind::ChungLu => "chung-lu",
        })
    }
}

impl std::str::FromStr for GeneratorKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "naive" => Ok(GeneratorKind::Naive),
            "accelerated" => Ok(GeneratorKind::Accelerated),
            "disc" => Ok(GeneratorKind::Disc),
            "chung-lu" => Ok(GeneratorKind::ChungLu),
            other => Err(format!("unknown generator kind `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub kind: GeneratorKind,
}

/// Vertex positions plus a simple undirected edge set, stored as sorted
/// adjacency lists.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    params: ModelParams,
    positions: Vec<VertexPosition>,
    adjacency: Vec<Vec<u32>>,
    edge_count: usize,
    provenance: Provenance,
}

impl Graph {
    /// Builds a graph from an arbitrary edge list, rejecting loops, duplicates
    /// and out-of-range endpoints.
    pub fn from_edges(
        params: ModelParams,
        positions: Vec<VertexPosition>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        provenance: Provenance,
    ) -> Result<Self, GraphError> {
        let n = positions.len();
        if n != params.n_vertices {
            return Err(GraphError::PositionCount {
                positions: n,
                n: params.n_vertices,
            });
        }
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if u >= n || v >= n {
                return Err(GraphError::OutOfRange(u, v, n));
            }
            adjacency[u].push(v as u32);
            adjacency[v].push(u as u32);
        }
        let mut edge_count = 0;
        for (u, list) in adjacency.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::Duplicate(u, w[0] as usize));
            }
            edge_count += list.len();
        }
        Ok(Self {
            params,
            positions,
            adjacency,
            edge_count: edge_count / 2,
            provenance,
        })
    }

    /// Builds from per-vertex "forward" neighbour lists, where every
    /// unordered pair appears in exactly one of the two lists.
    pub(crate) fn from_forward_lists(
        params: ModelParams,
        positions: Vec<VertexPosition>,
        forward: Vec<Vec<u32>>,
        provenance: Provenance,
    ) -> Self {
        let n = positions.len();
        let mut degree = vec![0usize; n];
        for (u, list) in forward.iter().enumerate() {
            degree[u] += list.len();
            for &v in list {
                degree[v as usize] += 1;
            }
        }
        let mut adjacency: Vec<Vec<u32>> = degree.iter().map(|&d| Vec::with_capacity(d)).collect();
        for (u, list) in forward.iter().enumerate() {
            for &v in list {
                adjacency[u].push(v);
                adjacency[v as usize].push(u as u32);
            }
        }
        let mut edge_count = 0;
        for list in adjacency.iter_mut() {
            list.sort_unstable();
            debug_assert!(list.windows(2).all(|w| w[0] < w[1]), "duplicate edge");
            edge_count += list.len();
        }
        debug_assert!(adjacency
            .iter()
            .enumerate()
            .all(|(u, l)| l.iter().all(|&v| v as usize != u)));
        Self {
            params,
            positions,
            adjacency,
            edge_count: edge_count / 2,
            provenance,
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn positions(&self) -> &[VertexPosition] {
        &self.positions
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.adjacency[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, list)| {
            let start = list.partition_point(|&v| (v as usize) < u);
            list[start..].iter().map(move |&v| (u, v as usize))
        })
    }
}

/// `D_u` for every vertex.
pub fn degree_sequence(g: &Graph) -> Vec<usize> {
    (0..g.vertex_count()).map(|u| g.degree(u)).collect()
}
