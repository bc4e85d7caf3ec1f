//! Weighted undirected graphs, generators, Laplacians, and distance
//! diagonals.
//!
//! Nodes are numbered 1..N in every external format; internally the crate
//! uses 0-based indices. Weights are stored as a dense symmetric matrix with
//! zero diagonal; a zero entry means "no edge".

use std::collections::{BinaryHeap, VecDeque};

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tol;

/// A simple weighted undirected graph on nodes 1..N.
///
/// Construction validates the structural invariants (square, symmetric,
/// zero diagonal, nonnegative weights, N ≥ 2). Connectivity and absence of
/// isolated nodes are checked by the operations that require them, so that
/// malformed inputs fail at the point where the math becomes undefined.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    weights: DMatrix<f64>,
}

impl Graph {
    /// Build a graph from a full weight matrix.
    pub fn from_weights(weights: DMatrix<f64>) -> Result<Self> {
        let n = weights.nrows();
        if weights.ncols() != n {
            return Err(Error::invalid_argument(format!(
                "weight matrix must be square, got {}x{}",
                weights.nrows(),
                weights.ncols()
            )));
        }
        if n < 2 {
            return Err(Error::InvalidSize(format!("graph needs N >= 2, got {n}")));
        }
        let mut max_asym = 0.0f64;
        for i in 0..n {
            if weights[(i, i)] != 0.0 {
                return Err(Error::invalid_argument(format!(
                    "self-loop at node {}: diagonal must be zero",
                    i + 1
                )));
            }
            for j in (i + 1)..n {
                max_asym = max_asym.max((weights[(i, j)] - weights[(j, i)]).abs());
                if weights[(i, j)] < 0.0 || weights[(j, i)] < 0.0 {
                    return Err(Error::invalid_argument(format!(
                        "negative weight on edge ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        if max_asym > tol::SYMMETRY {
            return Err(Error::NonSymmetric {
                max_asymmetry: max_asym,
            });
        }
        // symmetrize away sub-tolerance asymmetry
        let weights = (&weights + weights.transpose()) * 0.5;
        Ok(Self { n, weights })
    }

    /// Build a graph from 1-based weighted edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSize(format!("graph needs N >= 2, got {n}")));
        }
        let mut w = DMatrix::zeros(n, n);
        for &(u, v, weight) in edges {
            if u < 1 || u > n || v < 1 || v > n {
                return Err(Error::invalid_argument(format!(
                    "edge ({u}, {v}) out of range 1..{n}"
                )));
            }
            if u == v {
                return Err(Error::invalid_argument(format!("self-loop at node {u}")));
            }
            if weight <= 0.0 {
                return Err(Error::invalid_argument(format!(
                    "edge ({u}, {v}) must have positive weight, got {weight}"
                )));
            }
            if w[(u - 1, v - 1)] != 0.0 {
                return Err(Error::invalid_argument(format!(
                    "duplicate edge ({u}, {v})"
                )));
            }
            w[(u - 1, v - 1)] = weight;
            w[(v - 1, u - 1)] = weight;
        }
        Self::from_weights(w)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    /// Weight of the edge between 1-based nodes `u` and `v` (0 if absent).
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.weights[(u - 1, v - 1)]
    }

    /// 1-based edge list (u < v, positive weights only), sorted.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.weights[(i, j)] > 0.0 {
                    out.push((i + 1, j + 1, self.weights[(i, j)]));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Weighted degree of each node.
    pub fn degrees(&self) -> DVector<f64> {
        DVector::from_iterator(self.n, self.weights.row_iter().map(|r| r.sum()))
    }

    /// 0-based neighbors of a 0-based node.
    fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.weights[(i, j)] > 0.0)
    }

    /// True when every node is reachable from node 0.
    pub fn is_connected(&self) -> bool {
        bfs_hops(self, 0).iter().all(|h| h.is_some())
    }

    /// True when every weight is an exactly representable integer. Structural
    /// predicates use a tighter tolerance in that case.
    pub fn has_exact_weights(&self) -> bool {
        self.weights.iter().all(|w| w.fract() == 0.0)
    }

    /// Relabel nodes by a permutation: node `i` (0-based) becomes
    /// `perm[i]` (0-based). Used by invariance tests.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::invalid_argument("permutation length mismatch"));
        }
        let mut w = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                w[(perm[i], perm[j])] = self.weights[(i, j)];
            }
        }
        Self::from_weights(w)
    }
}

/// A 1-based reference node for the graph spread.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CenterNode(usize);

impl CenterNode {
    /// `uc` is 1-based and must satisfy 1 ≤ uc ≤ n.
    pub fn new(uc: usize, n: usize) -> Result<Self> {
        if uc < 1 || uc > n {
            return Err(Error::invalid_argument(format!(
                "center node {uc} out of range 1..{n}"
            )));
        }
        Ok(Self(uc))
    }

    /// 1-based node id.
    pub fn get(&self) -> usize {
        self.0
    }

    /// 0-based index.
    pub fn index(&self) -> usize {
        self.0 - 1
    }
}

/// Which distance feeds the diagonal of P.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceKind {
    /// Squared geodesic hop count (edge weights ignored). This is the
    /// default used everywhere in the crate.
    #[default]
    SquaredGeodesic,
    /// Squared weighted shortest-path length. Accepted as a pluggable
    /// alternative; not used by the standard curve computations.
    SquaredWeightedPath,
}

/// The diagonal of P: distances from the center node, one entry per node.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceDiagonal {
    entries: DVector<f64>,
    kind: DistanceKind,
}

impl DistanceDiagonal {
    pub fn entries(&self) -> &DVector<f64> {
        &self.entries
    }

    pub fn kind(&self) -> DistanceKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.len() == 0
    }

    /// Dense diagonal matrix P.
    pub fn as_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.entries)
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().cloned().fold(0.0, f64::max)
    }
}

/// Star graph: node 1 is the center, nodes 2..n are leaves, unit weights.
pub fn gen_star(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidSize(format!("star needs n >= 3, got {n}")));
    }
    let edges: Vec<_> = (2..=n).map(|v| (1, v, 1.0)).collect();
    Graph::from_edges(n, &edges)
}

/// Complete graph with unit weights.
pub fn gen_complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidSize(format!(
            "complete needs n >= 2, got {n}"
        )));
    }
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in (u + 1)..=n {
            edges.push((u, v, 1.0));
        }
    }
    Graph::from_edges(n, &edges)
}

/// Cycle 1-2-...-n-1 with unit weights.
pub fn gen_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidSize(format!("cycle needs n >= 3, got {n}")));
    }
    let mut edges: Vec<_> = (1..n).map(|u| (u, u + 1, 1.0)).collect();
    edges.push((n, 1, 1.0));
    Graph::from_edges(n, &edges)
}

/// Path 1-2-...-n with unit weights.
pub fn gen_path(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("path needs n >= 2, got {n}")));
    }
    let edges: Vec<_> = (1..n).map(|u| (u, u + 1, 1.0)).collect();
    Graph::from_edges(n, &edges)
}

/// Erdős–Rényi G(n, p) with unit weights, resampled until connected.
/// Deterministic for a fixed seed; fails after a bounded number of
/// disconnected draws.
pub fn gen_random(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidSize(format!("random needs n >= 2, got {n}")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid_argument(format!(
            "edge probability must be in (0, 1], got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..tol::RANDOM_RETRIES {
        let mut edges = Vec::new();
        for u in 1..=n {
            for v in (u + 1)..=n {
                if rng.gen::<f64>() < p {
                    edges.push((u, v, 1.0));
                }
            }
        }
        // a node with no edge at all would fail from_edges later anyway;
        // treat it as a disconnected draw
        let mut touched = vec![false; n];
        for &(u, v, _) in &edges {
            touched[u - 1] = true;
            touched[v - 1] = true;
        }
        if !touched.iter().all(|&t| t) {
            continue;
        }
        let g = Graph::from_edges(n, &edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::invalid_argument(format!(
        "no connected G({n}, {p}) draw in {} attempts",
        tol::RANDOM_RETRIES
    )))
}

/// Normalized Laplacian `L = I - D^{-1/2} W D^{-1/2}`.
///
/// Symmetric, unit diagonal, off-diagonal `-W[u][v] / sqrt(deg(u) deg(v))`.
pub fn normalized_laplacian(g: &Graph) -> Result<DMatrix<f64>> {
    let n = g.n();
    let deg = g.degrees();
    for (i, &d) in deg.iter().enumerate() {
        if d <= 0.0 {
            return Err(Error::DegenerateDegree { node: i + 1 });
        }
    }
    let inv_sqrt: Vec<f64> = deg.iter().map(|d| 1.0 / d.sqrt()).collect();
    let mut l = DMatrix::zeros(n, n);
    for i in 0..n {
        l[(i, i)] = 1.0;
        for j in 0..n {
            if i != j {
                l[(i, j)] = -g.weights()[(i, j)] * inv_sqrt[i] * inv_sqrt[j];
            }
        }
    }
    Ok(l)
}

/// Breadth-first hop counts from a 0-based start node; `None` = unreachable.
fn bfs_hops(g: &Graph, start: usize) -> Vec<Option<usize>> {
    let mut hops = vec![None; g.n()];
    hops[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let h = hops[u].unwrap();
        for v in g.neighbors(u) {
            if hops[v].is_none() {
                hops[v] = Some(h + 1);
                queue.push_back(v);
            }
        }
    }
    hops
}

/// Geodesic hop distance from the center to every node (weights ignored).
pub fn geodesic_distances(g: &Graph, uc: CenterNode) -> Result<Vec<usize>> {
    if uc.get() > g.n() {
        return Err(Error::invalid_argument(format!(
            "center node {} out of range 1..{}",
            uc.get(),
            g.n()
        )));
    }
    let hops = bfs_hops(g, uc.index());
    hops.iter()
        .enumerate()
        .map(|(i, h)| h.ok_or(Error::Disconnected { node: i + 1 }))
        .collect()
}

/// Weighted shortest-path distances (Dijkstra) from the center.
fn weighted_distances(g: &Graph, uc: CenterNode) -> Result<Vec<f64>> {
    let n = g.n();
    let mut dist = vec![f64::INFINITY; n];
    dist[uc.index()] = 0.0;
    let mut heap: BinaryHeap<(std::cmp::Reverse<Ordered>, usize)> = BinaryHeap::new();
    heap.push((std::cmp::Reverse(Ordered(0.0)), uc.index()));
    while let Some((std::cmp::Reverse(d), u)) = heap.pop() {
        if d.0 > dist[u] {
            continue;
        }
        for v in g.neighbors(u) {
            let nd = dist[u] + g.weights()[(u, v)];
            if nd < dist[v] {
                dist[v] = nd;
                heap.push((std::cmp::Reverse(Ordered(nd)), v));
            }
        }
    }
    for (i, &d) in dist.iter().enumerate() {
        if !d.is_finite() {
            return Err(Error::Disconnected { node: i + 1 });
        }
    }
    Ok(dist)
}

#[derive(PartialEq)]
struct Ordered(f64);
impl Eq for Ordered {}
impl PartialOrd for Ordered {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ordered {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Diagonal of P using the default squared geodesic hop distance.
pub fn distance_matrix(g: &Graph, uc: CenterNode) -> Result<DistanceDiagonal> {
    distance_matrix_with(g, uc, DistanceKind::SquaredGeodesic)
}

/// Diagonal of P for an explicit distance kind.
pub fn distance_matrix_with(
    g: &Graph,
    uc: CenterNode,
    kind: DistanceKind,
) -> Result<DistanceDiagonal> {
    let entries = match kind {
        DistanceKind::SquaredGeodesic => {
            let hops = geodesic_distances(g, uc)?;
            DVector::from_iterator(g.n(), hops.into_iter().map(|h| (h * h) as f64))
        }
        DistanceKind::SquaredWeightedPath => {
            let dist = weighted_distances(g, uc)?;
            DVector::from_iterator(g.n(), dist.into_iter().map(|d| d * d))
        }
    };
    Ok(DistanceDiagonal { entries, kind })
}
