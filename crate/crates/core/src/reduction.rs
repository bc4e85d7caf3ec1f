//! Search-space reduction for curve-attaining signals.
//!
//! When, after relabeling, `M(α) = P − αL` splits into a leading block `A`,
//! a cross block that is constant along its rows, and a trailing circulant
//! block `D`, every signal attaining the uncertainty curve takes the same
//! value on all nodes of the trailing block. Both `P` and `L` are
//! α-independent, so the split is detected on them separately: the trailing
//! `L`-block must be circulant under some ordering, the `L` rows from the
//! front into the block must be constant, and the `P` diagonal must be
//! constant on the block (equidistance from the center). Detection recurses
//! on the leading block, peeling one symmetric tail per level.
//!
//! The reduced coordinates live on a low-dimensional hypersphere which can
//! be swept by a fixed angular grid; the Pareto frontier of the resulting
//! spread cloud traces the uncertainty curve.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::{distance_matrix, geodesic_distances, normalized_laplacian, CenterNode, Graph};
use crate::spectral::{graph_spread, quadratic_form, sym_eig, Signal};
use crate::tol;
use crate::uncertainty::{m_alpha, SpreadPoint};

/// True iff `m[i][j]` depends only on `(j - i) mod k`, entrywise within
/// `tolerance`.
pub fn is_circulant(m: &DMatrix<f64>, tolerance: f64) -> bool {
    let k = m.nrows();
    if m.ncols() != k || k == 0 {
        return false;
    }
    for i in 0..k {
        for j in 0..k {
            let expect = m[(0, (j + k - i) % k)];
            if (m[(i, j)] - expect).abs() > tolerance {
                return false;
            }
        }
    }
    true
}

/// True iff every row of `b` has all entries equal within `tolerance`.
pub fn is_constant_by_row(b: &DMatrix<f64>, tolerance: f64) -> bool {
    for i in 0..b.nrows() {
        for j in 1..b.ncols() {
            if (b[(i, j)] - b[(i, 0)]).abs() > tolerance {
                return false;
            }
        }
    }
    true
}

/// Node relabeling into free components followed by nested symmetric tails.
///
/// `groups` lists 0-based node ids; size-1 groups are free components,
/// larger groups are symmetric tails stored in their circulant order.
/// `ordering` is the concatenation of the groups: position ↦ original node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    n: usize,
    ordering: Vec<usize>,
    groups: Vec<Vec<usize>>,
}

impl BlockPartition {
    pub fn n(&self) -> usize {
        self.n
    }

    /// New position → original 0-based node.
    pub fn ordering(&self) -> &[usize] {
        &self.ordering
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Number of distinct components in the reduced form.
    pub fn reduced_dim(&self) -> usize {
        self.groups.len()
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.len()).collect()
    }

    /// Trivial partition: every node its own group, identity ordering.
    pub fn trivial(n: usize) -> Self {
        Self {
            n,
            ordering: (0..n).collect(),
            groups: (0..n).map(|u| vec![u]).collect(),
        }
    }

    /// JSON export, 1-based: `{"ordering": [...], "groups": [[...], ...]}`.
    pub fn to_json(&self) -> String {
        let ordering: Vec<usize> = self.ordering.iter().map(|u| u + 1).collect();
        let groups: Vec<Vec<usize>> = self
            .groups
            .iter()
            .map(|g| g.iter().map(|u| u + 1).collect())
            .collect();
        serde_json::json!({ "ordering": ordering, "groups": groups }).to_string()
    }
}

/// Fingerprint used to pre-filter tail candidates: nodes in a symmetric tail
/// must agree on distance to the center, degree, and the multiset of their
/// neighbors' (distance, degree) pairs.
type Fingerprint = (usize, u64, Vec<(usize, u64)>);

fn fingerprints(g: &Graph, dist: &[usize]) -> Vec<Fingerprint> {
    let deg = g.degrees();
    (0..g.n())
        .map(|u| {
            let mut nbrs: Vec<(usize, u64)> = (0..g.n())
                .filter(|&v| g.weights()[(u, v)] > 0.0)
                .map(|v| (dist[v], deg[v].to_bits()))
                .collect();
            nbrs.sort_unstable();
            (dist[u], deg[u].to_bits(), nbrs)
        })
        .collect()
}

/// Search for an ordering of `class` that makes the induced `L`-block
/// circulant. For each choice of the second node (the rotation offset), the
/// rest of the cycle is chained greedily by matching the first link's value,
/// then the full block is re-verified; classes with no valid offset are
/// rejected.
fn circulant_ordering(class: &[usize], l: &DMatrix<f64>, tolerance: f64) -> Option<Vec<usize>> {
    let k = class.len();
    if k == 2 {
        // a symmetric 2x2 block is always circulant
        return Some(class.to_vec());
    }
    let v0 = class[0];
    for &second in &class[1..] {
        let base = l[(v0, second)];
        let mut order = vec![v0, second];
        let mut used = vec![false; k];
        used[0] = true;
        used[class.iter().position(|&u| u == second).unwrap()] = true;
        while order.len() < k {
            let prev = *order.last().unwrap();
            let next = class
                .iter()
                .enumerate()
                .find(|&(i, &u)| !used[i] && (l[(prev, u)] - base).abs() <= tolerance);
            match next {
                Some((i, &u)) => {
                    used[i] = true;
                    order.push(u);
                }
                None => break,
            }
        }
        if order.len() == k {
            let block = DMatrix::from_fn(k, k, |i, j| l[(order[i], order[j])]);
            if is_circulant(&block, tolerance) {
                return Some(order);
            }
        }
    }
    None
}

/// One peeling level: the largest valid tail among the current front nodes
/// (ties broken by smallest minimum label).
fn find_tail(
    front: &[usize],
    fps: &[Fingerprint],
    l: &DMatrix<f64>,
    p: &DVector<f64>,
    tolerance: f64,
) -> Option<Vec<usize>> {
    let mut classes: BTreeMap<&Fingerprint, Vec<usize>> = BTreeMap::new();
    for &u in front {
        classes.entry(&fps[u]).or_default().push(u);
    }
    let mut best: Option<Vec<usize>> = None;
    for class in classes.values() {
        if class.len() < 2 {
            continue;
        }
        // P diagonal constant on the class
        if class
            .iter()
            .any(|&u| (p[u] - p[class[0]]).abs() > tolerance)
        {
            continue;
        }
        // L rows from the rest of the front into the class are constant
        let cross_ok = front.iter().filter(|u| !class.contains(u)).all(|&u| {
            class
                .iter()
                .all(|&c| (l[(u, c)] - l[(u, class[0])]).abs() <= tolerance)
        });
        if !cross_ok {
            continue;
        }
        let Some(order) = circulant_ordering(class, l, tolerance) else {
            continue;
        };
        let better = match &best {
            None => true,
            Some(b) => order.len() > b.len() || (order.len() == b.len() && order[0] < b[0]),
        };
        if better {
            best = Some(order);
        }
    }
    best
}

/// Detect the nested block structure of the pair `(P, L)` for a center node.
///
/// Always returns a partition; when no symmetric tail exists all groups are
/// singletons and `reduced_dim == N`. Structural comparisons use the exact
/// tolerance on integer-weight graphs and the float tolerance otherwise.
pub fn find_block_structure(g: &Graph, uc: CenterNode) -> Result<BlockPartition> {
    let dist = geodesic_distances(g, uc)?;
    let l = normalized_laplacian(g)?;
    let p = distance_matrix(g, uc)?;
    let tolerance = if g.has_exact_weights() {
        tol::STRUCT_EXACT
    } else {
        tol::STRUCT_FLOAT
    };
    let fps = fingerprints(g, &dist);

    let mut front: Vec<usize> = (0..g.n()).collect();
    let mut tails: Vec<Vec<usize>> = Vec::new();
    while front.len() >= 2 {
        match find_tail(&front, &fps, &l, p.entries(), tolerance) {
            Some(tail) => {
                front.retain(|u| !tail.contains(u));
                tails.push(tail);
            }
            None => break,
        }
    }
    // free components first, ordered by distance from the center then label;
    // inner tails before outer ones, matching the nested block layout
    front.sort_by_key(|&u| (dist[u], u));
    let mut groups: Vec<Vec<usize>> = front.into_iter().map(|u| vec![u]).collect();
    groups.extend(tails.into_iter().rev());
    let ordering: Vec<usize> = groups.iter().flatten().copied().collect();
    Ok(BlockPartition {
        n: g.n(),
        ordering,
        groups,
    })
}

/// Check numerically that minimum eigenvectors of `M(α)` take the reduced
/// form: constant within every tail group.
///
/// For a degenerate smallest eigenvalue the check instead verifies that the
/// eigenspace contains a group-constant vector (smallest singular value of
/// the eigenspace basis with group means removed).
pub fn verify_property1(
    g: &Graph,
    uc: CenterNode,
    partition: &BlockPartition,
    alphas: &[f64],
    tolerance: f64,
) -> Result<bool> {
    let l = normalized_laplacian(g)?;
    let p = distance_matrix(g, uc)?;
    for &alpha in alphas {
        let m = m_alpha(&p, &l, alpha)?;
        let basis = sym_eig(m.matrix())?;
        let lambda_min = basis.eigenvalues[0];
        let multiplicity = basis
            .eigenvalues
            .iter()
            .take_while(|&&v| v - lambda_min < tol::EIG_MULTIPLICITY)
            .count();
        let ok = if multiplicity == 1 {
            let x = basis.vector(0);
            partition.groups().iter().all(|group| {
                let (min, max) = group
                    .iter()
                    .map(|&u| x[u])
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                        (lo.min(v), hi.max(v))
                    });
                max - min <= tolerance
            })
        } else {
            eigenspace_contains_group_constant(&basis, multiplicity, partition, tolerance)
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Does span(first `multiplicity` eigenvectors) intersect the subspace of
/// group-constant vectors? Tested via the smallest singular value of the
/// basis with group means removed.
fn eigenspace_contains_group_constant(
    basis: &crate::spectral::EigenBasis,
    multiplicity: usize,
    partition: &BlockPartition,
    tolerance: f64,
) -> bool {
    let n = partition.n();
    let mut residual = DMatrix::zeros(n, multiplicity);
    for c in 0..multiplicity {
        let col = basis.vector(c);
        let mut out = col.clone();
        for group in partition.groups() {
            let mean: f64 = group.iter().map(|&u| col[u]).sum::<f64>() / group.len() as f64;
            for &u in group {
                out[u] = col[u] - mean;
            }
        }
        residual.set_column(c, &out);
    }
    let gram = residual.tr_mul(&residual);
    match sym_eig(&gram) {
        Ok(eig) => eig.eigenvalues[0].max(0.0).sqrt() <= tolerance,
        Err(_) => false,
    }
}

/// Distinct components of a signal in the reduced form: one coordinate per
/// group, tail coordinates replicated over their nodes on expansion.
#[derive(Debug, Clone)]
pub struct ReducedSignal<'a> {
    pub coords: Vec<f64>,
    pub partition: &'a BlockPartition,
}

/// Expand reduced coordinates to the full node vector.
///
/// The coordinate of a size-k group is the value each of its k nodes takes,
/// so the expansion has unit norm iff `Σ kᵢ·coordsᵢ² = 1`.
pub fn expand_signal(r: &ReducedSignal) -> Result<Signal> {
    let partition = r.partition;
    if r.coords.len() != partition.reduced_dim() {
        return Err(Error::invalid_argument(format!(
            "expected {} reduced coordinates, got {}",
            partition.reduced_dim(),
            r.coords.len()
        )));
    }
    let weighted: f64 = partition
        .groups()
        .iter()
        .zip(&r.coords)
        .map(|(grp, c)| grp.len() as f64 * c * c)
        .sum();
    if (weighted - 1.0).abs() > tol::NORM {
        return Err(Error::invalid_argument(format!(
            "reduced coordinates expand to norm² = {weighted}, expected 1"
        )));
    }
    let mut full = DVector::zeros(partition.n());
    for (grp, &c) in partition.groups().iter().zip(&r.coords) {
        for &u in grp {
            full[u] = c;
        }
    }
    Signal::new(full)
}

/// Restrict a group-constant full signal back to reduced coordinates.
/// Exact inverse of [`expand_signal`] on its image.
pub fn restrict_signal<'a>(x: &Signal, partition: &'a BlockPartition) -> Result<ReducedSignal<'a>> {
    let mut coords = Vec::with_capacity(partition.reduced_dim());
    for grp in partition.groups() {
        let first = x.values()[grp[0]];
        if grp.iter().any(|&u| x.values()[u] != first) {
            return Err(Error::invalid_argument(
                "signal is not constant on a tail group",
            ));
        }
        coords.push(first);
    }
    Ok(ReducedSignal { coords, partition })
}

/// Sweep the reduced hypersphere with generalized spherical coordinates.
///
/// Each of the `M − 1` angles runs over `[0, 2π)` with the given step
/// (⌈2π/step⌉ samples per angle), an intentionally over-complete sweep.
/// Tail coordinates are scaled by `1/√k` so every emitted signal expands to
/// unit norm. The grid has `⌈2π/step⌉^(M−1)` samples, so this is only
/// practical for small reduced dimensions.
pub fn hypersphere_grid<'a>(
    partition: &'a BlockPartition,
    step: f64,
) -> Result<Vec<ReducedSignal<'a>>> {
    if step.is_nan() || step <= 0.0 {
        return Err(Error::invalid_argument(format!(
            "grid step must be positive, got {step}"
        )));
    }
    let m = partition.reduced_dim();
    let scale: Vec<f64> = partition
        .group_sizes()
        .iter()
        .map(|&k| 1.0 / (k as f64).sqrt())
        .collect();
    if m == 1 {
        return Ok(vec![ReducedSignal {
            coords: vec![scale[0]],
            partition,
        }]);
    }
    let count = (2.0 * std::f64::consts::PI / step).ceil() as usize;
    let angles = m - 1;
    let total = count.checked_pow(angles as u32).ok_or_else(|| {
        Error::invalid_argument(format!("grid of {count}^{angles} samples overflows"))
    })?;

    let mut out = Vec::with_capacity(total);
    let mut index = vec![0usize; angles];
    loop {
        let mut coords = vec![0.0f64; m];
        let mut sin_prod = 1.0;
        for (j, &i) in index.iter().enumerate() {
            let theta = i as f64 * step;
            coords[j] = sin_prod * theta.cos();
            sin_prod *= theta.sin();
        }
        coords[m - 1] = sin_prod;
        for (c, s) in coords.iter_mut().zip(&scale) {
            *c *= s;
        }
        out.push(ReducedSignal { coords, partition });

        // odometer increment over the angle indices
        let mut j = 0;
        loop {
            index[j] += 1;
            if index[j] < count {
                break;
            }
            index[j] = 0;
            j += 1;
            if j == angles {
                return Ok(out);
            }
        }
    }
}

/// Spread pairs for every signal of a reduced hypersphere grid.
#[derive(Debug, Clone)]
pub struct SampleCloud {
    pub points: Vec<SpreadPoint>,
    pub step: f64,
}

/// Evaluate the two spreads for every grid signal.
pub fn sample_cloud(
    g: &Graph,
    uc: CenterNode,
    partition: &BlockPartition,
    step: f64,
) -> Result<SampleCloud> {
    let l = normalized_laplacian(g)?;
    let p = distance_matrix(g, uc)?;
    let grid = hypersphere_grid(partition, step)?;
    let mut points = Vec::with_capacity(grid.len());
    for reduced in &grid {
        let x = expand_signal(reduced)?;
        let s = quadratic_form(x.values(), &l).max(0.0);
        let gs = graph_spread(&x, &p)?;
        points.push(SpreadPoint {
            s,
            g: gs,
            signal: Some(x),
            alpha: None,
            degenerate: false,
        });
    }
    Ok(SampleCloud { points, step })
}

/// Non-dominated subset of a cloud (minimizing both coordinates), sorted by
/// ascending spectral spread; exact (s, g) duplicates collapse to one point.
pub fn pareto_frontier(cloud: &SampleCloud) -> Result<Vec<SpreadPoint>> {
    if cloud.points.is_empty() {
        return Err(Error::invalid_argument("empty sample cloud"));
    }
    let mut order: Vec<usize> = (0..cloud.points.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (&cloud.points[i], &cloud.points[j]);
        a.s.total_cmp(&b.s).then(a.g.total_cmp(&b.g))
    });
    let mut frontier: Vec<SpreadPoint> = Vec::new();
    let mut best_g = f64::INFINITY;
    for i in order {
        let pt = &cloud.points[i];
        if pt.g < best_g {
            best_g = pt.g;
            frontier.push(pt.clone());
        }
    }
    Ok(frontier)
}
